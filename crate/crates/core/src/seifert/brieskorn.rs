use num_integer::Integer;

use super::{SeifertError, SeifertManifold};

/// Seifert invariants of the Brieskorn sphere `Sigma(a_1, ..., a_n)`: genus 0
/// base, one exceptional fiber of multiplicity `a_i` per exponent, with
/// `(a / a_i) beta_i = 1 mod a_i` and `b + sum beta_i / a_i = 1 / a`, so the
/// Euler number is `-1 / (a_1 ... a_n)`.
pub fn brieskorn_to_seifert(exponents: &[u32]) -> Result<SeifertManifold, SeifertError> {
    let invalid = || SeifertError::InvalidBrieskorn(exponents.to_vec());
    if exponents.len() < 3 || exponents.iter().any(|&a| a < 2) {
        return Err(invalid());
    }
    for (i, &a) in exponents.iter().enumerate() {
        if exponents[i + 1..].iter().any(|&c| a.gcd(&c) != 1) {
            return Err(invalid());
        }
    }
    let product = exponents
        .iter()
        .try_fold(1i64, |acc, &a| acc.checked_mul(a as i64))
        .ok_or_else(invalid)?;

    let mut fibers = Vec::with_capacity(exponents.len());
    let mut weighted = 0i64;
    for &a in exponents {
        let a = a as i64;
        let cofactor = product / a;
        let beta = (1..a).find(|beta| (cofactor % a) * beta % a == 1).expect("cofactor is a unit mod a_i");
        weighted += beta * cofactor;
        fibers.push((a, beta));
    }
    // b * product + sum beta_i * product / a_i = 1
    let b = (1 - weighted) / product;
    debug_assert_eq!(b * product + weighted, 1);
    SeifertManifold::new(0, b, &fibers)
}
