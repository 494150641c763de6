use num_rational::Ratio;

use super::OrbifoldError;

/// Exact rational in lowest terms with positive denominator. 128-bit parts
/// leave room for denominators up to the lcm bound on cone orders.
pub type Rational = Ratio<i128>;

/// Renders `p/q`, dropping the denominator when it is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, OrbifoldError> {
    let s = s.trim();
    let bad = || OrbifoldError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => s.parse::<i128>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rational::new(6, -4);
        assert_eq!((*r.numer(), *r.denom()), (-3, 2));
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&Rational::from_integer(4)), "4");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["1/30", "-7/3", "5", "0"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
