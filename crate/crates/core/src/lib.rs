//! Existence and bookkeeping for Z2-harmonic spinors and 1-forms on
//! Seifert-fibered 3-manifolds, connected-sum surgery counts, and numerical
//! models of the neck region where the singular set is resolved.

pub mod neck;
pub mod orbifold;
pub mod report;
pub mod seifert;
pub mod surgery;
