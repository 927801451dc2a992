use serde::Serialize;

use crate::dictionaries::{Admitter, Dictionary};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spaces::{sphere_stream, split_seed};

/// Augmentations after which certification gives up.
pub const MAX_AUGMENTATIONS: usize = 100_000;

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct MaximalityReport<T> {
    /// A run of `n` consecutive samples produced no counterexample.
    pub passed: bool,
    pub augmentations: usize,
    pub samples_drawn: u64,
    pub seed: u64,
    pub dictionary: Dictionary<T>,
}

/// Empirical maximality: every sampled unit `x` must have some `g` with
/// `|F_x(g)| > μ`. Counterexamples are admitted and the count of clean
/// samples restarts; success needs `n` clean samples in a row.
///
/// A counterexample that violates the coherence bound in the other direction
/// (`|F_g(x)| > μ`) cannot be admitted and is an [`Error::Unrepairable`].
pub fn certify_maximality<T: Scalar>(
    dict: &Dictionary<T>,
    mu: T,
    n: usize,
    seed: u64,
) -> Result<MaximalityReport<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    if !(mu > T::zero() && mu < T::one()) {
        return Err(Error::InvalidParameter(format!("mu must lie in (0, 1), got {mu}")));
    }
    let mut state = Admitter::new(dict.clone(), mu)?;
    let mut clean = 0usize;
    let mut drawn = 0u64;
    let mut augmentations = 0usize;
    for x in sphere_stream(dict.space(), split_seed(seed, 5)) {
        drawn += 1;
        let fx = state.functional_of(&x);
        if state.max_functional(&fx) > mu {
            clean += 1;
            if clean == n {
                break;
            }
            continue;
        }
        if !state.admissible(&x, &fx) {
            return Err(Error::Unrepairable(format!(
                "sample {drawn} is uncovered (max |F_x(g)| <= {mu}) but cannot be admitted"
            )));
        }
        state.admit(x, fx);
        augmentations += 1;
        clean = 0;
        if augmentations == MAX_AUGMENTATIONS {
            break;
        }
    }
    Ok(MaximalityReport {
        passed: clean == n,
        augmentations,
        samples_drawn: drawn,
        seed,
        dictionary: state.dict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionaries::greedy_maximal_dictionary;
    use crate::frames::etf_of_dimension;
    use crate::spaces::LpSpace;

    #[test]
    fn etf_is_maximal_at_one_eighth() {
        let dict = etf_of_dimension::<f64>(3).unwrap().to_dictionary().unwrap();
        let r = certify_maximality(&dict, 0.125, 10_000, 1).unwrap();
        assert!(r.passed);
        assert_eq!(r.augmentations, 0);
        assert_eq!(r.dictionary.len(), 4);
    }

    #[test]
    fn single_vector_gets_augmented() {
        let l2 = LpSpace::<f64>::euclidean(2).unwrap();
        let dict = Dictionary::new(l2, vec![vec![1.0, 0.0]]).unwrap();
        let r = certify_maximality(&dict, 0.5, 100, 1).unwrap();
        assert!(r.augmentations >= 1);
        assert!(r.dictionary.len() > 1);
    }

    #[test]
    fn greedy_needs_few_augmentations() {
        let l2 = LpSpace::<f64>::euclidean(8).unwrap();
        let dict = greedy_maximal_dictionary(&l2, 0.4, 7, 2000).unwrap();
        let r = certify_maximality(&dict, 0.4, 10_000, 7).unwrap();
        assert!(r.passed);
        assert!(r.dictionary.len() >= dict.len());
    }

    #[test]
    fn parameter_checks() {
        let l2 = LpSpace::<f64>::euclidean(2).unwrap();
        let dict = Dictionary::new(l2, vec![vec![1.0, 0.0]]).unwrap();
        assert!(certify_maximality(&dict, 0.5, 0, 1).is_err());
        assert!(certify_maximality(&dict, 1.5, 10, 1).is_err());
    }
}
