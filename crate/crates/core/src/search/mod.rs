//! Exhaustive search for maximum frameproof codes and cover-free families,
//! and the length thresholds where they first exceed `n`.

mod codes;
pub mod engine;
mod families;
pub mod group;
mod thresholds;

pub use codes::{codes_of_size, enumerate_optimal, max_code};
pub use families::{cover_free_families_of_size, max_cover_free};
pub use thresholds::{check_threshold_relations, n_threshold, ThresholdKind, ThresholdOutcome, ThresholdValues};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of visited nodes.
    pub budget: u64,
    /// Stop as soon as the incumbent meets the best closed-form bound.
    /// Off by default so that searches stay independent of the bounds.
    pub use_bounds: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 50_000_000,
            use_bounds: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult<T> {
    /// Exact when `certified`, otherwise the best size found.
    pub max_size: usize,
    /// Every optimum up to equivalence, when requested.
    pub optima: Option<Vec<T>>,
    pub nodes: u64,
    /// The search space was exhausted.
    pub certified: bool,
    /// One object of size `max_size`.
    pub incumbent: Option<T>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{Code, Mode};

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn code_maxima() {
        for (n, t, want) in [(3, 3, 3), (3, 2, 4), (2, 3, 2)] {
            let r = max_code(n, t, 2, Mode::Wide, &opts()).unwrap();
            assert!(r.certified);
            assert_eq!(r.max_size, want, "n={n} t={t}");
        }
    }

    #[test]
    fn optimal_classes() {
        let r = enumerate_optimal(3, 3, 2, Mode::Wide, &opts()).unwrap();
        let optima = r.optima.unwrap();
        assert_eq!(optima.len(), 1);
        assert!(optima[0].is_permutation_code());

        let ones = Code::new(2, 3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        let key = ones.canonical(crate::CanonLevel::Symbol).code;
        let r = enumerate_optimal(3, 2, 2, Mode::Wide, &opts()).unwrap();
        assert_eq!(r.max_size, 4);
        assert!(r.optima.unwrap().contains(&key));

        // the standard form with rows (1 0) and (0 0)
        let small = Code::from_matrix(2, &[vec![1, 0], vec![0, 0]]).unwrap();
        let key = small.canonical(crate::CanonLevel::Symbol).code;
        let r = enumerate_optimal(2, 3, 2, Mode::Wide, &opts()).unwrap();
        assert!(r.optima.unwrap().contains(&key));
    }

    #[test]
    fn cover_free_maxima() {
        for (n, t, want) in [(4, 1, 6), (7, 3, 7), (3, 2, 3)] {
            let r = max_cover_free(n, t, false, &opts()).unwrap();
            assert!(r.certified);
            assert_eq!(r.max_size, want, "n={n} t={t}");
        }
    }

    #[test]
    fn thresholds() {
        assert_eq!(
            n_threshold(ThresholdKind::NStar, 1, 2, 6, &opts()).unwrap(),
            ThresholdOutcome::Found { n: 4 }
        );
        assert_eq!(
            n_threshold(ThresholdKind::NQ, 2, 2, 4, &opts()).unwrap(),
            ThresholdOutcome::Found { n: 3 }
        );
        assert_eq!(
            n_threshold(ThresholdKind::NStar, 2, 2, 3, &opts()).unwrap(),
            ThresholdOutcome::NotFound { cap: 3 }
        );
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tiny = SearchOptions {
            budget: 3,
            use_bounds: false,
        };
        let r = max_code(4, 2, 3, Mode::Narrow, &tiny).unwrap();
        assert!(!r.certified);
        assert!(r.incumbent.is_some());
        assert!(n_threshold(ThresholdKind::NQ, 2, 3, 4, &tiny).is_err());
    }

    #[test]
    fn bound_ceiling_stops_early() {
        let with = SearchOptions {
            use_bounds: true,
            ..opts()
        };
        let a = max_code(3, 3, 3, Mode::Wide, &with).unwrap();
        let b = max_code(3, 3, 3, Mode::Wide, &opts()).unwrap();
        assert_eq!(a.max_size, b.max_size);
        assert!(a.nodes <= b.nodes);
    }
}
