//! Graded homology over the rationals and its presentation as a series.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::matrix::RationalMatrix;
use crate::orbits::GradedComplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("differentials do not compose to zero at grading {grading}")]
    InconsistentComplex { grading: i64 },
    #[error("differential at grading {grading} is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        grading: i64,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
}

/// Finitely supported map from grading to dimension. Absent keys are zero;
/// zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GradedDims(BTreeMap<i64, u64>);

impl GradedDims {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, grading: i64) -> u64 {
        self.0.get(&grading).copied().unwrap_or(0)
    }

    pub fn add(&mut self, grading: i64, dim: u64) {
        if dim > 0 {
            *self.0.entry(grading).or_insert(0) += dim;
        }
    }

    pub fn merge(&mut self, other: &GradedDims) {
        for (&k, &v) in &other.0 {
            self.add(k, v);
        }
    }

    /// Only the gradings `>= floor`.
    pub fn truncated(&self, floor: i64) -> Self {
        Self(self.0.range(floor..).map(|(&k, &v)| (k, v)).collect())
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, u64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.iter()
            .map(|(k, v)| if k.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) })
            .sum()
    }

    pub fn as_map(&self) -> &BTreeMap<i64, u64> {
        &self.0
    }
}

impl FromIterator<(i64, u64)> for GradedDims {
    fn from_iter<I: IntoIterator<Item = (i64, u64)>>(iter: I) -> Self {
        let mut dims = Self::new();
        for (k, v) in iter {
            dims.add(k, v);
        }
        dims
    }
}

/// Homology of a complex given as chain dimensions and differentials
/// (`differentials[k]: C_k -> C_{k-1}`; missing matrices are zero).
pub fn homology_from_parts(
    chain_dims: &BTreeMap<i64, usize>,
    differentials: &BTreeMap<i64, RationalMatrix>,
) -> Result<GradedDims, HomologyError> {
    let dim = |k: i64| chain_dims.get(&k).copied().unwrap_or(0);
    for (&k, matrix) in differentials {
        if matrix.rows() != dim(k - 1) || matrix.cols() != dim(k) {
            return Err(HomologyError::ShapeMismatch {
                grading: k,
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected_rows: dim(k - 1),
                expected_cols: dim(k),
            });
        }
        if let Some(lower) = differentials.get(&(k - 1)) {
            if !(lower * matrix).is_zero() {
                return Err(HomologyError::InconsistentComplex { grading: k });
            }
        }
    }
    let ranks: BTreeMap<i64, usize> = differentials.iter().map(|(&k, m)| (k, m.rank())).collect();
    let rank = |k: i64| ranks.get(&k).copied().unwrap_or(0);
    Ok(chain_dims
        .iter()
        .map(|(&k, &n)| (k, (n - rank(k) - rank(k + 1)) as u64))
        .collect())
}

pub fn graded_homology(complex: &GradedComplex) -> Result<GradedDims, HomologyError> {
    homology_from_parts(&complex.chain_dims(), &complex.differentials)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareSeries {
    /// `(grading, dimension)`, highest grading first, zero terms omitted.
    pub terms: Vec<(i64, u64)>,
    /// Polynomial in `t` with exponent `-grading`, e.g. `10*t^2 + 11*t^4`.
    pub formatted: String,
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formatted)
    }
}

pub fn poincare_series(dims: &GradedDims, floor: i64) -> PoincareSeries {
    let terms: Vec<(i64, u64)> = dims.truncated(floor).iter().rev().collect();
    let formatted = if terms.is_empty() {
        "0".to_string()
    } else {
        terms
            .iter()
            .map(|&(k, v)| match -k {
                0 => format!("{v}"),
                1 => format!("{v}*t"),
                e => format!("{v}*t^{e}"),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    PoincareSeries { terms, formatted }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differential_keeps_chain_dims() {
        let chain = BTreeMap::from([(-4, 3usize), (-3, 2), (-2, 1)]);
        let diffs = BTreeMap::from([
            (-3, RationalMatrix::zeros(3, 2)),
            (-2, RationalMatrix::zeros(2, 1)),
        ]);
        let h = homology_from_parts(&chain, &diffs).unwrap();
        assert_eq!(h, GradedDims::from_iter([(-4, 3), (-3, 2), (-2, 1)]));
    }

    #[test]
    fn detects_nonzero_square() {
        let chain = BTreeMap::from([(0, 1usize), (1, 1), (2, 1)]);
        let diffs = BTreeMap::from([
            (1, RationalMatrix::from_rows(&[vec![1]])),
            (2, RationalMatrix::from_rows(&[vec![1]])),
        ]);
        assert_eq!(
            homology_from_parts(&chain, &diffs),
            Err(HomologyError::InconsistentComplex { grading: 2 })
        );
    }

    #[test]
    fn detects_bad_shape() {
        let chain = BTreeMap::from([(0, 2usize), (1, 1)]);
        let diffs = BTreeMap::from([(1, RationalMatrix::zeros(3, 1))]);
        assert!(matches!(
            homology_from_parts(&chain, &diffs),
            Err(HomologyError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn series_formatting() {
        let dims = GradedDims::from_iter([(-2, 10), (-4, 11), (-6, 11), (-8, 11)]);
        let s = poincare_series(&dims, -6);
        assert_eq!(s.formatted, "10*t^2 + 11*t^4 + 11*t^6");
        assert_eq!(s.terms, vec![(-2, 10), (-4, 11), (-6, 11)]);
        assert_eq!(poincare_series(&GradedDims::new(), -10).formatted, "0");
        let odd = GradedDims::from_iter([(0, 1), (-1, 2)]);
        assert_eq!(poincare_series(&odd, -5).formatted, "1 + 2*t");
    }

    #[test]
    fn graded_dims_drop_zero_entries() {
        let mut dims = GradedDims::new();
        dims.add(-3, 0);
        assert!(dims.is_empty());
        dims.add(-3, 2);
        dims.add(-2, 1);
        assert_eq!(dims.euler_characteristic(), -1);
        assert_eq!(dims.total(), 3);
    }
}
