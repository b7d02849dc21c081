//! Closed-form graded dimensions of the contact homology, evaluated by
//! direct enumeration of the grading formula, and the comparison harness
//! against the chain-level computation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arithmetic::SeifertData;
use crate::homology::GradedDims;
use crate::pipeline::{required_fiber_classes, ChainHomology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("chain side built {built} fiber classes but floor {floor} needs {required}")]
    IncompleteWindow { floor: i64, built: u64, required: u64 },
    #[error("chain side was truncated at {chain}, comparison requested at {requested}")]
    FloorMismatch { chain: i64, requested: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormAnswer {
    /// Exceptional iterates `1 <= k < t_j` (one fundamental window).
    pub g_block: GradedDims,
    /// `(n, H_*(S) shifted)`: dims `1, 2g, 1` at `-2nd/m - 2, -2nd/m - 1, -2nd/m`.
    pub surface_blocks: Vec<(u64, GradedDims)>,
    /// Everything at gradings `>=` the floor.
    pub combined: GradedDims,
}

fn exceptional_grading(k: u64, winding: &BigInt, t: &BigInt) -> i64 {
    let turns = (BigInt::from(k) * winding).div_floor(t);
    -2 * turns.to_i64().expect("grading does not fit in i64") - 2
}

pub fn closed_form_answer(data: &SeifertData, grading_floor: i64) -> ClosedFormAnswer {
    let winding = &data.d / &data.m;
    let genus = data.genus.to_u64().expect("genus does not fit in u64");
    let mut g_block = GradedDims::new();
    let mut combined = GradedDims::new();

    for family in &data.orbifold {
        let copies = family.count.to_u64().expect("orbifold count does not fit in u64");
        let t = &family.multiplicity;
        let t_small = t.to_u64().expect("multiplicity does not fit in u64");
        for k in 1..t_small {
            g_block.add(exceptional_grading(k, &winding, t), copies);
        }
        // gradings only decrease with k, so stop at the first one below the floor
        for k in 1.. {
            let grading = exceptional_grading(k, &winding, t);
            if grading < grading_floor {
                break;
            }
            if k % t_small != 0 {
                combined.add(grading, copies);
            }
        }
    }

    let mut surface_blocks = Vec::new();
    let w = winding.to_i64().expect("d/m does not fit in i64");
    for n in 1u64.. {
        let top = -2 * n as i64 * w;
        if top < grading_floor {
            break;
        }
        let block = GradedDims::from_iter([(top - 2, 1), (top - 1, 2 * genus), (top, 1)]);
        combined.merge(&block.truncated(grading_floor));
        surface_blocks.push((n, block));
    }

    ClosedFormAnswer {
        g_block,
        surface_blocks,
        combined,
    }
}

pub fn closed_form_homology(data: &SeifertData, grading_floor: i64) -> GradedDims {
    closed_form_answer(data, grading_floor).combined
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub grading: i64,
    pub chain: u64,
    pub oracle: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub floor: i64,
    pub equal: bool,
    /// Highest grading where the two sides differ.
    pub first_mismatch: Option<Mismatch>,
}

/// Grading-by-grading comparison at every grading `>= floor`.
pub fn compare_dims(chain: &GradedDims, oracle: &GradedDims, floor: i64) -> Comparison {
    let mut gradings: Vec<i64> = chain
        .truncated(floor)
        .iter()
        .chain(oracle.truncated(floor).iter())
        .map(|(k, _)| k)
        .collect();
    gradings.sort_unstable_by(|a, b| b.cmp(a));
    gradings.dedup();
    let first_mismatch = gradings
        .into_iter()
        .find(|&k| chain.get(k) != oracle.get(k))
        .map(|k| Mismatch {
            grading: k,
            chain: chain.get(k),
            oracle: oracle.get(k),
        });
    Comparison {
        floor,
        equal: first_mismatch.is_none(),
        first_mismatch,
    }
}

pub fn compare(
    data: &SeifertData,
    chain: &ChainHomology,
    oracle: &GradedDims,
    floor: i64,
) -> Result<Comparison, OracleError> {
    if chain.floor > floor {
        return Err(OracleError::FloorMismatch {
            chain: chain.floor,
            requested: floor,
        });
    }
    let required = required_fiber_classes(data, floor);
    if chain.fiber_classes < required {
        return Err(OracleError::IncompleteWindow {
            floor,
            built: chain.fiber_classes,
            required,
        });
    }
    Ok(compare_dims(&chain.dims, oracle, floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{seifert_data, validate_params};
    use crate::pipeline::chain_homology;

    fn data(exponents: &[i64]) -> SeifertData {
        seifert_data(&validate_params(exponents).unwrap())
    }

    #[test]
    fn closed_form_237() {
        let dims = closed_form_homology(&data(&[2, 3, 7]), -6);
        assert_eq!(dims, GradedDims::from_iter([(-2, 10), (-4, 11), (-6, 11)]));
    }

    #[test]
    fn closed_form_2_3_11() {
        let d = data(&[2, 3, 11]);
        let answer = closed_form_answer(&d, -6);
        assert_eq!(answer.combined, GradedDims::from_iter([(-2, 2), (-4, 3), (-6, 3)]));
        assert_eq!(
            answer.g_block,
            GradedDims::from_iter([(-2, 2), (-4, 3), (-6, 3), (-8, 3), (-10, 2)])
        );
        assert_eq!(answer.g_block.total(), 13);
    }

    #[test]
    fn closed_form_22333_has_only_surface_blocks() {
        let answer = closed_form_answer(&data(&[2, 2, 3, 3, 3]), -30);
        assert!(answer.g_block.is_empty());
        let mut expected = GradedDims::new();
        for n in 1..=2i64 {
            expected.add(-12 * n - 2, 1);
            expected.add(-12 * n - 1, 20);
            expected.add(-12 * n, 1);
        }
        assert_eq!(answer.combined, expected);
        assert_eq!(answer.surface_blocks.len(), 2);
    }

    #[test]
    fn identical_inputs_compare_equal() {
        let dims = GradedDims::from_iter([(-2, 4), (-3, 1)]);
        let c = compare_dims(&dims, &dims, -10);
        assert!(c.equal);
        assert_eq!(c.first_mismatch, None);
    }

    #[test]
    fn perturbed_oracle_is_caught() {
        let d = data(&[2, 3, 7]);
        let chain = chain_homology(&d, -10, Some(6)).unwrap();
        let mut oracle = closed_form_homology(&d, -10);
        assert!(compare(&d, &chain, &oracle, -10).unwrap().equal);
        oracle.add(-6, 1);
        let c = compare(&d, &chain, &oracle, -10).unwrap();
        assert_eq!(
            c.first_mismatch,
            Some(Mismatch {
                grading: -6,
                chain: 11,
                oracle: 12
            })
        );
    }

    #[test]
    fn incomplete_window_is_an_error() {
        let d = data(&[2, 3, 7]);
        let chain = chain_homology(&d, -10, Some(3)).unwrap();
        let oracle = closed_form_homology(&d, -10);
        assert_eq!(
            compare(&d, &chain, &oracle, -10),
            Err(OracleError::IncompleteWindow {
                floor: -10,
                built: 3,
                required: 6
            })
        );
    }
}
