//! Chain-level homology: enumerate generators, build the complex of each
//! free homotopy class, and take homology class by class.

use thiserror::Error;

use crate::arithmetic::SeifertData;
use crate::homology::{graded_homology, GradedDims, HomologyError};
use crate::orbits::{build_complex, non_fiber_classes, GradedComplex, HomotopyClass, OrbitError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("{class}: {source}")]
    Homology {
        class: HomotopyClass,
        source: HomologyError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassHomology {
    pub complex: GradedComplex,
    pub homology: GradedDims,
}

impl ClassHomology {
    pub fn chain_dims(&self) -> GradedDims {
        self.complex
            .chain_dims()
            .into_iter()
            .map(|(k, v)| (k, v as u64))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainHomology {
    pub floor: i64,
    /// Fiber classes `1..=fiber_classes` were built.
    pub fiber_classes: u64,
    pub classes: Vec<ClassHomology>,
    /// Sum over classes, truncated at the floor.
    pub dims: GradedDims,
}

/// Fiber classes needed so nothing at or above `floor` is missed:
/// `ceil(-floor * m / 2d) + 1`.
pub fn required_fiber_classes(data: &SeifertData, floor: i64) -> u64 {
    let depth = (-floor).max(0) as u64;
    let step = 2 * data.winding() as u64;
    depth.div_ceil(step) + 1
}

pub fn chain_homology(
    data: &SeifertData,
    floor: i64,
    fiber_classes: Option<u64>,
) -> Result<ChainHomology, PipelineError> {
    let fiber_classes = fiber_classes.unwrap_or_else(|| required_fiber_classes(data, floor));
    let classes: Vec<HomotopyClass> = non_fiber_classes(data, floor)
        .into_iter()
        .chain((1..=fiber_classes).map(HomotopyClass::Fiber))
        .collect();
    let mut out = Vec::with_capacity(classes.len());
    let mut dims = GradedDims::new();
    for class in classes {
        let complex = build_complex(data, class)?;
        let homology = graded_homology(&complex)
            .map_err(|source| PipelineError::Homology { class, source })?;
        dims.merge(&homology.truncated(floor));
        out.push(ClassHomology { complex, homology });
    }
    Ok(ChainHomology {
        floor,
        fiber_classes,
        classes: out,
        dims,
    })
}
