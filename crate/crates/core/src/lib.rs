//! Cylindrical contact homology of Brieskorn manifolds `Σ(a_1, ..., a_n)`.
//!
//! The crate covers the arithmetic invariants, the Reeb orbit generators
//! with their gradings, the filtered chain complexes and their exact
//! homology over `Q`, a closed-form oracle for the graded dimensions, and
//! floating-point checks of the hyperbolic model and the perturbed dynamics.

pub mod arithmetic;
pub mod homology;
pub mod hyperbolic;
pub mod matrix;
pub mod oracle;
pub mod orbits;
pub mod pipeline;

pub use arithmetic::{seifert_data, validate_params, ArithmeticError, BrieskornParams, OrbifoldFamily, SeifertData};
pub use homology::{graded_homology, poincare_series, GradedDims, HomologyError, PoincareSeries};
pub use matrix::RationalMatrix;
pub use oracle::{closed_form_answer, closed_form_homology, compare, ClosedFormAnswer, Comparison, Mismatch, OracleError};
pub use orbits::{
    build_complex, enumerate_generators, GeneratorFilter, GradedComplex, HomotopyClass, OrbitDescriptor,
    OrbitError, OrbitGenerator, OrbitKind,
};
pub use pipeline::{chain_homology, ChainHomology, ClassHomology, PipelineError};
