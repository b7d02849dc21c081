use std::collections::BTreeMap;

use brieskorn_core::hyperbolic::{PolygonGroup, RelationKind, RelationReport, ReturnMap, Tolerances, HyperbolicError, TOLERANCE_PROFILE_ENV};
use brieskorn_core::orbits::{orbit_type, OrbitType};
use brieskorn_core::{
    BrieskornParams, ClosedFormAnswer, Comparison, GradedComplex, GradedDims, OrbitDescriptor, OrbitGenerator,
    OrbitKind, SeifertData,
};
use num_bigint_json::big;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use crate::RunConfig;

mod num_bigint_json {
    use num_traits::ToPrimitive;
    use serde_json::Value;

    /// A JSON number when it fits in `i64`, otherwise its decimal string.
    pub fn big<T: ToPrimitive + ToString>(v: &T) -> Value {
        match v.to_i64() {
            Some(x) => Value::from(x),
            None => Value::from(v.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ValidationError,
    Mismatch,
    NumericalFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Ok => 0,
            Self::ValidationError => 1,
            Self::Mismatch => 2,
            Self::NumericalFailure => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub mode: String,
    pub exponents: Vec<i64>,
    pub grading_floor: i64,
    pub action_bound: Option<String>,
    pub classes: Option<u64>,
    pub format: String,
    pub rng_seed: u64,
    pub samples: usize,
    pub finite_difference: bool,
    pub tolerance_profile: String,
    pub tolerance_overrides: BTreeMap<String, f64>,
    /// Effective tolerances after the profile and overrides.
    pub tolerances: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsSection {
    pub label: String,
    pub exponents: Vec<u64>,
    pub n: usize,
    pub hyperbolic_gap: String,
}

impl ParamsSection {
    pub fn new(params: &BrieskornParams) -> Self {
        Self {
            label: params.to_string(),
            exponents: params.exponents().to_vec(),
            n: params.len(),
            hyperbolic_gap: params.hyperbolic_gap().to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbifoldRow {
    pub j: usize,
    pub count: Value,
    pub multiplicity: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeifertSection {
    pub d: Value,
    pub m: Value,
    pub fiber_winding: Value,
    pub s: Option<String>,
    pub genus: Value,
    pub minima: Value,
    pub saddles: Value,
    pub euler_characteristic: Value,
    pub orbifold: Vec<OrbifoldRow>,
}

impl SeifertSection {
    pub fn new(data: &SeifertData) -> Self {
        let saddles = &data.minima_count - 1 + 2 * &data.genus;
        let chi = 2 - 2 * &data.genus;
        Self {
            d: big(&data.d),
            m: big(&data.m),
            fiber_winding: big(&data.fiber_winding),
            s: data.s.as_ref().map(ToString::to_string),
            genus: big(&data.genus),
            minima: big(&data.minima_count),
            saddles: big(&saddles),
            euler_characteristic: big(&chi),
            orbifold: data
                .orbifold
                .iter()
                .enumerate()
                .map(|(j, f)| OrbifoldRow {
                    j: j + 1,
                    count: big(&f.count),
                    multiplicity: big(&f.multiplicity),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorRow {
    pub label: String,
    pub kind: &'static str,
    pub j: Option<usize>,
    pub i: Option<usize>,
    pub index: Option<usize>,
    pub iterate: u64,
    pub cz: i64,
    pub grading: i64,
    /// Multiple of 2pi, as an exact fraction.
    pub action: String,
    pub fiber_class: Option<u64>,
    pub orbit_type: &'static str,
    pub good: bool,
}

impl GeneratorRow {
    pub fn new(g: &OrbitGenerator) -> Self {
        let (kind, j, i, index) = match g.kind {
            OrbitKind::Exceptional { j, i } => ("exceptional", Some(j), Some(i), None),
            OrbitKind::Saddle { index } => ("saddle", None, None, Some(index)),
            OrbitKind::Maximum => ("maximum", None, None, None),
        };
        let class = orbit_type(g);
        Self {
            label: g.descriptor().to_string(),
            kind,
            j,
            i,
            index,
            iterate: g.iterate,
            cz: g.cz,
            grading: g.grading,
            action: g.action.to_string(),
            fiber_class: g.fiber_class,
            orbit_type: match class.orbit_type {
                OrbitType::Elliptic => "elliptic",
                OrbitType::PositiveHyperbolic => "positive_hyperbolic",
                OrbitType::NegativeHyperbolic => "negative_hyperbolic",
            },
            good: class.good,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DifferentialEntry {
    pub source: String,
    pub target: String,
    pub coefficient: String,
}

/// Differential of one class from `grading` to `grading - 1`.
#[derive(Debug, Clone, Serialize)]
pub struct DifferentialBlock {
    pub class: String,
    pub grading: i64,
    pub rows: usize,
    pub cols: usize,
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub entries: Vec<DifferentialEntry>,
}

impl DifferentialBlock {
    pub fn from_complex(complex: &GradedComplex) -> Vec<Self> {
        let labels = |k: i64| -> Vec<String> {
            complex
                .generators
                .get(&k)
                .map(|gs| gs.iter().map(|g| g.descriptor().to_string()).collect())
                .unwrap_or_default()
        };
        complex
            .differentials
            .iter()
            .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
            .map(|(&k, m)| {
                let (sources, targets) = (labels(k), labels(k - 1));
                let entries = m
                    .nonzeros()
                    .map(|(r, c, v)| DifferentialEntry {
                        source: sources[c].clone(),
                        target: targets[r].clone(),
                        coefficient: v.to_string(),
                    })
                    .collect();
                Self {
                    class: complex.class.to_string(),
                    grading: k,
                    rows: m.rows(),
                    cols: m.cols(),
                    sources,
                    targets,
                    entries,
                }
            })
            .collect()
    }
}

fn dims_map(dims: &GradedDims) -> BTreeMap<i64, u64> {
    dims.as_map().clone()
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologySection {
    pub grading_floor: i64,
    pub fiber_classes: u64,
    pub classes_built: usize,
    pub dims: BTreeMap<i64, u64>,
    pub total: u64,
    pub series: String,
}

impl HomologySection {
    pub fn new(dims: &GradedDims, floor: i64, fiber_classes: u64, classes_built: usize) -> Self {
        Self {
            grading_floor: floor,
            fiber_classes,
            classes_built,
            dims: dims_map(dims),
            total: dims.total(),
            series: brieskorn_core::poincare_series(dims, floor).formatted,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceBlock {
    pub n: u64,
    pub dims: BTreeMap<i64, u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSection {
    pub grading_floor: i64,
    pub dims: BTreeMap<i64, u64>,
    pub total: u64,
    pub series: String,
    pub g_block: BTreeMap<i64, u64>,
    pub g_block_total: u64,
    pub surface_blocks: Vec<SurfaceBlock>,
}

impl OracleSection {
    pub fn new(answer: &ClosedFormAnswer, floor: i64) -> Self {
        Self {
            grading_floor: floor,
            dims: dims_map(&answer.combined),
            total: answer.combined.total(),
            series: brieskorn_core::poincare_series(&answer.combined, floor).formatted,
            g_block: dims_map(&answer.g_block),
            g_block_total: answer.g_block.total(),
            surface_blocks: answer
                .surface_blocks
                .iter()
                .map(|(n, d)| SurfaceBlock { n: *n, dims: dims_map(d) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MismatchRow {
    pub grading: i64,
    pub chain: u64,
    pub oracle: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonSection {
    pub grading_floor: i64,
    pub equal: bool,
    pub first_mismatch: Option<MismatchRow>,
}

impl ComparisonSection {
    pub fn new(c: &Comparison) -> Self {
        Self {
            grading_floor: c.floor,
            equal: c.equal,
            first_mismatch: c.first_mismatch.map(|m| MismatchRow {
                grading: m.grading,
                chain: m.chain,
                oracle: m.oracle,
            }),
        }
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationRow {
    pub name: String,
    pub kind: &'static str,
    /// `null` when the relation does not even hold combinatorially.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceRow {
    pub samples: usize,
    pub jacobian: &'static str,
    pub worst_lambda: f64,
    pub worst_frame: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeometrySection {
    pub vertices: Vec<[f64; 2]>,
    pub prescribed_angles: Vec<f64>,
    pub measured_angles: Vec<f64>,
    pub max_angle_error: f64,
    pub area: f64,
    pub expected_area: f64,
    pub area_error: f64,
    pub angle_tolerance: f64,
    pub area_tolerance: f64,
    pub sample_points: usize,
    pub relations: Vec<RelationRow>,
    pub invariance: InvarianceRow,
    pub passed: bool,
}

impl GeometrySection {
    pub fn new(
        group: &PolygonGroup,
        relations: &RelationReport,
        tol: &Tolerances,
        config: &RunConfig,
        worst_lambda: f64,
        worst_frame: f64,
    ) -> Self {
        let prescribed = group.prescribed_angles();
        let measured = group.measured_angles();
        let max_angle_error = prescribed
            .iter()
            .zip(&measured)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let (area, expected_area) = (group.area(), group.expected_area());
        let invariance = InvarianceRow {
            samples: config.samples,
            jacobian: if config.finite_difference { "finite_difference" } else { "analytic" },
            worst_lambda,
            worst_frame,
            tolerance: tol.invariance,
            passed: worst_lambda.max(worst_frame) <= tol.invariance,
        };
        let relation_rows: Vec<RelationRow> = relations
            .entries
            .iter()
            .map(|e| RelationRow {
                name: e.name.clone(),
                kind: match e.kind {
                    RelationKind::Matrix => "matrix",
                    RelationKind::Lifted => "lifted",
                },
                residual: finite(e.residual),
                tolerance: e.tolerance,
                passed: e.passed(),
            })
            .collect();
        let area_error = (area - expected_area).abs();
        let passed = relations.passed() && max_angle_error <= tol.angle && area_error <= tol.area && invariance.passed;
        Self {
            vertices: group.vertices.iter().map(|v| [v.re, v.im]).collect(),
            prescribed_angles: prescribed,
            measured_angles: measured,
            max_angle_error,
            area,
            expected_area,
            area_error,
            angle_tolerance: tol.angle,
            area_tolerance: tol.area,
            sample_points: relations.sample_points,
            relations: relation_rows,
            invariance,
            passed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RotationRow {
    pub epsilon: f64,
    pub period: f64,
    pub analytic_angle: f64,
    pub ode_angle: f64,
    pub relative_error: f64,
    pub determinant: f64,
    pub matrix_error: f64,
    pub steps: usize,
    pub passed: bool,
}

impl RotationRow {
    pub fn new(epsilon: f64, r: &ReturnMap, tol: &Tolerances) -> Self {
        Self {
            epsilon,
            period: r.period,
            analytic_angle: r.analytic_angle,
            ode_angle: r.rotation_angle,
            relative_error: r.relative_error(),
            determinant: r.determinant,
            matrix_error: r.matrix_error(),
            steps: r.steps,
            passed: r.relative_error() <= tol.ode_relative && (r.determinant - 1.0).abs() <= tol.determinant,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CzRow {
    pub orbit: String,
    pub action: String,
    pub epsilon: f64,
    pub period: f64,
    pub rotation_angle: f64,
    pub cz_measured: Option<i64>,
    pub cz_formula: i64,
    pub error: Option<String>,
    pub passed: bool,
}

impl CzRow {
    pub fn new(
        orbit: &OrbitDescriptor,
        action: &BigRational,
        epsilon: f64,
        period: f64,
        r: &ReturnMap,
        measured: Result<i64, HyperbolicError>,
        expected: i64,
    ) -> Self {
        let (cz_measured, error) = match measured {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Self {
            orbit: orbit.to_string(),
            action: action.to_string(),
            epsilon,
            period,
            rotation_angle: r.rotation_angle,
            passed: cz_measured == Some(expected),
            cz_measured,
            cz_formula: expected,
            error,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DynamicsSection {
    pub rotation: Vec<RotationRow>,
    pub cz: Vec<CzRow>,
    pub contraction_worst: f64,
    pub contraction_tolerance: f64,
    pub passed: bool,
}

impl DynamicsSection {
    pub(crate) fn finish(&mut self) {
        self.passed = self.rotation.iter().all(|r| r.passed)
            && self.cz.iter().all(|r| r.passed)
            && self.contraction_worst <= self.contraction_tolerance;
    }

    pub(crate) fn failure_summary(&self) -> String {
        let mut parts = Vec::new();
        for r in self.rotation.iter().filter(|r| !r.passed) {
            parts.push(format!("rotation eps={} T={}: rel {:e}", r.epsilon, r.period, r.relative_error));
        }
        for r in self.cz.iter().filter(|r| !r.passed) {
            parts.push(format!(
                "{}: measured {:?}, formula {}{}",
                r.orbit,
                r.cz_measured,
                r.cz_formula,
                r.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default()
            ));
        }
        if self.contraction_worst > self.contraction_tolerance {
            parts.push(format!("contraction residual {:e}", self.contraction_worst));
        }
        parts.join("; ")
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Verification {
    pub geometry: Option<GeometrySection>,
    pub dynamics: Option<DynamicsSection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorEntry {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub status: Status,
    pub exit_code: i32,
    pub input: InputEcho,
    pub params: Option<ParamsSection>,
    pub seifert: Option<SeifertSection>,
    pub generators: Vec<GeneratorRow>,
    pub differentials: Vec<DifferentialBlock>,
    pub homology: Option<HomologySection>,
    pub oracle: Option<OracleSection>,
    pub comparison: Option<ComparisonSection>,
    pub verification: Verification,
    pub errors: Vec<ErrorEntry>,
}

impl Report {
    pub fn new(config: &RunConfig, tol: Option<&Tolerances>) -> Self {
        let profile = config
            .tolerance_profile
            .clone()
            .or_else(|| std::env::var(TOLERANCE_PROFILE_ENV).ok().filter(|s| !s.is_empty()))
            .unwrap_or_else(|| "default".to_string());
        Self {
            status: Status::Ok,
            exit_code: 0,
            input: InputEcho {
                mode: config.mode.name().to_string(),
                exponents: config.exponents.clone(),
                grading_floor: config.grading_floor,
                action_bound: config.action_bound.as_ref().map(ToString::to_string),
                classes: config.classes,
                format: config.format.name().to_string(),
                rng_seed: config.rng_seed,
                samples: config.samples,
                finite_difference: config.finite_difference,
                tolerance_profile: profile,
                tolerance_overrides: config.tolerances.clone(),
                tolerances: tol.map(|t| t.entries().into_iter().map(|(k, v)| (k.to_string(), v)).collect()),
            },
            params: None,
            seifert: None,
            generators: Vec::new(),
            differentials: Vec::new(),
            homology: None,
            oracle: None,
            comparison: None,
            verification: Verification::default(),
            errors: Vec::new(),
        }
    }

    pub fn fail(&mut self, status: Status, kind: &str, message: String) {
        self.status = status;
        self.exit_code = status.exit_code();
        self.errors.push(ErrorEntry {
            kind: kind.to_string(),
            message,
        });
    }
}
