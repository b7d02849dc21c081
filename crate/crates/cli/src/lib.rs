//! Report generation behind the `brieskorn` binary.
//!
//! [`run`] takes a [`RunConfig`], executes one mode and returns a [`Report`]
//! with its exit code; [`render`] turns the report into JSON, TSV or text.

mod render;
mod report;

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use brieskorn_core::hyperbolic::{
    build_polygon_group, contact_invariance_residual, contraction_residual, linearized_return_map,
    relation_report, sampling, JacobianMethod, LocalModel, Tolerances,
};
use brieskorn_core::orbits::conley_zehnder;
use brieskorn_core::{
    chain_homology, closed_form_answer, compare, enumerate_generators, poincare_series, seifert_data,
    validate_params, GeneratorFilter, OracleError, OrbitDescriptor, SeifertData,
};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

pub use render::{render, Format};
pub use report::*;

/// Largest number of orbifold points accepted for chain-level modes.
pub const MAX_MINIMA: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    Invariants,
    Generators,
    Complex,
    Homology,
    Compare,
    VerifyGeometry,
    VerifyDynamics,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Invariants => "invariants",
            Self::Generators => "generators",
            Self::Complex => "complex",
            Self::Homology => "homology",
            Self::Compare => "compare",
            Self::VerifyGeometry => "verify-geometry",
            Self::VerifyDynamics => "verify-dynamics",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub exponents: Vec<i64>,
    pub mode: Mode,
    pub grading_floor: i64,
    /// Action bound as a multiple of 2pi; replaces the grading floor for `generators`.
    pub action_bound: Option<BigRational>,
    /// Fiber classes to build; by default just enough for the floor.
    pub classes: Option<u64>,
    pub format: Format,
    /// Profile name; `None` reads the environment, then falls back to `default`.
    pub tolerance_profile: Option<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub rng_seed: u64,
    /// Random (element, point) pairs for the invariance check.
    pub samples: usize,
    pub finite_difference: bool,
}

impl RunConfig {
    pub fn new(mode: Mode, exponents: Vec<i64>) -> Self {
        Self {
            exponents,
            mode,
            grading_floor: -20,
            action_bound: None,
            classes: None,
            format: Format::Text,
            tolerance_profile: None,
            tolerances: BTreeMap::new(),
            rng_seed: 0,
            samples: 1000,
            finite_difference: false,
        }
    }
}

struct Failure {
    status: Status,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn validation(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            status: Status::ValidationError,
            kind,
            message: message.into(),
        }
    }
}

fn resolve_tolerances(config: &RunConfig) -> Result<Tolerances, Failure> {
    let mut tol = match &config.tolerance_profile {
        Some(name) => Tolerances::profile(name),
        None => Tolerances::from_env(),
    }
    .map_err(|e| Failure::validation("ToleranceError", e.to_string()))?;
    for (name, &value) in &config.tolerances {
        tol.set(name, value)
            .map_err(|e| Failure::validation("ToleranceError", e.to_string()))?;
    }
    Ok(tol)
}

fn check_size(data: &SeifertData) -> Result<(), Failure> {
    if data.fiber_winding.to_i64().is_none() || data.minima_count.to_usize().is_none_or(|m| m > MAX_MINIMA) {
        return Err(Failure::validation(
            "TooLarge",
            format!("{} has {} orbifold points; at most {MAX_MINIMA} are supported", data.params, data.minima_count),
        ));
    }
    Ok(())
}

/// Runs one mode. Never panics on bad input; problems are reported in
/// `errors` with the matching exit code.
pub fn run(config: &RunConfig) -> Report {
    let tol = resolve_tolerances(config);
    let mut report = Report::new(config, tol.as_ref().ok());
    let outcome = tol.and_then(|tol| execute(config, &tol, &mut report));
    if let Err(f) = outcome {
        report.fail(f.status, f.kind, f.message);
    }
    report
}

fn execute(config: &RunConfig, tol: &Tolerances, report: &mut Report) -> Result<(), Failure> {
    if config.action_bound.is_some() && config.mode != Mode::Generators {
        return Err(Failure::validation("InvalidConfig", "--action-bound only applies to generators"));
    }
    if let Some(bound) = &config.action_bound {
        if !bound.is_positive() {
            return Err(Failure::validation("InvalidConfig", "action bound must be positive"));
        }
    }
    if config.classes == Some(0) {
        return Err(Failure::validation("InvalidConfig", "--classes must be at least 1"));
    }
    let params = validate_params(&config.exponents).map_err(|e| {
        let kind = match e {
            brieskorn_core::ArithmeticError::InvalidExponent(_) => "InvalidExponent",
            brieskorn_core::ArithmeticError::NotHyperbolic { .. } => "NotHyperbolic",
        };
        Failure::validation(kind, e.to_string())
    })?;
    report.params = Some(ParamsSection::new(&params));
    let data = seifert_data(&params);
    report.seifert = Some(SeifertSection::new(&data));

    match config.mode {
        Mode::Invariants => Ok(()),
        Mode::Generators => {
            check_size(&data)?;
            let filter = match &config.action_bound {
                Some(bound) => GeneratorFilter::ActionBound(bound.clone()),
                None => GeneratorFilter::GradingFloor(config.grading_floor),
            };
            report.generators = enumerate_generators(&data, &filter).iter().map(GeneratorRow::new).collect();
            Ok(())
        }
        Mode::Complex | Mode::Homology | Mode::Compare => {
            check_size(&data)?;
            let floor = config.grading_floor;
            let chain = chain_homology(&data, floor, config.classes)
                .map_err(|e| Failure::validation("PipelineError", e.to_string()))?;
            if config.mode == Mode::Complex {
                for class in &chain.classes {
                    for gens in class.complex.generators.values() {
                        report.generators.extend(gens.iter().map(GeneratorRow::new));
                    }
                    report.differentials.extend(DifferentialBlock::from_complex(&class.complex));
                }
            }
            report.homology = Some(HomologySection::new(&chain.dims, floor, chain.fiber_classes, chain.classes.len()));
            if config.mode != Mode::Compare {
                return Ok(());
            }
            let answer = closed_form_answer(&data, floor);
            report.oracle = Some(OracleSection::new(&answer, floor));
            match compare(&data, &chain, &answer.combined, floor) {
                Ok(cmp) => {
                    let equal = cmp.equal;
                    report.comparison = Some(ComparisonSection::new(&cmp));
                    if equal {
                        Ok(())
                    } else {
                        Err(Failure {
                            status: Status::Mismatch,
                            kind: "Mismatch",
                            message: format!("chain and closed form differ at grading {}", cmp.first_mismatch.unwrap().grading),
                        })
                    }
                }
                Err(e @ OracleError::IncompleteWindow { .. }) => Err(Failure::validation("IncompleteWindow", e.to_string())),
                Err(e) => Err(Failure::validation("OracleError", e.to_string())),
            }
        }
        Mode::VerifyGeometry => verify_geometry(config, tol, &data, report),
        Mode::VerifyDynamics => verify_dynamics(tol, &data, report),
    }
}

fn numerical(kind: &'static str, message: impl Into<String>) -> Failure {
    Failure {
        status: Status::NumericalFailure,
        kind,
        message: message.into(),
    }
}

fn verify_geometry(config: &RunConfig, tol: &Tolerances, data: &SeifertData, report: &mut Report) -> Result<(), Failure> {
    let group = build_polygon_group(&data.params).map_err(|e| numerical("GeometryError", e.to_string()))?;
    let mut rng = sampling::rng(config.rng_seed);
    let points = sampling::sample_points(&mut rng, 20);
    let relations = relation_report(&group, &points, tol);

    let method = if config.finite_difference {
        JacobianMethod::FiniteDifference { step: 1e-6 }
    } else {
        JacobianMethod::Analytic
    };
    let (mut worst_lambda, mut worst_frame) = (0.0f64, 0.0f64);
    for _ in 0..config.samples {
        let h = sampling::sample_lifted(&mut rng);
        let p = sampling::sample_point(&mut rng);
        let r = contact_invariance_residual(&h, &p, method);
        worst_lambda = worst_lambda.max(r.lambda);
        worst_frame = worst_frame.max(r.frame);
    }
    let section = GeometrySection::new(&group, &relations, tol, config, worst_lambda, worst_frame);
    let passed = section.passed;
    let mut failures = Vec::new();
    if let Some(f) = relations.first_failure() {
        failures.push(format!("relation {} residual {:e}", f.name, f.residual));
    }
    if section.max_angle_error > tol.angle {
        failures.push(format!("angle error {:e}", section.max_angle_error));
    }
    if section.area_error > tol.area {
        failures.push(format!("area error {:e}", section.area_error));
    }
    if section.invariance.worst_lambda.max(section.invariance.worst_frame) > tol.invariance {
        failures.push("invariance residual above tolerance".to_string());
    }
    report.verification.geometry = Some(section);
    if passed {
        Ok(())
    } else {
        Err(numerical("RelationFailure", failures.join("; ")))
    }
}

const EPSILONS: [f64; 2] = [1e-2, 1e-3];
const PERIODS: [f64; 2] = [TAU, TAU * 21.0];
const CZ_ITERATES: u64 = 5;
const CZ_EPSILON: f64 = 1e-3;

fn verify_dynamics(tol: &Tolerances, data: &SeifertData, report: &mut Report) -> Result<(), Failure> {
    let mut section = DynamicsSection::default();
    let unit = LocalModel {
        v: Complex64::i(),
        c: Complex64::new(1.0, 0.0),
        epsilon: 0.0,
    };
    for epsilon in EPSILONS {
        for period in PERIODS {
            let model = LocalModel { epsilon, ..unit };
            let r = linearized_return_map(&model, period, tol).map_err(|e| numerical("IntegrationError", e.to_string()))?;
            section.rotation.push(RotationRow::new(epsilon, &r, tol));
        }
    }

    let group = build_polygon_group(&data.params).map_err(|e| numerical("GeometryError", e.to_string()))?;
    for (j, &v) in group.vertices.iter().enumerate() {
        // |c|^2 y_v^2 = 1, so the rotation rate at v is 2 epsilon
        let c = Complex64::new(1.0 / v.im, 0.0);
        for k in 1..=CZ_ITERATES {
            let orbit = OrbitDescriptor::exceptional(j + 1, 1, k);
            let action = brieskorn_core::orbits::action(data, &orbit);
            let period = TAU * action.to_f64().unwrap_or(f64::NAN);
            let frac = &action - action.floor();
            let room = 1.0 - frac.to_f64().unwrap_or(0.0);
            let model = LocalModel {
                v,
                c,
                epsilon: CZ_EPSILON.min(std::f64::consts::PI * room / (4.0 * period)),
            };
            let expected = conley_zehnder(data, &orbit);
            let r = linearized_return_map(&model, period, tol).map_err(|e| numerical("IntegrationError", e.to_string()))?;
            let measured = r.cz_index(tol.nondegeneracy);
            section.cz.push(CzRow::new(&orbit, &action, model.epsilon, period, &r, measured, expected));
        }
        let model = LocalModel {
            v,
            c,
            epsilon: CZ_EPSILON,
        };
        let probe = v + Complex64::new(0.05, 0.03) * v.im;
        section.contraction_worst = section.contraction_worst.max(contraction_residual(&model, probe, 1e-5 * v.im));
    }
    section.contraction_tolerance = tol.contraction;
    section.finish();
    let passed = section.passed;
    let message = section.failure_summary();
    report.verification.dynamics = Some(section);
    if passed {
        Ok(())
    } else {
        Err(numerical("NondegeneracyFailure", message))
    }
}

/// Poincaré series of the homology section, for callers that want a one-liner.
pub fn series_of(report: &Report) -> Option<String> {
    let h = report.homology.as_ref()?;
    let dims = h.dims.iter().map(|(&k, &v)| (k, v)).collect();
    Some(poincare_series(&dims, h.grading_floor).formatted)
}
