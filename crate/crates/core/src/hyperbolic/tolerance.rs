use std::fmt;

use thiserror::Error;

/// Environment variable naming the default tolerance profile.
pub const TOLERANCE_PROFILE_ENV: &str = "BRIESKORN_TOLERANCE_PROFILE";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToleranceError {
    #[error("unknown tolerance `{0}`")]
    UnknownName(String),
    #[error("unknown tolerance profile `{0}` (expected default, strict or loose)")]
    UnknownProfile(String),
    #[error("tolerance `{name}` must be positive and finite, got {value}")]
    InvalidValue { name: String, value: String },
    #[error("malformed override `{0}`, expected name=value")]
    Malformed(String),
}

/// Named numerical tolerances used by the verification routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Matrix relations up to sign, and determinant drift of compositions.
    pub matrix_relation: f64,
    /// Lifted relations on H x R, including the unreduced t coordinate.
    pub lifted_relation: f64,
    /// Pullback of the contact form and of the frame.
    pub invariance: f64,
    /// Relative error of the integrated monodromy against the closed form.
    pub ode_relative: f64,
    /// Local error per step of the adaptive integrator.
    pub integrator: f64,
    /// Determinant of the monodromy.
    pub determinant: f64,
    /// Polygon area against the angle defect.
    pub area: f64,
    /// Measured interior angles.
    pub angle: f64,
    /// Distance of theta_T from an integer below which the orbit counts as degenerate.
    pub nondegeneracy: f64,
    /// Contraction identity of the Hamiltonian field.
    pub contraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            matrix_relation: 1e-9,
            lifted_relation: 1e-8,
            invariance: 1e-8,
            ode_relative: 1e-6,
            integrator: 1e-10,
            determinant: 1e-9,
            area: 1e-12,
            angle: 1e-10,
            nondegeneracy: 1e-9,
            contraction: 1e-6,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 10] = [
        "matrix_relation",
        "lifted_relation",
        "invariance",
        "ode_relative",
        "integrator",
        "determinant",
        "area",
        "angle",
        "nondegeneracy",
        "contraction",
    ];

    /// `default`, `strict` (ten times tighter) or `loose` (a hundred times looser).
    /// The integrator tolerance is only tightened, never loosened.
    pub fn profile(name: &str) -> Result<Self, ToleranceError> {
        let base = Self::default();
        match name {
            "default" => Ok(base),
            "strict" => Ok(base.scaled(0.1, 0.1)),
            "loose" => Ok(base.scaled(100.0, 1.0)),
            other => Err(ToleranceError::UnknownProfile(other.to_string())),
        }
    }

    /// Profile from the environment, falling back to the default profile when unset.
    pub fn from_env() -> Result<Self, ToleranceError> {
        match std::env::var(TOLERANCE_PROFILE_ENV) {
            Ok(name) if !name.is_empty() => Self::profile(&name),
            _ => Ok(Self::default()),
        }
    }

    fn scaled(mut self, factor: f64, integrator_factor: f64) -> Self {
        for name in Self::NAMES {
            let slot = self.slot_mut(name).unwrap();
            *slot *= factor;
        }
        self.integrator = Self::default().integrator * integrator_factor;
        self
    }

    fn slot_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "matrix_relation" => &mut self.matrix_relation,
            "lifted_relation" => &mut self.lifted_relation,
            "invariance" => &mut self.invariance,
            "ode_relative" => &mut self.ode_relative,
            "integrator" => &mut self.integrator,
            "determinant" => &mut self.determinant,
            "area" => &mut self.area,
            "angle" => &mut self.angle,
            "nondegeneracy" => &mut self.nondegeneracy,
            "contraction" => &mut self.contraction,
            _ => return None,
        })
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        let mut copy = *self;
        copy.slot_mut(name).map(|v| *v)
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ToleranceError> {
        if !(value.is_finite() && value > 0.0) {
            return Err(ToleranceError::InvalidValue {
                name: name.to_string(),
                value: value.to_string(),
            });
        }
        let slot = self
            .slot_mut(name)
            .ok_or_else(|| ToleranceError::UnknownName(name.to_string()))?;
        *slot = value;
        Ok(())
    }

    /// Applies an override of the form `name=value`.
    pub fn apply_override(&mut self, spec: &str) -> Result<(), ToleranceError> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| ToleranceError::Malformed(spec.to_string()))?;
        let name = name.trim();
        let parsed: f64 = value.trim().parse().map_err(|_| ToleranceError::InvalidValue {
            name: name.to_string(),
            value: value.trim().to_string(),
        })?;
        self.set(name, parsed)
    }

    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        Self::NAMES.iter().map(|&n| (n, self.get(n).unwrap())).collect()
    }
}

impl fmt::Display for Tolerances {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(|(n, v)| format!("{n}={v:e}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}
