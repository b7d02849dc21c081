use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use ode_solvers::dop_shared::OutputType;
use ode_solvers::{Dopri5, System, Vector6};

use super::tolerance::Tolerances;
use super::HyperbolicError;

type Mat2 = [[f64; 2]; 2];

/// Value, gradient and Hessian of `1/f` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseJet {
    pub g: f64,
    pub gx: f64,
    pub gy: f64,
    pub gxx: f64,
    pub gxy: f64,
    pub gyy: f64,
}

/// A positive function `f` on H rescaling the contact form to `f lambda`.
pub trait Perturbation {
    fn value(&self, z: Complex64) -> f64;
    fn inverse_jet(&self, z: Complex64) -> InverseJet;
}

/// `f = 1 + eps |c (z - v)|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalModel {
    pub v: Complex64,
    pub c: Complex64,
    pub epsilon: f64,
}

impl LocalModel {
    /// Rate of the linearized rotation at `v`: `2 eps y_v^2 |c|^2`.
    pub fn rotation_rate(&self) -> f64 {
        2.0 * self.epsilon * self.v.im * self.v.im * self.c.norm_sqr()
    }

    /// Linearization of the Hamiltonian field at `v`: `[[0, k], [-k, 0]]`.
    pub fn linearization(&self) -> Mat2 {
        let k = self.rotation_rate();
        [[0.0, k], [-k, 0.0]]
    }
}

impl Perturbation for LocalModel {
    fn value(&self, z: Complex64) -> f64 {
        1.0 + self.epsilon * (self.c * (z - self.v)).norm_sqr()
    }

    fn inverse_jet(&self, z: Complex64) -> InverseJet {
        let q = self.epsilon * self.c.norm_sqr();
        let (u, w) = (z.re - self.v.re, z.im - self.v.im);
        let f = 1.0 + q * (u * u + w * w);
        let (f2, f3) = (f * f, f * f * f);
        InverseJet {
            g: 1.0 / f,
            gx: -2.0 * q * u / f2,
            gy: -2.0 * q * w / f2,
            gxx: -2.0 * q / f2 + 8.0 * q * q * u * u / f3,
            gxy: 8.0 * q * q * u * w / f3,
            gyy: -2.0 * q / f2 + 8.0 * q * q * w * w / f3,
        }
    }
}

/// An arbitrary smooth positive `f`, differentiated by central differences.
pub struct SmoothPerturbation<F> {
    pub f: F,
    pub step: f64,
}

impl<F: Fn(Complex64) -> f64> SmoothPerturbation<F> {
    pub fn new(f: F) -> Self {
        Self { f, step: 1e-4 }
    }

    fn g(&self, x: f64, y: f64) -> f64 {
        1.0 / (self.f)(Complex64::new(x, y))
    }
}

impl<F: Fn(Complex64) -> f64> Perturbation for SmoothPerturbation<F> {
    fn value(&self, z: Complex64) -> f64 {
        (self.f)(z)
    }

    fn inverse_jet(&self, z: Complex64) -> InverseJet {
        let h = self.step * z.im.min(1.0);
        let (x, y) = (z.re, z.im);
        let g0 = self.g(x, y);
        let (gxp, gxm) = (self.g(x + h, y), self.g(x - h, y));
        let (gyp, gym) = (self.g(x, y + h), self.g(x, y - h));
        InverseJet {
            g: g0,
            gx: (gxp - gxm) / (2.0 * h),
            gy: (gyp - gym) / (2.0 * h),
            gxx: (gxp - 2.0 * g0 + gxm) / (h * h),
            gxy: (self.g(x + h, y + h) - self.g(x + h, y - h) - self.g(x - h, y + h) + self.g(x - h, y - h))
                / (4.0 * h * h),
            gyy: (gyp - 2.0 * g0 + gym) / (h * h),
        }
    }
}

/// Projection of the Reeb field of `f lambda`: `(-y^2 d_y(1/f), y^2 d_x(1/f))`.
pub fn hamiltonian_field<P: Perturbation + ?Sized>(f: &P, z: Complex64) -> [f64; 2] {
    let j = f.inverse_jet(z);
    let y2 = z.im * z.im;
    [-y2 * j.gy, y2 * j.gx]
}

fn field_jacobian<P: Perturbation + ?Sized>(f: &P, z: Complex64) -> Mat2 {
    let j = f.inverse_jet(z);
    let y = z.im;
    let y2 = y * y;
    [
        [-y2 * j.gxy, -2.0 * y * j.gy - y2 * j.gyy],
        [y2 * j.gxx, 2.0 * y * j.gx + y2 * j.gxy],
    ]
}

/// `|iota_X omega + d(1/f)|` with `omega = dx ^ dy / y^2`, the differential
/// of `1/f` taken by central differences of `f` with the given step.
pub fn contraction_residual<P: Perturbation + ?Sized>(f: &P, z: Complex64, step: f64) -> f64 {
    let [xx, xy] = hamiltonian_field(f, z);
    let y2 = z.im * z.im;
    let g = |w: Complex64| 1.0 / f.value(w);
    let gx = (g(z + step) - g(z - step)) / (2.0 * step);
    let gy = (g(z + Complex64::new(0.0, step)) - g(z - Complex64::new(0.0, step))) / (2.0 * step);
    let dx = -xy / y2 + gx;
    let dy = xx / y2 + gy;
    dx.hypot(dy)
}

struct Variational<'a, P: ?Sized> {
    f: &'a P,
}

impl<P: Perturbation + ?Sized> System<f64, Vector6<f64>> for Variational<'_, P> {
    fn system(&self, _t: f64, s: &Vector6<f64>, ds: &mut Vector6<f64>) {
        let z = Complex64::new(s[0], s[1]);
        let [vx, vy] = hamiltonian_field(self.f, z);
        let j = field_jacobian(self.f, z);
        ds[0] = vx;
        ds[1] = vy;
        ds[2] = j[0][0] * s[2] + j[0][1] * s[4];
        ds[3] = j[0][0] * s[3] + j[0][1] * s[5];
        ds[4] = j[1][0] * s[2] + j[1][1] * s[4];
        ds[5] = j[1][0] * s[3] + j[1][1] * s[5];
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnMap {
    pub period: f64,
    /// `exp(T A)` for the linearization `A`: clockwise rotation by `kT`.
    pub analytic_matrix: Mat2,
    /// Integrated derivative of the flow along the orbit at `v`.
    pub ode_monodromy: Mat2,
    /// Continuous counterclockwise angle swept by the monodromy.
    pub rotation_angle: f64,
    pub analytic_angle: f64,
    pub determinant: f64,
    pub steps: usize,
}

impl ReturnMap {
    pub fn relative_error(&self) -> f64 {
        let diff = (self.rotation_angle - self.analytic_angle).abs();
        if self.analytic_angle == 0.0 {
            diff
        } else {
            diff / self.analytic_angle.abs()
        }
    }

    pub fn matrix_error(&self) -> f64 {
        (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .map(|(r, c)| (self.ode_monodromy[r][c] - self.analytic_matrix[r][c]).abs())
            .fold(0.0, f64::max)
    }

    /// `2 floor(theta_T) + 1` with `theta_T = -(T + correction)/2pi`, where the
    /// correction is the clockwise rotation of the monodromy. Fails when
    /// `theta_T` is an integer within tolerance, or when the correction
    /// reaches the next integer above `T/2pi`.
    pub fn cz_index(&self, tol: f64) -> Result<i64, HyperbolicError> {
        let correction = -self.rotation_angle;
        let theta = -(self.period + correction) / TAU;
        let turns = self.period / TAU;
        let room = if (turns - turns.round()).abs() <= tol {
            1.0
        } else {
            1.0 - (turns - turns.floor())
        };
        let failure = HyperbolicError::NondegeneracyFailure { theta, correction };
        if (theta - theta.round()).abs() <= tol || correction / TAU >= room - tol {
            return Err(failure);
        }
        Ok(2 * theta.floor() as i64 + 1)
    }
}

fn rotation(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    [[c, -s], [s, c]]
}

/// Integrates the variational equations of the Hamiltonian field of the
/// local model along the constant orbit at `v` for time `period`.
pub fn linearized_return_map(model: &LocalModel, period: f64, tol: &Tolerances) -> Result<ReturnMap, HyperbolicError> {
    if !(0.0..1.0).contains(&model.epsilon) {
        return Err(HyperbolicError::InvalidParameter(format!(
            "epsilon must lie in [0, 1), got {}",
            model.epsilon
        )));
    }
    if !(period > 0.0 && period.is_finite()) {
        return Err(HyperbolicError::InvalidParameter(format!("period must be positive, got {period}")));
    }
    if model.v.im.is_nan() || model.v.im <= 0.0 {
        return Err(HyperbolicError::InvalidPoint {
            x: model.v.re,
            y: model.v.im,
        });
    }
    let analytic_angle = -model.rotation_rate() * period;
    let start = Vector6::new(model.v.re, model.v.im, 1.0, 0.0, 0.0, 1.0);
    let h_max = period / 64.0;
    let mut solver = Dopri5::from_param(
        Variational { f: model },
        0.0,
        period,
        h_max,
        start,
        tol.integrator,
        tol.integrator,
        0.9,
        0.04,
        0.2,
        10.0,
        h_max,
        0.0,
        1_000_000,
        1000,
        OutputType::Sparse,
    );
    solver
        .integrate()
        .map_err(|e| HyperbolicError::Integration(e.to_string()))?;

    let states = solver.y_out();
    let mut angle = 0.0;
    let mut prev = 0.0;
    for s in states {
        let a = s[4].atan2(s[2]);
        let mut step = (a - prev).rem_euclid(TAU);
        if step > PI {
            step -= TAU;
        }
        if step.abs() >= PI / 2.0 {
            return Err(HyperbolicError::Integration(format!(
                "monodromy turned by {step} in one step"
            )));
        }
        angle += step;
        prev = a;
    }
    let last = states.last().copied().unwrap_or(start);
    let ode_monodromy = [[last[2], last[3]], [last[4], last[5]]];
    Ok(ReturnMap {
        period,
        analytic_matrix: rotation(analytic_angle),
        ode_monodromy,
        rotation_angle: angle,
        analytic_angle,
        determinant: last[2] * last[5] - last[3] * last[4],
        steps: states.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(eps: f64) -> LocalModel {
        LocalModel {
            v: Complex64::i(),
            c: Complex64::new(1.0, 0.0),
            epsilon: eps,
        }
    }

    #[test]
    fn constant_f_has_no_field() {
        let one = SmoothPerturbation::new(|_: Complex64| 1.0);
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-4.0, 3.0)] {
            assert_eq!(hamiltonian_field(&one, z), [0.0, 0.0]);
        }
    }

    #[test]
    fn local_model_fixes_v() {
        let m = LocalModel {
            v: Complex64::new(0.4, 1.7),
            c: Complex64::new(0.3, -2.0),
            epsilon: 0.1,
        };
        assert_eq!(hamiltonian_field(&m, m.v), [0.0, 0.0]);
    }

    #[test]
    fn contraction_identity() {
        let m = LocalModel {
            v: Complex64::new(0.4, 1.7),
            c: Complex64::new(0.3, -2.0),
            epsilon: 0.1,
        };
        let bumpy = SmoothPerturbation::new(|z: Complex64| 2.0 + (z.re * 1.3).sin() * (z.im).cos() * 0.5);
        for k in 0..20 {
            let z = Complex64::new(-1.0 + 0.1 * k as f64, 0.3 + 0.15 * k as f64);
            assert!(contraction_residual(&m, z, 1e-5) < 1e-6);
            assert!(contraction_residual(&bumpy, z, 1e-5) < 1e-6);
        }
    }

    #[test]
    fn analytic_jacobian_at_v() {
        let m = LocalModel {
            v: Complex64::new(0.4, 1.7),
            c: Complex64::new(0.3, -2.0),
            epsilon: 0.1,
        };
        let j = field_jacobian(&m, m.v);
        let lin = m.linearization();
        for r in 0..2 {
            for c in 0..2 {
                assert!((j[r][c] - lin[r][c]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_epsilon_is_identity() {
        let r = linearized_return_map(&model(0.0), TAU, &Tolerances::default()).unwrap();
        assert_eq!(r.rotation_angle, 0.0);
        assert_eq!(r.ode_monodromy, [[1.0, 0.0], [0.0, 1.0]]);
        assert!(r.cz_index(1e-9).is_err());
    }

    #[test]
    fn clockwise_rotation_matches() {
        let r = linearized_return_map(&model(1e-3), TAU, &Tolerances::default()).unwrap();
        assert!((r.analytic_angle + 4.0 * PI * 1e-3).abs() < 1e-15);
        assert!(r.relative_error() < 1e-6, "{r:?}");
        assert!((r.determinant - 1.0).abs() < 1e-9);
        assert!(r.matrix_error() < 1e-9);
    }

    #[test]
    fn cz_of_237_first_orbit() {
        for n in 1..=5u32 {
            let r = linearized_return_map(&model(1e-3), PI * n as f64, &Tolerances::default()).unwrap();
            let expected = -2 * (n as i64 / 2) - 1;
            assert_eq!(r.cz_index(1e-9).unwrap(), expected, "n = {n}");
        }
    }

    #[test]
    fn period_rounding_below_an_integer() {
        let m = model(1e-3);
        let r = linearized_return_map(&m, TAU * 30.0 * (1.0 - 1e-16), &Tolerances::default()).unwrap();
        assert_eq!(r.cz_index(1e-9).unwrap(), -61);
    }

    #[test]
    fn bad_parameters() {
        let tol = Tolerances::default();
        assert!(linearized_return_map(&model(1.5), 1.0, &tol).is_err());
        assert!(linearized_return_map(&model(0.1), -1.0, &tol).is_err());
    }
}
