use num_complex::Complex64;

use super::lifted::{LiftedIsometry, UpperHalfPoint};
use super::HyperbolicError;

type Vec3 = [f64; 3];
type Mat3 = [[f64; 3]; 3];

/// Trivialization of `ker(dt + dx/y)`:
/// `e1 = (y cos t, y sin t, -cos t)`, `e2 = (-y sin t, y cos t, sin t)`.
pub fn frame_at(p: &UpperHalfPoint) -> (Vec3, Vec3) {
    let (s, c) = p.t.sin_cos();
    ([p.y * c, p.y * s, -c], [-p.y * s, p.y * c, s])
}

/// `lambda_p(v)` for `lambda = dt + dx/y`.
pub fn contact_lambda(p: &UpperHalfPoint, v: &Vec3) -> f64 {
    v[2] + v[0] / p.y
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JacobianMethod {
    Analytic,
    /// Central differences with the given step, scaled by `y`.
    FiniteDifference { step: f64 },
}

/// Jacobian of the lifted action at `p` in `(x, y, t)` coordinates.
pub fn lifted_jacobian(h: &LiftedIsometry, p: &UpperHalfPoint, method: JacobianMethod) -> Mat3 {
    match method {
        JacobianMethod::Analytic => {
            let z = p.z();
            let g1 = h.base.derivative(z);
            let k = Complex64::from(h.base.c) / h.base.denominator(z);
            [
                [g1.re, -g1.im, 0.0],
                [g1.im, g1.re, 0.0],
                [-2.0 * k.im, -2.0 * k.re, 1.0],
            ]
        }
        JacobianMethod::FiniteDifference { step } => {
            let step = step * p.y;
            let mut jac = [[0.0; 3]; 3];
            #[allow(clippy::needless_range_loop)]
            for col in 0..3 {
                let shifted = |sign: f64| {
                    let mut q = *p;
                    match col {
                        0 => q.x += sign * step,
                        1 => q.y += sign * step,
                        _ => q.t += sign * step,
                    }
                    h.apply(&q)
                };
                let (fwd, back) = (shifted(1.0), shifted(-1.0));
                jac[0][col] = (fwd.x - back.x) / (2.0 * step);
                jac[1][col] = (fwd.y - back.y) / (2.0 * step);
                jac[2][col] = (fwd.t - back.t) / (2.0 * step);
            }
            jac
        }
    }
}

fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    std::array::from_fn(|r| (0..3).map(|c| m[r][c] * v[c]).sum())
}

fn norm(v: &Vec3) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceResidual {
    /// `|h^* lambda - lambda|` at the point, as a covector norm.
    pub lambda: f64,
    /// `max_i |dh(e_i(p)) - e_i(h(p))|`.
    pub frame: f64,
}

impl InvarianceResidual {
    pub fn worst(&self) -> f64 {
        self.lambda.max(self.frame)
    }
}

pub fn contact_invariance_residual(
    h: &LiftedIsometry,
    p: &UpperHalfPoint,
    method: JacobianMethod,
) -> InvarianceResidual {
    let jac = lifted_jacobian(h, p, method);
    let image = h.apply(p);
    let pulled: Vec3 = std::array::from_fn(|c| jac[2][c] + jac[0][c] / image.y);
    let original = [1.0 / p.y, 0.0, 1.0];
    let lambda = norm(&std::array::from_fn(|c| pulled[c] - original[c]));

    let (e1, e2) = frame_at(p);
    let (f1, f2) = frame_at(&image);
    let frame = [(e1, f1), (e2, f2)]
        .iter()
        .map(|(e, f)| {
            let pushed = mat_vec(&jac, e);
            norm(&std::array::from_fn(|k| pushed[k] - f[k]))
        })
        .fold(0.0, f64::max);
    InvarianceResidual { lambda, frame }
}

/// `|f(z)| (Im z)^a`; independent of `t` by construction.
pub fn automorphic_modulus<F>(f_modulus_at: F, a: f64, p: &UpperHalfPoint) -> Result<f64, HyperbolicError>
where
    F: Fn(Complex64) -> f64,
{
    if !(a >= 0.0 && a.is_finite()) {
        return Err(HyperbolicError::InvalidParameter(format!(
            "weight must be nonnegative, got {a}"
        )));
    }
    Ok(f_modulus_at(p.z()).abs() * p.y.powf(a))
}

#[cfg(test)]
mod tests {
    use super::super::mobius::MobiusElement;
    use super::*;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn pt(x: f64, y: f64, t: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(x, y, t).unwrap()
    }

    fn close3(a: Vec3, b: Vec3) -> bool {
        (0..3).all(|k| (a[k] - b[k]).abs() < 1e-15)
    }

    #[test]
    fn frame_examples() {
        let (e1, e2) = frame_at(&pt(0.0, 1.0, 0.0));
        assert!(close3(e1, [1.0, 0.0, -1.0]) && close3(e2, [0.0, 1.0, 0.0]));
        let (e1, e2) = frame_at(&pt(0.0, 1.0, FRAC_PI_2));
        assert!(close3(e1, [0.0, 1.0, 0.0]) && close3(e2, [-1.0, 0.0, 1.0]));
    }

    #[test]
    fn frame_in_kernel_and_positive() {
        for k in 0..50 {
            let p = pt(0.1 * k as f64 - 2.0, 0.05 + 0.1 * k as f64, 0.37 * k as f64);
            let (e1, e2) = frame_at(&p);
            assert!(contact_lambda(&p, &e1).abs() < 1e-15);
            assert!(contact_lambda(&p, &e2).abs() < 1e-15);
            // d(lambda) = dx ^ dy / y^2 on the kernel
            let dl = (e1[0] * e2[1] - e1[1] * e2[0]) / (p.y * p.y);
            assert!(dl > 0.0);
        }
    }

    #[test]
    fn trivial_residuals() {
        let p = pt(0.3, 1.4, 2.0);
        let r = contact_invariance_residual(&LiftedIsometry::identity(), &p, JacobianMethod::Analytic);
        assert_eq!(r.worst(), 0.0);
        // the frame at t + 6pi differs from the one at t only by rounding
        let r = contact_invariance_residual(&LiftedIsometry::center_power(3), &p, JacobianMethod::Analytic);
        assert_eq!(r.lambda, 0.0);
        assert!(r.frame < 1e-14);
    }

    #[test]
    fn analytic_and_numeric_jacobians_agree() {
        let h = LiftedIsometry::principal(MobiusElement::normalized(1.2, -0.7, 0.9, 0.4).unwrap());
        let p = pt(-0.4, 0.8, 0.3);
        let a = contact_invariance_residual(&h, &p, JacobianMethod::Analytic);
        let n = contact_invariance_residual(&h, &p, JacobianMethod::FiniteDifference { step: 1e-6 });
        assert!(a.worst() < 1e-12, "{a:?}");
        assert!(n.worst() < 1e-7, "{n:?}");
    }

    #[test]
    fn modulus_examples() {
        let one = |_: Complex64| 1.0;
        for t0 in [0.0, 1.0, -4.0, TAU] {
            assert_eq!(automorphic_modulus(one, 1.0, &pt(0.0, 2.0, t0)).unwrap(), 2.0);
        }
        let f = |z: Complex64| (z * z + 1.0).norm();
        let z = pt(0.3, 5.0, 0.0);
        assert_eq!(automorphic_modulus(f, 0.0, &z).unwrap(), f(z.z()));
        let a = automorphic_modulus(f, 2.5, &pt(0.3, 0.6, 0.0)).unwrap();
        let b = automorphic_modulus(f, 2.5, &pt(0.3, 0.6, 17.3)).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(automorphic_modulus(one, -1.0, &z).is_err());
    }
}
