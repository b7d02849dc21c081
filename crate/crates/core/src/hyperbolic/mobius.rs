use std::ops::Mul;

use num_complex::Complex64;

use super::HyperbolicError;

/// Drift of the determinant tolerated before a product is renormalized.
const RENORMALIZE_DRIFT: f64 = 0.5e-9;

/// `[[a, b], [c, d]]` with `ad - bc = 1`, acting by `z -> (az + b)/(cz + d)`.
/// `g` and `-g` act identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusElement {
    pub const IDENTITY: Self = Self {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Scales by `1/sqrt(det)`; fails unless the determinant is positive.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self, HyperbolicError> {
        let det = a * d - b * c;
        if !(det.is_finite() && det > 0.0) {
            return Err(HyperbolicError::DegenerateMatrix { det });
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn translation(b: f64) -> Self {
        Self {
            a: 1.0,
            b,
            c: 0.0,
            d: 1.0,
        }
    }

    /// `z -> lambda z`.
    pub fn dilation(lambda: f64) -> Self {
        let s = lambda.sqrt();
        Self {
            a: s,
            b: 0.0,
            c: 0.0,
            d: 1.0 / s,
        }
    }

    /// Counterclockwise rotation by `alpha` about `i`.
    pub fn rotation_about_i(alpha: f64) -> Self {
        let (s, c) = (alpha / 2.0).sin_cos();
        Self { a: c, b: s, c: -s, d: c }
    }

    /// The element `[[y, x], [0, 1]] / sqrt(y)` sending `i` to `x + iy`.
    pub fn from_i(z: Complex64) -> Self {
        let s = z.im.sqrt();
        Self {
            a: s,
            b: z.re / s,
            c: 0.0,
            d: 1.0 / s,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        let p = Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        };
        let det = p.det();
        if (det - 1.0).abs() > RENORMALIZE_DRIFT {
            Self::normalized(p.a, p.b, p.c, p.d).unwrap_or(p)
        } else {
            p
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::IDENTITY, |acc, _| acc.compose(self))
    }

    /// `cz + d`.
    pub fn denominator(&self, z: Complex64) -> Complex64 {
        z * self.c + self.d
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64, HyperbolicError> {
        if !(z.im > 0.0 && z.re.is_finite() && z.im.is_finite()) {
            return Err(HyperbolicError::InvalidPoint { x: z.re, y: z.im });
        }
        let den = self.denominator(z);
        let scale = self.c.abs() * z.norm() + self.d.abs();
        if den.norm() <= f64::EPSILON * scale || den.norm() == 0.0 {
            return Err(HyperbolicError::DegenerateInput {
                re: z.re,
                im: z.im,
                modulus: den.norm(),
            });
        }
        Ok((z * self.a + self.b) / den)
    }

    /// Complex derivative `1/(cz + d)^2`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.denominator(z);
        (den * den).inv()
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Entrywise distance to `other` up to the sign ambiguity.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        self.max_abs_diff(other).min(self.max_abs_diff(&other.negated()))
    }
}

impl Mul for MobiusElement {
    type Output = MobiusElement;

    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

pub fn mobius_apply(g: &MobiusElement, z: Complex64) -> Result<Complex64, HyperbolicError> {
    g.apply(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn examples() {
        let i = Complex64::i();
        let z = Complex64::new(0.0, 2.0);
        assert_eq!(mobius_apply(&MobiusElement::IDENTITY, z).unwrap(), z);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = MobiusElement {
            a: 2.0 * s,
            b: s,
            c: 0.0,
            d: s,
        };
        assert!(close(g.apply(i).unwrap(), Complex64::new(1.0, 2.0)));
        let flip = MobiusElement {
            a: 0.0,
            b: 1.0,
            c: -1.0,
            d: 0.0,
        };
        assert!(close(flip.apply(i).unwrap(), i));
    }

    #[test]
    fn composition_law() {
        let g = MobiusElement::normalized(1.3, -0.4, 0.7, 0.9).unwrap();
        let h = MobiusElement::normalized(-0.2, 1.1, -1.5, 0.8).unwrap();
        let z = Complex64::new(0.3, 0.7);
        let lhs = (g * h).apply(z).unwrap();
        let rhs = g.apply(h.apply(z).unwrap()).unwrap();
        assert!(close(lhs, rhs));
        assert!(((g * h).det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let g = MobiusElement {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
        };
        assert!(matches!(
            g.apply(Complex64::i()),
            Err(HyperbolicError::DegenerateInput { .. })
        ));
        assert!(matches!(
            MobiusElement::IDENTITY.apply(Complex64::new(0.0, -1.0)),
            Err(HyperbolicError::InvalidPoint { .. })
        ));
        assert!(MobiusElement::normalized(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn rotation_about_i_fixes_i() {
        let r = MobiusElement::rotation_about_i(0.7);
        assert!(close(r.apply(Complex64::i()).unwrap(), Complex64::i()));
        let arg = r.derivative(Complex64::i()).arg();
        assert!((arg - 0.7).abs() < 1e-12);
    }
}
