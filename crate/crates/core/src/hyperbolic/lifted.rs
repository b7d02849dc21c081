use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use super::mobius::MobiusElement;
use super::HyperbolicError;

const REFERENCE: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const MAX_SUBDIVISION: u32 = 24;

/// A point `(x, y, t)` of H x R, with `t` an unreduced angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64, t: f64) -> Result<Self, HyperbolicError> {
        if !(y > 0.0 && x.is_finite() && y.is_finite() && t.is_finite()) {
            return Err(HyperbolicError::InvalidPoint { x, y });
        }
        Ok(Self { x, y, t })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// Largest coordinate difference, `t` compared without reduction.
    pub fn distance_max(&self, other: &Self) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.t - other.t).abs())
    }
}

impl fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.t)
    }
}

fn wrap(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Continuous change of `arg(cz + d)` along the segment from `i` to `w`,
/// refining the subdivision until consecutive arguments differ by less than pi/2.
fn arg_change(g: &MobiusElement, w: Complex64) -> f64 {
    let start = g.denominator(REFERENCE).arg();
    let mut pieces = 1u32;
    loop {
        let mut total = 0.0;
        let mut prev = start;
        let mut fine = true;
        for k in 1..=pieces {
            let s = k as f64 / pieces as f64;
            let z = REFERENCE + (w - REFERENCE) * s;
            let a = g.denominator(z).arg();
            let step = wrap(a - prev);
            if step.abs() >= PI / 2.0 {
                fine = false;
                break;
            }
            total += step;
            prev = a;
        }
        if fine || pieces >= 1 << MAX_SUBDIVISION {
            return total;
        }
        pieces *= 2;
    }
}

/// Element of the universal cover: a Möbius element plus the continuous
/// lift of its angle shift at the reference point `i`.
///
/// The lifted action is `(w, t) -> (g w, t + shift(w))` where `shift(i)`
/// equals `winding_offset` and `shift(w) = -2 arg(cw + d)` up to a constant
/// multiple of 2pi, continued along paths from `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedIsometry {
    pub base: MobiusElement,
    pub winding_offset: f64,
}

impl LiftedIsometry {
    pub fn identity() -> Self {
        Self {
            base: MobiusElement::IDENTITY,
            winding_offset: 0.0,
        }
    }

    /// The generator of the center: the vertical shift `t -> t + 2pi`.
    pub fn center() -> Self {
        Self::center_power(1)
    }

    pub fn center_power(k: i64) -> Self {
        Self {
            base: MobiusElement::IDENTITY,
            winding_offset: TAU * k as f64,
        }
    }

    /// The lift whose shift at `i` is the principal value `-2 Arg(ci + d)`.
    pub fn principal(base: MobiusElement) -> Self {
        Self {
            base,
            winding_offset: -2.0 * base.denominator(REFERENCE).arg(),
        }
    }

    /// The lift of `base` whose shift at `w` is nearest to `target`.
    pub fn with_shift_at(base: MobiusElement, w: Complex64, target: f64) -> Self {
        let p = Self::principal(base);
        let k = ((target - p.shift_at(w)) / TAU).round();
        Self {
            base,
            winding_offset: p.winding_offset + TAU * k,
        }
    }

    /// Continuous angle shift of the lifted action over `w`.
    pub fn shift_at(&self, w: Complex64) -> f64 {
        self.winding_offset - 2.0 * arg_change(&self.base, w)
    }

    pub fn apply(&self, p: &UpperHalfPoint) -> UpperHalfPoint {
        let z = p.z();
        let w = self
            .base
            .apply(z)
            .expect("unit-determinant element acting on the upper half-plane");
        UpperHalfPoint {
            x: w.re,
            y: w.im,
            t: p.t + self.shift_at(z),
        }
    }

    /// `self * other`, acting as `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let moved = other
            .base
            .apply(REFERENCE)
            .expect("unit-determinant element acting on the upper half-plane");
        Self {
            base: self.base.compose(&other.base),
            winding_offset: other.winding_offset + self.shift_at(moved),
        }
    }

    pub fn inverse(&self) -> Self {
        let base = self.base.inverse();
        let back = base
            .apply(REFERENCE)
            .expect("unit-determinant element acting on the upper half-plane");
        Self {
            base,
            winding_offset: -self.shift_at(back),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// Worst coordinate discrepancy between the two actions over `points`.
    pub fn action_residual(&self, other: &Self, points: &[UpperHalfPoint]) -> f64 {
        points
            .iter()
            .map(|p| self.apply(p).distance_max(&other.apply(p)))
            .fold(0.0, f64::max)
    }
}

impl Mul for LiftedIsometry {
    type Output = LiftedIsometry;

    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

pub fn lifted_apply(h: &LiftedIsometry, p: &UpperHalfPoint) -> UpperHalfPoint {
    h.apply(p)
}
