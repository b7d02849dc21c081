use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use num_traits::Signed;

use super::lifted::{LiftedIsometry, UpperHalfPoint};
use super::mobius::MobiusElement;
use super::tolerance::Tolerances;
use super::HyperbolicError;
use crate::arithmetic::{ArithmeticError, BrieskornParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `z -> m(z)`, or `z -> m(-conj z)` when `flip` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub matrix: MobiusElement,
    pub flip: bool,
}

fn conjugated(m: &MobiusElement) -> MobiusElement {
    MobiusElement {
        a: m.a,
        b: -m.b,
        c: -m.c,
        d: m.d,
    }
}

impl Isometry {
    pub fn orientation_preserving(matrix: MobiusElement) -> Self {
        Self { matrix, flip: false }
    }

    /// Reflection in the geodesic through `z1` and `z2`.
    pub fn reflection_through(z1: Complex64, z2: Complex64) -> Self {
        let scale = 1.0 + z1.norm().max(z2.norm());
        let matrix = if (z1.re - z2.re).abs() <= 1e-14 * scale {
            MobiusElement::translation(z1.re + z2.re)
        } else {
            let x0 = (z2.norm_sqr() - z1.norm_sqr()) / (2.0 * (z2.re - z1.re));
            let r = (z1 - x0).norm();
            MobiusElement {
                a: x0 / r,
                b: (x0 * x0 - r * r) / r,
                c: 1.0 / r,
                d: x0 / r,
            }
        };
        Self { matrix, flip: true }
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64, HyperbolicError> {
        let w = if self.flip { -z.conj() } else { z };
        self.matrix.apply(w)
    }

    /// `self * other`, acting as `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let inner = if self.flip {
            conjugated(&other.matrix)
        } else {
            other.matrix
        };
        Self {
            matrix: self.matrix.compose(&inner),
            flip: self.flip ^ other.flip,
        }
    }
}

pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> f64 {
    (1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im)).acosh()
}

/// Direction (counterclockwise from the positive real axis) of the geodesic from `z` to `w`.
pub fn geodesic_direction(z: Complex64, w: Complex64) -> Result<f64, HyperbolicError> {
    let moved = MobiusElement::from_i(z).inverse().apply(w)?;
    Ok(((moved - I) / (moved + I)).arg() + FRAC_PI_2)
}

/// The point at distance `rho` from `z` in direction `phi`.
pub fn point_at(z: Complex64, rho: f64, phi: f64) -> Complex64 {
    let g = MobiusElement::from_i(z).compose(&MobiusElement::rotation_about_i(phi - FRAC_PI_2));
    g.apply(I * rho.exp()).expect("image of a point of H")
}

fn hyperboloid(z: Complex64) -> [f64; 3] {
    let r2 = z.norm_sqr();
    [z.re / z.im, (r2 - 1.0) / (2.0 * z.im), (r2 + 1.0) / (2.0 * z.im)]
}

fn minus_lorentz(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    p[2] * q[2] - p[0] * q[0] - p[1] * q[1]
}

fn triangle_area(u: Complex64, v: Complex64, w: Complex64) -> f64 {
    let (p, q, r) = (hyperboloid(u), hyperboloid(v), hyperboloid(w));
    let det = p[0] * (q[1] * r[2] - q[2] * r[1]) - p[1] * (q[0] * r[2] - q[2] * r[0])
        + p[2] * (q[0] * r[1] - q[1] * r[0]);
    let den = 1.0 + minus_lorentz(&p, &q) + minus_lorentz(&q, &r) + minus_lorentz(&r, &p);
    2.0 * det.abs().atan2(den)
}

/// Area of a convex polygon, fanned from the last vertex.
pub fn polygon_area(vertices: &[Complex64]) -> f64 {
    let Some((&apex, rest)) = vertices.split_last() else {
        return 0.0;
    };
    rest.windows(2).map(|e| triangle_area(apex, e[0], e[1])).sum()
}

/// Polygon with angles `pi/a_j` and the reflection group of its sides.
///
/// Vertices run counterclockwise with `v_n = i` and `v_1` on the imaginary
/// axis above it. `reflections[j]` is the reflection in the side
/// `v_j v_{j+1}`; `rotation_generators[j]` is
/// `reflections[j-1] * reflections[j]`, a counterclockwise rotation by
/// `2pi/a_j` about `v_j`. For triangles, `reflections[j]` is the side
/// opposite `v_{j+2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonGroup {
    pub params: BrieskornParams,
    pub vertices: Vec<Complex64>,
    pub reflections: Vec<Isometry>,
    pub rotation_generators: Vec<MobiusElement>,
    pub lifted_generators: Vec<LiftedIsometry>,
}

impl PolygonGroup {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn prescribed_angles(&self) -> Vec<f64> {
        self.params.angles()
    }

    pub fn measured_angles(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|j| {
                let v = self.vertices[j];
                let prev = self.vertices[(j + n - 1) % n];
                let next = self.vertices[(j + 1) % n];
                let turn = geodesic_direction(v, prev).unwrap() - geodesic_direction(v, next).unwrap();
                turn.rem_euclid(TAU)
            })
            .collect()
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    /// Gauss–Bonnet: `pi((n - 2) - sum 1/a_j)`.
    pub fn expected_area(&self) -> f64 {
        let n = self.n() as f64;
        PI * (n - 2.0 - self.params.exponents().iter().map(|&a| 1.0 / a as f64).sum::<f64>())
    }
}

fn triangle_vertices(angles: &[f64]) -> Vec<Complex64> {
    let side = |j: usize| {
        let (a, b, c) = (angles[j], angles[(j + 1) % 3], angles[(j + 2) % 3]);
        ((a.cos() + b.cos() * c.cos()) / (b.sin() * c.sin())).acosh()
    };
    let v3 = I;
    let v1 = I * side(1).exp();
    let v2 = point_at(v3, side(0), FRAC_PI_2 + angles[2]);
    vec![v1, v2, v3]
}

/// Tangential polygon around `i`: the inradius solves
/// `sum_j asin(cos(alpha_j/2) / cosh rho) = pi`.
fn tangential_vertices(angles: &[f64]) -> Vec<Complex64> {
    let excess = |rho: f64| {
        angles
            .iter()
            .map(|a| ((a / 2.0).cos() / rho.cosh()).asin())
            .sum::<f64>()
            - PI
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    let phis: Vec<f64> = angles.iter().map(|a| ((a / 2.0).cos() / rho.cosh()).asin()).collect();
    let mut psi = 0.0;
    let mut out = Vec::with_capacity(angles.len());
    for j in 0..angles.len() {
        if j > 0 {
            psi += phis[j - 1] + phis[j];
        }
        let h = (1.0 / (angles[j] / 2.0).tan() / phis[j].tan()).acosh();
        out.push(point_at(I, h, psi));
    }
    out
}

/// Moves `v_n` to `i` and `v_1` onto the imaginary axis above it.
fn normalize(vertices: &[Complex64]) -> Vec<Complex64> {
    let n = vertices.len();
    let to_i = MobiusElement::from_i(vertices[n - 1]).inverse();
    let first = to_i.apply(vertices[0]).unwrap();
    let turn = MobiusElement::rotation_about_i(FRAC_PI_2 - geodesic_direction(I, first).unwrap());
    let g = turn.compose(&to_i);
    vertices.iter().map(|&v| g.apply(v).unwrap()).collect()
}

pub fn build_polygon_group(params: &BrieskornParams) -> Result<PolygonGroup, HyperbolicError> {
    let gap = params.hyperbolic_gap();
    if !gap.is_positive() {
        return Err(ArithmeticError::NotHyperbolic { gap }.into());
    }
    let angles = params.angles();
    let n = angles.len();
    let raw = if n == 3 {
        triangle_vertices(&angles)
    } else {
        tangential_vertices(&angles)
    };
    let vertices = normalize(&raw);
    let reflections: Vec<Isometry> = (0..n)
        .map(|j| Isometry::reflection_through(vertices[j], vertices[(j + 1) % n]))
        .collect();
    let rotation_generators: Vec<MobiusElement> = (0..n)
        .map(|j| {
            let r = reflections[(j + n - 1) % n].compose(&reflections[j]);
            debug_assert!(!r.flip);
            r.matrix
        })
        .collect();
    let lifted_generators = rotation_generators
        .iter()
        .zip(&vertices)
        .zip(params.exponents())
        .map(|((&delta, &v), &a)| LiftedIsometry::with_shift_at(delta, v, TAU / a as f64))
        .collect();
    Ok(PolygonGroup {
        params: params.clone(),
        vertices,
        reflections,
        rotation_generators,
        lifted_generators,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// Matrix identity up to sign.
    Matrix,
    /// Equality of actions on H x R.
    Lifted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationResidual {
    pub name: String,
    pub kind: RelationKind,
    pub residual: f64,
    pub tolerance: f64,
}

impl RelationResidual {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub entries: Vec<RelationResidual>,
    pub sample_points: usize,
}

impl RelationReport {
    pub fn worst(&self, kind: RelationKind) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.residual)
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(RelationResidual::passed)
    }

    pub fn first_failure(&self) -> Option<&RelationResidual> {
        self.entries.iter().find(|e| !e.passed())
    }
}

/// Residuals of the presentation relations. Matrix relations are checked up
/// to sign; lifted ones on `points`, including the unreduced t coordinate.
pub fn relation_report(group: &PolygonGroup, points: &[UpperHalfPoint], tol: &Tolerances) -> RelationReport {
    let n = group.n();
    let exps = group.params.exponents();
    let mut entries = Vec::new();
    let mut push = |name: String, kind: RelationKind, residual: f64| {
        let tolerance = match kind {
            RelationKind::Matrix => tol.matrix_relation,
            RelationKind::Lifted => tol.lifted_relation,
        };
        entries.push(RelationResidual {
            name,
            kind,
            residual,
            tolerance,
        });
    };

    for (j, s) in group.reflections.iter().enumerate() {
        let sq = s.compose(s);
        let residual = if sq.flip {
            f64::INFINITY
        } else {
            sq.matrix.projective_distance(&MobiusElement::IDENTITY)
        };
        push(format!("sigma_{}^2 = 1", j + 1), RelationKind::Matrix, residual);
    }
    for (j, delta) in group.rotation_generators.iter().enumerate() {
        let power = delta.pow(exps[j] as u32);
        push(
            format!("delta_{}^{} = 1", j + 1, exps[j]),
            RelationKind::Matrix,
            power.projective_distance(&MobiusElement::IDENTITY),
        );
    }
    let product = group
        .rotation_generators
        .iter()
        .fold(MobiusElement::IDENTITY, |acc, d| acc.compose(d));
    push(
        (1..=n).map(|j| format!("delta_{j}")).collect::<Vec<_>>().join(" ") + " = 1",
        RelationKind::Matrix,
        product.projective_distance(&MobiusElement::IDENTITY),
    );

    let center = LiftedIsometry::center();
    for (j, g) in group.lifted_generators.iter().enumerate() {
        let power = g.pow(exps[j] as u32);
        push(
            format!("g_{}^{} = c", j + 1, exps[j]),
            RelationKind::Lifted,
            power.action_residual(&center, points),
        );
    }
    let product = group
        .lifted_generators
        .iter()
        .fold(LiftedIsometry::identity(), |acc, g| acc.compose(g));
    push(
        (1..=n).map(|j| format!("g_{j}")).collect::<Vec<_>>().join(" ") + &format!(" = c^{}", n - 2),
        RelationKind::Lifted,
        product.action_residual(&LiftedIsometry::center_power(n as i64 - 2), points),
    );

    RelationReport {
        entries,
        sample_points: points.len(),
    }
}

pub fn check_relations(
    group: &PolygonGroup,
    points: &[UpperHalfPoint],
    tol: &Tolerances,
) -> Result<RelationReport, HyperbolicError> {
    let report = relation_report(group, points, tol);
    match report.first_failure() {
        Some(f) => Err(HyperbolicError::RelationFailure {
            relation: f.name.clone(),
            residual: f.residual,
            tolerance: f.tolerance,
        }),
        None => Ok(report),
    }
}
