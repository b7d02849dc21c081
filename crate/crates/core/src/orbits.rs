//! Reeb-orbit generators of the perturbed form, their Conley–Zehnder
//! gradings, and the chain complex of each free homotopy class.
//!
//! Orbits come in three kinds: fibers over orbifold points (local minima of
//! the perturbing function), and regular fibers over its saddles and its
//! maximum. Actions are recorded as exact rational multiples of 2π.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::arithmetic::SeifertData;
use crate::matrix::RationalMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("orbit descriptor {0} does not exist for these exponents")]
    UnknownOrbit(OrbitDescriptor),
    #[error("{0} lies in a fiber class; use the fiber class instead")]
    NotNonFiber(OrbitDescriptor),
    #[error("fiber classes are numbered from 1")]
    ZeroClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitKind {
    /// Fiber over the `i`-th orbifold point of family `j` (both 1-based).
    Exceptional { j: usize, i: usize },
    /// Regular fiber over the index-1 critical point `index` (1-based).
    Saddle { index: usize },
    /// Regular fiber over the unique maximum.
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitDescriptor {
    pub kind: OrbitKind,
    pub iterate: u64,
}

impl OrbitDescriptor {
    pub fn exceptional(j: usize, i: usize, iterate: u64) -> Self {
        Self {
            kind: OrbitKind::Exceptional { j, i },
            iterate,
        }
    }

    pub fn saddle(index: usize, iterate: u64) -> Self {
        Self {
            kind: OrbitKind::Saddle { index },
            iterate,
        }
    }

    pub fn maximum(iterate: u64) -> Self {
        Self {
            kind: OrbitKind::Maximum,
            iterate,
        }
    }

    fn validate(&self, data: &SeifertData) -> Result<(), OrbitError> {
        let ok = self.iterate >= 1
            && match self.kind {
                OrbitKind::Exceptional { j, i } => {
                    j >= 1 && j <= data.n() && i >= 1 && i <= data.counts()[j - 1]
                }
                OrbitKind::Saddle { index } => index >= 1 && index <= saddle_count(data),
                OrbitKind::Maximum => true,
            };
        if ok {
            Ok(())
        } else {
            Err(OrbitError::UnknownOrbit(*self))
        }
    }
}

impl fmt::Display for OrbitDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OrbitKind::Exceptional { j, i } => write!(f, "v[{j},{i}]^{}", self.iterate),
            OrbitKind::Saddle { index } => write!(f, "x[{index}]^{}", self.iterate),
            OrbitKind::Maximum => write!(f, "y^{}", self.iterate),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitGenerator {
    pub kind: OrbitKind,
    pub iterate: u64,
    pub cz: i64,
    pub grading: i64,
    /// Action as a multiple of 2π.
    pub action: BigRational,
    /// `Some(n)` iff the orbit is freely homotopic to the n-th multiple of a regular fiber.
    pub fiber_class: Option<u64>,
}

impl OrbitGenerator {
    pub fn descriptor(&self) -> OrbitDescriptor {
        OrbitDescriptor {
            kind: self.kind,
            iterate: self.iterate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitType {
    Elliptic,
    PositiveHyperbolic,
    NegativeHyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitClassification {
    pub orbit_type: OrbitType,
    pub good: bool,
}

/// Number of index-1 critical points: `M - 1` tree saddles plus `2g` handle saddles.
pub fn saddle_count(data: &SeifertData) -> usize {
    data.minima() - 1 + 2 * data.genus_u64() as usize
}

fn to_i64(v: BigInt) -> i64 {
    v.to_i64().expect("grading does not fit in i64")
}

/// Robbin–Salamon index of the N-th iterate of a regular fiber in the
/// invariant trivialization: the frame turns once per 2π of fiber length.
pub fn robbin_salamon_regular(data: &SeifertData, iterate: u64) -> i64 {
    -2 * iterate as i64 * data.winding()
}

pub fn conley_zehnder(data: &SeifertData, orbit: &OrbitDescriptor) -> i64 {
    match orbit.kind {
        OrbitKind::Exceptional { j, .. } => {
            let t = &data.orbifold[j - 1].multiplicity;
            let turns = BigRational::new(BigInt::from(orbit.iterate) * &data.d, &data.m * t);
            -2 * to_i64(turns.floor().to_integer()) - 1
        }
        // CZ = RS - 1 + Morse index of the critical point.
        OrbitKind::Saddle { .. } => robbin_salamon_regular(data, orbit.iterate) - 1 + 1,
        OrbitKind::Maximum => robbin_salamon_regular(data, orbit.iterate) - 1 + 2,
    }
}

pub fn action(data: &SeifertData, orbit: &OrbitDescriptor) -> BigRational {
    let k = BigInt::from(orbit.iterate);
    match orbit.kind {
        OrbitKind::Exceptional { j, .. } => {
            BigRational::new(k * &data.d, &data.m * &data.orbifold[j - 1].multiplicity)
        }
        _ => BigRational::new(k * &data.d, data.m.clone()),
    }
}

pub fn fiber_class(data: &SeifertData, orbit: &OrbitDescriptor) -> Option<u64> {
    match orbit.kind {
        OrbitKind::Exceptional { j, .. } => {
            let t = data.multiplicities()[j - 1];
            orbit.iterate.is_multiple_of(t).then(|| orbit.iterate / t)
        }
        _ => Some(orbit.iterate),
    }
}

pub fn make_generator(data: &SeifertData, orbit: &OrbitDescriptor) -> OrbitGenerator {
    let cz = conley_zehnder(data, orbit);
    OrbitGenerator {
        kind: orbit.kind,
        iterate: orbit.iterate,
        cz,
        grading: cz - 1,
        action: action(data, orbit),
        fiber_class: fiber_class(data, orbit),
    }
}

/// Classification from the parity of CZ. In this family every hyperbolic
/// orbit is positive, so there are no bad orbits.
pub fn orbit_type(generator: &OrbitGenerator) -> OrbitClassification {
    let orbit_type = if generator.cz.rem_euclid(2) == 1 {
        OrbitType::Elliptic
    } else {
        OrbitType::PositiveHyperbolic
    };
    let bad = orbit_type == OrbitType::NegativeHyperbolic && generator.iterate.is_multiple_of(2);
    OrbitClassification {
        orbit_type,
        good: !bad,
    }
}

/// Fredholm index of a cylinder from `plus` to `minus`; the Chern term
/// vanishes in the global trivialization.
pub fn fredholm_index(plus: &OrbitGenerator, minus: &OrbitGenerator) -> i64 {
    plus.cz - minus.cz
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorFilter {
    /// Keep generators with grading `>=` the floor.
    GradingFloor(i64),
    /// Keep generators with action `<=` the bound (a multiple of 2π).
    ActionBound(BigRational),
}

impl GeneratorFilter {
    fn admits(&self, generator: &OrbitGenerator) -> bool {
        match self {
            Self::GradingFloor(floor) => generator.grading >= *floor,
            Self::ActionBound(bound) => &generator.action <= bound,
        }
    }
}

/// Every good generator passing the filter. Order: fibers over orbifold
/// points by `(j, i, k)`, then saddles by `(n, index)`, then the maxima by `n`.
pub fn enumerate_generators(data: &SeifertData, filter: &GeneratorFilter) -> Vec<OrbitGenerator> {
    let mut out = Vec::new();
    for (j, &count) in data.counts().iter().enumerate() {
        for i in 1..=count {
            // gradings and actions are monotone in the iterate
            for k in 1.. {
                let generator = make_generator(data, &OrbitDescriptor::exceptional(j + 1, i, k));
                if !filter.admits(&generator) {
                    break;
                }
                out.push(generator);
            }
        }
    }
    let saddles = saddle_count(data);
    let mut maxima = Vec::new();
    for n in 1.. {
        let maximum = make_generator(data, &OrbitDescriptor::maximum(n));
        let lowest = make_generator(data, &OrbitDescriptor::saddle(1, n));
        let keep_max = filter.admits(&maximum);
        let keep_saddles = saddles > 0 && filter.admits(&lowest);
        if !keep_max && !keep_saddles {
            break;
        }
        if keep_saddles {
            out.extend((1..=saddles).map(|l| make_generator(data, &OrbitDescriptor::saddle(l, n))));
        }
        if keep_max {
            maxima.push(maximum);
        }
    }
    out.extend(maxima);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimumLabel {
    pub j: usize,
    pub i: usize,
    pub multiplicity: u64,
}

/// Gradient-incidence data of the perturbing function on the base surface.
///
/// Minima sit at the orbifold points, ordered by `(j, i)`. Tree saddle `l`
/// flows down to minima `l` and `l + 1`; the `2g` handle saddles have zero
/// boundary, as does the maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseModel {
    pub minima: Vec<MinimumLabel>,
    pub tree_saddles: Vec<(usize, usize)>,
    pub handle_saddles: usize,
}

impl MorseModel {
    pub fn canonical(data: &SeifertData) -> Self {
        let multiplicities = data.multiplicities();
        let minima: Vec<MinimumLabel> = data
            .counts()
            .iter()
            .enumerate()
            .flat_map(|(j, &count)| {
                let multiplicity = multiplicities[j];
                (1..=count).map(move |i| MinimumLabel {
                    j: j + 1,
                    i,
                    multiplicity,
                })
            })
            .collect();
        let tree_saddles = (0..minima.len().saturating_sub(1)).map(|l| (l, l + 1)).collect();
        Self {
            minima,
            tree_saddles,
            handle_saddles: 2 * data.genus_u64() as usize,
        }
    }

    pub fn saddle_count(&self) -> usize {
        self.tree_saddles.len() + self.handle_saddles
    }

    /// Boundary from saddles to minima, one column per saddle.
    pub fn saddle_boundary(&self) -> RationalMatrix {
        let mut matrix = RationalMatrix::zeros(self.minima.len(), self.saddle_count());
        for (col, &(upper, lower)) in self.tree_saddles.iter().enumerate() {
            matrix.set(upper, col, BigRational::one());
            matrix.set(lower, col, -BigRational::one());
        }
        matrix
    }

    /// Morse homology ranks in degrees 0, 1, 2.
    pub fn homology(&self) -> [usize; 3] {
        let rank = self.saddle_boundary().rank();
        [
            self.minima.len() - rank,
            self.saddle_count() - rank,
            1,
        ]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.minima.len() as i64 - self.saddle_count() as i64 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum HomotopyClass {
    /// The n-th multiple of a regular fiber.
    Fiber(u64),
    /// The class of a single fiber iterate over an orbifold point that is
    /// not a fiber multiple.
    NonFiber(OrbitDescriptor),
}

impl fmt::Display for HomotopyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fiber(n) => write!(f, "fiber^{n}"),
            Self::NonFiber(orbit) => write!(f, "[{orbit}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    pub class: HomotopyClass,
    pub generators: BTreeMap<i64, Vec<OrbitGenerator>>,
    /// `differentials[k]` maps grading `k` to grading `k - 1`; column `c` is
    /// the boundary of `generators[k][c]`.
    pub differentials: BTreeMap<i64, RationalMatrix>,
}

impl GradedComplex {
    pub fn chain_dims(&self) -> BTreeMap<i64, usize> {
        self.generators.iter().map(|(&k, g)| (k, g.len())).collect()
    }

    /// `sum (-1)^k dim C_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.generators
            .iter()
            .map(|(&k, g)| if k.rem_euclid(2) == 0 { g.len() as i64 } else { -(g.len() as i64) })
            .sum()
    }

    /// Whether every pair of consecutive differentials composes to zero.
    pub fn squares_to_zero(&self) -> bool {
        self.differentials.iter().all(|(k, upper)| match self.differentials.get(&(k - 1)) {
            Some(lower) if lower.cols() == upper.rows() => (lower * upper).is_zero(),
            _ => true,
        })
    }
}

pub fn build_complex(data: &SeifertData, class: HomotopyClass) -> Result<GradedComplex, OrbitError> {
    match class {
        HomotopyClass::NonFiber(orbit) => {
            orbit.validate(data)?;
            if !matches!(orbit.kind, OrbitKind::Exceptional { .. })
                || fiber_class(data, &orbit).is_some()
            {
                return Err(OrbitError::NotNonFiber(orbit));
            }
            let generator = make_generator(data, &orbit);
            let grading = generator.grading;
            Ok(GradedComplex {
                class,
                generators: BTreeMap::from([(grading, vec![generator])]),
                differentials: BTreeMap::from([(grading, RationalMatrix::zeros(0, 1))]),
            })
        }
        HomotopyClass::Fiber(0) => Err(OrbitError::ZeroClass),
        HomotopyClass::Fiber(n) => {
            let model = MorseModel::canonical(data);
            let minima: Vec<OrbitGenerator> = model
                .minima
                .iter()
                .map(|label| {
                    make_generator(
                        data,
                        &OrbitDescriptor::exceptional(label.j, label.i, n * label.multiplicity),
                    )
                })
                .collect();
            let saddles: Vec<OrbitGenerator> = (1..=model.saddle_count())
                .map(|l| make_generator(data, &OrbitDescriptor::saddle(l, n)))
                .collect();
            let maximum = make_generator(data, &OrbitDescriptor::maximum(n));

            let bottom = -2 * n as i64 * data.winding() - 2;
            debug_assert!(minima.iter().all(|g| g.grading == bottom));
            debug_assert!(saddles.iter().all(|g| g.grading == bottom + 1));
            debug_assert_eq!(maximum.grading, bottom + 2);

            let mut differentials = BTreeMap::new();
            differentials.insert(bottom, RationalMatrix::zeros(0, minima.len()));
            differentials.insert(bottom + 1, model.saddle_boundary());
            differentials.insert(bottom + 2, RationalMatrix::zeros(saddles.len(), 1));

            let mut generators = BTreeMap::new();
            generators.insert(bottom, minima);
            if !saddles.is_empty() {
                generators.insert(bottom + 1, saddles);
            } else {
                differentials.remove(&(bottom + 1));
            }
            generators.insert(bottom + 2, vec![maximum]);
            Ok(GradedComplex {
                class,
                generators,
                differentials,
            })
        }
    }
}

/// Every non-fiber class containing a generator at or above the grading floor.
pub fn non_fiber_classes(data: &SeifertData, grading_floor: i64) -> Vec<HomotopyClass> {
    enumerate_generators(data, &GeneratorFilter::GradingFloor(grading_floor))
        .into_iter()
        .filter(|g| g.fiber_class.is_none())
        .map(|g| HomotopyClass::NonFiber(g.descriptor()))
        .collect()
}
