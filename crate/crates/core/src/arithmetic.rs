//! Exponent validation and the integer invariants of the Seifert fibration.
//!
//! Everything here is exact: exponents are machine integers, every derived
//! quantity is a [`BigInt`] or [`BigRational`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("invalid exponents: {0}")]
    InvalidExponent(String),
    /// `gap` is `(n - 2) - sum(1/a_j)`, which is `<= 0` here.
    #[error("exponents are not of hyperbolic type: (n-2) - sum 1/a_j = {gap}")]
    NotHyperbolic { gap: BigRational },
}

/// Validated exponents `(a_1, ..., a_n)`, kept in the order they were given.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BrieskornParams {
    exponents: Vec<u64>,
}

impl BrieskornParams {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `(n - 2) - sum(1/a_j)`, strictly positive for validated params.
    pub fn hyperbolic_gap(&self) -> BigRational {
        hyperbolic_gap(&self.exponents)
    }

    /// Interior angles `pi / a_j` of the base polygon.
    pub fn angles(&self) -> Vec<f64> {
        self.exponents
            .iter()
            .map(|&a| std::f64::consts::PI / a as f64)
            .collect()
    }
}

impl fmt::Display for BrieskornParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|a| a.to_string()).collect();
        write!(f, "Σ({})", parts.join(","))
    }
}

fn hyperbolic_gap(exponents: &[u64]) -> BigRational {
    let n = exponents.len() as i64;
    let sum = exponents
        .iter()
        .fold(BigRational::zero(), |acc, &a| {
            acc + BigRational::new(BigInt::one(), BigInt::from(a))
        });
    BigRational::from_integer(BigInt::from(n - 2)) - sum
}

pub fn validate_params(raw: &[i64]) -> Result<BrieskornParams, ArithmeticError> {
    if raw.len() < 3 {
        return Err(ArithmeticError::InvalidExponent(format!(
            "need at least 3 exponents, got {}",
            raw.len()
        )));
    }
    if let Some((j, a)) = raw.iter().enumerate().find(|(_, &a)| a < 2) {
        return Err(ArithmeticError::InvalidExponent(format!(
            "a_{} = {} but every exponent must be at least 2",
            j + 1,
            a
        )));
    }
    let exponents: Vec<u64> = raw.iter().map(|&a| a as u64).collect();
    let gap = hyperbolic_gap(&exponents);
    if !gap.is_positive() {
        return Err(ArithmeticError::NotHyperbolic { gap });
    }
    Ok(BrieskornParams { exponents })
}

/// One family of orbifold points: `count` points (s_j) of multiplicity `multiplicity` (t_j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldFamily {
    pub count: BigInt,
    pub multiplicity: BigInt,
}

/// Invariants of the Seifert fibration and of the centrally extended group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    pub params: BrieskornParams,
    /// Index of the commutator subgroup in the extended polygon group.
    pub d: BigInt,
    /// Index of the commutator subgroup in the polygon group.
    pub m: BigInt,
    /// `d / m`: full 2π-rotations of the invariant frame along a regular fiber.
    pub fiber_winding: BigInt,
    /// Only for three exponents: `1/s = 1 - 1/p - 1/q - 1/r`.
    pub s: Option<BigRational>,
    pub orbifold: Vec<OrbifoldFamily>,
    pub genus: BigInt,
    /// `M = sum_j s_j`, the number of minima of the Morse model.
    pub minima_count: BigInt,
}

impl SeifertData {
    pub fn n(&self) -> usize {
        self.params.len()
    }

    /// Fiber winding as a machine integer; gradings are formed from it.
    pub fn winding(&self) -> i64 {
        self.fiber_winding
            .to_i64()
            .expect("fiber winding d/m does not fit in i64")
    }

    pub fn genus_u64(&self) -> u64 {
        self.genus.to_u64().expect("genus does not fit in u64")
    }

    pub fn counts(&self) -> Vec<usize> {
        self.orbifold
            .iter()
            .map(|f| f.count.to_usize().expect("orbifold count does not fit in usize"))
            .collect()
    }

    pub fn multiplicities(&self) -> Vec<u64> {
        self.orbifold
            .iter()
            .map(|f| {
                f.multiplicity
                    .to_u64()
                    .expect("orbifold multiplicity does not fit in u64")
            })
            .collect()
    }

    pub fn minima(&self) -> usize {
        self.minima_count
            .to_usize()
            .expect("minima count does not fit in usize")
    }

    /// Euler characteristic `2 - 2g` of the base surface.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus.to_i64().expect("genus does not fit in i64")
    }
}

fn lcm_all<'a>(values: impl Iterator<Item = &'a BigInt>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v))
}

pub fn seifert_data(params: &BrieskornParams) -> SeifertData {
    let a: Vec<BigInt> = params.exponents.iter().map(|&x| BigInt::from(x)).collect();
    let n = a.len();
    let product: BigInt = a.iter().product();
    let lcm = lcm_all(a.iter());

    let d_rat = BigRational::from_integer(product.clone()) * params.hyperbolic_gap();
    assert!(d_rat.is_integer(), "d = {d_rat} is not an integer");
    let d = d_rat.to_integer();

    let others = |j: usize| a.iter().enumerate().filter(move |(i, _)| *i != j).map(|(_, v)| v);
    let products_without: Vec<BigInt> = (0..n).map(|j| others(j).product()).collect();
    let lcms_without: Vec<BigInt> = (0..n).map(|j| lcm_all(others(j))).collect();

    let m = products_without
        .iter()
        .fold(BigInt::zero(), |acc, p| acc.gcd(p));
    assert!(
        d.is_multiple_of(&m),
        "m = {m} does not divide d = {d}; invariant arithmetic is broken"
    );
    let fiber_winding = &d / &m;

    let orbifold: Vec<OrbifoldFamily> = (0..n)
        .map(|j| {
            let count = &products_without[j] / &lcms_without[j];
            let multiplicity = &lcm / &lcms_without[j];
            debug_assert!(products_without[j].is_multiple_of(&lcms_without[j]));
            OrbifoldFamily {
                count,
                multiplicity,
            }
        })
        .collect();
    let minima_count: BigInt = orbifold.iter().map(|f| &f.count).sum();

    let twice_genus =
        BigInt::from(2) + BigInt::from(n as i64 - 2) * (&product / &lcm) - &minima_count;
    assert!(
        twice_genus.is_even() && !twice_genus.is_negative(),
        "genus formula gave 2g = {twice_genus}"
    );
    let genus = twice_genus / 2;

    let s = (n == 3).then(|| params.hyperbolic_gap().recip());

    SeifertData {
        params: params.clone(),
        d,
        m,
        fiber_winding,
        s,
        orbifold,
        genus,
        minima_count,
    }
}
