use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A point with exact rational coordinates. `BigRational` keeps every
/// coordinate in lowest terms with a positive denominator, so equality is
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<BigRational>);

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![BigRational::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self(
            v.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    pub fn from_fractions(v: &[(i64, i64)]) -> Self {
        Self(
            v.iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigRational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot_int(&self, normal: &[BigInt]) -> Result<BigRational> {
        if normal.len() != self.0.len() {
            return Err(Error::DimensionMismatch {
                expected: self.0.len(),
                found: normal.len(),
            });
        }
        Ok(self
            .0
            .iter()
            .zip(normal)
            .filter(|(_, a)| !a.is_zero())
            .map(|(x, a)| x * a)
            .sum())
    }

    pub fn scaled(&self, s: &BigRational) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &RationalVector) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self + t * dir`
    pub fn axpy(&self, t: &BigRational, dir: &RationalVector) -> Self {
        Self(self.0.iter().zip(&dir.0).map(|(a, d)| a + t * d).collect())
    }

    /// Least common multiple of the denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// The smallest positive integer multiple of `self` with integer
    /// coordinates, divided through by the gcd of those coordinates.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let d = self.common_denominator();
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| (x * BigRational::from_integer(d.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() || g.is_one() {
            ints
        } else {
            ints.into_iter().map(|x| x / &g).collect()
        }
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRational::is_integer)
    }

    pub fn all_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }
}

impl Index<usize> for RationalVector {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}
