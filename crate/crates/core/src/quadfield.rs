//! The imaginary quadratic field `L = Q(sqrt(-d))`: elements, prime
//! splitting, norm membership.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, split_power};
use crate::error::{Error, Result};
use crate::symbols::{hilbert_sq, jacobi, kronecker, relevant_places, Place, SquareClassQ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeBehavior {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for PrimeBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeBehavior::Split => "split",
            PrimeBehavior::Inert => "inert",
            PrimeBehavior::Ramified => "ramified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct ImagQuadField {
    delta0: u64,
    field_disc: i64,
}

impl TryFrom<u64> for ImagQuadField {
    type Error = Error;

    fn try_from(d: u64) -> Result<Self> {
        ImagQuadField::new(d)
    }
}

impl From<ImagQuadField> for u64 {
    fn from(l: ImagQuadField) -> u64 {
        l.delta0
    }
}

impl ImagQuadField {
    pub fn new(delta0: u64) -> Result<Self> {
        let sqf = delta0 > 0
            && arith::factor(&BigUint::from(delta0)).values().all(|&e| e == 1);
        if !sqf || delta0 > (i64::MAX / 4) as u64 {
            return Err(Error::BadField(delta0.to_string()));
        }
        let d = -(delta0 as i64);
        let field_disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(ImagQuadField { delta0, field_disc })
    }

    pub fn delta0(&self) -> u64 {
        self.delta0
    }

    pub fn field_disc(&self) -> i64 {
        self.field_disc
    }

    /// Square class of the field discriminant, i.e. of `-delta0`.
    pub fn disc_class(&self) -> SquareClassQ {
        SquareClassQ::from_int(-(self.delta0 as i64)).expect("nonzero")
    }

    /// The primes dividing the field discriminant.
    pub fn ramified_primes(&self) -> Vec<BigUint> {
        arith::factor(BigInt::from(self.field_disc).magnitude()).into_keys().collect()
    }

    pub fn prime_behavior(&self, p: &BigUint) -> PrimeBehavior {
        let dl = BigInt::from(self.field_disc);
        let pp = BigInt::from(p.clone());
        if (&dl % &pp).is_zero() {
            return PrimeBehavior::Ramified;
        }
        match kronecker(&dl, &pp).expect("p > 0") {
            1 => PrimeBehavior::Split,
            _ => PrimeBehavior::Inert,
        }
    }

    pub fn place_behavior(&self, v: &Place) -> Option<PrimeBehavior> {
        v.as_prime().map(|p| self.prime_behavior(p))
    }

    pub fn norm_class_sq(&self, a: &SquareClassQ) -> BTreeSet<Place> {
        let d = self.disc_class();
        relevant_places(a, &d)
            .into_iter()
            .filter(|v| hilbert_sq(a, &d, v) == -1)
            .collect()
    }

    /// The places where `(a, d_L)_v = -1`. Empty exactly for norms.
    pub fn norm_class(&self, a: &BigRational) -> Result<BTreeSet<Place>> {
        Ok(self.norm_class_sq(&SquareClassQ::from_rational(a)?))
    }

    /// Norm test through the local Hilbert symbols at every place.
    pub fn is_norm(&self, a: &BigRational) -> Result<bool> {
        Ok(self.norm_class(a)?.is_empty())
    }

    /// Norm test through the three local criteria: positivity, even
    /// valuation at inert primes, and local norms at the ramified primes.
    pub fn is_norm_local_criteria(&self, a: &BigRational) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::Zero);
        }
        if a.is_negative() {
            return Ok(false);
        }
        for p in arith::support(a) {
            if self.prime_behavior(&p) == PrimeBehavior::Inert && arith::valuation(a, &p) % 2 != 0 {
                return Ok(false);
            }
        }
        let a_sq = SquareClassQ::from_rational(a)?;
        for p in self.ramified_primes() {
            if !self.is_local_norm_at_ramified(&a_sq, &p) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// At an odd ramified `p`, `pi = sqrt(-delta0)` has norm `delta0`, so
    /// `a = p^k u` is a norm iff `a / delta0^k` is a unit square mod `p`.
    /// The dyadic case goes through the closed Hilbert symbol formula.
    fn is_local_norm_at_ramified(&self, a: &SquareClassQ, p: &BigUint) -> bool {
        if p.is_even() {
            return hilbert_sq(a, &self.disc_class(), &Place::Finite(p.clone())) == 1;
        }
        let (k, u) = split_power(&a.rep(), p);
        let (_, d_rest) = split_power(&BigInt::from(self.delta0), p);
        let t = if k % 2 == 1 { u * d_rest } else { u };
        jacobi(&t, p) == 1
    }

    pub fn splits_place(&self, v: &Place) -> bool {
        self.place_behavior(v) == Some(PrimeBehavior::Split)
    }
}

impl fmt::Display for ImagQuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{}))", self.delta0)
    }
}

/// `x + y sqrt(-delta0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub x: BigRational,
    pub y: BigRational,
    pub field: ImagQuadField,
}

impl QuadElem {
    pub fn new(x: BigRational, y: BigRational, field: &ImagQuadField) -> Self {
        QuadElem { x, y, field: field.clone() }
    }

    pub fn from_rational(x: BigRational, field: &ImagQuadField) -> Self {
        QuadElem::new(x, BigRational::zero(), field)
    }

    pub fn zero(field: &ImagQuadField) -> Self {
        Self::from_rational(BigRational::zero(), field)
    }

    pub fn one(field: &ImagQuadField) -> Self {
        Self::from_rational(BigRational::one(), field)
    }

    /// `sqrt(-delta0)` itself.
    pub fn root(field: &ImagQuadField) -> Self {
        QuadElem::new(BigRational::zero(), BigRational::one(), field)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    fn d(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.field.delta0))
    }

    pub fn conj(&self) -> Self {
        QuadElem::new(self.x.clone(), -self.y.clone(), &self.field)
    }

    pub fn norm(&self) -> BigRational {
        &self.x * &self.x + self.d() * &self.y * &self.y
    }

    pub fn trace(&self) -> BigRational {
        &self.x + &self.x
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QuadElem::new(&self.x / &n, -&self.y / &n, &self.field))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QuadElem::new(&self.x * r, &self.y * r, &self.field)
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        QuadElem::new(&self.x + &o.x, &self.y + &o.y, &self.field)
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        QuadElem::new(&self.x - &o.x, &self.y - &o.y, &self.field)
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        let x = &self.x * &o.x - self.d() * &self.y * &o.y;
        let y = &self.x * &o.y + &self.y * &o.x;
        QuadElem::new(x, y, &self.field)
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(-self.x.clone(), -self.y.clone(), &self.field)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let r = format!("sqrt(-{})", self.field.delta0);
        let ypart = if self.y.is_one() {
            r
        } else if self.y == -BigRational::one() {
            format!("-{r}")
        } else {
            format!("{}*{r}", self.y)
        };
        if self.x.is_zero() {
            f.write_str(&ypart)
        } else if let Some(rest) = ypart.strip_prefix('-') {
            write!(f, "{} - {}", self.x, rest)
        } else {
            write!(f, "{} + {}", self.x, ypart)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn field(d: u64) -> ImagQuadField {
        ImagQuadField::new(d).unwrap()
    }

    fn places(v: &[u64], inf: bool) -> BTreeSet<Place> {
        let mut s: BTreeSet<Place> = v.iter().map(|&p| Place::small(p)).collect();
        if inf {
            s.insert(Place::Infinite);
        }
        s
    }

    #[test]
    fn construction() {
        assert_eq!(field(3).field_disc(), -3);
        assert_eq!(field(1).field_disc(), -4);
        assert_eq!(field(10).field_disc(), -40);
        assert_eq!(field(15).field_disc(), -15);
        assert!(ImagQuadField::new(0).is_err());
        assert!(ImagQuadField::new(12).is_err());
    }

    #[test]
    fn element_ops() {
        let l = field(5);
        let e = QuadElem::new(rat(3, 1), rat(2, 1), &l);
        assert_eq!(e.conj(), QuadElem::new(rat(3, 1), rat(-2, 1), &l));
        assert_eq!(e.trace(), rat(6, 1));
        assert_eq!(e.norm(), rat(29, 1));
        let l3 = field(3);
        assert_eq!(QuadElem::new(rat(1, 1), rat(1, 1), &l3).norm(), rat(4, 1));
        let prod = &e * &e.inv().unwrap();
        assert_eq!(prod, QuadElem::one(&l));
        assert_eq!(e.to_string(), "3 + 2*sqrt(-5)");
        assert_eq!(e.conj().to_string(), "3 - 2*sqrt(-5)");
    }

    #[test]
    fn splitting() {
        let b = |d: u64, p: u32| field(d).prime_behavior(&BigUint::from(p));
        assert_eq!(b(3, 7), PrimeBehavior::Split);
        assert_eq!(b(3, 3), PrimeBehavior::Ramified);
        assert_eq!(b(3, 2), PrimeBehavior::Inert);
        assert_eq!(b(15, 2), PrimeBehavior::Split);
        assert_eq!(b(1, 2), PrimeBehavior::Ramified);
        assert_eq!(b(20 / 4, 3), PrimeBehavior::Split);
    }

    /// Counts prime ideals above `p` by factoring the minimal polynomial
    /// of an integral generator mod `p`.
    fn brute_behavior(d: u64, p: u64) -> PrimeBehavior {
        let d = d as i64;
        let p = p as i64;
        // generator (1 + sqrt(-d))/2 when -d = 1 mod 4, else sqrt(-d)
        let (b, c) = if (-d).rem_euclid(4) == 1 { (-1, (1 + d) / 4) } else { (0, d) };
        let roots: Vec<i64> = (0..p).filter(|x| (x * x + b * x + c).rem_euclid(p) == 0).collect();
        let disc = (b * b - 4 * c).rem_euclid(p);
        match roots.len() {
            0 => PrimeBehavior::Inert,
            1 => PrimeBehavior::Ramified,
            _ if disc == 0 => PrimeBehavior::Ramified,
            _ => PrimeBehavior::Split,
        }
    }

    #[test]
    fn splitting_matches_polynomial_factorization() {
        for d in [1u64, 2, 3, 5, 6, 7, 10, 11, 14, 15, 19, 21, 23, 31, 35, 43] {
            for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
                assert_eq!(
                    field(d).prime_behavior(&BigUint::from(p)),
                    brute_behavior(d, p),
                    "d={d} p={p}"
                );
            }
        }
    }

    #[test]
    fn norms() {
        let l3 = field(3);
        assert!(!l3.is_norm(&rat(-1, 1)).unwrap());
        assert!(l3.is_norm(&rat(7, 1)).unwrap());
        assert!(!l3.is_norm(&rat(5, 1)).unwrap());
        assert!(l3.is_norm(&rat(19 * 31, 1)).unwrap());
        assert!(l3.is_norm(&rat(4, 25)).unwrap());
        for a in [-1, 7, 5, 3, -3, 12, 21] {
            let q = rat(a, 1);
            assert_eq!(l3.is_norm(&q).unwrap(), l3.is_norm_local_criteria(&q).unwrap(), "{a}");
        }
    }

    #[test]
    fn norm_classes() {
        assert!(field(7).norm_class(&rat(1, 1)).unwrap().is_empty());
        assert_eq!(field(3).norm_class(&rat(-5, 1)).unwrap(), places(&[5], true));
        // 2 is inert in Q(sqrt(-3)) and 3 is ramified, so -10 picks up both
        assert_eq!(field(3).norm_class(&rat(-10, 1)).unwrap(), places(&[2, 3, 5], true));
        assert_eq!(field(10).norm_class(&rat(-5, 1)).unwrap(), places(&[5], true));
        assert_eq!(field(10).norm_class(&rat(-1, 1)).unwrap(), places(&[2], true));
    }
}
