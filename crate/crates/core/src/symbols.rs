//! Places of Q, square classes and the residue/Hilbert symbols.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// A place of Q. The derived order puts the infinite place first and then
/// the primes ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinite,
    Finite(BigUint),
}

impl Place {
    pub fn prime(p: impl Into<BigUint>) -> Result<Place> {
        let p = p.into();
        if !arith::is_prime(&p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    /// Skips the primality check; for primes coming out of a factorization.
    pub(crate) fn from_prime(p: BigUint) -> Place {
        Place::Finite(p)
    }

    pub(crate) fn small(p: u64) -> Place {
        Place::Finite(BigUint::from(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }

    pub fn as_prime(&self) -> Option<&BigUint> {
        match self {
            Place::Infinite => None,
            Place::Finite(p) => Some(p),
        }
    }

    pub fn is_dyadic(&self) -> bool {
        matches!(self, Place::Finite(p) if *p == BigUint::from(2u32))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => f.write_str("inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "oo" | "∞" => Ok(Place::Infinite),
            t => {
                let p = BigUint::from_str(t)
                    .map_err(|_| Error::Parse(format!("malformed place {t:?}")))?;
                Place::prime(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Place, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Place::prime(n).map_err(serde::de::Error::custom),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A class in Q^x / (Q^x)^2, kept as its sign and the sorted primes of its
/// squarefree representative so that symbols never refactor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClassQ {
    negative: bool,
    primes: Vec<BigUint>,
}

impl SquareClassQ {
    pub fn one() -> Self {
        SquareClassQ { negative: false, primes: Vec::new() }
    }

    pub fn minus_one() -> Self {
        SquareClassQ { negative: true, primes: Vec::new() }
    }

    pub(crate) fn from_parts(negative: bool, mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        primes.dedup();
        SquareClassQ { negative, primes }
    }

    pub fn from_int(n: i64) -> Result<Self> {
        Self::from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::Zero);
        }
        let primes = arith::factor(n.magnitude())
            .into_iter()
            .filter(|(_, e)| e % 2 == 1)
            .map(|(p, _)| p)
            .collect();
        Ok(SquareClassQ { negative: n.is_negative(), primes })
    }

    /// `q` and `q * den^2` share a class, so `num * den` represents `q`.
    pub fn from_rational(q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::Zero);
        }
        let a = Self::from_bigint(q.numer())?;
        let b = Self::from_bigint(q.denom())?;
        Ok(&a * &b)
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn contains_prime(&self, p: &BigUint) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    pub fn is_square(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    /// The signed squarefree integer in this class.
    pub fn rep(&self) -> BigInt {
        let m: BigUint = self.primes.iter().product();
        let m = BigInt::from(m);
        if self.negative {
            -m
        } else {
            m
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.rep().to_i64()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.rep())
    }

    pub fn pow(&self, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Self::one()
        } else {
            self.clone()
        }
    }

    /// Order used to pick canonical representatives: smaller absolute
    /// value first, positive before negative.
    pub fn canonical_key(&self) -> (BigInt, bool) {
        (self.rep().abs(), self.negative)
    }
}

impl Mul for &SquareClassQ {
    type Output = SquareClassQ;

    fn mul(self, rhs: &SquareClassQ) -> SquareClassQ {
        let a: BTreeSet<&BigUint> = self.primes.iter().collect();
        let b: BTreeSet<&BigUint> = rhs.primes.iter().collect();
        SquareClassQ {
            negative: self.negative != rhs.negative,
            primes: a.symmetric_difference(&b).map(|p| (*p).clone()).collect(),
        }
    }
}

impl Mul for SquareClassQ {
    type Output = SquareClassQ;

    fn mul(self, rhs: SquareClassQ) -> SquareClassQ {
        &self * &rhs
    }
}

impl fmt::Display for SquareClassQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep())
    }
}

impl FromStr for SquareClassQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_rational(&arith::parse_rational(s)?)
    }
}

impl Serialize for SquareClassQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_i64() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.rep().to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for SquareClassQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => SquareClassQ::from_int(n).map_err(serde::de::Error::custom),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

pub fn squarefree_part(q: &BigRational) -> Result<SquareClassQ> {
    SquareClassQ::from_rational(q)
}

/// Jacobi symbol `(a|n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> i8 {
    debug_assert!(n.is_odd());
    let mut n = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n);
    let mut t = 1i8;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

pub fn legendre(a: &BigInt, p: &BigUint) -> Result<i8> {
    if p.is_even() || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    Ok(jacobi(a, p))
}

/// Kronecker symbol `(a|n)`. For negative `n` the factor `(a|-1)` is `-1`
/// exactly when `a < 0`; the factor `(a|2)` is `0` for even `a`, otherwise
/// `+1` for `a = ±1 mod 8` and `-1` for `a = ±3 mod 8`.
pub fn kronecker(a: &BigInt, n: &BigInt) -> Result<i8> {
    if n.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let mut t = 1i8;
    if n.is_negative() && a.is_negative() {
        t = -t;
    }
    let m = n.magnitude().clone();
    let twos = m.trailing_zeros().unwrap_or(0);
    let odd = &m >> twos;
    if twos > 0 {
        if a.is_even() {
            return Ok(0);
        }
        let r = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
        if (r == 3 || r == 5) && twos % 2 == 1 {
            t = -t;
        }
    }
    if odd.is_one() {
        return Ok(t);
    }
    Ok(t * jacobi(a, &odd))
}

fn mod4_is_3(u: &BigInt) -> bool {
    u.mod_floor(&BigInt::from(4)) == BigInt::from(3)
}

fn mod8_is_pm3(u: &BigInt) -> bool {
    let r = u.mod_floor(&BigInt::from(8)).to_u8().unwrap();
    r == 3 || r == 5
}

/// Hilbert symbol on square classes.
pub fn hilbert_sq(a: &SquareClassQ, b: &SquareClassQ, v: &Place) -> i8 {
    let p = match v {
        Place::Infinite => return if a.negative && b.negative { -1 } else { 1 },
        Place::Finite(p) => p,
    };
    let alpha = a.contains_prime(p);
    let beta = b.contains_prime(p);
    let pp = BigInt::from(p.clone());
    let u = if alpha { a.rep() / &pp } else { a.rep() };
    let w = if beta { b.rep() / &pp } else { b.rep() };
    if *p == BigUint::from(2u32) {
        let mut e = mod4_is_3(&u) && mod4_is_3(&w);
        if alpha && mod8_is_pm3(&w) {
            e = !e;
        }
        if beta && mod8_is_pm3(&u) {
            e = !e;
        }
        return if e { -1 } else { 1 };
    }
    let mut s = 1i8;
    if alpha && beta && mod4_is_3(&pp) {
        s = -s;
    }
    if beta {
        s *= jacobi(&u, p);
    }
    if alpha {
        s *= jacobi(&w, p);
    }
    s
}

/// Local Hilbert symbol `(a,b)_v`: `+1` when the quaternion algebra
/// `(a,b)_Q` splits at `v`, `-1` otherwise.
pub fn hilbert(a: &BigRational, b: &BigRational, v: &Place) -> Result<i8> {
    Ok(hilbert_sq(&squarefree_part(a)?, &squarefree_part(b)?, v))
}

/// The places where `(a,b)_v` can be nontrivial: infinity and the primes
/// dividing `2ab`.
pub fn relevant_places(a: &SquareClassQ, b: &SquareClassQ) -> BTreeSet<Place> {
    let mut out = BTreeSet::new();
    out.insert(Place::Infinite);
    out.insert(Place::small(2));
    for p in a.primes.iter().chain(b.primes.iter()) {
        out.insert(Place::from_prime(p.clone()));
    }
    out
}

pub fn ramified_places(a: &SquareClassQ, b: &SquareClassQ) -> BTreeSet<Place> {
    relevant_places(a, b)
        .into_iter()
        .filter(|v| hilbert_sq(a, b, v) == -1)
        .collect()
}

pub fn hilbert_reciprocity_check(a: &BigRational, b: &BigRational) -> Result<bool> {
    let a = squarefree_part(a)?;
    let b = squarefree_part(b)?;
    let prod: i8 = relevant_places(&a, &b).iter().map(|v| hilbert_sq(&a, &b, v)).product();
    Ok(prod == 1)
}

/// `(-1)^(n(n-1)/2)`, the sign in front of a signed determinant.
pub fn signed_det_sign(n: usize) -> i8 {
    if (n % 4) < 2 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{big, rat};

    fn sq(n: i64) -> SquareClassQ {
        SquareClassQ::from_int(n).unwrap()
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&rat(18, 1)).unwrap().rep(), big(2));
        assert_eq!(squarefree_part(&rat(-4, 9)).unwrap().rep(), big(-1));
        assert_eq!(squarefree_part(&rat(55, 1)).unwrap().rep(), big(55));
        assert_eq!(squarefree_part(&rat(1, 5)).unwrap().rep(), big(5));
        assert_eq!(squarefree_part(&rat(0, 1)), Err(Error::Zero));
    }

    #[test]
    fn legendre_values() {
        let p = |n: u32| BigUint::from(n);
        assert_eq!(legendre(&big(1), &p(7)).unwrap(), 1);
        assert_eq!(legendre(&big(-1), &p(7)).unwrap(), -1);
        assert_eq!(legendre(&big(2), &p(5)).unwrap(), -1);
        assert_eq!(legendre(&big(10), &p(5)).unwrap(), 0);
        assert!(legendre(&big(1), &p(2)).is_err());
        assert!(legendre(&big(1), &p(9)).is_err());
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let squares: BTreeSet<u64> = (1..p).map(|x| x * x % p).collect();
            for a in -40i64..40 {
                let r = (a.rem_euclid(p as i64)) as u64;
                let want = if r == 0 { 0 } else if squares.contains(&r) { 1 } else { -1 };
                assert_eq!(legendre(&big(a), &BigUint::from(p)).unwrap(), want);
            }
        }
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(&big(-3), &big(7)).unwrap(), 1);
        assert_eq!(kronecker(&big(-20), &big(3)).unwrap(), 1);
        assert_eq!(kronecker(&big(-3), &big(2)).unwrap(), -1);
        assert_eq!(kronecker(&big(-15), &big(2)).unwrap(), 1);
        assert_eq!(kronecker(&big(-4), &big(2)).unwrap(), 0);
        assert_eq!(kronecker(&big(-5), &big(-1)).unwrap(), -1);
        assert_eq!(kronecker(&big(5), &big(-1)).unwrap(), 1);
        assert_eq!(kronecker(&big(3), &big(0)), Err(Error::ZeroModulus));
    }

    #[test]
    fn kronecker_is_multiplicative_in_n() {
        for a in -30i64..30 {
            for m in 1i64..25 {
                for n in 1i64..25 {
                    let lhs = kronecker(&big(a), &big(m * n)).unwrap();
                    let rhs = kronecker(&big(a), &big(m)).unwrap() * kronecker(&big(a), &big(n)).unwrap();
                    assert_eq!(lhs, rhs, "a={a} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        let h = |a: i64, b: i64, v: Place| hilbert(&rat(a, 1), &rat(b, 1), &v).unwrap();
        assert_eq!(h(-1, -1, Place::Infinite), -1);
        assert_eq!(h(-1, -1, Place::small(2)), -1);
        assert_eq!(h(-10, -5, Place::small(5)), -1);
        assert_eq!(h(-10, -5, Place::Infinite), -1);
        assert_eq!(h(-10, -5, Place::small(2)), 1);
        assert_eq!(h(1, 7, Place::small(7)), 1);
        assert_eq!(h(1, -3, Place::Infinite), 1);
    }

    #[test]
    fn ramification_of_pairs() {
        let r = ramified_places(&sq(-10), &sq(5));
        assert_eq!(r.into_iter().collect::<Vec<_>>(), vec![Place::small(2), Place::small(5)]);
        let r = ramified_places(&sq(-1), &sq(-1));
        assert_eq!(r.into_iter().collect::<Vec<_>>(), vec![Place::Infinite, Place::small(2)]);
    }

    #[test]
    fn reciprocity_examples() {
        for (a, b) in [(-1, -1), (-10, -5), (3, 7), (2, 3), (-6, 35)] {
            assert!(hilbert_reciprocity_check(&rat(a, 1), &rat(b, 1)).unwrap());
        }
    }

    #[test]
    fn square_class_arithmetic() {
        assert_eq!((&sq(-10) * &sq(15)).rep(), big(-6));
        assert_eq!((&sq(7) * &sq(7)), SquareClassQ::one());
        assert_eq!(sq(-21).pow(3), sq(-21));
        assert_eq!(sq(-21).pow(2), SquareClassQ::one());
        assert!(sq(-5).canonical_key() > sq(5).canonical_key());
        assert!(sq(-2).canonical_key() < sq(5).canonical_key());
    }

    #[test]
    fn place_order_and_parse() {
        let mut v = vec![Place::small(5), Place::Infinite, Place::small(2)];
        v.sort();
        assert_eq!(v, vec![Place::Infinite, Place::small(2), Place::small(5)]);
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinite);
        assert_eq!("7".parse::<Place>().unwrap(), Place::small(7));
        assert!("9".parse::<Place>().is_err());
        assert_eq!(Place::small(7).to_string(), "7");
    }
}
