//! Integer helpers shared by the symbol and form modules: factoring,
//! primality, valuations, rational parsing.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_prime::nt_funcs;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Prime factorization of `n > 0`, primes ascending.
pub fn factor(n: &BigUint) -> BTreeMap<BigUint, usize> {
    if n.is_zero() || n.is_one() {
        return BTreeMap::new();
    }
    if let Some(small) = n.to_u128() {
        return nt_funcs::factorize128(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    nt_funcs::factorize(n.clone())
}

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return nt_funcs::is_prime64(small);
    }
    nt_funcs::is_prime(n, None).probably()
}

/// Splits `n = p^k * rest` with `p` not dividing `rest`. `n` must be nonzero.
pub fn split_power(n: &BigInt, p: &BigUint) -> (u32, BigInt) {
    let p = BigInt::from(p.clone());
    let mut k = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return (k, rest);
        }
        rest = q;
        k += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(q: &BigRational, p: &BigUint) -> i64 {
    let (a, _) = split_power(q.numer(), p);
    let (b, _) = split_power(q.denom(), p);
    a as i64 - b as i64
}

/// Primes dividing the numerator or denominator of `q`.
pub fn support(q: &BigRational) -> Vec<BigUint> {
    let mut out: Vec<BigUint> = factor(q.numer().magnitude())
        .into_keys()
        .chain(factor(q.denom().magnitude()).into_keys())
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parses `"n"` or `"n/d"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

pub fn sign_of(q: &BigRational) -> Sign {
    if q.is_zero() {
        Sign::NoSign
    } else if q.is_negative() {
        Sign::Minus
    } else {
        Sign::Plus
    }
}
