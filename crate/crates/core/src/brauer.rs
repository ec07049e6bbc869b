//! Brauer classes of order at most two over Q, stored as their sets of
//! ramified places.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::quadfield::{ImagQuadField, PrimeBehavior};
use crate::symbols::{hilbert_sq, ramified_places, Place, SquareClassQ};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerClassQ {
    ram: BTreeSet<Place>,
}

impl BrauerClassQ {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(ram: impl IntoIterator<Item = Place>) -> Result<Self> {
        let ram: BTreeSet<Place> = ram.into_iter().collect();
        if ram.len() % 2 == 1 {
            return Err(Error::OddRamification(render_ram(&ram)));
        }
        Ok(BrauerClassQ { ram })
    }

    pub fn from_pair(a: &BigRational, b: &BigRational) -> Result<Self> {
        Ok(Self::from_pair_sq(
            &SquareClassQ::from_rational(a)?,
            &SquareClassQ::from_rational(b)?,
        ))
    }

    pub fn from_pair_sq(a: &SquareClassQ, b: &SquareClassQ) -> Self {
        BrauerClassQ { ram: ramified_places(a, b) }
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::from_pair(&arith::rat_int(a), &arith::rat_int(b))
    }

    /// The class of `(L, d)_Q`, i.e. `(d_L, d)_Q`.
    pub fn of_norm_class(l: &ImagQuadField, d: &SquareClassQ) -> Self {
        BrauerClassQ { ram: l.norm_class_sq(d) }
    }

    pub fn ram(&self) -> &BTreeSet<Place> {
        &self.ram
    }

    pub fn is_split(&self) -> bool {
        self.ram.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        BrauerClassQ {
            ram: self.ram.symmetric_difference(&other.ram).cloned().collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Self::trivial()
        } else {
            self.clone()
        }
    }

    /// `L` splits the class iff no ramified place splits in `L`; the
    /// infinite place never does since `L` is complex.
    pub fn splits_in(&self, l: &ImagQuadField) -> bool {
        !self.ram.iter().any(|v| l.splits_place(v))
    }

    /// The norm class `delta` with `[self] = [(L, delta)_Q]`, represented by
    /// the signed squarefree integer of least absolute value (positive on
    /// ties).
    pub fn l_disc(&self, l: &ImagQuadField) -> Result<SquareClassQ> {
        if !self.splits_in(l) {
            return Err(Error::NotSplitting { class: self.to_string(), delta0: l.delta0() });
        }
        let mut primes: BTreeSet<BigUint> = l.ramified_primes().into_iter().collect();
        primes.insert(BigUint::from(2u32));
        primes.extend(self.ram.iter().filter_map(|v| v.as_prime().cloned()));

        let mut aux = 0;
        let mut next_split = BigUint::from(3u32);
        loop {
            if let Some(t) = search_l_disc(&self.ram, l, &primes) {
                return Ok(t);
            }
            // enlarge the generating set with split primes, whose symbols
            // only live at the primes already in play
            if aux >= 8 {
                return Err(Error::NotSplitting { class: self.to_string(), delta0: l.delta0() });
            }
            while primes.contains(&next_split)
                || l.prime_behavior(&next_split) != PrimeBehavior::Split
                || !arith::is_prime(&next_split)
            {
                next_split += 1u32;
            }
            primes.insert(next_split.clone());
            aux += 1;
        }
    }

    /// A small quaternion pair `(a, b)` with this ramification, if one
    /// turns up among products of the ramified primes and a few small ones.
    pub fn presentation(&self) -> Option<(BigInt, BigInt)> {
        if self.is_split() {
            return Some((BigInt::from(1), BigInt::from(1)));
        }
        let mut pool: BTreeSet<BigUint> = [2u32, 3, 5, 7].iter().map(|&p| BigUint::from(p)).collect();
        pool.extend(self.ram.iter().filter_map(|v| v.as_prime().cloned()));
        let pool: Vec<BigUint> = pool.into_iter().collect();
        if pool.len() > 14 {
            return None;
        }
        let mut vals: Vec<SquareClassQ> = Vec::new();
        for mask in 0u32..(1 << pool.len()) {
            let ps: Vec<BigUint> =
                (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].clone()).collect();
            vals.push(SquareClassQ::from_parts(true, ps.clone()));
            if mask != 0 {
                vals.push(SquareClassQ::from_parts(false, ps));
            }
        }
        vals.sort_by_key(|s| s.canonical_key());
        let vals: Vec<SquareClassQ> = vals.into_iter().filter(|s| s.rep() != BigInt::from(1)).collect();
        let places: Vec<Place> = {
            let mut s: BTreeSet<Place> = pool.iter().map(|p| Place::Finite(p.clone())).collect();
            s.insert(Place::Infinite);
            s.into_iter().collect()
        };
        for (j, b) in vals.iter().enumerate() {
            for a in vals.iter().take(j + 1) {
                let hit = places.iter().all(|v| (hilbert_sq(a, b, v) == -1) == self.ram.contains(v));
                if hit {
                    return Some((a.rep(), b.rep()));
                }
            }
        }
        None
    }

    pub fn ram_string(&self) -> String {
        render_ram(&self.ram)
    }
}

fn search_l_disc(
    ram: &BTreeSet<Place>,
    l: &ImagQuadField,
    primes: &BTreeSet<BigUint>,
) -> Option<SquareClassQ> {
    let primes: Vec<BigUint> = primes.iter().cloned().collect();
    let mut places: Vec<Place> = vec![Place::Infinite];
    places.extend(primes.iter().cloned().map(Place::Finite));
    if ram.iter().any(|v| !places.contains(v)) || primes.len() > 24 {
        return None;
    }
    let mask_of = |set: &BTreeSet<Place>| -> u64 {
        places.iter().enumerate().filter(|(_, v)| set.contains(v)).map(|(i, _)| 1u64 << i).sum()
    };
    let target = mask_of(ram);
    let minus = mask_of(&l.norm_class_sq(&SquareClassQ::minus_one()));
    let gens: Vec<u64> = primes
        .iter()
        .map(|p| mask_of(&l.norm_class_sq(&SquareClassQ::from_parts(false, vec![p.clone()]))))
        .collect();

    let mut best: Option<SquareClassQ> = None;
    for subset in 0u64..(1 << primes.len()) {
        let mut m = 0u64;
        for (i, g) in gens.iter().enumerate() {
            if subset >> i & 1 == 1 {
                m ^= g;
            }
        }
        for neg in [false, true] {
            let mm = if neg { m ^ minus } else { m };
            if mm != target {
                continue;
            }
            let ps = (0..primes.len())
                .filter(|i| subset >> i & 1 == 1)
                .map(|i| primes[i].clone())
                .collect();
            let t = SquareClassQ::from_parts(neg, ps);
            if best.as_ref().is_none_or(|b| t.canonical_key() < b.canonical_key()) {
                best = Some(t);
            }
        }
    }
    best
}

pub(crate) fn render_ram(ram: &BTreeSet<Place>) -> String {
    let items: Vec<String> = ram.iter().map(|v| v.to_string()).collect();
    format!("ram{{{}}}", items.join(","))
}

impl fmt::Display for BrauerClassQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ram_string())
    }
}

impl Serialize for BrauerClassQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.ram.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BrauerClassQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ram: Vec<Place> = Vec::deserialize(d)?;
        BrauerClassQ::new(ram).map_err(serde::de::Error::custom)
    }
}

pub fn render_pair(a: &BigInt, b: &BigInt) -> String {
    format!("({a},{b})_Q")
}
