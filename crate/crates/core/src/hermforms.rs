//! Hermitian forms over `L = Q(sqrt(-d))`. Forms are linear in the first
//! argument and conjugate-linear in the second, so a Gram matrix satisfies
//! `H[j][i] = conj(H[i][j])` and a change of basis `G` acts as `G H G*`.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::brauer::BrauerClassQ;
use crate::error::{Error, Result};
use crate::quadfield::{ImagQuadField, PrimeBehavior, QuadElem};
use crate::symbols::{hilbert_sq, jacobi, signed_det_sign, Place, SquareClassQ};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianGram {
    field: ImagQuadField,
    entries: Vec<Vec<QuadElem>>,
}

impl HermitianGram {
    pub fn new(field: &ImagQuadField, entries: Vec<Vec<QuadElem>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::NotHermitian("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotHermitian(format!("row {i} has length {}, expected {n}", row.len())));
            }
            for (j, e) in row.iter().enumerate() {
                if e.field != *field {
                    return Err(Error::FieldMismatch);
                }
                if entries[j][i] != e.conj() {
                    return Err(Error::NotHermitian(format!("entry ({j},{i}) is not the conjugate of ({i},{j})")));
                }
            }
        }
        let h = HermitianGram { field: field.clone(), entries };
        h.diagonalize()?;
        Ok(h)
    }

    pub fn diagonal(field: &ImagQuadField, diag: &[BigRational]) -> Result<Self> {
        let n = diag.len();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            QuadElem::from_rational(diag[i].clone(), field)
                        } else {
                            QuadElem::zero(field)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(field, entries)
    }

    pub fn identity(field: &ImagQuadField, n: usize) -> Self {
        Self::diagonal(field, &vec![BigRational::one(); n]).expect("identity is nondegenerate")
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> &ImagQuadField {
        &self.field
    }

    pub fn entries(&self) -> &[Vec<QuadElem>] {
        &self.entries
    }

    /// Rationals `a_1..a_n` with `H` isometric to `diag(a_1..a_n)`.
    ///
    /// Pivots are eliminated by Schur complements. A zero pivot `v_k` with
    /// `H(v_j, v_k) = h != 0` is replaced by `v_k + c v_j`, whose length is
    /// `H(v_k,v_k) + Tr(c h) + N(c) H(v_j,v_j)`; if every remaining diagonal
    /// entry vanishes this is `Tr(c h)`, nonzero for `c = 1` or
    /// `c = sqrt(-d)`.
    pub fn diagonalize(&self) -> Result<Vec<BigRational>> {
        let n = self.dim();
        let l = &self.field;
        let mut m = self.entries.clone();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            if m[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                    m.swap(k, j);
                    for row in m.iter_mut() {
                        row.swap(k, j);
                    }
                } else {
                    let j = (k + 1..n).find(|&j| !m[j][k].is_zero()).ok_or(Error::Degenerate)?;
                    let c = [QuadElem::one(l), QuadElem::root(l)]
                        .into_iter()
                        .find(|c| !(c * &m[j][k]).trace().is_zero())
                        .expect("h != 0 has a nonzero trace against 1 or sqrt(-d)");
                    add_multiple(&mut m, k, j, &c);
                }
            }
            let a = m[k][k].x.clone();
            debug_assert!(m[k][k].y.is_zero());
            let inv = QuadElem::from_rational(BigRational::one() / &a, l);
            for i in k + 1..n {
                let f = &m[i][k] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let t = &f * &m[k][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
            for i in k + 1..n {
                m[i][k] = QuadElem::zero(l);
                m[k][i] = QuadElem::zero(l);
            }
            out.push(a);
        }
        Ok(out)
    }

    /// The determinant; rational because `H` is Hermitian.
    pub fn determinant(&self) -> Result<BigRational> {
        Ok(self.diagonalize()?.iter().product())
    }

    pub fn signed_det(&self) -> Result<BigRational> {
        let s = BigRational::from_integer(BigInt::from(signed_det_sign(self.dim())));
        Ok(s * self.determinant()?)
    }

    /// The discriminant modulo norms, as the smallest representative of
    /// its norm class.
    pub fn disc(&self) -> Result<SquareClassQ> {
        self.delta()?.l_disc(&self.field)
    }

    /// `[(L, d)_Q]` for `d` the signed determinant.
    pub fn delta(&self) -> Result<BrauerClassQ> {
        let d = SquareClassQ::from_rational(&self.signed_det()?)?;
        Ok(BrauerClassQ::of_norm_class(&self.field, &d))
    }

    pub fn is_positive_definite(&self) -> Result<bool> {
        Ok(self.diagonalize()?.iter().all(|a| a.is_positive()))
    }

    /// Definite forms over `L` are isometric iff they share dimension and
    /// discriminant.
    pub fn isometric(&self, other: &HermitianGram) -> Result<bool> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if !self.is_positive_definite()? || !other.is_positive_definite()? {
            return Err(Error::Indefinite);
        }
        Ok(self.dim() == other.dim() && self.delta()? == other.delta()?)
    }

    /// `Q_H(v) = H(v,v)` on the underlying rational space, in the basis
    /// `b_i, sqrt(-d) b_i` of a diagonalizing basis.
    pub fn transfer_quadratic(&self) -> Result<DiagQuadFormQ> {
        let d = BigRational::from_integer(BigInt::from(self.field.delta0()));
        let mut coeffs = Vec::with_capacity(2 * self.dim());
        for a in self.diagonalize()? {
            coeffs.push(a.clone());
            coeffs.push(a * &d);
        }
        DiagQuadFormQ::new(coeffs)
    }

    /// `G H G*` for an invertible `G` over `L` (rows of `G` are the new
    /// basis vectors in old coordinates).
    pub fn change_basis(&self, g: &[Vec<QuadElem>]) -> Result<HermitianGram> {
        let n = self.dim();
        if g.len() != n || g.iter().any(|r| r.len() != n) {
            return Err(Error::NotHermitian("change of basis has the wrong shape".into()));
        }
        let l = &self.field;
        let mut gh = vec![vec![QuadElem::zero(l); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = QuadElem::zero(l);
                for k in 0..n {
                    s = &s + &(&g[i][k] * &self.entries[k][j]);
                }
                gh[i][j] = s;
            }
        }
        let mut out = vec![vec![QuadElem::zero(l); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = QuadElem::zero(l);
                for k in 0..n {
                    s = &s + &(&gh[i][k] * &g[j][k].conj());
                }
                out[i][j] = s;
            }
        }
        HermitianGram::new(l, out)
    }
}

/// `v_k <- v_k + c v_j` applied to a Gram matrix in place.
fn add_multiple(m: &mut [Vec<QuadElem>], k: usize, j: usize, c: &QuadElem) {
    let n = m.len();
    for i in 0..n {
        let t = c * &m[j][i];
        m[k][i] = &m[k][i] + &t;
    }
    let cc = c.conj();
    for i in 0..n {
        let t = &m[i][j] * &cc;
        m[i][k] = &m[i][k] + &t;
    }
}

impl fmt::Display for HermitianGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagQuadFormQ {
    coeffs: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadInvariants {
    pub dim: usize,
    pub disc: SquareClassQ,
    /// Hasse invariant at the places where it can be nontrivial.
    pub hasse: BTreeMap<Place, i8>,
    pub positive: usize,
    pub negative: usize,
}

impl DiagQuadFormQ {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(Error::Zero);
        }
        Ok(DiagQuadFormQ { coeffs })
    }

    pub fn from_ints(c: &[i64]) -> Result<Self> {
        Self::new(c.iter().map(|&x| arith::rat_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    fn classes(&self) -> Vec<SquareClassQ> {
        self.coeffs.iter().map(|c| SquareClassQ::from_rational(c).expect("nonzero")).collect()
    }

    fn relevant_places(classes: &[SquareClassQ]) -> BTreeSet<Place> {
        let mut out = BTreeSet::from([Place::Infinite, Place::small(2)]);
        for c in classes {
            out.extend(c.primes().iter().cloned().map(Place::Finite));
        }
        out
    }

    /// Product of the coefficients as a square class.
    fn det_class(classes: &[SquareClassQ]) -> SquareClassQ {
        classes.iter().fold(SquareClassQ::one(), |acc, c| &acc * c)
    }

    pub fn invariants(&self) -> QuadInvariants {
        let cls = self.classes();
        let m = cls.len();
        let sign = SquareClassQ::from_int(signed_det_sign(m) as i64).expect("nonzero");
        let disc = &sign * &Self::det_class(&cls);
        let hasse = Self::relevant_places(&cls)
            .into_iter()
            .map(|v| {
                let mut s = 1i8;
                for i in 0..m {
                    for j in i + 1..m {
                        s *= hilbert_sq(&cls[i], &cls[j], &v);
                    }
                }
                (v, s)
            })
            .collect();
        let positive = self.coeffs.iter().filter(|c| c.is_positive()).count();
        QuadInvariants { dim: m, disc, hasse, positive, negative: m - positive }
    }

    /// Clifford invariant from the Hasse invariant `s = prod_{i<j} (a_i,a_j)`
    /// and `d = prod a_i`, by dimension mod 8:
    /// 1,2: `s`; 3,4: `s (-1,-d)`; 5,6: `s (-1,-1)`; 7,0: `s (-1,d)`.
    pub fn clifford_invariant(&self) -> BrauerClassQ {
        let inv = self.invariants();
        let hasse = BrauerClassQ::new(
            inv.hasse.into_iter().filter(|(_, s)| *s == -1).map(|(v, _)| v),
        )
        .expect("Hasse invariants satisfy reciprocity");
        let d = Self::det_class(&self.classes());
        let minus = SquareClassQ::minus_one();
        let twist = match inv.dim % 8 {
            1 | 2 => BrauerClassQ::trivial(),
            3 | 4 => BrauerClassQ::from_pair_sq(&minus, &(&minus * &d)),
            5 | 6 => BrauerClassQ::from_pair_sq(&minus, &minus),
            _ => BrauerClassQ::from_pair_sq(&minus, &d),
        };
        hasse.mul(&twist)
    }
}

pub fn quad_invariants(q: &DiagQuadFormQ) -> QuadInvariants {
    q.invariants()
}

pub fn clifford_invariant(q: &DiagQuadFormQ) -> BrauerClassQ {
    q.clifford_invariant()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidueSquare {
    Square,
    Nonsquare,
}

/// At an inert `p`, rescale each entry by the norm `p^(-2 floor(v/2))` so
/// every valuation is 0 or 1. Returns the scaled diagonal and the number of
/// entries of valuation 1.
pub fn squarefree_reduce_at(
    diag: &[BigRational],
    l: &ImagQuadField,
    p: &BigUint,
) -> Result<(Vec<BigRational>, usize)> {
    if !arith::is_prime(p) || l.prime_behavior(p) != PrimeBehavior::Inert {
        return Err(Error::NotInert { p: p.to_string(), delta0: l.delta0() });
    }
    let pp = BigRational::from_integer(BigInt::from(p.clone()));
    let mut out = Vec::with_capacity(diag.len());
    let mut k = 0;
    for a in diag {
        if a.is_zero() {
            return Err(Error::Degenerate);
        }
        let v = arith::valuation(a, p);
        let e = v.div_euclid(2);
        let scale = pow_rational(&pp, -2 * e);
        out.push(a * scale);
        if v.rem_euclid(2) == 1 {
            k += 1;
        }
    }
    Ok((out, k))
}

/// At an odd `p` ramified in `L`, divide each entry by `delta0^v` (a norm
/// up to the uniformizer) to make it a unit, then test the signed product
/// for being a square mod `p`.
pub fn unimodular_reduce_at(
    diag: &[BigRational],
    l: &ImagQuadField,
    p: &BigUint,
) -> Result<ResidueSquare> {
    let bad = || Error::NotOddRamified { p: p.to_string(), delta0: l.delta0() };
    if p.is_even() || !arith::is_prime(p) || l.prime_behavior(p) != PrimeBehavior::Ramified {
        return Err(bad());
    }
    let d = BigRational::from_integer(BigInt::from(l.delta0()));
    let mut t = BigRational::from_integer(BigInt::from(signed_det_sign(diag.len())));
    for a in diag {
        if a.is_zero() {
            return Err(Error::Degenerate);
        }
        let v = arith::valuation(a, p);
        t *= a * pow_rational(&d, -v);
    }
    let unit = t.numer() * t.denom();
    Ok(if jacobi(&unit, p) == 1 { ResidueSquare::Square } else { ResidueSquare::Nonsquare })
}

fn pow_rational(base: &BigRational, e: i64) -> BigRational {
    let r = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        BigRational::one() / r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn field(d: u64) -> ImagQuadField {
        ImagQuadField::new(d).unwrap()
    }

    fn diag(l: &ImagQuadField, v: &[(i64, i64)]) -> HermitianGram {
        let d: Vec<BigRational> = v.iter().map(|&(n, d)| rat(n, d)).collect();
        HermitianGram::diagonal(l, &d).unwrap()
    }

    fn places(v: &[u64], inf: bool) -> BTreeSet<Place> {
        let mut s: BTreeSet<Place> = v.iter().map(|&p| Place::small(p)).collect();
        if inf {
            s.insert(Place::Infinite);
        }
        s
    }

    fn q(l: &ImagQuadField, x: i64, y: i64) -> QuadElem {
        QuadElem::new(rat(x, 1), rat(y, 1), l)
    }

    #[test]
    fn diagonalize_simple() {
        let l = field(10);
        assert_eq!(HermitianGram::identity(&l, 3).diagonalize().unwrap(), vec![rat(1, 1); 3]);
        let h = diag(&l, &[(1, 1), (1, 1), (1, 5)]);
        assert_eq!(h.diagonalize().unwrap(), vec![rat(1, 1), rat(1, 1), rat(1, 5)]);
    }

    #[test]
    fn diagonalize_zero_pivot() {
        // [[0, i], [-i, 0]] over Q(i): det = -(i)(-i) = -1
        let l = field(1);
        let h = HermitianGram::new(&l, vec![vec![q(&l, 0, 0), q(&l, 0, 1)], vec![q(&l, 0, -1), q(&l, 0, 0)]])
            .unwrap();
        let d = h.diagonalize().unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.iter().product::<BigRational>(), rat(-1, 1));
        assert!(!h.is_positive_definite().unwrap());
        // signed det is 1, a norm
        assert_eq!(h.disc().unwrap().rep(), BigInt::from(1));
    }

    #[test]
    fn degenerate_and_non_hermitian() {
        let l = field(3);
        let z = || q(&l, 0, 0);
        assert_eq!(
            HermitianGram::new(&l, vec![vec![q(&l, 1, 0), z()], vec![z(), z()]]),
            Err(Error::Degenerate)
        );
        assert!(matches!(
            HermitianGram::new(&l, vec![vec![q(&l, 1, 0), q(&l, 0, 1)], vec![q(&l, 0, 1), q(&l, 1, 0)]]),
            Err(Error::NotHermitian(_))
        ));
        let rows = |c: i64| vec![vec![q(&l, 1, 0), q(&l, 1, 1)], vec![q(&l, 1, -1), q(&l, c, 0)]];
        assert_eq!(HermitianGram::new(&l, rows(4)), Err(Error::Degenerate));
        assert_eq!(HermitianGram::new(&l, rows(5)).unwrap().determinant().unwrap(), rat(1, 1));
    }

    #[test]
    fn ten_example() {
        let l = field(10);
        let i2 = HermitianGram::identity(&l, 2);
        let i4 = HermitianGram::identity(&l, 4);
        let d2 = diag(&l, &[(1, 1), (1, 5)]);
        let d4 = diag(&l, &[(1, 1), (1, 1), (1, 1), (1, 5)]);
        assert_eq!(i2.disc().unwrap().rep(), BigInt::from(-1));
        assert_eq!(i4.disc().unwrap().rep(), BigInt::from(1));
        assert_eq!(i2.delta().unwrap().ram(), &places(&[2], true));
        assert!(i4.delta().unwrap().is_split());
        assert_eq!(d2.delta().unwrap().ram(), &places(&[5], true));
        assert_eq!(d4.delta().unwrap().ram(), &places(&[2, 5], false));
        // -5 and -2 share a norm class over Q(sqrt(-10))
        assert_eq!(d2.disc().unwrap().rep(), BigInt::from(-2));
        assert_eq!(l.norm_class(&rat(-5, 1)).unwrap(), l.norm_class(&rat(-2, 1)).unwrap());
        assert!(d2.is_positive_definite().unwrap());
    }

    #[test]
    fn isometry() {
        let l1 = field(1);
        assert!(diag(&l1, &[(1, 1), (1, 1)]).isometric(&diag(&l1, &[(2, 1), (2, 1)])).unwrap());
        let l10 = field(10);
        assert!(!HermitianGram::identity(&l10, 2).isometric(&diag(&l10, &[(1, 1), (5, 1)])).unwrap());
        assert_eq!(
            diag(&l10, &[(1, 1), (-1, 1)]).isometric(&HermitianGram::identity(&l10, 2)),
            Err(Error::Indefinite)
        );
    }

    #[test]
    fn transfer_and_clifford() {
        let l3 = field(3);
        assert_eq!(HermitianGram::identity(&l3, 1).transfer_quadratic().unwrap(), DiagQuadFormQ::from_ints(&[1, 3]).unwrap());
        let l = field(10);
        let t = HermitianGram::identity(&l, 2).transfer_quadratic().unwrap();
        assert_eq!(t, DiagQuadFormQ::from_ints(&[1, 10, 1, 10]).unwrap());
        assert_eq!(t.invariants().disc, SquareClassQ::one());
        assert_eq!(t.clifford_invariant().ram(), &places(&[2], true));
        let t = diag(&l, &[(1, 1), (1, 5)]).transfer_quadratic().unwrap();
        assert_eq!(t.coeffs(), &[rat(1, 1), rat(10, 1), rat(1, 5), rat(2, 1)]);
        let t = diag(&l, &[(1, 1), (1, 1), (1, 1), (1, 5)]).transfer_quadratic().unwrap();
        assert_eq!(t.clifford_invariant().ram(), &places(&[2, 5], false));
        let hyp = DiagQuadFormQ::from_ints(&[1, -1, 1, -1]).unwrap();
        assert!(hyp.clifford_invariant().is_split());
        let inv = DiagQuadFormQ::from_ints(&[1, 1]).unwrap().invariants();
        assert_eq!(inv.disc.rep(), BigInt::from(-1));
        assert!(inv.hasse.values().all(|&s| s == 1));
        let inv = DiagQuadFormQ::from_ints(&[1, -1]).unwrap().invariants();
        assert_eq!(inv.disc.rep(), BigInt::from(1));
        assert_eq!((inv.positive, inv.negative), (1, 1));
    }

    #[test]
    fn change_of_basis_keeps_disc() {
        let l = field(7);
        let h = diag(&l, &[(1, 1), (3, 1), (1, 2)]);
        let g = vec![
            vec![q(&l, 1, 1), q(&l, 0, 0), q(&l, 2, 0)],
            vec![q(&l, 0, 1), q(&l, 1, 0), q(&l, 0, 0)],
            vec![q(&l, 0, 0), q(&l, 3, -1), q(&l, 1, 0)],
        ];
        let h2 = h.change_basis(&g).unwrap();
        assert_eq!(h.delta().unwrap(), h2.delta().unwrap());
        assert_eq!(h.disc().unwrap(), h2.disc().unwrap());
    }

    #[test]
    fn squarefree_reduction() {
        let l = field(3);
        let p = BigUint::from(5u32);
        let (d, k) = squarefree_reduce_at(&[rat(1, 1), rat(50, 1)], &l, &p).unwrap();
        assert_eq!((d, k), (vec![rat(1, 1), rat(2, 1)], 0));
        let (d, k) = squarefree_reduce_at(&[rat(1, 1), rat(5, 1)], &l, &p).unwrap();
        assert_eq!((d, k), (vec![rat(1, 1), rat(5, 1)], 1));
        let (d, k) = squarefree_reduce_at(&[rat(25, 1), rat(5, 1), rat(1, 5)], &l, &p).unwrap();
        assert_eq!((d, k), (vec![rat(1, 1), rat(5, 1), rat(5, 1)], 2));
        assert!(squarefree_reduce_at(&[rat(1, 1)], &l, &BigUint::from(7u32)).is_err());
    }

    #[test]
    fn unimodular_reduction() {
        let l3 = field(3);
        let p3 = BigUint::from(3u32);
        let one = rat(1, 1);
        assert_eq!(unimodular_reduce_at(&[one.clone(), one.clone()], &l3, &p3).unwrap(), ResidueSquare::Nonsquare);
        assert!(HermitianGram::identity(&l3, 2).delta().unwrap().ram().contains(&Place::small(3)));
        assert_eq!(unimodular_reduce_at(&vec![one.clone(); 4], &l3, &p3).unwrap(), ResidueSquare::Square);
        let l15 = field(15);
        let p5 = BigUint::from(5u32);
        assert_eq!(unimodular_reduce_at(&[one.clone(), rat(1, 5)], &l15, &p5).unwrap(), ResidueSquare::Nonsquare);
        assert!(diag(&l15, &[(1, 1), (1, 5)]).delta().unwrap().ram().contains(&Place::small(5)));
        assert!(unimodular_reduce_at(std::slice::from_ref(&one), &field(1), &BigUint::from(2u32)).is_err());
        assert!(unimodular_reduce_at(&[one], &l3, &BigUint::from(7u32)).is_err());
    }
}
