use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};

use super::combine::{alpha_combine, combine_induction, combine_restriction, combine_tensor, q8_class};
use super::{
    Candidate, CharacterFactSheet, DeductionReport, ModStatus, Outcome, PlaceStatus, Relation, TraceLine,
};
use crate::arith;
use crate::brauer::BrauerClassQ;
use crate::error::{Error, Result};
use crate::quadfield::PrimeBehavior;
use crate::symbols::{jacobi, Place};

/// Enumeration stops beyond this many even completions of the unknown
/// places.
pub const MAX_COMPLETIONS: usize = 256;

const BOUND_RULE: &str = "ramification-bound";

/// Ramification status per place, with the rule that fixed each one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub statuses: BTreeMap<Place, PlaceStatus>,
    decided_by: BTreeMap<Place, String>,
    pub trace: Vec<TraceLine>,
}

impl Assignment {
    pub fn get(&self, v: &Place) -> PlaceStatus {
        self.statuses.get(v).copied().unwrap_or(PlaceStatus::Unramified)
    }

    /// Fixes `v`, failing if another rule already fixed it the other way.
    pub fn set(&mut self, v: &Place, s: PlaceStatus, rule: &str, reason: impl Into<String>) -> Result<()> {
        self.ensure_present(v);
        let current = self.statuses[v];
        if current != PlaceStatus::Unknown && current != s {
            return Err(Error::Contradiction {
                place: v.to_string(),
                first: self.decided_by.get(v).cloned().unwrap_or_default(),
                first_status: format!("{current:?}").to_lowercase(),
                second: rule.to_string(),
                second_status: format!("{s:?}").to_lowercase(),
            });
        }
        if current == PlaceStatus::Unknown {
            self.statuses.insert(v.clone(), s);
            self.decided_by.insert(v.clone(), rule.to_string());
        }
        self.trace.push(TraceLine { place: Some(v.clone()), rule: rule.to_string(), reason: reason.into() });
        Ok(())
    }

    /// Places outside the candidate set are unramified by the bound on
    /// ramified primes; they only enter the map when some fact names them.
    fn ensure_present(&mut self, v: &Place) {
        if !self.statuses.contains_key(v) {
            self.statuses.insert(v.clone(), PlaceStatus::Unramified);
            self.decided_by.insert(v.clone(), BOUND_RULE.to_string());
        }
    }

    fn note(&mut self, place: Option<&Place>, rule: &str, reason: impl Into<String>) {
        self.trace.push(TraceLine { place: place.cloned(), rule: rule.to_string(), reason: reason.into() });
    }

    pub fn unknowns(&self) -> Vec<Place> {
        self.statuses.iter().filter(|(_, s)| **s == PlaceStatus::Unknown).map(|(v, _)| v.clone()).collect()
    }

    pub fn ramified(&self) -> BTreeSet<Place> {
        self.statuses.iter().filter(|(_, s)| **s == PlaceStatus::Ramified).map(|(v, _)| v.clone()).collect()
    }
}

/// The infinite place and the primes dividing `2|G|`; nothing else can
/// ramify.
pub fn candidate_places(sheet: &CharacterFactSheet) -> Vec<Place> {
    let mut out = BTreeSet::from([Place::Infinite, Place::small(2)]);
    out.extend(sheet.group_order_factors.iter().filter(|(_, e)| **e > 0).map(|(p, _)| Place::small(*p)));
    out.into_iter().collect()
}

fn validate(sheet: &CharacterFactSheet) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidSheet(format!("{}: {m}", sheet.id)));
    if sheet.degree == 0 || sheet.degree % 2 == 1 {
        return bad(format!("degree {} is not a positive even number", sheet.degree));
    }
    for p in sheet.group_order_factors.keys() {
        if !arith::is_prime(&BigUint::from(*p)) {
            return bad(format!("group order factor {p} is not prime"));
        }
    }
    let l = &sheet.field;
    for f in &sheet.mod_facts {
        if !arith::is_prime(&BigUint::from(f.p)) {
            return bad(format!("modular fact at {} which is not prime", f.p));
        }
        let divides = sheet.group_order_factors.get(&f.p).is_some_and(|e| *e > 0) || f.p == 2;
        if !divides && !f.external {
            return bad(format!("prime {} does not divide the group order; mark the fact external", f.p));
        }
        let orth = matches!(f.status, ModStatus::OrthSquare | ModStatus::OrthNonsquare);
        if orth && l.prime_behavior(&BigUint::from(f.p)) != PrimeBehavior::Ramified {
            return bad(format!("orthogonal discriminant given at {} which is not ramified in {l}", f.p));
        }
    }
    if let Some(st) = &sheet.structural {
        for (&p, &d) in &st.orth_dim_sum_mod4 {
            if p == 2 || l.prime_behavior(&BigUint::from(p)) != PrimeBehavior::Ramified {
                return bad(format!("orth_dim_sum_mod4 given at {p}, not an odd prime ramified in {l}"));
            }
            if d % 2 == 1 {
                return bad(format!("orth_dim_sum_mod4 at {p} is odd"));
            }
        }
    }
    Ok(())
}

/// Every place-by-place rule: the infinite place, split primes, modular
/// reductions at inert and ramified primes, and the structural facts.
pub fn apply_local_rules(sheet: &CharacterFactSheet) -> Result<Assignment> {
    validate(sheet)?;
    let l = &sheet.field;
    let mut a = Assignment::default();
    for v in candidate_places(sheet) {
        a.statuses.insert(v, PlaceStatus::Unknown);
    }
    a.note(None, BOUND_RULE, "only the infinite place and primes dividing 2|G| can ramify");

    let inf = if sheet.degree % 4 == 2 { PlaceStatus::Ramified } else { PlaceStatus::Unramified };
    a.set(&Place::Infinite, inf, "infinite-place", format!("degree {} is {} mod 4", sheet.degree, sheet.degree % 4))?;

    for v in candidate_places(sheet) {
        if sheet.split_schur_trivial && l.splits_place(&v) {
            a.set(&v, PlaceStatus::Unramified, "split-prime", format!("split in {l} with local Schur index 1"))?;
        }
    }

    for f in &sheet.mod_facts {
        let v = Place::small(f.p);
        let pb = l.prime_behavior(&BigUint::from(f.p));
        match (pb, f.status) {
            (PrimeBehavior::Inert, ModStatus::Irreducible | ModStatus::UnitaryStable) => {
                a.set(&v, PlaceStatus::Unramified, "inert-unitary-stable", "unitary stable reduction at an inert prime")?
            }
            (PrimeBehavior::Inert, ModStatus::NotUnitaryStable) if f.defect_one => {
                a.set(&v, PlaceStatus::Ramified, "defect-one", "reduction in a defect one block is not unitary stable")?
            }
            (PrimeBehavior::Inert, ModStatus::NotUnitaryStable) => {
                a.note(Some(&v), "no-rule", "reduction not unitary stable outside defect one decides nothing")
            }
            (PrimeBehavior::Ramified, _) if f.p == 2 => {
                a.note(Some(&v), "no-rule", "dyadic prime ramified in L is not decided locally")
            }
            (PrimeBehavior::Ramified, ModStatus::OrthSquare) => a.set(
                &v,
                PlaceStatus::Unramified,
                "ramified-orthogonal-discriminant",
                "orthogonal discriminant of the reduction is a square",
            )?,
            (PrimeBehavior::Ramified, ModStatus::OrthNonsquare) => a.set(
                &v,
                PlaceStatus::Ramified,
                "ramified-orthogonal-discriminant",
                "orthogonal discriminant of the reduction is not a square",
            )?,
            (PrimeBehavior::Ramified, _) => {
                a.note(Some(&v), "no-rule", "no orthogonal discriminant given at a ramified prime")
            }
            (PrimeBehavior::Split, _) => a.note(Some(&v), "no-rule", "modular facts at split primes are not used"),
            (PrimeBehavior::Inert, _) => unreachable!("rejected by validation"),
        }
    }

    if let Some(st) = &sheet.structural {
        if st.q8_subgroup {
            let c = q8_class(sheet.degree);
            for v in candidate_places(sheet) {
                let s = if c.ram().contains(&v) { PlaceStatus::Ramified } else { PlaceStatus::Unramified };
                a.set(&v, s, "q8-subgroup", format!("class is [(-1,-1)_Q]^{}", sheet.degree / 2))?;
            }
        }
        let center_even = st.perfect && st.faithful && st.center_order % 2 == 0;
        if center_even && st.center_order % 4 == 0 {
            for v in candidate_places(sheet) {
                if v.as_prime().is_some() && !v.is_dyadic() {
                    a.set(&v, PlaceStatus::Unramified, "center-order-4", "perfect group, faithful, 4 divides the center")?;
                }
            }
        }
        if center_even {
            for v in candidate_places(sheet) {
                let Some(p) = v.as_prime() else { continue };
                if v.is_dyadic() {
                    continue;
                }
                if l.prime_behavior(p) != PrimeBehavior::Ramified {
                    a.set(&v, PlaceStatus::Unramified, "center-even", "odd prime unramified in L, perfect group with even center")?;
                }
            }
            for (&p, &d) in &st.orth_dim_sum_mod4 {
                let sign = if (d / 2) % 2 == 0 { 1 } else { -1 };
                let s = if jacobi(&BigInt::from(sign), &BigUint::from(p)) == -1 {
                    PlaceStatus::Ramified
                } else {
                    PlaceStatus::Unramified
                };
                a.set(
                    &Place::small(p),
                    s,
                    "center-even",
                    format!("orthogonal constituents have total dimension {d} mod 4, so the residue discriminant is {sign}"),
                )?;
            }
        }
    }
    Ok(a)
}

/// With one unknown place left, the even size of the ramification set
/// decides it.
pub fn parity_close(a: &mut Assignment) -> Result<()> {
    let unknown = a.unknowns();
    let r = a.ramified().len();
    match unknown.len() {
        0 if r % 2 == 1 => Err(Error::OddRamification(crate::brauer::render_ram(&a.ramified()))),
        1 => {
            let s = if r % 2 == 1 { PlaceStatus::Ramified } else { PlaceStatus::Unramified };
            a.set(&unknown[0], s, "parity", format!("{r} other ramified place{} and the total is even", if r == 1 { "" } else { "s" }))
        }
        _ => Ok(()),
    }
}

fn global_classes(sheet: &CharacterFactSheet) -> Result<Vec<(String, String, BrauerClassQ)>> {
    let l = &sheet.field;
    let mut out = Vec::new();
    for r in &sheet.relations {
        let c = match r {
            Relation::Restriction { constituents, .. } => combine_restriction(l, constituents)?,
            Relation::Induction { psi, index, field_degree_odd } => {
                combine_induction(&psi.resolve(l)?, *index, *field_degree_odd)?
            }
            Relation::Tensor { chi, psi_degree, unitary_stable } => {
                if !unitary_stable {
                    return Err(Error::NotUnitaryStable("tensor product".into()));
                }
                combine_tensor(&chi.resolve(l)?, *psi_degree)
            }
        };
        let reason = match r {
            Relation::Restriction { subgroup: Some(u), .. } => format!("unitary stable restriction to {u}"),
            Relation::Restriction { .. } => "unitary stable restriction".to_string(),
            Relation::Induction { index, .. } => format!("induced from a subgroup of index {index}"),
            Relation::Tensor { psi_degree, .. } => format!("tensor product with a character of degree {psi_degree}"),
        };
        out.push((r.rule_name().to_string(), reason, c));
    }
    if let Some(af) = &sheet.alpha_facts {
        let fixed = af.fixed_part()?;
        let t = &alpha_combine(&af.q_class, af.m, &fixed, af.indicator_ext, l)? * &af.complement_disc;
        let c = BrauerClassQ::of_norm_class(l, &t);
        let reason = format!(
            "fixed algebra: Q = {}, m = {}, fixed part {}, complement {}",
            af.q_class, af.m, fixed, af.complement_disc
        );
        out.push(("alpha-fixed-algebra".to_string(), reason, c));
    }
    Ok(out)
}

fn candidate_for(sheet: &CharacterFactSheet, class: BrauerClassQ) -> Result<Candidate> {
    let disc = if sheet.quasi_split { Some(class.l_disc(&sheet.field)?) } else { None };
    Ok(Candidate { class, disc })
}

fn sort_candidates(c: &mut [Candidate]) {
    c.sort_by(|x, y| {
        let kx = x.disc.as_ref().map(|d| d.canonical_key());
        let ky = y.disc.as_ref().map(|d| d.canonical_key());
        match (kx, ky) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => x.class.cmp(&y.class),
        }
    });
}

/// Runs all rules on one sheet and reports the discriminant, or the
/// candidates compatible with the facts.
pub fn resolve(sheet: &CharacterFactSheet) -> Result<DeductionReport> {
    let mut a = apply_local_rules(sheet)?;
    for (rule, reason, class) in global_classes(sheet)? {
        a.note(None, &rule, format!("{reason} gives {class}"));
        let mut places: BTreeSet<Place> = a.statuses.keys().cloned().collect();
        places.extend(class.ram().iter().cloned());
        for v in places {
            let s = if class.ram().contains(&v) { PlaceStatus::Ramified } else { PlaceStatus::Unramified };
            a.set(&v, s, &rule, "global class")?;
        }
    }
    parity_close(&mut a)?;

    let unknown = a.unknowns();
    let outcome = if unknown.is_empty() {
        let class = BrauerClassQ::new(a.ramified())?;
        Outcome::Unique(candidate_for(sheet, class)?)
    } else if unknown.len() > MAX_COMPLETIONS.trailing_zeros() as usize + 1 {
        Outcome::UnderDetermined { unknown }
    } else {
        let fixed = a.ramified();
        let mut cands = Vec::new();
        for mask in 0u32..(1 << unknown.len()) {
            let mut ram = fixed.clone();
            ram.extend((0..unknown.len()).filter(|i| mask >> i & 1 == 1).map(|i| unknown[i].clone()));
            if ram.len() % 2 == 1 {
                continue;
            }
            let class = BrauerClassQ::new(ram)?;
            if sheet.quasi_split && !class.splits_in(&sheet.field) {
                continue;
            }
            cands.push(candidate_for(sheet, class)?);
        }
        sort_candidates(&mut cands);
        match cands.len() {
            0 => {
                return Err(Error::InvalidSheet(format!(
                    "{}: no completion of the unknown places is split by {}",
                    sheet.id, sheet.field
                )))
            }
            1 => {
                let c = cands.pop().unwrap();
                for v in &unknown {
                    let s = if c.class.ram().contains(v) { PlaceStatus::Ramified } else { PlaceStatus::Unramified };
                    a.set(v, s, "splitting-field", "the only completion split by L")?;
                }
                Outcome::Unique(c)
            }
            _ => Outcome::Candidates { candidates: cands },
        }
    };
    Ok(DeductionReport { id: sheet.id.clone(), statuses: a.statuses, outcome, trace: a.trace })
}
