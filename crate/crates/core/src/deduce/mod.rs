//! Fact sheets for a character and the engine that turns them into a
//! ramification assignment and a unitary discriminant.

mod combine;
mod engine;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::brauer::BrauerClassQ;
use crate::error::{Error, Result};
use crate::quadfield::ImagQuadField;
use crate::symbols::{Place, SquareClassQ};

pub use combine::{
    alpha_combine, combine_induction, combine_restriction, combine_tensor, q8_class, Constituent,
};
pub use engine::{apply_local_rules, candidate_places, parity_close, resolve, Assignment, MAX_COMPLETIONS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Indicator {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "o")]
    O,
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Indicator::Plus => "+",
            Indicator::Minus => "-",
            Indicator::O => "o",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModStatus {
    Irreducible,
    UnitaryStable,
    NotUnitaryStable,
    OrthSquare,
    OrthNonsquare,
}

/// What is known about the reduction of the character modulo one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModFact {
    pub p: u64,
    pub status: ModStatus,
    #[serde(default)]
    pub defect_one: bool,
    /// The prime does not divide the group order.
    #[serde(default)]
    pub external: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Structural {
    #[serde(default)]
    pub q8_subgroup: bool,
    #[serde(default)]
    pub perfect: bool,
    #[serde(default = "one")]
    pub center_order: u64,
    #[serde(default)]
    pub faithful: bool,
    /// Sum of the dimensions of the orthogonal constituents of the
    /// reduction, per odd prime ramified in `L`.
    #[serde(default)]
    pub orth_dim_sum_mod4: BTreeMap<u64, u64>,
}

fn one() -> u64 {
    1
}

fn yes() -> bool {
    true
}

/// Inputs for the fixed-algebra formula: the class `q_class` of the
/// endomorphism algebra of the extended character, `m = degree / 2`, and
/// the discriminant of the involution on the fixed algebra. The latter is
/// given either directly or as the determinant of a skew-adjoint element
/// on a fixed space of dimension `fixed_dim`, which contributes
/// `(-1)^(fixed_dim/2) * fixed_det`. `complement_disc` is the unitary
/// discriminant of the part outside the fixed space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaFacts {
    #[serde(default)]
    pub q_class: BrauerClassQ,
    pub m: u64,
    #[serde(default)]
    pub alpha_disc: Option<SquareClassQ>,
    #[serde(default)]
    pub fixed_det: Option<SquareClassQ>,
    #[serde(default)]
    pub fixed_dim: Option<u64>,
    #[serde(default = "SquareClassQ::one")]
    pub complement_disc: SquareClassQ,
    pub indicator_ext: Indicator,
}

impl AlphaFacts {
    pub fn fixed_part(&self) -> Result<SquareClassQ> {
        match (&self.alpha_disc, &self.fixed_det, self.fixed_dim) {
            (Some(d), None, None) => Ok(d.clone()),
            (None, Some(det), Some(dim)) => {
                if dim % 2 == 1 {
                    return Err(Error::InvalidSheet(format!("fixed_dim {dim} is odd")));
                }
                Ok(det * &SquareClassQ::minus_one().pow((dim / 2) as i64))
            }
            _ => Err(Error::InvalidSheet(
                "alpha_facts needs either alpha_disc or fixed_det together with fixed_dim".into(),
            )),
        }
    }
}

/// A Brauer class given either by its ramification or as `(L, disc)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    #[serde(default)]
    pub class: Option<BrauerClassQ>,
    #[serde(default)]
    pub disc: Option<SquareClassQ>,
}

impl ClassSpec {
    pub fn resolve(&self, l: &ImagQuadField) -> Result<BrauerClassQ> {
        match (&self.class, &self.disc) {
            (Some(c), None) => Ok(c.clone()),
            (None, Some(d)) => Ok(BrauerClassQ::of_norm_class(l, d)),
            (Some(c), Some(d)) => {
                let from_d = BrauerClassQ::of_norm_class(l, d);
                if *c != from_d {
                    return Err(Error::InvalidSheet(format!("class {c} disagrees with disc {d} ({from_d})")));
                }
                Ok(c.clone())
            }
            (None, None) => Err(Error::InvalidSheet("expected a class or a disc".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Relation {
    /// The restriction to a subgroup is unitary stable with these
    /// constituents.
    Restriction {
        #[serde(default)]
        subgroup: Option<String>,
        constituents: Vec<Constituent>,
    },
    /// The character is induced from `psi` with `[G:U] = index`.
    Induction {
        psi: ClassSpec,
        index: u64,
        field_degree_odd: bool,
    },
    /// The character is `chi * psi` with `chi` of known class.
    Tensor {
        chi: ClassSpec,
        psi_degree: u64,
        #[serde(default = "yes")]
        unitary_stable: bool,
    },
}

impl Relation {
    pub fn rule_name(&self) -> &'static str {
        match self {
            Relation::Restriction { .. } => "restriction",
            Relation::Induction { .. } => "induction",
            Relation::Tensor { .. } => "tensor",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterFactSheet {
    pub id: String,
    pub degree: u64,
    #[serde(rename = "delta0")]
    pub field: ImagQuadField,
    /// `|G|` as prime -> exponent.
    pub group_order_factors: BTreeMap<u64, u32>,
    #[serde(default = "yes")]
    pub quasi_split: bool,
    #[serde(default = "yes")]
    pub split_schur_trivial: bool,
    #[serde(default)]
    pub mod_facts: Vec<ModFact>,
    #[serde(default)]
    pub structural: Option<Structural>,
    #[serde(default)]
    pub alpha_facts: Option<AlphaFacts>,
    #[serde(default)]
    pub relations: Vec<Relation>,
}

impl CharacterFactSheet {
    pub fn new(id: &str, degree: u64, field: ImagQuadField, order: &[(u64, u32)]) -> Self {
        CharacterFactSheet {
            id: id.to_string(),
            degree,
            field,
            group_order_factors: order.iter().cloned().collect(),
            quasi_split: true,
            split_schur_trivial: true,
            mod_facts: Vec::new(),
            structural: None,
            alpha_facts: None,
            relations: Vec::new(),
        }
    }

    pub fn with_fact(mut self, p: u64, status: ModStatus, defect_one: bool) -> Self {
        self.mod_facts.push(ModFact { p, status, defect_one, external: false });
        self
    }

    /// Drops every modular fact at `p`.
    pub fn without_facts_at(mut self, p: u64) -> Self {
        self.mod_facts.retain(|f| f.p != p);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceStatus {
    Ramified,
    Unramified,
    Unknown,
}

impl fmt::Display for PlaceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlaceStatus::Ramified => "R",
            PlaceStatus::Unramified => "U",
            PlaceStatus::Unknown => "?",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    /// `None` for steps concerning the whole class.
    pub place: Option<Place>,
    pub rule: String,
    pub reason: String,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let place = self.place.as_ref().map_or("*".to_string(), |p| p.to_string());
        write!(f, "{place} - {} - {}", self.rule, self.reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub class: BrauerClassQ,
    pub disc: Option<SquareClassQ>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Unique(Candidate),
    Candidates { candidates: Vec<Candidate> },
    UnderDetermined { unknown: Vec<Place> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeductionReport {
    pub id: String,
    pub statuses: BTreeMap<Place, PlaceStatus>,
    pub outcome: Outcome,
    pub trace: Vec<TraceLine>,
}

impl DeductionReport {
    pub fn unique_disc(&self) -> Option<&SquareClassQ> {
        match &self.outcome {
            Outcome::Unique(c) => c.disc.as_ref(),
            _ => None,
        }
    }

    pub fn unique_class(&self) -> Option<&BrauerClassQ> {
        match &self.outcome {
            Outcome::Unique(c) => Some(&c.class),
            _ => None,
        }
    }

    pub fn candidate_discs(&self) -> Vec<SquareClassQ> {
        match &self.outcome {
            Outcome::Unique(c) => c.disc.iter().cloned().collect(),
            Outcome::Candidates { candidates } => {
                candidates.iter().filter_map(|c| c.disc.clone()).collect()
            }
            Outcome::UnderDetermined { .. } => Vec::new(),
        }
    }
}
