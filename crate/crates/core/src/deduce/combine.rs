//! Class formulas for restriction, induction, tensor products, the
//! fixed algebra of an automorphism and the Q8 subgroup.

use serde::{Deserialize, Serialize};

use super::Indicator;
use crate::brauer::BrauerClassQ;
use crate::error::{Error, Result};
use crate::quadfield::ImagQuadField;
use crate::symbols::SquareClassQ;

/// One constituent of a unitary stable restriction. Data over larger
/// character fields must already be normed down to `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constituent {
    #[serde(default)]
    pub label: Option<String>,
    pub indicator: Indicator,
    pub degree: u64,
    #[serde(default = "one")]
    pub mult: u64,
    /// Schur class for indicator `+`/`-`, discriminant algebra for `o`.
    #[serde(default)]
    pub class: Option<BrauerClassQ>,
    /// Orthogonal discriminant, indicator `+` only.
    #[serde(default)]
    pub ortho_disc: Option<SquareClassQ>,
    /// Unitary discriminant over `L`, indicator `o` only.
    #[serde(default)]
    pub disc: Option<SquareClassQ>,
    /// Paired with a constituent it is not isomorphic to under the
    /// twisted dual; such pairs carry hyperbolic forms.
    #[serde(default)]
    pub hyperbolic: bool,
}

fn one() -> u64 {
    1
}

impl Constituent {
    fn name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => format!("constituent of degree {} (indicator {})", self.degree, self.indicator),
        }
    }

    fn contribution(&self, l: &ImagQuadField) -> Result<BrauerClassQ> {
        let half = (self.degree / 2) as i64;
        let missing = |what: &str| Error::InvalidSheet(format!("{}: missing {what}", self.name()));
        let c = match self.indicator {
            Indicator::Plus => {
                let schur = self.class.clone().unwrap_or_default();
                let od = self.ortho_disc.as_ref().ok_or_else(|| missing("ortho_disc"))?;
                schur.pow(half).mul(&BrauerClassQ::of_norm_class(l, od))
            }
            Indicator::Minus => self.class.as_ref().ok_or_else(|| missing("class"))?.pow(half),
            Indicator::O => match (&self.class, &self.disc) {
                (Some(c), _) => c.clone(),
                (None, Some(d)) => BrauerClassQ::of_norm_class(l, d),
                (None, None) => return Err(missing("class or disc")),
            },
        };
        Ok(c.pow(self.mult as i64))
    }
}

/// The class of a unitary stable restriction: the product of the
/// contributions of all constituents, each to the parity of its
/// multiplicity.
pub fn combine_restriction(l: &ImagQuadField, constituents: &[Constituent]) -> Result<BrauerClassQ> {
    let mut acc = BrauerClassQ::trivial();
    for c in constituents {
        if c.hyperbolic {
            continue;
        }
        if c.degree % 2 == 1 {
            return Err(Error::NotUnitaryStable(c.name()));
        }
        acc = acc.mul(&c.contribution(l)?);
    }
    Ok(acc)
}

pub fn combine_induction(psi: &BrauerClassQ, index: u64, field_degree_odd: bool) -> Result<BrauerClassQ> {
    if !field_degree_odd {
        return Err(Error::NoConclusion(
            "the character field of psi has even degree over that of the induced character".into(),
        ));
    }
    Ok(psi.pow((index % 2) as i64))
}

pub fn combine_tensor(chi: &BrauerClassQ, psi_degree: u64) -> BrauerClassQ {
    chi.pow((psi_degree % 2) as i64)
}

/// Discriminant from the fixed algebra of an automorphism swapping the
/// character with its conjugate: `l_disc(Q)^m * alpha_disc` when the
/// extended character has indicator `+`, `l_disc(Q)^m` when it is `-`.
pub fn alpha_combine(
    q_class: &BrauerClassQ,
    m: u64,
    alpha_disc: &SquareClassQ,
    indicator_ext: Indicator,
    l: &ImagQuadField,
) -> Result<SquareClassQ> {
    let base = q_class.l_disc(l)?.pow((m % 2) as i64);
    let t = match indicator_ext {
        Indicator::Plus => &base * alpha_disc,
        Indicator::Minus => base,
        Indicator::O => {
            return Err(Error::InvalidSheet("the extended character must have indicator + or -".into()))
        }
    };
    BrauerClassQ::of_norm_class(l, &t).l_disc(l)
}

/// `[(-1,-1)_Q]^(degree/2)`.
pub fn q8_class(degree: u64) -> BrauerClassQ {
    let m = SquareClassQ::minus_one();
    BrauerClassQ::from_pair_sq(&m, &m).pow((degree / 2) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::Place;

    fn field(d: u64) -> ImagQuadField {
        ImagQuadField::new(d).unwrap()
    }

    fn sq(n: i64) -> SquareClassQ {
        SquareClassQ::from_int(n).unwrap()
    }

    fn inf7() -> BrauerClassQ {
        BrauerClassQ::new([Place::Infinite, Place::small(7)]).unwrap()
    }

    fn minus(deg: u64, class: BrauerClassQ) -> Constituent {
        Constituent {
            label: None,
            indicator: Indicator::Minus,
            degree: deg,
            mult: 1,
            class: Some(class),
            ortho_disc: None,
            disc: None,
            hyperbolic: false,
        }
    }

    fn hyperbolic(deg: u64) -> Constituent {
        Constituent { hyperbolic: true, indicator: Indicator::O, ..minus(deg, BrauerClassQ::trivial()) }
    }

    #[test]
    fn restriction_symplectic_constituent() {
        for d in [1, 2] {
            let l = field(d);
            let c = combine_restriction(&l, &[minus(42, inf7()), hyperbolic(1), hyperbolic(215)]).unwrap();
            assert_eq!(c.l_disc(&l).unwrap(), sq(-7));
        }
    }

    #[test]
    fn restriction_edge_cases() {
        let l = field(3);
        assert!(combine_restriction(&l, &[hyperbolic(3), hyperbolic(5)]).unwrap().is_split());
        let plus = Constituent {
            indicator: Indicator::Plus,
            ortho_disc: Some(sq(1)),
            class: None,
            ..minus(10, BrauerClassQ::trivial())
        };
        assert!(combine_restriction(&l, std::slice::from_ref(&plus)).unwrap().is_split());
        let odd = Constituent { degree: 7, ..plus.clone() };
        assert!(matches!(combine_restriction(&l, &[odd]), Err(Error::NotUnitaryStable(_))));
        let twice = Constituent { mult: 2, ..minus(42, inf7()) };
        assert!(combine_restriction(&l, &[twice]).unwrap().is_split());
        let unitary = Constituent { indicator: Indicator::O, class: None, disc: Some(sq(-7)), ..minus(2, inf7()) };
        let li = field(1);
        assert_eq!(combine_restriction(&li, &[unitary]).unwrap(), inf7());
    }

    #[test]
    fn induction_and_tensor() {
        let c = inf7();
        assert!(combine_induction(&c, 4, true).unwrap().is_split());
        assert_eq!(combine_induction(&c, 3, true).unwrap(), c);
        assert!(matches!(combine_induction(&c, 3, false), Err(Error::NoConclusion(_))));
        assert!(combine_tensor(&c, 10).is_split());
        assert_eq!(combine_tensor(&c, 495), c);
    }

    #[test]
    fn alpha() {
        let l3 = field(3);
        let q = BrauerClassQ::from_ints(-3, 10).unwrap();
        assert_eq!(q.l_disc(&l3).unwrap(), sq(10));
        assert_eq!(alpha_combine(&q, 58311, &sq(-21), Indicator::Plus, &l3).unwrap(), sq(-10));
        assert_eq!(alpha_combine(&BrauerClassQ::trivial(), 5, &sq(-33), Indicator::Plus, &field(19)).unwrap(), sq(-3));
        assert_eq!(alpha_combine(&q, 4, &sq(-21), Indicator::Minus, &l3).unwrap(), sq(1));
        let split_at_7 = BrauerClassQ::new([Place::small(7), Place::small(19)]).unwrap();
        assert!(alpha_combine(&split_at_7, 1, &sq(1), Indicator::Plus, &l3).is_err());
    }

    #[test]
    fn q8() {
        assert!(q8_class(12).is_split());
        assert_eq!(q8_class(14), BrauerClassQ::from_ints(-1, -1).unwrap());
        assert_eq!(q8_class(14), BrauerClassQ::from_ints(-3, -2).unwrap());
        assert_eq!(q8_class(14).l_disc(&field(3)).unwrap(), sq(-2));
    }
}
