use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use udisc::deduce::combine_tensor;
use udisc::symbols::{hilbert, kronecker, relevant_places};
use udisc::{BrauerClassQ, HermitianGram, ImagQuadField, Place, PrimeBehavior, QuadElem, SquareClassQ};

const DELTAS: [u64; 9] = [1, 2, 3, 5, 6, 7, 10, 15, 19];
const ODD_PRIMES: [u32; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn nonzero_rat() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-300i64..=-1, 1i64..=300], 1i64..=60).prop_map(|(n, d)| rat(n, d))
}

fn field() -> impl Strategy<Value = ImagQuadField> {
    prop::sample::select(DELTAS.to_vec()).prop_map(|d| ImagQuadField::new(d).unwrap())
}

fn places_of(a: &BigRational, b: &BigRational) -> Vec<Place> {
    let sa = SquareClassQ::from_rational(a).unwrap();
    let sb = SquareClassQ::from_rational(b).unwrap();
    relevant_places(&sa, &sb).into_iter().collect()
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, b % m, e);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

proptest! {
    #[test]
    fn hilbert_symmetric_and_bilinear(a in nonzero_rat(), b in nonzero_rat(), c in nonzero_rat()) {
        let mut places = places_of(&a, &(&b * &c));
        places.extend(places_of(&b, &c));
        for v in places {
            let ab = hilbert(&a, &b, &v).unwrap();
            prop_assert_eq!(ab, hilbert(&b, &a, &v).unwrap());
            let prod = hilbert(&a, &(&b * &c), &v).unwrap();
            prop_assert_eq!(prod, ab * hilbert(&a, &c, &v).unwrap());
        }
    }

    #[test]
    fn steinberg_relations(a in nonzero_rat()) {
        let one = BigRational::one();
        for v in places_of(&a, &-&a) {
            prop_assert_eq!(hilbert(&a, &-&a, &v).unwrap(), 1);
        }
        if a != one {
            let b = &one - &a;
            for v in places_of(&a, &b) {
                prop_assert_eq!(hilbert(&a, &b, &v).unwrap(), 1);
            }
        }
    }

    #[test]
    fn reciprocity(a in nonzero_rat(), b in nonzero_rat()) {
        let prod: i8 = places_of(&a, &b).iter().map(|v| hilbert(&a, &b, v).unwrap()).product();
        prop_assert_eq!(prod, 1);
        let c = BrauerClassQ::from_pair(&a, &b).unwrap();
        prop_assert_eq!(c.ram().len() % 2, 0);
    }

    #[test]
    fn kronecker_matches_euler(a in -500i64..500, i in 0usize..ODD_PRIMES.len()) {
        let p = ODD_PRIMES[i] as u64;
        let r = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
        let want = if r == 0 { 0 } else if r == 1 { 1 } else { -1 };
        prop_assert_eq!(kronecker(&BigInt::from(a), &BigInt::from(p)).unwrap(), want);
    }

    #[test]
    fn prime_behavior_matches_kronecker(l in field(), i in 0usize..ODD_PRIMES.len()) {
        let p = ODD_PRIMES[i];
        let k = kronecker(&BigInt::from(l.field_disc()), &BigInt::from(p)).unwrap();
        let want = match k { 0 => PrimeBehavior::Ramified, 1 => PrimeBehavior::Split, _ => PrimeBehavior::Inert };
        prop_assert_eq!(l.prime_behavior(&BigUint::from(p)), want);
    }

    #[test]
    fn norms_are_norms(l in field(), x in -40i64..40, y in -40i64..40, z in 1i64..30) {
        prop_assume!(x != 0 || y != 0);
        let e = QuadElem::new(rat(x, z), rat(y, 1), &l);
        let n = e.norm();
        prop_assert!(l.is_norm(&n).unwrap());
        prop_assert!(l.is_norm_local_criteria(&n).unwrap());
    }

    #[test]
    fn norm_class_is_multiplicative(l in field(), a in nonzero_rat(), b in nonzero_rat()) {
        let ca = BrauerClassQ::new(l.norm_class(&a).unwrap()).unwrap();
        let cb = BrauerClassQ::new(l.norm_class(&b).unwrap()).unwrap();
        let cab = BrauerClassQ::new(l.norm_class(&(&a * &b)).unwrap()).unwrap();
        prop_assert_eq!(cab, ca.mul(&cb));
        prop_assert_eq!(l.is_norm(&a).unwrap(), l.is_norm_local_criteria(&a).unwrap());
    }

    #[test]
    fn l_disc_round_trip(l in field(), t in nonzero_rat()) {
        let t = SquareClassQ::from_rational(&t).unwrap();
        let c = BrauerClassQ::of_norm_class(&l, &t);
        prop_assert!(c.splits_in(&l));
        let d = c.l_disc(&l).unwrap();
        prop_assert_eq!(BrauerClassQ::of_norm_class(&l, &d), c);
        // the returned representative is the smallest in its class
        prop_assert!(d.canonical_key() <= t.canonical_key());
    }

    #[test]
    fn tensor_is_a_power(a in nonzero_rat(), b in nonzero_rat(), k in 1u64..50) {
        let c = BrauerClassQ::from_pair(&a, &b).unwrap();
        let t = combine_tensor(&c, k);
        prop_assert_eq!(&t, &c.pow(k as i64));
        prop_assert_eq!(t.is_split(), k % 2 == 0 || c.is_split());
    }

    #[test]
    fn delta_is_basis_independent(
        l in field(),
        diag in prop::collection::vec((1i64..20, 1i64..6), 1..5),
        g in prop::collection::vec((-3i64..=3, -3i64..=3), 16),
    ) {
        let d: Vec<BigRational> = diag.iter().map(|&(n, m)| rat(n, m)).collect();
        let h = HermitianGram::diagonal(&l, &d).unwrap();
        let n = d.len();
        let mut gm: Vec<Vec<QuadElem>> = (0..n)
            .map(|i| (0..n).map(|j| {
                let (x, y) = g[i * 4 + j];
                QuadElem::new(rat(x, 1), rat(y, 1), &l)
            }).collect())
            .collect();
        for (i, row) in gm.iter_mut().enumerate() {
            row[i] = &row[i] + &QuadElem::new(rat(7, 1), BigRational::zero(), &l);
        }
        if let Ok(h2) = h.change_basis(&gm) {
            prop_assert_eq!(h2.delta().unwrap(), h.delta().unwrap());
            prop_assert!(h2.isometric(&h).unwrap());
        }
    }
}

#[test]
fn square_class_text_round_trip() {
    for n in [-210i64, -10, -3, -2, -1, 1, 2, 3, 5, 55, 221] {
        let s = SquareClassQ::from_int(n).unwrap();
        let back: SquareClassQ = s.to_string().parse().unwrap();
        assert_eq!(back, s);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<SquareClassQ>(&json).unwrap(), s);
    }
}
