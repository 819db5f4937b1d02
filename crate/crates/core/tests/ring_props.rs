use std::sync::OnceLock;

use agcode::coordring::{CoordRing, CostCounter, RingElem};
use agcode::curve::CurveData;
use agcode::gf::FieldElem;
use proptest::prelude::*;

fn rings() -> &'static [CoordRing] {
    static RINGS: OnceLock<Vec<CoordRing>> = OnceLock::new();
    RINGS.get_or_init(|| {
        ["klein", "hermitian16", "gs9"]
            .iter()
            .map(|n| CoordRing::new(CurveData::bundled(n).unwrap()).unwrap())
            .collect()
    })
}

fn elem(ring: &CoordRing, terms: &[(u32, usize, u8)]) -> RingElem {
    let q = ring.field().order();
    let a1 = ring.a1();
    let mut out = ring.zero();
    for &(k, j, c) in terms {
        let t = RingElem::monomial(a1, k, j % a1, FieldElem::from_raw((c as u32 % q) as u8));
        out = out.add(ring.field(), &t);
    }
    out
}

fn terms() -> impl Strategy<Value = Vec<(u32, usize, u8)>> {
    prop::collection::vec((0u32..5, 0usize..9, any::<u8>()), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_full_reduction(r in 0usize..3, a in terms(), b in terms()) {
        let ring = &rings()[r];
        let (g, h) = (elem(ring, &a), elem(ring, &b));
        let mut ctr = CostCounter::new();
        let fast = ring.mul(&g, &h, &mut ctr);
        let slow = ring.normal_form(&ring.to_mpoly(&g).mul(ring.field(), &ring.to_mpoly(&h)));
        prop_assert_eq!(&fast, &slow);
        prop_assert!(ctr.muls <= ring.mul_bound(&g, &h));
        prop_assert_eq!(ctr.bound, ring.mul_bound(&g, &h));
        prop_assert_eq!(ctr.divs, 0);
    }

    #[test]
    fn evaluation_is_multiplicative(r in 0usize..3, a in terms(), b in terms()) {
        let ring = &rings()[r];
        let (g, h) = (elem(ring, &a), elem(ring, &b));
        let gh = ring.mul(&g, &h, &mut CostCounter::new());
        let f = ring.field();
        let lhs = ring.ev(&gh);
        let rhs: Vec<FieldElem> = ring.ev(&g).iter().zip(ring.ev(&h)).map(|(&x, y)| f.mul(x, y)).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ring_axioms(r in 0usize..3, a in terms(), b in terms(), c in terms()) {
        let ring = &rings()[r];
        let f = ring.field();
        let (x, y, z) = (elem(ring, &a), elem(ring, &b), elem(ring, &c));
        let mut ctr = CostCounter::new();
        prop_assert_eq!(ring.mul(&x, &y, &mut ctr), ring.mul(&y, &x, &mut ctr));
        let xy_z = ring.mul(&ring.mul(&x, &y, &mut ctr), &z, &mut ctr);
        let x_yz = ring.mul(&x, &ring.mul(&y, &z, &mut ctr), &mut ctr);
        prop_assert_eq!(xy_z, x_yz);
        let lhs = ring.mul(&x, &y.add(f, &z), &mut ctr);
        let rhs = ring.mul(&x, &y, &mut ctr).add(f, &ring.mul(&x, &z, &mut ctr));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ring.mul(&ring.one(), &x, &mut ctr), x.clone());
        prop_assert!(x.sub(f, &x).is_zero());
    }

    #[test]
    fn pole_order_is_additive(r in 0usize..3, a in terms(), b in terms()) {
        let ring = &rings()[r];
        let (g, h) = (elem(ring, &a), elem(ring, &b));
        prop_assume!(!g.is_zero() && !h.is_zero());
        let gh = ring.mul(&g, &h, &mut CostCounter::new());
        prop_assert_eq!(ring.pole_order(&gh), Some(ring.pole_order(&g).unwrap() + ring.pole_order(&h).unwrap()));
    }

    #[test]
    fn quotient_inverts_product(r in 0usize..3, a in terms(), b in terms()) {
        let ring = &rings()[r];
        let (g, h) = (elem(ring, &a), elem(ring, &b));
        prop_assume!(!h.is_zero());
        let gh = ring.mul(&g, &h, &mut CostCounter::new());
        let mut ctr = CostCounter::new();
        prop_assert_eq!(ring.quot(&gh, &h, &mut ctr), Ok(g.clone()));
        prop_assert!(ctr.total() <= ctr.bound);
        prop_assert_eq!(ctr.bound as usize, g.gamma() * 2 + {
            // sum of multi(t phi_s, h) = gamma(h) per term plus table weight
            let mut m = 0u64;
            for (k, j, c) in g.terms() {
                m += ring.mul_bound(&RingElem::monomial(ring.a1(), k, j, c), &h);
            }
            m as usize
        });
    }

    #[test]
    fn support_of_phi(r in 0usize..3, s in 0i64..120) {
        let ring = &rings()[r];
        let sg = &ring.semigroup;
        if sg.is_nongap(s) {
            let p = ring.phi(s).unwrap();
            prop_assert_eq!(ring.pole_order(&p), Some(s as u32));
            prop_assert_eq!(ring.to_mpoly(&p).leading().unwrap().0.weight, s as u32);
        } else {
            prop_assert!(ring.phi(s).is_err());
        }
    }
}
