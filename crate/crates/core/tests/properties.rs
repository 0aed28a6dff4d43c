use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use qherm_core::bitset::BitSet;
use qherm_core::geom::span_rank;
use qherm_core::sss::*;
use qherm_core::variety::build_hermitian;
use qherm_core::{Budget, FieldCtx, FieldElem, ProjSpace};

fn gf9_space() -> &'static ProjSpace {
    static S: OnceLock<ProjSpace> = OnceLock::new();
    S.get_or_init(|| ProjSpace::new(Arc::new(FieldCtx::quadratic_over(3).unwrap()), 3).unwrap())
}

fn big_field() -> &'static FieldCtx {
    static F: OnceLock<FieldCtx> = OnceLock::new();
    F.get_or_init(|| FieldCtx::new(2, 17).unwrap())
}

fn hermitian_scheme() -> &'static (Scheme, AccessStructure) {
    static S: OnceLock<(Scheme, AccessStructure)> = OnceLock::new();
    S.get_or_init(|| {
        let s = Arc::new(ProjSpace::new(Arc::new(FieldCtx::quadratic_over(2).unwrap()), 3).unwrap());
        let h = build_hermitian(&s, &Budget::default()).unwrap();
        access_structure(&h, h.points()[0], &Budget::default()).unwrap()
    })
}

fn vec9() -> impl Strategy<Value = Vec<FieldElem>> {
    prop::collection::vec((0u32..9).prop_map(FieldElem), 4)
}

proptest! {
    #[test]
    fn scaling_does_not_move_a_point(v in vec9(), lambda in 1u32..9) {
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let s = gf9_space();
        let f = s.field();
        let scaled: Vec<FieldElem> = v.iter().map(|&x| f.mul(FieldElem(lambda), x)).collect();
        let i = s.index_of(&v).unwrap();
        prop_assert_eq!(i, s.index_of(&scaled).unwrap());
        // the decoded representative is proportional to v
        let c = s.coords(i);
        prop_assert_eq!(span_rank(f, 4, [c.as_slice(), v.as_slice()]).rank(), 1);
    }

    #[test]
    fn row_operations_keep_the_echelon_form(
        rows in prop::collection::vec(vec9(), 1..4),
        a in 0usize..4, b in 0usize..4, c in 1u32..9,
    ) {
        let f = gf9_space().field();
        let e = span_rank(f, 4, rows.iter().map(|r| r.as_slice()));
        let mut moved = rows.clone();
        let (a, b) = (a % rows.len(), b % rows.len());
        if a != b {
            let src = moved[b].clone();
            for (x, y) in moved[a].iter_mut().zip(&src) {
                *x = f.add(*x, f.mul(FieldElem(c), *y));
            }
        } else {
            for x in moved[a].iter_mut() {
                *x = f.mul(FieldElem(c), *x);
            }
        }
        moved.reverse();
        let e2 = span_rank(f, 4, moved.iter().map(|r| r.as_slice()));
        prop_assert_eq!(e, e2);
    }

    #[test]
    fn polynomial_field_axioms(a in 0u32..(1 << 17), b in 0u32..(1 << 17), c in 0u32..(1 << 17)) {
        let f = big_field();
        let (a, b, c) = (FieldElem(a), FieldElem(b), FieldElem(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), FieldElem::ONE);
            prop_assert_eq!(f.pow(a, (1 << 17) - 1), FieldElem::ONE);
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(a in 0u32..81, b in 0u32..81) {
        static F: OnceLock<FieldCtx> = OnceLock::new();
        let f = F.get_or_init(|| FieldCtx::quadratic_over(9).unwrap());
        let (a, b) = (FieldElem(a), FieldElem(b));
        let fr = |x| f.frobenius_q(x).unwrap();
        prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
        prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
        let (t, n) = f.trace_norm(a).unwrap();
        let sub = f.subfield().unwrap();
        prop_assert!(sub.contains(t) && sub.contains(n));
    }

    #[test]
    fn deal_then_recover(secret in 0u32..4, seed in any::<u64>(), pick in 0usize..64) {
        let (scheme, a) = hermitian_scheme();
        let set = a.sets.iter().nth(pick).unwrap();
        let d = deal(scheme, FieldElem(secret), seed).unwrap();
        let t: Vec<FieldElem> = set.members().iter().map(|&i| d.shares[i as usize - 1]).collect();
        prop_assert_eq!(recover(scheme, set, &t).unwrap(), FieldElem(secret));
    }

    #[test]
    fn permutation_roundtrips(images in Just((1u32..=12).collect::<Vec<_>>()).prop_shuffle()) {
        let p = Permutation::from_images(images).unwrap();
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert!(p.inverse().then(&p).is_identity());
        let text = p.to_string();
        prop_assert_eq!(Permutation::parse_cycles(12, &text).unwrap(), p);
    }

    #[test]
    fn bitset_subset_matches_sets(a in prop::collection::btree_set(0u32..200, 0..40),
                                  b in prop::collection::btree_set(0u32..200, 0..40)) {
        let x = BitSet::from_indices(200, a.iter().copied());
        let y = BitSet::from_indices(200, a.union(&b).copied());
        prop_assert!(x.is_subset(&y));
        prop_assert_eq!(x.count(), a.len());
        prop_assert_eq!(y.is_subset(&x), b.is_subset(&a));
        prop_assert_eq!(x.iter().map(|i| i as u32).collect::<Vec<_>>(), a.iter().copied().collect::<Vec<_>>());
    }
}
