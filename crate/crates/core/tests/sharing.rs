use std::sync::Arc;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qherm_core::sss::*;
use qherm_core::variety::*;
use qherm_core::{Budget, Error, FieldCtx, FieldElem, ProjSpace};

fn space(q: u32, r: usize) -> Arc<ProjSpace> {
    Arc::new(ProjSpace::new(Arc::new(FieldCtx::quadratic_over(q).unwrap()), r).unwrap())
}

fn b33() -> (Scheme, AccessStructure) {
    let s = space(3, 3);
    let v = build_b(&s, &find_params(&s).unwrap(), &Budget::default()).unwrap();
    access_structure(&v, v.points()[0], &Budget::default()).unwrap()
}

fn hermitian_q2() -> (Scheme, AccessStructure) {
    let s = space(2, 3);
    let h = build_hermitian(&s, &Budget::default()).unwrap();
    access_structure(&h, h.points()[0], &Budget::default()).unwrap()
}

#[test]
fn democracy_b33() {
    let (scheme, a) = b33();
    assert_eq!(scheme.participants(), 261);
    assert_eq!(a.len(), 729);
    let d = democracy_report(&a);
    assert_eq!(d.histogram, [(648, 261)].into_iter().collect());
    assert!(d.is_democratic());
    assert!(d.dictators.is_empty());
    assert!(a.is_antichain());
}

#[test]
fn democracy_hermitian_q2() {
    let (scheme, a) = hermitian_q2();
    // P0 defaults to the first Hermitian point in canonical order
    let p0 = scheme.code().p0();
    assert_eq!(scheme.code().space().coords(p0), [0, 0, 1, 1].map(FieldElem).to_vec());
    assert_eq!(a.len(), 64);
    assert_eq!(a.size_profile(), [(31, 32), (35, 32)].into_iter().collect());
    assert_eq!(democracy_report(&a).histogram, [(48, 44)].into_iter().collect());
}

#[test]
fn dictator_is_flagged() {
    let a = AccessStructure {
        participants: 3,
        sets: [AccessSet::new(vec![1, 2]), AccessSet::new(vec![1, 3])]
            .into_iter()
            .collect(),
        provenance: "hand-made".into(),
    };
    let d = democracy_report(&a);
    assert_eq!(d.dictators, vec![1]);
    assert!(!d.is_democratic());
}

#[test]
fn non_minimal_primal_code_is_refused() {
    let s = space(4, 3);
    let v = build_b(&s, &find_params(&s).unwrap(), &Budget::default()).unwrap();
    let sigma_inf = s.index_of(&[1, 0, 0, 0].map(FieldElem)).unwrap();
    assert_eq!(
        access_structure(&v, v.points()[0], &Budget::default()).unwrap_err(),
        Error::NotMinimal { witness: sigma_inf }
    );
}

#[test]
fn random_roundtrips_b33() {
    let (scheme, a) = b33();
    let q = scheme.code().field().order();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..100 {
        let set = a.sets.iter().choose(&mut rng).unwrap();
        let secret = FieldElem(rng.random_range(0..q));
        let d = deal(&scheme, secret, trial).unwrap();
        let t: Vec<FieldElem> = set.members().iter().map(|&i| d.shares[i as usize - 1]).collect();
        assert_eq!(recover(&scheme, set, &t).unwrap(), secret);
        // dropping any one member loses the secret
        let k = rng.random_range(0..set.len());
        let smaller = set.without(set.members()[k]);
        let mut t2 = t.clone();
        t2.remove(k);
        assert_eq!(recover(&scheme, &smaller, &t2).unwrap_err(), Error::NotQualified);
    }
}

#[test]
fn single_participants_learn_nothing() {
    let (scheme, _) = b33();
    let d = deal(&scheme, FieldElem(5), 1).unwrap();
    for i in (1..=scheme.participants()).step_by(17) {
        let one = AccessSet::new(vec![i]);
        assert_eq!(
            recover(&scheme, &one, &[d.shares[i as usize - 1]]).unwrap_err(),
            Error::NotQualified
        );
    }
}

#[test]
fn everyone_together_recovers() {
    let (scheme, _) = hermitian_q2();
    let all = AccessSet::new((1..=scheme.participants()).collect());
    for s in 0..4 {
        let d = deal(&scheme, FieldElem(s), 100 + s as u64).unwrap();
        assert_eq!(recover(&scheme, &all, &d.shares).unwrap(), FieldElem(s));
    }
}

#[test]
fn perfectness_on_hermitian_q2() {
    let (scheme, a) = hermitian_q2();
    let b = Budget::default();
    let d = deal(&scheme, FieldElem(3), 9).unwrap();
    for set in &a.sets {
        let rep = perfectness_check(&scheme, set, &d, &b).unwrap();
        assert_eq!(rep.verdict, Perfectness::Qualified);
        assert_eq!(rep.secrets, [3].into_iter().collect());
        for &i in set.members().iter().step_by(7) {
            let rep = perfectness_check(&scheme, &set.without(i), &d, &b).unwrap();
            assert_eq!(rep.verdict, Perfectness::Uniform, "set minus {i}");
            assert_eq!(rep.secrets.len(), 4);
        }
    }
}

#[test]
fn recover_agrees_with_parity_check_solve() {
    // oracle: solve h_0 = Σ x_j h_{i_j} directly on the parity-check columns
    let (scheme, a) = hermitian_q2();
    let f = scheme.code().field();
    let d = deal(&scheme, FieldElem(1), 5).unwrap();
    for set in a.sets.iter().step_by(5) {
        let cols: Vec<Vec<FieldElem>> = set
            .members()
            .iter()
            .map(|&i| scheme.parity_column(i as usize))
            .collect();
        let refs: Vec<&[FieldElem]> = cols.iter().map(|c| c.as_slice()).collect();
        let x = qherm_core::linalg::solve_combination(f, &refs, &scheme.parity_column(0)).unwrap();
        let s = x.iter().zip(set.members()).fold(FieldElem::ZERO, |acc, (&xi, &i)| {
            f.add(acc, f.mul(xi, d.shares[i as usize - 1]))
        });
        let t: Vec<FieldElem> = set.members().iter().map(|&i| d.shares[i as usize - 1]).collect();
        assert_eq!(recover(&scheme, set, &t).unwrap(), s);
    }
}

/// Collineations of `H(3, 4)` fixing `P0 = (0,0,1,1)`.
fn hermitian_q2_symmetries(scheme: &Scheme) -> Vec<Permutation> {
    let f = scheme.code().field();
    let w = f.generator();
    type Map<'a> = Box<dyn Fn(&[FieldElem]) -> Vec<FieldElem> + 'a>;
    let maps: Vec<Map> = vec![
        Box::new(|x| x.iter().map(|&c| f.mul(c, c)).collect()),
        Box::new(|x| vec![x[1], x[0], x[2], x[3]]),
        Box::new(|x| vec![x[0], x[1], x[3], x[2]]),
        Box::new(move |x| vec![f.mul(w, x[0]), x[1], x[2], x[3]]),
        Box::new(move |x| vec![x[0], f.mul(w, x[1]), x[2], x[3]]),
    ];
    maps.iter().map(|m| induced_permutation(scheme, m).unwrap()).collect()
}

#[test]
fn collineations_are_automorphisms() {
    let (scheme, a) = hermitian_q2();
    let gens = hermitian_q2_symmetries(&scheme);
    for g in &gens {
        assert!(!g.is_identity());
        assert!(a.is_automorphism(g));
    }
    // a map moving P0 is rejected
    let moved = induced_permutation(&scheme, |x: &[FieldElem]| vec![x[2], x[3], x[0], x[1]]);
    assert!(moved.is_err());
    // a transposition of two participants is not an automorphism
    let t = Permutation::from_cycles(44, &[vec![1, 2]]).unwrap();
    assert!(!a.is_automorphism(&t));
}

#[test]
fn development_is_idempotent_and_inside_structure() {
    let (scheme, a) = hermitian_q2();
    let g = group_closure(44, &hermitian_q2_symmetries(&scheme), &Budget::default()).unwrap();
    assert_eq!(576 % g.order(), 0, "order {}", g.order());
    let profile = a.size_profile();
    let starters: Vec<AccessSet> = profile
        .keys()
        .map(|&k| a.sets.iter().find(|s| s.len() == k).unwrap().clone())
        .collect();
    let dev = develop(&starters, &g).unwrap();
    assert!(dev.sets.is_subset(&a.sets));
    let again: Vec<AccessSet> = dev.sets.iter().cloned().collect();
    assert!(structures_equal(&develop(&again, &g).unwrap(), &dev));
    assert!(dev.is_antichain());
}

#[test]
fn deal_is_deterministic_and_seed_sensitive() {
    let (scheme, _) = b33();
    let a = deal(&scheme, FieldElem(4), 7).unwrap();
    assert_eq!(a, deal(&scheme, FieldElem(4), 7).unwrap());
    assert_ne!(a.shares, deal(&scheme, FieldElem(4), 8).unwrap().shares);
    assert_eq!(a.u.len(), scheme.dual_dimension());
    assert_eq!(scheme.dual_dimension(), 262 - 4);
}
