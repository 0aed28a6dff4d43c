use std::collections::BTreeMap;
use std::sync::Arc;

use qherm_core::variety::*;
use qherm_core::{Budget, Error, FieldCtx, FieldElem, ProjSpace};

fn space(q: u32, r: usize) -> Arc<ProjSpace> {
    Arc::new(ProjSpace::new(Arc::new(FieldCtx::quadratic_over(q).unwrap()), r).unwrap())
}

fn b_of(q: u32, r: usize) -> Variety {
    let s = space(q, r);
    let p = find_params(&s).unwrap();
    build_b(&s, &p, &Budget::default()).unwrap()
}

/// Standard equations, valid for every point set `K` of `PG(r, q_f)`: with
/// `t_i` hyperplanes meeting `K` in `i` points and `θ_d = |PG(d, q_f)|`,
/// `Σ t_i = θ_r`, `Σ i t_i = |K| θ_{r-1}`, `Σ i(i-1) t_i = |K|(|K|-1) θ_{r-2}`.
fn standard_equations_hold(counts: &BTreeMap<u64, u64>, n: u64, q_f: u64, r: u32) -> bool {
    let theta = |d: u32| (q_f.pow(d + 1) - 1) / (q_f - 1);
    let first: u64 = counts.iter().map(|(i, t)| i * t).sum();
    let second: u64 = counts.iter().map(|(i, t)| i * i.saturating_sub(1) * t).sum();
    let total: u64 = counts.values().sum();
    total == theta(r) && first == n * theta(r - 1) && second == n * (n - 1) * theta(r - 2)
}

#[test]
fn sizes_match_closed_forms() {
    for (q, r) in [(3, 3), (4, 3), (5, 3), (4, 4), (8, 3)] {
        let v = b_of(q, r);
        assert_eq!(
            v.len() as u64,
            predicted_spectrum(q as u64, r, Family::B).unwrap().n,
            "q={q} r={r}"
        );
    }
    assert_eq!(b_of(3, 3).len(), 262);
    assert_eq!(b_of(4, 3).len(), 1041);
    assert_eq!(b_of(4, 4).len(), 16657);
}

#[test]
fn odd_q_even_r_q3_is_refused() {
    assert_eq!(
        find_params(&space(3, 4)).unwrap_err(),
        Error::NoValidParams { q: 3, r: 4 }
    );
    // q = 5 does admit parameters
    assert!(find_params(&space(5, 4)).is_ok());
}

#[test]
fn even_q_needs_q_above_two() {
    let s = space(2, 3);
    assert!(find_params(&s).is_err());
    let e = build_b(
        &s,
        &BParams {
            r: 3,
            alpha: FieldElem(1),
            beta: FieldElem(2),
        },
        &Budget::default(),
    );
    assert!(matches!(e, Err(Error::InvalidParams(_))));
}

#[test]
fn even_r_trace_condition_splits_parameters() {
    // q = 4, r = 4: the trace condition holds for some pairs and not others
    let s = space(4, 4);
    let f = s.field();
    let sub = f.subfield().unwrap();
    let (mut yes, mut no) = (0, 0);
    for a in f.elements().skip(1) {
        for b in f.elements().filter(|&b| !sub.contains(b)) {
            let rep = validate_params(
                &s,
                &BParams {
                    r: 4,
                    alpha: a,
                    beta: b,
                },
            )
            .unwrap();
            assert_eq!(rep.trace, Some(EVEN_CLAUSE_TRACE));
            if rep.passed {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    assert_eq!(yes + no, 15 * 12);
    // the ratio is spread evenly over GF(4)* and only 1 has trace 0
    assert_eq!(yes, 60);
}

#[test]
fn hyperplane_spectrum_q3_r3() {
    let v = b_of(3, 3);
    let sp = hyperplane_spectrum(&v, &Budget::default()).unwrap();
    assert_eq!(sp.support(), predicted_spectrum(3, 3, Family::B).unwrap().support());
    let expected: BTreeMap<u64, u64> = [(19, 1), (26, 486), (28, 72), (35, 243), (37, 18)]
        .into_iter()
        .collect();
    assert_eq!(sp.counts, expected);
    assert!(standard_equations_hold(&sp.counts, 262, 9, 3));
    // the published split 513 / 216 cannot come from any 262-point set
    let published: BTreeMap<u64, u64> = [(19, 1), (26, 513), (28, 72), (35, 216), (37, 18)]
        .into_iter()
        .collect();
    assert!(!standard_equations_hold(&published, 262, 9, 3));
    assert!(sp.satisfies_standard_equations(9, 3));
    let total = published.values().sum();
    assert!(!SpectrumReport {
        counts: published,
        total,
        n: 262
    }
    .satisfies_standard_equations(9, 3));
}

#[test]
fn spectrum_counts_do_not_depend_on_parameters() {
    let s = space(3, 3);
    let f = s.field();
    let sub = f.subfield().unwrap();
    let mut seen = Vec::new();
    for a in f.elements().skip(1) {
        for b in f.elements().filter(|&b| !sub.contains(b)) {
            let p = BParams {
                r: 3,
                alpha: a,
                beta: b,
            };
            if !validate_params(&s, &p).unwrap().passed {
                continue;
            }
            let v = build_b(&s, &p, &Budget::default()).unwrap();
            seen.push(hyperplane_spectrum(&v, &Budget::default()).unwrap().counts);
        }
    }
    assert!(seen.len() > 10);
    assert!(seen.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn hyperplane_spectra_match_predictions() {
    for (q, r) in [(4, 3), (5, 3), (4, 4)] {
        let v = b_of(q, r);
        let sp = hyperplane_spectrum(&v, &Budget::default()).unwrap();
        let pred = predicted_spectrum(q as u64, r, Family::B).unwrap();
        assert_eq!(sp.support(), pred.support(), "q={q} r={r}");
        assert!(standard_equations_hold(
            &sp.counts,
            v.len() as u64,
            (q * q) as u64,
            r as u32
        ));
    }
}

#[test]
fn corrected_q_odd_r3_counts() {
    // A_w / (q^2 - 1) = 1, q^6 - q^5, q^4 - q^2, q^5, 2q^2 for n_1 .. n_5
    for q in [3u64, 5] {
        let v = b_of(q as u32, 3);
        let sp = hyperplane_spectrum(&v, &Budget::default()).unwrap();
        let pred = predicted_spectrum(q, 3, Family::B).unwrap().sizes;
        let want = [1, q.pow(6) - q.pow(5), q.pow(4) - q * q, q.pow(5), 2 * q * q];
        for (n, c) in pred.iter().zip(want) {
            assert_eq!(sp.counts[n], c, "q={q}, size {n}");
        }
    }
}

#[test]
fn hermitian_and_quasi_hermitian() {
    let b = Budget::default();
    for (q, r) in [(2, 3), (3, 3), (4, 3), (2, 4)] {
        let s = space(q, r);
        let h = build_hermitian(&s, &b).unwrap();
        let pred = predicted_spectrum(q as u64, r, Family::Hermitian).unwrap();
        assert_eq!(h.len() as u64, pred.n);
        assert_eq!(hyperplane_spectrum(&h, &b).unwrap().support(), pred.support());
        if let Ok(p) = find_params(&s) {
            let qh = build_quasi_hermitian(&s, &p, &b).unwrap();
            assert_eq!(qh.len() as u64, pred.n);
            assert_eq!(hyperplane_spectrum(&qh, &b).unwrap().support(), pred.support());
        }
    }
}

#[test]
fn cone_and_infinity_parts() {
    let b = Budget::default();
    let s = space(3, 3);
    let p = find_params(&s).unwrap();
    // cone over the 4 points of a Hermitian curve of PG(1, 9)
    assert_eq!(build_cone_f(&s, &b).unwrap().len(), 37);
    assert_eq!(build_b_infinity(&s, &p, &b).unwrap().len(), 19);
    let s = space(4, 3);
    let p = find_params(&s).unwrap();
    // even q: a plane of the hyperplane at infinity
    assert_eq!(build_b_infinity(&s, &p, &b).unwrap().len(), 17);
}

#[test]
fn surgery_identity_q3() {
    let s = space(3, 3);
    let p = find_params(&s).unwrap();
    let rep = surgery_check(&s, &p, &Budget::default()).unwrap();
    assert_eq!(rep.checked, 820);
    assert!(rep.failures.is_empty());
}

#[test]
fn line_spectrum_q3() {
    let q = 3u64;
    let v = b_of(3, 3);
    let sp = line_spectrum(&v, &Budget::default()).unwrap();
    assert_eq!(sp.total, 7462);
    let allowed = [0, 1, 2, q - 1, q, q + 1, q + 2, 2 * q - 1, 2 * q, q * q + 1];
    assert!(sp.support().iter().all(|s| allowed.contains(s)), "{:?}", sp.counts);
    assert_eq!(sp.max_size(), Some(q * q + 1));
}

#[test]
fn budget_refusals() {
    let v = b_of(3, 3);
    let tiny = Budget::new(10);
    assert!(matches!(hyperplane_spectrum(&v, &tiny), Err(Error::Budget { .. })));
    assert!(matches!(line_spectrum(&v, &tiny), Err(Error::Budget { .. })));
    let s = space(3, 3);
    assert!(matches!(build_hermitian(&s, &tiny), Err(Error::Budget { .. })));
}
