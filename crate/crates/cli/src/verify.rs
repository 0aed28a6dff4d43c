//! The acceptance suite: ten criteria, each an exact check on computed data.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qherm_core::code::{
    ab_bound_check, code_from_variety, cutting_blocking_check, minimal_codewords_bruteforce, weights_bruteforce,
    weights_via_hyperplanes, Verdict,
};
use qherm_core::sss::{access_structure, deal, democracy_report, perfectness_check, recover, AccessSet, Perfectness};
use qherm_core::variety::{
    build_b, build_hermitian, build_quasi_hermitian, find_params, hyperplane_spectrum, line_spectrum,
    predicted_spectrum, surgery_check, validate_params, BParams, Family, SpectrumReport, Variety,
};
use qherm_core::{Budget, Error, FieldElem, ProjSpace};

use crate::commands::develop_fixture;
use crate::error::{CliError, CliResult};
use crate::fixture;
use crate::output::Status;
use crate::setup;

/// Hyperplane counts for `B(3, 3)` as the acceptance criteria state them.
pub const EXPECTED_COUNTS_Q3_R3: [(u64, u64); 5] = [(19, 1), (26, 513), (28, 72), (35, 216), (37, 18)];

/// Weight enumerator of `C(B(3, 3))` as the acceptance criteria state them.
pub const EXPECTED_WEIGHTS_Q3_R3: [(u64, u64); 6] =
    [(0, 1), (243, 8), (236, 4104), (234, 576), (227, 1728), (225, 144)];

/// Inputs shared by all criteria.
#[derive(Clone, Debug)]
pub struct Suite {
    pub budget: Budget,
    /// Optional modulus override for `GF(q^2)` with this `q`.
    pub modulus: Option<(u32, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

struct Check {
    ok: bool,
    detail: String,
}

type Runner = fn(&Suite) -> CliResult<Check>;

pub const TITLES: [&str; 10] = [
    "variety sizes",
    "hyperplane spectra",
    "line spectrum",
    "weight enumerator",
    "divisibility",
    "minimality",
    "democracy",
    "sharing correctness",
    "example development",
    "cross-criterion consistency",
];

const RUNNERS: [Runner; 10] = [
    sizes,
    spectra,
    lines,
    weights,
    divisibility,
    minimality,
    democracy,
    sharing,
    example,
    consistency,
];

impl Suite {
    /// Fails fast on a modulus override that does not define the field.
    pub fn check_modulus(&self) -> CliResult<()> {
        if let Some((q, m)) = &self.modulus {
            setup::field(*q, Some(m))?;
        }
        Ok(())
    }

    fn space(&self, q: u32, r: usize) -> CliResult<Arc<ProjSpace>> {
        let m = self
            .modulus
            .as_ref()
            .filter(|(mq, _)| *mq == q)
            .map(|(_, m)| m.as_str());
        let f = setup::field(q, m)?;
        Ok(Arc::new(ProjSpace::new(Arc::new(f), r)?))
    }

    fn b(&self, q: u32, r: usize) -> CliResult<Variety> {
        let s = self.space(q, r)?;
        let p = find_params(&s)?;
        Ok(build_b(&s, &p, &self.budget)?)
    }

    fn hermitian(&self, q: u32, r: usize) -> CliResult<Variety> {
        Ok(build_hermitian(&self.space(q, r)?, &self.budget)?)
    }

    fn quasi_hermitian(&self, q: u32, r: usize) -> CliResult<Variety> {
        let s = self.space(q, r)?;
        let p = find_params(&s)?;
        Ok(build_quasi_hermitian(&s, &p, &self.budget)?)
    }

    /// Runs every criterion, calling `each` as results arrive.
    pub fn run(&self, mut each: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
        let mut out = Vec::new();
        for (i, (title, runner)) in TITLES.iter().zip(RUNNERS).enumerate() {
            let start = Instant::now();
            let (status, detail) = if self.budget.max_work == 0 {
                (Status::Skipped, "budget is 0".to_string())
            } else {
                match runner(self) {
                    Ok(c) => (Status::of(c.ok), c.detail),
                    Err(CliError::Core(e @ Error::Budget { .. })) => (Status::Skipped, e.to_string()),
                    Err(e) => (Status::Fail, format!("error: {e}")),
                }
            };
            let res = CriterionResult {
                id: i as u8 + 1,
                title,
                status,
                detail,
                millis: start.elapsed().as_millis(),
            };
            each(&res);
            out.push(res);
        }
        out
    }
}

fn fmt_counts(m: &BTreeMap<u64, u64>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn sizes(s: &Suite) -> CliResult<Check> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (q, r, want) in [(3, 3, 262), (4, 3, 1041), (4, 4, 16657)] {
        let n = s.b(q, r)?.len();
        ok &= n == want;
        notes.push(format!("|B({q},{r})| = {n}"));
    }
    // q = 3, r = 4: scan every (alpha, beta)
    let sp = s.space(3, 4)?;
    let f = sp.field();
    let sub = f.subfield()?;
    let mut valid = 0;
    let mut scanned = 0;
    for a in f.elements().skip(1) {
        for b in f.elements().filter(|&b| !sub.contains(b)) {
            scanned += 1;
            valid += validate_params(
                &sp,
                &BParams {
                    r: 4,
                    alpha: a,
                    beta: b,
                },
            )?
            .passed as u32;
        }
    }
    let refused = matches!(find_params(&sp), Err(Error::NoValidParams { q: 3, r: 4 }));
    ok &= valid == 0 && refused;
    notes.push(format!(
        "B(3,4): {valid} of {scanned} pairs admissible, refused = {refused}"
    ));
    Ok(Check {
        ok,
        detail: notes.join("; "),
    })
}

fn spectra(s: &Suite) -> CliResult<Check> {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut measured33 = None;
    for (q, r) in [(3, 3), (5, 3), (4, 3), (4, 4)] {
        let v = s.b(q, r)?;
        let sp = hyperplane_spectrum(&v, &s.budget)?;
        let pred = predicted_spectrum(q as u64, r, Family::B)?;
        let same = sp.support() == pred.support();
        let standard = sp.satisfies_standard_equations((q * q) as u64, r);
        ok &= same && standard;
        notes.push(format!(
            "({q},{r}) support {}",
            if same { "matches" } else { "differs" }
        ));
        if (q, r) == (3, 3) {
            measured33 = Some(sp);
        }
    }
    let sp = measured33.expect("(3,3) is in the list");
    let expected = SpectrumReport {
        counts: EXPECTED_COUNTS_Q3_R3.into_iter().collect(),
        total: EXPECTED_COUNTS_Q3_R3.iter().map(|x| x.1).sum(),
        n: sp.n,
    };
    let equal = sp.counts == expected.counts;
    ok &= equal;
    if !equal {
        notes.push(format!(
            "(3,3) counts {} differ from expected {}; standard equations hold for measured: {}, for expected: {}",
            fmt_counts(&sp.counts),
            fmt_counts(&expected.counts),
            sp.satisfies_standard_equations(9, 3),
            expected.satisfies_standard_equations(9, 3)
        ));
    }
    Ok(Check {
        ok,
        detail: notes.join("; "),
    })
}

fn lines(s: &Suite) -> CliResult<Check> {
    let q = 3u64;
    let v = s.b(3, 3)?;
    let sp = line_spectrum(&v, &s.budget)?;
    let allowed = [0, 1, 2, q - 1, q, q + 1, q + 2, 2 * q - 1, 2 * q, q * q + 1];
    let inside = sp.support().iter().all(|x| allowed.contains(x));
    Ok(Check {
        ok: inside && sp.total == 7462,
        detail: format!("{} lines, sizes {}", sp.total, fmt_counts(&sp.counts)),
    })
}

fn weights(s: &Suite) -> CliResult<Check> {
    let v = s.b(3, 3)?;
    let c = code_from_variety(&v, v.points()[0])?;
    let d = weights_via_hyperplanes(&c, &v, &s.budget)?;
    let bf = weights_bruteforce(&c, &s.budget)?;
    let expected: BTreeMap<u64, u64> = EXPECTED_WEIGHTS_Q3_R3.into_iter().collect();
    let agree = d == bf;
    let equal = d.counts == expected;
    // Σ (n - w) A_w = (q_f - 1) n θ_(r-1) for a projective [n, r+1] code
    let moment = |m: &BTreeMap<u64, u64>| {
        m.iter()
            .filter(|(&w, _)| w > 0)
            .map(|(w, a)| (c.len() as u64 - w) * a)
            .sum::<u64>()
    };
    let target = 8 * c.len() as u64 * 91;
    let mut detail = format!(
        "{} codewords; hyperplane and brute-force distributions {}",
        bf.total(),
        if agree { "agree" } else { "differ" }
    );
    if !equal {
        detail.push_str(&format!(
            "; measured {} differs from expected {}; first moment identity holds for measured: {}, for expected: {}",
            fmt_counts(&d.counts),
            fmt_counts(&expected),
            moment(&d.counts) == target,
            moment(&expected) == target
        ));
    }
    Ok(Check {
        ok: agree && equal && bf.total() == 6561,
        detail,
    })
}

fn divisibility(s: &Suite) -> CliResult<Check> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (q, r) in [(4, 3), (4, 4), (3, 3)] {
        let v = s.b(q, r)?;
        let c = code_from_variety(&v, v.points()[0])?;
        let g = weights_via_hyperplanes(&c, &v, &s.budget)?.divisibility();
        let divisible = g % q as u64 == 0;
        ok &= divisible == (q % 2 == 0);
        notes.push(format!("({q},{r}) gcd {g}"));
    }
    Ok(Check {
        ok,
        detail: notes.join(", "),
    })
}

fn minimality(s: &Suite) -> CliResult<Check> {
    let mut ok = true;
    let mut notes = Vec::new();
    let fixtures = [
        ("H(2,3)", s.hermitian(2, 3)?),
        ("H(3,3)", s.hermitian(3, 3)?),
        ("QH(3,3)", s.quasi_hermitian(3, 3)?),
        ("B(3,3)", s.b(3, 3)?),
    ];
    for (name, v) in &fixtures {
        let minimal = cutting_blocking_check(v, &s.budget)?.verdict == Verdict::Minimal;
        ok &= minimal;
        notes.push(format!("{name} {}", if minimal { "minimal" } else { "NOT minimal" }));
    }
    let v = s.b(4, 3)?;
    let sigma_inf = v.space().index_of(&[1, 0, 0, 0].map(FieldElem))?;
    let cb = cutting_blocking_check(&v, &s.budget)?;
    let witness = cb.witness.map(|w| w.covered);
    let bf = minimal_codewords_bruteforce(&v, &s.budget)?;
    let weights: BTreeMap<u64, u64> = [(1024, 15)].into_iter().collect();
    ok &= cb.verdict == Verdict::NotMinimal
        && witness == Some(sigma_inf)
        && bf.non_minimal_words == Some(15)
        && bf.non_minimal_weights == weights;
    notes.push(format!(
        "B(4,3) witness hyperplane {} (infinity = {sigma_inf}), {} non-minimal words {}",
        witness.map_or("none".to_string(), |w| w.to_string()),
        bf.non_minimal_words.unwrap_or(0),
        fmt_counts(&bf.non_minimal_weights)
    ));
    Ok(Check {
        ok,
        detail: notes.join("; "),
    })
}

fn democracy(s: &Suite) -> CliResult<Check> {
    let v = s.b(3, 3)?;
    let (_, a) = access_structure(&v, v.points()[0], &s.budget)?;
    let d = democracy_report(&a);
    let b_ok = a.len() == 729 && d.histogram == [(648, 261)].into_iter().collect();
    let h = s.hermitian(2, 3)?;
    let (_, ah) = access_structure(&h, h.points()[0], &s.budget)?;
    let dh = democracy_report(&ah);
    let h_ok = ah.len() == 64
        && dh.histogram == [(48, 44)].into_iter().collect()
        && ah.size_profile() == [(31, 32), (35, 32)].into_iter().collect();
    Ok(Check {
        ok: b_ok && h_ok,
        detail: format!(
            "B(3,3): {} sets, participants per count {}; H(2,3): {} sets, participants per count {}",
            a.len(),
            fmt_counts(&d.histogram),
            ah.len(),
            fmt_counts(&dh.histogram)
        ),
    })
}

fn sharing(s: &Suite) -> CliResult<Check> {
    let v = s.b(3, 3)?;
    let (scheme, a) = access_structure(&v, v.points()[0], &s.budget)?;
    let q = scheme.code().field().order();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut recovered = 0;
    let mut refused = 0;
    for trial in 0..100u64 {
        let set = a.sets.iter().choose(&mut rng).expect("structure is nonempty");
        let secret = FieldElem(rng.random_range(0..q));
        let d = deal(&scheme, secret, trial)?;
        let t: Vec<FieldElem> = set.members().iter().map(|&i| d.shares[i as usize - 1]).collect();
        recovered += (recover(&scheme, set, &t)? == secret) as u32;
        let k = rng.random_range(0..set.len());
        let mut t2 = t.clone();
        t2.remove(k);
        refused += matches!(
            recover(&scheme, &set.without(set.members()[k]), &t2),
            Err(Error::NotQualified)
        ) as u32;
    }
    let h = s.hermitian(2, 3)?;
    let (hs, ha) = access_structure(&h, h.points()[0], &s.budget)?;
    let d = deal(&hs, FieldElem(3), 1)?;
    let mut uniform = 0;
    let mut tested = 0;
    let mut subsets = vec![AccessSet::new(Vec::new())];
    for set in &ha.sets {
        subsets.extend(set.members().iter().map(|&i| set.without(i)));
    }
    for sub in &subsets {
        tested += 1;
        let rep = perfectness_check(&hs, sub, &d, &s.budget)?;
        uniform += (rep.verdict == Perfectness::Uniform && rep.secrets.len() == 4) as u32;
    }
    Ok(Check {
        ok: recovered == 100 && refused == 100 && uniform == tested,
        detail: format!(
            "{recovered}/100 roundtrips, {refused}/100 reduced sets refused; {uniform}/{tested} unqualified subsets uniform"
        ),
    })
}

fn example(s: &Suite) -> CliResult<Check> {
    let fx = fixture::parse(fixture::HERMITIAN_Q2_EXAMPLE)?;
    let dev = develop_fixture(&fx, &s.budget)?;
    let a = &dev.structure;
    let profile = a.size_profile();
    let ok = dev.order == 576
        && a.len() == 64
        && profile == [(31, 32), (35, 32)].into_iter().collect()
        && a.is_antichain()
        && dev.generators_preserve;
    Ok(Check {
        ok,
        detail: format!(
            "group order {}, {} sets, profile {:?}, antichain {}, generators preserve {}",
            dev.order,
            a.len(),
            profile,
            a.is_antichain(),
            dev.generators_preserve
        ),
    })
}

fn consistency(s: &Suite) -> CliResult<Check> {
    let mut ok = true;
    let mut notes = Vec::new();
    let fixtures = [
        ("H(2,3)", s.hermitian(2, 3)?),
        ("H(3,3)", s.hermitian(3, 3)?),
        ("QH(3,3)", s.quasi_hermitian(3, 3)?),
        ("B(3,3)", s.b(3, 3)?),
        ("B(4,3)", s.b(4, 3)?),
    ];
    for (name, v) in &fixtures {
        let c = code_from_variety(v, v.points()[0])?;
        let d = weights_via_hyperplanes(&c, v, &s.budget)?;
        let same = d == weights_bruteforce(&c, &s.budget)?;
        let ab = ab_bound_check(&d, v.space().field_order()).verdict;
        let cb = cutting_blocking_check(v, &s.budget)?.verdict;
        let bf = minimal_codewords_bruteforce(v, &s.budget)?.verdict;
        let fine = same && cb == bf && (ab != Verdict::Minimal || bf == Verdict::Minimal);
        ok &= fine;
        notes.push(format!("{name} {}", if fine { "consistent" } else { "INCONSISTENT" }));
    }
    let sp = s.space(3, 3)?;
    let rep = surgery_check(&sp, &find_params(&sp)?, &s.budget)?;
    ok &= rep.failures.is_empty() && rep.checked == 820;
    notes.push(format!(
        "surgery identity on {} hyperplanes, {} failures",
        rep.checked,
        rep.failures.len()
    ));
    Ok(Check {
        ok,
        detail: notes.join("; "),
    })
}
