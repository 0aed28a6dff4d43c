//! One function per subcommand. Each returns an [`Outcome`] ready to render.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value};

use qherm_core::code::{
    ab_bound_check, code_from_variety, cutting_blocking_check, higher_weight, minimal_codewords_bruteforce,
    weights_bruteforce, weights_via_hyperplanes, LinearCode, MinimalityReport, Verdict, WeightDistribution,
    BRUTEFORCE_MAX_WORDS,
};
use qherm_core::sss::{
    access_structure, deal, democracy_report, develop, group_closure, recover, AccessSet, AccessStructure, Scheme,
    RNG_ALGORITHM,
};
use qherm_core::variety::{
    hyperplane_spectrum, line_spectrum, predicted_spectrum, Family, Prediction, SpectrumReport, VarietyKind,
};
use qherm_core::{Budget, FieldElem, ProjSpace};

use crate::cli::{CodeCmd, Opts, SssCmd, VarietyCmd};
use crate::error::{CliError, CliResult};
use crate::fixture::{self, Fixture};
use crate::output::{pairs, FieldInfo, Outcome, Status, Table};
use crate::setup::{self, Built};

/// Where the variety came from, echoed in every geometry report.
#[derive(Serialize)]
struct VarietyInfo {
    kind: &'static str,
    n: usize,
    alpha: Option<u32>,
    beta: Option<u32>,
    auto_params: bool,
    clause: Option<&'static str>,
    invariant: Option<u32>,
    trace: Option<&'static str>,
}

impl VarietyInfo {
    fn of(b: &Built) -> Self {
        VarietyInfo {
            kind: b.variety.kind().label(),
            n: b.variety.len(),
            alpha: b.params.map(|p| p.alpha.0),
            beta: b.params.map(|p| p.beta.0),
            auto_params: b.auto_params,
            clause: b.validation.as_ref().map(|v| v.clause.describe()),
            invariant: b.validation.as_ref().and_then(|v| v.invariant).map(|x| x.0),
            trace: b.validation.as_ref().and_then(|v| v.trace),
        }
    }
}

struct Geometry {
    built: Built,
    budget: Budget,
}

impl Geometry {
    fn new(opts: &Opts) -> CliResult<Self> {
        let budget = setup::budget(opts);
        let space = setup::space(opts)?;
        let built = setup::build(&space, opts, &budget)?;
        Ok(Geometry { built, budget })
    }

    fn space(&self) -> &ProjSpace {
        self.built.variety.space()
    }

    fn field(&self) -> Option<FieldInfo> {
        Some(FieldInfo::of(self.space().field()))
    }

    fn info(&self) -> VarietyInfo {
        VarietyInfo::of(&self.built)
    }

    fn q(&self) -> u64 {
        self.space().field().sub_order().map_or(0, u64::from)
    }

    fn family(&self) -> Option<Family> {
        match self.built.variety.kind() {
            VarietyKind::B => Some(Family::B),
            VarietyKind::Hermitian | VarietyKind::QuasiHermitian => Some(Family::Hermitian),
            _ => None,
        }
    }

    fn prediction(&self) -> CliResult<Option<Prediction>> {
        self.family()
            .map(|fam| predicted_spectrum(self.q(), self.space().dim(), fam))
            .transpose()
            .map_err(Into::into)
    }

    fn code(&self, opts: &Opts) -> CliResult<LinearCode> {
        let p0 = setup::p0(&self.built.variety, opts)?;
        Ok(code_from_variety(&self.built.variety, p0)?)
    }

    fn outcome(&self, result: Value, table: Table, status: Status) -> Outcome {
        Outcome {
            field: self.field(),
            result,
            table,
            status,
        }
    }
}

pub fn variety(cmd: VarietyCmd, opts: &Opts) -> CliResult<Outcome> {
    let g = Geometry::new(opts)?;
    let v = &g.built.variety;
    let pred = g.prediction()?;
    match cmd {
        VarietyCmd::Build => {
            let space = g.space();
            let mut t = Table::new(&["index", "coords"]);
            for &p in v.points() {
                let c: Vec<String> = space.coords(p).iter().map(|x| x.0.to_string()).collect();
                t.row([p.to_string(), c.join(" ")]);
            }
            let ok = pred.as_ref().is_none_or(|p| p.n == v.len() as u64);
            let result = json!({
                "variety": g.info(),
                "predicted_n": pred.map(|p| p.n),
                "points": v.points(),
            });
            Ok(g.outcome(result, t, Status::of(ok)))
        }
        VarietyCmd::Spectrum => {
            let sp = hyperplane_spectrum(v, &g.budget)?;
            let predicted = pred.map(|p| p.support());
            let standard = sp.satisfies_standard_equations(g.space().field_order(), g.space().dim());
            let ok = standard && predicted.as_ref().is_none_or(|p| *p == sp.support());
            Ok(g.outcome(
                spectrum_json(&g, &sp, predicted.as_ref(), Some(standard)),
                spectrum_table(&sp, predicted.as_ref()),
                Status::of(ok),
            ))
        }
        VarietyCmd::Lines => {
            let sp = line_spectrum(v, &g.budget)?;
            let q = g.q();
            let allowed: Option<BTreeSet<u64>> = (v.kind() == VarietyKind::B).then(|| {
                [0, 1, 2, q - 1, q, q + 1, q + 2, 2 * q - 1, 2 * q, q * q + 1]
                    .into_iter()
                    .collect()
            });
            let ok = allowed.as_ref().is_none_or(|a| sp.support().is_subset(a));
            Ok(g.outcome(
                spectrum_json(&g, &sp, allowed.as_ref(), None),
                spectrum_table(&sp, allowed.as_ref()),
                Status::of(ok),
            ))
        }
    }
}

fn spectrum_json(g: &Geometry, sp: &SpectrumReport, expected: Option<&BTreeSet<u64>>, standard: Option<bool>) -> Value {
    json!({
        "variety": g.info(),
        "examined": sp.total,
        "counts": pairs(&sp.counts),
        "support": sp.support(),
        "expected_support": expected,
        "standard_equations": standard,
    })
}

fn spectrum_table(sp: &SpectrumReport, expected: Option<&BTreeSet<u64>>) -> Table {
    let mut t = Table::new(&["size", "count", "expected"]);
    for (s, c) in &sp.counts {
        let e = expected.map_or(String::new(), |e| e.contains(s).to_string());
        t.row([s.to_string(), c.to_string(), e]);
    }
    t
}

/// Brute-force distribution when the code is small enough.
fn brute_weights(c: &LinearCode, budget: &Budget) -> CliResult<Option<WeightDistribution>> {
    let words = (c.field().order() as u64).checked_pow(c.dimension() as u32);
    if words.is_none_or(|w| w > BRUTEFORCE_MAX_WORDS) {
        return Ok(None);
    }
    Ok(Some(weights_bruteforce(c, budget)?))
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Minimal => "minimal",
        Verdict::NotMinimal => "not-minimal",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn minimality_json(r: &MinimalityReport) -> Value {
    json!({
        "method": r.method.label(),
        "verdict": verdict_label(r.verdict),
        "witness": r.witness.map(|w| json!({"covered": w.covered, "covering": w.covering})),
        "non_minimal_words": r.non_minimal_words,
        "non_minimal_weights": pairs(&r.non_minimal_weights),
    })
}

pub fn code(cmd: CodeCmd, opts: &Opts) -> CliResult<Outcome> {
    let g = Geometry::new(opts)?;
    let v = &g.built.variety;
    let c = g.code(opts)?;
    let head = json!({
        "variety": g.info(),
        "p0": c.p0(),
        "n": c.len(),
        "k": c.dimension(),
    });
    let with = |extra: Value| {
        let mut h = head.clone();
        if let (Value::Object(h), Value::Object(e)) = (&mut h, extra) {
            h.extend(e);
        }
        h
    };
    match cmd {
        CodeCmd::Weights => {
            let d = weights_via_hyperplanes(&c, v, &g.budget)?;
            let bf = brute_weights(&c, &g.budget)?;
            let agree = bf.as_ref().map(|b| *b == d);
            let words = (c.field().order() as u64).pow(c.dimension() as u32);
            let ok = agree != Some(false) && d.total() == words;
            let result = with(json!({
                "distribution": pairs(&d.counts),
                "bruteforce": bf.as_ref().map(|b| pairs(&b.counts)),
                "methods_agree": agree,
            }));
            Ok(g.outcome(
                result,
                Table::from_counts(&["weight", "count"], &d.counts),
                Status::of(ok),
            ))
        }
        CodeCmd::Minimality => {
            let d = weights_via_hyperplanes(&c, v, &g.budget)?;
            let ab = ab_bound_check(&d, g.space().field_order());
            let cb = cutting_blocking_check(v, &g.budget)?;
            let bf = minimal_codewords_bruteforce(v, &g.budget)?;
            let consistent =
                cb.verdict == bf.verdict && (ab.verdict != Verdict::Minimal || bf.verdict == Verdict::Minimal);
            let mut t = Table::new(&[
                "method",
                "verdict",
                "witness_covered",
                "witness_covering",
                "non_minimal_words",
            ]);
            for r in [&ab, &cb, &bf] {
                t.row([
                    r.method.label().to_string(),
                    verdict_label(r.verdict).to_string(),
                    r.witness.map_or(String::new(), |w| w.covered.to_string()),
                    r.witness.map_or(String::new(), |w| w.covering.to_string()),
                    r.non_minimal_words.map_or(String::new(), |n| n.to_string()),
                ]);
            }
            let result = with(json!({
                "minimal": bf.verdict == Verdict::Minimal,
                "criteria": [minimality_json(&ab), minimality_json(&cb), minimality_json(&bf)],
                "consistent": consistent,
            }));
            Ok(g.outcome(result, t, Status::of(consistent)))
        }
        CodeCmd::Divisibility => {
            let d = weights_via_hyperplanes(&c, v, &g.budget)?;
            let q = g.q();
            let gcd = d.divisibility();
            let divisible = q > 0 && gcd % q == 0;
            // B codes are q-divisible except for odd q with r = 3
            let expected = (v.kind() == VarietyKind::B).then(|| !(q % 2 == 1 && g.space().dim() == 3));
            let ok = expected.is_none_or(|e| e == divisible);
            let mut t = Table::new(&["weight", "count", "divisible_by_q"]);
            for (w, a) in &d.counts {
                t.row([w.to_string(), a.to_string(), (q > 0 && w % q == 0).to_string()]);
            }
            let result = with(json!({
                "q": q,
                "gcd": gcd,
                "divisible_by_q": divisible,
                "expected_divisible": expected,
            }));
            Ok(g.outcome(result, t, Status::of(ok)))
        }
        CodeCmd::Dk => {
            let d = higher_weight(&c, v, opts.level, &g.budget)?;
            let mut t = Table::new(&["level", "d"]);
            t.row([opts.level.to_string(), d.to_string()]);
            Ok(g.outcome(with(json!({"level": opts.level, "d": d})), t, Status::Pass))
        }
    }
}

fn sets_json(a: &AccessStructure) -> Value {
    json!({
        "provenance": a.provenance,
        "participants": a.participants,
        "count": a.len(),
        "size_profile": a.size_profile().iter().map(|(&k, &v)| [k, v]).collect::<Vec<_>>(),
        "antichain": a.is_antichain(),
        "sets": a.sets.iter().map(AccessSet::members).collect::<Vec<_>>(),
    })
}

fn sets_table(a: &AccessStructure) -> Table {
    let mut t = Table::new(&["set", "size", "members"]);
    for (i, s) in a.sets.iter().enumerate() {
        let m: Vec<String> = s.members().iter().map(u32::to_string).collect();
        t.row([(i + 1).to_string(), s.len().to_string(), m.join(" ")]);
    }
    t
}

fn load_fixture(opts: &Opts) -> CliResult<Fixture> {
    match &opts.fixture {
        Some(path) => fixture::parse(&std::fs::read_to_string(path)?),
        None => fixture::parse(fixture::HERMITIAN_Q2_EXAMPLE),
    }
}

/// Closure, development and label-free checks of a fixture.
pub struct Development {
    pub order: u64,
    pub structure: AccessStructure,
    pub generators_preserve: bool,
}

pub fn develop_fixture(fx: &Fixture, budget: &Budget) -> CliResult<Development> {
    let gens: Vec<_> = fx.generators.iter().map(|(_, p)| p.clone()).collect();
    let g = group_closure(fx.degree, &gens, budget)?;
    let starters: Vec<AccessSet> = fx.starters.iter().map(|(_, s)| s.clone()).collect();
    let mut structure = develop(&starters, &g)?;
    structure.provenance = "fixture development".into();
    let generators_preserve = gens.iter().all(|p| structure.is_automorphism(p));
    Ok(Development {
        order: g.order(),
        structure,
        generators_preserve,
    })
}

fn parse_shares(space: &ProjSpace, text: &str) -> CliResult<Vec<FieldElem>> {
    setup::parse_list(text, "--shares")?
        .into_iter()
        .map(|x| setup::elem(space, x))
        .collect()
}

pub fn sss(cmd: SssCmd, opts: &Opts) -> CliResult<Outcome> {
    match cmd {
        SssCmd::Develop | SssCmd::VerifyExample => return sss_fixture(cmd, opts),
        _ => {}
    }
    let g = Geometry::new(opts)?;
    let v = &g.built.variety;
    match cmd {
        SssCmd::Access | SssCmd::Democracy => {
            let p0 = setup::p0(v, opts)?;
            let (_, a) = access_structure(v, p0, &g.budget)?;
            let q_f = g.space().field_order();
            let expected_sets = q_f.pow(g.space().dim() as u32);
            if cmd == SssCmd::Access {
                let ok = a.is_antichain() && a.len() as u64 == expected_sets;
                let mut result = sets_json(&a);
                result["variety"] = json!(g.info());
                result["p0"] = json!(p0);
                return Ok(g.outcome(result, sets_table(&a), Status::of(ok)));
            }
            let d = democracy_report(&a);
            // each participant of a minimal code's scheme lies in (q_f - 1) q_f^(k-2) sets
            let expected = (q_f - 1) * q_f.pow(g.space().dim() as u32 - 1);
            let ok = d.is_democratic() && d.histogram.keys().all(|&c| c == expected) && d.dictators.is_empty();
            let mut t = Table::new(&["participant", "count"]);
            for (i, c) in d.counts.iter().enumerate() {
                t.row([(i + 1).to_string(), c.to_string()]);
            }
            let result = json!({
                "variety": g.info(),
                "p0": p0,
                "sets": d.sets,
                "histogram": pairs(&d.histogram),
                "expected_count": expected,
                "democratic": d.is_democratic(),
                "dictators": d.dictators,
            });
            Ok(g.outcome(result, t, Status::of(ok)))
        }
        SssCmd::Deal => {
            let scheme = Scheme::new(g.code(opts)?)?;
            let secret = setup::elem(g.space(), opts.secret)?;
            let d = deal(&scheme, secret, opts.seed)?;
            let mut t = Table::new(&["participant", "share"]);
            for (i, s) in d.shares.iter().enumerate() {
                t.row([(i + 1).to_string(), s.0.to_string()]);
            }
            let result = json!({
                "variety": g.info(),
                "p0": scheme.code().p0(),
                "rng": RNG_ALGORITHM,
                "secret": secret.0,
                "shares": d.shares.iter().map(|s| s.0).collect::<Vec<_>>(),
            });
            Ok(g.outcome(result, t, Status::Pass))
        }
        SssCmd::Recover => {
            let scheme = Scheme::new(g.code(opts)?)?;
            let subset = opts
                .subset
                .as_deref()
                .ok_or_else(|| CliError::Usage("recover needs --subset".into()))?;
            let members = setup::parse_list(subset, "--subset")?;
            let shares = parse_shares(
                g.space(),
                opts.shares
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("recover needs --shares".into()))?,
            )?;
            if members.len() != shares.len() {
                return Err(CliError::Usage(format!(
                    "--subset has {} entries but --shares has {}",
                    members.len(),
                    shares.len()
                )));
            }
            let mut order: Vec<(u32, FieldElem)> = members.into_iter().zip(shares).collect();
            order.sort_unstable_by_key(|&(i, _)| i);
            if order.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(CliError::Usage("--subset repeats a participant".into()));
            }
            let set = AccessSet::new(order.iter().map(|&(i, _)| i).collect());
            let t: Vec<FieldElem> = order.iter().map(|&(_, s)| s).collect();
            let secret = recover(&scheme, &set, &t)?;
            let mut table = Table::new(&["key", "value"]);
            table.row(["secret".to_string(), secret.0.to_string()]);
            let result = json!({
                "variety": g.info(),
                "p0": scheme.code().p0(),
                "subset": set.members(),
                "secret": secret.0,
            });
            Ok(g.outcome(result, table, Status::Pass))
        }
        SssCmd::Develop | SssCmd::VerifyExample => unreachable!("handled above"),
    }
}

fn sss_fixture(cmd: SssCmd, opts: &Opts) -> CliResult<Outcome> {
    let budget = setup::budget(opts);
    let fx = load_fixture(opts)?;
    let dev = develop_fixture(&fx, &budget)?;
    let a = &dev.structure;
    let mut result = sets_json(a);
    result["group_order"] = json!(dev.order);
    result["generators"] = json!(fx
        .generators
        .iter()
        .map(|(n, p)| json!({"name": n, "cycles": p.to_string()}))
        .collect::<Vec<_>>());
    result["generators_preserve"] = json!(dev.generators_preserve);
    let status = if cmd == SssCmd::VerifyExample {
        let profile: BTreeMap<usize, usize> = [(31, 32), (35, 32)].into_iter().collect();
        let checks = json!({
            "group_order_576": dev.order == 576,
            "sets_64": a.len() == 64,
            "size_profile": a.size_profile() == profile,
            "antichain": a.is_antichain(),
            "generators_preserve": dev.generators_preserve,
        });
        let ok = checks
            .as_object()
            .is_some_and(|m| m.values().all(|v| v == &Value::Bool(true)));
        result["checks"] = checks;
        Status::of(ok)
    } else {
        Status::of(a.is_antichain() && dev.generators_preserve)
    };
    Ok(Outcome {
        field: None,
        result,
        table: sets_table(a),
        status,
    })
}
