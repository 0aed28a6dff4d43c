//! Projective codes `C(V)`: the generator matrix has the points of `V` as
//! columns, so the codeword of a functional `h` has weight `n - |V ∩ h^⊥|`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::geom::{gaussian_binomial, span_rank, PointIndex, ProjSpace, POINT_ORDER_VERSION};
use crate::gf::{FieldCtx, FieldElem};
use crate::linalg::{self, null_space, Echelon};
use crate::variety::{hyperplane_section_sizes, hyperplane_sections, line_spectrum, Variety};

/// Where a code came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub variety: String,
    pub point_order: &'static str,
    /// Point index placed in column 0.
    pub p0: PointIndex,
}

/// `[n, k]` code over `GF(q_f)` generated by a projective system.
#[derive(Clone, Debug)]
pub struct LinearCode {
    space: Arc<ProjSpace>,
    columns: Vec<PointIndex>,
    /// `k` rows of length `n`.
    generator: Vec<Vec<FieldElem>>,
    provenance: Provenance,
}

impl LinearCode {
    pub fn space(&self) -> &Arc<ProjSpace> {
        &self.space
    }

    pub fn field(&self) -> &FieldCtx {
        self.space.field()
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Vec<FieldElem>] {
        &self.generator
    }

    /// Source point of each column; `columns()[0]` is `P0`.
    pub fn columns(&self) -> &[PointIndex] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        self.generator.iter().map(|row| row[j]).collect()
    }

    pub fn p0(&self) -> PointIndex {
        self.columns[0]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `u G`.
    pub fn encode(&self, u: &[FieldElem]) -> Vec<FieldElem> {
        let f = self.field();
        let mut out = vec![FieldElem::ZERO; self.len()];
        for (&c, row) in u.iter().zip(&self.generator) {
            if c.is_zero() {
                continue;
            }
            for (x, &g) in out.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(c, g));
            }
        }
        out
    }
}

/// Builds `C(V)` with `p0` in column 0 and the other points in canonical
/// order.
pub fn code_from_variety(v: &Variety, p0: PointIndex) -> Result<LinearCode> {
    if !v.contains(p0) {
        return Err(Error::NotOnVariety(p0));
    }
    let space = v.space().clone();
    let w = space.width();
    let mut columns = Vec::with_capacity(v.len());
    columns.push(p0);
    columns.extend(v.points().iter().copied().filter(|&p| p != p0));
    let coords: Vec<Vec<FieldElem>> = columns.iter().map(|&p| space.coords(p)).collect();
    let rank = span_rank(space.field(), w, coords.iter().map(|c| c.as_slice())).rank();
    if rank < w {
        return Err(Error::RankDeficient { rank, expected: w });
    }
    let generator = (0..w).map(|i| coords.iter().map(|c| c[i]).collect()).collect();
    Ok(LinearCode {
        space,
        columns,
        generator,
        provenance: Provenance {
            variety: String::from(v.kind().label()),
            point_order: POINT_ORDER_VERSION,
            p0,
        },
    })
}

/// Weight → number of codewords, `A_0 = 1` included.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightDistribution {
    pub counts: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, w: u64) -> u64 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    pub fn nonzero_weights(&self) -> impl DoubleEndedIterator<Item = u64> + '_ {
        self.counts.keys().copied().filter(|&w| w != 0)
    }

    pub fn min_nonzero(&self) -> Option<u64> {
        self.nonzero_weights().next()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.nonzero_weights().next_back()
    }

    /// Largest integer dividing every nonzero weight (0 for the zero code).
    pub fn divisibility(&self) -> u64 {
        self.nonzero_weights().fold(0, gcd)
    }

    /// `w_min / w_max > (q_f - 1) / q_f`, a sufficient condition for every
    /// nonzero codeword to be minimal.
    pub fn ab_bound(&self, q_f: u64) -> bool {
        match (self.min_nonzero(), self.max_weight()) {
            (Some(lo), Some(hi)) => lo as u128 * q_f as u128 > hi as u128 * (q_f as u128 - 1),
            _ => false,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_code_matches(c: &LinearCode, v: &Variety) -> Result<()> {
    let w = c.space().width();
    if c.dimension() < w {
        return Err(Error::RankDeficient {
            rank: c.dimension(),
            expected: w,
        });
    }
    let mut cols = c.columns().to_vec();
    cols.sort_unstable();
    if cols != v.points() {
        return Err(Error::InvalidParams(String::from(
            "the code's columns are not the points of the variety",
        )));
    }
    Ok(())
}

/// `A_{n-s} = (q_f - 1) · #{Σ : |Σ ∩ V| = s}`.
pub fn weights_via_hyperplanes(c: &LinearCode, v: &Variety, budget: &Budget) -> Result<WeightDistribution> {
    check_code_matches(c, v)?;
    let n = v.len() as u64;
    let qm1 = c.space().field_order() - 1;
    let mut counts = BTreeMap::new();
    counts.insert(0, 1);
    for s in hyperplane_section_sizes(v, budget)? {
        *counts.entry(n - s as u64).or_insert(0) += qm1;
    }
    Ok(WeightDistribution { counts })
}

/// Hard cap on the number of codewords [`weights_bruteforce`] enumerates.
pub const BRUTEFORCE_MAX_WORDS: u64 = 1 << 24;

/// Enumerates every codeword `uG`.
pub fn weights_bruteforce(c: &LinearCode, budget: &Budget) -> Result<WeightDistribution> {
    let f = c.field();
    let q = c.space().field_order();
    let k = c.dimension();
    let words = q.checked_pow(k as u32).unwrap_or(u64::MAX);
    if words > BRUTEFORCE_MAX_WORDS {
        return Err(Error::Budget {
            what: "codewords",
            needed: words,
            cap: BRUTEFORCE_MAX_WORDS,
        });
    }
    budget.check("codeword symbols", words.saturating_mul(c.len() as u64))?;
    let mut counts = BTreeMap::new();
    let mut u = vec![0u32; k];
    // partial[i] = sum_{j < i} u_j G_j, so only a suffix is recomputed per step
    let mut partial = vec![vec![FieldElem::ZERO; c.len()]; k + 1];
    let mut from = 0;
    for _ in 0..words {
        for i in from..k {
            let ui = FieldElem(u[i]);
            let (a, b) = partial.split_at_mut(i + 1);
            for ((x, &p), &g) in b[0].iter_mut().zip(&a[i]).zip(&c.generator[i]) {
                *x = f.add(p, f.mul(ui, g));
            }
        }
        let wt = partial[k].iter().filter(|x| !x.is_zero()).count() as u64;
        *counts.entry(wt).or_insert(0) += 1;
        let mut i = k;
        while i > 0 {
            i -= 1;
            u[i] += 1;
            if (u[i] as u64) < q {
                break;
            }
            u[i] = 0;
        }
        from = i;
    }
    Ok(WeightDistribution { counts })
}

/// `d_level = n - max |S ∩ V|` over subspaces `S` of codimension `level`.
///
/// Level 1 uses the hyperplane spectrum and level `r - 1` the line spectrum;
/// other levels enumerate subspaces and are budget-guarded.
pub fn higher_weight(c: &LinearCode, v: &Variety, level: usize, budget: &Budget) -> Result<u64> {
    check_code_matches(c, v)?;
    let space = &**v.space();
    let r = space.dim();
    if level == 0 || level > r {
        return Err(Error::BadLevel { level, max: r });
    }
    let n = v.len() as u64;
    let best = if level == 1 {
        hyperplane_section_sizes(v, budget)?.into_iter().max().unwrap_or(0) as u64
    } else if level + 1 == r {
        line_spectrum(v, budget)?.max_size().unwrap_or(0)
    } else {
        let dim = r + 1 - level;
        let count = gaussian_binomial(r as u32 + 1, dim as u32, space.field_order());
        let per = gaussian_binomial(dim as u32, 1, space.field_order());
        budget.check("subspace incidences", count.saturating_mul(per))?;
        let mut best = 0;
        for basis in space.subspaces(dim) {
            let mut k = 0;
            space.for_each_point_in(&basis, |p| k += v.contains(p) as u64);
            best = best.max(k);
        }
        best
    };
    Ok(n - best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Minimal,
    NotMinimal,
    /// The criterion does not decide (a failed sufficient condition).
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    AbBound,
    CuttingBlocking,
    BruteForce,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::AbBound => "ab-bound",
            Method::CuttingBlocking => "cutting-blocking",
            Method::BruteForce => "brute-force",
        }
    }
}

/// The codeword vanishing on `covered` is not minimal: its support contains
/// the support of the codeword vanishing on `covering`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub covered: PointIndex,
    pub covering: PointIndex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub verdict: Verdict,
    pub method: Method,
    pub witness: Option<Witness>,
    /// Exact count of non-minimal nonzero codewords (brute force only).
    pub non_minimal_words: Option<u64>,
    /// Weight → number of non-minimal codewords (brute force only).
    pub non_minimal_weights: BTreeMap<u64, u64>,
}

impl MinimalityReport {
    fn new(verdict: Verdict, method: Method) -> Self {
        MinimalityReport {
            verdict,
            method,
            witness: None,
            non_minimal_words: None,
            non_minimal_weights: BTreeMap::new(),
        }
    }
}

/// AB criterion on a computed distribution: `Minimal` or `Inconclusive`.
pub fn ab_bound_check(dist: &WeightDistribution, q_f: u64) -> MinimalityReport {
    let verdict = if dist.ab_bound(q_f) {
        Verdict::Minimal
    } else {
        Verdict::Inconclusive
    };
    MinimalityReport::new(verdict, Method::AbBound)
}

/// Whether `V ∩ Σ ⊆ V ∩ Σ'` (hyperplane indices).
pub fn section_contained(v: &Variety, sigma: PointIndex, sigma2: PointIndex) -> bool {
    let space = &**v.space();
    let h2 = space.coords(sigma2);
    let f = space.field();
    let mut ok = true;
    space.for_each_orthogonal(&space.coords(sigma), |p| {
        if ok && v.contains(p) && !linalg::dot(f, &space.coords(p), &h2).is_zero() {
            ok = false;
        }
    });
    ok
}

/// `C(V)` is minimal iff every hyperplane section of `V` spans the
/// hyperplane. The first failing hyperplane (canonical order) is returned
/// together with a second hyperplane containing its section.
pub fn cutting_blocking_check(v: &Variety, budget: &Budget) -> Result<MinimalityReport> {
    let space = &**v.space();
    let f = space.field();
    let w = space.width();
    let nh = space.num_hyperplanes();
    budget.check("hyperplane incidences", nh * space.points_per_hyperplane())?;
    let span_of = |h: PointIndex| {
        let mut e = Echelon::new(w);
        let mut c = vec![FieldElem::ZERO; w];
        space.for_each_orthogonal(&space.coords(h), |p| {
            if e.rank() + 1 < w && v.contains(p) {
                space.decode_into(p, &mut c);
                e.insert(f, &c);
            }
        });
        e
    };
    #[cfg(feature = "parallel")]
    let failing = {
        use rayon::prelude::*;
        (0..nh as PointIndex)
            .into_par_iter()
            .find_first(|&h| span_of(h).rank() + 1 < w)
    };
    #[cfg(not(feature = "parallel"))]
    let failing = (0..nh as PointIndex).find(|&h| span_of(h).rank() + 1 < w);

    let Some(h) = failing else {
        return Ok(MinimalityReport::new(Verdict::Minimal, Method::CuttingBlocking));
    };
    // a second hyperplane through the deficient span
    let span = span_of(h);
    let hc = space.coords(h);
    let ann = null_space(f, w, span.rows());
    let other = ann
        .rows()
        .iter()
        .find(|row| span_rank(f, w, [row.as_slice(), hc.as_slice()]).rank() == 2)
        .expect("annihilator of a deficient span has rank >= 2");
    let covering = space.index_of(other)?;
    debug_assert!(section_contained(v, h, covering));
    let mut rep = MinimalityReport::new(Verdict::NotMinimal, Method::CuttingBlocking);
    rep.witness = Some(Witness { covered: h, covering });
    Ok(rep)
}

/// Exact non-minimal codewords via pairwise containment of hyperplane
/// sections: `c_Σ` is covered iff `V ∩ Σ ⊆ V ∩ Σ'` for some `Σ' ≠ Σ`.
pub fn minimal_codewords_bruteforce(v: &Variety, budget: &Budget) -> Result<MinimalityReport> {
    let space = &**v.space();
    let nh = space.num_hyperplanes();
    let words = (v.len() as u64).div_ceil(64);
    budget.check("section containment words", nh.saturating_mul(nh).saturating_mul(words))?;
    let sections = hyperplane_sections(v, budget)?;
    let sizes: Vec<usize> = sections.iter().map(BitSet::count).collect();
    // larger sections first; only those can contain a given one
    let mut order: Vec<usize> = (0..sections.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));

    let cover_of = |s: usize| -> Option<usize> {
        order
            .iter()
            .take_while(|&&t| sizes[t] >= sizes[s])
            .find(|&&t| t != s && sections[s].is_subset(&sections[t]))
            .copied()
    };
    #[cfg(feature = "parallel")]
    let covers: Vec<Option<usize>> = {
        use rayon::prelude::*;
        (0..sections.len()).into_par_iter().map(cover_of).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let covers: Vec<Option<usize>> = (0..sections.len()).map(cover_of).collect();

    let qm1 = space.field_order() - 1;
    let n = v.len() as u64;
    let mut rep = MinimalityReport::new(Verdict::Minimal, Method::BruteForce);
    let mut total = 0;
    for (s, c) in covers.iter().enumerate() {
        if let Some(t) = c {
            total += qm1;
            *rep.non_minimal_weights.entry(n - sizes[s] as u64).or_insert(0) += qm1;
            if rep.witness.is_none() {
                rep.witness = Some(Witness {
                    covered: s as PointIndex,
                    covering: *t as PointIndex,
                });
            }
        }
    }
    if total > 0 {
        rep.verdict = Verdict::NotMinimal;
    }
    rep.non_minimal_words = Some(total);
    Ok(rep)
}
