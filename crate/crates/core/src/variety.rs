//! The degree-`2q` hypersurface `B` of `PG(r, q^2)`, the Hermitian variety,
//! the degenerate Hermitian cone `F` at infinity and the quasi-Hermitian
//! variety `(B ∩ AG(r, q^2)) ∪ F`, together with their hyperplane and line
//! intersection spectra.
//!
//! `B` has affine equation
//!
//! ```text
//! x_r^q - x_r + a^q (x_1^2q + ... + x_{r-1}^2q) - a (x_1^2 + ... + x_{r-1}^2)
//!     = (b^q - b)(x_1^(q+1) + ... + x_{r-1}^(q+1))
//! ```
//!
//! and meets the hyperplane `X_0 = 0` in the quadric `X_1^2 + ... +
//! X_{r-1}^2 = 0` for odd `q`, or the hyperplane `X_1 + ... + X_{r-1} = 0` of
//! `X_0 = 0` for even `q`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::geom::{PointIndex, ProjSpace};
use crate::gf::{FieldCtx, FieldElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarietyKind {
    /// The hypersurface `B`.
    B,
    /// `B ∩ {X_0 = 0}`.
    BInfinity,
    Hermitian,
    QuasiHermitian,
    /// The cone `X_0 = 0, X_1^(q+1) + ... + X_{r-1}^(q+1) = 0`.
    ConeF,
    Custom,
}

impl VarietyKind {
    pub fn label(self) -> &'static str {
        match self {
            VarietyKind::B => "B",
            VarietyKind::BInfinity => "B_inf",
            VarietyKind::Hermitian => "hermitian",
            VarietyKind::QuasiHermitian => "quasi-hermitian",
            VarietyKind::ConeF => "cone-F",
            VarietyKind::Custom => "custom",
        }
    }
}

impl fmt::Display for VarietyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A point set of `PG(r, q_f)`, sorted by canonical index.
#[derive(Clone, Debug)]
pub struct Variety {
    kind: VarietyKind,
    space: Arc<ProjSpace>,
    points: Vec<PointIndex>,
    members: BitSet,
}

impl Variety {
    pub fn from_points(kind: VarietyKind, space: Arc<ProjSpace>, mut points: Vec<PointIndex>) -> Self {
        points.sort_unstable();
        points.dedup();
        let members = BitSet::from_indices(space.num_points() as usize, points.iter().copied());
        Variety {
            kind,
            space,
            points,
            members,
        }
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    pub fn space(&self) -> &Arc<ProjSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointIndex] {
        &self.points
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    #[inline]
    pub fn contains(&self, idx: PointIndex) -> bool {
        self.members.contains(idx as usize)
    }

    /// Position of `idx` in [`Variety::points`].
    pub fn local_index(&self, idx: PointIndex) -> Option<usize> {
        self.points.binary_search(&idx).ok()
    }

    pub fn union(&self, other: &Variety, kind: VarietyKind) -> Variety {
        let mut pts = self.points.clone();
        pts.extend_from_slice(&other.points);
        Variety::from_points(kind, self.space.clone(), pts)
    }
}

/// Parameters of `B`: `alpha ∈ GF(q^2)*`, `beta ∈ GF(q^2) \ GF(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BParams {
    pub r: usize,
    pub alpha: FieldElem,
    pub beta: FieldElem,
}

/// Which admissibility condition applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// `4 a^(q+1) + (b^q - b)^2 != 0`
    OddQOddR,
    /// `4 a^(q+1) + (b^q - b)^2` is a non-square of `GF(q)`
    OddQEvenR,
    /// no extra condition
    EvenQOddR,
    /// `Tr(a^(q+1) / (b^q + b)^2) = 0`
    EvenQEvenR,
}

impl Clause {
    pub fn describe(self) -> &'static str {
        match self {
            Clause::OddQOddR => "q odd, r odd: 4a^(q+1) + (b^q - b)^2 != 0",
            Clause::OddQEvenR => "q odd, r even: 4a^(q+1) + (b^q - b)^2 is a non-square in GF(q)",
            Clause::EvenQOddR => "q even, r odd: no condition",
            Clause::EvenQEvenR => "q even, r even: Tr(a^(q+1) / (b^q + b)^2) = 0",
        }
    }
}

/// Outcome of [`validate_params`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub q: u32,
    pub r: usize,
    pub clause: Clause,
    /// The evaluated quantity of the clause (ambient encoding), if any.
    pub invariant: Option<FieldElem>,
    /// Name of the trace map applied, for the even/even clause.
    pub trace: Option<&'static str>,
    pub passed: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]",
            self.clause.describe(),
            if self.passed { "holds" } else { "violated" }
        )?;
        if let Some(v) = self.invariant {
            write!(f, ", value = {}", v)?;
        }
        if let Some(t) = self.trace {
            write!(f, ", trace = {}", t)?;
        }
        Ok(())
    }
}

/// Trace used by the even/even clause.
pub const EVEN_CLAUSE_TRACE: &str = "absolute trace GF(q) -> GF(2)";

fn field_q(space: &ProjSpace) -> Result<u32> {
    space.field().sub_order().map_err(|_| {
        Error::InvalidParams(format!(
            "the base field must be GF(q^2); GF({}^{}) has odd degree",
            space.field().characteristic(),
            space.field().degree()
        ))
    })
}

/// Checks the admissibility conditions of `(alpha, beta)` for `B`.
///
/// Hard errors: `q = 2`, `r < 3`, `alpha = 0`, `beta ∈ GF(q)`, or a
/// dimension that differs from the ambient space. Otherwise the report says
/// whether the parity clause holds and what it evaluated to.
pub fn validate_params(space: &ProjSpace, params: &BParams) -> Result<ValidationReport> {
    let f = space.field();
    let q = field_q(space)?;
    let r = params.r;
    if r != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: r,
        });
    }
    if r < 3 {
        return Err(Error::InvalidParams(format!("r = {r}: r >= 3 required")));
    }
    let even = f.characteristic() == 2;
    if even && q == 2 {
        return Err(Error::InvalidParams("q = 2: even q > 2 required".into()));
    }
    f.elem(params.alpha.0)?;
    f.elem(params.beta.0)?;
    if params.alpha.is_zero() {
        return Err(Error::InvalidParams("alpha must be nonzero".into()));
    }
    let sub = f.subfield()?;
    if sub.contains(params.beta) {
        return Err(Error::InvalidParams(format!("beta = {} lies in GF({q})", params.beta)));
    }
    let (_, norm_a) = f.trace_norm(params.alpha)?;
    let bq = f.frobenius_q(params.beta)?;
    let report = if !even {
        let d = f.sub(bq, params.beta);
        let inv = f.add(f.mul(f.from_int(4), norm_a), f.mul(d, d));
        debug_assert!(sub.contains(inv));
        if r % 2 == 1 {
            ValidationReport {
                q,
                r,
                clause: Clause::OddQOddR,
                invariant: Some(inv),
                trace: None,
                passed: !inv.is_zero(),
            }
        } else {
            let s = sub.restrict(inv).expect("invariant lies in GF(q)");
            let nonsquare = !sub.ctx().is_square(s)?;
            ValidationReport {
                q,
                r,
                clause: Clause::OddQEvenR,
                invariant: Some(inv),
                trace: None,
                passed: nonsquare,
            }
        }
    } else if r % 2 == 1 {
        ValidationReport {
            q,
            r,
            clause: Clause::EvenQOddR,
            invariant: None,
            trace: None,
            passed: true,
        }
    } else {
        let s = f.add(bq, params.beta);
        let val = f.div(norm_a, f.mul(s, s));
        let in_sub = sub.restrict(val).expect("ratio lies in GF(q)");
        let tr = sub.ctx().trace_to_prime(in_sub);
        ValidationReport {
            q,
            r,
            clause: Clause::EvenQEvenR,
            invariant: Some(val),
            trace: Some(EVEN_CLAUSE_TRACE),
            passed: tr.is_zero(),
        }
    };
    Ok(report)
}

/// First admissible `(alpha, beta)` scanning `alpha` then `beta` in encoding
/// order.
pub fn find_params(space: &ProjSpace) -> Result<BParams> {
    let f = space.field();
    let q = field_q(space)?;
    let sub = f.subfield()?;
    for a in f.elements().skip(1) {
        for b in f.elements().filter(|&b| !sub.contains(b)) {
            let p = BParams {
                r: space.dim(),
                alpha: a,
                beta: b,
            };
            if validate_params(space, &p)?.passed {
                return Ok(p);
            }
        }
    }
    Err(Error::NoValidParams { q, r: space.dim() })
}

fn require_valid(space: &ProjSpace, params: &BParams) -> Result<u32> {
    let rep = validate_params(space, params)?;
    if !rep.passed {
        return Err(Error::InvalidParams(format!("{rep}")));
    }
    Ok(rep.q)
}

/// Constants of the affine equation, precomputed once.
struct Equation<'a> {
    f: &'a FieldCtx,
    q: u64,
    alpha: FieldElem,
    alpha_q: FieldElem,
    delta: FieldElem,
}

impl<'a> Equation<'a> {
    fn new(f: &'a FieldCtx, q: u32, params: &BParams) -> Self {
        let q = q as u64;
        Equation {
            f,
            q,
            alpha: params.alpha,
            alpha_q: f.pow(params.alpha, q),
            delta: f.sub(f.pow(params.beta, q), params.beta),
        }
    }

    /// Evaluates `lhs - rhs` at affine coordinates `x_1 .. x_r`.
    fn residual(&self, x: &[FieldElem]) -> FieldElem {
        let f = self.f;
        let (head, last) = x.split_at(x.len() - 1);
        let xr = last[0];
        let mut s2q = FieldElem::ZERO;
        let mut s2 = FieldElem::ZERO;
        let mut sq1 = FieldElem::ZERO;
        for &xi in head {
            s2q = f.add(s2q, f.pow(xi, 2 * self.q));
            s2 = f.add(s2, f.mul(xi, xi));
            sq1 = f.add(sq1, f.pow(xi, self.q + 1));
        }
        let lhs = f.add(
            f.sub(f.pow(xr, self.q), xr),
            f.sub(f.mul(self.alpha_q, s2q), f.mul(self.alpha, s2)),
        );
        f.sub(lhs, f.mul(self.delta, sq1))
    }
}

/// Pointwise membership in `B` for normalised coordinates.
pub fn b_contains(space: &ProjSpace, params: &BParams, coords: &[FieldElem]) -> Result<bool> {
    let q = require_valid(space, params)?;
    let f = space.field();
    if coords.len() != space.width() {
        return Err(Error::DimensionMismatch {
            expected: space.width(),
            got: coords.len(),
        });
    }
    if coords[0].is_zero() {
        return Ok(infinity_predicate(f, f.characteristic() == 2, &coords[1..]));
    }
    let inv = f.inv(coords[0]);
    let x: Vec<FieldElem> = coords[1..].iter().map(|&c| f.mul(c, inv)).collect();
    Ok(Equation::new(f, q, params).residual(&x).is_zero())
}

/// `B_inf` inside `X_0 = 0`, given `(X_1, ..., X_r)`.
fn infinity_predicate(f: &FieldCtx, even: bool, tail: &[FieldElem]) -> bool {
    let head = &tail[..tail.len() - 1];
    let s = if even {
        head.iter().fold(FieldElem::ZERO, |a, &x| f.add(a, x))
    } else {
        head.iter().fold(FieldElem::ZERO, |a, &x| f.add(a, f.mul(x, x)))
    };
    s.is_zero()
}

fn points_at_infinity(space: &ProjSpace, mut pred: impl FnMut(&[FieldElem]) -> bool) -> Vec<PointIndex> {
    // points with X_0 = 0 are exactly the indices below the first affine one
    let n_inf = (space.num_points() - space.field_order().pow(space.dim() as u32)) as PointIndex;
    let mut v = vec![FieldElem::ZERO; space.width()];
    (0..n_inf)
        .filter(|&i| {
            space.decode_into(i, &mut v);
            pred(&v[1..])
        })
        .collect()
}

/// Affine points `(1, x_1, ..., x_r)` of `B`, in canonical order.
pub fn b_affine_points(space: &ProjSpace, params: &BParams, budget: &Budget) -> Result<Vec<PointIndex>> {
    let q = require_valid(space, params)?;
    let f = space.field();
    let qf = space.field_order();
    let r = space.dim();
    budget.check("affine equation evaluations", qf.pow(r as u32))?;
    let eq = Equation::new(f, q, params);
    let q = q as u64;
    // x^q - x for each x_r, and the per-coordinate terms of x_1 .. x_{r-1}
    let artin: Vec<FieldElem> = f.elements().map(|x| f.sub(f.pow(x, q), x)).collect();
    let sq: Vec<FieldElem> = f.elements().map(|x| f.mul(x, x)).collect();
    let nq: Vec<FieldElem> = f.elements().map(|x| f.pow(x, q + 1)).collect();
    let first_affine = space.num_points() - qf.pow(r as u32);

    let mut out = Vec::new();
    let mut digits = vec![0u32; r - 1];
    let outer = qf.pow(r as u32 - 1);
    for tuple in 0..outer {
        let mut s2 = FieldElem::ZERO;
        let mut sn = FieldElem::ZERO;
        for &d in &digits {
            s2 = f.add(s2, sq[d as usize]);
            sn = f.add(sn, nq[d as usize]);
        }
        // x_r^q - x_r must equal delta * sn - alpha^q * s2^q + alpha * s2
        let target = f.add(
            f.sub(f.mul(eq.delta, sn), f.mul(eq.alpha_q, f.pow(s2, q))),
            f.mul(eq.alpha, s2),
        );
        let base = first_affine + tuple * qf;
        for (xr, &a) in artin.iter().enumerate() {
            if a == target {
                out.push((base + xr as u64) as PointIndex);
            }
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if (*d as u64) < qf {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// `B_inf`: the quadric (odd `q`) or hyperplane (even `q`) of `X_0 = 0`.
pub fn build_b_infinity(space: &Arc<ProjSpace>, params: &BParams, budget: &Budget) -> Result<Variety> {
    require_valid(space, params)?;
    budget.check("points at infinity", space.num_points())?;
    let f = space.field();
    let even = f.characteristic() == 2;
    let pts = points_at_infinity(space, |t| infinity_predicate(f, even, t));
    Ok(Variety::from_points(VarietyKind::BInfinity, space.clone(), pts))
}

pub fn build_b(space: &Arc<ProjSpace>, params: &BParams, budget: &Budget) -> Result<Variety> {
    let mut pts = b_affine_points(space, params, budget)?;
    pts.extend_from_slice(build_b_infinity(space, params, budget)?.points());
    Ok(Variety::from_points(VarietyKind::B, space.clone(), pts))
}

/// `X_0^(q+1) + ... + X_r^(q+1) = 0`.
pub fn build_hermitian(space: &Arc<ProjSpace>, budget: &Budget) -> Result<Variety> {
    let f = space.field();
    let q = field_q(space)? as u64;
    budget.check("hermitian membership tests", space.num_points())?;
    let mut v = vec![FieldElem::ZERO; space.width()];
    let pts = (0..space.num_points() as PointIndex)
        .filter(|&i| {
            space.decode_into(i, &mut v);
            v.iter()
                .fold(FieldElem::ZERO, |a, &x| f.add(a, f.pow(x, q + 1)))
                .is_zero()
        })
        .collect();
    Ok(Variety::from_points(VarietyKind::Hermitian, space.clone(), pts))
}

/// The degenerate Hermitian cone `F` in `X_0 = 0`.
pub fn build_cone_f(space: &Arc<ProjSpace>, budget: &Budget) -> Result<Variety> {
    let f = space.field();
    let q = field_q(space)? as u64;
    if space.dim() < 2 {
        return Err(Error::InvalidParams("the cone needs r >= 2".into()));
    }
    budget.check("points at infinity", space.num_points())?;
    let pts = points_at_infinity(space, |t| {
        t[..t.len() - 1]
            .iter()
            .fold(FieldElem::ZERO, |a, &x| f.add(a, f.pow(x, q + 1)))
            .is_zero()
    });
    Ok(Variety::from_points(VarietyKind::ConeF, space.clone(), pts))
}

/// `(B ∩ AG(r, q^2)) ∪ F`.
pub fn build_quasi_hermitian(space: &Arc<ProjSpace>, params: &BParams, budget: &Budget) -> Result<Variety> {
    let mut pts = b_affine_points(space, params, budget)?;
    pts.extend_from_slice(build_cone_f(space, budget)?.points());
    Ok(Variety::from_points(VarietyKind::QuasiHermitian, space.clone(), pts))
}

/// Size → number of subspaces meeting the variety in that many points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumReport {
    pub counts: BTreeMap<u64, u64>,
    /// Number of hyperplanes (or lines) examined.
    pub total: u64,
    /// Size of the variety.
    pub n: u64,
}

impl SpectrumReport {
    pub fn from_sizes<I: IntoIterator<Item = u64>>(sizes: I, n: u64) -> Self {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for s in sizes {
            *counts.entry(s).or_insert(0) += 1;
            total += 1;
        }
        SpectrumReport { counts, total, n }
    }

    pub fn support(&self) -> BTreeSet<u64> {
        self.counts.keys().copied().collect()
    }

    pub fn max_size(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    /// Checks the counting identities every point set of `PG(r, q_f)`
    /// satisfies on its hyperplane spectrum, with `θ_d = |PG(d, q_f)|`:
    /// `Σ t_i = θ_r`, `Σ i t_i = n θ_(r-1)`, `Σ i(i-1) t_i = n(n-1) θ_(r-2)`.
    pub fn satisfies_standard_equations(&self, q_f: u64, r: usize) -> bool {
        let theta = |d: usize| -> u128 { (0..=d as u32).map(|e| (q_f as u128).pow(e)).sum() };
        let n = self.n as u128;
        let mut sums = [0u128; 3];
        for (&i, &t) in &self.counts {
            let (i, t) = (i as u128, t as u128);
            sums[0] += t;
            sums[1] += i * t;
            sums[2] += i * i.saturating_sub(1) * t;
        }
        r >= 2
            && sums[0] == theta(r)
            && sums[1] == n * theta(r - 1)
            && sums[2] == n * n.saturating_sub(1) * theta(r - 2)
    }
}

/// `|Σ ∩ V|` for every hyperplane `Σ`, indexed by hyperplane index.
///
/// Runs over the points of `V`, bumping every hyperplane through each one.
pub fn hyperplane_section_sizes(v: &Variety, budget: &Budget) -> Result<Vec<u32>> {
    let space = &**v.space();
    let nh = space.num_hyperplanes() as usize;
    budget.check("hyperplane incidences", v.len() as u64 * space.points_per_hyperplane())?;
    let accumulate = |acc: &mut Vec<u32>, pts: &[PointIndex]| {
        let mut c = vec![FieldElem::ZERO; space.width()];
        for &p in pts {
            space.decode_into(p, &mut c);
            space.for_each_orthogonal(&c, |h| acc[h as usize] += 1);
        }
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok(v.points()
            .par_chunks(512)
            .fold(
                || vec![0u32; nh],
                |mut acc, chunk| {
                    accumulate(&mut acc, chunk);
                    acc
                },
            )
            .reduce_with(|mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            })
            .unwrap_or_else(|| vec![0u32; nh]))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut acc = vec![0u32; nh];
        accumulate(&mut acc, v.points());
        Ok(acc)
    }
}

/// Sections `Σ ∩ V` of every hyperplane as bitsets over positions in
/// [`Variety::points`].
pub fn hyperplane_sections(v: &Variety, budget: &Budget) -> Result<Vec<BitSet>> {
    let space = &**v.space();
    let nh = space.num_hyperplanes();
    budget.check("hyperplane incidences", nh * space.points_per_hyperplane())?;
    budget.check("section bitset words", nh * (v.len() as u64).div_ceil(64))?;
    let section = |h: PointIndex| {
        let mut s = BitSet::new(v.len());
        space.for_each_orthogonal(&space.coords(h), |p| {
            if v.contains(p) {
                s.insert(v.local_index(p).expect("member"));
            }
        });
        s
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok((0..nh as PointIndex).into_par_iter().map(section).collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok((0..nh as PointIndex).map(section).collect())
    }
}

pub fn hyperplane_spectrum(v: &Variety, budget: &Budget) -> Result<SpectrumReport> {
    let sizes = hyperplane_section_sizes(v, budget)?;
    Ok(SpectrumReport::from_sizes(
        sizes.into_iter().map(u64::from),
        v.len() as u64,
    ))
}

/// `|ℓ ∩ V|` over all lines `ℓ`.
pub fn line_spectrum(v: &Variety, budget: &Budget) -> Result<SpectrumReport> {
    let space = &**v.space();
    budget.check("line incidences", space.num_lines() * (space.field_order() + 1))?;
    let sizes = space.subspaces(2).map(|b| {
        let mut k = 0u64;
        space.for_each_point_in(&b, |p| {
            if v.contains(p) {
                k += 1;
            }
        });
        k
    });
    Ok(SpectrumReport::from_sizes(sizes, v.len() as u64))
}

/// Families with closed-form spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    B,
    /// Hermitian and quasi-Hermitian varieties share size and spectrum.
    Hermitian,
}

/// Closed-form size and hyperplane intersection numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub n: u64,
    /// `n_1, n_2, ...` in the order the closed forms are usually listed.
    pub sizes: Vec<u64>,
}

impl Prediction {
    pub fn support(&self) -> BTreeSet<u64> {
        self.sizes.iter().copied().collect()
    }
}

fn pw(q: i128, e: i64) -> i128 {
    assert!(e >= 0, "negative exponent");
    q.pow(e as u32)
}

/// `|H(r, q^2)| = (q^(r+1) + (-1)^r)(q^r - (-1)^r) / (q^2 - 1)`.
pub fn hermitian_size(q: u64, r: i64) -> u64 {
    let q = q as i128;
    let s: i128 = if r % 2 == 0 { 1 } else { -1 };
    ((pw(q, r + 1) + s) * (pw(q, r) - s) / (q * q - 1)) as u64
}

/// Predicted size and hyperplane intersection numbers.
pub fn predicted_spectrum(q: u64, r: usize, family: Family) -> Result<Prediction> {
    if crate::gf::prime_power(q as u32).is_none() {
        return Err(Error::InvalidParams(format!("q = {q} is not a prime power")));
    }
    let ri = r as i64;
    let qi = q as i128;
    let q2m1 = qi * qi - 1;
    match family {
        Family::Hermitian => {
            if r < 2 {
                return Err(Error::InvalidParams("hermitian spectra need r >= 2".into()));
            }
            let n = hermitian_size(q, ri);
            let a = hermitian_size(q, ri - 1) as i128;
            let sign: i128 = if (r - 1) % 2 == 0 { 1 } else { -1 };
            let b = a + sign * pw(qi, ri - 1);
            let mut sizes = vec![a as u64, b as u64];
            sizes.sort_unstable();
            Ok(Prediction { n, sizes })
        }
        Family::B => {
            if r < 3 {
                return Err(Error::InvalidParams(format!("r = {r}: the closed forms need r >= 3")));
            }
            let t1 = (pw(qi, 2 * (ri - 2)) - 1) / q2m1; // (q^{2(r-2)} - 1)/(q^2 - 1)
            let t2 = (pw(qi, 2 * (ri - 2)) - qi * qi) / q2m1; // (q^{2(r-2)} - q^2)/(q^2 - 1)
            let a = pw(qi, 2 * ri - 3);
            let (n, sizes): (i128, [i128; 5]) = if q % 2 == 1 {
                if r % 2 == 1 {
                    let n = pw(qi, 2 * ri - 1) + pw(qi, ri - 1) + (pw(qi, 2 * (ri - 1)) - qi * qi) / q2m1 + 1;
                    (
                        n,
                        [
                            qi * qi * t1 + pw(qi, ri - 1) + 1,
                            a - pw(qi, ri - 2) + pw(qi, ri - 3) + t1,
                            a + t2 + 1,
                            a + pw(qi, ri - 1) - pw(qi, ri - 2) + pw(qi, ri - 3) + t1,
                            a + pw(qi, ri - 1) + t2 + 1,
                        ],
                    )
                } else {
                    let n = pw(qi, 2 * ri - 1) + (pw(qi, 2 * (ri - 1)) - qi * qi) / q2m1 + 1;
                    (
                        n,
                        [
                            qi * qi * t1 + 1,
                            a - pw(qi, ri - 1) + pw(qi, ri - 2) + t1,
                            a + t2 - pw(qi, ri - 2) + 1,
                            a + t2 + 1,
                            a + t2 + pw(qi, ri - 2) + 1,
                        ],
                    )
                }
            } else {
                let full = (pw(qi, 2 * (ri - 1)) - 1) / q2m1;
                let n = pw(qi, 2 * ri - 1) + full;
                if r % 2 == 1 {
                    (
                        n,
                        [
                            full,
                            a - pw(qi, ri - 2) + t1,
                            a + t1,
                            a + pw(qi, ri - 1) - pw(qi, ri - 2) + t1,
                            a + full,
                        ],
                    )
                } else {
                    (
                        n,
                        [
                            full,
                            a - pw(qi, ri - 1) + pw(qi, ri - 2) + t1,
                            a + t1,
                            a + pw(qi, ri - 2) + t1,
                            a + full,
                        ],
                    )
                }
            };
            Ok(Prediction {
                n: n as u64,
                sizes: sizes.iter().map(|&s| s as u64).collect(),
            })
        }
    }
}

/// Per-hyperplane check of `|Σ∩B| = |Σ∩H| - |Σ∩F| + |Σ∩B_inf|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryReport {
    pub checked: u64,
    /// Hyperplane indices where the identity fails.
    pub failures: Vec<PointIndex>,
}

pub fn surgery_check(space: &Arc<ProjSpace>, params: &BParams, budget: &Budget) -> Result<SurgeryReport> {
    let b = hyperplane_section_sizes(&build_b(space, params, budget)?, budget)?;
    let h = hyperplane_section_sizes(&build_quasi_hermitian(space, params, budget)?, budget)?;
    let f = hyperplane_section_sizes(&build_cone_f(space, budget)?, budget)?;
    let bi = hyperplane_section_sizes(&build_b_infinity(space, params, budget)?, budget)?;
    let failures = (0..b.len())
        .filter(|&i| b[i] as i64 != h[i] as i64 - f[i] as i64 + bi[i] as i64)
        .map(|i| i as PointIndex)
        .collect();
    Ok(SurgeryReport {
        checked: b.len() as u64,
        failures,
    })
}

/// Human-readable tag for a variety and its parameters.
pub fn describe(v: &Variety, params: Option<&BParams>) -> String {
    match params {
        Some(p) => format!("{}(r={}, alpha={}, beta={})", v.kind(), p.r, p.alpha, p.beta),
        None => format!("{}(r={})", v.kind(), v.space().dim()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(q: u32, r: usize) -> Arc<ProjSpace> {
        Arc::new(ProjSpace::new(Arc::new(FieldCtx::quadratic_over(q).unwrap()), r).unwrap())
    }

    /// An element `i` of GF(9) with `i^2 = -1`.
    fn sqrt_minus_one(f: &FieldCtx) -> FieldElem {
        f.elements().find(|&x| f.mul(x, x) == f.neg(FieldElem::ONE)).unwrap()
    }

    #[test]
    fn validation_examples_q3() {
        let s = space(3, 3);
        let f = s.field();
        let i = sqrt_minus_one(f);
        let alpha = f.add(FieldElem::ONE, i);
        assert_eq!(f.trace_norm(alpha).unwrap().1, FieldElem(2));
        let ok = validate_params(&s, &BParams { r: 3, alpha, beta: i }).unwrap();
        assert!(ok.passed);
        assert_eq!(ok.clause, Clause::OddQOddR);
        assert_eq!(ok.invariant, Some(FieldElem(1)));
        let bad = validate_params(
            &s,
            &BParams {
                r: 3,
                alpha: FieldElem::ONE,
                beta: i,
            },
        )
        .unwrap();
        assert!(!bad.passed);
        assert_eq!(bad.invariant, Some(FieldElem::ZERO));
    }

    #[test]
    fn q3_even_r_has_no_parameters() {
        let s = space(3, 4);
        let f = s.field();
        let sub = f.subfield().unwrap();
        let mut seen = BTreeSet::new();
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
                assert!(!rep.passed);
                seen.insert(sub.restrict(rep.invariant.unwrap()).unwrap());
            }
        }
        // the invariant only takes the values 0 and 1
        assert_eq!(seen, [FieldElem(0), FieldElem(1)].into_iter().collect());
        assert_eq!(find_params(&s).unwrap_err(), Error::NoValidParams { q: 3, r: 4 });
    }

    #[test]
    fn hard_rejections() {
        let s = space(2, 3);
        let e = validate_params(
            &s,
            &BParams {
                r: 3,
                alpha: FieldElem(1),
                beta: FieldElem(2),
            },
        );
        assert!(matches!(e, Err(Error::InvalidParams(ref m)) if m.contains("even q > 2")));
        let s = space(3, 2);
        assert!(validate_params(
            &s,
            &BParams {
                r: 2,
                alpha: FieldElem(1),
                beta: FieldElem(3)
            }
        )
        .is_err());
        let s = space(3, 3);
        let sub_elem = s.field().subfield().unwrap().elements()[2];
        assert!(validate_params(
            &s,
            &BParams {
                r: 3,
                alpha: FieldElem(1),
                beta: sub_elem
            }
        )
        .is_err());
    }

    #[test]
    fn build_matches_pointwise_equation() {
        let s = space(3, 3);
        let p = find_params(&s).unwrap();
        let b = build_b(&s, &p, &Budget::default()).unwrap();
        assert_eq!(b.len(), 262);
        for i in 0..s.num_points() as PointIndex {
            assert_eq!(b.contains(i), b_contains(&s, &p, &s.coords(i)).unwrap());
        }
        let origin = s
            .index_of(&[FieldElem(1), FieldElem(0), FieldElem(0), FieldElem(0)])
            .unwrap();
        assert!(b.contains(origin));
    }

    #[test]
    fn sizes() {
        let b = Budget::default();
        assert_eq!(build_hermitian(&space(2, 3), &b).unwrap().len(), 45);
        assert_eq!(build_hermitian(&space(3, 3), &b).unwrap().len(), 280);
        assert_eq!(build_hermitian(&space(2, 2), &b).unwrap().len(), 9);
        let s = space(3, 3);
        let p = find_params(&s).unwrap();
        assert_eq!(build_cone_f(&s, &b).unwrap().len(), 37);
        assert_eq!(build_quasi_hermitian(&s, &p, &b).unwrap().len(), 280);
        assert_eq!(b_affine_points(&s, &p, &b).unwrap().len(), 243);
    }

    #[test]
    fn predictions() {
        let p = predicted_spectrum(3, 3, Family::B).unwrap();
        assert_eq!(p.n, 262);
        assert_eq!(p.support(), [19, 26, 28, 35, 37].into_iter().collect());
        assert_eq!(predicted_spectrum(4, 4, Family::B).unwrap().n, 16657);
        assert_eq!(predicted_spectrum(3, 4, Family::B).unwrap().n, 2278);
        assert_eq!(
            predicted_spectrum(4, 3, Family::B).unwrap().support(),
            [17, 61, 65, 77, 81].into_iter().collect()
        );
        let h = predicted_spectrum(3, 3, Family::Hermitian).unwrap();
        assert_eq!((h.n, h.sizes.clone()), (280, vec![28, 37]));
        assert!(predicted_spectrum(4, 2, Family::B).is_err());
        assert!(predicted_spectrum(6, 3, Family::B).is_err());
    }

    #[test]
    fn quasi_hermitian_spectrum_q3() {
        let s = space(3, 3);
        let p = find_params(&s).unwrap();
        let h = build_quasi_hermitian(&s, &p, &Budget::default()).unwrap();
        let sp = hyperplane_spectrum(&h, &Budget::default()).unwrap();
        assert_eq!(sp.support(), [28, 37].into_iter().collect());
        assert_eq!(sp.total, 820);
    }

    #[test]
    fn section_sizes_agree_with_sections() {
        let s = space(2, 3);
        let h = build_hermitian(&s, &Budget::default()).unwrap();
        let sizes = hyperplane_section_sizes(&h, &Budget::default()).unwrap();
        let secs = hyperplane_sections(&h, &Budget::default()).unwrap();
        for (a, b) in sizes.iter().zip(&secs) {
            assert_eq!(*a as usize, b.count());
        }
    }

    #[test]
    fn b_infinity_on_lines_at_infinity() {
        // q = 3: B_inf is X_1^2 + X_2^2 = 0 in X_0 = 0, a pair of planes
        // through (0,0,0,1). X_0 = X_3 = 0 meets it in 2 points, X_0 = X_1 = 0
        // in the single point X_2 = 0.
        let s = space(3, 3);
        let p = find_params(&s).unwrap();
        let binf = build_b_infinity(&s, &p, &Budget::default()).unwrap();
        assert_eq!(binf.len(), 19);
        let e = |v: [u32; 4]| v.map(FieldElem).to_vec();
        let count = |a: Vec<FieldElem>, b: Vec<FieldElem>| {
            let basis = crate::geom::span_rank(s.field(), 4, [a.as_slice(), b.as_slice()]);
            let mut k = 0;
            s.for_each_point_in(&basis, |i| k += binf.contains(i) as u32);
            k
        };
        assert_eq!(count(e([0, 1, 0, 0]), e([0, 0, 1, 0])), 2);
        assert_eq!(count(e([0, 0, 1, 0]), e([0, 0, 0, 1])), 1);
    }
}
