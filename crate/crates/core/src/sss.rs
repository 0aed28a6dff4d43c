//! Massey secret sharing on the dual of a projective code.
//!
//! The scheme code is `D = C(V)^⊥`, given by a parity-check matrix `H` of
//! `C(V)`. Column `h_0` carries the secret and columns `h_1 .. h_m` belong to
//! participants `1 .. m`. The dealer draws `u` with `u · h_0 = s` and hands
//! `t_i = u · h_i` to participant `i`.
//!
//! A set `A` of participants determines the secret exactly when some
//! codeword `c` of `C(V)` has `c_0 = 1` and support inside `{0} ∪ A`; then
//! `s = -Σ c_i t_i`. Otherwise every secret is equally likely. When all
//! nonzero codewords of `C(V)` are minimal, the minimal access sets are the
//! complements in `V \ {P_0}` of the hyperplanes not through `P_0`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::code::{code_from_variety, cutting_blocking_check, LinearCode, Verdict};
use crate::error::{Error, Result};
use crate::geom::{normalize, PointIndex};
use crate::gf::FieldElem;
use crate::linalg::{dot, null_space, Echelon};
use crate::variety::Variety;

/// Name of the generator behind [`deal`], recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng::seed_from_u64";

/// A Massey scheme on the dual of `C(V)`.
#[derive(Clone, Debug)]
pub struct Scheme {
    code: LinearCode,
    /// Reduced echelon form `R` of the generator matrix of `C(V)`.
    rref: Echelon,
    /// Non-pivot columns of `R`; they index the coordinates of `u`.
    free: Vec<usize>,
}

impl Scheme {
    /// Builds the scheme whose code is the dual of `code`; column 0 of
    /// `code` is the secret position.
    pub fn new(code: LinearCode) -> Result<Self> {
        let f = code.field();
        let n = code.len();
        let rref = Echelon::from_rows(f, n, code.generator().iter().map(|r| r.as_slice()));
        if rref.rank() < code.dimension() {
            return Err(Error::RankDeficient {
                rank: rref.rank(),
                expected: code.dimension(),
            });
        }
        let free: Vec<usize> = (0..n).filter(|c| !rref.pivots().contains(c)).collect();
        let s = Scheme { code, rref, free };
        if s.parity_column(0).iter().all(|x| x.is_zero()) {
            // e_0 lies in C(V): the secret column of H vanishes
            return Err(Error::ZeroVector);
        }
        Ok(s)
    }

    /// The primal code `C(V)`.
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn participants(&self) -> u32 {
        self.code.len() as u32 - 1
    }

    /// Dimension of the scheme code, the length of `u`.
    pub fn dual_dimension(&self) -> usize {
        self.free.len()
    }

    /// Point of participant `i` (1-based).
    pub fn participant_point(&self, i: u32) -> Result<PointIndex> {
        self.check_participant(i)?;
        Ok(self.code.columns()[i as usize])
    }

    fn check_participant(&self, i: u32) -> Result<()> {
        if i == 0 || i > self.participants() {
            return Err(Error::IndexOutOfRange {
                index: i,
                degree: self.participants(),
            });
        }
        Ok(())
    }

    /// Column `c` of the parity-check matrix `H = [-A^T | I]` (up to column
    /// order), where `R = [I | A]`.
    pub fn parity_column(&self, c: usize) -> Vec<FieldElem> {
        let f = self.code.field();
        match self.rref.pivots().iter().position(|&p| p == c) {
            Some(i) => self.free.iter().map(|&j| f.neg(self.rref.rows()[i][j])).collect(),
            None => self
                .free
                .iter()
                .map(|&j| if j == c { FieldElem::ONE } else { FieldElem::ZERO })
                .collect(),
        }
    }

    /// `u H`, all `n` coordinates including the secret.
    pub fn encode(&self, u: &[FieldElem]) -> Vec<FieldElem> {
        let f = self.code.field();
        let mut t = vec![FieldElem::ZERO; self.code.len()];
        for (&j, &x) in self.free.iter().zip(u) {
            t[j] = x;
        }
        for (row, &p) in self.rref.rows().iter().zip(self.rref.pivots()) {
            let s = self
                .free
                .iter()
                .zip(u)
                .fold(FieldElem::ZERO, |a, (&j, &x)| f.add(a, f.mul(row[j], x)));
            t[p] = f.neg(s);
        }
        t
    }

    /// Codewords `c` of `C(V)` (as functionals) vanishing on every column
    /// outside `keep`; column 0 is never kept.
    fn functionals_supported_in(&self, keep: &AccessSet) -> Echelon {
        let cols: Vec<Vec<FieldElem>> = (0..self.code.len())
            .filter(|&j| j != 0 && !keep.contains(j as u32))
            .map(|j| self.code.column(j))
            .collect();
        null_space(self.code.field(), self.code.dimension(), &cols)
    }
}

/// Output of [`deal`]; `shares[i - 1]` belongs to participant `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dealing {
    pub secret: FieldElem,
    pub seed: u64,
    pub u: Vec<FieldElem>,
    pub shares: Vec<FieldElem>,
}

/// Draws `u` uniformly among the `q_f^(k-1)` vectors with `u · h_0 = secret`,
/// `k` being the dimension of the scheme code.
pub fn deal(s: &Scheme, secret: FieldElem, seed: u64) -> Result<Dealing> {
    let f = s.code.field();
    f.elem(secret.0)?;
    let q = f.order();
    let h0 = s.parity_column(0);
    let lead = h0.iter().position(|x| !x.is_zero()).expect("h_0 is nonzero");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u: Vec<FieldElem> = (0..h0.len())
        .map(|i| {
            if i == lead {
                FieldElem::ZERO
            } else {
                FieldElem(rng.random_range(0..q))
            }
        })
        .collect();
    let rest = dot(f, &u, &h0);
    u[lead] = f.div(f.sub(secret, rest), h0[lead]);
    let word = s.encode(&u);
    debug_assert_eq!(word[0], secret);
    Ok(Dealing {
        secret,
        seed,
        u,
        shares: word[1..].to_vec(),
    })
}

/// Sorted, duplicate-free, 1-based participant indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AccessSet(Vec<u32>);

impl AccessSet {
    pub fn new(mut v: Vec<u32>) -> Self {
        v.sort_unstable();
        v.dedup();
        AccessSet(v)
    }

    pub fn members(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &AccessSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn without(&self, i: u32) -> AccessSet {
        AccessSet(self.0.iter().copied().filter(|&x| x != i).collect())
    }

    pub fn image(&self, p: &Permutation) -> AccessSet {
        AccessSet::new(self.0.iter().map(|&i| p.apply(i)).collect())
    }

    /// Fails unless every member lies in `1..=degree`.
    pub fn check(&self, degree: u32) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > degree) {
            Some(&index) => Err(Error::IndexOutOfRange { index, degree }),
            None => Ok(()),
        }
    }
}

/// Returns the secret determined by the shares of `subset` (given in the
/// order of `subset.members()`).
pub fn recover(s: &Scheme, subset: &AccessSet, shares: &[FieldElem]) -> Result<FieldElem> {
    subset.check(s.participants())?;
    if shares.len() != subset.len() {
        return Err(Error::DimensionMismatch {
            expected: subset.len(),
            got: shares.len(),
        });
    }
    let f = s.code.field();
    let g0 = s.code.column(0);
    let eval = |h: &[FieldElem]| {
        subset
            .members()
            .iter()
            .zip(shares)
            .fold(FieldElem::ZERO, |a, (&i, &t)| {
                f.add(a, f.mul(dot(f, h, &s.code.column(i as usize)), t))
            })
    };
    // shares are consistent iff every codeword of C(V) with c_0 = 0 and
    // support inside A annihilates them
    let zero_at_0 = {
        let mut cols: Vec<Vec<FieldElem>> = vec![g0.clone()];
        cols.extend(
            (1..s.code.len())
                .filter(|&j| !subset.contains(j as u32))
                .map(|j| s.code.column(j)),
        );
        null_space(f, s.code.dimension(), &cols)
    };
    if zero_at_0.rows().iter().any(|h| !eval(h).is_zero()) {
        return Err(Error::InconsistentShares);
    }
    let cover = s.functionals_supported_in(subset);
    let h = cover
        .rows()
        .iter()
        .find(|h| !dot(f, h, &g0).is_zero())
        .ok_or(Error::NotQualified)?;
    let c0 = dot(f, h, &g0);
    Ok(f.neg(f.div(eval(h), c0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perfectness {
    /// Exactly one secret is consistent with the shares.
    Qualified,
    /// Every secret is equally likely.
    Uniform,
    /// The two computations disagree; never expected.
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectnessReport {
    pub verdict: Perfectness,
    /// Codewords of `C(V)` with `c_0 != 0` supported in `{0} ∪ A`, found by
    /// enumerating all of `C(V)`.
    pub covering_words: u64,
    /// Secrets consistent with the observed shares.
    pub secrets: BTreeSet<u32>,
    /// Each consistent secret is hit by `q_f^multiplicity_log` vectors `u`.
    pub multiplicity_log: u32,
}

/// Decides what the shares of `subset` reveal, twice: by enumerating every
/// codeword of `C(V)` and by ranks of parity-check columns.
pub fn perfectness_check(
    s: &Scheme,
    subset: &AccessSet,
    dealing: &Dealing,
    budget: &Budget,
) -> Result<PerfectnessReport> {
    subset.check(s.participants())?;
    let f = s.code.field();
    let q = f.order() as u64;
    let k = s.code.dimension();
    let n = s.code.len();
    let total = q.checked_pow(k as u32).unwrap_or(u64::MAX);
    budget.check("primal codeword symbols", total.saturating_mul(n as u64))?;
    budget.check(
        "parity-check entries",
        (s.dual_dimension() * (subset.len() + 1)) as u64 * s.dual_dimension() as u64,
    )?;

    // (a) enumerate C(V)
    let mut covering = 0;
    let mut implied = BTreeSet::new();
    let mut u = vec![FieldElem::ZERO; k];
    for _ in 0..total {
        let c = s.code.encode(&u);
        if !c[0].is_zero() && (1..n).all(|j| c[j].is_zero() || subset.contains(j as u32)) {
            covering += 1;
            let acc = subset.members().iter().fold(FieldElem::ZERO, |a, &i| {
                f.add(a, f.mul(c[i as usize], dealing.shares[i as usize - 1]))
            });
            implied.insert(f.neg(f.div(acc, c[0])).0);
        }
        for x in u.iter_mut().rev() {
            x.0 += 1;
            if (x.0 as u64) < q {
                break;
            }
            x.0 = 0;
        }
    }

    // (b) ranks of the participants' parity-check columns, with and without h_0
    let kd = s.dual_dimension();
    let mut e = Echelon::new(kd);
    for &i in subset.members() {
        e.insert(f, &s.parity_column(i as usize));
    }
    let rank_a = e.rank();
    let determined = !e.insert(f, &s.parity_column(0));
    let (verdict, secrets, multiplicity_log) = match (covering > 0, determined) {
        (true, true) if implied.len() == 1 => (Perfectness::Qualified, implied, (kd - rank_a) as u32),
        (false, false) => (
            Perfectness::Uniform,
            f.elements().map(|x| x.0).collect(),
            (kd - rank_a - 1) as u32,
        ),
        _ => (Perfectness::Inconsistent, implied, 0),
    };
    Ok(PerfectnessReport {
        verdict,
        covering_words: covering,
        secrets,
        multiplicity_log,
    })
}

/// A family of access sets over participants `1..=participants`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessStructure {
    pub participants: u32,
    pub sets: BTreeSet<AccessSet>,
    pub provenance: String,
}

impl AccessStructure {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Set size → number of sets.
    pub fn size_profile(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for s in &self.sets {
            *m.entry(s.len()).or_insert(0) += 1;
        }
        m
    }

    /// No member contains another.
    pub fn is_antichain(&self) -> bool {
        let bits: Vec<BitSet> = self
            .sets
            .iter()
            .map(|s| BitSet::from_indices(self.participants as usize + 1, s.members().iter().copied()))
            .collect();
        let mut order: Vec<usize> = (0..bits.len()).collect();
        order.sort_by_key(|&i| bits[i].count());
        // distinct sets of equal size cannot contain each other
        order.iter().enumerate().all(|(a, &i)| {
            order[a + 1..]
                .iter()
                .filter(|&&j| bits[j].count() > bits[i].count())
                .all(|&j| !bits[i].is_subset(&bits[j]))
        })
    }

    /// Whether `p` maps every set of the structure into the structure.
    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.participants && self.sets.iter().all(|s| self.sets.contains(&s.image(p)))
    }
}

/// Exact set-of-sets equality; labels are not matched up.
pub fn structures_equal(a: &AccessStructure, b: &AccessStructure) -> bool {
    a.participants == b.participants && a.sets == b.sets
}

/// Minimal access sets of the scheme on `C(V)` with `p0` as the secret
/// column: one per hyperplane avoiding `p0`.
///
/// Refuses when `C(V)` has non-minimal codewords, since the hyperplane
/// complements need not be minimal then.
pub fn access_structure(v: &Variety, p0: PointIndex, budget: &Budget) -> Result<(Scheme, AccessStructure)> {
    let code = code_from_variety(v, p0)?;
    let rep = cutting_blocking_check(v, budget)?;
    if rep.verdict != Verdict::Minimal {
        let witness = rep.witness.map(|w| w.covered).unwrap_or(0);
        return Err(Error::NotMinimal { witness });
    }
    let space = &**v.space();
    let f = space.field();
    let nh = space.num_hyperplanes();
    budget.check("access set incidences", nh * v.len() as u64)?;
    let cols: Vec<Vec<FieldElem>> = (0..code.len()).map(|j| code.column(j)).collect();
    let mut sets = BTreeSet::new();
    for h in 0..nh as PointIndex {
        let hc = space.coords(h);
        if dot(f, &hc, &cols[0]).is_zero() {
            continue;
        }
        let members = (1..cols.len())
            .filter(|&j| !dot(f, &hc, &cols[j]).is_zero())
            .map(|j| j as u32)
            .collect();
        sets.insert(AccessSet(members));
    }
    let structure = AccessStructure {
        participants: code.len() as u32 - 1,
        sets,
        provenance: format!("{}, P0 = point {}", v.kind().label(), p0),
    };
    Ok((Scheme::new(code)?, structure))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemocracyReport {
    pub sets: usize,
    /// `counts[i - 1]`: number of sets containing participant `i`.
    pub counts: Vec<u64>,
    /// Membership count → number of participants with it.
    pub histogram: BTreeMap<u64, u64>,
    /// Participants in every set.
    pub dictators: Vec<u32>,
}

impl DemocracyReport {
    pub fn is_democratic(&self) -> bool {
        self.histogram.len() <= 1
    }
}

pub fn democracy_report(a: &AccessStructure) -> DemocracyReport {
    let mut counts = vec![0u64; a.participants as usize];
    for s in &a.sets {
        for &i in s.members() {
            counts[i as usize - 1] += 1;
        }
    }
    let mut histogram = BTreeMap::new();
    for &c in &counts {
        *histogram.entry(c).or_insert(0) += 1;
    }
    let dictators = (1..=a.participants)
        .filter(|&i| !a.sets.is_empty() && counts[i as usize - 1] == a.sets.len() as u64)
        .collect();
    DemocracyReport {
        sets: a.sets.len(),
        counts,
        histogram,
        dictators,
    }
}

/// Permutation of `1..=degree`, stored in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: u32) -> Self {
        Permutation((1..=degree).collect())
    }

    /// `images[i - 1]` is the image of `i`.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x as usize > n || seen[x as usize] {
                return Err(Error::BadPermutation(format!(
                    "{images:?} is not a bijection of 1..={n}"
                )));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation(images))
    }

    pub fn from_cycles(degree: u32, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut img: Vec<u32> = (1..=degree).collect();
        let mut used = vec![false; degree as usize + 1];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                if a == 0 || a > degree {
                    return Err(Error::BadPermutation(format!("point {a} outside 1..={degree}")));
                }
                if core::mem::replace(&mut used[a as usize], true) {
                    return Err(Error::BadPermutation(format!("point {a} appears twice")));
                }
                img[a as usize - 1] = c[(k + 1) % c.len()];
            }
        }
        Ok(Permutation(img))
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)`; `()` is the identity.
    pub fn parse_cycles(degree: u32, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::BadPermutation(format!("expected '(...)' at {rest:?}")))?;
            let (inner, tail) = body;
            if !inner.trim().is_empty() {
                let cyc = inner
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::BadPermutation(format!("bad point {:?}", t.trim())))
                    })
                    .collect::<Result<Vec<u32>>>()?;
                cycles.push(cyc);
            }
            rest = tail.trim_start();
        }
        Permutation::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize - 1]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.apply(i)).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize - 1] = i as u32 + 1;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x == i as u32 + 1)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len() + 1];
        let mut any = false;
        for start in 1..=self.degree() {
            if seen[start as usize] || self.apply(start) == start {
                continue;
            }
            any = true;
            f.write_str("(")?;
            let mut i = start;
            loop {
                seen[i as usize] = true;
                write!(f, "{i}")?;
                i = self.apply(i);
                if i == start {
                    break;
                }
                f.write_str(",")?;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// A permutation group with all of its elements listed.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: u32,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }
}

/// Breadth-first closure of `gens` under composition.
pub fn group_closure(degree: u32, gens: &[Permutation], budget: &Budget) -> Result<PermGroup> {
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::BadPermutation(format!(
            "generator of degree {} in a group of degree {degree}",
            g.degree()
        )));
    }
    let id = Permutation::identity(degree);
    let mut seen: BTreeSet<Permutation> = BTreeSet::new();
    seen.insert(id.clone());
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    // finite groups are closed under products of generators alone
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if seen.len() as u64 > budget.max_group_order {
                    return Err(Error::Budget {
                        what: "group elements",
                        needed: seen.len() as u64,
                        cap: budget.max_group_order,
                    });
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(PermGroup {
        degree,
        generators: gens.to_vec(),
        elements,
    })
}

/// `{ S^γ : γ ∈ G, S ∈ starters }`.
pub fn develop(starters: &[AccessSet], g: &PermGroup) -> Result<AccessStructure> {
    for s in starters {
        s.check(g.degree())?;
    }
    let mut sets = BTreeSet::new();
    for s in starters {
        for x in g.elements() {
            sets.insert(s.image(x));
        }
    }
    Ok(AccessStructure {
        participants: g.degree(),
        sets,
        provenance: format!(
            "development of {} starters under a group of order {}",
            starters.len(),
            g.order()
        ),
    })
}

/// The participant permutation induced by a point map that fixes `P_0` and
/// preserves `V`. `map` receives normalised coordinates and may return any
/// nonzero representative.
pub fn induced_permutation(s: &Scheme, mut map: impl FnMut(&[FieldElem]) -> Vec<FieldElem>) -> Result<Permutation> {
    let code = s.code();
    let space = code.space();
    let f = space.field();
    let pos: BTreeMap<PointIndex, u32> = code.columns().iter().enumerate().map(|(j, &p)| (p, j as u32)).collect();
    let image_of = |p: PointIndex, map: &mut dyn FnMut(&[FieldElem]) -> Vec<FieldElem>| -> Result<u32> {
        let mut img = map(&space.coords(p));
        if !normalize(f, &mut img) {
            return Err(Error::ZeroVector);
        }
        let idx = space.index_of_normalized(&img);
        pos.get(&idx)
            .copied()
            .ok_or_else(|| Error::BadPermutation(format!("point {p} is mapped off the variety")))
    };
    if image_of(code.p0(), &mut map)? != 0 {
        return Err(Error::BadPermutation("the map moves P0".into()));
    }
    let images = (1..code.len())
        .map(|j| image_of(code.columns()[j], &mut map))
        .collect::<Result<Vec<u32>>>()?;
    Permutation::from_images(images)
}
