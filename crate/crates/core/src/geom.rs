//! Points, hyperplanes, lines and subspaces of `PG(r, q_f)`.
//!
//! Every point has a canonical index: vectors are normalised so that the
//! leftmost nonzero coordinate is `1`, and the normalised vectors are ordered
//! lexicographically by their coordinate encodings. Hyperplanes share the
//! same indexing through their dual coordinates.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::linalg::{self, Echelon};

/// Index of a point (or hyperplane) in the canonical order.
pub type PointIndex = u32;

/// Version tag of the canonical point order, echoed in reports.
pub const POINT_ORDER_VERSION: &str = "lex-normalized-v1";

/// A normalised, nonzero coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(Vec<FieldElem>);

/// Dual coordinates `(h_0 : ... : h_r)` of the hyperplane `sum h_i X_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane(Vec<FieldElem>);

macro_rules! coord_vector {
    ($t:ident) => {
        impl $t {
            /// Normalises `coords`; fails on the zero vector.
            pub fn new(ctx: &FieldCtx, mut coords: Vec<FieldElem>) -> Result<Self> {
                if normalize(ctx, &mut coords) {
                    Ok($t(coords))
                } else {
                    Err(Error::ZeroVector)
                }
            }

            pub fn coords(&self) -> &[FieldElem] {
                &self.0
            }

            pub fn dim(&self) -> usize {
                self.0.len() - 1
            }
        }
    };
}

coord_vector!(ProjPoint);
coord_vector!(Hyperplane);

/// A line, stored as its two smallest points in the canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    pub first: ProjPoint,
    pub second: ProjPoint,
}

/// Scales `v` so that its leftmost nonzero entry is `1`. Returns `false` for
/// the zero vector.
pub fn normalize(ctx: &FieldCtx, v: &mut [FieldElem]) -> bool {
    let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if v[lead] != FieldElem::ONE {
        let inv = ctx.inv(v[lead]);
        for x in v[lead..].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
    }
    true
}

/// `[n choose k]_q`, the number of `k`-dimensional subspaces of `GF(q)^n`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (q as u128).pow(n - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// A subspace given by a basis in reduced row echelon form.
pub type SubspaceBasis = Echelon;

/// `span_rank`: echelon basis of the span of `vectors`.
pub fn span_rank<'a, I>(ctx: &FieldCtx, width: usize, vectors: I) -> SubspaceBasis
where
    I: IntoIterator<Item = &'a [FieldElem]>,
{
    Echelon::from_rows(ctx, width, vectors)
}

/// `PG(r, q_f)` over a shared field context.
#[derive(Debug)]
pub struct ProjSpace {
    field: Arc<FieldCtx>,
    r: usize,
    q: u64,
    num_points: u64,
    /// `start[i]`: index of the first point whose leading coordinate sits at
    /// position `i`.
    start: Vec<u64>,
    /// `weight[j] = q^(r - j)`.
    weight: Vec<u64>,
}

impl ProjSpace {
    pub fn new(field: Arc<FieldCtx>, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParams("projective dimension must be at least 1".into()));
        }
        let q = field.order() as u64;
        let num = (q as u128).pow(r as u32 + 1).saturating_sub(1) / (q as u128 - 1);
        if num > u32::MAX as u128 {
            return Err(Error::Budget {
                what: "point indexing",
                needed: num.min(u64::MAX as u128) as u64,
                cap: u32::MAX as u64,
            });
        }
        let weight: Vec<u64> = (0..=r).map(|j| q.pow((r - j) as u32)).collect();
        let start: Vec<u64> = (0..=r).map(|i| (weight[i] - 1) / (q - 1)).collect();
        Ok(ProjSpace {
            field,
            r,
            q,
            num_points: num as u64,
            start,
            weight,
        })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    /// Length of coordinate vectors, `r + 1`.
    pub fn width(&self) -> usize {
        self.r + 1
    }

    pub fn field_order(&self) -> u64 {
        self.q
    }

    pub fn num_points(&self) -> u64 {
        self.num_points
    }

    pub fn num_hyperplanes(&self) -> u64 {
        self.num_points
    }

    /// Number of points on a hyperplane (= hyperplanes through a point).
    pub fn points_per_hyperplane(&self) -> u64 {
        (self.weight[0] - 1) / (self.q - 1)
    }

    pub fn num_lines(&self) -> u64 {
        gaussian_binomial(self.r as u32 + 1, 2, self.q)
    }

    /// Index of an already normalised vector.
    #[inline]
    pub fn index_of_normalized(&self, v: &[FieldElem]) -> PointIndex {
        let lead = v.iter().position(|x| !x.is_zero()).expect("zero vector");
        self.index_with_lead(v, lead)
    }

    #[inline]
    fn index_with_lead(&self, v: &[FieldElem], lead: usize) -> PointIndex {
        let mut t = 0u64;
        for &x in &v[lead + 1..] {
            t = t * self.q + x.0 as u64;
        }
        (self.start[lead] + t) as PointIndex
    }

    /// Index of the point spanned by an arbitrary nonzero vector.
    pub fn index_of(&self, v: &[FieldElem]) -> Result<PointIndex> {
        if v.len() != self.width() {
            return Err(Error::DimensionMismatch {
                expected: self.width(),
                got: v.len(),
            });
        }
        let mut w = v.to_vec();
        if !normalize(&self.field, &mut w) {
            return Err(Error::ZeroVector);
        }
        Ok(self.index_of_normalized(&w))
    }

    /// Normalised coordinates of point `idx`.
    pub fn decode_into(&self, idx: PointIndex, out: &mut [FieldElem]) {
        let idx = idx as u64;
        assert!(idx < self.num_points, "point index out of range");
        let lead = (0..=self.r)
            .rev()
            .find(|&i| idx < self.start[i] + self.weight[i])
            .expect("index within range");
        let mut t = idx - self.start[lead];
        out.iter_mut().for_each(|x| *x = FieldElem::ZERO);
        out[lead] = FieldElem::ONE;
        for j in (lead + 1..=self.r).rev() {
            out[j] = FieldElem((t % self.q) as u32);
            t /= self.q;
        }
    }

    pub fn coords(&self, idx: PointIndex) -> Vec<FieldElem> {
        let mut v = vec![FieldElem::ZERO; self.width()];
        self.decode_into(idx, &mut v);
        v
    }

    pub fn point(&self, idx: PointIndex) -> ProjPoint {
        ProjPoint(self.coords(idx))
    }

    pub fn hyperplane(&self, idx: PointIndex) -> Hyperplane {
        Hyperplane(self.coords(idx))
    }

    pub fn point_index(&self, p: &ProjPoint) -> PointIndex {
        self.index_of_normalized(&p.0)
    }

    pub fn hyperplane_index(&self, h: &Hyperplane) -> PointIndex {
        self.index_of_normalized(&h.0)
    }

    /// All points in canonical order.
    pub fn enumerate_points(&self, budget: &Budget) -> Result<Vec<ProjPoint>> {
        budget.check("point enumeration", self.num_points)?;
        Ok((0..self.num_points as PointIndex).map(|i| self.point(i)).collect())
    }

    pub fn enumerate_hyperplanes(&self, budget: &Budget) -> Result<Vec<Hyperplane>> {
        budget.check("hyperplane enumeration", self.num_points)?;
        Ok((0..self.num_points as PointIndex).map(|i| self.hyperplane(i)).collect())
    }

    pub fn incident(&self, p: &ProjPoint, h: &Hyperplane) -> Result<bool> {
        if p.0.len() != self.width() || h.0.len() != self.width() {
            return Err(Error::DimensionMismatch {
                expected: self.width(),
                got: if p.0.len() != self.width() {
                    p.0.len()
                } else {
                    h.0.len()
                },
            });
        }
        Ok(linalg::dot(&self.field, &p.0, &h.0).is_zero())
    }

    /// Echelon basis of `v^⊥`: the points of hyperplane `v`, or the
    /// hyperplanes through point `v`.
    pub fn orthogonal_basis(&self, v: &[FieldElem]) -> SubspaceBasis {
        linalg::null_space(&self.field, self.width(), &[v.to_vec()])
    }

    /// Calls `f` with the index of every point of the subspace spanned by
    /// `basis`.
    pub fn for_each_point_in(&self, basis: &SubspaceBasis, mut f: impl FnMut(PointIndex)) {
        let ctx = &*self.field;
        let rows = basis.rows();
        let pivots = basis.pivots();
        let d = rows.len();
        let w = self.width();
        // partial[t] = row_j + sum_{j < s <= t} c_s row_s
        let mut partial: Vec<Vec<FieldElem>> = vec![vec![FieldElem::ZERO; w]; d];
        let mut coef = vec![0u32; d];
        for j in 0..d {
            let lead = pivots[j];
            partial[j].copy_from_slice(&rows[j]);
            for t in j + 1..d {
                let (a, b) = partial.split_at_mut(t);
                b[0].copy_from_slice(&a[t - 1]);
                coef[t] = 0;
            }
            loop {
                f(self.index_with_lead(&partial[d - 1], lead));
                // advance the odometer over c_{j+1} .. c_{d-1}
                let mut t = d;
                let advanced = loop {
                    if t == j + 1 {
                        break false;
                    }
                    t -= 1;
                    coef[t] += 1;
                    if (coef[t] as u64) < self.q {
                        break true;
                    }
                    coef[t] = 0;
                };
                if !advanced {
                    break;
                }
                let c = FieldElem(coef[t]);
                let (a, b) = partial.split_at_mut(t);
                let prev = &a[t - 1];
                for ((x, &p), &rw) in b[0].iter_mut().zip(prev).zip(&rows[t]) {
                    *x = ctx.add(p, ctx.mul(c, rw));
                }
                for s in t + 1..d {
                    let (a, b) = partial.split_at_mut(s);
                    b[0].copy_from_slice(&a[s - 1]);
                }
            }
        }
    }

    /// Points on hyperplane `h` (or hyperplanes through point `h`).
    pub fn for_each_orthogonal(&self, h: &[FieldElem], f: impl FnMut(PointIndex)) {
        let basis = self.orthogonal_basis(h);
        self.for_each_point_in(&basis, f);
    }

    /// All subspaces of vector dimension `dim` (projective dimension
    /// `dim - 1`), each as an echelon basis.
    pub fn subspaces(&self, dim: usize) -> SubspaceIter<'_> {
        SubspaceIter::new(self, dim)
    }

    pub fn enumerate_lines(&self, budget: &Budget) -> Result<impl Iterator<Item = Line> + '_> {
        budget.check("line enumeration", self.num_lines())?;
        Ok(self.subspaces(2).map(|b| {
            // the row with the later pivot is the smallest point on the line
            let rows = b.rows();
            Line {
                first: ProjPoint(rows[1].clone()),
                second: ProjPoint(rows[0].clone()),
            }
        }))
    }

    /// Indices of the `q_f + 1` points of a line.
    pub fn line_points(&self, line: &Line) -> Vec<PointIndex> {
        let basis = span_rank(&self.field, self.width(), [line.first.coords(), line.second.coords()]);
        let mut out = Vec::with_capacity(self.q as usize + 1);
        self.for_each_point_in(&basis, |i| out.push(i));
        out
    }
}

/// Iterator over all `dim`-dimensional subspaces in reduced echelon form.
pub struct SubspaceIter<'a> {
    space: &'a ProjSpace,
    dim: usize,
    pivots: Vec<usize>,
    /// (row, column) of each free entry for the current pivot set
    free: Vec<(usize, usize)>,
    digits: Vec<u32>,
    done: bool,
}

impl<'a> SubspaceIter<'a> {
    fn new(space: &'a ProjSpace, dim: usize) -> Self {
        let n = space.width();
        let done = dim == 0 || dim > n;
        let mut it = SubspaceIter {
            space,
            dim,
            pivots: (0..dim).collect(),
            free: Vec::new(),
            digits: Vec::new(),
            done,
        };
        if !done {
            it.reset_free();
        }
        it
    }

    fn reset_free(&mut self) {
        let n = self.space.width();
        self.free.clear();
        for (row, &p) in self.pivots.iter().enumerate() {
            for col in p + 1..n {
                if !self.pivots.contains(&col) {
                    self.free.push((row, col));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn next_pivots(&mut self) -> bool {
        let n = self.space.width();
        let k = self.dim;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < n - k + i {
                self.pivots[i] += 1;
                for j in i + 1..k {
                    self.pivots[j] = self.pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SubspaceIter<'_> {
    type Item = SubspaceBasis;

    fn next(&mut self) -> Option<SubspaceBasis> {
        if self.done {
            return None;
        }
        let n = self.space.width();
        let mut rows = vec![vec![FieldElem::ZERO; n]; self.dim];
        for (r, &p) in self.pivots.iter().enumerate() {
            rows[r][p] = FieldElem::ONE;
        }
        for (&(r, c), &d) in self.free.iter().zip(&self.digits) {
            rows[r][c] = FieldElem(d);
        }
        let basis = Echelon::from_rows(self.space.field(), n, rows.iter().map(|r| r.as_slice()));
        // advance
        let q = self.space.q as u32;
        let mut carried = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < q {
                carried = false;
                break;
            }
            *d = 0;
        }
        if carried {
            if self.next_pivots() {
                self.reset_free();
            } else {
                self.done = true;
            }
        }
        Some(basis)
    }
}

/// Quadratic Veronese map `PG(r) -> PG((r^2 + 3r) / 2)`, monomials
/// `x_i x_j` for `i <= j` in lexicographic order.
pub fn veronese2(ctx: &FieldCtx, p: &ProjPoint) -> ProjPoint {
    let x = p.coords();
    let mut out = Vec::with_capacity(x.len() * (x.len() + 1) / 2);
    for i in 0..x.len() {
        for j in i..x.len() {
            out.push(ctx.mul(x[i], x[j]));
        }
    }
    ProjPoint::new(ctx, out).expect("image of a nonzero vector is nonzero")
}
