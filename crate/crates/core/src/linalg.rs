//! Gaussian elimination over a [`FieldCtx`].

use alloc::vec;
use alloc::vec::Vec;

use crate::gf::{FieldCtx, FieldElem};

/// Row space kept in reduced row echelon form, rows sorted by pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    width: usize,
    rows: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows<'a, I>(ctx: &FieldCtx, width: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a [FieldElem]>,
    {
        let mut e = Echelon::new(width);
        for r in rows {
            e.insert(ctx, r);
        }
        e
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the current rows in place.
    pub fn reduce(&self, ctx: &FieldCtx, v: &mut [FieldElem]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if !f.is_zero() {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = ctx.sub(*x, ctx.mul(f, y));
                }
            }
        }
    }

    pub fn contains(&self, ctx: &FieldCtx, v: &[FieldElem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(ctx, &mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, ctx: &FieldCtx, v: &[FieldElem]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let mut w = v.to_vec();
        self.reduce(ctx, &mut w);
        let Some(c) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = ctx.inv(w[c]);
        for x in w.iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let f = row[c];
            if !f.is_zero() {
                for (x, &y) in row.iter_mut().zip(&w) {
                    *x = ctx.sub(*x, ctx.mul(f, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < c);
        self.rows.insert(at, w);
        self.pivots.insert(at, c);
        true
    }
}

/// Basis of `{x : row . x = 0 for every row}`, in reduced echelon form.
pub fn null_space(ctx: &FieldCtx, width: usize, rows: &[Vec<FieldElem>]) -> Echelon {
    let e = Echelon::from_rows(ctx, width, rows.iter().map(|r| r.as_slice()));
    let mut out = Echelon::new(width);
    for free in (0..width).filter(|c| !e.pivots.contains(c)) {
        let mut v = vec![FieldElem::ZERO; width];
        v[free] = FieldElem::ONE;
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            v[p] = ctx.neg(row[free]);
        }
        out.insert(ctx, &v);
    }
    out
}

/// Solve `sum_j x_j cols[j] = target`; `None` if `target` is not in the span.
pub fn solve_combination(ctx: &FieldCtx, cols: &[&[FieldElem]], target: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let k = target.len();
    let s = cols.len();
    // augmented k x (s + 1)
    let mut m: Vec<Vec<FieldElem>> = (0..k)
        .map(|i| {
            let mut row: Vec<FieldElem> = cols.iter().map(|c| c[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..s {
        let Some(pr) = (r..k).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = ctx.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for i in 0..k {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                let pivot_row = m[r].clone();
                for (x, &y) in m[i].iter_mut().zip(&pivot_row).take(s + 1) {
                    *x = ctx.sub(*x, ctx.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == k {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[s].is_zero()) {
        return None;
    }
    let mut x = vec![FieldElem::ZERO; s];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][s];
    }
    Some(x)
}

pub fn dot(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    a.iter()
        .zip(b)
        .fold(FieldElem::ZERO, |acc, (&x, &y)| ctx.add(acc, ctx.mul(x, y)))
}
