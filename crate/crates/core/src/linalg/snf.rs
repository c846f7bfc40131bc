//! Smith normal form over the integers.
//!
//! Elimination runs on sparse rows. The pivot is the entry of smallest
//! magnitude, ties broken by Markowitz cost `(row_nnz - 1) * (col_nnz - 1)`,
//! so unit pivots with little fill go first. A pivot that does not divide its
//! row or column is replaced by the smallest remainder until it does. Without
//! transforms, a small residual block with no unit entries is finished by
//! dense elimination.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dense;
use super::sparse::{axpy, sparse_get, SparseIntMatrix, SparseVec};

/// Residual blocks at most this large (in both dimensions) go dense.
pub const DENSE_FALLBACK_DIM: usize = 200;

#[derive(Clone, Debug)]
pub struct SmithTransforms {
    pub u: SparseIntMatrix,
    pub u_inv: SparseIntMatrix,
    pub v: SparseIntMatrix,
    pub v_inv: SparseIntMatrix,
}

/// Invariant factors `d_1 | d_2 | ... | d_r` of a matrix, optionally with
/// unimodular `U`, `V` such that `U M V` is diagonal with the factors first.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    pub factors: Vec<BigInt>,
    pub transforms: Option<SmithTransforms>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    Eliminator::new(m, false).run()
}

pub fn smith_normal_form_with_transforms(m: &SparseIntMatrix) -> SmithForm {
    Eliminator::new(m, true).run()
}

/// Rounded quotient: `a - q p` has magnitude at most `|p| / 2`.
pub(crate) fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(p);
    if (&r * 2u32).abs() > p.abs() {
        q + 1
    } else {
        q
    }
}

/// Turns a list of nonzero diagonal entries into invariant factors.
pub(crate) fn normalize_diagonal(values: impl IntoIterator<Item = BigInt>) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = values
        .into_iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.abs())
        .collect();
    v.sort();
    for i in 0..v.len() {
        if v[i].is_one() {
            continue;
        }
        for j in i + 1..v.len() {
            if !v[j].is_multiple_of(&v[i]) {
                let g = v[i].gcd(&v[j]);
                let l = &v[i] / &g * &v[j];
                v[i] = g;
                v[j] = l;
            }
        }
    }
    v
}

fn scaled(v: &[(u32, BigInt)], q: &BigInt) -> SparseVec {
    if q.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * q)).collect()
}

/// `alpha x + beta y`.
fn combine(x: &[(u32, BigInt)], alpha: &BigInt, y: &[(u32, BigInt)], beta: &BigInt) -> SparseVec {
    let mut out = scaled(x, alpha);
    axpy(&mut out, beta, y);
    out
}

fn unit_vectors(n: usize) -> Vec<SparseVec> {
    (0..n).map(|i| vec![(i as u32, BigInt::one())]).collect()
}

struct Tracker {
    u_rows: Vec<SparseVec>,
    u_inv_cols: Vec<SparseVec>,
    v_cols: Vec<SparseVec>,
    v_inv_rows: Vec<SparseVec>,
}

struct Eliminator {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
    col_rows: Vec<BTreeSet<u32>>,
    /// Active columns ordered by entry count.
    by_count: BTreeSet<(u32, u32)>,
    active_rows: usize,
    tracker: Option<Tracker>,
    pivots: Vec<(u32, u32, BigInt)>,
    extra_factors: Vec<BigInt>,
}

impl Eliminator {
    fn new(m: &SparseIntMatrix, track: bool) -> Self {
        let rows = m.to_rows();
        let mut col_rows = vec![BTreeSet::new(); m.cols()];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c as usize].insert(r as u32);
            }
        }
        let by_count = col_rows
            .iter()
            .enumerate()
            .filter(|(_, rows)| !rows.is_empty())
            .map(|(c, rows)| (rows.len() as u32, c as u32))
            .collect();
        let active_rows = rows.iter().filter(|r| !r.is_empty()).count();
        let tracker = track.then(|| Tracker {
            u_rows: unit_vectors(m.rows()),
            u_inv_cols: unit_vectors(m.rows()),
            v_cols: unit_vectors(m.cols()),
            v_inv_rows: unit_vectors(m.cols()),
        });
        Self {
            nrows: m.rows(),
            ncols: m.cols(),
            rows,
            col_rows,
            by_count,
            active_rows,
            tracker,
            pivots: Vec::new(),
            extra_factors: Vec::new(),
        }
    }

    fn entry(&self, r: u32, c: u32) -> Option<&BigInt> {
        sparse_get(&self.rows[r as usize], c)
    }

    fn set_entry_present(&mut self, c: u32, r: u32, present: bool) {
        let rows = &mut self.col_rows[c as usize];
        let before = rows.len() as u32;
        let changed = if present {
            rows.insert(r)
        } else {
            rows.remove(&r)
        };
        if changed {
            let after = rows.len() as u32;
            self.by_count.remove(&(before, c));
            if after > 0 {
                self.by_count.insert((after, c));
            }
        }
    }

    /// `row[dst] -= q * row[src]`
    fn row_op(&mut self, dst: u32, src: u32, q: &BigInt) {
        let neg = -q;
        let mut row = std::mem::take(&mut self.rows[dst as usize]);
        let was_empty = row.is_empty();
        axpy(&mut row, &neg, &self.rows[src as usize]);
        let touched: Vec<(u32, bool)> = self.rows[src as usize]
            .iter()
            .map(|(c, _)| (*c, sparse_get(&row, *c).is_some()))
            .collect();
        match (was_empty, row.is_empty()) {
            (true, false) => self.active_rows += 1,
            (false, true) => self.active_rows -= 1,
            _ => {}
        }
        self.rows[dst as usize] = row;
        for (c, present) in touched {
            self.set_entry_present(c, dst, present);
        }
        if let Some(t) = &mut self.tracker {
            let src_row = t.u_rows[src as usize].clone();
            axpy(&mut t.u_rows[dst as usize], &neg, &src_row);
            let dst_col = t.u_inv_cols[dst as usize].clone();
            axpy(&mut t.u_inv_cols[src as usize], q, &dst_col);
        }
    }

    /// `col[j] -= q * col[c]` where column `c` is nonzero only in row `r`.
    fn col_op_on_pivot_row(&mut self, r: u32, j: u32, c: u32, q: &BigInt) {
        let p = self.entry(r, c).expect("pivot entry").clone();
        let row = &mut self.rows[r as usize];
        let pos = row
            .binary_search_by_key(&j, |(i, _)| *i)
            .expect("row entry");
        row[pos].1 -= q * p;
        if row[pos].1.is_zero() {
            row.remove(pos);
            self.set_entry_present(j, r, false);
        }
        if let Some(t) = &mut self.tracker {
            let neg = -q;
            let col_c = t.v_cols[c as usize].clone();
            axpy(&mut t.v_cols[j as usize], &neg, &col_c);
            let row_j = t.v_inv_rows[j as usize].clone();
            axpy(&mut t.v_inv_rows[c as usize], q, &row_j);
        }
    }

    /// Scans columns from the sparsest up and stops once a few of them
    /// have offered a unit entry.
    fn select_pivot(&self) -> Option<(u32, u32, BigUint)> {
        const UNIT_COLUMNS: usize = 4;
        let mut best: Option<(BigUint, usize, u32, u32)> = None;
        let mut unit_columns = 0;
        for &(count, c) in &self.by_count {
            let col_cost = count as usize - 1;
            let mut saw_unit = false;
            for &r in &self.col_rows[c as usize] {
                let v = self.entry(r, c).expect("column index in sync").magnitude();
                saw_unit |= v.is_one();
                let cost = (self.rows[r as usize].len() - 1) * col_cost;
                let better = match &best {
                    None => true,
                    Some((bv, bc, _, _)) => v < bv || (v == bv && cost < *bc),
                };
                if better {
                    if v.is_one() && cost == 0 {
                        return Some((r, c, v.clone()));
                    }
                    best = Some((v.clone(), cost, r, c));
                }
            }
            if saw_unit {
                unit_columns += 1;
                if unit_columns >= UNIT_COLUMNS {
                    break;
                }
            }
        }
        best.map(|(v, _, r, c)| (r, c, v))
    }

    fn reduce(&mut self, mut r: u32, mut c: u32) {
        loop {
            let p = self.entry(r, c).expect("pivot").clone();
            let others: Vec<u32> = self.col_rows[c as usize]
                .iter()
                .copied()
                .filter(|&x| x != r)
                .collect();
            let mut smallest: Option<(BigUint, u32)> = None;
            for r2 in others {
                let q = nearest_quotient(self.entry(r2, c).expect("column entry"), &p);
                if !q.is_zero() {
                    self.row_op(r2, r, &q);
                }
                if let Some(rem) = self.entry(r2, c) {
                    let m = rem.magnitude().clone();
                    if smallest.as_ref().is_none_or(|(s, _)| m < *s) {
                        smallest = Some((m, r2));
                    }
                }
            }
            if let Some((_, r2)) = smallest {
                r = r2;
                continue;
            }
            let others: Vec<u32> = self.rows[r as usize]
                .iter()
                .map(|(j, _)| *j)
                .filter(|&j| j != c)
                .collect();
            let mut smallest: Option<(BigUint, u32)> = None;
            for j in others {
                let q = nearest_quotient(self.entry(r, j).expect("row entry"), &p);
                if !q.is_zero() {
                    self.col_op_on_pivot_row(r, j, c, &q);
                }
                if let Some(rem) = self.entry(r, j) {
                    let m = rem.magnitude().clone();
                    if smallest.as_ref().is_none_or(|(s, _)| m < *s) {
                        smallest = Some((m, j));
                    }
                }
            }
            if let Some((_, j)) = smallest {
                c = j;
                continue;
            }
            self.rows[r as usize].clear();
            self.active_rows -= 1;
            self.set_entry_present(c, r, false);
            self.pivots.push((r, c, p));
            return;
        }
    }

    fn residual_is_small(&self) -> bool {
        self.active_rows <= DENSE_FALLBACK_DIM && self.by_count.len() <= DENSE_FALLBACK_DIM
    }

    fn finish_dense(&mut self) {
        let row_ids: Vec<usize> = (0..self.nrows)
            .filter(|&r| !self.rows[r].is_empty())
            .collect();
        let col_ids: Vec<usize> = (0..self.ncols)
            .filter(|&c| !self.col_rows[c].is_empty())
            .collect();
        let mut col_pos = vec![usize::MAX; self.ncols];
        for (i, &c) in col_ids.iter().enumerate() {
            col_pos[c] = i;
        }
        let block: Vec<Vec<BigInt>> = row_ids
            .iter()
            .map(|&r| {
                let mut row = vec![BigInt::zero(); col_ids.len()];
                for (c, v) in &self.rows[r] {
                    row[col_pos[*c as usize]] = v.clone();
                }
                row
            })
            .collect();
        self.extra_factors = dense::invariant_factors(block);
        for r in row_ids {
            self.rows[r].clear();
        }
        for c in col_ids {
            self.col_rows[c].clear();
        }
        self.by_count.clear();
        self.active_rows = 0;
    }

    fn run(mut self) -> SmithForm {
        while let Some((r, c, magnitude)) = self.select_pivot() {
            if self.tracker.is_none() && !magnitude.is_one() && self.residual_is_small() {
                self.finish_dense();
                break;
            }
            self.reduce(r, c);
        }
        match self.tracker.take() {
            None => {
                let diagonal = self
                    .pivots
                    .drain(..)
                    .map(|(_, _, p)| p)
                    .chain(self.extra_factors.drain(..));
                SmithForm {
                    rows: self.nrows,
                    cols: self.ncols,
                    factors: normalize_diagonal(diagonal),
                    transforms: None,
                }
            }
            Some(tracker) => self.finish_with_transforms(tracker),
        }
    }

    fn finish_with_transforms(self, mut t: Tracker) -> SmithForm {
        let Eliminator {
            nrows,
            ncols,
            pivots,
            ..
        } = self;
        for (r, _, p) in &pivots {
            if p.is_negative() {
                let minus = BigInt::from(-1);
                t.u_rows[*r as usize] = scaled(&t.u_rows[*r as usize], &minus);
                t.u_inv_cols[*r as usize] = scaled(&t.u_inv_cols[*r as usize], &minus);
            }
        }
        let mut diag: Vec<BigInt> = pivots.iter().map(|(_, _, p)| p.abs()).collect();

        let order = |pivot_ids: Vec<usize>, n: usize| -> Vec<usize> {
            let mut used = vec![false; n];
            for &i in &pivot_ids {
                used[i] = true;
            }
            pivot_ids
                .into_iter()
                .chain((0..n).filter(|&i| !used[i]))
                .collect()
        };
        let row_order = order(pivots.iter().map(|(r, _, _)| *r as usize).collect(), nrows);
        let col_order = order(pivots.iter().map(|(_, c, _)| *c as usize).collect(), ncols);
        let mut u_rows: Vec<SparseVec> = row_order
            .iter()
            .map(|&r| std::mem::take(&mut t.u_rows[r]))
            .collect();
        let mut u_inv_cols: Vec<SparseVec> = row_order
            .iter()
            .map(|&r| std::mem::take(&mut t.u_inv_cols[r]))
            .collect();
        let mut v_cols: Vec<SparseVec> = col_order
            .iter()
            .map(|&c| std::mem::take(&mut t.v_cols[c]))
            .collect();
        let mut v_inv_rows: Vec<SparseVec> = col_order
            .iter()
            .map(|&c| std::mem::take(&mut t.v_inv_rows[c]))
            .collect();

        // bring the diagonal into divisibility order with 2x2 unimodular moves
        let rank = diag.len();
        for i in 0..rank {
            for j in i + 1..rank {
                if diag[i].is_one() || diag[j].is_multiple_of(&diag[i]) {
                    continue;
                }
                let (a, b) = (diag[i].clone(), diag[j].clone());
                let eg = a.extended_gcd(&b);
                let (g, s, tt) = (eg.gcd, eg.x, eg.y);
                let (ag, bg) = (&a / &g, &b / &g);
                let one = BigInt::one();
                let minus_one = -BigInt::one();

                let ri = combine(&u_rows[i], &s, &u_rows[j], &tt);
                let rj = combine(&u_rows[i], &-&bg, &u_rows[j], &ag);
                u_rows[i] = ri;
                u_rows[j] = rj;

                let ci = combine(&u_inv_cols[i], &ag, &u_inv_cols[j], &bg);
                let cj = combine(&u_inv_cols[i], &-&tt, &u_inv_cols[j], &s);
                u_inv_cols[i] = ci;
                u_inv_cols[j] = cj;

                let vi = combine(&v_cols[i], &one, &v_cols[j], &one);
                let vj = combine(&v_cols[i], &-(&tt * &bg), &v_cols[j], &(&s * &ag));
                v_cols[i] = vi;
                v_cols[j] = vj;

                let wi = combine(&v_inv_rows[i], &(&s * &ag), &v_inv_rows[j], &(&tt * &bg));
                let wj = combine(&v_inv_rows[i], &minus_one, &v_inv_rows[j], &one);
                v_inv_rows[i] = wi;
                v_inv_rows[j] = wj;

                diag[j] = &a * &bg;
                diag[i] = g;
            }
        }

        let from_rows = |rows: Vec<SparseVec>, ncols: usize| {
            let nrows = rows.len();
            SparseIntMatrix::from_triplets(
                nrows,
                ncols,
                rows.into_iter()
                    .enumerate()
                    .flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c as usize, v))),
            )
        };
        let transforms = SmithTransforms {
            u: from_rows(u_rows, nrows),
            u_inv: SparseIntMatrix::from_columns(nrows, u_inv_cols),
            v: SparseIntMatrix::from_columns(ncols, v_cols),
            v_inv: from_rows(v_inv_rows, ncols),
        };
        SmithForm {
            rows: nrows,
            cols: ncols,
            factors: diag,
            transforms: Some(transforms),
        }
    }
}
