use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A sparse vector as `(index, value)` pairs sorted by index, no zeros.
pub type SparseVec = Vec<(u32, BigInt)>;

/// `dst += q * src`.
pub(crate) fn axpy(dst: &mut SparseVec, q: &BigInt, src: &[(u32, BigInt)]) {
    if q.is_zero() || src.is_empty() {
        return;
    }
    let old = std::mem::take(dst);
    let mut out = Vec::with_capacity(old.len() + src.len());
    let (mut a, mut b) = (old.into_iter().peekable(), src.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some(&(ia, _)), Some(&&(ib, ref vb))) => {
                if ia < ib {
                    out.push(a.next().unwrap());
                } else if ib < ia {
                    out.push((ib, q * vb));
                    b.next();
                } else {
                    let (_, va) = a.next().unwrap();
                    let v = va + q * vb;
                    b.next();
                    if !v.is_zero() {
                        out.push((ia, v));
                    }
                }
            }
            (Some(_), None) => out.push(a.next().unwrap()),
            (None, Some(&&(ib, ref vb))) => {
                out.push((ib, q * vb));
                b.next();
            }
            (None, None) => break,
        }
    }
    *dst = out;
}

pub(crate) fn sparse_get(v: &[(u32, BigInt)], index: u32) -> Option<&BigInt> {
    v.binary_search_by_key(&index, |(i, _)| *i)
        .ok()
        .map(|p| &v[p].1)
}

/// An integer matrix stored by columns; zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl fmt::Debug for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SparseIntMatrix({}x{}, nnz={})",
            self.rows,
            self.cols,
            self.nnz()
        )?;
        if self.rows * self.cols <= 64 {
            for row in self.to_dense() {
                write!(
                    f,
                    "\n  {:?}",
                    row.iter().map(ToString::to_string).collect::<Vec<_>>()
                )?;
            }
        }
        Ok(())
    }
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i as u32, BigInt::one())]).collect(),
        }
    }

    /// Duplicate positions are summed; zero results are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Self {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "triplet ({r}, {c}) outside {rows}x{cols}"
            );
            columns[c].push((r as u32, v));
        }
        for col in &mut columns {
            col.sort_by_key(|(r, _)| *r);
            let mut merged: SparseVec = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((last, acc)) if *last == r => *acc += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *col = merged;
        }
        Self {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| c.windows(2).all(|w| w[0].0 < w[1].0)
            && c.iter().all(|(r, v)| (*r as usize) < rows && !v.is_zero())));
        Self {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn from_dense<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(c, v)| (r, c, v.clone().into()))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(u32, BigInt)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        sparse_get(&self.columns[c], r as u32)
            .cloned()
            .unwrap_or_default()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r as usize, c, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.cols,
            self.rows,
            self.triplets().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    /// Row vectors of the matrix, each sorted by column.
    pub fn to_rows(&self) -> Vec<SparseVec> {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                rows[*r as usize].push((c as u32, v.clone()));
            }
        }
        rows
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut dense = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            dense[r][c] = v.clone();
        }
        dense
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: SparseVec = Vec::new();
                for (k, v) in col {
                    axpy(&mut acc, v, &self.columns[*k as usize]);
                }
                acc
            })
            .collect();
        SparseIntMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            self.cols,
            x.len(),
            "shape mismatch in matrix-vector product"
        );
        let mut y = vec![BigInt::zero(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            if x[c].is_zero() {
                continue;
            }
            for (r, v) in col {
                y[*r as usize] += v * &x[c];
            }
        }
        y
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            rows: self.rows,
            cols: cols.len(),
            columns: cols.iter().map(|&c| self.columns[c].clone()).collect(),
        }
    }

    /// Keeps the listed rows, in order, renumbering them.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut position = vec![u32::MAX; self.rows];
        for (i, &r) in rows.iter().enumerate() {
            position[r] = i as u32;
        }
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let mut out: SparseVec = col
                    .iter()
                    .filter(|(r, _)| position[*r as usize] != u32::MAX)
                    .map(|(r, v)| (position[*r as usize], v.clone()))
                    .collect();
                out.sort_by_key(|(r, _)| *r);
                out
            })
            .collect();
        Self {
            rows: rows.len(),
            cols: self.cols,
            columns,
        }
    }

    pub fn max_abs(&self) -> BigInt {
        self.triplets()
            .map(|(_, _, v)| v.abs())
            .max()
            .unwrap_or_default()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct TripletList {
    rows: usize,
    cols: usize,
    triplets: Vec<(usize, usize, Entry)>,
}

impl Serialize for SparseIntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let triplets = self
            .triplets()
            .map(|(r, c, v)| {
                let entry = i64::try_from(v)
                    .map(Entry::Small)
                    .unwrap_or_else(|_| Entry::Big(v.to_string()));
                (r, c, entry)
            })
            .collect();
        TripletList {
            rows: self.rows,
            cols: self.cols,
            triplets,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SparseIntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let list = TripletList::deserialize(deserializer)?;
        let mut triplets = Vec::with_capacity(list.triplets.len());
        for (r, c, entry) in list.triplets {
            if r >= list.rows || c >= list.cols {
                return Err(D::Error::custom(format!("triplet ({r}, {c}) out of range")));
            }
            let v = match entry {
                Entry::Small(v) => BigInt::from(v),
                Entry::Big(s) => s.parse().map_err(D::Error::custom)?,
            };
            triplets.push((r, c, v));
        }
        Ok(SparseIntMatrix::from_triplets(
            list.rows, list.cols, triplets,
        ))
    }
}
