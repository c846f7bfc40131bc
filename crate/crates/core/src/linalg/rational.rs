//! Rank and kernels over the rationals by fraction-free elimination.
//!
//! Vectors stay integral; after every elimination step a vector is divided
//! by the gcd of its entries.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::sparse::{axpy, SparseIntMatrix, SparseVec};

fn make_primitive(v: &mut SparseVec) {
    let mut g = BigInt::zero();
    for (_, x) in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if let Some((_, lead)) = v.first() {
        if lead.is_negative() {
            g = -g;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Row echelon basis of a growing subspace of ℚ^N, keyed by leading index.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<u32, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis until its leading index is free or
    /// at least `stop`; returns the remainder.
    fn reduce(&self, mut v: SparseVec, stop: u32) -> SparseVec {
        while let Some((lead, a)) = v.first().cloned() {
            if lead >= stop {
                break;
            }
            let Some(row) = self.rows.get(&lead) else {
                break;
            };
            let p = &row[0].1;
            let g = a.gcd(p);
            let (scale, factor) = (p / &g, -(&a / &g));
            for (_, x) in v.iter_mut() {
                *x *= &scale;
            }
            axpy(&mut v, &factor, row);
            make_primitive(&mut v);
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce(v, u32::MAX);
        match v.first().map(|(lead, _)| *lead) {
            Some(lead) if !self.rows.contains_key(&lead) => {
                make_primitive(&mut v);
                self.rows.insert(lead, v);
                true
            }
            Some(_) => unreachable!("reduction stops only at free leading indices"),
            None => false,
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone(), u32::MAX).is_empty()
    }
}

/// Rank of a set of vectors.
pub fn rank_of(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

pub fn rank(m: &SparseIntMatrix) -> usize {
    rank_of(m.columns().iter().cloned())
}

/// Integer vectors forming a basis of the rational kernel of `m`.
pub fn kernel(m: &SparseIntMatrix) -> Vec<SparseVec> {
    let offset = m.rows() as u32;
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (j, col) in m.columns().iter().enumerate() {
        let mut v = col.clone();
        v.push((offset + j as u32, BigInt::one()));
        let r = e.reduce(v, offset);
        match r.first() {
            Some((lead, _)) if *lead >= offset => {
                let mut k: SparseVec = r.into_iter().map(|(i, x)| (i - offset, x)).collect();
                make_primitive(&mut k);
                out.push(k);
            }
            Some((lead, _)) => {
                e.rows.insert(*lead, r);
            }
            None => unreachable!("tag entry keeps the vector nonzero"),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel_of_small_matrix() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let k = kernel(&m);
        assert_eq!(k.len(), 1);
        let x: Vec<BigInt> = (0..3)
            .map(|i| {
                super::super::sparse::sparse_get(&k[0], i)
                    .cloned()
                    .unwrap_or_default()
            })
            .collect();
        assert!(m.mul_vec(&x).iter().all(Zero::is_zero));
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![(0, 2.into()), (1, 4.into())]));
        assert!(!e.insert(vec![(0, (-3).into()), (1, (-6).into())]));
        assert!(e.contains(&vec![(0, 1.into()), (1, 2.into())]));
        assert!(!e.contains(&vec![(1, 1.into())]));
    }
}
