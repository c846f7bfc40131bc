use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{ChainComplex, HomologyGroup};
use crate::linalg::{smith_normal_form_with_transforms, SparseIntMatrix, SparseVec};

/// Coordinates of a homology class: free part, then one entry per torsion
/// summand reduced modulo its order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyClass {
    #[serde(serialize_with = "super::serialize_ints")]
    pub free: Vec<BigInt>,
    #[serde(serialize_with = "super::serialize_ints")]
    pub torsion: Vec<BigInt>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }
}

/// Generators of `H_k` together with the data to express any cycle in them.
///
/// With `V_E` the column transform of the outgoing differential `E` (rank
/// `t`), the cycles are spanned by the columns `Z = V_E[:, t..]` and
/// `L = V_E^{-1}[t.., :]` recovers `Z`-coordinates of a cycle. The incoming
/// boundaries in those coordinates are `W = L D`, whose Smith form fixes the
/// generators.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub degree: usize,
    pub group: HomologyGroup,
    /// Cycle representatives of the free generators.
    pub free_generators: Vec<SparseVec>,
    /// Orders and cycle representatives of the torsion generators.
    pub torsion_generators: Vec<(BigInt, SparseVec)>,
    outgoing: SparseIntMatrix,
    lift: SparseIntMatrix,
    change: SparseIntMatrix,
    boundary_rank: usize,
    torsion_slots: Vec<(usize, BigInt)>,
}

impl HomologyBasis {
    pub fn new(c: &ChainComplex, k: usize) -> Self {
        let n = c.dims[k];
        let outgoing = c
            .outgoing(k)
            .cloned()
            .unwrap_or_else(|| SparseIntMatrix::zeros(0, n));
        let incoming = c
            .incoming(k)
            .cloned()
            .unwrap_or_else(|| SparseIntMatrix::zeros(n, 0));

        let e = smith_normal_form_with_transforms(&outgoing);
        let et = e.transforms.expect("requested transforms");
        let t = e.factors.len();
        let cycle_cols: Vec<usize> = (t..n).collect();
        let z = et.v.select_columns(&cycle_cols);
        let lift = et.v_inv.select_rows(&cycle_cols);
        let w = lift.mul(&incoming);

        let ws = smith_normal_form_with_transforms(&w);
        let wt = ws.transforms.expect("requested transforms");
        let s = ws.factors.len();
        let zdim = cycle_cols.len();
        let generator = |i: usize| -> SparseVec {
            let combo = wt.u_inv.column(i);
            z.mul(&SparseIntMatrix::from_columns(zdim, vec![combo.to_vec()]))
                .column(0)
                .to_vec()
        };
        let free_generators = (s..zdim).map(generator).collect();
        let torsion_slots: Vec<(usize, BigInt)> = ws
            .factors
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_one())
            .map(|(i, d)| (i, d.clone()))
            .collect();
        let torsion_generators = torsion_slots
            .iter()
            .map(|(i, d)| (d.clone(), generator(*i)))
            .collect();
        let group = HomologyGroup {
            rank: zdim - s,
            torsion: torsion_slots.iter().map(|(_, d)| d.clone()).collect(),
        };
        Self {
            degree: k,
            group,
            free_generators,
            torsion_generators,
            outgoing,
            lift,
            change: wt.u,
            boundary_rank: s,
            torsion_slots,
        }
    }

    pub fn is_cycle(&self, chain: &[BigInt]) -> bool {
        self.outgoing.mul_vec(chain).iter().all(Zero::is_zero)
    }

    /// Class of a cycle given as a dense chain; `None` if it is not a cycle.
    pub fn coordinates(&self, chain: &[BigInt]) -> Option<HomologyClass> {
        if !self.is_cycle(chain) {
            return None;
        }
        let y = self.change.mul_vec(&self.lift.mul_vec(chain));
        let free = y[self.boundary_rank..].to_vec();
        let torsion = self
            .torsion_slots
            .iter()
            .map(|(i, d)| y[*i].mod_floor(d))
            .collect();
        Some(HomologyClass { free, torsion })
    }

    pub fn free_generator_dense(&self, i: usize) -> Vec<BigInt> {
        dense(&self.free_generators[i], self.outgoing.cols())
    }

    pub fn torsion_generator_dense(&self, i: usize) -> Vec<BigInt> {
        dense(&self.torsion_generators[i].1, self.outgoing.cols())
    }

    pub fn chain_dim(&self) -> usize {
        self.outgoing.cols()
    }
}

pub(crate) fn dense(v: &[(u32, BigInt)], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in v {
        out[*i as usize] = x.clone();
    }
    out
}
