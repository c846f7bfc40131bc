use num_bigint::BigInt;
use rayon::prelude::*;

use super::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::SparseIntMatrix;
use crate::simplicial::{SimplicialMap, SimplicialSet};

/// Normalized chains on the non-degenerate simplices of a region of a
/// simplicial set, with the correspondence between basis and simplices.
#[derive(Clone, Debug)]
pub struct SimplicialChains {
    pub complex: ChainComplex,
    /// `basis[k][i]`: simplex index of the `i`-th basis element in degree `k`.
    pub basis: Vec<Vec<u32>>,
    /// `position[k][s]`: basis position of simplex `s`, `u32::MAX` if absent.
    pub position: Vec<Vec<u32>>,
}

impl SimplicialChains {
    pub fn position_of(&self, k: usize, s: usize) -> Option<usize> {
        self.position
            .get(k)
            .map(|p| p[s])
            .filter(|&p| p != u32::MAX)
            .map(|p| p as usize)
    }
}

/// Chains on the non-degenerate simplices inside `region` (everything when
/// `None`) in degrees up to `min(maxdeg + 1, trunc)`. Boundary terms leaving
/// the region are dropped, so a region closed under faces gives a subcomplex
/// and the complement of one gives the relative complex.
pub fn chains_on(
    x: &SimplicialSet,
    region: Option<&[Vec<bool>]>,
    augmented: bool,
    maxdeg: usize,
) -> SimplicialChains {
    let trunc = x.trunc();
    let top = (maxdeg + 1).min(trunc);
    let (basis, position): (Vec<Vec<u32>>, Vec<Vec<u32>>) = (0..=top)
        .into_par_iter()
        .map(|k| {
            let nd = x.nondegenerate_mask(k);
            let mut basis = Vec::new();
            let mut position = vec![u32::MAX; nd.len()];
            for (s, &keep) in nd.iter().enumerate() {
                if keep && region.is_none_or(|r| r[k][s]) {
                    position[s] = basis.len() as u32;
                    basis.push(s as u32);
                }
            }
            (basis, position)
        })
        .unzip();
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let boundaries: Vec<SparseIntMatrix> = (1..=top)
        .into_par_iter()
        .map(|k| {
            let mut triplets = Vec::new();
            for (col, &s) in basis[k].iter().enumerate() {
                for i in 0..=k {
                    let f = x.face(k, i, s as usize);
                    let row = position[k - 1][f];
                    if row != u32::MAX {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        triplets.push((row as usize, col, BigInt::from(sign)));
                    }
                }
            }
            SparseIntMatrix::from_triplets(dims[k - 1], dims[k], triplets)
        })
        .collect();
    let trusted_top = if trunc == 0 { 0 } else { maxdeg.min(trunc - 1) };
    let complex = ChainComplex::new_chain(dims, boundaries, augmented, trusted_top)
        .expect("shapes agree by construction");
    SimplicialChains {
        complex,
        basis,
        position,
    }
}

/// Normalized chains of `x`; `reduced` adds the augmentation.
pub fn normalized_complex(x: &SimplicialSet, reduced: bool, maxdeg: usize) -> ChainComplex {
    chains_on(x, None, reduced, maxdeg).complex
}

/// Chains of `x` relative to a sub-simplicial set given by a mask.
pub fn relative_chains(
    x: &SimplicialSet,
    sub: &[Vec<bool>],
    maxdeg: usize,
) -> Result<SimplicialChains> {
    x.check_closed(sub)?;
    let complement: Vec<Vec<bool>> = sub
        .iter()
        .map(|m| m.iter().map(|&b| !b).collect())
        .collect();
    Ok(chains_on(x, Some(&complement), false, maxdeg))
}

/// Chains of the pair `(x, A)`; its homology is the reduced homology of `x/A`.
pub fn relative_complex(
    x: &SimplicialSet,
    a: &SimplicialMap,
    maxdeg: usize,
) -> Result<ChainComplex> {
    if *a.target != *x {
        return Err(Error::InvalidInput(
            "subspace map does not land in the space".into(),
        ));
    }
    if !a.is_injective() {
        return Err(Error::InvalidInput("subspace map is not injective".into()));
    }
    if a.trunc() != x.trunc() {
        return Err(Error::InvalidInput(
            "subspace must be stored at every level of the space".into(),
        ));
    }
    Ok(relative_chains(x, &a.image_masks(), maxdeg)?.complex)
}
