//! Cohomology of symmetric groups with trivial or sign coefficients, from
//! the normalized bar complex.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{homology_at, ChainComplex, Coefficients, HomologyGroup};
use crate::linalg::SparseIntMatrix;
use crate::subsetspace::DEFAULT_LEVEL_CEILING;

/// A bijection of `{0, ..., n-1}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let slot = seen
                .get_mut(x as usize)
                .ok_or_else(|| Error::InvalidInput(format!("image {x} out of range")))?;
            if std::mem::replace(slot, true) {
                return Err(Error::InvalidInput(format!("image {x} repeated")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u8).collect(),
        }
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn sign(&self) -> i32 {
        let inversions = (0..self.images.len())
            .flat_map(|i| (i + 1..self.images.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.images[i] > self.images[j])
            .count();
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// All permutations of `n` letters in lexicographic one-line order; the
/// identity comes first.
pub fn symmetric_group(n: usize) -> Vec<Permutation> {
    fn extend(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation {
                images: prefix.clone(),
            });
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x as u8);
                extend(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientAction {
    Trivial,
    Sign,
}

impl CoefficientAction {
    pub fn act(self, g: &Permutation) -> i32 {
        match self {
            CoefficientAction::Trivial => 1,
            CoefficientAction::Sign => g.sign(),
        }
    }
}

impl fmt::Display for CoefficientAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientAction::Trivial => "trivial",
            CoefficientAction::Sign => "sign",
        })
    }
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

/// Normalized bar cochains `C^r = Hom(Z[(G - e)^r], M)` for `r <= maxdeg + 1`.
///
/// Basis tuples `(g_1, ..., g_r)` are numbered in mixed radix with `g_1`
/// most significant, each entry running over the non-identity elements in
/// lexicographic order.
pub fn bar_cochain_complex(
    n: usize,
    action: CoefficientAction,
    maxdeg: usize,
) -> Result<ChainComplex> {
    bar_cochain_complex_with_ceiling(n, action, maxdeg, DEFAULT_LEVEL_CEILING)
}

pub fn bar_cochain_complex_with_ceiling(
    n: usize,
    action: CoefficientAction,
    maxdeg: usize,
    ceiling: u64,
) -> Result<ChainComplex> {
    if n == 0 {
        return Err(Error::InvalidInput("symmetric groups need n >= 1".into()));
    }
    if n > 8 {
        return Err(Error::InvalidInput(format!(
            "S_{n} is too large to enumerate"
        )));
    }
    let group = symmetric_group(n);
    let m = group.len() - 1;
    let top = maxdeg + 1;
    let needed = checked_pow(m as u128, top).unwrap_or(u128::MAX);
    if needed > ceiling as u128 {
        return Err(Error::Budget {
            what: format!("bar cochains of S_{n} in degree {top} (basis size)"),
            needed,
            ceiling: ceiling as u128,
        });
    }
    let dims: Vec<usize> = (0..=top).map(|r| m.pow(r as u32)).collect();
    // products of non-identity elements as group indices (0 = identity)
    let product: Vec<Vec<usize>> = group
        .iter()
        .map(|g| {
            group
                .iter()
                .map(|h| {
                    let gh = g.compose(h);
                    group.binary_search(&gh).expect("closed under composition")
                })
                .collect()
        })
        .collect();
    let weight: Vec<i32> = group.iter().map(|g| action.act(g)).collect();

    let differentials = (0..top)
        .map(|r| {
            let rows = dims[r + 1];
            let triplets: Vec<(usize, usize, BigInt)> = (0..rows)
                .into_par_iter()
                .flat_map_iter(|row| {
                    // digits of the (r+1)-tuple, as group indices 1..=m
                    let mut tuple = vec![0usize; r + 1];
                    let mut rest = row;
                    for slot in tuple.iter_mut().rev() {
                        *slot = rest % m + 1;
                        rest /= m;
                    }
                    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &g| acc * m + (g - 1));
                    let mut entries = Vec::with_capacity(r + 2);
                    entries.push((row, encode(&tuple[1..]), weight[tuple[0]] as i64));
                    for i in 1..=r {
                        let p = product[tuple[i - 1]][tuple[i]];
                        if p == 0 {
                            continue;
                        }
                        let mut merged = Vec::with_capacity(r);
                        merged.extend_from_slice(&tuple[..i - 1]);
                        merged.push(p);
                        merged.extend_from_slice(&tuple[i + 1..]);
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        entries.push((row, encode(&merged), sign));
                    }
                    let sign = if (r + 1) % 2 == 0 { 1 } else { -1 };
                    entries.push((row, encode(&tuple[..r]), sign));
                    entries.into_iter().map(|(r, c, v)| (r, c, BigInt::from(v)))
                })
                .collect();
            SparseIntMatrix::from_triplets(rows, dims[r], triplets)
        })
        .collect();
    ChainComplex::new_cochain(dims, differentials, maxdeg)
}

/// `H^r(S_n, M)` for the trivial or sign module.
pub fn group_cohomology(n: usize, action: CoefficientAction, r: usize) -> Result<HomologyGroup> {
    let c = bar_cochain_complex(n, action, r)?;
    Ok(homology_at(&c, r, Coefficients::Integer))
}
