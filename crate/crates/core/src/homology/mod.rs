//! Chain complexes over the integers and their homology.

mod basis;
pub mod cache;
mod chains;
mod maps;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{rational, smith_normal_form, SparseIntMatrix};

pub use basis::{HomologyBasis, HomologyClass};
pub use chains::{
    chains_on, normalized_complex, relative_chains, relative_complex, SimplicialChains,
};
pub use maps::{
    chain_map_matrix, connecting_map, connecting_map_regions, connecting_map_triple, describe_map,
    induced_map, induced_map_between, les_check, les_check_masks, GeneratorImage,
    HomologyMapDescription, LesReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Differentials lower degree: `differentials[k] : C_k -> C_{k-1}`.
    Chain,
    /// Differentials raise degree: `differentials[r] : C^r -> C^{r+1}`.
    Cochain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    #[serde(rename = "Z")]
    Integer,
    #[serde(rename = "Q")]
    Rational,
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coefficients::Integer => "Z",
            Coefficients::Rational => "Q",
        })
    }
}

/// A bounded complex of free abelian groups of finite rank.
///
/// For chain complexes `differentials[0]` is the augmentation: a single row
/// of ones when `augmented`, otherwise a matrix with no rows. Cochain
/// complexes carry one differential fewer than degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    pub orientation: Orientation,
    pub dims: Vec<usize>,
    pub differentials: Vec<SparseIntMatrix>,
    pub augmented: bool,
    /// Highest degree whose homology is determined by the stored data.
    pub trusted_top: usize,
}

impl ChainComplex {
    pub fn new_chain(
        dims: Vec<usize>,
        mut differentials: Vec<SparseIntMatrix>,
        augmented: bool,
        trusted_top: usize,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidInput(
                "a complex needs at least degree 0".into(),
            ));
        }
        if differentials.len() == dims.len() - 1 {
            let rows = usize::from(augmented);
            let aug = SparseIntMatrix::from_triplets(
                rows,
                dims[0],
                (0..rows).flat_map(|_| (0..dims[0]).map(|c| (0, c, BigInt::one()))),
            );
            differentials.insert(0, aug);
        }
        let c = Self {
            orientation: Orientation::Chain,
            dims,
            differentials,
            augmented,
            trusted_top,
        };
        c.check_shapes()?;
        Ok(c)
    }

    pub fn new_cochain(
        dims: Vec<usize>,
        differentials: Vec<SparseIntMatrix>,
        trusted_top: usize,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidInput(
                "a complex needs at least degree 0".into(),
            ));
        }
        let c = Self {
            orientation: Orientation::Cochain,
            dims,
            differentials,
            augmented: false,
            trusted_top,
        };
        c.check_shapes()?;
        Ok(c)
    }

    fn check_shapes(&self) -> Result<()> {
        let top = self.max_degree();
        if self.trusted_top > top {
            return Err(Error::InvalidInput(format!(
                "trusted degree {} above stored degree {top}",
                self.trusted_top
            )));
        }
        let expected: Vec<(usize, usize)> = match self.orientation {
            Orientation::Chain => (0..=top)
                .map(|k| {
                    (
                        if k == 0 {
                            usize::from(self.augmented)
                        } else {
                            self.dims[k - 1]
                        },
                        self.dims[k],
                    )
                })
                .collect(),
            Orientation::Cochain => (0..top).map(|r| (self.dims[r + 1], self.dims[r])).collect(),
        };
        if expected.len() != self.differentials.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} differentials, found {}",
                expected.len(),
                self.differentials.len()
            )));
        }
        for (k, ((rows, cols), m)) in expected.iter().zip(&self.differentials).enumerate() {
            if m.rows() != *rows || m.cols() != *cols {
                return Err(Error::InvalidInput(format!(
                    "differential {k} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(())
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    fn outgoing_index(&self, k: usize) -> Option<usize> {
        match self.orientation {
            Orientation::Chain => Some(k),
            Orientation::Cochain => (k < self.differentials.len()).then_some(k),
        }
    }

    fn incoming_index(&self, k: usize) -> Option<usize> {
        match self.orientation {
            Orientation::Chain => (k + 1 < self.differentials.len()).then_some(k + 1),
            Orientation::Cochain => k.checked_sub(1),
        }
    }

    /// The differential leaving degree `k`, if stored.
    pub fn outgoing(&self, k: usize) -> Option<&SparseIntMatrix> {
        self.outgoing_index(k).map(|i| &self.differentials[i])
    }

    /// The differential arriving in degree `k`, if stored.
    pub fn incoming(&self, k: usize) -> Option<&SparseIntMatrix> {
        self.incoming_index(k).map(|i| &self.differentials[i])
    }

    /// First position where two consecutive differentials compose to a
    /// nonzero map.
    pub fn square_zero_violation(&self) -> Option<usize> {
        (1..self.differentials.len()).find(|&i| {
            let (first, second) = match self.orientation {
                Orientation::Chain => (&self.differentials[i], &self.differentials[i - 1]),
                Orientation::Cochain => (&self.differentials[i - 1], &self.differentials[i]),
            };
            !second.mul(first).is_zero()
        })
    }

    /// Alternating sum of the basis sizes, minus one for an augmentation.
    pub fn euler_characteristic(&self) -> i64 {
        let chi: i64 = self
            .dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        chi - i64::from(self.augmented)
    }
}

/// A finitely generated abelian group `Z^rank + Z/t_1 + ... + Z/t_m` with
/// `t_1 | t_2 | ... | t_m`, all at least 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    #[serde(
        serialize_with = "serialize_ints",
        deserialize_with = "deserialize_ints"
    )]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(rank: usize, torsion: impl IntoIterator<Item = u64>) -> Self {
        Self {
            rank,
            torsion: torsion.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Direct sum, renormalized into invariant factors.
    pub fn direct_sum(&self, other: &HomologyGroup) -> HomologyGroup {
        HomologyGroup {
            rank: self.rank + other.rank,
            torsion: crate::linalg::snf::normalize_diagonal(
                self.torsion.iter().chain(&other.torsion).cloned(),
            )
            .into_iter()
            .filter(|t| !t.is_one())
            .collect(),
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub(crate) fn serialize_ints<S: Serializer>(
    values: &[BigInt],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(values.len()))?;
    for v in values {
        match i64::try_from(v) {
            Ok(small) => seq.serialize_element(&small)?,
            Err(_) => seq.serialize_element(&v.to_string())?,
        }
    }
    seq.end()
}

pub(crate) fn deserialize_ints<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> std::result::Result<Vec<BigInt>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Int {
        Small(i64),
        Big(String),
    }
    let raw = Vec::<Int>::deserialize(deserializer)?;
    raw.into_iter()
        .map(|v| match v {
            Int::Small(x) => Ok(BigInt::from(x)),
            Int::Big(s) => s.parse().map_err(serde::de::Error::custom),
        })
        .collect()
}

/// Rank and nontrivial invariant factors of one differential.
fn matrix_summary(m: &SparseIntMatrix, coeffs: Coefficients) -> (usize, Vec<BigInt>) {
    match coeffs {
        Coefficients::Integer => {
            let snf = smith_normal_form(m);
            (snf.rank(), snf.torsion())
        }
        Coefficients::Rational => (rational::rank(m), Vec::new()),
    }
}

fn summaries(
    c: &ChainComplex,
    degrees: &[usize],
    coeffs: Coefficients,
) -> BTreeMap<usize, (usize, Vec<BigInt>)> {
    let mut needed: Vec<usize> = degrees
        .iter()
        .flat_map(|&k| [c.outgoing_index(k), c.incoming_index(k)])
        .flatten()
        .collect();
    needed.sort_unstable();
    needed.dedup();
    needed
        .into_par_iter()
        .map(|i| (i, matrix_summary(&c.differentials[i], coeffs)))
        .collect()
}

fn group_from(
    c: &ChainComplex,
    k: usize,
    table: &BTreeMap<usize, (usize, Vec<BigInt>)>,
) -> HomologyGroup {
    let out_rank = c.outgoing_index(k).map_or(0, |i| table[&i].0);
    let (in_rank, torsion) = c
        .incoming_index(k)
        .map_or((0, Vec::new()), |i| table[&i].clone());
    HomologyGroup {
        rank: c.dims[k] - out_rank - in_rank,
        torsion,
    }
}

/// Homology in degrees `0..=trusted_top`. Rational mode leaves torsion empty.
pub fn homology(c: &ChainComplex, coeffs: Coefficients) -> Vec<HomologyGroup> {
    let degrees: Vec<usize> = (0..=c.trusted_top).collect();
    homology_in_degrees(c, &degrees, coeffs)
}

/// Homology in the listed degrees, computed from the stored differentials
/// (missing differentials count as zero).
pub fn homology_in_degrees(
    c: &ChainComplex,
    degrees: &[usize],
    coeffs: Coefficients,
) -> Vec<HomologyGroup> {
    let table = summaries(c, degrees, coeffs);
    degrees.iter().map(|&k| group_from(c, k, &table)).collect()
}

pub fn homology_at(c: &ChainComplex, k: usize, coeffs: Coefficients) -> HomologyGroup {
    homology_in_degrees(c, &[k], coeffs).remove(0)
}

/// Alternating sum of homology ranks over every stored degree.
pub fn homology_euler_characteristic(c: &ChainComplex) -> i64 {
    let degrees: Vec<usize> = (0..=c.max_degree()).collect();
    homology_in_degrees(c, &degrees, Coefficients::Rational)
        .iter()
        .enumerate()
        .map(|(k, g)| {
            if k % 2 == 0 {
                g.rank as i64
            } else {
                -(g.rank as i64)
            }
        })
        .sum()
}

pub fn euler_characteristic(c: &ChainComplex) -> i64 {
    c.euler_characteristic()
}
