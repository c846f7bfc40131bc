use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::basis::{HomologyBasis, HomologyClass};
use super::chains::{chains_on, SimplicialChains};
use super::HomologyGroup;
use crate::error::{Error, Result};
use crate::linalg::{rational, smith_normal_form, SparseIntMatrix};
use crate::simplicial::{SimplicialMap, SimplicialSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorImage {
    pub class: HomologyClass,
    /// Order of the image; `None` when it has infinite order.
    #[serde(serialize_with = "serialize_order")]
    pub order: Option<BigInt>,
}

fn serialize_order<S: serde::Serializer>(
    order: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match order {
        None => s.serialize_none(),
        Some(o) => super::serialize_ints(std::slice::from_ref(o), s),
    }
}

/// A homomorphism between homology groups in the engine's generator bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyMapDescription {
    pub source_degree: usize,
    pub target_degree: usize,
    pub source: HomologyGroup,
    pub target: HomologyGroup,
    /// `target.rank x source.rank` matrix on the free parts.
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: Vec<Vec<BigInt>>,
    /// Images of the source generators: free generators first, then torsion.
    pub generator_images: Vec<GeneratorImage>,
    /// Rank of the kernel on the free part of the source.
    pub kernel_rank: usize,
    pub cokernel: HomologyGroup,
}

fn serialize_matrix<S: serde::Serializer>(
    m: &[Vec<BigInt>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        let row: Vec<String> = row.iter().map(ToString::to_string).collect();
        let row: Vec<serde_json::Value> = row
            .into_iter()
            .map(|v| {
                v.parse::<i64>()
                    .map(Into::into)
                    .unwrap_or(serde_json::Value::String(v))
            })
            .collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

impl HomologyMapDescription {
    /// Rank of the map on free parts.
    pub fn free_rank(&self) -> usize {
        self.source.rank - self.kernel_rank
    }

    /// Absolute value of the single entry of a map between rank-one groups.
    pub fn scalar(&self) -> Option<BigInt> {
        (self.source.rank == 1 && self.target.rank == 1)
            .then(|| num_traits::Signed::abs(&self.matrix[0][0]))
    }

    pub fn is_iso(&self) -> bool {
        self.source == self.target
            && self.kernel_rank == 0
            && self.cokernel.is_zero()
            && self.torsion_injective()
    }

    fn torsion_injective(&self) -> bool {
        let images = &self.generator_images[self.source.rank..];
        self.source
            .torsion
            .iter()
            .zip(images)
            .all(|(d, img)| img.order.as_ref() == Some(d))
    }
}

fn element_order(class: &HomologyClass, target: &HomologyGroup) -> Option<BigInt> {
    if class.free.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut order = BigInt::one();
    for (c, d) in class.torsion.iter().zip(&target.torsion) {
        let g = c.gcd(d);
        order = order.lcm(&(d / g));
    }
    Some(order)
}

/// Summarizes a map given the target classes of the source generators.
pub fn describe_map(
    source: &HomologyBasis,
    target: &HomologyBasis,
    images: Vec<HomologyClass>,
) -> HomologyMapDescription {
    let (sg, tg) = (&source.group, &target.group);
    let matrix: Vec<Vec<BigInt>> = (0..tg.rank)
        .map(|r| (0..sg.rank).map(|c| images[c].free[r].clone()).collect())
        .collect();
    let free_cols = SparseIntMatrix::from_triplets(
        tg.rank,
        sg.rank,
        (0..sg.rank)
            .flat_map(|c| (0..tg.rank).map(move |r| (r, c)))
            .map(|(r, c)| (r, c, matrix[r][c].clone())),
    );
    let kernel_rank = sg.rank - rational::rank(&free_cols);

    // cokernel: target coordinates (torsion, then free) modulo relations and images
    let nt = tg.torsion.len();
    let mut triplets = Vec::new();
    let mut col = 0;
    for (i, d) in tg.torsion.iter().enumerate() {
        triplets.push((i, col, d.clone()));
        col += 1;
    }
    for img in &images {
        for (i, v) in img.torsion.iter().enumerate() {
            triplets.push((i, col, v.clone()));
        }
        for (i, v) in img.free.iter().enumerate() {
            triplets.push((nt + i, col, v.clone()));
        }
        col += 1;
    }
    let presentation = SparseIntMatrix::from_triplets(nt + tg.rank, col, triplets);
    let snf = smith_normal_form(&presentation);
    let cokernel = HomologyGroup {
        rank: nt + tg.rank - snf.rank(),
        torsion: snf.torsion(),
    };
    let generator_images = images
        .into_iter()
        .map(|class| GeneratorImage {
            order: element_order(&class, tg),
            class,
        })
        .collect();
    HomologyMapDescription {
        source_degree: source.degree,
        target_degree: target.degree,
        source: sg.clone(),
        target: tg.clone(),
        matrix,
        generator_images,
        kernel_rank,
        cokernel,
    }
}

/// Pushes every source generator through a chain-level map.
fn push_generators(
    source: &HomologyBasis,
    target: &HomologyBasis,
    mut chain_map: impl FnMut(&[BigInt]) -> Vec<BigInt>,
) -> Result<Vec<HomologyClass>> {
    let gens = (0..source.free_generators.len())
        .map(|i| source.free_generator_dense(i))
        .chain((0..source.torsion_generators.len()).map(|i| source.torsion_generator_dense(i)));
    gens.map(|g| {
        target
            .coordinates(&chain_map(&g))
            .ok_or_else(|| Error::InvalidInput("chain map does not send cycles to cycles".into()))
    })
    .collect()
}

/// Matrix in degree `k` of the chain map induced by `f` between two chain
/// bases; simplices sent outside the target basis contribute zero.
pub fn chain_map_matrix(
    source: &SimplicialChains,
    target: &SimplicialChains,
    f: &SimplicialMap,
    k: usize,
) -> SparseIntMatrix {
    let triplets = source.basis[k].iter().enumerate().filter_map(|(col, &s)| {
        target
            .position_of(k, f.apply(k, s as usize))
            .map(|row| (row, col, BigInt::one()))
    });
    SparseIntMatrix::from_triplets(target.basis[k].len(), source.basis[k].len(), triplets)
}

/// Same-space chain map between two regions of one simplicial set.
fn region_map_matrix(
    source: &SimplicialChains,
    target: &SimplicialChains,
    k: usize,
) -> SparseIntMatrix {
    let triplets = source.basis[k].iter().enumerate().filter_map(|(col, &s)| {
        target
            .position_of(k, s as usize)
            .map(|row| (row, col, BigInt::one()))
    });
    SparseIntMatrix::from_triplets(target.basis[k].len(), source.basis[k].len(), triplets)
}

pub fn induced_map_between(
    source: &SimplicialChains,
    target: &SimplicialChains,
    f: &SimplicialMap,
    k: usize,
) -> Result<HomologyMapDescription> {
    let sb = HomologyBasis::new(&source.complex, k);
    let tb = HomologyBasis::new(&target.complex, k);
    let m = chain_map_matrix(source, target, f, k);
    let images = push_generators(&sb, &tb, |g| m.mul_vec(g))?;
    Ok(describe_map(&sb, &tb, images))
}

/// The map on `H_k` (reduced when asked) induced by a simplicial map.
pub fn induced_map(f: &SimplicialMap, k: usize, reduced: bool) -> Result<HomologyMapDescription> {
    if k > f.trunc() {
        return Err(Error::InvalidInput(format!(
            "degree {k} above the stored levels"
        )));
    }
    let source = chains_on(&f.source, None, reduced, k);
    let target = chains_on(&f.target, None, reduced, k);
    induced_map_between(&source, &target, f, k)
}

fn and_not(a: &[Vec<bool>], b: Option<&[Vec<bool>]>) -> Vec<Vec<bool>> {
    a.iter()
        .enumerate()
        .map(|(k, m)| {
            m.iter()
                .enumerate()
                .map(|(s, &x)| x && !b.is_some_and(|b| b[k][s]))
                .collect()
        })
        .collect()
}

fn complement(a: &[Vec<bool>]) -> Vec<Vec<bool>> {
    a.iter().map(|m| m.iter().map(|&b| !b).collect()).collect()
}

/// Connecting map `H_k(X, B) -> H_{k-1}(B, A)` for sub-simplicial sets
/// `A ⊂ B ⊂ X` given as masks (`A` may be absent). Without `A` and with
/// `reduced`, the target is the reduced homology of `B`.
pub fn connecting_map_regions(
    x: &SimplicialSet,
    inner: Option<&[Vec<bool>]>,
    middle: &[Vec<bool>],
    k: usize,
    reduced: bool,
) -> Result<HomologyMapDescription> {
    if k == 0 || k > x.trunc() {
        return Err(Error::InvalidInput(format!(
            "connecting map needs 1 <= k <= {}",
            x.trunc()
        )));
    }
    x.check_closed(middle)?;
    if let Some(a) = inner {
        x.check_closed(a)?;
        if a.iter()
            .zip(middle)
            .any(|(am, bm)| am.iter().zip(bm).any(|(&ai, &bi)| ai && !bi))
        {
            return Err(Error::InvalidInput(
                "inner subspace is not contained in the middle one".into(),
            ));
        }
    }
    let augmented = reduced && inner.is_none();
    let all: Vec<Vec<bool>> = x.sizes().iter().map(|&s| vec![true; s]).collect();
    let total_region = and_not(&all, inner);
    let sub_region = and_not(middle, inner);
    let rel_region = complement(middle);
    let total = chains_on(x, Some(&total_region), augmented, k);
    let sub = chains_on(x, Some(&sub_region), augmented, k - 1);
    let rel = chains_on(x, Some(&rel_region), false, k);

    let rb = HomologyBasis::new(&rel.complex, k);
    let sb = HomologyBasis::new(&sub.complex, k - 1);
    let lift = region_map_matrix(&rel, &total, k);
    let boundary = &total.complex.differentials[k];
    let restrict = region_map_matrix(&total, &sub, k - 1);
    let embed = region_map_matrix(&sub, &total, k - 1);
    let mut escaped = false;
    let images = push_generators(&rb, &sb, |g| {
        let b = boundary.mul_vec(&lift.mul_vec(g));
        let r = restrict.mul_vec(&b);
        // the boundary of a relative cycle must lie in the middle region
        if embed.mul_vec(&r) != b {
            escaped = true;
        }
        r
    })?;
    if escaped {
        return Err(Error::InvalidInput(
            "relative cycle has boundary outside the subspace".into(),
        ));
    }
    Ok(describe_map(&rb, &sb, images))
}

/// `∂ : H̃_k(X/A) -> H̃_{k-1}(A)` for a sub-simplicial set `A` of `X`.
pub fn connecting_map(
    x: &SimplicialSet,
    a: &SimplicialMap,
    k: usize,
) -> Result<HomologyMapDescription> {
    if *a.target != *x || !a.is_injective() {
        return Err(Error::InvalidInput(
            "subspace map must be an injection into the space".into(),
        ));
    }
    connecting_map_regions(x, None, &a.image_masks(), k, true)
}

/// `∂ : H_k(X, B) -> H_{k-1}(B, A)` for `A ⊂ B ⊂ X`, both maps into `X`.
pub fn connecting_map_triple(
    x: &SimplicialSet,
    b: &SimplicialMap,
    a: &SimplicialMap,
    k: usize,
) -> Result<HomologyMapDescription> {
    for m in [a, b] {
        if *m.target != *x || !m.is_injective() {
            return Err(Error::InvalidInput(
                "subspace maps must be injections into the space".into(),
            ));
        }
    }
    let inner = a.image_masks();
    connecting_map_regions(x, Some(&inner), &b.image_masks(), k, false)
}

/// Rank bookkeeping of the long exact sequence of a pair.
#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub exact: bool,
    pub first_failure: Option<String>,
    /// Per degree: the groups of `A`, `X` and `(X, A)`.
    pub groups: Vec<[HomologyGroup; 3]>,
    /// Per degree: free ranks of `i_k`, `j_k` and `∂_k` (`∂_0 = 0`).
    pub map_ranks: Vec<[usize; 3]>,
}

/// Checks rank-exactness of the long exact sequence of `(X, A)` in degrees
/// `0..=maxdeg`, with `A` given as a mask (absent means empty).
pub fn les_check_masks(
    x: &SimplicialSet,
    sub: Option<&[Vec<bool>]>,
    maxdeg: usize,
) -> Result<LesReport> {
    let maxdeg = maxdeg.min(x.trunc().saturating_sub(1));
    let empty: Vec<Vec<bool>> = x.sizes().iter().map(|&s| vec![false; s]).collect();
    let a_mask = sub.unwrap_or(&empty);
    x.check_closed(a_mask)?;
    let a = chains_on(x, Some(a_mask), false, maxdeg);
    let whole = chains_on(x, None, false, maxdeg);
    let rel = chains_on(x, Some(&complement(a_mask)), false, maxdeg);

    let mut groups = Vec::new();
    let mut map_ranks = Vec::new();
    for k in 0..=maxdeg {
        let ab = HomologyBasis::new(&a.complex, k);
        let xb = HomologyBasis::new(&whole.complex, k);
        let rb = HomologyBasis::new(&rel.complex, k);
        let inc = region_map_matrix(&a, &whole, k);
        let proj = region_map_matrix(&whole, &rel, k);
        let i_k = describe_map(&ab, &xb, push_generators(&ab, &xb, |g| inc.mul_vec(g))?);
        let j_k = describe_map(&xb, &rb, push_generators(&xb, &rb, |g| proj.mul_vec(g))?);
        groups.push([ab.group.clone(), xb.group.clone(), rb.group.clone()]);
        map_ranks.push([i_k.free_rank(), j_k.free_rank(), 0]);
    }
    for k in 1..=maxdeg {
        let d = connecting_map_regions(x, None, a_mask, k, false)?;
        map_ranks[k][2] = d.free_rank();
    }
    let mut first_failure = None;
    for k in (0..=maxdeg).rev() {
        let [ga, gx, gr] = &groups[k];
        let [i, j, d] = map_ranks[k];
        let d_below = if k < maxdeg {
            Some(map_ranks[k + 1][2])
        } else {
            None
        };
        let checks = [("H_k(X)", i + j, gx.rank), ("H_k(X,A)", j + d, gr.rank)];
        for (node, lhs, rhs) in checks {
            if lhs != rhs && first_failure.is_none() {
                first_failure = Some(format!(
                    "{node} at k={k}: image rank + outgoing rank = {lhs}, group rank {rhs}"
                ));
            }
        }
        if let Some(d_in) = d_below {
            if d_in + i != ga.rank && first_failure.is_none() {
                first_failure = Some(format!("H_k(A) at k={k}: {d_in} + {i} != {}", ga.rank));
            }
        }
    }
    Ok(LesReport {
        exact: first_failure.is_none(),
        first_failure,
        groups,
        map_ranks,
    })
}

pub fn les_check(x: &SimplicialSet, a: &SimplicialMap, maxdeg: usize) -> Result<LesReport> {
    if *a.target != *x || !a.is_injective() {
        return Err(Error::InvalidInput(
            "subspace map must be an injection into the space".into(),
        ));
    }
    les_check_masks(x, Some(&a.image_masks()), maxdeg)
}
