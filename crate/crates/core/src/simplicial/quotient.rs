use std::sync::Arc;

use super::{BasedSimplicialSet, SimplicialMap, SimplicialSet};
use crate::error::{Error, Result};

/// Collapses the image of `sub` to a single simplex per level.
///
/// The collapsed class sits at index 0 of every level and is the basepoint of
/// the result; the remaining simplices keep their relative order. Also returns
/// the quotient map `X -> X/A`.
pub fn quotient(
    x: &Arc<SimplicialSet>,
    sub: &SimplicialMap,
) -> Result<(BasedSimplicialSet, SimplicialMap)> {
    if !Arc::ptr_eq(&sub.target, x) && *sub.target != **x {
        return Err(Error::InvalidInput(
            "subspace map does not land in the space".into(),
        ));
    }
    if sub.trunc() != x.trunc() {
        return Err(Error::InvalidInput(
            "subspace must be stored at every level of the space".into(),
        ));
    }
    if !sub.is_injective() {
        return Err(Error::InvalidInput("subspace map is not injective".into()));
    }
    let image = sub.image_masks();
    let trunc = x.trunc();
    for k in 0..=trunc {
        for s in (0..x.level_size(k)).filter(|&s| image[k][s]) {
            let faces_ok = k == 0 || (0..=k).all(|i| image[k - 1][x.face(k, i, s)]);
            let degens_ok = k == trunc || (0..=k).all(|j| image[k + 1][x.degeneracy(k, j, s)]);
            if !faces_ok || !degens_ok {
                return Err(Error::InvalidInput(format!(
                    "image is not closed under structure maps at level {k} simplex {s}"
                )));
            }
        }
    }

    // class 0 is the collapsed image, everything else is renumbered from 1
    let projection: Vec<Vec<u32>> = image
        .iter()
        .map(|mask| {
            let mut next = 0u32;
            mask.iter()
                .map(|&collapsed| {
                    if collapsed {
                        0
                    } else {
                        next += 1;
                        next
                    }
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = image
        .iter()
        .map(|mask| 1 + mask.iter().filter(|&&c| !c).count())
        .collect();
    let survivors: Vec<Vec<usize>> = image
        .iter()
        .map(|mask| (0..mask.len()).filter(|&s| !mask[s]).collect())
        .collect();

    let mut faces = vec![Vec::new()];
    for k in 1..=trunc {
        faces.push(
            (0..=k)
                .map(|i| {
                    std::iter::once(0)
                        .chain(
                            survivors[k]
                                .iter()
                                .map(|&s| projection[k - 1][x.face(k, i, s)]),
                        )
                        .collect()
                })
                .collect(),
        );
    }
    let mut degeneracies = Vec::with_capacity(trunc);
    for k in 0..trunc {
        degeneracies.push(
            (0..=k)
                .map(|j| {
                    std::iter::once(0)
                        .chain(
                            survivors[k]
                                .iter()
                                .map(|&s| projection[k + 1][x.degeneracy(k, j, s)]),
                        )
                        .collect()
                })
                .collect(),
        );
    }
    let labels = x.labels().map(|labels| {
        survivors
            .iter()
            .enumerate()
            .map(|(k, surv)| {
                std::iter::once("*".to_string())
                    .chain(surv.iter().map(|&s| labels[k][s].clone()))
                    .collect()
            })
            .collect()
    });
    let q = Arc::new(SimplicialSet::from_tables(
        sizes,
        faces,
        degeneracies,
        labels,
    )?);
    let map = SimplicialMap::new(x.clone(), q.clone(), projection)?;
    Ok((
        BasedSimplicialSet {
            space: q,
            basepoint: 0,
        },
        map,
    ))
}
