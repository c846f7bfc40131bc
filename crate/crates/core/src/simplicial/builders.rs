use std::sync::Arc;

use super::{BasedSimplicialSet, SimplicialSet};

/// The constant simplicial set with one simplex per level.
pub fn point(trunc: usize) -> SimplicialSet {
    let levels = vec![vec![()]; trunc + 1];
    SimplicialSet::from_keyed_levels(&levels, |_, _, _| (), |_, _, _| ())
}

/// `Δ[d]/∂Δ[d]`: one vertex (the basepoint) and one non-degenerate `d`-simplex.
///
/// Level `k` holds the collapsed simplex at index 0 followed by the monotone
/// surjections `[k] -> [d]` in lexicographic order of their value sequences.
pub fn sphere_model(d: usize, trunc: usize) -> BasedSimplicialSet {
    assert!(d >= 1, "sphere dimension must be positive");
    let levels: Vec<Vec<Option<Vec<u8>>>> = (0..=trunc)
        .map(|k| {
            let mut keys = vec![None];
            keys.extend(monotone_surjections(k, d).into_iter().map(Some));
            keys
        })
        .collect();
    let face = |_k: usize, i: usize, key: &Option<Vec<u8>>| {
        key.as_ref().and_then(|f| {
            let mut g = f.clone();
            g.remove(i);
            let surjective = g.first() == Some(&0)
                && g.last() == Some(&(d as u8))
                && g.windows(2).all(|w| w[1] - w[0] <= 1);
            surjective.then_some(g)
        })
    };
    let degeneracy = |_k: usize, j: usize, key: &Option<Vec<u8>>| {
        key.as_ref().map(|f| {
            let mut g = f.clone();
            g.insert(j, f[j]);
            g
        })
    };
    let labels = levels
        .iter()
        .map(|keys| {
            keys.iter()
                .map(|key| match key {
                    None => "*".to_string(),
                    Some(f) => f.iter().map(|v| v.to_string()).collect(),
                })
                .collect()
        })
        .collect();
    let space = SimplicialSet::from_keyed_levels(&levels, face, degeneracy)
        .with_labels(labels)
        .expect("label shape matches");
    BasedSimplicialSet {
        space: Arc::new(space),
        basepoint: 0,
    }
}

/// Non-decreasing sequences of length `k + 1` from 0 to `d` with unit steps.
fn monotone_surjections(k: usize, d: usize) -> Vec<Vec<u8>> {
    fn extend(prefix: &mut Vec<u8>, len: usize, d: u8, out: &mut Vec<Vec<u8>>) {
        let last = *prefix.last().unwrap();
        if prefix.len() == len {
            if last == d {
                out.push(prefix.clone());
            }
            return;
        }
        let remaining = len - prefix.len();
        for step in 0..=1u8 {
            let next = last + step;
            if next <= d && ((d - next) as usize) < remaining {
                prefix.push(next);
                extend(prefix, len, d, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k >= d {
        extend(&mut vec![0], k + 1, d as u8, &mut out);
    }
    out
}

/// Levelwise product, truncated at the smaller truncation. The pair `(a, b)`
/// sits at index `a * |Y_k| + b`.
pub fn product(x: &SimplicialSet, y: &SimplicialSet) -> SimplicialSet {
    let trunc = x.trunc().min(y.trunc());
    let sizes: Vec<usize> = (0..=trunc)
        .map(|k| x.level_size(k) * y.level_size(k))
        .collect();
    let pair = |k: usize, a: usize, b: usize| (a * y.level_size(k) + b) as u32;
    let mut faces = vec![Vec::new()];
    for k in 1..=trunc {
        let ny = y.level_size(k);
        faces.push(
            (0..=k)
                .map(|i| {
                    (0..sizes[k])
                        .map(|p| pair(k - 1, x.face(k, i, p / ny), y.face(k, i, p % ny)))
                        .collect()
                })
                .collect(),
        );
    }
    let mut degeneracies = Vec::with_capacity(trunc);
    for k in 0..trunc {
        let ny = y.level_size(k);
        degeneracies.push(
            (0..=k)
                .map(|j| {
                    (0..sizes[k])
                        .map(|p| {
                            pair(
                                k + 1,
                                x.degeneracy(k, j, p / ny),
                                y.degeneracy(k, j, p % ny),
                            )
                        })
                        .collect()
                })
                .collect(),
        );
    }
    let labels = match (x.labels(), y.labels()) {
        (Some(lx), Some(ly)) => Some(
            (0..=trunc)
                .map(|k| {
                    let ny = y.level_size(k);
                    (0..sizes[k])
                        .map(|p| format!("({},{})", lx[k][p / ny], ly[k][p % ny]))
                        .collect()
                })
                .collect(),
        ),
        _ => None,
    };
    SimplicialSet::from_tables(sizes, faces, degeneracies, labels)
        .expect("product tables are well formed")
}

/// `S^1 × S^1` based at the pair of basepoints.
pub fn torus_model(trunc: usize) -> BasedSimplicialSet {
    let circle = sphere_model(1, trunc);
    let space = product(&circle.space, &circle.space);
    let basepoint = circle.basepoint * circle.space.level_size(0) + circle.basepoint;
    BasedSimplicialSet {
        space: Arc::new(space),
        basepoint,
    }
}
