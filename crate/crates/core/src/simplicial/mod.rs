//! Finite truncated simplicial sets stored as levelwise tables.
//!
//! A [`SimplicialSet`] keeps, for every level `k <= trunc`, the number of
//! `k`-simplices together with the face tables `d_i : X_k -> X_{k-1}` and the
//! degeneracy tables `s_j : X_k -> X_{k+1}`. Simplices are dense indices into
//! their level table.

mod builders;
mod io;
mod quotient;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builders::{point, product, sphere_model, torus_model};
pub use io::{load_space, parse_space, save_space, space_to_json, SpaceFile};
pub use quotient::quotient;

/// A simplex addressed by its level and its position in that level's table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplexRef {
    pub level: usize,
    pub index: usize,
}

impl SimplexRef {
    pub fn new(level: usize, index: usize) -> Self {
        Self { level, index }
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialSet {
    sizes: Vec<usize>,
    /// `faces[k][i][x]`, empty for `k = 0`.
    faces: Vec<Vec<Vec<u32>>>,
    /// `degeneracies[k][j][x]` for `k < trunc`.
    degeneracies: Vec<Vec<Vec<u32>>>,
    labels: Option<Vec<Vec<String>>>,
}

impl PartialEq for SimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.sizes == other.sizes
            && self.faces == other.faces
            && self.degeneracies == other.degeneracies
    }
}

impl Eq for SimplicialSet {}

impl SimplicialSet {
    /// Assembles a simplicial set from raw tables, checking shapes and index
    /// ranges. Simplicial identities are not checked here; see [`validate`].
    pub fn from_tables(
        sizes: Vec<usize>,
        faces: Vec<Vec<Vec<u32>>>,
        degeneracies: Vec<Vec<Vec<u32>>>,
        labels: Option<Vec<Vec<String>>>,
    ) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidInput(
                "a simplicial set needs at least level 0".into(),
            ));
        }
        let trunc = sizes.len() - 1;
        if faces.len() != trunc + 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} face levels, found {}",
                trunc + 1,
                faces.len()
            )));
        }
        if degeneracies.len() != trunc {
            return Err(Error::InvalidInput(format!(
                "expected {} degeneracy levels, found {}",
                trunc,
                degeneracies.len()
            )));
        }
        for (k, level) in faces.iter().enumerate() {
            let expected = if k == 0 { 0 } else { k + 1 };
            if level.len() != expected {
                return Err(Error::InvalidInput(format!(
                    "level {k} has {} face maps, expected {expected}",
                    level.len()
                )));
            }
            for (i, table) in level.iter().enumerate() {
                check_table(table, sizes[k], sizes[k - 1], &format!("faces[{k}][{i}]"))?;
            }
        }
        for (k, level) in degeneracies.iter().enumerate() {
            if level.len() != k + 1 {
                return Err(Error::InvalidInput(format!(
                    "level {k} has {} degeneracy maps, expected {}",
                    level.len(),
                    k + 1
                )));
            }
            for (j, table) in level.iter().enumerate() {
                check_table(
                    table,
                    sizes[k],
                    sizes[k + 1],
                    &format!("degeneracies[{k}][{j}]"),
                )?;
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != sizes.len() || labels.iter().zip(&sizes).any(|(l, &s)| l.len() != s)
            {
                return Err(Error::InvalidInput(
                    "label table shape does not match levels".into(),
                ));
            }
        }
        Ok(Self {
            sizes,
            faces,
            degeneracies,
            labels,
        })
    }

    /// Builds tables from canonical keys. Each level's keys must be distinct;
    /// the face and degeneracy closures must return keys present one level
    /// down (resp. up).
    pub(crate) fn from_keyed_levels<K, F, D>(levels: &[Vec<K>], face: F, degeneracy: D) -> Self
    where
        K: Eq + Hash + Clone,
        F: Fn(usize, usize, &K) -> K,
        D: Fn(usize, usize, &K) -> K,
    {
        let lookup: Vec<HashMap<&K, u32>> = levels
            .iter()
            .map(|keys| {
                keys.iter()
                    .enumerate()
                    .map(|(i, key)| (key, i as u32))
                    .collect()
            })
            .collect();
        let trunc = levels.len() - 1;
        let mut faces = vec![Vec::new()];
        for k in 1..=trunc {
            let tables = (0..=k)
                .map(|i| {
                    levels[k]
                        .iter()
                        .map(|key| lookup[k - 1][&face(k, i, key)])
                        .collect()
                })
                .collect();
            faces.push(tables);
        }
        let mut degeneracies = Vec::with_capacity(trunc);
        for k in 0..trunc {
            let tables = (0..=k)
                .map(|j| {
                    levels[k]
                        .iter()
                        .map(|key| lookup[k + 1][&degeneracy(k, j, key)])
                        .collect()
                })
                .collect();
            degeneracies.push(tables);
        }
        Self {
            sizes: levels.iter().map(Vec::len).collect(),
            faces,
            degeneracies,
            labels: None,
        }
    }

    pub fn trunc(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn level_size(&self, k: usize) -> usize {
        self.sizes[k]
    }

    pub fn face(&self, k: usize, i: usize, x: usize) -> usize {
        self.faces[k][i][x] as usize
    }

    pub fn degeneracy(&self, k: usize, j: usize, x: usize) -> usize {
        self.degeneracies[k][j][x] as usize
    }

    pub fn face_table(&self, k: usize, i: usize) -> &[u32] {
        &self.faces[k][i]
    }

    pub fn degeneracy_table(&self, k: usize, j: usize) -> &[u32] {
        &self.degeneracies[k][j]
    }

    pub fn labels(&self) -> Option<&Vec<Vec<String>>> {
        self.labels.as_ref()
    }

    pub fn label(&self, k: usize, x: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[k][x].as_str())
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.sizes.len()
            || labels.iter().zip(&self.sizes).any(|(l, &s)| l.len() != s)
        {
            return Err(Error::InvalidInput(
                "label table shape does not match levels".into(),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Drops every level above `trunc`.
    pub fn truncate(&self, trunc: usize) -> SimplicialSet {
        let trunc = trunc.min(self.trunc());
        SimplicialSet {
            sizes: self.sizes[..=trunc].to_vec(),
            faces: self.faces[..=trunc].to_vec(),
            degeneracies: self.degeneracies[..trunc].to_vec(),
            labels: self.labels.as_ref().map(|l| l[..=trunc].to_vec()),
        }
    }

    /// `true` at every level-`k` simplex that is not in the image of a degeneracy.
    pub fn nondegenerate_mask(&self, k: usize) -> Vec<bool> {
        let mut mask = vec![true; self.sizes[k]];
        if k > 0 {
            for table in &self.degeneracies[k - 1] {
                for &y in table {
                    mask[y as usize] = false;
                }
            }
        }
        mask
    }

    pub fn nondegenerate(&self, k: usize) -> Vec<SimplexRef> {
        self.nondegenerate_mask(k)
            .into_iter()
            .enumerate()
            .filter(|&(_, nd)| nd)
            .map(|(index, _)| SimplexRef::new(k, index))
            .collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.trunc())
            .map(|k| {
                self.nondegenerate_mask(k)
                    .into_iter()
                    .filter(|&b| b)
                    .count()
            })
            .collect()
    }

    /// Alternating sum of non-degenerate counts over the stored levels.
    pub fn euler_characteristic(&self) -> i64 {
        self.nondegenerate_counts()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// The iterated degeneracy `s_0 ... s_0 x` of a vertex at level `k`.
    pub fn total_degeneracy(&self, vertex: usize, k: usize) -> usize {
        (0..k).fold(vertex, |x, level| self.degeneracy(level, 0, x))
    }

    /// Sub-simplicial set spanned by the marked simplices, with its inclusion.
    /// Fails if the marked set is not closed under faces and degeneracies.
    pub fn restrict(
        self: &Arc<Self>,
        keep: &[Vec<bool>],
    ) -> Result<(Arc<SimplicialSet>, SimplicialMap)> {
        let trunc = self.trunc();
        if keep.len() != trunc + 1 || keep.iter().zip(&self.sizes).any(|(m, &s)| m.len() != s) {
            return Err(Error::InvalidInput(
                "mask shape does not match the space".into(),
            ));
        }
        let mut index_of: Vec<Vec<u32>> = Vec::with_capacity(trunc + 1);
        let mut members: Vec<Vec<u32>> = Vec::with_capacity(trunc + 1);
        for mask in keep {
            let mut idx = vec![u32::MAX; mask.len()];
            let mut mem = Vec::new();
            for (x, &kept) in mask.iter().enumerate() {
                if kept {
                    idx[x] = mem.len() as u32;
                    mem.push(x as u32);
                }
            }
            index_of.push(idx);
            members.push(mem);
        }
        let not_closed = |what: &str, k: usize, x: u32| {
            Error::InvalidInput(format!(
                "subset is not closed under {what}: simplex ({k}, {x}) maps outside"
            ))
        };
        let mut faces = vec![Vec::new()];
        for k in 1..=trunc {
            let mut level = Vec::with_capacity(k + 1);
            for i in 0..=k {
                let mut table = Vec::with_capacity(members[k].len());
                for &x in &members[k] {
                    let y = index_of[k - 1][self.faces[k][i][x as usize] as usize];
                    if y == u32::MAX {
                        return Err(not_closed("faces", k, x));
                    }
                    table.push(y);
                }
                level.push(table);
            }
            faces.push(level);
        }
        let mut degeneracies = Vec::with_capacity(trunc);
        for k in 0..trunc {
            let mut level = Vec::with_capacity(k + 1);
            for j in 0..=k {
                let mut table = Vec::with_capacity(members[k].len());
                for &x in &members[k] {
                    let y = index_of[k + 1][self.degeneracies[k][j][x as usize] as usize];
                    if y == u32::MAX {
                        return Err(not_closed("degeneracies", k, x));
                    }
                    table.push(y);
                }
                level.push(table);
            }
            degeneracies.push(level);
        }
        let labels = self.labels.as_ref().map(|labels| {
            members
                .iter()
                .enumerate()
                .map(|(k, mem)| mem.iter().map(|&x| labels[k][x as usize].clone()).collect())
                .collect()
        });
        let sub = SimplicialSet {
            sizes: members.iter().map(Vec::len).collect(),
            faces,
            degeneracies,
            labels,
        };
        let sub = Arc::new(sub);
        let map = SimplicialMap {
            source: sub.clone(),
            target: self.clone(),
            maps: members,
        };
        Ok((sub, map))
    }

    /// Checks that a mask marks a sub-simplicial set.
    pub fn check_closed(&self, mask: &[Vec<bool>]) -> Result<()> {
        let trunc = self.trunc();
        if mask.len() != trunc + 1 || mask.iter().zip(&self.sizes).any(|(m, &s)| m.len() != s) {
            return Err(Error::InvalidInput(
                "mask shape does not match the space".into(),
            ));
        }
        for k in 0..=trunc {
            for x in (0..self.sizes[k]).filter(|&x| mask[k][x]) {
                let faces_ok = k == 0 || (0..=k).all(|i| mask[k - 1][self.face(k, i, x)]);
                let degens_ok =
                    k == trunc || (0..=k).all(|j| mask[k + 1][self.degeneracy(k, j, x)]);
                if !faces_ok || !degens_ok {
                    return Err(Error::InvalidInput(format!(
                        "subset is not closed under structure maps at simplex ({k}, {x})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest sub-simplicial set containing the seeds: close downward under
    /// faces, then upward under degeneracies.
    pub fn closure(&self, seeds: &[SimplexRef]) -> Vec<Vec<bool>> {
        let trunc = self.trunc();
        let mut mask: Vec<Vec<bool>> = self.sizes.iter().map(|&s| vec![false; s]).collect();
        for seed in seeds {
            mask[seed.level][seed.index] = true;
        }
        for k in (1..=trunc).rev() {
            for x in 0..self.sizes[k] {
                if mask[k][x] {
                    for i in 0..=k {
                        mask[k - 1][self.face(k, i, x)] = true;
                    }
                }
            }
        }
        for k in 0..trunc {
            for x in 0..self.sizes[k] {
                if mask[k][x] {
                    for j in 0..=k {
                        mask[k + 1][self.degeneracy(k, j, x)] = true;
                    }
                }
            }
        }
        mask
    }
}

fn check_table(table: &[u32], len: usize, range: usize, field: &str) -> Result<()> {
    if table.len() != len {
        return Err(Error::InvalidInput(format!(
            "{field} has {} entries, expected {len}",
            table.len()
        )));
    }
    if let Some(pos) = table.iter().position(|&y| y as usize >= range) {
        return Err(Error::InvalidInput(format!(
            "{field}[{pos}] = {} is out of range (level size {range})",
            table[pos]
        )));
    }
    Ok(())
}

/// A simplicial set with a chosen vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedSimplicialSet {
    pub space: Arc<SimplicialSet>,
    pub basepoint: usize,
}

impl BasedSimplicialSet {
    pub fn new(space: impl Into<Arc<SimplicialSet>>, basepoint: usize) -> Result<Self> {
        let space = space.into();
        if basepoint >= space.level_size(0) {
            return Err(Error::InvalidInput(format!(
                "basepoint {basepoint} out of range (level 0 has {} vertices)",
                space.level_size(0)
            )));
        }
        Ok(Self { space, basepoint })
    }

    pub fn trunc(&self) -> usize {
        self.space.trunc()
    }

    /// Index of the totally degenerate basepoint simplex at level `k`.
    pub fn basepoint_at(&self, k: usize) -> usize {
        self.space.total_degeneracy(self.basepoint, k)
    }

    /// The basepoint as a sub-simplicial set, one simplex per level.
    pub fn basepoint_inclusion(&self) -> SimplicialMap {
        let pt = Arc::new(point(self.trunc()));
        let maps = (0..=self.trunc())
            .map(|k| vec![self.basepoint_at(k) as u32])
            .collect();
        SimplicialMap {
            source: pt,
            target: self.space.clone(),
            maps,
        }
    }

    pub fn truncate(&self, trunc: usize) -> BasedSimplicialSet {
        BasedSimplicialSet {
            space: Arc::new(self.space.truncate(trunc)),
            basepoint: self.basepoint,
        }
    }
}

/// A levelwise map of simplicial sets.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: Arc<SimplicialSet>,
    pub target: Arc<SimplicialSet>,
    maps: Vec<Vec<u32>>,
}

impl SimplicialMap {
    pub fn new(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        maps: Vec<Vec<u32>>,
    ) -> Result<Self> {
        if maps.len() != source.trunc() + 1 || target.trunc() < source.trunc() {
            return Err(Error::InvalidInput(
                "map levels do not match source truncation".into(),
            ));
        }
        for (k, table) in maps.iter().enumerate() {
            check_table(
                table,
                source.level_size(k),
                target.level_size(k),
                &format!("map[{k}]"),
            )?;
        }
        Ok(Self {
            source,
            target,
            maps,
        })
    }

    pub fn identity(space: Arc<SimplicialSet>) -> Self {
        let maps = space
            .sizes()
            .iter()
            .map(|&s| (0..s as u32).collect())
            .collect();
        Self {
            source: space.clone(),
            target: space,
            maps,
        }
    }

    pub fn apply(&self, k: usize, x: usize) -> usize {
        self.maps[k][x] as usize
    }

    pub fn table(&self, k: usize) -> &[u32] {
        &self.maps[k]
    }

    pub fn trunc(&self) -> usize {
        self.maps.len() - 1
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        if !Arc::ptr_eq(&self.target, &other.source) && *self.target != *other.source {
            return Err(Error::InvalidInput("maps are not composable".into()));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(k, table)| table.iter().map(|&x| other.maps[k][x as usize]).collect())
            .collect();
        Ok(SimplicialMap {
            source: self.source.clone(),
            target: other.target.clone(),
            maps,
        })
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().enumerate().all(|(k, table)| {
            let mut seen = vec![false; self.target.level_size(k)];
            table
                .iter()
                .all(|&y| !std::mem::replace(&mut seen[y as usize], true))
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().enumerate().all(|(k, table)| {
            let mut seen = vec![false; self.target.level_size(k)];
            for &y in table {
                seen[y as usize] = true;
            }
            seen.into_iter().all(|b| b)
        })
    }

    /// Per-level masks of the image in the target.
    pub fn image_masks(&self) -> Vec<Vec<bool>> {
        (0..=self.trunc())
            .map(|k| {
                let mut mask = vec![false; self.target.level_size(k)];
                for &y in &self.maps[k] {
                    mask[y as usize] = true;
                }
                mask
            })
            .collect()
    }

    /// Checks that the map commutes with every stored face and degeneracy.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let (src, tgt) = (&self.source, &self.target);
        for k in 0..=self.trunc() {
            for x in 0..src.level_size(k) {
                if k > 0 {
                    for i in 0..=k {
                        if self.apply(k - 1, src.face(k, i, x)) != tgt.face(k, i, self.apply(k, x))
                        {
                            violations.push(Violation::new("f d_i = d_i f", k, x, i, i));
                        }
                    }
                }
                if k < self.trunc() {
                    for j in 0..=k {
                        if self.apply(k + 1, src.degeneracy(k, j, x))
                            != tgt.degeneracy(k, j, self.apply(k, x))
                        {
                            violations.push(Violation::new("f s_j = s_j f", k, x, j, j));
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }
}

/// One failed identity, located by level and simplex index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: &'static str,
    pub level: usize,
    pub index: usize,
    pub i: usize,
    pub j: usize,
}

impl Violation {
    fn new(identity: &'static str, level: usize, index: usize, i: usize, j: usize) -> Self {
        Self {
            identity,
            level,
            index,
            i,
            j,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} with i={}, j={} fails at level {} simplex {}",
            self.identity, self.i, self.j, self.level, self.index
        )
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(first) => Err(Error::Validation {
                count: self.violations.len(),
                first: first.to_string(),
            }),
        }
    }
}

/// Checks every simplicial identity on every stored simplex.
pub fn validate(x: &SimplicialSet) -> ValidationReport {
    let trunc = x.trunc();
    let mut violations = Vec::new();
    for k in 0..=trunc {
        for s in 0..x.level_size(k) {
            // d_i d_j = d_{j-1} d_i for i < j
            if k >= 2 {
                for j in 1..=k {
                    for i in 0..j {
                        if x.face(k - 1, i, x.face(k, j, s))
                            != x.face(k - 1, j - 1, x.face(k, i, s))
                        {
                            violations.push(Violation::new("d_i d_j = d_{j-1} d_i", k, s, i, j));
                        }
                    }
                }
            }
            // s_i s_j = s_{j+1} s_i for i <= j
            if k + 2 <= trunc {
                for j in 0..=k {
                    for i in 0..=j {
                        let lhs = x.degeneracy(k + 1, i, x.degeneracy(k, j, s));
                        let rhs = x.degeneracy(k + 1, j + 1, x.degeneracy(k, i, s));
                        if lhs != rhs {
                            violations.push(Violation::new("s_i s_j = s_{j+1} s_i", k, s, i, j));
                        }
                    }
                }
            }
            // mixed identities on s_j x
            if k < trunc {
                for j in 0..=k {
                    let sx = x.degeneracy(k, j, s);
                    for i in 0..=k + 1 {
                        let lhs = x.face(k + 1, i, sx);
                        let (rhs, name) = if i < j {
                            (
                                x.degeneracy(k - 1, j - 1, x.face(k, i, s)),
                                "d_i s_j = s_{j-1} d_i",
                            )
                        } else if i == j || i == j + 1 {
                            (s, "d_i s_j = id")
                        } else {
                            (
                                x.degeneracy(k - 1, j, x.face(k, i - 1, s)),
                                "d_i s_j = s_j d_{i-1}",
                            )
                        };
                        if lhs != rhs {
                            violations.push(Violation::new(name, k, s, i, j));
                        }
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}
