//! Finite subset spaces built levelwise.
//!
//! Level `k` of `exp_n X` is the set of non-empty subsets of `X_k` with at most
//! `n` elements; faces and degeneracies act memberwise, so a face may shrink a
//! subset. Subsets are kept as sorted index lists and each level is ordered
//! lexicographically (a proper prefix comes before its extensions).

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{quotient, BasedSimplicialSet, SimplicialMap, SimplicialSet};

/// Default ceiling on the number of simplices in a single level.
pub const DEFAULT_LEVEL_CEILING: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfModel {
    /// `exp_{n+1}(X,*) / exp_n(X,*)`
    Based,
    /// `exp̄_n X / exp̄_{n-1} X`
    Bar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerVariant {
    Exp,
    Based,
    Bar,
}

/// Subsets of one level, flattened.
#[derive(Clone, Debug, Default)]
struct SubsetTable {
    offsets: Vec<u32>,
    data: Vec<u32>,
}

impl SubsetTable {
    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn get(&self, s: usize) -> &[u32] {
        &self.data[self.offsets[s] as usize..self.offsets[s + 1] as usize]
    }

    /// All non-empty sorted subsets of `0..universe` of size at most `n`,
    /// in lexicographic order.
    fn enumerate(universe: usize, n: usize) -> Self {
        let mut table = SubsetTable {
            offsets: vec![0],
            data: Vec::new(),
        };
        let mut stack: Vec<u32> = Vec::with_capacity(n);
        fn walk(
            start: usize,
            universe: usize,
            n: usize,
            stack: &mut Vec<u32>,
            table: &mut SubsetTable,
        ) {
            for v in start..universe {
                stack.push(v as u32);
                table.data.extend_from_slice(stack);
                table.offsets.push(table.data.len() as u32);
                if stack.len() < n {
                    walk(v + 1, universe, n, stack, table);
                }
                stack.pop();
            }
        }
        walk(0, universe, n, &mut stack, &mut table);
        table
    }
}

/// Lexicographic rank of a sorted subset among all subsets of size `1..=n`.
#[derive(Clone, Debug)]
struct SubsetRanker {
    n: usize,
    /// `before[r][v]`: number of sequences with at most `r` elements whose
    /// first element is smaller than `v`.
    before: Vec<Vec<u64>>,
}

impl SubsetRanker {
    fn new(universe: usize, n: usize) -> Self {
        let binom = binomial_table(universe);
        let mut before = vec![Vec::new(); n + 1];
        for (r, row) in before.iter_mut().enumerate().skip(1) {
            row.push(0);
            for v in 0..universe {
                let rest = universe - 1 - v;
                let starting_at_v: u64 = (0..r).map(|j| binom_at(&binom, rest, j)).sum();
                let prev = *row.last().unwrap();
                row.push(prev + starting_at_v);
            }
        }
        Self { n, before }
    }

    fn rank(&self, subset: &[u32]) -> usize {
        let mut rank = 0u64;
        let mut next = 0usize;
        for (i, &v) in subset.iter().enumerate() {
            let row = &self.before[self.n - i];
            rank += u64::from(i > 0) + row[v as usize] - row[next];
            next = v as usize + 1;
        }
        rank as usize
    }
}

fn binomial_table(n: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut row = vec![1u64; m + 1];
        for j in 1..m {
            row[j] = rows[m - 1][j - 1].saturating_add(rows[m - 1][j]);
        }
        rows.push(row);
    }
    rows
}

fn binom_at(table: &[Vec<u64>], m: usize, j: usize) -> u64 {
    if j > m {
        0
    } else {
        table[m][j]
    }
}

/// Number of non-empty subsets of size at most `n` of a `universe`-element set.
pub fn subset_count(universe: usize, n: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for j in 1..=n.min(universe) {
        c = c * (universe + 1 - j) as u128 / j as u128;
        total += c;
    }
    total
}

/// `exp_n X` together with the member lists of its simplices.
#[derive(Clone, Debug)]
pub struct SubsetSpace {
    pub base: BasedSimplicialSet,
    pub n: usize,
    pub space: BasedSimplicialSet,
    tables: Vec<SubsetTable>,
    base_at: Vec<u32>,
}

impl SubsetSpace {
    pub fn build(x: &BasedSimplicialSet, n: usize, trunc: usize) -> Result<Self> {
        Self::build_with_ceiling(x, n, trunc, DEFAULT_LEVEL_CEILING)
    }

    pub fn build_with_ceiling(
        x: &BasedSimplicialSet,
        n: usize,
        trunc: usize,
        ceiling: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "finite subset spaces need n >= 1".into(),
            ));
        }
        if trunc > x.trunc() {
            return Err(Error::InvalidInput(format!(
                "requested truncation {trunc} exceeds the base space truncation {}",
                x.trunc()
            )));
        }
        let xs = &x.space;
        for k in 0..=trunc {
            let needed = subset_count(xs.level_size(k), n);
            if needed > ceiling as u128 {
                return Err(Error::Budget {
                    what: format!("level {k} of exp_{n} (simplices)"),
                    needed,
                    ceiling: ceiling as u128,
                });
            }
        }
        let tables: Vec<SubsetTable> = (0..=trunc)
            .into_par_iter()
            .map(|k| SubsetTable::enumerate(xs.level_size(k), n))
            .collect();
        let rankers: Vec<SubsetRanker> = (0..=trunc)
            .into_par_iter()
            .map(|k| SubsetRanker::new(xs.level_size(k), n))
            .collect();

        let image =
            |table: &SubsetTable, ranker: &SubsetRanker, f: &dyn Fn(u32) -> u32| -> Vec<u32> {
                let mut buf = Vec::with_capacity(n);
                (0..table.len())
                    .map(|s| {
                        buf.clear();
                        buf.extend(table.get(s).iter().map(|&m| f(m)));
                        buf.sort_unstable();
                        buf.dedup();
                        ranker.rank(&buf) as u32
                    })
                    .collect()
            };

        let faces: Vec<Vec<Vec<u32>>> = (0..=trunc)
            .into_par_iter()
            .map(|k| {
                if k == 0 {
                    return Vec::new();
                }
                (0..=k)
                    .map(|i| {
                        let face = xs.face_table(k, i);
                        image(&tables[k], &rankers[k - 1], &|m| face[m as usize])
                    })
                    .collect()
            })
            .collect();
        let degeneracies: Vec<Vec<Vec<u32>>> = (0..trunc)
            .into_par_iter()
            .map(|k| {
                (0..=k)
                    .map(|j| {
                        let degen = xs.degeneracy_table(k, j);
                        image(&tables[k], &rankers[k + 1], &|m| degen[m as usize])
                    })
                    .collect()
            })
            .collect();
        let sizes = tables.iter().map(SubsetTable::len).collect();
        let space = SimplicialSet::from_tables(sizes, faces, degeneracies, None)?;
        let basepoint = rankers[0].rank(&[x.basepoint as u32]);
        let base_at = (0..=trunc).map(|k| x.basepoint_at(k) as u32).collect();
        Ok(Self {
            base: x.clone(),
            n,
            space: BasedSimplicialSet {
                space: Arc::new(space),
                basepoint,
            },
            tables,
            base_at,
        })
    }

    pub fn trunc(&self) -> usize {
        self.space.trunc()
    }

    /// Members of simplex `s` at level `k`, as indices into the base space.
    pub fn members(&self, k: usize, s: usize) -> &[u32] {
        self.tables[k].get(s)
    }

    pub fn contains_basepoint(&self, k: usize, s: usize) -> bool {
        self.members(k, s).binary_search(&self.base_at[k]).is_ok()
    }

    /// Number of members other than the basepoint.
    pub fn free_points(&self, k: usize, s: usize) -> usize {
        self.members(k, s).len() - usize::from(self.contains_basepoint(k, s))
    }

    /// Marks the simplices satisfying `keep`.
    pub fn mask(&self, keep: impl Fn(usize, usize) -> bool) -> Vec<Vec<bool>> {
        (0..=self.trunc())
            .map(|k| {
                (0..self.space.space.level_size(k))
                    .map(|s| keep(k, s))
                    .collect()
            })
            .collect()
    }

    /// Sub-simplicial set of subsets satisfying `keep`, based at `{*}`.
    fn based_subspace(
        &self,
        keep: impl Fn(usize, usize) -> bool,
    ) -> Result<(BasedSimplicialSet, SimplicialMap)> {
        let mask = self.mask(keep);
        let (sub, incl) = self.space.space.restrict(&mask)?;
        let basepoint = incl
            .table(0)
            .iter()
            .position(|&s| s as usize == self.space.basepoint)
            .ok_or_else(|| Error::InvalidInput("subspace misses the basepoint".into()))?;
        Ok((
            BasedSimplicialSet {
                space: sub,
                basepoint,
            },
            incl,
        ))
    }

    /// `exp_m(X,*)` inside this space, `m <= n`.
    pub fn based_part(&self, m: usize) -> Result<(BasedSimplicialSet, SimplicialMap)> {
        self.based_subspace(|k, s| self.contains_basepoint(k, s) && self.members(k, s).len() <= m)
    }

    /// `exp_m X` inside this space, `m <= n`.
    pub fn filtration_part(&self, m: usize) -> Result<(BasedSimplicialSet, SimplicialMap)> {
        self.based_subspace(|k, s| self.members(k, s).len() <= m)
    }

    /// `exp̄_n X` with the quotient map from `exp_n X`.
    pub fn bar(&self) -> Result<(BasedSimplicialSet, SimplicialMap)> {
        let (_, based) = self.based_part(self.n)?;
        quotient(&self.space.space, &based)
    }

    /// The image of `exp̄_m X` in `exp̄_n X`, as a mask on `exp̄_n X`.
    fn bar_part_mask(&self, projection: &SimplicialMap, m: usize) -> Vec<Vec<bool>> {
        (0..=self.trunc())
            .map(|k| {
                let mut mask = vec![false; projection.target.level_size(k)];
                mask[0] = true;
                for s in 0..self.space.space.level_size(k) {
                    if !self.contains_basepoint(k, s) && self.members(k, s).len() <= m {
                        mask[projection.apply(k, s)] = true;
                    }
                }
                mask
            })
            .collect()
    }
}

pub fn exp(x: &BasedSimplicialSet, n: usize, trunc: usize) -> Result<BasedSimplicialSet> {
    Ok(SubsetSpace::build(x, n, trunc)?.space)
}

/// `exp_n(X,*)`: subsets containing the basepoint, with the inclusion into `exp_n X`.
pub fn exp_based(
    x: &BasedSimplicialSet,
    n: usize,
    trunc: usize,
) -> Result<(BasedSimplicialSet, SimplicialMap)> {
    SubsetSpace::build(x, n, trunc)?.based_part(n)
}

/// `exp̄_n X = exp_n X / exp_n(X,*)` with the quotient map.
pub fn exp_bar(
    x: &BasedSimplicialSet,
    n: usize,
    trunc: usize,
) -> Result<(BasedSimplicialSet, SimplicialMap)> {
    SubsetSpace::build(x, n, trunc)?.bar()
}

/// A model of the one-point compactification of the unordered configuration
/// space of `n` points in `X` minus the basepoint.
pub fn conf_plus(x: &BasedSimplicialSet, n: usize, model: ConfModel) -> Result<BasedSimplicialSet> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "configuration spaces need n >= 1".into(),
        ));
    }
    let trunc = x.trunc();
    match model {
        ConfModel::Based => {
            let full = SubsetSpace::build(x, n + 1, trunc)?;
            let (top, top_incl) = full.based_part(n + 1)?;
            let top_space = top.space.clone();
            // exp_n(X,*) as a subspace of exp_{n+1}(X,*)
            let keep: Vec<Vec<bool>> = (0..=trunc)
                .map(|k| {
                    top_incl
                        .table(k)
                        .iter()
                        .map(|&s| full.members(k, s as usize).len() <= n)
                        .collect()
                })
                .collect();
            let (_, lower) = top_space.restrict(&keep)?;
            Ok(quotient(&top_space, &lower)?.0)
        }
        ConfModel::Bar => {
            let full = SubsetSpace::build(x, n, trunc)?;
            let (bar, projection) = full.bar()?;
            let keep = full.bar_part_mask(&projection, n - 1);
            let (_, lower) = bar.space.restrict(&keep)?;
            Ok(quotient(&bar.space, &lower)?.0)
        }
    }
}

/// The spaces `1..=n` of one of the three filtrations, with their inclusions.
#[derive(Clone, Debug)]
pub struct FiltrationTower {
    pub variant: TowerVariant,
    /// `spaces[m - 1]` is the `m`-th term.
    pub spaces: Vec<BasedSimplicialSet>,
    /// `inclusions[m - 1]`: term `m` into term `m + 1`.
    pub inclusions: Vec<SimplicialMap>,
    /// `embeddings[m - 1]`: term `m` into the top term.
    pub embeddings: Vec<SimplicialMap>,
}

impl FiltrationTower {
    pub fn top(&self) -> &BasedSimplicialSet {
        self.spaces.last().expect("towers are non-empty")
    }

    /// For every simplex of the top space, the least term containing it.
    pub fn entry_levels(&self) -> Vec<Vec<usize>> {
        let top = &self.top().space;
        let mut levels: Vec<Vec<usize>> =
            top.sizes().iter().map(|&s| vec![usize::MAX; s]).collect();
        for (m, embedding) in self.embeddings.iter().enumerate() {
            for (k, level) in levels.iter_mut().enumerate() {
                for &s in embedding.table(k) {
                    let slot = &mut level[s as usize];
                    *slot = (*slot).min(m + 1);
                }
            }
        }
        levels
    }
}

pub fn tower(x: &BasedSimplicialSet, n: usize, variant: TowerVariant) -> Result<FiltrationTower> {
    if n == 0 {
        return Err(Error::InvalidInput("towers need n >= 1".into()));
    }
    let full = SubsetSpace::build(x, n, x.trunc())?;
    let (top, masks): (BasedSimplicialSet, Vec<Vec<Vec<bool>>>) = match variant {
        TowerVariant::Exp => {
            let masks = (1..=n)
                .map(|m| full.mask(|k, s| full.members(k, s).len() <= m))
                .collect();
            (full.space.clone(), masks)
        }
        TowerVariant::Based => {
            let (top, incl) = full.based_part(n)?;
            let masks = (1..=n)
                .map(|m| {
                    (0..=full.trunc())
                        .map(|k| {
                            incl.table(k)
                                .iter()
                                .map(|&s| full.members(k, s as usize).len() <= m)
                                .collect()
                        })
                        .collect()
                })
                .collect();
            (top, masks)
        }
        TowerVariant::Bar => {
            let (bar, projection) = full.bar()?;
            let masks = (1..=n)
                .map(|m| full.bar_part_mask(&projection, m))
                .collect();
            (bar, masks)
        }
    };
    let mut spaces = Vec::with_capacity(n);
    let mut embeddings = Vec::with_capacity(n);
    for mask in &masks {
        let (sub, embedding) = top.space.restrict(mask)?;
        let basepoint = embedding
            .table(0)
            .iter()
            .position(|&s| s as usize == top.basepoint)
            .ok_or_else(|| Error::InvalidInput("filtration term misses the basepoint".into()))?;
        spaces.push(BasedSimplicialSet {
            space: sub,
            basepoint,
        });
        embeddings.push(embedding);
    }
    let inclusions = (0..n.saturating_sub(1))
        .map(|m| {
            let lower = &embeddings[m];
            let upper = &embeddings[m + 1];
            let maps = (0..=top.trunc())
                .map(|k| {
                    let mut position = vec![u32::MAX; top.space.level_size(k)];
                    for (i, &s) in upper.table(k).iter().enumerate() {
                        position[s as usize] = i as u32;
                    }
                    lower
                        .table(k)
                        .iter()
                        .map(|&s| position[s as usize])
                        .collect()
                })
                .collect();
            SimplicialMap::new(spaces[m].space.clone(), spaces[m + 1].space.clone(), maps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiltrationTower {
        variant,
        spaces,
        inclusions,
        embeddings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{sphere_model, torus_model, validate};

    #[test]
    fn ranking_matches_enumeration_order() {
        for (universe, n) in [(1, 1), (3, 2), (5, 3), (6, 6), (7, 2)] {
            let table = SubsetTable::enumerate(universe, n);
            let ranker = SubsetRanker::new(universe, n);
            assert_eq!(table.len() as u128, subset_count(universe, n));
            for s in 0..table.len() {
                assert_eq!(ranker.rank(table.get(s)), s);
            }
        }
    }

    #[test]
    fn exp_one_is_the_space_itself() {
        let s2 = sphere_model(2, 4);
        let e = exp(&s2, 1, 4).unwrap();
        assert_eq!(*e.space, *s2.space);
    }

    #[test]
    fn exp_level_sizes_are_binomial_sums() {
        let circle = sphere_model(1, 4);
        let e = exp(&circle, 2, 4).unwrap();
        assert_eq!(e.space.level_size(2), 6);
        for k in 0..=4 {
            assert_eq!(
                e.space.level_size(k) as u128,
                subset_count(circle.space.level_size(k), 2)
            );
        }
        assert_eq!(
            exp(&sphere_model(2, 4), 3, 4).unwrap().space.level_size(0),
            1
        );
        assert!(validate(&e.space).is_valid());
    }

    #[test]
    fn based_and_bar_sizes() {
        let circle = sphere_model(1, 3);
        let (based, incl) = exp_based(&circle, 2, 3).unwrap();
        assert_eq!(based.space.level_size(2), 3);
        assert!(incl.validate().is_valid());
        let (bar, proj) = exp_bar(&circle, 2, 3).unwrap();
        assert_eq!(bar.space.level_size(2), 4);
        assert!(proj.validate().is_valid());
        let (single, _) = exp_based(&circle, 1, 3).unwrap();
        assert_eq!(single.space.sizes(), &[1, 1, 1, 1]);
    }

    #[test]
    fn rejects_zero_points() {
        assert!(exp(&sphere_model(1, 2), 0, 2).is_err());
        assert!(conf_plus(&sphere_model(1, 2), 0, ConfModel::Bar).is_err());
    }

    #[test]
    fn budget_guard_trips() {
        let s2 = sphere_model(2, 8);
        let err = SubsetSpace::build_with_ceiling(&s2, 3, 8, 100).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn constructions_validate() {
        let t = torus_model(3);
        for space in [
            exp(&t, 2, 3).unwrap(),
            exp_bar(&t, 2, 3).unwrap().0,
            conf_plus(&t, 2, ConfModel::Based).unwrap(),
            conf_plus(&t, 2, ConfModel::Bar).unwrap(),
        ] {
            assert!(validate(&space.space).is_valid());
        }
    }

    #[test]
    fn tower_inclusions_nest() {
        let s2 = sphere_model(2, 5);
        for variant in [TowerVariant::Exp, TowerVariant::Based, TowerVariant::Bar] {
            let t = tower(&s2, 3, variant).unwrap();
            for incl in &t.inclusions {
                assert!(incl.validate().is_valid());
                assert!(incl.is_injective());
            }
            let composed = t.inclusions[0].then(&t.inclusions[1]).unwrap();
            let direct = t.embeddings[0].clone();
            for k in 0..=5 {
                assert_eq!(composed.table(k), direct.table(k));
            }
            for pair in t.spaces.windows(2) {
                for k in 0..=5 {
                    assert!(pair[0].space.level_size(k) <= pair[1].space.level_size(k));
                }
            }
        }
    }

    #[test]
    fn bar_tower_top_matches_exp_bar() {
        let s2 = sphere_model(2, 4);
        let t = tower(&s2, 2, TowerVariant::Bar).unwrap();
        let (bar, _) = exp_bar(&s2, 2, 4).unwrap();
        assert_eq!(*t.top().space, *bar.space);
    }
}
