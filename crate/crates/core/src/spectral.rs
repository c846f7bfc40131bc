//! Rational spectral sequence of a filtered chain complex.
//!
//! With `F_p` the span of basis elements of filtration at most `p`,
//! `Z^r_{p,m} = {x in F_p C_m : dx in F_{p-r}}` and
//! `E^r_{p,m} = Z^r_{p,m} / (Z^{r-1}_{p-1,m} + d Z^{r-1}_{p+r-1,m+1})`.
//! Entries are indexed by `(p, q)` with total degree `m = p + q`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{chains_on, ChainComplex};
use crate::linalg::rational::{kernel, Echelon};
use crate::linalg::sparse::axpy;
use crate::linalg::SparseVec;
use crate::subsetspace::FiltrationTower;

/// A chain complex with a filtration level for every basis element.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub complex: ChainComplex,
    /// `levels[m][i]`: filtration of basis element `i` in degree `m`.
    pub levels: Vec<Vec<usize>>,
    pub max_level: usize,
}

impl FilteredComplex {
    pub fn new(complex: ChainComplex, levels: Vec<Vec<usize>>) -> Result<Self> {
        if levels.len() != complex.dims.len()
            || levels.iter().zip(&complex.dims).any(|(l, &d)| l.len() != d)
        {
            return Err(Error::InvalidInput(
                "filtration levels do not match the basis".into(),
            ));
        }
        let max_level = levels.iter().flatten().copied().max().unwrap_or(0);
        let f = Self {
            complex,
            levels,
            max_level,
        };
        if let Some((m, col)) = f.filtration_violation() {
            return Err(Error::InvalidInput(format!(
                "boundary of basis element {col} in degree {m} raises the filtration"
            )));
        }
        Ok(f)
    }

    /// A basis element whose boundary has a term of higher filtration.
    pub fn filtration_violation(&self) -> Option<(usize, usize)> {
        for m in 1..self.complex.dims.len() {
            let d = &self.complex.differentials[m];
            for (c, col) in d.columns().iter().enumerate() {
                if col
                    .iter()
                    .any(|(r, _)| self.levels[m - 1][*r as usize] > self.levels[m][c])
                {
                    return Some((m, c));
                }
            }
        }
        None
    }

    /// Highest total degree with trustworthy homology.
    pub fn top_degree(&self) -> usize {
        self.complex.trusted_top
    }

    pub fn count_at(&self, p: usize, m: usize) -> usize {
        self.levels[m].iter().filter(|&&l| l == p).count()
    }

    fn boundary(&self, m: usize, v: &SparseVec) -> SparseVec {
        let d = &self.complex.differentials[m];
        let mut out = SparseVec::new();
        for (i, x) in v {
            axpy(&mut out, x, d.column(*i as usize));
        }
        out
    }
}

/// Chains of the top space relative to its basepoint, each simplex filtered
/// by the first term of the tower containing it.
pub fn filtered_from_tower(t: &FiltrationTower) -> Result<FilteredComplex> {
    let top = t.top();
    let x = &top.space;
    let entry = t.entry_levels();
    let mut region: Vec<Vec<bool>> = x.sizes().iter().map(|&s| vec![true; s]).collect();
    for (k, level) in region.iter_mut().enumerate() {
        level[top.basepoint_at(k)] = false;
    }
    let trunc = x.trunc();
    let chains = chains_on(x, Some(&region), false, trunc.saturating_sub(1));
    let levels = chains
        .basis
        .iter()
        .enumerate()
        .map(|(k, basis)| basis.iter().map(|&s| entry[k][s as usize]).collect())
        .collect();
    FilteredComplex::new(chains.complex, levels)
}

/// One page: entry dimensions and ranks of the differentials leaving them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    /// `(p, q) -> dim E^r_{p,q}`, zero entries omitted.
    pub dims: BTreeMap<(usize, i64), usize>,
    /// `(p, q) -> rank of d^r : E^r_{p,q} -> E^r_{p-r,q+r-1}`, for every
    /// source and target that are both nonzero.
    pub differentials: BTreeMap<(usize, i64), usize>,
}

impl Page {
    pub fn dim(&self, p: usize, q: i64) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn rank_from(&self, p: usize, q: i64) -> usize {
        self.differentials.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Sum of dimensions by total degree `p + q`.
    pub fn totals(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(p, q), &d) in &self.dims {
            *out.entry(p as i64 + q).or_insert(0) += d;
        }
        out
    }

    pub fn is_degenerate(&self) -> bool {
        self.differentials.values().all(|&r| r == 0)
    }

    pub fn report(&self) -> PageReport {
        PageReport {
            r: self.r,
            entries: self
                .dims
                .iter()
                .map(|(&(p, q), &dim)| PageEntry { p, q, dim })
                .collect(),
            differentials: self
                .differentials
                .iter()
                .map(|(&(p, q), &rank)| PageDifferential { from: (p, q), rank })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PageEntry {
    pub p: usize,
    pub q: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageDifferential {
    pub from: (usize, i64),
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageReport {
    pub r: usize,
    pub entries: Vec<PageEntry>,
    pub differentials: Vec<PageDifferential>,
}

/// Memoized `Z^r_{p,m}` subspaces of one filtered complex.
struct Cycles<'a> {
    f: &'a FilteredComplex,
    cache: HashMap<(usize, usize, usize), Vec<SparseVec>>,
}

impl<'a> Cycles<'a> {
    fn new(f: &'a FilteredComplex) -> Self {
        Self {
            f,
            cache: HashMap::new(),
        }
    }

    fn compute(f: &FilteredComplex, r: usize, p: usize, m: usize) -> Vec<SparseVec> {
        if m >= f.complex.dims.len() {
            return Vec::new();
        }
        let cols: Vec<usize> = (0..f.complex.dims[m])
            .filter(|&i| f.levels[m][i] <= p)
            .collect();
        if m == 0 || r == 0 {
            return cols.iter().map(|&i| vec![(i as u32, 1.into())]).collect();
        }
        let floor = p.checked_sub(r);
        let rows: Vec<usize> = (0..f.complex.dims[m - 1])
            .filter(|&i| floor.is_none_or(|fl| f.levels[m - 1][i] > fl))
            .collect();
        let restricted = f.complex.differentials[m]
            .select_columns(&cols)
            .select_rows(&rows);
        kernel(&restricted)
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|(i, x)| (cols[i as usize] as u32, x))
                    .collect()
            })
            .collect()
    }

    /// Fills the cache for the listed keys in parallel.
    fn prepare(&mut self, keys: impl IntoIterator<Item = (usize, usize, usize)>) {
        let mut missing: Vec<(usize, usize, usize)> = keys
            .into_iter()
            .filter(|k| !self.cache.contains_key(k))
            .collect();
        missing.sort_unstable();
        missing.dedup();
        let f = self.f;
        let computed: Vec<_> = missing
            .into_par_iter()
            .map(|(r, p, m)| ((r, p, m), Self::compute(f, r, p, m)))
            .collect();
        self.cache.extend(computed);
    }

    fn get(&self, r: usize, p: usize, m: usize) -> &[SparseVec] {
        &self.cache[&(r, p, m)]
    }
}

fn span_dim<'v>(parts: impl IntoIterator<Item = &'v SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in parts {
        e.insert(v.clone());
    }
    e.rank()
}

/// Dimensions and differential ranks of page `r >= 1`.
fn compute_page(f: &FilteredComplex, cycles: &mut Cycles<'_>, r: usize) -> Page {
    let top = f.top_degree();
    let n = f.max_level;
    let mut keys = Vec::new();
    for m in 0..=top {
        for p in 0..=n {
            keys.push((r, p, m));
            keys.push((r - 1, p.saturating_sub(1), m));
            keys.push((r - 1, p + r - 1, m + 1));
            keys.push((r - 1, p.saturating_sub(r + 1), m.saturating_sub(1)));
            keys.push((r - 1, p.saturating_sub(1), m));
        }
    }
    cycles.prepare(keys);
    let cycles = &*cycles;

    let nodes: Vec<(usize, usize)> = (0..=top)
        .flat_map(|m| (1..=n).map(move |p| (p, m)))
        .collect();
    // boundaries of Z^{r-1}_{p+r-1, m+1}, shared by the dims and by the targets of d^r
    let denominators: HashMap<(usize, usize), Vec<SparseVec>> = nodes
        .par_iter()
        .map(|&(p, m)| {
            let mut gens: Vec<SparseVec> = if p >= 1 {
                cycles.get(r - 1, p - 1, m).to_vec()
            } else {
                Vec::new()
            };
            if m + 1 < f.complex.dims.len() {
                gens.extend(
                    cycles
                        .get(r - 1, p + r - 1, m + 1)
                        .iter()
                        .map(|z| f.boundary(m + 1, z)),
                );
            }
            ((p, m), gens)
        })
        .collect();

    let results: Vec<((usize, usize), usize, usize)> = nodes
        .par_iter()
        .map(|&(p, m)| {
            let z = cycles.get(r, p, m);
            let denom = &denominators[&(p, m)];
            let denom_dim = span_dim(denom.iter());
            let dim = span_dim(z.iter().chain(denom.iter())) - denom_dim;
            let mut rank = 0;
            if dim > 0 && m >= 1 && p > r {
                let target = &denominators[&(p - r, m - 1)];
                let base = span_dim(target.iter());
                let images: Vec<SparseVec> = z.iter().map(|x| f.boundary(m, x)).collect();
                rank = span_dim(target.iter().chain(images.iter())) - base;
            }
            ((p, m), dim, rank)
        })
        .collect();

    let mut dims = BTreeMap::new();
    for &((p, m), dim, _) in &results {
        if dim > 0 {
            dims.insert((p, m as i64 - p as i64), dim);
        }
    }
    let mut differentials = BTreeMap::new();
    for &((p, m), dim, rank) in &results {
        if dim > 0 && m >= 1 && p > r {
            let target = (p - r, (m - 1) as i64 - (p - r) as i64);
            if dims.contains_key(&target) {
                differentials.insert((p, m as i64 - p as i64), rank);
            }
        }
    }
    Page {
        r,
        dims,
        differentials,
    }
}

/// A filtered complex together with its pages computed so far.
pub struct SpectralSequence<'a> {
    f: &'a FilteredComplex,
    cycles: Cycles<'a>,
    pub pages: Vec<Page>,
}

impl<'a> SpectralSequence<'a> {
    pub fn new(f: &'a FilteredComplex) -> Self {
        let mut s = Self {
            f,
            cycles: Cycles::new(f),
            pages: Vec::new(),
        };
        let e1 = compute_page(s.f, &mut s.cycles, 1);
        s.pages.push(e1);
        s
    }

    pub fn last(&self) -> &Page {
        self.pages.last().expect("at least the first page")
    }

    pub fn advance(&mut self) -> &Page {
        let r = self.last().r + 1;
        let page = compute_page(self.f, &mut self.cycles, r);
        self.pages.push(page);
        self.last()
    }

    /// Advances until the differentials can no longer reach a nonzero
    /// filtration level; that page is the limit.
    pub fn limit(&mut self) -> &Page {
        while self.last().r < self.f.max_level.max(1) {
            self.advance();
        }
        self.last()
    }
}

pub fn e1_page(f: &FilteredComplex) -> Page {
    SpectralSequence::new(f).pages.remove(0)
}

/// The page after `page`, recomputed from the filtered complex.
pub fn advance(page: &Page, f: &FilteredComplex) -> Page {
    let mut cycles = Cycles::new(f);
    compute_page(f, &mut cycles, page.r + 1)
}

/// Total-degree dimensions of the limit page.
pub fn einfty_totals(f: &FilteredComplex) -> BTreeMap<i64, usize> {
    SpectralSequence::new(f).limit().totals()
}

/// Checks `dim E^{r+1} = dim E^r - rank(in) - rank(out)` at every entry.
pub fn consistent_successor(prev: &Page, next: &Page) -> bool {
    let r = prev.r as i64;
    let keys: std::collections::BTreeSet<(usize, i64)> =
        prev.dims.keys().chain(next.dims.keys()).copied().collect();
    keys.into_iter().all(|(p, q)| {
        let incoming = prev.rank_from(p + prev.r, q - r + 1);
        let outgoing = prev.rank_from(p, q);
        prev.dim(p, q) as i64 - incoming as i64 - outgoing as i64 == next.dim(p, q) as i64
    })
}
