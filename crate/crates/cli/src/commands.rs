use std::collections::BTreeMap;

use finsub::groupcoh::{bar_cochain_complex_with_ceiling, CoefficientAction};
use finsub::homology::cache::{CacheStats, MatrixCache};
use finsub::homology::{homology, Coefficients, HomologyGroup};
use finsub::simplicial::BasedSimplicialSet;
use finsub::spectral::{filtered_from_tower, PageReport, SpectralSequence};
use finsub::subsetspace::{conf_plus, exp, exp_bar, exp_based, tower, ConfModel, TowerVariant};
use finsub::{Error, Result};
use serde::Serialize;

use crate::workbench::{Construction, Limits, SpaceSpec, Workbench};
use crate::{EXIT_BUDGET, EXIT_USAGE};

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupEntry {
    pub degree: usize,
    #[serde(flatten)]
    pub group: HomologyGroup,
}

fn entries(groups: Vec<HomologyGroup>) -> Vec<GroupEntry> {
    groups
        .into_iter()
        .enumerate()
        .map(|(degree, group)| GroupEntry { degree, group })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub space: String,
    pub construction: Construction,
    pub n: usize,
    pub d: Option<usize>,
    pub reduced: bool,
    pub coeffs: Coefficients,
    pub groups: Vec<GroupEntry>,
}

/// Homology of a construction; `max_degree` defaults to the truncation minus one.
pub fn cmd_homology(
    space: SpaceSpec,
    d: Option<usize>,
    n: usize,
    construction: Construction,
    coeffs: Coefficients,
    max_degree: Option<usize>,
    mut limits: Limits,
) -> Result<HomologyReport> {
    // file spaces keep their own truncation
    if let (Some(k), None, false) = (
        max_degree,
        limits.trunc,
        matches!(space, SpaceSpec::File(_)),
    ) {
        let dim = if space == SpaceSpec::Torus {
            2
        } else {
            d.unwrap_or(1)
        };
        limits.trunc = Some((k + 1).max(n * dim + 1));
    }
    let wb = Workbench::new(space.clone(), d, n, limits)?;
    let maxdeg = max_degree.unwrap_or(wb.top_degree());
    let groups = wb.homology(construction, n, maxdeg, coeffs)?;
    Ok(HomologyReport {
        space: space.to_string(),
        construction,
        n,
        d: wb.d,
        reduced: construction.reduced(),
        coeffs,
        groups: entries(groups),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupcohReport {
    pub group: String,
    pub action: CoefficientAction,
    pub n: usize,
    pub coeffs: Coefficients,
    pub groups: Vec<GroupEntry>,
}

/// `H^r(S_n, M)` for `r <= max_degree`.
pub fn cmd_groupcoh(
    n: usize,
    action: CoefficientAction,
    max_degree: usize,
    ceiling: u64,
) -> Result<GroupcohReport> {
    let c = bar_cochain_complex_with_ceiling(n, action, max_degree, ceiling)?;
    Ok(GroupcohReport {
        group: format!("S_{n}"),
        action,
        n,
        coeffs: Coefficients::Integer,
        groups: entries(homology(&c, Coefficients::Integer)),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub space: String,
    pub n: usize,
    pub d: Option<usize>,
    pub variant: TowerVariant,
    pub pages: Vec<PageReport>,
    /// Total-degree dimensions of the limit page.
    pub limit_totals: BTreeMap<i64, usize>,
}

/// Rational pages of the filtration by number of points, up to the limit.
pub fn cmd_page(
    space: SpaceSpec,
    d: Option<usize>,
    n: usize,
    variant: TowerVariant,
    limits: Limits,
) -> Result<SpectralReport> {
    let wb = Workbench::new(space.clone(), d, n, limits)?;
    let t = tower(&wb.base, n, variant)?;
    let f = filtered_from_tower(&t)?;
    let mut ss = SpectralSequence::new(&f);
    let limit_totals = ss
        .limit()
        .totals()
        .into_iter()
        .filter(|&(_, v)| v > 0)
        .collect();
    Ok(SpectralReport {
        space: space.to_string(),
        n,
        d: wb.d,
        variant,
        pages: ss.pages.iter().map(|p| p.report()).collect(),
        limit_totals,
    })
}

/// Materializes a construction as a simplicial set.
pub fn cmd_space(
    space: SpaceSpec,
    d: Option<usize>,
    n: usize,
    construction: Construction,
    limits: Limits,
) -> Result<BasedSimplicialSet> {
    let wb = Workbench::new(space, d, n, limits)?;
    let (x, t) = (&wb.base, wb.trunc);
    match construction {
        Construction::Expn => exp(x, n, t),
        Construction::Based => Ok(exp_based(x, n, t)?.0),
        Construction::Bar => Ok(exp_bar(x, n, t)?.0),
        Construction::Conf => conf_plus(x, n, ConfModel::Bar),
        Construction::ConfBased => conf_plus(x, n, ConfModel::Based),
    }
}

pub fn cache_stats(cache: &MatrixCache) -> Result<CacheStats> {
    cache.stats()
}

pub fn cache_clear(cache: &MatrixCache) -> Result<usize> {
    cache.clear()
}
