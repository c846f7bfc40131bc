//! Base spaces, constructions on them and their chain complexes.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use finsub::homology::cache::MatrixCache;
use finsub::homology::{
    chains_on, connecting_map_regions, describe_map, homology_in_degrees, ChainComplex,
    Coefficients, HomologyBasis, HomologyGroup, HomologyMapDescription,
};
use finsub::simplicial::{
    load_space, space_to_json, sphere_model, torus_model, BasedSimplicialSet,
};
use finsub::subsetspace::{SubsetSpace, DEFAULT_LEVEL_CEILING};
use finsub::{Error, Result};
use num_bigint::BigInt;
use serde::Serialize;

/// Default bound on `n * dim` for the built-in spaces.
pub const DEFAULT_MAX_ND: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceSpec {
    Sphere,
    Torus,
    File(PathBuf),
}

impl FromStr for SpaceSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sphere" => Ok(Self::Sphere),
            "torus" => Ok(Self::Torus),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Self::File(path.into())),
                _ => Err(format!(
                    "unknown space `{s}` (expected sphere, torus or file:PATH)"
                )),
            },
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sphere => f.write_str("sphere"),
            Self::Torus => f.write_str("torus"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// `exp_n X`, unreduced.
    Expn,
    /// `exp_n(X,*)`, unreduced.
    Based,
    /// `exp̄_n X`, reduced.
    Bar,
    /// `C_n(Y)^+` as `exp̄_n X / exp̄_{n-1} X`, reduced.
    Conf,
    /// `C_n(Y)^+` as `exp_{n+1}(X,*) / exp_n(X,*)`, reduced.
    #[serde(rename = "conf-based")]
    ConfBased,
}

impl Construction {
    pub fn reduced(self) -> bool {
        matches!(self, Self::Bar | Self::Conf | Self::ConfBased)
    }

    /// Number of points of the ambient subset space.
    fn ambient_points(self, n: usize) -> usize {
        match self {
            Self::ConfBased => n + 1,
            _ => n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Expn => "expn",
            Self::Based => "based",
            Self::Bar => "bar",
            Self::Conf => "conf",
            Self::ConfBased => "conf-based",
        }
    }
}

impl FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "expn" => Self::Expn,
            "based" => Self::Based,
            "bar" => Self::Bar,
            "conf" => Self::Conf,
            "conf-based" => Self::ConfBased,
            _ => return Err(format!("unknown construction `{s}`")),
        })
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A base space together with the resource limits for constructions on it.
#[derive(Clone, Debug)]
pub struct Workbench {
    pub spec: SpaceSpec,
    /// Sphere dimension; the torus has dimension 2 and files have none.
    pub d: Option<usize>,
    pub base: BasedSimplicialSet,
    tag: String,
    pub trunc: usize,
    pub ceiling: u64,
    pub max_nd: usize,
    pub cache: Option<MatrixCache>,
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub trunc: Option<usize>,
    pub ceiling: u64,
    pub max_nd: usize,
    pub cache: Option<MatrixCache>,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            trunc: None,
            ceiling: DEFAULT_LEVEL_CEILING,
            max_nd: DEFAULT_MAX_ND,
            cache: None,
        }
    }
}

impl Workbench {
    /// Sets up the base space so that constructions with up to `n` points
    /// are trustworthy through their top dimension (`n * dim + 1` levels),
    /// unless `limits.trunc` says otherwise.
    pub fn new(spec: SpaceSpec, d: Option<usize>, n: usize, limits: Limits) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let dim = match &spec {
            SpaceSpec::Sphere => {
                let d =
                    d.ok_or_else(|| Error::InvalidInput("--d is required for spheres".into()))?;
                if d == 0 {
                    return Err(Error::InvalidInput(
                        "sphere dimension must be positive".into(),
                    ));
                }
                Some(d)
            }
            SpaceSpec::Torus => Some(2),
            SpaceSpec::File(_) => None,
        };
        if let Some(dim) = dim {
            if n * dim > limits.max_nd {
                return Err(Error::Budget {
                    what: format!("n * dim = {n} * {dim} (raise --max-nd)"),
                    needed: (n * dim) as u128,
                    ceiling: limits.max_nd as u128,
                });
            }
        }
        let (base, tag, trunc) = match &spec {
            SpaceSpec::Sphere | SpaceSpec::Torus => {
                let dim = dim.expect("built-in spaces have a dimension");
                let trunc = limits.trunc.unwrap_or(n * dim + 1);
                let base = if spec == SpaceSpec::Sphere {
                    sphere_model(dim, trunc)
                } else {
                    torus_model(trunc)
                };
                let tag = format!("{spec}:{dim}");
                (base, tag, trunc)
            }
            SpaceSpec::File(path) => {
                let mut base = load_space(path)?;
                let trunc = limits.trunc.unwrap_or(base.trunc()).min(base.trunc());
                base = base.truncate(trunc);
                let tag = space_to_json(&base);
                (base, tag, trunc)
            }
        };
        Ok(Self {
            spec,
            d: dim,
            base,
            tag,
            trunc,
            ceiling: limits.ceiling,
            max_nd: limits.max_nd,
            cache: limits.cache,
        })
    }

    pub fn sphere(d: usize, n: usize) -> Result<Self> {
        Self::new(SpaceSpec::Sphere, Some(d), n, Limits::default())
    }

    /// Highest degree with trustworthy homology.
    pub fn top_degree(&self) -> usize {
        self.trunc.saturating_sub(1)
    }

    pub fn subsets(&self, n: usize) -> Result<SubsetSpace> {
        SubsetSpace::build_with_ceiling(&self.base, n, self.trunc, self.ceiling)
    }

    /// Chains of a construction with `n` points through degree `maxdeg`.
    pub fn complex(&self, c: Construction, n: usize, maxdeg: usize) -> Result<ChainComplex> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let key = MatrixCache::key(&[
            &self.tag,
            c.name(),
            &n.to_string(),
            &self.trunc.to_string(),
            &maxdeg.to_string(),
        ]);
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.get(&key) {
                return Ok(hit);
            }
        }
        let ss = self.subsets(c.ambient_points(n))?;
        let complex = construction_chains(&ss, c, n, maxdeg);
        if let Some(cache) = &self.cache {
            cache.put(&key, &complex)?;
        }
        Ok(complex)
    }

    /// Homology of a construction in degrees `0..=maxdeg`.
    pub fn homology(
        &self,
        c: Construction,
        n: usize,
        maxdeg: usize,
        coeffs: Coefficients,
    ) -> Result<Vec<HomologyGroup>> {
        if maxdeg > self.top_degree() {
            return Err(Error::InvalidInput(format!(
                "degree {maxdeg} needs truncation at least {}, have {}",
                maxdeg + 1,
                self.trunc
            )));
        }
        let complex = self.complex(c, n, maxdeg)?;
        let degrees: Vec<usize> = (0..=maxdeg).collect();
        Ok(homology_in_degrees(&complex, &degrees, coeffs))
    }

    /// Homology in the given degrees only.
    pub fn homology_at(
        &self,
        c: Construction,
        n: usize,
        degrees: &[usize],
        coeffs: Coefficients,
    ) -> Result<Vec<HomologyGroup>> {
        let maxdeg = degrees.iter().copied().max().unwrap_or(0);
        if maxdeg > self.top_degree() {
            return Err(Error::InvalidInput(format!(
                "degree {maxdeg} above the truncation"
            )));
        }
        let complex = self.complex(c, n, maxdeg)?;
        Ok(homology_in_degrees(&complex, degrees, coeffs))
    }

    /// Connecting map `H_k(C_n^+) -> H_{k-1}(C_{n-1}^+)` of the triple
    /// `exp̄_{n-2} ⊂ exp̄_{n-1} ⊂ exp̄_n`, computed inside `exp_n X`.
    pub fn triple_connecting_map(&self, n: usize, k: usize) -> Result<HomologyMapDescription> {
        if n < 2 {
            return Err(Error::InvalidInput("the triple needs n >= 2".into()));
        }
        let ss = self.subsets(n)?;
        let region =
            |m: usize| ss.mask(|l, s| ss.contains_basepoint(l, s) || ss.members(l, s).len() <= m);
        connecting_map_regions(
            &ss.space.space,
            Some(&region(n - 2)),
            &region(n - 1),
            k,
            false,
        )
    }

    /// The map `H_k(exp̄_{n-1} X) -> H_k(exp̄_n X)` induced by inclusion.
    pub fn bar_inclusion_map(&self, n: usize, k: usize) -> Result<HomologyMapDescription> {
        if n < 2 {
            return Err(Error::InvalidInput("the inclusion needs n >= 2".into()));
        }
        let ss = self.subsets(n)?;
        let x = &ss.space.space;
        let small = ss.mask(|l, s| !ss.contains_basepoint(l, s) && ss.members(l, s).len() < n);
        let large = ss.mask(|l, s| !ss.contains_basepoint(l, s));
        let src = chains_on(x, Some(&small), false, k);
        let tgt = chains_on(x, Some(&large), false, k);
        let sb = HomologyBasis::new(&src.complex, k);
        let tb = HomologyBasis::new(&tgt.complex, k);
        let push = |g: Vec<BigInt>| {
            let mut out = vec![BigInt::from(0); tb.chain_dim()];
            for (j, &s) in src.basis[k].iter().enumerate() {
                let row = tgt
                    .position_of(k, s as usize)
                    .expect("the small region lies inside the large one");
                out[row] += &g[j];
            }
            tb.coordinates(&out)
                .expect("inclusions send cycles to cycles")
        };
        let mut images: Vec<_> = (0..sb.group.rank)
            .map(|i| push(sb.free_generator_dense(i)))
            .collect();
        images.extend((0..sb.group.torsion.len()).map(|i| push(sb.torsion_generator_dense(i))));
        Ok(describe_map(&sb, &tb, images))
    }
}

/// Chains of `c` with `n` points, as a region of the subset space `ss`.
pub fn construction_chains(
    ss: &SubsetSpace,
    c: Construction,
    n: usize,
    maxdeg: usize,
) -> ChainComplex {
    let x = &ss.space.space;
    let mask = match c {
        Construction::Expn => None,
        Construction::Based => Some(ss.mask(|k, s| ss.contains_basepoint(k, s))),
        Construction::Bar => Some(ss.mask(|k, s| !ss.contains_basepoint(k, s))),
        Construction::Conf => {
            Some(ss.mask(|k, s| !ss.contains_basepoint(k, s) && ss.members(k, s).len() == n))
        }
        Construction::ConfBased => {
            Some(ss.mask(|k, s| ss.contains_basepoint(k, s) && ss.members(k, s).len() == n + 1))
        }
    };
    chains_on(x, mask.as_deref(), false, maxdeg).complex
}
