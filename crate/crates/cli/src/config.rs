//! Flat `key = value` pipeline configuration with dotted keys.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use strat_core::datasets::CatalogId;
use strat_core::phi::{PhiKind, PhiSpec};
use strat_core::strat_persistence::{ComplexCaps, DiagramParams};

/// A problem with the configuration rather than with the data; exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

const KEYS: &[&str] = &[
    "dataset",
    "dataset.n",
    "dataset.sampler",
    "dataset.s",
    "dataset.d",
    "dataset.noise",
    "input",
    "zeta",
    "u",
    "phi.kind",
    "phi.q",
    "phi.grid_spacing",
    "diag.v_low",
    "diag.v_up",
    "caps.max_dim",
    "caps.max_radius",
    "subsample",
    "cluster_radius",
    "h0_scales",
    "plot.top_k",
    "out",
    "seed",
];

/// How the lemniscate is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampler {
    /// Parameter-uniform points of V⁰.
    Curve,
    /// Refined rejection sampling of V^s.
    Rejection { s: f64 },
    /// Unrefined rejection sampling of a band of width `d` around V⁰.
    Band { d: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub id: CatalogId,
    pub n: usize,
    pub sampler: Sampler,
    pub noise: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub dataset: Option<DatasetSpec>,
    pub input: Option<PathBuf>,
    pub zeta: f64,
    pub u: f64,
    pub phi: PhiSpec,
    pub v: DiagramParams,
    pub caps: ComplexCaps,
    /// Greedy-net spacing applied before ε-pers; 0 keeps every point.
    pub subsample: f64,
    pub cluster_radius: f64,
    pub h0_scales: Vec<f64>,
    pub top_k: usize,
    pub out: PathBuf,
    pub seed: u64,
}

pub fn parse_pairs(text: &str) -> anyhow::Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(bad(format!("line {}: expected `key = value`", k + 1)));
        };
        set_pair(&mut map, key.trim(), value.trim())?;
    }
    Ok(map)
}

pub fn set_pair(map: &mut BTreeMap<String, String>, key: &str, value: &str) -> anyhow::Result<()> {
    if !KEYS.contains(&key) {
        return Err(bad(format!("unknown key `{key}`")));
    }
    map.insert(key.to_string(), value.to_string());
    Ok(())
}

fn get<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> anyhow::Result<T> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| bad(format!("`{key}`: cannot parse `{v}`"))),
    }
}

impl PipelineConfig {
    pub fn from_pairs(map: &BTreeMap<String, String>) -> anyhow::Result<Self> {
        let dataset = match map.get("dataset") {
            None => None,
            Some(name) => {
                let id: CatalogId = name
                    .parse()
                    .map_err(|_| bad(format!("unknown catalog entry `{name}`")))?;
                let sampler = match map.get("dataset.sampler").map(String::as_str) {
                    None | Some("curve") => Sampler::Curve,
                    Some("rejection") => Sampler::Rejection {
                        s: get(map, "dataset.s", 0.0)?,
                    },
                    Some("band") => Sampler::Band {
                        d: get(map, "dataset.d", 0.07)?,
                    },
                    Some(other) => return Err(bad(format!("unknown sampler `{other}`"))),
                };
                if sampler != Sampler::Curve && id != CatalogId::Lemniscate {
                    return Err(bad("`dataset.sampler` applies to the lemniscate only"));
                }
                Some(DatasetSpec {
                    id,
                    n: get(map, "dataset.n", 2000)?,
                    sampler,
                    noise: get(map, "dataset.noise", 0.0)?,
                })
            }
        };
        let kind = match map.get("phi.kind").map(String::as_str) {
            None | Some("subspace") => PhiKind::Subspace,
            Some("subspace_directed") => PhiKind::SubspaceDirected,
            Some("local_homology") => PhiKind::LocalHomology,
            Some(other) => return Err(bad(format!("unknown Φ kind `{other}`"))),
        };
        let mut phi = PhiSpec::new(kind, get(map, "phi.q", 1)?);
        phi.subspace.grid_spacing = get(map, "phi.grid_spacing", phi.subspace.grid_spacing)?;
        let v = DiagramParams::new(get(map, "diag.v_low", 0.2)?, get(map, "diag.v_up", 0.3)?)
            .map_err(|e| bad(e.to_string()))?;
        let h0_scales = match map.get("h0_scales") {
            None => vec![0.05, 0.12, 0.24],
            Some(list) if list.trim().is_empty() => Vec::new(),
            Some(list) => list
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| bad(format!("`h0_scales`: cannot parse `{x}`")))
                })
                .collect::<anyhow::Result<_>>()?,
        };
        let cfg = Self {
            dataset,
            input: map.get("input").map(PathBuf::from),
            zeta: get(map, "zeta", 9.0)?,
            u: get(map, "u", 0.6)?,
            phi,
            v,
            caps: ComplexCaps {
                max_dim: get(map, "caps.max_dim", 2)?,
                max_radius: get(map, "caps.max_radius", 0.3)?,
            },
            subsample: get(map, "subsample", 0.02)?,
            cluster_radius: get(map, "cluster_radius", 0.1)?,
            h0_scales,
            top_k: get(map, "plot.top_k", 14)?,
            out: PathBuf::from(map.get("out").map_or("out", String::as_str)),
            seed: get(map, "seed", 0)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if !(self.zeta > 0.0 && self.zeta.is_finite()) {
            return Err(bad("`zeta` must be positive"));
        }
        if !(0.0..=1.0).contains(&self.u) {
            return Err(bad("`u` must lie in [0, 1]"));
        }
        if !(self.caps.max_radius > 0.0) {
            return Err(bad("`caps.max_radius` must be positive"));
        }
        if !(self.subsample >= 0.0 && self.cluster_radius > 0.0) {
            return Err(bad(
                "`subsample` must be nonnegative and `cluster_radius` positive",
            ));
        }
        if self.top_k == 0 {
            return Err(bad("`plot.top_k` must be at least 1"));
        }
        if let Some(d) = &self.dataset {
            if !(d.noise >= 0.0) {
                return Err(bad("`dataset.noise` must be nonnegative"));
            }
        }
        Ok(())
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> anyhow::Result<Self> {
        let mut map = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| bad(format!("reading {}: {e}", p.display())))?;
                parse_pairs(&text)?
            }
            None => BTreeMap::new(),
        };
        for o in overrides {
            let Some((k, v)) = o.split_once('=') else {
                return Err(bad(format!("`--set {o}`: expected key=value")));
            };
            set_pair(&mut map, k.trim(), v.trim())?;
        }
        Self::from_pairs(&map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = PipelineConfig::load(None, &[]).unwrap();
        assert_eq!(cfg.zeta, 9.0);
        assert_eq!(cfg.top_k, 14);
        assert!(cfg.dataset.is_none());
        let text = "dataset = lemniscate  # the figure-eight\ndataset.n = 50\nphi.kind = local_homology\nphi.q = 1\n";
        let map = parse_pairs(text).unwrap();
        let cfg = PipelineConfig::from_pairs(&map).unwrap();
        assert_eq!(cfg.dataset.as_ref().unwrap().n, 50);
        assert_eq!(cfg.phi.kind, PhiKind::LocalHomology);
        let cfg = PipelineConfig::load(
            None,
            &["dataset=lemniscate".into(), "dataset.sampler=band".into()],
        )
        .unwrap();
        assert_eq!(cfg.dataset.unwrap().sampler, Sampler::Band { d: 0.07 });
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "nonsense",
            "colour = red",
            "dataset = torus",
            "u = 1.5",
            "zeta = -1",
            "diag.v_low = 0.5\ndiag.v_up = 0.4",
            "dataset = two_circles\ndataset.sampler = band",
            "seed = x",
        ] {
            let err = parse_pairs(text)
                .and_then(|m| PipelineConfig::from_pairs(&m))
                .unwrap_err();
            assert!(err.downcast_ref::<ConfigError>().is_some(), "{text}: {err}");
        }
    }
}
