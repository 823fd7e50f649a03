//! Stratification diagrams of strongly stratified samples, their Čech
//! filtrations, per-flag barcodes and the distances between them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::{
    cech_filtration, inclusion_of_subsample, ComplexInclusion, FilteredComplex,
};
use crate::error::{invalid, Result};
use crate::persistence::{bottleneck, h0_induced_map, reduce_barcodes, Barcode, H0Map};
use crate::phi::strong_str;
use crate::sample_spaces::{DiagramSample, StratifiedSample, StronglyStratifiedSample};

/// Level-set thresholds `0 < v_low < v_up < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramParams {
    pub v_low: f64,
    pub v_up: f64,
}

impl DiagramParams {
    pub fn new(v_low: f64, v_up: f64) -> Result<Self> {
        let v = Self { v_low, v_up };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        if 0.0 < self.v_low && self.v_low < self.v_up && self.v_up < 1.0 {
            Ok(())
        } else {
            Err(invalid(format!(
                "diagram parameters need 0 < v_low < v_up < 1, got ({}, {})",
                self.v_low, self.v_up
            )))
        }
    }

    /// `self ≤ other` when `[v_low, v_up]` sits inside the other interval, so
    /// that every component of the diagram grows.
    pub fn le(&self, other: &DiagramParams) -> bool {
        other.v_low <= self.v_low && self.v_up <= other.v_up
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexCaps {
    pub max_dim: usize,
    pub max_radius: f64,
}

impl Default for ComplexCaps {
    fn default() -> Self {
        Self {
            max_dim: 2,
            max_radius: 0.5,
        }
    }
}

/// Masks of the three components (s ≤ v_up, v_low ≤ s ≤ v_up, v_low ≤ s).
pub fn diagram_masks(sample: &StronglyStratifiedSample, v: &DiagramParams) -> [Vec<bool>; 3] {
    let s = sample.values();
    [
        s.iter().map(|&x| x <= v.v_up).collect(),
        s.iter().map(|&x| v.v_low <= x && x <= v.v_up).collect(),
        s.iter().map(|&x| v.v_low <= x).collect(),
    ]
}

pub fn diagification(
    sample: &StronglyStratifiedSample,
    v: &DiagramParams,
) -> Result<DiagramSample> {
    v.validate()?;
    let [p, pq, q] = diagram_masks(sample, v);
    let cloud = sample.cloud();
    DiagramSample::new(
        cloud.filter(|i| p[i]),
        cloud.filter(|i| pq[i]),
        cloud.filter(|i| q[i]),
    )
}

/// Čech filtrations of the three components with the inclusions of the link.
#[derive(Debug, Clone)]
pub struct StratifiedFiltration {
    pub diagram: DiagramSample,
    pub p: FilteredComplex,
    pub pq: FilteredComplex,
    pub q: FilteredComplex,
    pub pq_to_p: ComplexInclusion,
    pub pq_to_q: ComplexInclusion,
    pub caps: ComplexCaps,
}

pub fn stratified_cech(diagram: &DiagramSample, caps: ComplexCaps) -> Result<StratifiedFiltration> {
    let build = |c| cech_filtration(c, caps.max_dim, caps.max_radius);
    let (p, (pq, q)) = rayon::join(
        || build(diagram.p()),
        || rayon::join(|| build(diagram.pq()), || build(diagram.q())),
    );
    let (p, pq, q) = (p?, pq?, q?);
    let pq_to_p = inclusion_of_subsample(&pq, diagram.pq(), &p, diagram.p())?;
    let pq_to_q = inclusion_of_subsample(&pq, diagram.pq(), &q, diagram.q())?;
    Ok(StratifiedFiltration {
        diagram: diagram.clone(),
        p,
        pq,
        q,
        pq_to_p,
        pq_to_q,
        caps,
    })
}

/// Maps on components induced by the two link inclusions at one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H0MapPair {
    pub scale: f64,
    pub pq_to_p: H0Map,
    pub pq_to_q: H0Map,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratifiedBarcode {
    pub p: Barcode,
    pub pq: Barcode,
    pub q: Barcode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0_maps: Option<Vec<H0MapPair>>,
    /// Radius cap of the filtrations; classes alive there are reported
    /// as infinite.
    #[serde(default = "default_cap")]
    pub max_radius: f64,
}

fn default_cap() -> f64 {
    f64::INFINITY
}

impl StratifiedBarcode {
    pub fn flags(&self) -> [&Barcode; 3] {
        [&self.p, &self.pq, &self.q]
    }

    /// Live bar counts `(p, pq, q)` in a degree at scale `alpha`.
    pub fn live_counts(&self, degree: usize, alpha: f64) -> [usize; 3] {
        self.flags().map(|b| b.live_count(degree, alpha))
    }
}

/// Per-flag barcodes, with component maps at each requested scale.
pub fn stratified_barcodes(
    filtration: &StratifiedFiltration,
    h0_scales: &[f64],
) -> Result<StratifiedBarcode> {
    let (p, (pq, q)) = rayon::join(
        || reduce_barcodes(&filtration.p),
        || {
            rayon::join(
                || reduce_barcodes(&filtration.pq),
                || reduce_barcodes(&filtration.q),
            )
        },
    );
    let h0_maps = if h0_scales.is_empty() {
        None
    } else {
        Some(
            h0_scales
                .iter()
                .map(|&alpha| {
                    Ok(H0MapPair {
                        scale: alpha,
                        pq_to_p: h0_induced_map(
                            &filtration.pq,
                            &filtration.p,
                            &filtration.pq_to_p,
                            alpha,
                        )?,
                        pq_to_q: h0_induced_map(
                            &filtration.pq,
                            &filtration.q,
                            &filtration.pq_to_q,
                            alpha,
                        )?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )
    };
    Ok(StratifiedBarcode {
        p,
        pq,
        q,
        h0_maps,
        max_radius: filtration.caps.max_radius,
    })
}

/// Thickened stratification diagram of a stratified sample at parameter `v`.
pub fn epers(
    sample: &StratifiedSample,
    v: &DiagramParams,
    caps: ComplexCaps,
) -> Result<StratifiedFiltration> {
    stratified_cech(&diagification(&strong_str(sample), v)?, caps)
}

/// `epers` over a finite grid of parameters. Comparable parameters are
/// checked to give nested diagrams.
pub fn epers_grid(
    sample: &StratifiedSample,
    grid: &[DiagramParams],
    caps: ComplexCaps,
) -> Result<Vec<StratifiedFiltration>> {
    for v in grid {
        v.validate()?;
    }
    let strong = strong_str(sample);
    let masks: Vec<[Vec<bool>; 3]> = grid.iter().map(|v| diagram_masks(&strong, v)).collect();
    for (a, va) in grid.iter().enumerate() {
        for (b, vb) in grid.iter().enumerate() {
            if a != b && va.le(vb) {
                for k in 0..3 {
                    if masks[a][k].iter().zip(&masks[b][k]).any(|(&x, &y)| x && !y) {
                        return Err(invalid(format!(
                            "diagram at ({}, {}) is not contained in the one at ({}, {})",
                            va.v_low, va.v_up, vb.v_low, vb.v_up
                        )));
                    }
                }
            }
        }
    }
    grid.par_iter()
        .map(|v| stratified_cech(&diagification(&strong, v)?, caps))
        .collect()
}

/// Max over flags of the bottleneck distance in one degree. Both sides are
/// cut at the smaller radius cap, with surviving classes ending there.
pub fn diagram_barcode_distance(
    a: &StratifiedBarcode,
    b: &StratifiedBarcode,
    degree: usize,
) -> f64 {
    let cap = a.max_radius.min(b.max_radius);
    a.flags()
        .iter()
        .zip(b.flags())
        .map(|(x, y)| {
            if cap.is_finite() {
                bottleneck(x.truncated(cap).bars(degree), y.truncated(cap).bars(degree))
            } else {
                bottleneck(x.bars(degree), y.bars(degree))
            }
        })
        .fold(0.0, f64::max)
}
