//! Magnifications ζ(X − x) ∩ B₁(0), magnification bundles and tangent-cone
//! probes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::index::GridIndex;
use crate::sample_spaces::{dist, BundleSample, LocalSample, PointCloud, UNIT_BALL_SLACK};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnificationParams {
    pub zeta: f64,
}

impl MagnificationParams {
    pub fn new(zeta: f64) -> Result<Self> {
        check_zeta(zeta)?;
        Ok(Self { zeta })
    }
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "magnification factor must be positive, got {zeta}"
        )))
    }
}

fn rescale(
    cloud: &PointCloud,
    x: &[f64],
    zeta: f64,
    members: impl Iterator<Item = usize>,
) -> LocalSample {
    let mut coords = Vec::new();
    for j in members {
        let y = cloud.point(j);
        if zeta * dist(y, x) <= 1.0 + UNIT_BALL_SLACK {
            coords.extend(y.iter().zip(x).map(|(a, b)| zeta * (a - b)));
        }
    }
    LocalSample::new(
        PointCloud::from_flat(cloud.dim(), coords).expect("coordinates match dimension"),
    )
}

/// Points `y` of `cloud` with `zeta * |y - x| <= 1`, mapped to `zeta * (y - x)`.
/// The centre need not be a point of the cloud.
pub fn magnify(cloud: &PointCloud, x: &[f64], zeta: f64) -> Result<LocalSample> {
    check_zeta(zeta)?;
    if x.len() != cloud.dim() {
        return Err(Error::DimensionMismatch {
            expected: cloud.dim(),
            found: x.len(),
        });
    }
    Ok(rescale(cloud, x, zeta, 0..cloud.len()))
}

/// The cloud itself as base, with the magnification at every point as fiber.
pub fn magnification_bundle(cloud: &PointCloud, zeta: f64) -> Result<BundleSample> {
    check_zeta(zeta)?;
    let radius = 1.0 / zeta;
    let index = GridIndex::new(cloud, radius);
    let fibers: Vec<LocalSample> = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let x = cloud.point(i);
            // slightly wider query, the exact test happens in `rescale`
            let near = index.within(cloud, x, radius * (1.0 + 1e-9));
            rescale(cloud, x, zeta, near.into_iter())
        })
        .collect();
    BundleSample::new(cloud.clone(), fibers)
}

/// Magnifications at `x` along a strictly increasing schedule of factors.
pub fn tangent_cone_estimate(
    cloud: &PointCloud,
    x: &[f64],
    schedule: &[f64],
) -> Result<Vec<LocalSample>> {
    if schedule.is_empty() {
        return Err(invalid("empty magnification schedule"));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid(
            "magnification schedule must be strictly increasing",
        ));
    }
    schedule.iter().map(|&z| magnify(cloud, x, z)).collect()
}
