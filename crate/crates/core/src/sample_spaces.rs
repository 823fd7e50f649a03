//! Finite sample spaces and their (extended) metrics.
//!
//! All distances take values in `[0, +inf]`. A directed distance from a
//! nonempty set to the empty set is `+inf`, from the empty set to anything
//! it is `0`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::index::GridIndex;
use crate::union_find::UnionFind;

#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A finite multiset of points in `R^N`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("ambient dimension must be positive"));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            check_dim(dim, p.len())?;
            coords.extend(p);
        }
        Ok(Self { dim, coords })
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("ambient dimension must be positive"));
        }
        if coords.len() % dim != 0 {
            return Err(Error::Data(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn empty(dim: usize) -> Self {
        assert!(dim > 0, "ambient dimension must be positive");
        Self {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        check_dim(self.dim, p.len())?;
        self.coords.extend_from_slice(p);
        Ok(())
    }

    /// Sub-cloud of the points at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud {
            dim: self.dim,
            coords,
        }
    }

    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> PointCloud {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(i)).collect();
        self.select(&idx)
    }

    pub fn map_points(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<PointCloud> {
        let pts: Vec<Vec<f64>> = self.iter().map(&mut f).collect();
        if pts.is_empty() {
            return Ok(PointCloud::empty(self.dim));
        }
        let dim = pts[0].len();
        PointCloud::new(dim, pts)
    }

    pub fn translated(&self, t: &[f64]) -> Result<PointCloud> {
        check_dim(self.dim, t.len())?;
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(t).map(|(a, b)| a + b))
            .collect();
        Ok(PointCloud {
            dim: self.dim,
            coords,
        })
    }

    pub fn scaled(&self, c: f64) -> PointCloud {
        PointCloud {
            dim: self.dim,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.iter().map(norm).fold(0.0, f64::max)
    }

    pub fn concat(&self, other: &PointCloud) -> Result<PointCloud> {
        check_dim(self.dim, other.dim)?;
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(PointCloud {
            dim: self.dim,
            coords,
        })
    }

    /// Greedy net: indices of a subset such that every point lies within
    /// `spacing` of a selected one and selected points are more than
    /// `spacing` apart. Scans points in index order.
    pub fn greedy_net(&self, spacing: f64) -> Vec<usize> {
        if self.is_empty() {
            return Vec::new();
        }
        if spacing <= 0.0 {
            return (0..self.len()).collect();
        }
        let index = GridIndex::new(self, spacing);
        let mut covered = vec![false; self.len()];
        let mut chosen = Vec::new();
        for i in 0..self.len() {
            if covered[i] {
                continue;
            }
            chosen.push(i);
            for j in index.within(self, self.point(i), spacing) {
                covered[j] = true;
            }
        }
        chosen
    }

    /// Bit patterns of every point, used for exact membership tests.
    pub(crate) fn keys(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        self.iter().map(|p| p.iter().map(|c| c.to_bits()).collect())
    }
}

/// Groups the points of `cloud` into connected components of the graph
/// joining points at distance at most `radius`. Clusters are listed by their
/// smallest member index; members are ascending.
pub fn clusters(cloud: &PointCloud, radius: f64) -> Vec<Vec<usize>> {
    let n = cloud.len();
    if n == 0 {
        return Vec::new();
    }
    let mut uf = UnionFind::new(n);
    let index = GridIndex::new(cloud, radius.max(1e-12));
    for i in 0..n {
        for j in index.within(cloud, cloud.point(i), radius) {
            if j > i {
                uf.union(i, j);
            }
        }
    }
    uf.groups()
}

pub fn dist_to_set(x: &[f64], set: &PointCloud) -> Result<f64> {
    check_dim(set.dim(), x.len())?;
    Ok(set
        .iter()
        .map(|p| sq_dist(p, x))
        .fold(f64::INFINITY, f64::min)
        .sqrt())
}

/// `sup_{x in a} inf_{y in b} |x - y|`.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    if a.is_empty() {
        return Ok(0.0);
    }
    if b.is_empty() {
        return Ok(f64::INFINITY);
    }
    let mut worst = 0.0f64;
    for x in a.iter() {
        let mut best = f64::INFINITY;
        for y in b.iter() {
            let d = sq_dist(x, y);
            if d < best {
                best = d;
                // x cannot raise the running maximum any more
                if best <= worst {
                    break;
                }
            }
        }
        worst = worst.max(best);
    }
    Ok(worst.sqrt())
}

pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Whether `a` lies in the closed `alpha`-thickening of `b`.
pub fn within_thickening(a: &PointCloud, b: &PointCloud, alpha: f64) -> Result<bool> {
    Ok(directed_hausdorff(a, b)? <= alpha)
}

/// A point cloud together with its singular part (the `p`-stratum).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratifiedSample {
    cloud: PointCloud,
    singular: Vec<bool>,
}

impl StratifiedSample {
    pub fn new(cloud: PointCloud, singular: Vec<bool>) -> Result<Self> {
        if singular.len() != cloud.len() {
            return Err(Error::Data(format!(
                "singular mask has {} entries for {} points",
                singular.len(),
                cloud.len()
            )));
        }
        Ok(Self { cloud, singular })
    }

    /// Builds a stratified sample whose singular part is `singular`,
    /// appended after the regular points.
    pub fn from_parts(regular: &PointCloud, singular: &PointCloud) -> Result<Self> {
        let cloud = regular.concat(singular)?;
        let mut mask = vec![false; regular.len()];
        mask.extend(std::iter::repeat(true).take(singular.len()));
        Self::new(cloud, mask)
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn singular_mask(&self) -> &[bool] {
        &self.singular
    }

    pub fn singular_part(&self) -> PointCloud {
        self.cloud.filter(|i| self.singular[i])
    }

    pub fn singular_count(&self) -> usize {
        self.singular.iter().filter(|&&b| b).count()
    }

    pub fn dim(&self) -> usize {
        self.cloud.dim()
    }

    /// Greedy nets of the singular and regular parts taken separately, so
    /// that the result is within `spacing` of `self` in stratified distance.
    pub fn subsample(&self, spacing: f64) -> StratifiedSample {
        let sing: Vec<usize> = (0..self.cloud.len())
            .filter(|&i| self.singular[i])
            .collect();
        let reg: Vec<usize> = (0..self.cloud.len())
            .filter(|&i| !self.singular[i])
            .collect();
        let mut keep = Vec::new();
        for part in [&sing, &reg] {
            let sub = self.cloud.select(part);
            keep.extend(sub.greedy_net(spacing).into_iter().map(|k| part[k]));
        }
        keep.sort_unstable();
        let cloud = self.cloud.select(&keep);
        let singular = keep.iter().map(|&i| self.singular[i]).collect();
        StratifiedSample { cloud, singular }
    }
}

/// `max{d_H(X, X'), d_H(X_p, X'_p)}`.
pub fn stratified_distance(a: &StratifiedSample, b: &StratifiedSample) -> Result<f64> {
    let whole = hausdorff(&a.cloud, &b.cloud)?;
    let sing = hausdorff(&a.singular_part(), &b.singular_part())?;
    Ok(whole.max(sing))
}

/// A point cloud with a value `s(x) in [0, 1]` per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StronglyStratifiedSample {
    cloud: PointCloud,
    s: Vec<f64>,
}

impl StronglyStratifiedSample {
    pub fn new(cloud: PointCloud, s: Vec<f64>) -> Result<Self> {
        if s.len() != cloud.len() {
            return Err(Error::Data(format!(
                "{} s-values for {} points",
                s.len(),
                cloud.len()
            )));
        }
        if let Some(bad) = s.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Data(format!("s-value {bad} outside [0, 1]")));
        }
        Ok(Self { cloud, s })
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn values(&self) -> &[f64] {
        &self.s
    }

    pub fn dim(&self) -> usize {
        self.cloud.dim()
    }
}

fn directed_graph_distance(a: &StronglyStratifiedSample, b: &StronglyStratifiedSample) -> f64 {
    if a.cloud.is_empty() {
        return 0.0;
    }
    if b.cloud.is_empty() {
        return f64::INFINITY;
    }
    a.cloud
        .iter()
        .zip(&a.s)
        .map(|(x, sx)| {
            b.cloud
                .iter()
                .zip(&b.s)
                .map(|(y, sy)| dist(x, y).max((sx - sy).abs()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between the graphs of `s` and `s'` in `R^N x [0, 1]`
/// with the max metric.
pub fn strong_distance(a: &StronglyStratifiedSample, b: &StronglyStratifiedSample) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    Ok(directed_graph_distance(a, b).max(directed_graph_distance(b, a)))
}

/// The three pieces `(D_p, D_pq, D_q)` of a stratification diagram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramSample {
    p: PointCloud,
    pq: PointCloud,
    q: PointCloud,
}

impl DiagramSample {
    /// Checks that every point of `pq` occurs (bitwise) in `p` and in `q`,
    /// with multiplicity.
    pub fn new(p: PointCloud, pq: PointCloud, q: PointCloud) -> Result<Self> {
        check_dim(p.dim(), pq.dim())?;
        check_dim(p.dim(), q.dim())?;
        for (name, sup) in [("p", &p), ("q", &q)] {
            let mut avail: HashMap<Vec<u64>, usize> = HashMap::new();
            for k in sup.keys() {
                *avail.entry(k).or_default() += 1;
            }
            for k in pq.keys() {
                match avail.get_mut(&k) {
                    Some(c) if *c > 0 => *c -= 1,
                    _ => {
                        return Err(Error::NotSubsample(format!(
                            "link point not contained in the {name} component"
                        )))
                    }
                }
            }
        }
        Ok(Self { p, pq, q })
    }

    pub fn p(&self) -> &PointCloud {
        &self.p
    }

    pub fn pq(&self) -> &PointCloud {
        &self.pq
    }

    pub fn q(&self) -> &PointCloud {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn components(&self) -> [&PointCloud; 3] {
        [&self.p, &self.pq, &self.q]
    }

    pub fn translated(&self, t: &[f64]) -> Result<DiagramSample> {
        Ok(DiagramSample {
            p: self.p.translated(t)?,
            pq: self.pq.translated(t)?,
            q: self.q.translated(t)?,
        })
    }
}

pub fn diagram_distance(a: &DiagramSample, b: &DiagramSample) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    let mut d = 0.0f64;
    for (x, y) in a.components().into_iter().zip(b.components()) {
        d = d.max(hausdorff(x, y)?);
    }
    Ok(d)
}

/// Slack used when truncating to the closed unit ball, so that points put
/// on the sphere by `zeta * (y - x)` survive rounding.
pub const UNIT_BALL_SLACK: f64 = 1e-12;

/// A sample inside the closed unit ball around the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSample {
    cloud: PointCloud,
}

impl LocalSample {
    /// Drops every point of norm greater than one.
    pub fn new(cloud: PointCloud) -> Self {
        let kept = cloud.filter(|i| norm(cloud.point(i)) <= 1.0 + UNIT_BALL_SLACK);
        let dim = kept.dim();
        let coords = kept
            .iter()
            .flat_map(|p| {
                let n = norm(p);
                let scale = if n > 1.0 { 1.0 / n } else { 1.0 };
                p.iter().map(move |c| c * scale).collect::<Vec<_>>()
            })
            .collect();
        LocalSample {
            cloud: PointCloud { dim, coords },
        }
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.cloud.dim()
    }
}

pub fn local_distance(a: &LocalSample, b: &LocalSample) -> Result<f64> {
    hausdorff(&a.cloud, &b.cloud)
}

/// A base cloud with one local sample (fiber) attached to every base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleSample {
    base: PointCloud,
    fibers: Vec<LocalSample>,
}

impl BundleSample {
    pub fn new(base: PointCloud, fibers: Vec<LocalSample>) -> Result<Self> {
        if fibers.len() != base.len() {
            return Err(Error::Data(format!(
                "{} fibers for {} base points",
                fibers.len(),
                base.len()
            )));
        }
        Ok(Self { base, fibers })
    }

    pub fn base(&self) -> &PointCloud {
        &self.base
    }

    pub fn fibers(&self) -> &[LocalSample] {
        &self.fibers
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }
}

fn directed_bundle_distance(a: &BundleSample, b: &BundleSample) -> Result<f64> {
    if a.base.is_empty() {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    for (x, fx) in a.base.iter().zip(&a.fibers) {
        let mut best = f64::INFINITY;
        for (y, fy) in b.base.iter().zip(&b.fibers) {
            let base = dist(x, y);
            if base >= best {
                continue;
            }
            best = best.min(base.max(local_distance(fx, fy)?));
        }
        worst = worst.max(best);
    }
    Ok(worst)
}

/// Sup-inf distance over (base point, fiber) pairs, with the max of the base
/// distance and the fiber distance.
pub fn bundle_distance(a: &BundleSample, b: &BundleSample) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    Ok(directed_bundle_distance(a, b)?.max(directed_bundle_distance(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pc(pts: &[&[f64]]) -> PointCloud {
        PointCloud::new(pts[0].len(), pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn dist_to_set_examples() {
        assert_eq!(dist_to_set(&[0.0, 0.0], &pc(&[&[3.0, 4.0]])).unwrap(), 5.0);
        assert_eq!(dist_to_set(&[3.0, 4.0], &pc(&[&[3.0, 4.0]])).unwrap(), 0.0);
        let d = dist_to_set(&[1.0, 1.0], &pc(&[&[0.0, 0.0], &[2.0, 0.0]])).unwrap();
        assert_abs_diff_eq!(d, 2f64.sqrt(), epsilon = 1e-12);
        assert!(dist_to_set(&[1.0, 1.0], &PointCloud::empty(2))
            .unwrap()
            .is_infinite());
        assert!(matches!(
            dist_to_set(&[1.0], &pc(&[&[0.0, 0.0]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hausdorff_conventions() {
        let e = PointCloud::empty(2);
        let x = pc(&[&[0.0, 0.0]]);
        assert_eq!(hausdorff(&e, &e).unwrap(), 0.0);
        assert!(hausdorff(&x, &e).unwrap().is_infinite());
        assert!(hausdorff(&e, &x).unwrap().is_infinite());
        assert_eq!(hausdorff(&x, &pc(&[&[3.0, 4.0]])).unwrap(), 5.0);
        assert!(hausdorff(&x, &PointCloud::empty(3)).is_err());
    }

    #[test]
    fn stratified_distance_examples() {
        let x = pc(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 1.0]]);
        let s = StratifiedSample::new(x.clone(), vec![true, false, false]).unwrap();
        assert_eq!(stratified_distance(&s, &s).unwrap(), 0.0);
        let moved = StratifiedSample::new(
            x.translated(&[0.25, 0.0]).unwrap(),
            vec![true, false, false],
        )
        .unwrap();
        assert_abs_diff_eq!(
            stratified_distance(&s, &moved).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        let none = StratifiedSample::new(x, vec![false; 3]).unwrap();
        assert!(stratified_distance(&s, &none).unwrap().is_infinite());
    }

    #[test]
    fn strong_distance_shift_in_s() {
        let x = pc(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 3.0]]);
        let s = vec![0.0, 0.3, 0.8];
        let delta = 0.15;
        let a = StronglyStratifiedSample::new(x.clone(), s.clone()).unwrap();
        let b = StronglyStratifiedSample::new(x, s.iter().map(|v| (v + delta).min(1.0)).collect())
            .unwrap();
        assert_eq!(strong_distance(&a, &a).unwrap(), 0.0);
        assert_abs_diff_eq!(strong_distance(&a, &b).unwrap(), delta, epsilon = 1e-12);
    }

    #[test]
    fn strong_sample_rejects_out_of_range() {
        let x = pc(&[&[0.0]]);
        assert!(StronglyStratifiedSample::new(x.clone(), vec![1.5]).is_err());
        assert!(StronglyStratifiedSample::new(x, vec![]).is_err());
    }

    #[test]
    fn diagram_sample_requires_shared_points() {
        let p = pc(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let q = pc(&[&[1.0, 0.0], &[2.0, 0.0]]);
        let pq = pc(&[&[1.0, 0.0]]);
        let d = DiagramSample::new(p.clone(), pq, q.clone()).unwrap();
        assert_eq!(diagram_distance(&d, &d).unwrap(), 0.0);
        let moved = d.translated(&[0.0, 0.3]).unwrap();
        assert_abs_diff_eq!(diagram_distance(&d, &moved).unwrap(), 0.3, epsilon = 1e-12);
        assert!(DiagramSample::new(p, pc(&[&[5.0, 0.0]]), q).is_err());
    }

    #[test]
    fn local_sample_truncates() {
        let l = LocalSample::new(pc(&[&[0.0, 0.0], &[0.6, 0.8], &[1.0, 0.5]]));
        assert_eq!(l.len(), 2);
        let zero = LocalSample::new(pc(&[&[0.0, 0.0]]));
        let half = LocalSample::new(pc(&[&[0.5, 0.0]]));
        assert_eq!(local_distance(&zero, &zero).unwrap(), 0.0);
        assert_abs_diff_eq!(local_distance(&zero, &half).unwrap(), 0.5, epsilon = 1e-15);
    }

    fn segment(angle: f64, step: f64) -> LocalSample {
        let n = (1.0 / step).round() as i64;
        let pts = (-n..=n)
            .map(|k| {
                let t = k as f64 * step;
                vec![t * angle.cos(), t * angle.sin()]
            })
            .collect();
        LocalSample::new(PointCloud::new(2, pts).unwrap())
    }

    #[test]
    fn local_distance_of_two_lines_matches_sine() {
        let step = 1e-3;
        for theta in [0.1f64, 0.5, 1.0, std::f64::consts::FRAC_PI_2] {
            let d = local_distance(&segment(0.0, step), &segment(theta, step)).unwrap();
            // grid points miss the exact foot by at most step / 2
            assert!((d - theta.sin()).abs() <= step, "theta {theta}: {d}");
        }
    }

    #[test]
    fn bundle_distance_examples() {
        let base = pc(&[&[0.0, 0.0], &[2.0, 0.0]]);
        let f0 = LocalSample::new(pc(&[&[0.0, 0.0], &[0.5, 0.0]]));
        let f1 = LocalSample::new(pc(&[&[0.0, 0.0], &[0.0, 0.9]]));
        let b = BundleSample::new(base.clone(), vec![f0.clone(), f1.clone()]).unwrap();
        assert_eq!(bundle_distance(&b, &b).unwrap(), 0.0);

        let shifted = LocalSample::new(f1.cloud().translated(&[0.0, 0.2]).unwrap());
        let b2 = BundleSample::new(base, vec![f0, shifted.clone()]).unwrap();
        let expect = local_distance(&f1, &shifted).unwrap();
        assert_abs_diff_eq!(bundle_distance(&b, &b2).unwrap(), expect, epsilon = 1e-12);

        let single = |x: f64| {
            BundleSample::new(pc(&[&[x, 0.0]]), vec![LocalSample::new(pc(&[&[0.0, 0.0]]))]).unwrap()
        };
        assert_abs_diff_eq!(
            bundle_distance(&single(0.0), &single(0.3)).unwrap(),
            0.3,
            epsilon = 1e-15
        );
    }

    #[test]
    fn greedy_net_covers_and_separates() {
        let pts: Vec<Vec<f64>> = (0..500)
            .map(|i| {
                let t = i as f64 * 0.013;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let cloud = PointCloud::new(2, pts).unwrap();
        let net = cloud.greedy_net(0.1);
        let sub = cloud.select(&net);
        assert!(directed_hausdorff(&cloud, &sub).unwrap() <= 0.1);
        for (a, i) in net.iter().enumerate() {
            for j in &net[a + 1..] {
                assert!(dist(cloud.point(*i), cloud.point(*j)) > 0.1);
            }
        }
    }

    #[test]
    fn subsample_keeps_stratified_distance_small() {
        let pts: Vec<Vec<f64>> = (0..300).map(|i| vec![i as f64 * 0.01, 0.0]).collect();
        let mask = (0..300).map(|i| i < 20).collect();
        let s = StratifiedSample::new(PointCloud::new(2, pts).unwrap(), mask).unwrap();
        let sub = s.subsample(0.05);
        assert!(sub.cloud().len() < 300);
        assert!(stratified_distance(&s, &sub).unwrap() <= 0.05 + 1e-12);
    }

    #[test]
    fn clusters_by_radius() {
        let x = pc(&[
            &[0.0, 0.0],
            &[0.05, 0.0],
            &[1.0, 0.0],
            &[1.08, 0.0],
            &[3.0, 0.0],
        ]);
        assert_eq!(clusters(&x, 0.1), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(clusters(&x, 5.0).len(), 1);
    }
}
