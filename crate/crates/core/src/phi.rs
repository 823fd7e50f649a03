//! Regularity scores Φ on local samples, the pushforward along a
//! magnification bundle, and the maps between stratified and strongly
//! stratified samples.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::cech_simplices_rooted;
use crate::error::{invalid, Result};
use crate::index::GridIndex;
use crate::localization::magnification_bundle;
use crate::optim::NelderMead;
use crate::persistence::{bottleneck, quotient_barcodes, Bar, Barcode};
use crate::sample_spaces::{
    clusters, norm, sq_dist, BundleSample, LocalSample, PointCloud, StratifiedSample,
    StronglyStratifiedSample,
};

/// Radius of the ball removed in local homology, and the end of its index range.
pub const LOCAL_HOMOLOGY_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiKind {
    Subspace,
    SubspaceDirected,
    LocalHomology,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubspaceSettings {
    /// Grid spacing used to discretize V ∩ B₁.
    pub grid_spacing: f64,
    /// Upper bound on the number of grid points; the spacing grows to respect it.
    pub max_grid_points: usize,
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for SubspaceSettings {
    fn default() -> Self {
        Self {
            grid_spacing: 0.05,
            max_grid_points: 10_000,
            restarts: 3,
            max_iter: 200,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiSpec {
    pub kind: PhiKind,
    /// Dimension of the regular stratum.
    pub q: usize,
    #[serde(default)]
    pub subspace: SubspaceSettings,
}

impl PhiSpec {
    pub fn new(kind: PhiKind, q: usize) -> Self {
        Self {
            kind,
            q,
            subspace: SubspaceSettings::default(),
        }
    }

    pub fn validate(&self, ambient_dim: usize) -> Result<()> {
        if self.q == 0 || self.q > ambient_dim {
            return Err(invalid(format!(
                "regular dimension q = {} must lie in 1..={ambient_dim}",
                self.q
            )));
        }
        let s = &self.subspace;
        if !(s.grid_spacing > 0.0 && s.grid_spacing <= 1.0) {
            return Err(invalid(format!(
                "grid spacing {} outside (0, 1]",
                s.grid_spacing
            )));
        }
        if s.restarts == 0 || s.max_iter == 0 || s.max_grid_points == 0 || !(s.tol > 0.0) {
            return Err(invalid("subspace search settings must be positive"));
        }
        Ok(())
    }
}

/// Persistent local homology of ℝ^q, the target Φ_LH compares against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBarcode {
    pub q: usize,
    pub barcode: Barcode,
}

impl ReferenceBarcode {
    /// The continuum answer: a single class in degree q alive on all of
    /// `[0, 1/2)`.
    pub fn analytic(q: usize) -> Self {
        let mut degrees = vec![Vec::new(); q + 1];
        degrees[q].push(Bar::new(0.0, LOCAL_HOMOLOGY_RADIUS));
        Self {
            q,
            barcode: Barcode::new(degrees),
        }
    }

    /// Local homology of a grid sample of the unit q-disk.
    pub fn grid(q: usize, spacing: f64) -> Result<Self> {
        if q == 0 || !(spacing > 0.0) {
            return Err(invalid("grid reference needs q >= 1 and positive spacing"));
        }
        let pts = disk_grid(q, spacing);
        let cloud = PointCloud::new(q, pts)?;
        Ok(Self {
            q,
            barcode: local_homology_barcode(&LocalSample::new(cloud), q),
        })
    }
}

/// Points of the lattice `spacing * Z^q` inside the closed unit ball.
pub fn disk_grid(q: usize, spacing: f64) -> Vec<Vec<f64>> {
    let k = (1.0 / spacing).floor() as i64;
    let mut out = Vec::new();
    let mut idx = vec![-k; q];
    loop {
        let p: Vec<f64> = idx.iter().map(|&i| i as f64 * spacing).collect();
        if norm(&p) <= 1.0 + 1e-12 {
            out.push(p);
        }
        let mut axis = 0;
        loop {
            if axis == q {
                return out;
            }
            idx[axis] += 1;
            if idx[axis] <= k {
                break;
            }
            idx[axis] = -k;
            axis += 1;
        }
    }
}

fn disk_grid_capped(q: usize, spacing: f64, max_points: usize) -> Vec<Vec<f64>> {
    let mut h = spacing;
    loop {
        let g = disk_grid(q, h);
        if g.len() <= max_points {
            return g;
        }
        h *= 1.1;
    }
}

/// Orthonormal basis (as columns) of the span of `e + e_perp * a`, where the
/// chart parameters `a` fill an (N−q)×q matrix column by column.
fn chart_basis(e: &DMatrix<f64>, e_perp: &DMatrix<f64>, a: &[f64]) -> DMatrix<f64> {
    let q = e.ncols();
    if e_perp.ncols() == 0 {
        return e.clone();
    }
    let a = DMatrix::from_column_slice(e_perp.ncols(), q, a);
    let m = e + e_perp * a;
    m.qr().q().columns(0, q).into_owned()
}

struct SubspaceProblem<'a> {
    points: &'a PointCloud,
    /// Disk grid in V-coordinates; empty for the directed variant.
    grid: Vec<DVector<f64>>,
}

impl SubspaceProblem<'_> {
    fn residual_sup(&self, basis: &DMatrix<f64>) -> f64 {
        let n = basis.nrows();
        let b = basis.as_slice();
        let mut worst = 0.0f64;
        for x in self.points.iter() {
            let mut proj2 = 0.0;
            for col in b.chunks_exact(n) {
                let t: f64 = col.iter().zip(x).map(|(u, v)| u * v).sum();
                proj2 += t * t;
            }
            let x2: f64 = x.iter().map(|v| v * v).sum();
            worst = worst.max((x2 - proj2).max(0.0));
        }
        worst.sqrt()
    }

    fn coverage_sup(&self, basis: &DMatrix<f64>, floor: f64) -> f64 {
        // directed Hausdorff from the grid to the sample, with early exit
        let n = basis.nrows();
        let b = basis.as_slice();
        let mut y = vec![0.0; n];
        let mut worst2 = floor * floor;
        for c in &self.grid {
            y.iter_mut().for_each(|v| *v = 0.0);
            for (col, ck) in b.chunks_exact(n).zip(c.iter()) {
                for (yi, u) in y.iter_mut().zip(col) {
                    *yi += u * ck;
                }
            }
            let mut best = f64::INFINITY;
            for p in self.points.iter() {
                let d = sq_dist(&y, p);
                if d < best {
                    best = d;
                    if best <= worst2 {
                        break;
                    }
                }
            }
            worst2 = worst2.max(best);
        }
        worst2.sqrt()
    }

    fn objective(&self, basis: &DMatrix<f64>) -> f64 {
        let r = self.residual_sup(basis);
        if self.grid.is_empty() {
            r
        } else {
            self.coverage_sup(basis, r)
        }
    }
}

/// Principal frame of the uncentred second moments, largest first.
fn principal_frame(points: &PointCloud) -> DMatrix<f64> {
    let n = points.dim();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for p in points.iter() {
        let v = DVector::from_column_slice(p);
        m += &v * v.transpose();
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .total_cmp(&eig.eigenvalues[a])
            .then(a.cmp(&b))
    });
    DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    )
}

fn best_plane_distance(
    sample: &LocalSample,
    q: usize,
    settings: &SubspaceSettings,
    two_sided: bool,
) -> f64 {
    let points = sample.cloud();
    let n = points.dim();
    let grid = if two_sided {
        disk_grid_capped(q, settings.grid_spacing, settings.max_grid_points)
            .into_iter()
            .map(DVector::from_vec)
            .collect()
    } else {
        Vec::new()
    };
    let problem = SubspaceProblem { points, grid };
    let frame = principal_frame(points);
    if q >= n {
        return problem.objective(&DMatrix::identity(n, n));
    }

    let nm = NelderMead {
        max_iter: settings.max_iter,
        tol: settings.tol,
        step: 0.25,
    };
    let params = q * (n - q);
    let mut best = f64::INFINITY;
    for restart in 0..settings.restarts {
        // later restarts tilt the seed frame within the plane of its first
        // kept and first dropped direction
        let theta = std::f64::consts::PI * restart as f64 / settings.restarts as f64;
        let mut f = frame.clone();
        let (v, w) = (frame.column(0).into_owned(), frame.column(q).into_owned());
        f.set_column(0, &(&v * theta.cos() + &w * theta.sin()));
        f.set_column(q, &(&w * theta.cos() - &v * theta.sin()));
        let e = f.columns(0, q).into_owned();
        let e_perp = f.columns(q, n - q).into_owned();
        let (_, value) = nm.minimize(
            |a| problem.objective(&chart_basis(&e, &e_perp, a)),
            &vec![0.0; params],
        );
        best = best.min(value);
    }
    best
}

/// 1 − min over q-planes V of the truncated Hausdorff distance to V ∩ B₁.
pub fn phi_subspace_with(sample: &LocalSample, q: usize, settings: &SubspaceSettings) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    (1.0 - best_plane_distance(sample, q, settings, true)).clamp(0.0, 1.0)
}

pub fn phi_subspace(sample: &LocalSample, q: usize) -> f64 {
    phi_subspace_with(sample, q, &SubspaceSettings::default())
}

/// One-sided variant: only how far the sample sticks out of the plane.
pub fn phi_subspace_directed_with(
    sample: &LocalSample,
    q: usize,
    settings: &SubspaceSettings,
) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    (1.0 - best_plane_distance(sample, q, settings, false)).clamp(0.0, 1.0)
}

pub fn phi_subspace_directed(sample: &LocalSample, q: usize) -> f64 {
    phi_subspace_directed_with(sample, q, &SubspaceSettings::default())
}

/// Čech persistence of the pair (sample, part outside the open half-ball)
/// up to degree `q`, restricted to `[0, 1/2)`.
pub fn local_homology_barcode(sample: &LocalSample, q: usize) -> Barcode {
    let cloud = sample.cloud();
    // inner points first so that quotient simplices are exactly the rooted ones
    let mut order: Vec<usize> = (0..cloud.len()).collect();
    order.sort_by_key(|&i| norm(cloud.point(i)) >= LOCAL_HOMOLOGY_RADIUS);
    let inner = order
        .iter()
        .take_while(|&&i| norm(cloud.point(i)) < LOCAL_HOMOLOGY_RADIUS)
        .count();
    let reordered = cloud.select(&order);
    let simplices = cech_simplices_rooted(&reordered, q + 1, LOCAL_HOMOLOGY_RADIUS, inner)
        .expect("radius cap is positive");
    quotient_barcodes(simplices).truncated(LOCAL_HOMOLOGY_RADIUS)
}

pub fn phi_local_homology(
    sample: &LocalSample,
    q: usize,
    reference: &ReferenceBarcode,
) -> Result<f64> {
    if reference.q != q {
        return Err(invalid(format!(
            "reference is for q = {}, not {q}",
            reference.q
        )));
    }
    if sample.is_empty() {
        return Ok(0.0);
    }
    let bc = local_homology_barcode(sample, q);
    let worst = (0..=q)
        .map(|i| bottleneck(bc.bars(i), reference.barcode.bars(i)))
        .fold(0.0, f64::max);
    Ok((1.0 - 2.0 * worst).clamp(0.0, 1.0))
}

/// A configured Φ ready to evaluate local samples.
#[derive(Debug, Clone)]
pub struct Phi {
    spec: PhiSpec,
    reference: ReferenceBarcode,
}

impl Phi {
    pub fn new(spec: PhiSpec) -> Result<Self> {
        if spec.q == 0 {
            return Err(invalid("regular dimension q must be positive"));
        }
        Ok(Self {
            spec,
            reference: ReferenceBarcode::analytic(spec.q),
        })
    }

    pub fn with_reference(spec: PhiSpec, reference: ReferenceBarcode) -> Result<Self> {
        if reference.q != spec.q {
            return Err(invalid("reference barcode dimension differs from q"));
        }
        Ok(Self { spec, reference })
    }

    pub fn spec(&self) -> &PhiSpec {
        &self.spec
    }

    pub fn eval(&self, sample: &LocalSample) -> f64 {
        let q = self.spec.q;
        match self.spec.kind {
            PhiKind::Subspace => phi_subspace_with(sample, q, &self.spec.subspace),
            PhiKind::SubspaceDirected => phi_subspace_directed_with(sample, q, &self.spec.subspace),
            PhiKind::LocalHomology => {
                phi_local_homology(sample, q, &self.reference).expect("reference matches q")
            }
        }
    }
}

/// s(x) = Φ(fiber at x).
pub fn phi_pushforward(bundle: &BundleSample, phi: &Phi) -> Result<StronglyStratifiedSample> {
    phi.spec.validate(bundle.dim())?;
    let s: Vec<f64> = bundle.fibers().par_iter().map(|f| phi.eval(f)).collect();
    StronglyStratifiedSample::new(bundle.base().clone(), s)
}

/// s(x) = min(distance to the singular part, 1); identically 1 without a
/// singular part.
pub fn strong_str(sample: &StratifiedSample) -> StronglyStratifiedSample {
    let cloud = sample.cloud();
    let singular = sample.singular_part();
    let s: Vec<f64> = if singular.is_empty() {
        vec![1.0; cloud.len()]
    } else {
        let index = GridIndex::new(&singular, 1.0);
        (0..cloud.len())
            .into_par_iter()
            .map(|i| {
                let x = cloud.point(i);
                index
                    .within(&singular, x, 1.0)
                    .into_iter()
                    .map(|j| sq_dist(x, singular.point(j)))
                    .fold(1.0f64, f64::min)
                    .sqrt()
            })
            .collect()
    };
    StronglyStratifiedSample::new(cloud.clone(), s).expect("values lie in [0, 1]")
}

/// Singular part = {s ≤ u}.
pub fn forget_str(sample: &StronglyStratifiedSample, u: f64) -> Result<StratifiedSample> {
    if !(0.0..=1.0).contains(&u) {
        return Err(invalid(format!("threshold u = {u} outside [0, 1]")));
    }
    let mask = sample.values().iter().map(|&s| s <= u).collect();
    StratifiedSample::new(sample.cloud().clone(), mask)
}

/// Learned stratification: points whose ζ-magnification scores Φ ≤ u are singular.
pub fn phi_stratify(cloud: &PointCloud, zeta: f64, u: f64, phi: &Phi) -> Result<StratifiedSample> {
    if !(0.0..=1.0).contains(&u) {
        return Err(invalid(format!("threshold u = {u} outside [0, 1]")));
    }
    let bundle = magnification_bundle(cloud, zeta)?;
    forget_str(&phi_pushforward(&bundle, phi)?, u)
}

/// Connected components of the singular part at a clustering radius, as
/// indices into the full cloud.
pub fn singular_clusters(sample: &StratifiedSample, radius: f64) -> Vec<Vec<usize>> {
    let members: Vec<usize> = (0..sample.cloud().len())
        .filter(|&i| sample.singular_mask()[i])
        .collect();
    clusters(&sample.singular_part(), radius)
        .into_iter()
        .map(|c| c.into_iter().map(|k| members[k]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn line_sample(dir: &[f64], step: f64) -> LocalSample {
        let k = (1.0 / step).round() as i64;
        let pts = (-k..=k)
            .map(|i| dir.iter().map(|d| d * i as f64 * step).collect())
            .collect();
        LocalSample::new(PointCloud::new(dir.len(), pts).unwrap())
    }

    fn cross(step: f64) -> LocalSample {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = line_sample(&[s, s], step);
        let b = line_sample(&[s, -s], step);
        LocalSample::new(a.cloud().concat(b.cloud()).unwrap())
    }

    #[test]
    fn disk_grids() {
        assert_eq!(disk_grid(1, 0.05).len(), 41);
        let g = disk_grid(2, 0.05);
        assert!(g.len() > 1200 && g.len() < 1300);
        assert!(disk_grid_capped(3, 0.05, 10_000).len() <= 10_000);
    }

    #[test]
    fn lines_score_one() {
        let l = line_sample(&[0.6, 0.8], 0.01);
        assert!(phi_subspace(&l, 1) >= 0.95);
        assert_abs_diff_eq!(phi_subspace_directed(&l, 1), 1.0, epsilon = 1e-9);
        let vertical = line_sample(&[0.0, 1.0], 0.01);
        assert!(phi_subspace(&vertical, 1) >= 0.99);
    }

    #[test]
    fn cross_scores() {
        let c = cross(0.01);
        let expected = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(phi_subspace(&c, 1), expected, epsilon = 0.01);
        assert_abs_diff_eq!(phi_subspace_directed(&c, 1), expected, epsilon = 1e-4);
    }

    #[test]
    fn half_disk_is_regular_one_sided() {
        let pts: Vec<Vec<f64>> = disk_grid(2, 0.05)
            .into_iter()
            .filter(|p| p[1] >= 0.0)
            .map(|p| vec![p[0], p[1], 0.0])
            .collect();
        let half = LocalSample::new(PointCloud::new(3, pts).unwrap());
        assert_abs_diff_eq!(phi_subspace_directed(&half, 2), 1.0, epsilon = 1e-9);
        assert!(phi_subspace(&half, 2) < 0.2);
    }

    #[test]
    fn empty_samples_score_zero() {
        let empty = LocalSample::new(PointCloud::empty(2));
        assert_eq!(phi_subspace(&empty, 1), 0.0);
        assert_eq!(phi_subspace_directed(&empty, 1), 0.0);
        assert_eq!(
            phi_local_homology(&empty, 1, &ReferenceBarcode::analytic(1)).unwrap(),
            0.0
        );
    }

    #[test]
    fn local_homology_scores() {
        let r = ReferenceBarcode::analytic(1);
        // births of the relative class lag by half the spacing
        let line = line_sample(&[1.0, 0.0], 0.05);
        assert_abs_diff_eq!(
            phi_local_homology(&line, 1, &r).unwrap(),
            0.95,
            epsilon = 1e-9
        );
        let c = cross(0.05);
        let bc = local_homology_barcode(&c, 1);
        assert_eq!(bc.long_bars(1, 0.3).len(), 3);
        // the two surplus classes are cheapest to send to the diagonal
        let surplus = (2f64.sqrt() / 4.0 - 0.025) / 2.0;
        assert_abs_diff_eq!(
            phi_local_homology(&c, 1, &r).unwrap(),
            1.0 - 2.0 * surplus,
            epsilon = 1e-9
        );
        assert!(phi_local_homology(&c, 2, &r).is_err());
    }

    #[test]
    fn grid_reference_is_close_to_analytic() {
        let grid = ReferenceBarcode::grid(1, 0.05).unwrap();
        let analytic = ReferenceBarcode::analytic(1);
        for i in 0..=1 {
            assert!(bottleneck(grid.barcode.bars(i), analytic.barcode.bars(i)) <= 0.025 + 1e-12);
        }
        let phi = phi_local_homology(
            &LocalSample::new(PointCloud::new(1, disk_grid(1, 0.05)).unwrap()),
            1,
            &grid,
        );
        assert_abs_diff_eq!(phi.unwrap(), 1.0);
    }

    #[test]
    fn strong_and_forget() {
        let cloud =
            PointCloud::new(2, vec![vec![0.0, 0.0], vec![0.3, 0.4], vec![2.0, 0.0]]).unwrap();
        let s = StratifiedSample::new(cloud.clone(), vec![true, false, false]).unwrap();
        assert_eq!(strong_str(&s).values(), &[0.0, 0.5, 1.0]);
        let none = StratifiedSample::new(cloud.clone(), vec![false; 3]).unwrap();
        assert_eq!(strong_str(&none).values(), &[1.0; 3]);

        let t = strong_str(&s);
        assert_eq!(
            forget_str(&t, 0.5).unwrap().singular_mask(),
            &[true, true, false]
        );
        assert_eq!(forget_str(&t, 1.0).unwrap().singular_count(), 3);
        assert!(forget_str(&t, 1.5).is_err());
        let ones = strong_str(&none);
        assert_eq!(forget_str(&ones, 0.99).unwrap().singular_count(), 0);
    }

    #[test]
    fn pushforward_of_empty_fibers() {
        let base = PointCloud::new(2, vec![vec![0.0, 0.0], vec![5.0, 5.0]]).unwrap();
        let fibers = vec![LocalSample::new(PointCloud::empty(2)); 2];
        let bundle = BundleSample::new(base, fibers).unwrap();
        for kind in [
            PhiKind::Subspace,
            PhiKind::SubspaceDirected,
            PhiKind::LocalHomology,
        ] {
            let phi = Phi::new(PhiSpec::new(kind, 1)).unwrap();
            assert_eq!(
                phi_pushforward(&bundle, &phi).unwrap().values(),
                &[0.0, 0.0]
            );
        }
        let phi = Phi::new(PhiSpec::new(PhiKind::Subspace, 3)).unwrap();
        assert!(phi_pushforward(&bundle, &phi).is_err());
    }
}
