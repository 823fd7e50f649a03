//! Seeded samples of the example varieties, their ground-truth
//! stratifications and analytic tangent cones.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sample_spaces::{norm, LocalSample, PointCloud, StratifiedSample};

/// Residual every refined point is pushed below.
pub const REFINE_TOL: f64 = 1e-9;
const MIN_ACCEPTANCE: f64 = 1e-6;
const MIN_TRIALS_BEFORE_GIVING_UP: u64 = 10_000_000;

/// Mixes a stream label into a seed (SplitMix64 finalizer), so that
/// independent parts of a run draw from unrelated generators.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Implicit functions of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Implicit {
    /// x⁴ − x² + y² − s.
    Lemniscate { s: f64 },
    /// x² + y² − r².
    Circle { radius: f64 },
    /// Product of the circles of radius 1/2 about (±1/2, 0).
    TwoCircles,
    /// (x² + y² + z² + 1.44)² − 7.84x² + 1.44y².
    Cyclide,
    /// (ρ − R)² + z² − r²(1 − x/ρ)/2 with ρ = |(x, y)|, R = 1, r = 1/2.
    PinchedTorus,
}

const TORUS_R: f64 = 1.0;
const TORUS_TUBE: f64 = 0.5;

impl Implicit {
    pub fn dim(&self) -> usize {
        match self {
            Implicit::Cyclide | Implicit::PinchedTorus => 3,
            _ => 2,
        }
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        match *self {
            Implicit::Lemniscate { s } => p[0].powi(4) - p[0] * p[0] + p[1] * p[1] - s,
            Implicit::Circle { radius } => p[0] * p[0] + p[1] * p[1] - radius * radius,
            Implicit::TwoCircles => {
                let a = (p[0] + 0.5).powi(2) + p[1] * p[1] - 0.25;
                let b = (p[0] - 0.5).powi(2) + p[1] * p[1] - 0.25;
                a * b
            }
            Implicit::Cyclide => {
                let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                (r2 + 1.44).powi(2) - 7.84 * p[0] * p[0] + 1.44 * p[1] * p[1]
            }
            Implicit::PinchedTorus => {
                let rho = p[0].hypot(p[1]);
                if rho == 0.0 {
                    return f64::INFINITY;
                }
                (rho - TORUS_R).powi(2) + p[2] * p[2]
                    - TORUS_TUBE * TORUS_TUBE * (1.0 - p[0] / rho) / 2.0
            }
        }
    }

    pub fn gradient(&self, p: &[f64]) -> Vec<f64> {
        match *self {
            Implicit::Lemniscate { .. } => vec![4.0 * p[0].powi(3) - 2.0 * p[0], 2.0 * p[1]],
            Implicit::Circle { .. } => vec![2.0 * p[0], 2.0 * p[1]],
            Implicit::TwoCircles => {
                let a = (p[0] + 0.5).powi(2) + p[1] * p[1] - 0.25;
                let b = (p[0] - 0.5).powi(2) + p[1] * p[1] - 0.25;
                vec![
                    2.0 * (p[0] + 0.5) * b + a * 2.0 * (p[0] - 0.5),
                    2.0 * p[1] * b + a * 2.0 * p[1],
                ]
            }
            Implicit::Cyclide => {
                let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                let k = 4.0 * (r2 + 1.44);
                vec![k * p[0] - 15.68 * p[0], k * p[1] + 2.88 * p[1], k * p[2]]
            }
            Implicit::PinchedTorus => {
                let rho = p[0].hypot(p[1]);
                if rho == 0.0 {
                    return vec![0.0; 3];
                }
                let c = TORUS_TUBE * TORUS_TUBE / 2.0;
                let rho3 = rho.powi(3);
                vec![
                    2.0 * (rho - TORUS_R) * p[0] / rho + c * p[1] * p[1] / rho3,
                    2.0 * (rho - TORUS_R) * p[1] / rho - c * p[0] * p[1] / rho3,
                    2.0 * p[2],
                ]
            }
        }
    }

    pub fn default_box(&self) -> (Vec<f64>, Vec<f64>) {
        match *self {
            Implicit::Lemniscate { s } => {
                let r = (0.5 + (0.25 + s.max(0.0)).sqrt()).sqrt() + 0.05;
                (vec![-r, -0.6], vec![r, 0.6])
            }
            Implicit::Circle { radius } => (vec![-radius - 0.05; 2], vec![radius + 0.05; 2]),
            Implicit::TwoCircles => (vec![-1.05, -0.55], vec![1.05, 0.55]),
            Implicit::Cyclide => (vec![-2.3, -1.0, -1.0], vec![2.3, 1.0, 1.0]),
            Implicit::PinchedTorus => (vec![-1.55, -1.55, -0.55], vec![1.55, 1.55, 0.55]),
        }
    }
}

/// Rejection sampling setup: points are drawn uniformly from the box and
/// kept where `|f| <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarietySpec {
    pub implicit: Implicit,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub tolerance: f64,
    /// Newton-project accepted points onto the zero set.
    pub refine: bool,
    pub seed: u64,
}

impl VarietySpec {
    pub fn new(implicit: Implicit, tolerance: f64, seed: u64) -> Self {
        let (lo, hi) = implicit.default_box();
        Self {
            implicit,
            lo,
            hi,
            tolerance,
            refine: true,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.implicit.dim();
        if self.lo.len() != d || self.hi.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.lo.len().max(self.hi.len()),
            });
        }
        if self.lo.iter().zip(&self.hi).any(|(a, b)| !(a < b)) {
            return Err(invalid("bounding box is empty"));
        }
        if !(self.tolerance > 0.0) {
            return Err(invalid("rejection tolerance must be positive"));
        }
        Ok(())
    }
}

/// Damped Newton steps along the gradient until `|f| <= REFINE_TOL`.
fn project(f: &Implicit, p: &mut [f64]) -> bool {
    let mut value = f.value(p);
    for _ in 0..100 {
        if value.abs() <= REFINE_TOL {
            return true;
        }
        let g = f.gradient(p);
        let g2: f64 = g.iter().map(|x| x * x).sum();
        if g2 == 0.0 || !g2.is_finite() {
            return false;
        }
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = p
                .iter()
                .zip(&g)
                .map(|(x, gx)| x - t * value * gx / g2)
                .collect();
            let v = f.value(&trial);
            if v.abs() < value.abs() {
                p.copy_from_slice(&trial);
                value = v;
                break;
            }
            t /= 2.0;
            if t < 1e-8 {
                return false;
            }
        }
    }
    value.abs() <= REFINE_TOL
}

pub fn sample_variety(spec: &VarietySpec, n: usize) -> Result<PointCloud> {
    spec.validate()?;
    let dim = spec.implicit.dim();
    let mut out = PointCloud::empty(dim);
    let mut rng = rng(spec.seed);
    let mut trials: u64 = 0;
    let mut accepted: u64 = 0;
    let mut p = vec![0.0; dim];
    while out.len() < n {
        trials += 1;
        for (k, c) in p.iter_mut().enumerate() {
            *c = rng.gen_range(spec.lo[k]..spec.hi[k]);
        }
        if spec.implicit.value(&p).abs() <= spec.tolerance
            && (!spec.refine || project(&spec.implicit, &mut p))
        {
            accepted += 1;
            out.push(&p)?;
        }
        if trials >= MIN_TRIALS_BEFORE_GIVING_UP
            && (accepted as f64) < MIN_ACCEPTANCE * trials as f64
        {
            return Err(Error::Sampling(format!(
                "accepted {accepted} of {trials} draws; increase the rejection tolerance"
            )));
        }
    }
    Ok(out)
}

/// Sample of {x⁴ − x² + y² = s}.
pub fn lemniscate_family(s: f64, n: usize, seed: u64) -> Result<PointCloud> {
    if s < -0.25 {
        return Err(invalid(format!("the level set s = {s} is empty")));
    }
    sample_variety(&VarietySpec::new(Implicit::Lemniscate { s }, 0.02, seed), n)
}

/// V⁰ through its parametrization x = cos t, y = sin t cos t with t uniform.
/// Unlike rejection sampling this keeps the lobe tips as dense as the rest.
pub fn lemniscate_curve(n: usize, seed: u64) -> Result<PointCloud> {
    let curve = |t: f64| {
        let a = 2.0 * PI * t;
        vec![a.cos(), a.sin() * a.cos()]
    };
    sample_pieces(2, &[(1.0, &curve)], n, seed)
}

/// Unrefined rejection sample of the band `|f_0| <= 2d²` around V⁰. The band
/// is widest at the crossing, where its half-width is about `d`.
pub fn lemniscate_band(d: f64, n: usize, seed: u64) -> Result<PointCloud> {
    if !(d > 0.0) {
        return Err(invalid("band width must be positive"));
    }
    let mut spec = VarietySpec::new(Implicit::Lemniscate { s: 0.0 }, 2.0 * d * d, seed);
    spec.refine = false;
    sample_variety(&spec, n)
}

/// Points with `|∇f_s| <= 3√s` are singular.
pub fn jacobian_stratification(cloud: &PointCloud, s: f64) -> Result<StratifiedSample> {
    if !(s > 0.0) {
        return Err(invalid("the Jacobian stratification needs s > 0"));
    }
    let f = Implicit::Lemniscate { s };
    let bound = 3.0 * s.sqrt();
    let mask = cloud
        .iter()
        .map(|p| norm(&f.gradient(p)) <= bound)
        .collect();
    StratifiedSample::new(cloud.clone(), mask)
}

fn origin_truth(cloud: &PointCloud) -> Result<StratifiedSample> {
    StratifiedSample::from_parts(
        cloud,
        &PointCloud::new(cloud.dim(), vec![vec![0.0; cloud.dim()]])?,
    )
}

/// A sample of V⁰ with the origin as its singular stratum (the origin is
/// appended to the cloud).
pub fn lemniscate_with_origin(cloud: &PointCloud) -> Result<StratifiedSample> {
    origin_truth(cloud)
}

/// x = cos t, y = sin t cos t on a uniform grid of `m` parameters.
pub fn dense_lemniscate(m: usize) -> PointCloud {
    let pts = (0..m)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / m as f64;
            vec![t.cos(), t.sin() * t.cos()]
        })
        .collect();
    PointCloud::new(2, pts).expect("two coordinates")
}

pub fn dense_circle(center: &[f64], radius: f64, m: usize) -> PointCloud {
    let pts = (0..m)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / m as f64;
            vec![center[0] + radius * t.cos(), center[1] + radius * t.sin()]
        })
        .collect();
    PointCloud::new(2, pts).expect("two coordinates")
}

/// Adds isotropic Gaussian noise, each displacement clipped to length 3σ.
pub fn add_noise(cloud: &PointCloud, sigma: f64, seed: u64) -> Result<PointCloud> {
    if !(sigma >= 0.0) {
        return Err(invalid("noise level must be nonnegative"));
    }
    if sigma == 0.0 {
        return Ok(cloud.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| invalid(e.to_string()))?;
    let mut rng = rng(seed);
    cloud.map_points(|p| {
        let mut e: Vec<f64> = p.iter().map(|_| normal.sample(&mut rng)).collect();
        let len = norm(&e);
        if len > 3.0 * sigma {
            e.iter_mut().for_each(|x| *x *= 3.0 * sigma / len);
        }
        p.iter().zip(&e).map(|(a, b)| a + b).collect()
    })
}

/// Uniform sample along a piecewise curve: each piece gets a share of the
/// points proportional to its length, parameters drawn uniformly.
fn sample_pieces(
    dim: usize,
    pieces: &[(f64, &dyn Fn(f64) -> Vec<f64>)],
    n: usize,
    seed: u64,
) -> Result<PointCloud> {
    let total: f64 = pieces.iter().map(|(len, _)| len).sum();
    let mut rng = rng(seed);
    let mut out = PointCloud::empty(dim);
    for _ in 0..n {
        let mut u = rng.gen_range(0.0..total);
        for (k, (len, curve)) in pieces.iter().enumerate() {
            if u < *len || k + 1 == pieces.len() {
                out.push(&curve((u / len).min(1.0)))?;
                break;
            }
            u -= len;
        }
    }
    Ok(out)
}

fn circle_piece(cx: f64, cy: f64, r: f64) -> impl Fn(f64) -> Vec<f64> {
    move |t| {
        let a = 2.0 * PI * t;
        vec![cx + r * a.cos(), cy + r * a.sin()]
    }
}

/// Two circles of radius 1/2 touching at the origin.
pub fn two_circles(n: usize, seed: u64) -> Result<PointCloud> {
    let (a, b) = (circle_piece(-0.5, 0.0, 0.5), circle_piece(0.5, 0.0, 0.5));
    sample_pieces(2, &[(PI, &a), (PI, &b)], n, seed)
}

/// Two circles in ℝ³ through the origin, in the xy- and xz-planes, crossing
/// transversally there.
pub fn wedge_circles(n: usize, seed: u64) -> Result<PointCloud> {
    let a = |t: f64| {
        let a = 2.0 * PI * t;
        vec![0.5 + 0.5 * a.cos(), 0.5 * a.sin(), 0.0]
    };
    let b = |t: f64| {
        let a = 2.0 * PI * t;
        vec![-0.5 + 0.5 * a.cos(), 0.0, 0.5 * a.sin()]
    };
    sample_pieces(3, &[(PI, &a), (PI, &b)], n, seed)
}

/// Unit circle together with the diameter on the x-axis.
pub fn circle_with_diameter(n: usize, seed: u64) -> Result<PointCloud> {
    let circle = circle_piece(0.0, 0.0, 1.0);
    let diameter = |t: f64| vec![-1.0 + 2.0 * t, 0.0];
    sample_pieces(2, &[(2.0 * PI, &circle), (2.0, &diameter)], n, seed)
}

pub fn cyclide(n: usize, seed: u64) -> Result<PointCloud> {
    sample_variety(&VarietySpec::new(Implicit::Cyclide, 0.05, seed), n)
}

pub fn pinched_torus(n: usize, seed: u64) -> Result<PointCloud> {
    sample_variety(&VarietySpec::new(Implicit::PinchedTorus, 0.01, seed), n)
}

/// Catalog entries addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogId {
    Lemniscate,
    TwoCircles,
    WedgeCircles,
    CircleWithDiameter,
    PinchedTorus,
    Cyclide,
    Circle,
}

impl std::str::FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lemniscate" => CatalogId::Lemniscate,
            "two_circles" => CatalogId::TwoCircles,
            "wedge_circles" => CatalogId::WedgeCircles,
            "circle_with_diameter" => CatalogId::CircleWithDiameter,
            "pinched_torus" => CatalogId::PinchedTorus,
            "cyclide" => CatalogId::Cyclide,
            "circle" => CatalogId::Circle,
            other => return Err(Error::UnknownCatalog(other.to_string())),
        })
    }
}

impl CatalogId {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogId::Lemniscate => "lemniscate",
            CatalogId::TwoCircles => "two_circles",
            CatalogId::WedgeCircles => "wedge_circles",
            CatalogId::CircleWithDiameter => "circle_with_diameter",
            CatalogId::PinchedTorus => "pinched_torus",
            CatalogId::Cyclide => "cyclide",
            CatalogId::Circle => "circle",
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<PointCloud> {
        match self {
            CatalogId::Lemniscate => lemniscate_curve(n, seed),
            CatalogId::TwoCircles => two_circles(n, seed),
            CatalogId::WedgeCircles => wedge_circles(n, seed),
            CatalogId::CircleWithDiameter => circle_with_diameter(n, seed),
            CatalogId::PinchedTorus => pinched_torus(n, seed),
            CatalogId::Cyclide => cyclide(n, seed),
            CatalogId::Circle => {
                let c = circle_piece(0.0, 0.0, 1.0);
                sample_pieces(2, &[(1.0, &c)], n, seed)
            }
        }
    }

    /// Known singular points; `None` where no stratification is asserted.
    pub fn singular_points(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            CatalogId::Lemniscate | CatalogId::TwoCircles => Some(vec![vec![0.0, 0.0]]),
            CatalogId::WedgeCircles => Some(vec![vec![0.0; 3]]),
            CatalogId::CircleWithDiameter => Some(vec![vec![-1.0, 0.0], vec![1.0, 0.0]]),
            CatalogId::PinchedTorus => Some(vec![vec![TORUS_R, 0.0, 0.0]]),
            CatalogId::Circle => Some(Vec::new()),
            CatalogId::Cyclide => None,
        }
    }

    /// The sample with the known singular points appended as its singular
    /// stratum.
    pub fn ground_truth(&self, cloud: &PointCloud) -> Result<Option<StratifiedSample>> {
        let Some(points) = self.singular_points() else {
            return Ok(None);
        };
        let singular =
            PointCloud::new(cloud.dim(), points).unwrap_or_else(|_| PointCloud::empty(cloud.dim()));
        StratifiedSample::from_parts(cloud, &singular).map(Some)
    }
}

const CONE_SPACING: f64 = 0.01;

/// Grid points `t * dir`, `t` in `[lo, hi]` with spacing 0.01.
fn ray_grid(dir: &[f64], lo: f64, hi: f64) -> Vec<Vec<f64>> {
    let steps = ((hi - lo) / CONE_SPACING).round() as i64;
    (0..=steps)
        .map(|k| {
            let t = lo + k as f64 * CONE_SPACING;
            dir.iter().map(|d| d * t).collect()
        })
        .collect()
}

fn line_through(dir: &[f64]) -> Vec<Vec<f64>> {
    let n = norm(dir);
    let unit: Vec<f64> = dir.iter().map(|d| d / n).collect();
    ray_grid(&unit, -1.0, 1.0)
}

fn cone(dim: usize, parts: Vec<Vec<Vec<f64>>>) -> Result<LocalSample> {
    let mut pts: Vec<Vec<f64>> = parts.into_iter().flatten().collect();
    pts.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    pts.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < 1e-12));
    Ok(LocalSample::new(PointCloud::new(dim, pts)?))
}

fn is_at(x: &[f64], target: &[f64]) -> bool {
    x.len() == target.len() && x.iter().zip(target).all(|(a, b)| (a - b).abs() <= 1e-9)
}

fn tangent_line_of(f: &Implicit, x: &[f64]) -> Result<LocalSample> {
    if f.value(x).abs() > 1e-6 {
        return Err(invalid("point is not on the curve"));
    }
    let g = f.gradient(x);
    if norm(&g) < 1e-9 {
        return Err(invalid("no tangent line at a critical point"));
    }
    cone(2, vec![line_through(&[-g[1], g[0]])])
}

/// Grid sample (spacing 0.01) of the tangent cone ∩ B₁ at a catalog point.
pub fn analytic_tangent_cone(space: &str, x: &[f64]) -> Result<LocalSample> {
    let unknown = || Error::UnknownCatalog(format!("no tangent cone known for {space} at {x:?}"));
    let id: CatalogId = space.parse()?;
    match id {
        CatalogId::Lemniscate if x.len() == 2 => {
            if is_at(x, &[0.0, 0.0]) {
                cone(
                    2,
                    vec![
                        line_through(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]),
                        line_through(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]),
                    ],
                )
            } else {
                tangent_line_of(&Implicit::Lemniscate { s: 0.0 }, x)
            }
        }
        CatalogId::TwoCircles if x.len() == 2 => {
            if is_at(x, &[0.0, 0.0]) {
                cone(2, vec![line_through(&[0.0, 1.0])])
            } else {
                tangent_line_of(&Implicit::TwoCircles, x)
            }
        }
        CatalogId::Circle if x.len() == 2 => tangent_line_of(&Implicit::Circle { radius: 1.0 }, x),
        CatalogId::WedgeCircles if is_at(x, &[0.0; 3]) => cone(
            3,
            vec![
                line_through(&[0.0, 1.0, 0.0]),
                line_through(&[0.0, 0.0, 1.0]),
            ],
        ),
        CatalogId::CircleWithDiameter if is_at(x, &[1.0, 0.0]) || is_at(x, &[-1.0, 0.0]) => {
            let inward = -x[0].signum();
            cone(
                2,
                vec![
                    line_through(&[0.0, 1.0]),
                    ray_grid(&[inward, 0.0], 0.0, 1.0),
                ],
            )
        }
        _ => Err(unknown()),
    }
}
