//! Minimal enclosing balls of small point sets (Welzl's recursion).

use crate::sample_spaces::sq_dist;

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        let d = sq_dist(&self.center, p).sqrt();
        d <= self.radius * (1.0 + 1e-12) + 1e-14
    }
}

/// Smallest ball with every point of `support` on its boundary, centred in
/// the affine hull of `support`. `None` when the support is affinely
/// dependent.
pub fn circumball(support: &[&[f64]]) -> Option<Ball> {
    let p0 = *support.first()?;
    let dim = p0.len();
    let k = support.len() - 1;
    if k == 0 {
        return Some(Ball {
            center: p0.to_vec(),
            radius: 0.0,
        });
    }
    if k > dim {
        return None;
    }
    let u: Vec<Vec<f64>> = support[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // augmented Gram system 2 <u_j, u_k> lambda_k = |u_j|^2
    let mut m: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let mut row: Vec<f64> = (0..k).map(|l| 2.0 * dot(&u[j], &u[l])).collect();
            row.push(dot(&u[j], &u[j]));
            row
        })
        .collect();
    let scale = m
        .iter()
        .map(|r| r[..k].iter().fold(0.0f64, |a, b| a.max(b.abs())))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, piv);
        for row in 0..k {
            if row != col {
                let f = m[row][col] / m[col][col];
                if f != 0.0 {
                    for c in col..=k {
                        m[row][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    let mut center = p0.to_vec();
    for j in 0..k {
        let lambda = m[j][k] / m[j][j];
        for (c, d) in center.iter_mut().zip(&u[j]) {
            *c += lambda * d;
        }
    }
    let radius = support
        .iter()
        .map(|p| sq_dist(&center, p))
        .fold(0.0, f64::max)
        .sqrt();
    Some(Ball { center, radius })
}

fn welzl<'a>(points: &[&'a [f64]], support: &mut Vec<&'a [f64]>, dim: usize) -> Option<Ball> {
    if points.is_empty() || support.len() == dim + 1 {
        return if support.is_empty() {
            None
        } else {
            Some(circumball(support).unwrap_or_else(|| fallback(support)))
        };
    }
    let (last, rest) = points.split_last().unwrap();
    if let Some(ball) = welzl(rest, support, dim) {
        if ball.contains(last) {
            return Some(ball);
        }
    }
    // a duplicate of a support point is already on the boundary
    if support.iter().any(|s| sq_dist(s, last) == 0.0) {
        return welzl(rest, support, dim);
    }
    support.push(last);
    let ball = welzl(rest, support, dim);
    support.pop();
    ball
}

// Reached only through rounding on near-degenerate supports.
fn fallback(support: &[&[f64]]) -> Ball {
    let dim = support[0].len();
    let mut center = vec![0.0; dim];
    for p in support {
        for (c, x) in center.iter_mut().zip(p.iter()) {
            *c += x / support.len() as f64;
        }
    }
    let radius = support
        .iter()
        .map(|p| sq_dist(&center, p))
        .fold(0.0, f64::max)
        .sqrt();
    Ball { center, radius }
}

/// Minimal enclosing ball of a nonempty point set.
pub fn min_enclosing_ball(points: &[&[f64]]) -> Ball {
    assert!(!points.is_empty(), "enclosing ball of an empty set");
    let dim = points[0].len();
    let mut support = Vec::with_capacity(dim + 1);
    welzl(points, &mut support, dim).expect("nonempty input has an enclosing ball")
}

pub fn min_enclosing_radius(points: &[&[f64]]) -> f64 {
    match points.len() {
        1 => 0.0,
        2 => sq_dist(points[0], points[1]).sqrt() / 2.0,
        n if n <= SMALL_POINTS && points[0].len() <= SMALL_DIM => {
            let mut support = [0usize; SMALL_DIM + 1];
            small_welzl(points, n, &mut support, 0).r2.sqrt()
        }
        _ => min_enclosing_ball(points).radius,
    }
}

// Allocation-free Welzl for the simplices of low-dimensional complexes.
const SMALL_DIM: usize = 4;
const SMALL_POINTS: usize = 8;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SmallBall {
    center: [f64; SMALL_DIM],
    r2: f64,
}

/// Ball of `points` given the ball of all of them but the last, or `None`
/// when the set is too large for the allocation-free path.
pub(crate) fn extend_ball(points: &[&[f64]], parent: Option<&SmallBall>) -> Option<SmallBall> {
    let n = points.len();
    if n == 0 || n > SMALL_POINTS || points[0].len() > SMALL_DIM {
        return None;
    }
    let last = points[n - 1];
    let mut support = [0usize; SMALL_DIM + 1];
    match parent {
        Some(b) if b.contains(last) => Some(*b),
        // otherwise the new point lies on the boundary of the new ball
        Some(_) => {
            support[0] = n - 1;
            Some(small_welzl(points, n - 1, &mut support, 1))
        }
        None => Some(small_welzl(points, n, &mut support, 0)),
    }
}

impl SmallBall {
    pub(crate) fn radius(&self) -> f64 {
        self.r2.sqrt()
    }

    fn contains(&self, p: &[f64]) -> bool {
        let d2: f64 = p
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        d2.sqrt() <= self.r2.sqrt() * (1.0 + 1e-12) + 1e-14
    }
}

fn small_circumball(points: &[&[f64]], support: &[usize]) -> Option<SmallBall> {
    let p0 = points[support[0]];
    let dim = p0.len();
    let k = support.len() - 1;
    let mut center = [0.0; SMALL_DIM];
    center[..dim].copy_from_slice(p0);
    if k == 0 {
        return Some(SmallBall { center, r2: 0.0 });
    }
    if k > dim {
        return None;
    }
    let mut u = [[0.0; SMALL_DIM]; SMALL_DIM];
    for j in 0..k {
        for c in 0..dim {
            u[j][c] = points[support[j + 1]][c] - p0[c];
        }
    }
    let dot =
        |a: &[f64; SMALL_DIM], b: &[f64; SMALL_DIM]| -> f64 { (0..dim).map(|c| a[c] * b[c]).sum() };
    let mut m = [[0.0; SMALL_DIM + 1]; SMALL_DIM];
    for j in 0..k {
        for l in 0..k {
            m[j][l] = 2.0 * dot(&u[j], &u[l]);
        }
        m[j][k] = dot(&u[j], &u[j]);
    }
    let scale = (0..k)
        .flat_map(|j| (0..k).map(move |l| (j, l)))
        .map(|(j, l)| m[j][l].abs())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, piv);
        for row in 0..k {
            if row != col {
                let f = m[row][col] / m[col][col];
                if f != 0.0 {
                    for c in col..=k {
                        m[row][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    for j in 0..k {
        let lambda = m[j][k] / m[j][j];
        for c in 0..dim {
            center[c] += lambda * u[j][c];
        }
    }
    let r2 = support
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    Some(SmallBall { center, r2 })
}

fn small_fallback(points: &[&[f64]], support: &[usize]) -> SmallBall {
    let dim = points[0].len();
    let mut center = [0.0; SMALL_DIM];
    for &i in support {
        for c in 0..dim {
            center[c] += points[i][c] / support.len() as f64;
        }
    }
    let r2 = support
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    SmallBall { center, r2 }
}

/// Ball of the first `n` points with `support[..s]` on the boundary. The
/// caller guarantees `n + s >= 1`.
fn small_welzl(
    points: &[&[f64]],
    n: usize,
    support: &mut [usize; SMALL_DIM + 1],
    s: usize,
) -> SmallBall {
    let dim = points[0].len();
    if n == 0 || s == dim + 1 {
        let sup = &support[..s];
        return small_circumball(points, sup).unwrap_or_else(|| small_fallback(points, sup));
    }
    let last = n - 1;
    if n + s > 1 {
        let ball = small_welzl(points, last, support, s);
        if ball.contains(points[last]) {
            return ball;
        }
    }
    if support[..s]
        .iter()
        .any(|&j| sq_dist(points[j], points[last]) == 0.0)
    {
        return small_welzl(points, last, support, s);
    }
    support[s] = last;
    small_welzl(points, last, support, s + 1)
}
