//! Uniform grid index for fixed-radius neighbour queries.

use std::collections::HashMap;

use crate::sample_spaces::{sq_dist, PointCloud};

/// Buckets the points of a cloud into axis-aligned cubes of side `cell`.
#[derive(Debug, Clone)]
pub struct GridIndex {
    cell: f64,
    dim: usize,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl GridIndex {
    pub fn new(cloud: &PointCloud, cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "grid cell must be positive");
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in cloud.iter().enumerate() {
            buckets.entry(key(p, cell)).or_default().push(i);
        }
        Self {
            cell,
            dim: cloud.dim(),
            buckets,
        }
    }

    /// Indices `j` with `|cloud[j] - x| <= radius`, in ascending order.
    pub fn within(&self, cloud: &PointCloud, x: &[f64], radius: f64) -> Vec<usize> {
        let r2 = radius * radius;
        let lo: Vec<i64> = x
            .iter()
            .map(|c| ((c - radius) / self.cell).floor() as i64)
            .collect();
        let hi: Vec<i64> = x
            .iter()
            .map(|c| ((c + radius) / self.cell).floor() as i64)
            .collect();
        let cells: f64 = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| (b - a + 1) as f64)
            .product();

        let mut out = Vec::new();
        if cells > self.buckets.len() as f64 {
            for bucket in self.buckets.values() {
                out.extend(
                    bucket
                        .iter()
                        .copied()
                        .filter(|&j| sq_dist(cloud.point(j), x) <= r2),
                );
            }
        } else {
            let mut cur = lo.clone();
            loop {
                if let Some(bucket) = self.buckets.get(&cur) {
                    out.extend(
                        bucket
                            .iter()
                            .copied()
                            .filter(|&j| sq_dist(cloud.point(j), x) <= r2),
                    );
                }
                // odometer increment over the key box
                let mut axis = 0;
                loop {
                    if axis == self.dim {
                        out.sort_unstable();
                        return out;
                    }
                    cur[axis] += 1;
                    if cur[axis] <= hi[axis] {
                        break;
                    }
                    cur[axis] = lo[axis];
                    axis += 1;
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn key(p: &[f64], cell: f64) -> Vec<i64> {
    p.iter().map(|c| (c / cell).floor() as i64).collect()
}
