//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use strat_core::complexes::FilteredComplex;
use strat_core::persistence::Bar;

/// Rank over F₂ of a 0/1 matrix given as rows of bits.
pub fn rank_f2(mut rows: Vec<Vec<u64>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len() * 64);
    let mut rank = 0;
    for col in 0..width {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][w] & b != 0 {
                let pivot = rows[rank].clone();
                rows[r].iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers of the sublevel complex at `alpha`, modulo the simplices
/// flagged in `quotient`, by direct elimination.
pub fn betti(f: &FilteredComplex, quotient: &[bool], alpha: f64, degree: usize) -> usize {
    let live: Vec<usize> = (0..f.len())
        .filter(|&i| f.simplices()[i].value <= alpha && !quotient[i])
        .collect();
    let of_dim = |k: usize| -> Vec<usize> {
        live.iter()
            .copied()
            .filter(|&i| f.simplices()[i].dim() == k)
            .collect()
    };
    let boundary_rank = |k: usize| -> usize {
        if k == 0 {
            return 0;
        }
        let cols = of_dim(k);
        let rows = of_dim(k - 1);
        let words = rows.len().div_ceil(64).max(1);
        let matrix = cols
            .iter()
            .map(|&c| {
                let mut bits = vec![0u64; words];
                for face in f.boundary(c) {
                    if let Some(r) = rows.iter().position(|&x| x == face) {
                        bits[r / 64] |= 1 << (r % 64);
                    }
                }
                bits
            })
            .collect();
        rank_f2(matrix)
    };
    of_dim(degree).len() - boundary_rank(degree) - boundary_rank(degree + 1)
}

/// Scales between consecutive filtration values, plus one past the last.
pub fn probe_scales(f: &FilteredComplex) -> Vec<f64> {
    let mut values: Vec<f64> = f.simplices().iter().map(|s| s.value).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    // midpoints avoid ties between rounding-equal values
    let mut probes: Vec<f64> = values.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    probes.push(values.last().copied().unwrap_or(0.0) + 1e-9);
    probes
}

/// All partial matchings of two tiny diagrams.
pub fn exhaustive_bottleneck(a: &[Bar], b: &[Bar]) -> f64 {
    fn go(a: &[Bar], b: &[Bar], used: &mut Vec<bool>, i: usize) -> f64 {
        if i == a.len() {
            return b
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(y, _)| y.length() / 2.0)
                .fold(0.0, f64::max);
        }
        let mut best = a[i].length() / 2.0;
        best = best.max(go(a, b, used, i + 1));
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                let c = (a[i].birth - b[j].birth)
                    .abs()
                    .max((a[i].death - b[j].death).abs());
                best = best.min(c.max(go(a, b, used, i + 1)));
                used[j] = false;
            }
        }
        best
    }
    go(a, b, &mut vec![false; b.len()], 0)
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Hausdorff distance of two finite sets under an arbitrary metric, by
/// filling the whole distance matrix.
pub fn hausdorff_by<T>(a: &[T], b: &[T], d: impl Fn(&T, &T) -> f64) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let m: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| d(x, y)).collect())
        .collect();
    let rows = m
        .iter()
        .map(|r| r.iter().copied().fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let cols = (0..b.len())
        .map(|j| m.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    rows.max(cols)
}

pub fn hausdorff_bf(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    hausdorff_by(a, b, |x, y| euclid(x, y))
}
