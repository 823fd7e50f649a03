//! Persistent homology over F₂: barcodes of filtered complexes and of pairs,
//! bottleneck distance, and component maps in degree zero.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::complexes::{
    filtration_order, ComplexInclusion, FilteredComplex, Simplex, SimplexTable,
};
use crate::error::{invalid, Error, Result};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub birth: f64,
    /// `f64::INFINITY` for essential classes.
    pub death: f64,
}

impl Bar {
    pub fn new(birth: f64, death: f64) -> Self {
        Self { birth, death }
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn alive_at(&self, alpha: f64) -> bool {
        self.birth <= alpha && alpha < self.death
    }
}

/// Intervals per homology degree, sorted by (birth, death).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Barcode {
    degrees: Vec<Vec<Bar>>,
}

impl Barcode {
    pub fn new(mut degrees: Vec<Vec<Bar>>) -> Self {
        for bars in &mut degrees {
            bars.sort_by(|a, b| {
                a.birth
                    .total_cmp(&b.birth)
                    .then(a.death.total_cmp(&b.death))
            });
        }
        while degrees.last().is_some_and(Vec::is_empty) {
            degrees.pop();
        }
        Self { degrees }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn bars(&self, degree: usize) -> &[Bar] {
        self.degrees.get(degree).map_or(&[], Vec::as_slice)
    }

    /// Highest degree with at least one bar, plus one.
    pub fn num_degrees(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.iter().all(Vec::is_empty)
    }

    pub fn live_count(&self, degree: usize, alpha: f64) -> usize {
        self.bars(degree)
            .iter()
            .filter(|b| b.alive_at(alpha))
            .count()
    }

    pub fn long_bars(&self, degree: usize, min_length: f64) -> Vec<Bar> {
        self.bars(degree)
            .iter()
            .copied()
            .filter(|b| b.length() >= min_length)
            .collect()
    }

    /// Restriction to the index range `[0, cap)`: deaths beyond `cap` become
    /// `cap`, bars born at or after `cap` vanish.
    pub fn truncated(&self, cap: f64) -> Barcode {
        Barcode::new(
            self.degrees
                .iter()
                .map(|bars| {
                    bars.iter()
                        .filter(|b| b.birth < cap)
                        .map(|b| Bar::new(b.birth, b.death.min(cap)))
                        .collect()
                })
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DeathJson {
    Finite(f64),
    Infinite(String),
}

#[derive(Serialize, Deserialize)]
struct DegreeJson {
    degree: usize,
    bars: Vec<(f64, DeathJson)>,
}

impl Serialize for Barcode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let out: Vec<DegreeJson> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(degree, bars)| DegreeJson {
                degree,
                bars: bars
                    .iter()
                    .map(|b| {
                        let death = if b.is_infinite() {
                            DeathJson::Infinite("inf".into())
                        } else {
                            DeathJson::Finite(b.death)
                        };
                        (b.birth, death)
                    })
                    .collect(),
            })
            .collect();
        out.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Barcode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<DegreeJson>::deserialize(deserializer)?;
        let mut degrees: Vec<Vec<Bar>> = Vec::new();
        for entry in raw {
            if degrees.len() <= entry.degree {
                degrees.resize(entry.degree + 1, Vec::new());
            }
            for (birth, death) in entry.bars {
                let death = match death {
                    DeathJson::Finite(d) => d,
                    DeathJson::Infinite(s) if s == "inf" => f64::INFINITY,
                    DeathJson::Infinite(s) => {
                        return Err(de::Error::custom(format!("bad death value {s:?}")))
                    }
                };
                degrees[entry.degree].push(Bar::new(birth, death));
            }
        }
        Ok(Barcode::new(degrees))
    }
}

fn add_columns(target: &mut Vec<usize>, other: &[usize]) {
    let mut out = Vec::with_capacity(target.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&other[j..]);
    *target = out;
}

/// Pairs closer than this (relative to the death value) are rounding ties
/// and count as zero-length.
pub const ZERO_LENGTH: f64 = 1e-12;

/// Persistence pairs of the live simplices (given in filtration order),
/// found by reducing the coboundary matrix dimension by dimension, lowest
/// first, with clearing. Cohomology has the same barcode as homology and
/// leaves the numerous top-dimensional columns with nothing to do. Faces
/// for which `boundary` reports nothing or that are not live are treated as
/// quotiented.
fn reduce(simplices: &[Simplex], live: &[bool], boundary: impl Fn(usize) -> Vec<usize>) -> Barcode {
    let n = simplices.len();
    let top = simplices.iter().map(|s| s.dim()).max().unwrap_or(0);
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    let mut coboundary: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, s) in simplices.iter().enumerate() {
        if !live[j] {
            continue;
        }
        by_dim[s.dim()].push(j);
        for r in boundary(j) {
            if live[r] {
                // ascending because j is
                coboundary[r].push(j);
            }
        }
    }

    const NONE: usize = usize::MAX;
    let mut pivot_owner = vec![NONE; n];
    let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut cleared = vec![false; n];
    let mut degrees: Vec<Vec<Bar>> = vec![Vec::new(); top + 1];

    for d in 0..=top {
        for &j in by_dim[d].iter().rev() {
            if cleared[j] {
                continue;
            }
            let mut col = std::mem::take(&mut coboundary[j]);
            while let Some(&low) = col.first() {
                let owner = pivot_owner[low];
                if owner == NONE {
                    break;
                }
                add_columns(&mut col, &reduced[owner]);
            }
            let (b, death) = match col.first() {
                Some(&low) => {
                    pivot_owner[low] = j;
                    cleared[low] = true;
                    reduced[j] = col;
                    (simplices[j].value, simplices[low].value)
                }
                None => (simplices[j].value, f64::INFINITY),
            };
            if death.is_infinite() || death - b > ZERO_LENGTH * death.max(1.0) {
                degrees[d].push(Bar::new(b, death));
            }
        }
    }
    Barcode::new(degrees)
}

/// Barcodes in every degree up to the dimension of the complex. Pairs with
/// zero persistence are dropped.
pub fn reduce_barcodes(complex: &FilteredComplex) -> Barcode {
    reduce(complex.simplices(), &vec![true; complex.len()], |i| {
        complex.boundary(i)
    })
}

/// Barcodes of the quotient of a complex by a subcomplex, given only the
/// simplices outside the subcomplex: any face missing from `simplices` is
/// taken to lie in the subcomplex. Values must be monotone along faces.
pub fn quotient_barcodes(mut simplices: Vec<Simplex>) -> Barcode {
    simplices.sort_by(filtration_order);
    let mut table = SimplexTable::default();
    for (i, s) in simplices.iter().enumerate() {
        table.insert(&s.vertices, i);
    }
    let boundary = |i: usize| -> Vec<usize> {
        let mut b = Vec::new();
        table.facet_indices(&simplices[i].vertices, &mut b);
        b
    };
    reduce(&simplices, &vec![true; simplices.len()], boundary)
}

/// Barcodes of the quotient `complex / sub`, where `sub` is included into
/// `complex` by `inclusion` with identical filtration values.
pub fn relative_barcodes(
    complex: &FilteredComplex,
    sub: &FilteredComplex,
    inclusion: &ComplexInclusion,
) -> Result<Barcode> {
    if inclusion.target_len() != complex.len() || inclusion.simplex_map().len() != sub.len() {
        return Err(Error::NotSubcomplex(
            "inclusion does not match the complexes".into(),
        ));
    }
    let mut live = vec![true; complex.len()];
    for (s, &t) in sub.simplices().iter().zip(inclusion.simplex_map()) {
        if complex.simplices()[t].value != s.value {
            return Err(Error::NotSubcomplex(format!(
                "subcomplex value {} differs from {} for {:?}",
                s.value,
                complex.simplices()[t].value,
                s.vertices
            )));
        }
        live[t] = false;
    }
    Ok(reduce(complex.simplices(), &live, |i| complex.boundary(i)))
}

fn match_cost(a: &Bar, b: &Bar) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn diagonal_cost(a: &Bar) -> f64 {
    a.length() / 2.0
}

/// Kuhn's augmenting paths: can every `required` left vertex be matched?
fn covers(required: &[usize], right_len: usize, adjacent: impl Fn(usize, usize) -> bool) -> bool {
    fn augment(
        u: usize,
        right_len: usize,
        adjacent: &dyn Fn(usize, usize) -> bool,
        owner: &mut [usize],
        seen: &mut [bool],
    ) -> bool {
        for v in 0..right_len {
            if seen[v] || !adjacent(u, v) {
                continue;
            }
            seen[v] = true;
            if owner[v] == usize::MAX || augment(owner[v], right_len, adjacent, owner, seen) {
                owner[v] = u;
                return true;
            }
        }
        false
    }
    if required.len() > right_len {
        return false;
    }
    let mut owner = vec![usize::MAX; right_len];
    let mut seen = vec![false; right_len];
    for &u in required {
        seen.iter_mut().for_each(|s| *s = false);
        if !augment(u, right_len, &adjacent, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

// A matching of cost <= c exists iff some matching between the two sides
// covers every bar of either side that cannot go to the diagonal; by
// Mendelsohn–Dulmage it suffices to cover each side separately.
fn feasible(a: &[Bar], b: &[Bar], c: f64) -> bool {
    let big_a: Vec<usize> = (0..a.len()).filter(|&i| diagonal_cost(&a[i]) > c).collect();
    let big_b: Vec<usize> = (0..b.len()).filter(|&j| diagonal_cost(&b[j]) > c).collect();
    covers(&big_a, b.len(), |i, j| match_cost(&a[i], &b[j]) <= c)
        && covers(&big_b, a.len(), |j, i| match_cost(&a[i], &b[j]) <= c)
}

fn finite_bottleneck(a: &[Bar], b: &[Bar]) -> f64 {
    let mut candidates: Vec<f64> = Vec::with_capacity(a.len() * b.len() + a.len() + b.len() + 1);
    candidates.push(0.0);
    candidates.extend(a.iter().chain(b).map(diagonal_cost));
    for x in a {
        for y in b {
            candidates.push(match_cost(x, y));
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // the largest candidate is always feasible: everything to the diagonal
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Bottleneck distance between two multisets of intervals. Essential bars
/// only match essential bars; differing counts give `+inf`.
pub fn bottleneck(a: &[Bar], b: &[Bar]) -> f64 {
    let (inf_a, fin_a): (Vec<Bar>, Vec<Bar>) = a.iter().partition(|x| x.is_infinite());
    let (inf_b, fin_b): (Vec<Bar>, Vec<Bar>) = b.iter().partition(|x| x.is_infinite());
    if inf_a.len() != inf_b.len() {
        return f64::INFINITY;
    }
    let mut births_a: Vec<f64> = inf_a.iter().map(|x| x.birth).collect();
    let mut births_b: Vec<f64> = inf_b.iter().map(|x| x.birth).collect();
    births_a.sort_by(f64::total_cmp);
    births_b.sort_by(f64::total_cmp);
    let essential = births_a
        .iter()
        .zip(&births_b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let fin_a: Vec<Bar> = fin_a.into_iter().filter(|x| x.length() > 0.0).collect();
    let fin_b: Vec<Bar> = fin_b.into_iter().filter(|x| x.length() > 0.0).collect();
    essential.max(finite_bottleneck(&fin_a, &fin_b))
}

pub fn bottleneck_distance(a: &Barcode, b: &Barcode, degree: usize) -> f64 {
    bottleneck(a.bars(degree), b.bars(degree))
}

/// Map on connected components at a fixed scale, as an F₂ matrix with one
/// nonzero entry per column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H0Map {
    pub scale: f64,
    pub rows: usize,
    /// Row index hit by each column.
    pub targets: Vec<usize>,
}

impl H0Map {
    pub fn cols(&self) -> usize {
        self.targets.len()
    }

    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.cols()]; self.rows];
        for (c, &r) in self.targets.iter().enumerate() {
            m[r][c] = 1;
        }
        m
    }

    /// How many source components land in each target component.
    pub fn preimage_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.rows];
        for &r in &self.targets {
            sizes[r] += 1;
        }
        sizes
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &H0Map) -> H0Map {
        H0Map {
            scale: self.scale,
            rows: self.rows,
            targets: first.targets.iter().map(|&t| self.targets[t]).collect(),
        }
    }
}

/// Component labels at scale `alpha`, numbered by smallest vertex.
pub fn components_at(complex: &FilteredComplex, alpha: f64) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::new(complex.num_vertices());
    for s in complex.simplices() {
        if s.value > alpha {
            break;
        }
        if s.dim() == 1 {
            uf.union(s.vertices[0], s.vertices[1]);
        }
    }
    uf.labels()
}

pub fn h0_induced_map(
    source: &FilteredComplex,
    target: &FilteredComplex,
    inclusion: &ComplexInclusion,
    alpha: f64,
) -> Result<H0Map> {
    if alpha > source.max_radius() || alpha > target.max_radius() {
        return Err(invalid(format!(
            "scale {alpha} exceeds a radius cap ({}, {})",
            source.max_radius(),
            target.max_radius()
        )));
    }
    if inclusion.vertex_map().len() != source.num_vertices() {
        return Err(Error::NotSubcomplex(
            "inclusion does not start at this complex".into(),
        ));
    }
    let (src_labels, src_count) = components_at(source, alpha);
    let (tgt_labels, tgt_count) = components_at(target, alpha);
    let mut targets = vec![usize::MAX; src_count];
    for (v, &label) in src_labels.iter().enumerate() {
        if targets[label] == usize::MAX {
            targets[label] = tgt_labels[inclusion.vertex_map()[v]];
        }
    }
    Ok(H0Map {
        scale: alpha,
        rows: tgt_count,
        targets,
    })
}
