//! Filtered Čech and Rips complexes of point clouds, full subcomplexes and
//! the inclusion maps between them.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::index::GridIndex;
use crate::meb::{extend_ball, min_enclosing_radius, SmallBall};
use crate::sample_spaces::{dist, norm, PointCloud};

/// Relative slack allowed when comparing filtration values that were
/// computed from the same points in a different order.
const VALUE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationKind {
    Cech,
    Rips,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub value: f64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

pub(crate) fn filtration_order(a: &Simplex, b: &Simplex) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// Simplices in filtration order: by value, then dimension, then
/// lexicographic vertex order.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    num_vertices: usize,
    simplices: Vec<Simplex>,
    lookup: SimplexTable,
    max_dim: usize,
    max_radius: f64,
}

impl FilteredComplex {
    /// Validates face closure and monotonicity, then sorts.
    pub fn from_simplices(
        num_vertices: usize,
        simplices: Vec<Simplex>,
        max_dim: usize,
        max_radius: f64,
    ) -> Result<Self> {
        let mut simplices = simplices;
        for s in &mut simplices {
            if s.vertices.is_empty() {
                return Err(invalid("simplex without vertices"));
            }
            s.vertices.sort_unstable();
            if s.vertices.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid("repeated vertex in simplex"));
            }
            if *s.vertices.last().unwrap() >= num_vertices {
                return Err(invalid("vertex index out of range"));
            }
            if !(s.value >= 0.0) {
                return Err(invalid("filtration values must be nonnegative"));
            }
        }
        let complex = Self::sorted(num_vertices, simplices, max_dim, max_radius);
        for s in &complex.simplices {
            if s.vertices.len() < 2 {
                continue;
            }
            for face in facets(&s.vertices) {
                match complex.index_of(&face) {
                    None => {
                        return Err(invalid(format!(
                            "face {face:?} of {:?} missing",
                            s.vertices
                        )))
                    }
                    Some(f) if complex.simplices[f].value > s.value => {
                        return Err(invalid(format!(
                            "face {face:?} enters after {:?}",
                            s.vertices
                        )))
                    }
                    _ => {}
                }
            }
        }
        if complex.lookup.len() != complex.simplices.len() {
            return Err(invalid("duplicate simplex"));
        }
        Ok(complex)
    }

    fn sorted(
        num_vertices: usize,
        mut simplices: Vec<Simplex>,
        max_dim: usize,
        max_radius: f64,
    ) -> Self {
        simplices.sort_by(filtration_order);
        let mut lookup = SimplexTable::default();
        for (i, s) in simplices.iter().enumerate() {
            lookup.insert(&s.vertices, i);
        }
        Self {
            num_vertices,
            simplices,
            lookup,
            max_dim,
            max_radius,
        }
    }

    pub fn empty(max_dim: usize, max_radius: f64) -> Self {
        Self::sorted(0, Vec::new(), max_dim, max_radius)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }

    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        self.lookup.get(vertices)
    }

    /// Filtration indices of the facets of simplex `i`, ascending.
    pub fn boundary(&self, i: usize) -> Vec<usize> {
        let mut b = Vec::new();
        self.lookup
            .facet_indices(&self.simplices[i].vertices, &mut b);
        b
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_dim + 1];
        for s in &self.simplices {
            if s.dim() >= counts.len() {
                counts.resize(s.dim() + 1, 0);
            }
            counts[s.dim()] += 1;
        }
        counts
    }

    /// One simplex per line: `v0 v1 ... vk;value`.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for s in &self.simplices {
            let verts: Vec<String> = s.vertices.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{};{}", verts.join(" "), s.value);
        }
        out
    }

    pub fn parse_text(text: &str, max_dim: usize, max_radius: f64) -> Result<Self> {
        let mut simplices = Vec::new();
        let mut num_vertices = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Data(format!("line {}: expected `v0 ... vk;value`", lineno + 1));
            let (verts, value) = line.split_once(';').ok_or_else(bad)?;
            let vertices: Vec<usize> = verts
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            let value: f64 = value.trim().parse().map_err(|_| bad())?;
            num_vertices = num_vertices.max(vertices.iter().max().map_or(0, |m| m + 1));
            simplices.push(Simplex { vertices, value });
        }
        Self::from_simplices(num_vertices, simplices, max_dim, max_radius)
    }

    /// Full subcomplex on the vertices with `keep[v]`, relabelled in
    /// increasing order, together with its inclusion into `self`.
    pub fn full_subcomplex(&self, keep: &[bool]) -> (FilteredComplex, ComplexInclusion) {
        let mut relabel = vec![usize::MAX; self.num_vertices];
        let mut vertex_map = Vec::new();
        for v in 0..self.num_vertices {
            if keep[v] {
                relabel[v] = vertex_map.len();
                vertex_map.push(v);
            }
        }
        let kept: Vec<usize> = (0..self.simplices.len())
            .filter(|&i| self.simplices[i].vertices.iter().all(|&v| keep[v]))
            .collect();
        // relabelling is monotone, so filtration order is preserved
        let simplices = kept
            .iter()
            .map(|&i| Simplex {
                vertices: self.simplices[i]
                    .vertices
                    .iter()
                    .map(|&v| relabel[v])
                    .collect(),
                value: self.simplices[i].value,
            })
            .collect();
        let sub = Self::sorted(vertex_map.len(), simplices, self.max_dim, self.max_radius);
        let inclusion = ComplexInclusion {
            vertex_map,
            simplex_map: kept,
            target_len: self.len(),
        };
        (sub, inclusion)
    }
}

/// Simplex indices keyed by vertex tuple. Tuples of at most four vertices
/// below 2³² are packed into a single integer.
#[derive(Debug, Clone, Default)]
pub(crate) struct SimplexTable {
    packed: FxHashMap<u128, usize>,
    general: FxHashMap<Vec<usize>, usize>,
}

fn pack(vertices: &[usize]) -> Option<u128> {
    if vertices.len() > 4 {
        return None;
    }
    let mut key = 0u128;
    for &v in vertices {
        // shifted by one so that tuples of different lengths differ
        let v = u32::try_from(v).ok()?.checked_add(1)?;
        key = (key << 32) | v as u128;
    }
    Some(key)
}

impl SimplexTable {
    pub(crate) fn insert(&mut self, vertices: &[usize], index: usize) {
        match pack(vertices) {
            Some(k) => self.packed.insert(k, index),
            None => self.general.insert(vertices.to_vec(), index),
        };
    }

    pub(crate) fn get(&self, vertices: &[usize]) -> Option<usize> {
        match pack(vertices) {
            Some(k) => self.packed.get(&k).copied(),
            None => self.general.get(vertices).copied(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.packed.len() + self.general.len()
    }

    /// Indices of those facets of `vertices` that are in the table,
    /// ascending, written to `out`.
    pub(crate) fn facet_indices(&self, vertices: &[usize], out: &mut Vec<usize>) {
        out.clear();
        if vertices.len() < 2 {
            return;
        }
        if vertices.len() <= 5 {
            let mut buf = [0usize; 4];
            for skip in 0..vertices.len() {
                let mut k = 0;
                for (j, &v) in vertices.iter().enumerate() {
                    if j != skip {
                        buf[k] = v;
                        k += 1;
                    }
                }
                if let Some(i) = self.get(&buf[..k]) {
                    out.push(i);
                }
            }
        } else {
            out.extend(facets(vertices).filter_map(|f| self.get(&f)));
        }
        out.sort_unstable();
    }
}

/// Facets of a sorted vertex tuple, each obtained by dropping one vertex.
pub(crate) fn facets(vertices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..vertices.len()).map(move |skip| {
        vertices
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &v)| v)
            .collect()
    })
}

fn check_caps(max_radius: f64) -> Result<()> {
    if max_radius > 0.0 && max_radius.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "radius cap must be positive and finite, got {max_radius}"
        )))
    }
}

/// Čech filtration: a simplex enters at the radius of the minimal ball
/// enclosing its vertices.
pub fn cech_filtration(
    cloud: &PointCloud,
    max_dim: usize,
    max_radius: f64,
) -> Result<FilteredComplex> {
    check_caps(max_radius)?;
    Ok(build(cloud, max_dim, max_radius, FiltrationKind::Cech))
}

/// Rips filtration scaled to radii: a simplex enters at half its diameter.
pub fn rips_filtration(
    cloud: &PointCloud,
    max_dim: usize,
    max_radius: f64,
) -> Result<FilteredComplex> {
    check_caps(max_radius)?;
    Ok(build(cloud, max_dim, max_radius, FiltrationKind::Rips))
}

pub fn filtration(
    kind: FiltrationKind,
    cloud: &PointCloud,
    max_dim: usize,
    max_radius: f64,
) -> Result<FilteredComplex> {
    match kind {
        FiltrationKind::Cech => cech_filtration(cloud, max_dim, max_radius),
        FiltrationKind::Rips => rips_filtration(cloud, max_dim, max_radius),
    }
}

struct Expander<'a> {
    cloud: &'a PointCloud,
    upper: Vec<Vec<usize>>,
    max_dim: usize,
    max_radius: f64,
    kind: FiltrationKind,
    out: Vec<Simplex>,
}

/// Čech value of `simplex ∪ {w}` and, on the small path, its ball.
fn cech_value<'a>(
    cloud: &'a PointCloud,
    simplex: &[usize],
    w: usize,
    faces: f64,
    parent: Option<&SmallBall>,
    buf: &mut Vec<&'a [f64]>,
) -> (f64, Option<SmallBall>) {
    buf.clear();
    buf.extend(simplex.iter().map(|&u| cloud.point(u)));
    buf.push(cloud.point(w));
    let ball = extend_ball(buf, parent);
    let r = match &ball {
        Some(b) => b.radius(),
        None => min_enclosing_radius(buf),
    };
    // ball already fixed by a face, up to rounding
    let value = if r <= faces * (1.0 + VALUE_SLACK) {
        faces
    } else {
        r
    };
    (value, ball)
}

impl Expander<'_> {
    fn expand(
        &mut self,
        simplex: &mut Vec<usize>,
        value: f64,
        ball: Option<&SmallBall>,
        candidates: &[usize],
    ) {
        let mut buf = Vec::with_capacity(simplex.len() + 1);
        for (k, &w) in candidates.iter().enumerate() {
            let far = simplex
                .iter()
                .map(|&u| dist(self.cloud.point(u), self.cloud.point(w)) / 2.0)
                .fold(0.0, f64::max);
            let (new_value, new_ball) = match self.kind {
                FiltrationKind::Rips => (value.max(far), None),
                FiltrationKind::Cech => {
                    let (v, b) = cech_value(self.cloud, simplex, w, value.max(far), ball, &mut buf);
                    // an edge enters at exactly half its length
                    (if simplex.len() == 1 { far } else { v }, b)
                }
            };
            if new_value > self.max_radius {
                continue;
            }
            simplex.push(w);
            self.out.push(Simplex {
                vertices: simplex.clone(),
                value: new_value,
            });
            if simplex.len() <= self.max_dim {
                let next = intersect_sorted(&candidates[k + 1..], &self.upper[w]);
                if !next.is_empty() {
                    self.expand(simplex, new_value, new_ball.as_ref(), &next);
                }
            }
            simplex.pop();
        }
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn build(
    cloud: &PointCloud,
    max_dim: usize,
    max_radius: f64,
    kind: FiltrationKind,
) -> FilteredComplex {
    let simplices = expand_from(cloud, max_dim, max_radius, kind, cloud.len());
    FilteredComplex::sorted(cloud.len(), simplices, max_dim, max_radius)
}

/// Čech simplices whose smallest vertex is below `roots`, in no particular
/// order. With the vertices of a subcomplex placed last, these are exactly
/// the simplices that survive in the quotient by the full subcomplex on the
/// remaining vertices.
pub fn cech_simplices_rooted(
    cloud: &PointCloud,
    max_dim: usize,
    max_radius: f64,
    roots: usize,
) -> Result<Vec<Simplex>> {
    check_caps(max_radius)?;
    Ok(expand_from(
        cloud,
        max_dim,
        max_radius,
        FiltrationKind::Cech,
        roots.min(cloud.len()),
    ))
}

fn expand_from(
    cloud: &PointCloud,
    max_dim: usize,
    max_radius: f64,
    kind: FiltrationKind,
    roots: usize,
) -> Vec<Simplex> {
    let n = cloud.len();
    let mut simplices: Vec<Simplex> = (0..roots)
        .map(|v| Simplex {
            vertices: vec![v],
            value: 0.0,
        })
        .collect();
    if roots == 0 || max_dim == 0 {
        return simplices;
    }
    let index = GridIndex::new(cloud, 2.0 * max_radius);
    // neighbours of later vertices are needed to extend rooted cliques
    let upper: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            index
                .within(cloud, cloud.point(i), 2.0 * max_radius)
                .into_iter()
                .filter(|&j| j > i)
                .collect()
        })
        .collect();
    let mut expander = Expander {
        cloud,
        upper,
        max_dim,
        max_radius,
        kind,
        out: Vec::new(),
    };
    for v in 0..roots {
        let cands = expander.upper[v].clone();
        let ball = extend_ball(&[cloud.point(v)], None);
        expander.expand(&mut vec![v], 0.0, ball.as_ref(), &cands);
    }
    simplices.append(&mut expander.out);

    if kind == FiltrationKind::Cech && max_dim >= 3 {
        enforce_monotone(&mut simplices);
    }
    simplices
}

// Rounding in the ball computation can leave a simplex a hair below one of
// its facets; lift it so the filtration stays monotone.
fn enforce_monotone(simplices: &mut [Simplex]) {
    simplices.sort_by_key(|s| s.vertices.len());
    let mut table = SimplexTable::default();
    let mut values = Vec::new();
    let mut faces = Vec::new();
    for s in simplices.iter_mut() {
        if s.vertices.len() >= 4 {
            table.facet_indices(&s.vertices, &mut faces);
            for &f in &faces {
                s.value = s.value.max(values[f]);
            }
        }
        if s.vertices.len() >= 3 {
            table.insert(&s.vertices, values.len());
            values.push(s.value);
        }
    }
}

/// Injective simplicial map from a source complex into a target complex.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexInclusion {
    vertex_map: Vec<usize>,
    /// Target filtration index of every source simplex.
    simplex_map: Vec<usize>,
    target_len: usize,
}

impl ComplexInclusion {
    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn simplex_map(&self) -> &[usize] {
        &self.simplex_map
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn identity(complex: &FilteredComplex) -> Self {
        Self {
            vertex_map: (0..complex.num_vertices()).collect(),
            simplex_map: (0..complex.len()).collect(),
            target_len: complex.len(),
        }
    }

    /// Induced map of a vertex map, checking that every source simplex maps
    /// to a target simplex entering no later.
    pub fn from_vertex_map(
        source: &FilteredComplex,
        target: &FilteredComplex,
        vertex_map: Vec<usize>,
    ) -> Result<Self> {
        if vertex_map.len() != source.num_vertices() {
            return Err(Error::NotSubcomplex(
                "vertex map has the wrong length".into(),
            ));
        }
        let mut seen = vec![false; target.num_vertices()];
        for &v in &vertex_map {
            if v >= target.num_vertices() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotSubcomplex("vertex map is not injective".into()));
            }
        }
        let mut simplex_map = Vec::with_capacity(source.len());
        for s in source.simplices() {
            let mut image: Vec<usize> = s.vertices.iter().map(|&v| vertex_map[v]).collect();
            image.sort_unstable();
            let t = target.index_of(&image).ok_or_else(|| {
                Error::NotSubcomplex(format!("image of {:?} missing", s.vertices))
            })?;
            let tv = target.simplices()[t].value;
            if tv > s.value * (1.0 + VALUE_SLACK) + VALUE_SLACK {
                return Err(Error::NotSubcomplex(format!(
                    "image of {:?} enters at {tv} after {}",
                    s.vertices, s.value
                )));
            }
            simplex_map.push(t);
        }
        Ok(Self {
            vertex_map,
            simplex_map,
            target_len: target.len(),
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ComplexInclusion) -> ComplexInclusion {
        ComplexInclusion {
            vertex_map: self
                .vertex_map
                .iter()
                .map(|&v| other.vertex_map[v])
                .collect(),
            simplex_map: self
                .simplex_map
                .iter()
                .map(|&s| other.simplex_map[s])
                .collect(),
            target_len: other.target_len,
        }
    }
}

/// Matches the points of `sub` to points of `sup` with bitwise-equal
/// coordinates; the k-th copy of a repeated point maps to the k-th copy.
pub fn match_points(sub: &PointCloud, sup: &PointCloud) -> Result<Vec<usize>> {
    if sub.dim() != sup.dim() {
        return Err(Error::DimensionMismatch {
            expected: sup.dim(),
            found: sub.dim(),
        });
    }
    let mut slots: FxHashMap<Vec<u64>, Vec<usize>> = FxHashMap::default();
    for (i, k) in sup.keys().enumerate() {
        slots.entry(k).or_default().push(i);
    }
    for v in slots.values_mut() {
        v.reverse();
    }
    sub.keys()
        .map(|k| {
            slots
                .get_mut(&k)
                .and_then(Vec::pop)
                .ok_or_else(|| Error::NotSubsample("point missing from the larger cloud".into()))
        })
        .collect()
}

/// Inclusion induced by a subsample `sub_cloud ⊆ sup_cloud`.
pub fn inclusion_of_subsample(
    sub: &FilteredComplex,
    sub_cloud: &PointCloud,
    sup: &FilteredComplex,
    sup_cloud: &PointCloud,
) -> Result<ComplexInclusion> {
    let vertex_map = match_points(sub_cloud, sup_cloud)?;
    ComplexInclusion::from_vertex_map(sub, sup, vertex_map)
}

/// Full subcomplex on the vertices at distance at least `r` from the origin.
pub fn subcomplex_outside_ball(
    complex: &FilteredComplex,
    cloud: &PointCloud,
    r: f64,
) -> Result<(FilteredComplex, ComplexInclusion)> {
    if !(r >= 0.0) {
        return Err(invalid(format!("ball radius must be nonnegative, got {r}")));
    }
    if cloud.len() != complex.num_vertices() {
        return Err(invalid("complex was not built from this cloud"));
    }
    let keep: Vec<bool> = cloud.iter().map(|p| norm(p) >= r).collect();
    Ok(complex.full_subcomplex(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pc(pts: &[&[f64]]) -> PointCloud {
        PointCloud::new(pts[0].len(), pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn value(c: &FilteredComplex, v: &[usize]) -> f64 {
        c.simplices()[c.index_of(v).unwrap()].value
    }

    #[test]
    fn equilateral_cech_and_rips() {
        let h = 3f64.sqrt() / 2.0;
        let x = pc(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]]);
        let c = cech_filtration(&x, 2, 1.0).unwrap();
        assert_eq!(c.count_by_dim(), vec![3, 3, 1]);
        assert_abs_diff_eq!(value(&c, &[0, 1]), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(value(&c, &[0, 1, 2]), 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        let r = rips_filtration(&x, 2, 1.0).unwrap();
        assert_abs_diff_eq!(value(&r, &[0, 1, 2]), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn square_in_unit_circle() {
        let x = pc(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0]]);
        let c = cech_filtration(&x, 2, 1.5).unwrap();
        let s = 2f64.sqrt() / 2.0;
        let edges: Vec<f64> = c
            .simplices()
            .iter()
            .filter(|s| s.dim() == 1)
            .map(|s| s.value)
            .collect();
        assert_eq!(edges.len(), 6);
        assert_eq!(edges.iter().filter(|&&v| (v - s).abs() < 1e-12).count(), 4);
        assert_eq!(
            edges.iter().filter(|&&v| (v - 1.0).abs() < 1e-12).count(),
            2
        );
        let tris: Vec<f64> = c
            .simplices()
            .iter()
            .filter(|s| s.dim() == 2)
            .map(|s| s.value)
            .collect();
        assert_eq!(tris.len(), 4);
        assert!(tris.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn trivial_inputs() {
        let one = cech_filtration(&pc(&[&[0.3, 0.1]]), 2, 0.5).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.simplices()[0].value, 0.0);
        let two = rips_filtration(&pc(&[&[0.0], &[2.0]]), 1, 1.5).unwrap();
        assert_abs_diff_eq!(value(&two, &[0, 1]), 1.0);
        assert!(rips_filtration(&PointCloud::empty(2), 2, 1.0)
            .unwrap()
            .is_empty());
        assert!(cech_filtration(&PointCloud::empty(2), 2, 0.0).is_err());
    }

    #[test]
    fn radius_cap_prunes_cofaces() {
        let h = 3f64.sqrt() / 2.0;
        let x = pc(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]]);
        let c = cech_filtration(&x, 2, 0.55).unwrap();
        assert_eq!(c.count_by_dim(), vec![3, 3, 0]);
    }

    #[test]
    fn duplicate_points_get_distinct_vertices() {
        let x = pc(&[&[0.0, 0.0], &[0.0, 0.0], &[1.0, 0.0]]);
        let c = cech_filtration(&x, 2, 1.0).unwrap();
        assert_eq!(c.count_by_dim(), vec![3, 3, 1]);
        assert_eq!(value(&c, &[0, 1]), 0.0);
        assert_abs_diff_eq!(value(&c, &[0, 1, 2]), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn text_round_trip_and_validation() {
        let x = pc(&[&[0.0, 0.0], &[1.0, 0.0], &[0.2, 0.7]]);
        let c = cech_filtration(&x, 2, 1.0).unwrap();
        let back = FilteredComplex::parse_text(&c.export_text(), 2, 1.0).unwrap();
        assert_eq!(back.simplices(), c.simplices());
        assert!(FilteredComplex::parse_text("0 1;0.5\n", 1, 1.0).is_err());
        assert!(FilteredComplex::parse_text("0;0\n1;0.7\n0 1;0.5\n", 1, 1.0).is_err());
    }

    #[test]
    fn outside_ball_subcomplex() {
        let x = PointCloud::new(1, (-10..=10).map(|k| vec![k as f64 * 0.1]).collect()).unwrap();
        let f = cech_filtration(&x, 2, 0.3).unwrap();
        let (same, incl) = subcomplex_outside_ball(&f, &x, 0.0).unwrap();
        assert_eq!(same.simplices(), f.simplices());
        assert_eq!(
            incl.simplex_map(),
            (0..f.len()).collect::<Vec<_>>().as_slice()
        );
        let (none, _) = subcomplex_outside_ball(&f, &x, 1.5).unwrap();
        assert!(none.is_empty());
        assert!(subcomplex_outside_ball(&f, &x, -0.1).is_err());

        // two arcs [-1, -0.5] and [0.5, 1]: two components at small scale
        let (arcs, incl) = subcomplex_outside_ball(&f, &x, 0.5 - 1e-9).unwrap();
        assert_eq!(arcs.num_vertices(), 12);
        let mut uf = crate::union_find::UnionFind::new(arcs.num_vertices());
        for s in arcs
            .simplices()
            .iter()
            .filter(|s| s.dim() == 1 && s.value <= 0.05 + 1e-12)
        {
            uf.union(s.vertices[0], s.vertices[1]);
        }
        assert_eq!(uf.groups().len(), 2);
        for (i, s) in arcs.simplices().iter().enumerate() {
            assert_eq!(f.simplices()[incl.simplex_map()[i]].value, s.value);
        }
    }

    #[test]
    fn subsample_inclusions() {
        let x = pc(&[&[0.0, 0.0], &[0.4, 0.0], &[0.1, 0.3]]);
        let f = cech_filtration(&x, 2, 1.0).unwrap();
        let id = inclusion_of_subsample(&f, &x, &f, &x).unwrap();
        assert_eq!(id, ComplexInclusion::identity(&f));

        let one = pc(&[&[0.4, 0.0]]);
        let two = pc(&[&[0.0, 0.0], &[0.4, 0.0]]);
        let f1 = cech_filtration(&one, 2, 1.0).unwrap();
        let f2 = cech_filtration(&two, 2, 1.0).unwrap();
        let incl = inclusion_of_subsample(&f1, &one, &f2, &two).unwrap();
        assert_eq!(incl.vertex_map(), &[1]);
        assert!(inclusion_of_subsample(&f2, &two, &f1, &one).is_err());
    }
}
