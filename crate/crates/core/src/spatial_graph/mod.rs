//! Geometric graph over an [`RggInstance`]: vertices are the points, and
//! `i ~ j` iff `dist_sq(p_i, p_j) <= r²`.
//!
//! Adjacency is either materialized as a flat CSR array (`Eager`) or
//! answered on demand from the cell grid (`Implicit`). Expected storage is
//! `N·πr²·N/n` entries, which is prohibitive for dense graphs such as
//! `n = 10⁶, r ≈ 260`; BFS in implicit mode never enumerates edges and
//! instead sweeps a nested cell grid against a per-level frontier tree.

mod bfs;
mod diameter;
mod grid;
mod kdtree;

use std::borrow::Cow;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{dist_sq, Point};
use crate::sampler::RggInstance;

pub use bfs::{bfs_tree, BfsTree, UNREACHED};
pub use diameter::{diameter, DiameterEstimate, DiameterMode, EXACT_DIAMETER_LIMIT};
pub use grid::{CellGrid, MAX_CELLS_PER_AXIS};

/// Auto mode materializes adjacency only below this many expected entries.
pub const AUTO_EAGER_ENTRY_BUDGET: f64 = 6.0e7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdjacencyMode {
    Eager,
    Implicit,
    Auto,
}

#[derive(Clone, Debug)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

#[derive(Debug)]
pub struct GeoGraph {
    instance: RggInstance,
    grid: CellGrid,
    r_sq: f64,
    adjacency: Option<Csr>,
    nested: OnceLock<bfs::NestedGrid>,
}

pub fn build_graph(instance: RggInstance) -> Result<GeoGraph> {
    GeoGraph::build(instance, AdjacencyMode::Auto)
}

impl GeoGraph {
    pub fn build(instance: RggInstance, mode: AdjacencyMode) -> Result<Self> {
        let r = instance.r;
        if !(r.is_finite() && r > 0.0) {
            return Err(invalid("r", format!("must be positive and finite, got {r}")));
        }
        let half = instance.square().half_side();
        let grid = CellGrid::build(&instance.points, half, r)?;
        let mut g = GeoGraph {
            r_sq: r * r,
            grid,
            instance,
            adjacency: None,
            nested: OnceLock::new(),
        };
        let eager = match mode {
            AdjacencyMode::Eager => true,
            AdjacencyMode::Implicit => false,
            AdjacencyMode::Auto => g.expected_entries() <= AUTO_EAGER_ENTRY_BUDGET,
        };
        if eager {
            g.adjacency = Some(g.build_csr());
        }
        Ok(g)
    }

    /// Expected number of directed adjacency entries, `N·min(N−1, N·πr²/n)`.
    pub fn expected_entries(&self) -> f64 {
        let count = self.vertex_count() as f64;
        let area = self.instance.n as f64;
        let per_vertex = (count * std::f64::consts::PI * self.r_sq / area).min(count - 1.0);
        count * per_vertex.max(0.0)
    }

    fn build_csr(&self) -> Csr {
        let count = self.vertex_count();
        let mut offsets = Vec::with_capacity(count + 1);
        let mut targets = Vec::with_capacity(self.expected_entries().min(1e9) as usize);
        offsets.push(0);
        for i in 0..count {
            let start = targets.len();
            self.scan_neighbours(i, &mut targets);
            targets[start..].sort_unstable();
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    fn scan_neighbours(&self, i: usize, out: &mut Vec<u32>) {
        let pts = &self.instance.points;
        let p = pts[i];
        let (cx, cy) = self.grid.cell_of(p);
        for (x, y) in self.grid.neighbourhood(cx, cy, 1) {
            for &j in self.grid.bucket(x, y) {
                if j as usize != i && dist_sq(p, pts[j as usize]) <= self.r_sq {
                    out.push(j);
                }
            }
        }
    }

    pub fn instance(&self) -> &RggInstance {
        &self.instance
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn r(&self) -> f64 {
        self.instance.r
    }

    pub fn vertex_count(&self) -> usize {
        self.instance.points.len()
    }

    pub fn point(&self, i: usize) -> Point {
        self.instance.points[i]
    }

    pub fn is_eager(&self) -> bool {
        self.adjacency.is_some()
    }

    pub(crate) fn nested(&self) -> &bfs::NestedGrid {
        self.nested
            .get_or_init(|| bfs::NestedGrid::build(&self.instance.points, &self.grid))
    }

    pub fn check_vertex(&self, index: usize) -> Result<()> {
        if index < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                index,
                count: self.vertex_count(),
            })
        }
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        i != j && dist_sq(self.point(i), self.point(j)) <= self.r_sq
    }

    /// Neighbours of `i` in ascending index order.
    pub fn neighbors(&self, i: usize) -> Cow<'_, [u32]> {
        match &self.adjacency {
            Some(csr) => Cow::Borrowed(&csr.targets[csr.offsets[i]..csr.offsets[i + 1]]),
            None => {
                let mut out = Vec::new();
                self.scan_neighbours(i, &mut out);
                out.sort_unstable();
                Cow::Owned(out)
            }
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        match &self.adjacency {
            Some(csr) => csr.offsets[i + 1] - csr.offsets[i],
            None => self.neighbors(i).len(),
        }
    }

    /// Undirected edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .filter(|&&j| j as usize > i)
                .map(|&j| (i, j as usize))
                .collect::<Vec<_>>()
        })
    }

    pub fn edge_count(&self) -> usize {
        match &self.adjacency {
            Some(csr) => csr.targets.len() / 2,
            None => (0..self.vertex_count()).map(|i| self.degree(i)).sum::<usize>() / 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub source: usize,
    pub target: usize,
    /// `None` when the endpoints lie in different components.
    pub hops: Option<u32>,
    pub path: Option<Vec<usize>>,
}

impl DistanceResult {
    pub fn is_reachable(&self) -> bool {
        self.hops.is_some()
    }
}

pub fn bfs_distance(g: &GeoGraph, u: usize, v: usize, want_path: bool) -> Result<DistanceResult> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let tree = bfs_tree(g, u, &[v])?;
    let hops = tree.hops(v);
    let path = if want_path { tree.path_to(v) } else { None };
    Ok(DistanceResult {
        source: u,
        target: v,
        hops,
        path,
    })
}

pub fn is_connected(g: &GeoGraph) -> bool {
    if g.vertex_count() <= 1 {
        return true;
    }
    match bfs_tree(g, 0, &[]) {
        Ok(tree) => tree.reached() == g.vertex_count(),
        Err(_) => false,
    }
}

/// For each corner square of side `ln n` (bottom-left, bottom-right,
/// top-left, top-right), the vertex inside it closest to the corner.
pub fn corner_vertices(g: &GeoGraph) -> [Option<usize>; 4] {
    let square = g.instance().square();
    let side = (g.instance().n as f64).ln().max(0.0);
    let mut out = [None; 4];
    for (slot, corner) in out.iter_mut().zip(square.corners()) {
        let mut best: Option<(usize, f64)> = None;
        for (i, &p) in g.instance().points.iter().enumerate() {
            if (p.x - corner.x).abs() > side || (p.y - corner.y).abs() > side {
                continue;
            }
            let d = dist_sq(p, corner);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        *slot = best.map(|(i, _)| i);
    }
    out
}

/// Smallest `k` with `(k·r)² ≥ d_E²`, i.e. `⌈d_E/r⌉` without rounding
/// `d_E` through a square root.
pub fn min_hops_lower(p: Point, q: Point, r: f64) -> u64 {
    let d2 = dist_sq(p, q);
    if d2 == 0.0 {
        return 0;
    }
    let mut k = (d2.sqrt() / r).ceil().max(1.0) as u64;
    while k > 1 && ((k - 1) as f64 * r).powi(2) >= d2 {
        k -= 1;
    }
    while (k as f64 * r).powi(2) < d2 {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_uniform, SeedSpec};
    use proptest::prelude::*;

    fn instance(n: u64, r: f64, pts: &[(f64, f64)]) -> RggInstance {
        RggInstance::from_points(n, r, pts.iter().map(|&(x, y)| Point::new(x, y)).collect())
            .unwrap()
    }

    fn brute_adjacency(inst: &RggInstance) -> Vec<Vec<u32>> {
        let r2 = inst.r * inst.r;
        let p = &inst.points;
        (0..p.len())
            .map(|i| {
                (0..p.len())
                    .filter(|&j| j != i && dist_sq(p[i], p[j]) <= r2)
                    .map(|j| j as u32)
                    .collect()
            })
            .collect()
    }

    fn floyd_warshall(adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let n = adj.len();
        let mut d = vec![vec![UNREACHED; n]; n];
        for i in 0..n {
            d[i][i] = 0;
            for &j in &adj[i] {
                d[i][j as usize] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] != UNREACHED && d[k][j] != UNREACHED {
                        d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                    }
                }
            }
        }
        d
    }

    fn components(adj: &[Vec<u32>]) -> usize {
        let mut seen = vec![false; adj.len()];
        let mut count = 0;
        for s in 0..adj.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y as usize);
                    }
                }
            }
        }
        count
    }

    #[test]
    fn boundary_distance_is_adjacent() {
        let g = build_graph(instance(100, 1.5, &[(0.0, 0.0), (1.5, 0.0), (4.0, 0.0)])).unwrap();
        assert!(g.is_edge(0, 1));
        assert_eq!(g.neighbors(0).as_ref(), &[1]);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn rejects_nonpositive_radius() {
        let mut inst = instance(100, 1.0, &[(0.0, 0.0)]);
        inst.r = 0.0;
        assert!(build_graph(inst).is_err());
    }

    #[test]
    fn grid_matches_brute_force() {
        for (trial, r) in [(0, 1.0), (1, 2.5), (2, 0.3), (3, 40.0)] {
            let inst = sample_uniform(1000, r, SeedSpec::new(7, trial)).unwrap();
            let expect = brute_adjacency(&inst);
            for mode in [AdjacencyMode::Eager, AdjacencyMode::Implicit] {
                let g = GeoGraph::build(inst.clone(), mode).unwrap();
                for (i, row) in expect.iter().enumerate() {
                    assert_eq!(g.neighbors(i).as_ref(), row.as_slice(), "vertex {i}");
                }
                let symmetric = g.edges().count() * 2 == expect.iter().map(Vec::len).sum::<usize>();
                assert!(symmetric);
            }
        }
    }

    #[test]
    fn bfs_matches_floyd_warshall() {
        for trial in 0..5 {
            let inst = sample_uniform(20, 1.4, SeedSpec::new(3, trial)).unwrap();
            let fw = floyd_warshall(&brute_adjacency(&inst));
            for mode in [AdjacencyMode::Eager, AdjacencyMode::Implicit] {
                let g = GeoGraph::build(inst.clone(), mode).unwrap();
                for u in 0..20 {
                    for v in 0..20 {
                        let res = bfs_distance(&g, u, v, true).unwrap();
                        let expect = (fw[u][v] != UNREACHED).then_some(fw[u][v]);
                        assert_eq!(res.hops, expect);
                        if let (Some(h), Some(path)) = (res.hops, res.path) {
                            assert_eq!(path.len(), h as usize + 1);
                            assert_eq!((path[0], path[h as usize]), (u, v));
                            assert!(path.windows(2).all(|w| g.is_edge(w[0], w[1])));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_distances() {
        let g = build_graph(instance(100, 1.0, &[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)])).unwrap();
        assert_eq!(bfs_distance(&g, 1, 1, true).unwrap().hops, Some(0));
        assert_eq!(bfs_distance(&g, 0, 1, false).unwrap().hops, Some(1));
        assert_eq!(bfs_distance(&g, 0, 2, true).unwrap().hops, None);
        assert!(matches!(
            bfs_distance(&g, 0, 3, false),
            Err(Error::InvalidVertex { index: 3, count: 3 })
        ));
    }

    #[test]
    fn implicit_bfs_agrees_on_dense_instances() {
        for (trial, r) in [(0, 6.0), (1, 15.0), (2, 3.0)] {
            let inst = sample_uniform(3000, r, SeedSpec::new(11, trial)).unwrap();
            let eager = GeoGraph::build(inst.clone(), AdjacencyMode::Eager).unwrap();
            let implicit = GeoGraph::build(inst, AdjacencyMode::Implicit).unwrap();
            for s in [0, 17, 2999] {
                let a = bfs_tree(&eager, s, &[]).unwrap();
                let b = bfs_tree(&implicit, s, &[]).unwrap();
                assert_eq!(a.distances(), b.distances());
                for v in (0..3000).step_by(97) {
                    if let Some(path) = b.path_to(v) {
                        assert!(path.windows(2).all(|w| implicit.is_edge(w[0], w[1])));
                    }
                }
            }
        }
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&build_graph(instance(4, 0.1, &[(0.5, 0.5)])).unwrap()));
        assert!(!is_connected(
            &build_graph(instance(100, 1.0, &[(0.0, 0.0), (1.5, 0.0)])).unwrap()
        ));
        for trial in 0..6 {
            let inst = sample_uniform(1000, 1.6, SeedSpec::new(5, trial)).unwrap();
            let expect = components(&brute_adjacency(&inst)) == 1;
            for mode in [AdjacencyMode::Eager, AdjacencyMode::Implicit] {
                assert_eq!(is_connected(&GeoGraph::build(inst.clone(), mode).unwrap()), expect);
            }
        }
    }

    #[test]
    fn corners() {
        let h = 5.0;
        let g = build_graph(instance(
            100,
            1.0,
            &[(-h, -h), (-4.0, -4.0), (4.9, -4.9), (0.0, 0.0), (h, h)],
        ))
        .unwrap();
        assert_eq!(corner_vertices(&g), [Some(0), Some(2), None, Some(4)]);
    }

    #[test]
    fn corners_present_with_high_probability() {
        // Pr(some corner square empty) ≤ 4(1 − ln²n/n)ⁿ ≈ 4·e^{−132.5} at n = 10⁵.
        let n = 100_000u64;
        let nf = n as f64;
        let miss = 4.0 * (1.0 - nf.ln().powi(2) / nf).powf(nf);
        assert!(miss < 1e-50);
        let mut present = 0;
        let trials = 40;
        for t in 0..trials {
            let inst = sample_uniform(n, 1.0, SeedSpec::new(99, t)).unwrap();
            let g = GeoGraph::build(inst, AdjacencyMode::Implicit).unwrap();
            if corner_vertices(&g).iter().all(Option::is_some) {
                present += 1;
            }
        }
        assert_eq!(present, trials);
    }

    #[test]
    fn min_hops_lower_examples() {
        let o = Point::ORIGIN;
        assert_eq!(min_hops_lower(o, o, 1.0), 0);
        assert_eq!(min_hops_lower(o, Point::new(3.0, 0.0), 1.0), 3);
        assert_eq!(min_hops_lower(o, Point::new(3.0, 1e-4), 1.0), 4);
        assert_eq!(min_hops_lower(o, Point::new(0.3, 0.0), 0.1), 3);
    }

    #[test]
    fn auto_mode_switches_on_density() {
        let sparse = sample_uniform(2000, 1.5, SeedSpec::new(1, 0)).unwrap();
        assert!(build_graph(sparse).unwrap().is_eager());
        let mut dense = sample_uniform(20_000, 1.0, SeedSpec::new(1, 1)).unwrap();
        dense.r = 200.0;
        assert!(!build_graph(dense).unwrap().is_eager());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn hop_count_respects_euclidean_bound(seed in any::<u64>(), r in 1.2f64..4.0) {
            let inst = sample_uniform(400, r, SeedSpec::new(seed, 0)).unwrap();
            let g = build_graph(inst).unwrap();
            let tree = bfs_tree(&g, 0, &[]).unwrap();
            for v in 0..g.vertex_count() {
                if let Some(h) = tree.hops(v) {
                    prop_assert!(h as u64 >= min_hops_lower(g.point(0), g.point(v), r));
                }
            }
        }

        #[test]
        fn hop_distance_triangle_inequality(seed in any::<u64>(), r in 1.2f64..4.0) {
            let inst = sample_uniform(300, r, SeedSpec::new(seed, 1)).unwrap();
            let g = build_graph(inst).unwrap();
            let (a, b, c) = (0, 1, 2);
            let ta = bfs_tree(&g, a, &[]).unwrap();
            let tb = bfs_tree(&g, b, &[]).unwrap();
            if let (Some(ab), Some(bc)) = (ta.hops(b), tb.hops(c)) {
                let ac = ta.hops(c).expect("same component");
                prop_assert!(ac <= ab + bc);
            }
        }
    }
}
