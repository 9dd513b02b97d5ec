use super::grid::CellGrid;
use super::kdtree::KdTree;
use super::GeoGraph;
use crate::error::Result;
use crate::geometry::Point;

pub const UNREACHED: u32 = u32::MAX;
const NO_PARENT: u32 = u32::MAX;

/// Target total for nested sub-cells; each coarse cell of side `r` is split
/// into at most 32×32 of them.
const NESTED_CELL_BUDGET: usize = 1 << 22;
const MAX_SUBDIVISION: usize = 32;

/// Breadth-first search result: hop distances and one shortest-path parent
/// per reached vertex.
#[derive(Clone, Debug)]
pub struct BfsTree {
    source: usize,
    dist: Vec<u32>,
    parent: Vec<u32>,
    reached: usize,
    complete: bool,
}

impl BfsTree {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn hops(&self, v: usize) -> Option<u32> {
        let d = self.dist[v];
        (d != UNREACHED).then_some(d)
    }

    pub fn distances(&self) -> &[u32] {
        &self.dist
    }

    pub fn reached(&self) -> usize {
        self.reached
    }

    /// False when the search stopped early after reaching all targets.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn eccentricity(&self) -> u32 {
        self.dist
            .iter()
            .copied()
            .filter(|&d| d != UNREACHED)
            .max()
            .unwrap_or(0)
    }

    /// Smallest-index vertex at maximum distance.
    pub fn farthest(&self) -> usize {
        let ecc = self.eccentricity();
        self.dist.iter().position(|&d| d == ecc).unwrap_or(self.source)
    }

    /// Path `source, …, v`, or `None` if `v` was not reached.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        self.hops(v)?;
        let mut path = vec![v];
        let mut x = v;
        while x != self.source {
            x = self.parent[x] as usize;
            path.push(x);
        }
        path.reverse();
        Some(path)
    }
}

struct Targets {
    flag: Vec<bool>,
    remaining: usize,
}

impl Targets {
    fn new(count: usize, targets: &[usize]) -> Self {
        let mut flag = vec![false; if targets.is_empty() { 0 } else { count }];
        let mut remaining = 0;
        for &t in targets {
            if !flag[t] {
                flag[t] = true;
                remaining += 1;
            }
        }
        Targets { flag, remaining }
    }

    fn enabled(&self) -> bool {
        !self.flag.is_empty()
    }

    fn hit(&mut self, v: usize) {
        if self.enabled() && self.flag[v] {
            self.flag[v] = false;
            self.remaining -= 1;
        }
    }

    fn done(&self) -> bool {
        self.enabled() && self.remaining == 0
    }
}

/// BFS from `source`. With a non-empty `targets` list the search stops as
/// soon as all of them have been assigned a distance; other distances are
/// then only partially filled.
pub fn bfs_tree(g: &GeoGraph, source: usize, targets: &[usize]) -> Result<BfsTree> {
    g.check_vertex(source)?;
    for &t in targets {
        g.check_vertex(t)?;
    }
    let count = g.vertex_count();
    let mut tree = BfsTree {
        source,
        dist: vec![UNREACHED; count],
        parent: vec![NO_PARENT; count],
        reached: 1,
        complete: true,
    };
    tree.dist[source] = 0;
    let mut targets = Targets::new(count, targets);
    targets.hit(source);
    if targets.done() {
        tree.complete = count == 1;
        return Ok(tree);
    }
    if g.is_eager() {
        eager_bfs(g, &mut tree, &mut targets);
    } else {
        implicit_bfs(g, &mut tree, &mut targets);
    }
    Ok(tree)
}

fn eager_bfs(g: &GeoGraph, tree: &mut BfsTree, targets: &mut Targets) {
    let mut queue = Vec::with_capacity(g.vertex_count());
    queue.push(tree.source as u32);
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head] as usize;
        head += 1;
        let next = tree.dist[x] + 1;
        for &y in g.neighbors(x).iter() {
            let y = y as usize;
            if tree.dist[y] == UNREACHED {
                tree.dist[y] = next;
                tree.parent[y] = x as u32;
                tree.reached += 1;
                queue.push(y as u32);
                targets.hit(y);
                if targets.done() {
                    tree.complete = tree.reached == g.vertex_count();
                    return;
                }
            }
        }
    }
}

/// Coarse grid of side `r` with every coarse cell split into `m × m`
/// sub-cells; points are stored grouped by sub-cell.
#[derive(Debug)]
pub(crate) struct NestedGrid {
    coarse_columns: usize,
    coarse_side: f64,
    half: f64,
    m: usize,
    sub_side: f64,
    starts: Vec<u32>,
    entries: Vec<u32>,
    coarse_of_point: Vec<u32>,
}

impl NestedGrid {
    pub fn build(points: &[Point], coarse: &CellGrid) -> Self {
        let coarse_cells = coarse.cell_count();
        let budget = NESTED_CELL_BUDGET.min(4 * points.len() + 64);
        let m = ((budget as f64 / coarse_cells as f64).sqrt().floor() as usize)
            .clamp(1, MAX_SUBDIVISION);
        let coarse_side = coarse.cell_side();
        let half = coarse.half();
        let mut grid = NestedGrid {
            coarse_columns: coarse.columns(),
            coarse_side,
            half,
            m,
            sub_side: coarse_side / m as f64,
            starts: vec![0; coarse_cells * m * m + 1],
            entries: vec![0; points.len()],
            coarse_of_point: Vec::with_capacity(points.len()),
        };
        let mut cell_of = Vec::with_capacity(points.len());
        for &p in points {
            let (cx, cy) = coarse.cell_of(p);
            let c = cy * grid.coarse_columns + cx;
            grid.coarse_of_point.push(c as u32);
            let sub = grid.sub_cell(p, cx, cy);
            cell_of.push((c * m * m + sub) as u32);
        }
        for &c in &cell_of {
            grid.starts[c as usize + 1] += 1;
        }
        for i in 0..grid.starts.len() - 1 {
            grid.starts[i + 1] += grid.starts[i];
        }
        let mut fill = grid.starts.clone();
        for (i, &c) in cell_of.iter().enumerate() {
            grid.entries[fill[c as usize] as usize] = i as u32;
            fill[c as usize] += 1;
        }
        grid
    }

    fn sub_axis(&self, local: f64) -> usize {
        let s = (local / self.sub_side).floor();
        if s <= 0.0 {
            0
        } else {
            (s as usize).min(self.m - 1)
        }
    }

    fn sub_cell(&self, p: Point, cx: usize, cy: usize) -> usize {
        let lx = p.x + self.half - cx as f64 * self.coarse_side;
        let ly = p.y + self.half - cy as f64 * self.coarse_side;
        self.sub_axis(ly) * self.m + self.sub_axis(lx)
    }

    fn sub_center(&self, cell: usize) -> Point {
        let per = self.m * self.m;
        let coarse = cell / per;
        let sub = cell % per;
        let (cx, cy) = (coarse % self.coarse_columns, coarse / self.coarse_columns);
        let (sx, sy) = (sub % self.m, sub / self.m);
        Point::new(
            -self.half + cx as f64 * self.coarse_side + (sx as f64 + 0.5) * self.sub_side,
            -self.half + cy as f64 * self.coarse_side + (sy as f64 + 0.5) * self.sub_side,
        )
    }

    /// Radius of a sub-cell around its centre, padded for rounding.
    fn sub_radius(&self) -> f64 {
        self.sub_side * std::f64::consts::FRAC_1_SQRT_2 * (1.0 + 1e-9) + self.half.abs() * 1e-12
    }
}

/// Level-synchronous BFS without adjacency lists.
///
/// Each level builds a k-d tree over the frontier, then visits only the
/// coarse cells (side `r`) adjacent to a frontier cell. Within them, each
/// non-empty sub-cell whose centre is within `r − h` of a frontier vertex
/// (`h` the sub-cell radius) is claimed whole; sub-cells farther than
/// `r + h` are skipped; the rest are resolved point by point with the exact
/// `dist_sq ≤ r²` test. Level sets therefore coincide with the eager BFS.
fn implicit_bfs(g: &GeoGraph, tree: &mut BfsTree, targets: &mut Targets) {
    let nested = g.nested();
    let pts = &g.instance().points;
    let r = g.r();
    let r_sq = r * r;
    let h = nested.sub_radius();
    let claim = r - h - r * 1e-9;
    let claim_sq = if claim > 0.0 { claim * claim } else { -1.0 };
    let reach = (r + h) * (1.0 + 1e-9);
    let reach_sq = reach * reach;

    let per = nested.m * nested.m;
    let coarse_count = (nested.starts.len() - 1) / per;
    let columns = nested.coarse_columns;
    let rows = coarse_count / columns;

    let mut live = nested.entries.clone();
    let mut live_len: Vec<u32> = nested.starts.windows(2).map(|w| w[1] - w[0]).collect();
    let mut coarse_live: Vec<u32> = (0..coarse_count)
        .map(|c| nested.starts[(c + 1) * per] - nested.starts[c * per])
        .collect();

    let remove_source = |live: &mut Vec<u32>, live_len: &mut Vec<u32>, v: usize| {
        for cell in (coarse_index(nested, v) * per)..((coarse_index(nested, v) + 1) * per) {
            let start = nested.starts[cell] as usize;
            let len = live_len[cell] as usize;
            if let Some(pos) = live[start..start + len].iter().position(|&x| x as usize == v) {
                live[start + pos] = live[start + len - 1];
                live_len[cell] -= 1;
                return;
            }
        }
    };
    remove_source(&mut live, &mut live_len, tree.source);
    coarse_live[coarse_index(nested, tree.source)] -= 1;

    let mut frontier: Vec<u32> = vec![tree.source as u32];
    let mut stamp = vec![0u32; coarse_count];
    let mut level = 0u32;
    let mut candidates: Vec<usize> = Vec::new();
    while !frontier.is_empty() {
        level += 1;
        let kd = KdTree::build(frontier.iter().map(|&f| (pts[f as usize], f)).collect());

        candidates.clear();
        for &f in &frontier {
            let c = coarse_index(nested, f as usize);
            let (cx, cy) = (c % columns, c / columns);
            for y in cy.saturating_sub(1)..=(cy + 1).min(rows - 1) {
                for x in cx.saturating_sub(1)..=(cx + 1).min(columns - 1) {
                    let cc = y * columns + x;
                    if stamp[cc] != level && coarse_live[cc] > 0 {
                        stamp[cc] = level;
                        candidates.push(cc);
                    }
                }
            }
        }
        candidates.sort_unstable();

        let mut next: Vec<u32> = Vec::new();
        for &cc in &candidates {
            for cell in cc * per..(cc + 1) * per {
                let len = live_len[cell] as usize;
                if len == 0 {
                    continue;
                }
                let start = nested.starts[cell] as usize;
                let Some((f, d2)) = kd.nearest_within(nested.sub_center(cell), reach_sq) else {
                    continue;
                };
                let seg = &mut live[start..start + len];
                let mut kept = 0;
                if d2 <= claim_sq {
                    for &p in seg.iter() {
                        next.push(p);
                        tree.parent[p as usize] = f;
                    }
                } else {
                    for i in 0..len {
                        let p = seg[i];
                        match kd.nearest_within(pts[p as usize], r_sq) {
                            Some((fp, _)) => {
                                next.push(p);
                                tree.parent[p as usize] = fp;
                            }
                            None => {
                                seg[kept] = p;
                                kept += 1;
                            }
                        }
                    }
                }
                coarse_live[cc] -= (len - kept) as u32;
                live_len[cell] = kept as u32;
            }
        }

        next.sort_unstable();
        for &p in &next {
            tree.dist[p as usize] = level;
            targets.hit(p as usize);
        }
        tree.reached += next.len();
        if targets.done() {
            tree.complete = tree.reached == g.vertex_count();
            return;
        }
        frontier = next;
    }
}

fn coarse_index(nested: &NestedGrid, v: usize) -> usize {
    nested.coarse_of_point[v] as usize
}
