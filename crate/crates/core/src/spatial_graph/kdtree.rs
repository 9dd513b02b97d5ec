//! Static 2-d tree answering "nearest point within a squared radius" queries.
//! Rebuilt once per BFS level over that level's frontier.

use crate::geometry::Point;

const LEAF_SIZE: usize = 8;
const NO_CHILD: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node {
    lo: u32,
    hi: u32,
    left: u32,
    right: u32,
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
}

impl Node {
    /// Squared distance from `q` to the bounding box. Never exceeds the
    /// floating-point squared distance to any point inside the box.
    fn box_dist_sq(&self, q: Point) -> f64 {
        let dx = if q.x < self.min_x {
            self.min_x - q.x
        } else if q.x > self.max_x {
            q.x - self.max_x
        } else {
            0.0
        };
        let dy = if q.y < self.min_y {
            self.min_y - q.y
        } else if q.y > self.max_y {
            q.y - self.max_y
        } else {
            0.0
        };
        dx * dx + dy * dy
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct KdTree {
    items: Vec<(Point, u32)>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub fn build(items: Vec<(Point, u32)>) -> Self {
        let mut tree = KdTree {
            nodes: Vec::with_capacity(2 * items.len() / LEAF_SIZE + 1),
            items,
        };
        if !tree.items.is_empty() {
            let len = tree.items.len();
            tree.build_range(0, len);
        }
        tree
    }

    fn build_range(&mut self, lo: usize, hi: usize) -> u32 {
        let slice = &self.items[lo..hi];
        let (mut min_x, mut max_x, mut min_y, mut max_y) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (p, _) in slice {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            lo: lo as u32,
            hi: hi as u32,
            left: NO_CHILD,
            right: NO_CHILD,
            min_x,
            max_x,
            min_y,
            max_y,
        });
        if hi - lo > LEAF_SIZE {
            let mid = lo + (hi - lo) / 2;
            let split_x = max_x - min_x >= max_y - min_y;
            self.items[lo..hi].select_nth_unstable_by(mid - lo, |a, b| {
                if split_x {
                    a.0.x.total_cmp(&b.0.x)
                } else {
                    a.0.y.total_cmp(&b.0.y)
                }
            });
            let left = self.build_range(lo, mid);
            let right = self.build_range(mid, hi);
            let node = &mut self.nodes[id as usize];
            node.left = left;
            node.right = right;
        }
        id
    }

    /// The item nearest to `q` among those with squared distance `≤ bound_sq`,
    /// ties broken by the smaller id.
    pub fn nearest_within(&self, q: Point, bound_sq: f64) -> Option<(u32, f64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best: Option<(u32, f64)> = None;
        let mut limit = bound_sq;
        let mut stack: Vec<u32> = Vec::with_capacity(64);
        stack.push(0);
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if node.box_dist_sq(q) > limit {
                continue;
            }
            if node.left == NO_CHILD {
                for &(p, item) in &self.items[node.lo as usize..node.hi as usize] {
                    let dx = p.x - q.x;
                    let dy = p.y - q.y;
                    let d2 = dx * dx + dy * dy;
                    if d2 > limit {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((b, bd)) => d2 < bd || (d2 == bd && item < b),
                    };
                    if better {
                        best = Some((item, d2));
                        limit = d2;
                    }
                }
            } else {
                let l = &self.nodes[node.left as usize];
                let r = &self.nodes[node.right as usize];
                // Visit the nearer child first: push it last.
                if l.box_dist_sq(q) <= r.box_dist_sq(q) {
                    stack.push(node.right);
                    stack.push(node.left);
                } else {
                    stack.push(node.left);
                    stack.push(node.right);
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let items: Vec<(Point, u32)> = (0..500)
            .map(|i| {
                (
                    Point::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)),
                    i,
                )
            })
            .collect();
        let tree = KdTree::build(items.clone());
        for _ in 0..2000 {
            let q = Point::new(rng.random_range(-1.0..11.0), rng.random_range(-1.0..11.0));
            let bound = rng.random_range(0.0..2.0f64).powi(2);
            let expect = items
                .iter()
                .map(|&(p, i)| (i, crate::geometry::dist_sq(p, q)))
                .filter(|&(_, d)| d <= bound)
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            assert_eq!(tree.nearest_within(q, bound), expect);
        }
    }

    #[test]
    fn empty_tree_finds_nothing() {
        let tree = KdTree::build(Vec::new());
        assert_eq!(tree.nearest_within(Point::ORIGIN, 1e9), None);
    }

    #[test]
    fn duplicate_points_break_ties_by_id() {
        let p = Point::new(1.0, 1.0);
        let tree = KdTree::build((0..20).rev().map(|i| (p, i)).collect());
        assert_eq!(tree.nearest_within(Point::ORIGIN, 2.0), Some((0, 2.0)));
    }
}
