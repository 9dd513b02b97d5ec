use serde::{Deserialize, Serialize};

use super::bfs::{bfs_tree, BfsTree};
use super::GeoGraph;
use crate::error::{invalid, Error, Result};
use crate::geometry::dist_sq;

/// All-source BFS is refused above this many vertices.
pub const EXACT_DIAMETER_LIMIT: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiameterMode {
    Exact,
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterEstimate {
    pub mode: DiameterMode,
    pub lower: u32,
    pub upper: u32,
    /// Number of BFS runs performed.
    pub sweeps: u32,
}

impl DiameterEstimate {
    pub fn contains(&self, d: u32) -> bool {
        self.lower <= d && d <= self.upper
    }
}

fn full_bfs(g: &GeoGraph, source: usize) -> Result<BfsTree> {
    let tree = bfs_tree(g, source, &[])?;
    if tree.reached() != g.vertex_count() {
        return Err(Error::Disconnected);
    }
    Ok(tree)
}

pub fn diameter(g: &GeoGraph, mode: DiameterMode) -> Result<DiameterEstimate> {
    let count = g.vertex_count();
    if count == 0 {
        return Err(invalid("graph", "no vertices"));
    }
    match mode {
        DiameterMode::Exact => {
            if count > EXACT_DIAMETER_LIMIT {
                return Err(invalid(
                    "mode",
                    format!("exact diameter limited to {EXACT_DIAMETER_LIMIT} vertices, graph has {count}"),
                ));
            }
            let mut diam = 0;
            for s in 0..count {
                diam = diam.max(full_bfs(g, s)?.eccentricity());
            }
            Ok(DiameterEstimate {
                mode,
                lower: diam,
                upper: diam,
                sweeps: count as u32,
            })
        }
        DiameterMode::Bounded => bounded(g),
    }
}

/// Double sweeps seeded at the vertex nearest the centre. Every BFS from
/// `w` gives `ecc(w) ≤ diam ≤ 2·ecc(w)`; sweeps jump to a far vertex and
/// then to the midpoint of the resulting long path, whose eccentricity is
/// typically close to the radius.
fn bounded(g: &GeoGraph) -> Result<DiameterEstimate> {
    let centre = g.instance().square().center();
    let start = (0..g.vertex_count())
        .min_by(|&a, &b| dist_sq(g.point(a), centre).total_cmp(&dist_sq(g.point(b), centre)))
        .expect("non-empty");

    let mut lower = 0;
    let mut upper = u32::MAX;
    let mut sweeps = 0;
    let mut record = |tree: &BfsTree| {
        let ecc = tree.eccentricity();
        lower = lower.max(ecc);
        upper = upper.min(2 * ecc);
        sweeps += 1;
    };

    let t0 = full_bfs(g, start)?;
    record(&t0);
    let mut far = t0.farthest();
    for _ in 0..2 {
        let ta = full_bfs(g, far)?;
        record(&ta);
        let b = ta.farthest();
        let path = ta.path_to(b).expect("connected");
        let mid = path[path.len() / 2];
        let tb = full_bfs(g, b)?;
        record(&tb);
        let tm = full_bfs(g, mid)?;
        record(&tm);
        far = tm.farthest();
    }
    Ok(DiameterEstimate {
        mode: DiameterMode::Bounded,
        lower,
        upper: upper.max(lower),
        sweeps,
    })
}
