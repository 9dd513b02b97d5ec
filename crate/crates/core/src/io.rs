//! Point sets as `id,x,y` CSV with a JSON sidecar, and edge lists as
//! `src,dst` CSV.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::sampler::{Model, RggInstance, SeedSpec};
use crate::spatial_graph::GeoGraph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub n: u64,
    pub r: f64,
    pub model: Model,
    pub seed: SeedSpec,
    pub realized_count: usize,
    pub labelled_u: Option<usize>,
    pub labelled_v: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct PointRow {
    id: usize,
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct EdgeRow {
    src: usize,
    dst: usize,
}

/// `points.csv` → `points.json`.
pub fn sidecar_path(points_csv: &Path) -> PathBuf {
    points_csv.with_extension("json")
}

fn format_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

pub fn write_instance(inst: &RggInstance, points_csv: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(points_csv)?;
    for (id, p) in inst.points.iter().enumerate() {
        w.serialize(PointRow { id, x: p.x, y: p.y })?;
    }
    w.flush()?;
    let meta = InstanceMeta {
        n: inst.n,
        r: inst.r,
        model: inst.model,
        seed: inst.seed,
        realized_count: inst.points.len(),
        labelled_u: inst.labelled_u,
        labelled_v: inst.labelled_v,
    };
    let mut side = BufWriter::new(File::create(sidecar_path(points_csv))?);
    serde_json::to_writer_pretty(&mut side, &meta)?;
    side.write_all(b"\n")?;
    side.flush()?;
    Ok(())
}

pub fn read_instance(points_csv: &Path) -> Result<RggInstance> {
    let meta_path = sidecar_path(points_csv);
    let meta: InstanceMeta = serde_json::from_reader(BufReader::new(File::open(&meta_path)?))?;
    let mut points = Vec::with_capacity(meta.realized_count);
    for (line, row) in csv::Reader::from_path(points_csv)?.deserialize::<PointRow>().enumerate() {
        let row = row?;
        if row.id != line {
            return Err(format_err(points_csv, format!("row {line} has id {}", row.id)));
        }
        points.push(Point::new(row.x, row.y));
    }
    if points.len() != meta.realized_count {
        return Err(format_err(
            points_csv,
            format!("{} rows, sidecar says {}", points.len(), meta.realized_count),
        ));
    }
    let inst = RggInstance {
        n: meta.n,
        r: meta.r,
        model: meta.model,
        points,
        labelled_u: meta.labelled_u,
        labelled_v: meta.labelled_v,
        seed: meta.seed,
    };
    inst.validate().map_err(|e| format_err(points_csv, e.to_string()))?;
    Ok(inst)
}

/// Each undirected edge once, `src < dst`.
pub fn write_edges(g: &GeoGraph, path: &Path) -> Result<u64> {
    let mut w = csv::Writer::from_path(path)?;
    let mut count = 0;
    for (src, dst) in g.edges() {
        w.serialize(EdgeRow { src, dst })?;
        count += 1;
    }
    w.flush()?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_poissonized, sample_uniform};
    use crate::spatial_graph::build_graph;

    #[test]
    fn roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        let inst = sample_uniform(500, 1.7, SeedSpec::new(9, 2)).unwrap();
        write_instance(&inst, &path).unwrap();
        assert_eq!(read_instance(&path).unwrap(), inst);

        let inst = sample_poissonized(300, 2.0, SeedSpec::new(1, 1), Some(Point::new(-3.0, 0.0)), None).unwrap();
        write_instance(&inst, &path).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(back, inst);
        assert!(back.labelled_u.is_some() && back.labelled_v.is_some());
    }

    #[test]
    fn rejects_mismatched_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        let inst = sample_uniform(50, 1.0, SeedSpec::new(0, 0)).unwrap();
        write_instance(&inst, &path).unwrap();
        std::fs::write(&path, "id,x,y\n0,0.0,0.0\n").unwrap();
        assert!(matches!(read_instance(&path), Err(Error::Format { .. })));
        std::fs::write(&path, "id,x,y\n0,100.0,0.0\n").unwrap();
        let mut meta: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(sidecar_path(&path)).unwrap()).unwrap();
        meta["realized_count"] = 1.into();
        std::fs::write(sidecar_path(&path), meta.to_string()).unwrap();
        assert!(matches!(read_instance(&path), Err(Error::Format { .. })));
    }

    #[test]
    fn edge_list_matches_graph() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("edges.csv");
        let g = build_graph(sample_uniform(200, 2.0, SeedSpec::new(3, 0)).unwrap()).unwrap();
        let count = write_edges(&g, &path).unwrap();
        assert_eq!(count as usize, g.edge_count());
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next(), Some("src,dst"));
        assert_eq!(text.lines().count() as u64, count + 1);
    }
}
