use crate::error::{invalid, Result};
use crate::geometry::Point;

/// Upper bound on cells per axis. When `side / cell_side` would exceed it the
/// cell side is enlarged; a 3×3 neighbourhood still covers radius `r` because
/// cells never shrink below `r`.
pub const MAX_CELLS_PER_AXIS: usize = 4096;

/// Uniform bucket grid over the square `[-half, half]²`, bucket contents
/// stored contiguously (CSR layout) in ascending vertex order.
#[derive(Clone, Debug)]
pub struct CellGrid {
    cell_side: f64,
    half: f64,
    columns: usize,
    rows: usize,
    starts: Vec<u32>,
    entries: Vec<u32>,
}

impl CellGrid {
    pub fn build(points: &[Point], half: f64, cell_side: f64) -> Result<Self> {
        if !(cell_side.is_finite() && cell_side > 0.0) {
            return Err(invalid("cell_side", format!("must be positive, got {cell_side}")));
        }
        if points.len() >= u32::MAX as usize {
            return Err(invalid("points", "too many vertices for 32-bit indices"));
        }
        let side = 2.0 * half;
        let cell_side = cell_side.max(side / MAX_CELLS_PER_AXIS as f64);
        let columns = ((side / cell_side).ceil() as usize).max(1);
        let rows = columns;
        let mut grid = CellGrid {
            cell_side,
            half,
            columns,
            rows,
            starts: vec![0; columns * rows + 1],
            entries: Vec::with_capacity(points.len()),
        };

        let cells: Vec<u32> = points.iter().map(|&p| grid.cell_index(p) as u32).collect();
        for &c in &cells {
            grid.starts[c as usize + 1] += 1;
        }
        for i in 0..grid.starts.len() - 1 {
            grid.starts[i + 1] += grid.starts[i];
        }
        let mut fill = grid.starts.clone();
        grid.entries.resize(points.len(), 0);
        for (i, &c) in cells.iter().enumerate() {
            let slot = &mut fill[c as usize];
            grid.entries[*slot as usize] = i as u32;
            *slot += 1;
        }
        Ok(grid)
    }

    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    pub fn half(&self) -> f64 {
        self.half
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cell_count(&self) -> usize {
        self.columns * self.rows
    }

    fn axis_cell(&self, v: f64, count: usize) -> usize {
        let c = ((v + self.half) / self.cell_side).floor();
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(count - 1)
        }
    }

    /// `(⌊(x + √n/2)/side⌋, ⌊(y + √n/2)/side⌋)`, clamped to the grid.
    pub fn cell_of(&self, p: Point) -> (usize, usize) {
        (
            self.axis_cell(p.x, self.columns),
            self.axis_cell(p.y, self.rows),
        )
    }

    pub fn cell_index(&self, p: Point) -> usize {
        let (cx, cy) = self.cell_of(p);
        cy * self.columns + cx
    }

    pub fn bucket(&self, cx: usize, cy: usize) -> &[u32] {
        self.bucket_by_index(cy * self.columns + cx)
    }

    pub fn bucket_by_index(&self, cell: usize) -> &[u32] {
        &self.entries[self.starts[cell] as usize..self.starts[cell + 1] as usize]
    }

    pub fn cell_center(&self, cell: usize) -> Point {
        let cx = cell % self.columns;
        let cy = cell / self.columns;
        Point::new(
            -self.half + (cx as f64 + 0.5) * self.cell_side,
            -self.half + (cy as f64 + 0.5) * self.cell_side,
        )
    }

    /// Cells within `reach` steps (Chebyshev) of `(cx, cy)`, clipped to the grid.
    pub fn neighbourhood(
        &self,
        cx: usize,
        cy: usize,
        reach: usize,
    ) -> impl Iterator<Item = (usize, usize)> + '_ {
        let x0 = cx.saturating_sub(reach);
        let x1 = (cx + reach).min(self.columns - 1);
        let y0 = cy.saturating_sub(reach);
        let y1 = (cy + reach).min(self.rows - 1);
        (y0..=y1).flat_map(move |y| (x0..=x1).map(move |x| (x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_point_in_exactly_one_bucket() {
        let pts: Vec<Point> = (0..100)
            .map(|i| Point::new((i % 10) as f64 - 5.0, (i / 10) as f64 - 5.0))
            .chain([Point::new(5.0, 5.0), Point::new(-5.0, -5.0)])
            .collect();
        let g = CellGrid::build(&pts, 5.0, 1.5).unwrap();
        let mut seen = vec![0; pts.len()];
        for c in 0..g.cell_count() {
            for &i in g.bucket_by_index(c) {
                seen[i as usize] += 1;
                assert_eq!(g.cell_index(pts[i as usize]), c);
            }
        }
        assert!(seen.iter().all(|&s| s == 1));
        // The top-right corner clamps into the last cell.
        assert_eq!(g.cell_of(Point::new(5.0, 5.0)), (g.columns() - 1, g.rows() - 1));
    }

    #[test]
    fn tiny_radius_is_capped() {
        let g = CellGrid::build(&[Point::ORIGIN], 500.0, 1e-9).unwrap();
        assert_eq!(g.columns(), MAX_CELLS_PER_AXIS);
        assert!(g.cell_side() >= 1e-9);
    }
}
