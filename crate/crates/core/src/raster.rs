//! Regular grids of scalar values and their CSV / PGM exports.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Default upper bound on the number of cells in a raster.
pub const DEFAULT_CELL_LIMIT: u128 = 100_000_000;

/// Axis-aligned grid; cell `(i, j)` has its lower-left corner at
/// `origin + (i, j) * cell_size`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub origin: Point,
    pub cell_size: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(origin: Point, cell_size: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "cell size must be positive, got {cell_size}"
            )));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidConfig("grid has no cells".into()));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidConfig("grid origin is not finite".into()));
        }
        Ok(Grid {
            origin,
            cell_size,
            nx,
            ny,
        })
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn check_limit(&self, limit: u128) -> Result<()> {
        let cells = self.nx as u128 * self.ny as u128;
        if cells > limit {
            return Err(Error::RasterTooLarge { cells, limit });
        }
        Ok(())
    }

    /// Center of cell `(i, j)`; `i` runs along x.
    pub fn center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + (i as f64 + 0.5) * self.cell_size,
            self.origin.y + (j as f64 + 0.5) * self.cell_size,
        )
    }

    /// Center of the cell with row-major index `k`.
    pub fn center_of(&self, k: usize) -> Point {
        self.center(k % self.nx, k / self.nx)
    }
}

/// Row-major raster (`values[j * nx + i]`). `NaN` marks masked cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Raster {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn is_masked(&self, k: usize) -> bool {
        self.values[k].is_nan()
    }

    pub fn masked_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_nan()).count()
    }

    /// Min and max over unmasked cells, `None` if every cell is masked.
    pub fn value_range(&self) -> Option<(f64, f64)> {
        self.values
            .iter()
            .copied()
            .filter(|v| !v.is_nan())
            .fold(None, |acc, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }

    /// CSV with header `x,y,<value_name>`; masked cells are written as `nan`.
    pub fn to_csv(&self, value_name: &str) -> String {
        let mut out = String::with_capacity(self.values.len() * 48);
        let _ = writeln!(out, "x,y,{value_name}");
        for (k, v) in self.values.iter().enumerate() {
            let c = self.grid.center_of(k);
            if v.is_nan() {
                let _ = writeln!(out, "{:.16e},{:.16e},nan", c.x, c.y);
            } else {
                let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", c.x, c.y, v);
            }
        }
        out
    }

    /// Plain (P2) PGM scaled linearly from `window` onto 0..=255. The first
    /// image row is the top (largest y) grid row; masked cells are black.
    pub fn to_pgm(&self, window: (f64, f64)) -> String {
        let (lo, hi) = window;
        let span = hi - lo;
        let mut out = String::with_capacity(self.values.len() * 4 + 32);
        let _ = write!(out, "P2\n{} {}\n255\n", self.grid.nx, self.grid.ny);
        for j in (0..self.grid.ny).rev() {
            let row: Vec<String> = (0..self.grid.nx)
                .map(|i| {
                    let v = self.get(i, j);
                    let level = if v.is_nan() {
                        0.0
                    } else if span > 0.0 {
                        (255.0 * (v - lo) / span).round().clamp(0.0, 255.0)
                    } else {
                        0.0
                    };
                    format!("{}", level as u8)
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Sidecar describing how PGM levels map back to physical coordinates and values.
    pub fn sidecar(&self, window: (f64, f64), unit: &str) -> String {
        format!(
            "origin_x = {:.16e}\norigin_y = {:.16e}\ncell_size = {:.16e}\nnx = {}\nny = {}\n\
             value_min = {:.16e}\nvalue_max = {:.16e}\nunit = \"{}\"\nmasked_cells = {}\n",
            self.grid.origin.x,
            self.grid.origin.y,
            self.grid.cell_size,
            self.grid.nx,
            self.grid.ny,
            window.0,
            window.1,
            unit,
            self.masked_count(),
        )
    }

    /// Writes `<stem>.csv`, `<stem>.pgm` and `<stem>.pgm.txt` into `dir`.
    pub fn export(
        &self,
        dir: &Path,
        stem: &str,
        value_name: &str,
        unit: &str,
        window: Option<(f64, f64)>,
    ) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let window = window.or_else(|| self.value_range()).unwrap_or((0.0, 0.0));
        let write = |name: String, body: String| {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| Error::io(&path, e))
        };
        write(format!("{stem}.csv"), self.to_csv(value_name))?;
        write(format!("{stem}.pgm"), self.to_pgm(window))?;
        write(format!("{stem}.pgm.txt"), self.sidecar(window, unit))?;
        Ok(())
    }
}
