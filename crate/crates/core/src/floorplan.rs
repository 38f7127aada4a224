//! Scene description: walls made of attenuating materials.
//!
//! Each wall is the rectangle obtained by extruding its centerline by half the
//! thickness on both sides. The spatial loss field (dB/m) at a point is the sum
//! of the densities of every wall rectangle containing it, so overlapping walls
//! add.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::raster::{Grid, Raster, DEFAULT_CELL_LIMIT};

/// dB/cm → dB/m.
const CM_PER_M: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Frequency {
    #[default]
    #[serde(rename = "2.5")]
    Ghz2_5,
    #[serde(rename = "60")]
    Ghz60,
}

impl Frequency {
    pub fn from_ghz(ghz: f64) -> Result<Self> {
        if ghz == 2.5 {
            Ok(Frequency::Ghz2_5)
        } else if ghz == 60.0 {
            Ok(Frequency::Ghz60)
        } else {
            Err(Error::Schema(format!(
                "frequency_ghz must be 2.5 or 60, got {ghz}"
            )))
        }
    }

    pub fn ghz(self) -> f64 {
        match self {
            Frequency::Ghz2_5 => 2.5,
            Frequency::Ghz60 => 60.0,
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} GHz", self.ghz())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    pub loss_db_per_cm_2_5ghz: f64,
    pub loss_db_per_cm_60ghz: f64,
}

impl Material {
    pub fn new(name: &str, loss_2_5ghz: f64, loss_60ghz: f64) -> Self {
        Material {
            name: name.to_string(),
            loss_db_per_cm_2_5ghz: loss_2_5ghz,
            loss_db_per_cm_60ghz: loss_60ghz,
        }
    }

    pub fn loss_db_per_cm(&self, frequency: Frequency) -> f64 {
        match frequency {
            Frequency::Ghz2_5 => self.loss_db_per_cm_2_5ghz,
            Frequency::Ghz60 => self.loss_db_per_cm_60ghz,
        }
    }

    /// Attenuation density in dB/m.
    pub fn density(&self, frequency: Frequency) -> f64 {
        self.loss_db_per_cm(frequency) * CM_PER_M
    }
}

/// Office material attenuation table (drywall, whiteboard, glass) at 2.5 and 60 GHz.
pub fn default_materials() -> Vec<Material> {
    vec![
        Material::new("drywall", 2.1, 2.4),
        Material::new("whiteboard", 0.3, 5.0),
        Material::new("glass", 20.0, 11.3),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallSegment {
    pub a: Point,
    pub b: Point,
    pub thickness: f64,
    pub material: String,
}

/// Axis-aligned bounding box `[xmin, ymin, xmax, ymax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Region {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl From<[f64; 4]> for Region {
    fn from([xmin, ymin, xmax, ymax]: [f64; 4]) -> Self {
        Region {
            xmin,
            ymin,
            xmax,
            ymax,
        }
    }
}

impl From<Region> for [f64; 4] {
    fn from(r: Region) -> Self {
        [r.xmin, r.ymin, r.xmax, r.ymax]
    }
}

impl Region {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        Region {
            xmin,
            ymin,
            xmax,
            ymax,
        }
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn is_empty(&self) -> bool {
        !(self.width() > 0.0 && self.height() > 0.0)
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))
    }

    pub fn half_diagonal(&self) -> f64 {
        0.5 * self.width().hypot(self.height())
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    /// Point at fractional position `(u, v) ∈ [0, 1]²`.
    pub fn at(&self, u: f64, v: f64) -> Point {
        Point::new(self.xmin + u * self.width(), self.ymin + v * self.height())
    }
}

/// A wall rectangle in its local frame, with the density already resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallRect {
    pub center: Point,
    /// Unit vector along the centerline.
    pub dir: Point,
    pub half_length: f64,
    pub half_thickness: f64,
    /// dB/m.
    pub density: f64,
}

impl WallRect {
    /// Coordinates of `p` along the centerline and along the wall normal.
    #[inline]
    pub fn local(&self, p: Point) -> (f64, f64) {
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        (
            dx * self.dir.x + dy * self.dir.y,
            -dx * self.dir.y + dy * self.dir.x,
        )
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        let (u, v) = self.local(p);
        u.abs() <= self.half_length && v.abs() <= self.half_thickness
    }

    pub fn area(&self) -> f64 {
        4.0 * self.half_length * self.half_thickness
    }

    /// Maps local `(u, v)` back to world coordinates.
    pub fn world(&self, u: f64, v: f64) -> Point {
        Point::new(
            self.center.x + u * self.dir.x - v * self.dir.y,
            self.center.y + u * self.dir.y + v * self.dir.x,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloorPlan {
    walls: Vec<WallSegment>,
    rects: Vec<WallRect>,
    materials: Vec<Material>,
    region: Region,
    frequency: Frequency,
}

impl FloorPlan {
    /// Validates walls against the material table and region.
    pub fn new(
        region: Region,
        frequency: Frequency,
        materials: Vec<Material>,
        walls: Vec<WallSegment>,
    ) -> Result<Self> {
        if !(region.xmin.is_finite()
            && region.ymin.is_finite()
            && region.xmax.is_finite()
            && region.ymax.is_finite())
            || region.is_empty()
        {
            return Err(Error::InvalidGeometry(format!(
                "region {:?} is empty or not finite",
                <[f64; 4]>::from(region)
            )));
        }
        for m in &materials {
            let (lo, hi) = (m.loss_db_per_cm_2_5ghz, m.loss_db_per_cm_60ghz);
            if !(lo >= 0.0 && hi >= 0.0 && lo.is_finite() && hi.is_finite()) {
                return Err(Error::Schema(format!(
                    "material `{}` has a negative or non-finite loss",
                    m.name
                )));
            }
        }
        let mut rects = Vec::with_capacity(walls.len());
        for (k, w) in walls.iter().enumerate() {
            let material = materials
                .iter()
                .find(|m| m.name == w.material)
                .ok_or_else(|| Error::UnknownMaterial(w.material.clone()))?;
            if !(w.a.is_finite() && w.b.is_finite()) {
                return Err(Error::InvalidGeometry(format!(
                    "wall {k}: non-finite endpoint"
                )));
            }
            let length = w.a.distance(w.b);
            if !(length > 0.0) {
                return Err(Error::InvalidGeometry(format!("wall {k}: zero length")));
            }
            if !(w.thickness > 0.0 && w.thickness.is_finite()) {
                return Err(Error::InvalidGeometry(format!(
                    "wall {k}: thickness must be positive, got {}",
                    w.thickness
                )));
            }
            if !(region.contains(w.a) && region.contains(w.b)) {
                return Err(Error::InvalidGeometry(format!(
                    "wall {k}: endpoints outside the region"
                )));
            }
            rects.push(WallRect {
                center: w.a.lerp(w.b, 0.5),
                dir: Point::new((w.b.x - w.a.x) / length, (w.b.y - w.a.y) / length),
                half_length: 0.5 * length,
                half_thickness: 0.5 * w.thickness,
                density: material.density(frequency),
            });
        }
        Ok(FloorPlan {
            walls,
            rects,
            materials,
            region,
            frequency,
        })
    }

    /// A plan without walls, using the default material table.
    pub fn empty(region: Region) -> Result<Self> {
        FloorPlan::new(
            region,
            Frequency::default(),
            default_materials(),
            Vec::new(),
        )
    }

    pub fn walls(&self) -> &[WallSegment] {
        &self.walls
    }

    pub fn wall_rects(&self) -> &[WallRect] {
        &self.rects
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    /// Returns a copy with one more wall.
    pub fn with_wall(&self, wall: WallSegment) -> Result<Self> {
        let mut walls = self.walls.clone();
        walls.push(wall);
        FloorPlan::new(self.region, self.frequency, self.materials.clone(), walls)
    }

    /// Spatial loss field in dB/m.
    pub fn slf_at(&self, p: Point) -> f64 {
        self.rects
            .iter()
            .filter(|r| r.contains(p))
            .map(|r| r.density)
            .sum()
    }

    pub fn max_density(&self) -> f64 {
        self.rects.iter().map(|r| r.density).fold(0.0, f64::max)
    }

    pub fn rasterize(&self, cell_size: f64) -> Result<Raster> {
        self.rasterize_with_limit(cell_size, DEFAULT_CELL_LIMIT)
    }

    /// Samples [`slf_at`](Self::slf_at) at cell centers of a grid anchored at
    /// the region's lower-left corner and covering the whole region.
    pub fn rasterize_with_limit(&self, cell_size: f64, limit: u128) -> Result<Raster> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "cell size must be positive, got {cell_size}"
            )));
        }
        let nx = (self.region.width() / cell_size).ceil();
        let ny = (self.region.height() / cell_size).ceil();
        let cells = nx * ny;
        if cells > limit as f64 {
            return Err(Error::RasterTooLarge {
                cells: cells as u128,
                limit,
            });
        }
        let grid = Grid::new(
            Point::new(self.region.xmin, self.region.ymin),
            cell_size,
            nx.max(1.0) as usize,
            ny.max(1.0) as usize,
        )?;
        let values = (0..grid.cells())
            .map(|k| self.slf_at(grid.center_of(k)))
            .collect();
        Ok(Raster { grid, values })
    }

    /// Content hash of the plan's canonical document.
    pub fn hash(&self) -> String {
        let doc = serde_json::to_string(&self.to_document()).expect("plan serializes");
        hex::encode(Sha256::digest(doc.as_bytes()))
    }

    /// The plan as a JSON document in the input schema.
    pub fn to_document(&self) -> Value {
        let materials: Vec<Value> = self
            .materials
            .iter()
            .map(|m| {
                serde_json::json!({
                    "name": m.name,
                    "loss_db_per_cm": {"2.5": m.loss_db_per_cm_2_5ghz, "60": m.loss_db_per_cm_60ghz},
                })
            })
            .collect();
        let walls: Vec<Value> = self
            .walls
            .iter()
            .map(|w| {
                serde_json::json!({
                    "a": [w.a.x, w.a.y],
                    "b": [w.b.x, w.b.y],
                    "thickness_m": w.thickness,
                    "material": w.material,
                })
            })
            .collect();
        serde_json::json!({
            "region": <[f64; 4]>::from(self.region),
            "frequency_ghz": self.frequency.ghz(),
            "materials": materials,
            "walls": walls,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialDoc {
    name: String,
    loss_db_per_cm: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WallDoc {
    a: [f64; 2],
    b: [f64; 2],
    thickness_m: f64,
    material: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanDoc {
    region: [f64; 4],
    #[serde(default)]
    frequency_ghz: Option<f64>,
    #[serde(default)]
    materials: Vec<MaterialDoc>,
    walls: Vec<WallDoc>,
}

/// Parses a floor-plan document.
///
/// Materials listed in the document extend the default table and override
/// entries with the same name. `frequency_ghz` defaults to 2.5.
pub fn parse_plan(text: &str) -> Result<FloorPlan> {
    let doc: PlanDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let frequency = match doc.frequency_ghz {
        Some(ghz) => Frequency::from_ghz(ghz)?,
        None => Frequency::default(),
    };
    let mut materials = default_materials();
    for m in doc.materials {
        let get = |key: &str| {
            m.loss_db_per_cm.get(key).copied().ok_or_else(|| {
                Error::Schema(format!(
                    "material `{}` is missing loss_db_per_cm.\"{key}\"",
                    m.name
                ))
            })
        };
        let material = Material::new(&m.name, get("2.5")?, get("60")?);
        match materials.iter_mut().find(|x| x.name == material.name) {
            Some(slot) => *slot = material,
            None => materials.push(material),
        }
    }
    let walls = doc
        .walls
        .into_iter()
        .map(|w| WallSegment {
            a: w.a.into(),
            b: w.b.into(),
            thickness: w.thickness_m,
            material: w.material,
        })
        .collect();
    FloorPlan::new(doc.region.into(), frequency, materials, walls)
}

pub fn load_plan(path: &Path) -> Result<FloorPlan> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_plan(&text)
}
