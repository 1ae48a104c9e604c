use nalgebra::Point3;

use crate::error::{Error, Result};
use crate::mesh::{Aabb, Mesh};
use crate::topology::EdgeMap;

pub const MIN_RESOLUTION: usize = 4;
pub const DEFAULT_RESOLUTION: usize = 32;
/// Fraction of the canonical grid cube spanned by a mesh's longest side.
pub const CANONICAL_FILL: f64 = 0.92;

const VOX_MAGIC: &str = "MFVOX 1";

/// Axis-aligned occupancy grid. Cell (x, y, z) covers
/// `origin + [x, x+1) * cell_size` along each axis; bit index is
/// `x + nx * (y + ny * z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    origin: Point3<f64>,
    cell_size: f64,
    dims: [usize; 3],
    bits: Vec<u64>,
}

impl VoxelGrid {
    pub fn new(origin: Point3<f64>, cell_size: f64, dims: [usize; 3]) -> Result<Self> {
        if !cell_size.is_finite() || cell_size <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cell size must be positive, got {cell_size}"
            )));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "grid dimensions must be at least 1, got {dims:?}"
            )));
        }
        let len = dims[0]
            .checked_mul(dims[1])
            .and_then(|n| n.checked_mul(dims[2]))
            .filter(|n| *n <= 1 << 31)
            .ok_or_else(|| Error::InvalidArgument(format!("grid {dims:?} is too large")))?;
        Ok(Self {
            origin,
            cell_size,
            dims,
            bits: vec![0; len.div_ceil(64)],
        })
    }

    pub fn origin(&self) -> Point3<f64> {
        self.origin
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied_count() == 0
    }

    fn index(&self, x: usize, y: usize, z: usize) -> usize {
        debug_assert!(x < self.dims[0] && y < self.dims[1] && z < self.dims[2]);
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> bool {
        let i = self.index(x, y, z);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, value: bool) {
        let i = self.index(x, y, z);
        if value {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn cell_center(&self, x: usize, y: usize, z: usize) -> Point3<f64> {
        let h = self.cell_size;
        Point3::new(
            self.origin.x + (x as f64 + 0.5) * h,
            self.origin.y + (y as f64 + 0.5) * h,
            self.origin.z + (z as f64 + 0.5) * h,
        )
    }

    pub fn occupied_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Occupied cells times the cell volume.
    pub fn occupied_volume(&self) -> f64 {
        self.occupied_count() as f64 * self.cell_size.powi(3)
    }

    pub fn same_frame(&self, other: &VoxelGrid) -> bool {
        self.dims == other.dims && self.origin == other.origin && self.cell_size == other.cell_size
    }

    /// Serializes to the text `.vox` format: a four-line header followed by
    /// the occupancy bytes (LSB-first) as lowercase hex, 64 digits per line.
    pub fn to_vox_string(&self) -> String {
        let mut out = format!(
            "{VOX_MAGIC}\ndims {} {} {}\norigin {} {} {}\ncell {}\n",
            self.dims[0],
            self.dims[1],
            self.dims[2],
            self.origin.x,
            self.origin.y,
            self.origin.z,
            self.cell_size
        );
        let bytes: Vec<u8> = self
            .bits
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(self.len().div_ceil(8))
            .collect();
        for chunk in bytes.chunks(32) {
            out.push_str(&hex::encode(chunk));
            out.push('\n');
        }
        out
    }

    pub fn parse_vox(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("missing {what}")))
        };
        let (_, magic) = next("header")?;
        if magic.trim() != VOX_MAGIC {
            return Err(Error::parse(1, format!("expected `{VOX_MAGIC}`")));
        }
        let dims = header_values::<usize>(next("dims")?, "dims")?;
        let origin = header_values::<f64>(next("origin")?, "origin")?;
        let cell = header_values::<f64>(next("cell")?, "cell")?;
        let (dims, origin, cell) = match (dims.as_slice(), origin.as_slice(), cell.as_slice()) {
            (&[x, y, z], &[ox, oy, oz], &[c]) => ([x, y, z], Point3::new(ox, oy, oz), c),
            _ => return Err(Error::parse(2, "malformed vox header")),
        };
        let mut grid =
            VoxelGrid::new(origin, cell, dims).map_err(|e| Error::parse(2, e.to_string()))?;
        let mut bytes = Vec::with_capacity(grid.len().div_ceil(8));
        for (n, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let chunk = hex::decode(line)
                .map_err(|e| Error::parse(n + 1, format!("bad occupancy hex: {e}")))?;
            bytes.extend(chunk);
        }
        if bytes.len() != grid.len().div_ceil(8) {
            return Err(Error::parse(
                0,
                format!(
                    "occupancy has {} bytes, expected {}",
                    bytes.len(),
                    grid.len().div_ceil(8)
                ),
            ));
        }
        for (w, chunk) in grid.bits.iter_mut().zip(bytes.chunks(8)) {
            let mut word = [0u8; 8];
            word[..chunk.len()].copy_from_slice(chunk);
            *w = u64::from_le_bytes(word);
        }
        let tail = grid.len() % 64;
        if tail != 0 && grid.bits.last().is_some_and(|w| w >> tail != 0) {
            return Err(Error::parse(
                0,
                "occupancy bits set past the end of the grid",
            ));
        }
        Ok(grid)
    }
}

fn header_values<T: std::str::FromStr>((n, line): (usize, &str), key: &str) -> Result<Vec<T>> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(key) {
        return Err(Error::parse(n + 1, format!("expected `{key}`")));
    }
    tokens
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| Error::parse(n + 1, format!("malformed {key} value `{t}`")))
        })
        .collect()
}

/// |a ∧ b| / |a ∨ b|, defined as 1 when both grids are empty.
pub fn iou(a: &VoxelGrid, b: &VoxelGrid) -> Result<f64> {
    if !a.same_frame(b) {
        return Err(Error::IncompatibleGrids(format!(
            "dims {:?} vs {:?}, origin {:?} vs {:?}, cell {} vs {}",
            a.dims,
            b.dims,
            a.origin.coords.as_slice(),
            b.origin.coords.as_slice(),
            a.cell_size,
            b.cell_size
        )));
    }
    let (mut inter, mut union) = (0u64, 0u64);
    for (x, y) in a.bits.iter().zip(&b.bits) {
        inter += (x & y).count_ones() as u64;
        union += (x | y).count_ones() as u64;
    }
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    /// Mesh centered and uniformly scaled so its longest side spans
    /// [`CANONICAL_FILL`] of the unit grid cube [-0.5, 0.5]^3.
    Canonical,
    /// Grid laid over the given box in mesh units, without rescaling. The
    /// cell size is the box's longest side over the resolution.
    Shared(Aabb),
}

/// Classifies every cell center by the parity of +x ray crossings.
pub fn voxelize(mesh: &Mesh, resolution: usize, frame: Frame) -> Result<VoxelGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    if !EdgeMap::build(mesh).is_watertight() {
        return Err(Error::InvalidOperand(
            "voxelization needs a watertight mesh".into(),
        ));
    }
    let bounds = Aabb::from_points(mesh.vertices()).ok_or(Error::EmptyMesh)?;
    match frame {
        Frame::Canonical => {
            let longest = bounds.longest_side();
            if !longest.is_finite() || longest <= 0.0 {
                return Err(Error::InvalidOperand("mesh has zero extent".into()));
            }
            let s = CANONICAL_FILL / longest;
            let c = bounds.center();
            let points: Vec<Point3<f64>> = mesh
                .vertices()
                .iter()
                .map(|p| Point3::from((p - c) * s))
                .collect();
            let grid = VoxelGrid::new(
                Point3::new(-0.5, -0.5, -0.5),
                1.0 / resolution as f64,
                [resolution; 3],
            )?;
            Ok(fill(grid, &points, mesh))
        }
        Frame::Shared(aabb) => {
            let longest = aabb.longest_side();
            if !longest.is_finite() || longest <= 0.0 {
                return Err(Error::InvalidArgument(
                    "shared frame has zero extent".into(),
                ));
            }
            let cell = longest / resolution as f64;
            let size = aabb.size();
            let dims = [0, 1, 2].map(|i| ((size[i] / cell - 1e-9).ceil() as usize).max(1));
            let grid = VoxelGrid::new(aabb.min, cell, dims)?;
            Ok(fill(grid, mesh.vertices(), mesh))
        }
    }
}

struct YzTriangle {
    p: [[f64; 3]; 3],
    y_range: (f64, f64),
    z_range: (f64, f64),
}

fn fill(mut grid: VoxelGrid, points: &[Point3<f64>], mesh: &Mesh) -> VoxelGrid {
    let tris: Vec<YzTriangle> = mesh
        .faces()
        .iter()
        .map(|&[a, b, c]| {
            let p = [points[a], points[b], points[c]].map(|q| [q.x, q.y, q.z]);
            let ys = [p[0][1], p[1][1], p[2][1]];
            let zs = [p[0][2], p[1][2], p[2][2]];
            YzTriangle {
                p,
                y_range: (
                    ys.iter().cloned().fold(f64::INFINITY, f64::min),
                    ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                ),
                z_range: (
                    zs.iter().cloned().fold(f64::INFINITY, f64::min),
                    zs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                ),
            }
        })
        .collect();
    let [nx, ny, nz] = grid.dims;
    let extent = grid.cell_size * nx.max(ny).max(nz) as f64;
    for k in 0..nz {
        for j in 0..ny {
            let c = grid.cell_center(0, j, k);
            let hits = ray_crossings(&tris, c.y, c.z, extent);
            if hits.is_empty() {
                continue;
            }
            for i in 0..nx {
                let x = grid.cell_center(i, j, k).x;
                let beyond = hits.len() - hits.partition_point(|h| *h <= x);
                if beyond % 2 == 1 {
                    grid.set(i, j, k, true);
                }
            }
        }
    }
    grid
}

/// Sorted x coordinates where the +x line through (y, z) crosses the
/// surface. Lines grazing an edge or vertex are nudged by 1e-9 of the grid
/// extent and retried.
fn ray_crossings(tris: &[YzTriangle], y: f64, z: f64, extent: f64) -> Vec<f64> {
    let graze = 1e-12 * extent;
    'attempt: for attempt in 0..64 {
        let jitter = attempt as f64 * 1e-9 * extent;
        let (py, pz) = (y + jitter, z + 0.618_033_988_75 * jitter);
        let mut hits = Vec::new();
        for t in tris {
            if py < t.y_range.0 - graze
                || py > t.y_range.1 + graze
                || pz < t.z_range.0 - graze
                || pz > t.z_range.1 + graze
            {
                continue;
            }
            let [a, b, c] = t.p;
            let area = (b[1] - a[1]) * (c[2] - a[2]) - (b[2] - a[2]) * (c[1] - a[1]);
            if area.abs() <= f64::EPSILON * extent * extent {
                continue;
            }
            // Signed distances of (py, pz) from each projected edge.
            let edge = |u: [f64; 3], v: [f64; 3]| {
                let (ey, ez) = (v[1] - u[1], v[2] - u[2]);
                let len = (ey * ey + ez * ez).sqrt();
                let cross = ey * (pz - u[2]) - ez * (py - u[1]);
                (cross, if len > 0.0 { cross / len } else { 0.0 })
            };
            let (wa, da) = edge(b, c);
            let (wb, db) = edge(c, a);
            let (wc, dc) = edge(a, b);
            let s = area.signum();
            let (da, db, dc) = (da * s, db * s, dc * s);
            if da < -graze || db < -graze || dc < -graze {
                continue;
            }
            if da <= graze || db <= graze || dc <= graze {
                continue 'attempt;
            }
            let x = (wa * a[0] + wb * b[0] + wc * c[0]) / area;
            hits.push(x);
        }
        hits.sort_by(f64::total_cmp);
        return hits;
    }
    Vec::new()
}
