//! Indexed triangle meshes, TRS transforms and measurements.
//!
//! Positions are in meters. Faces wind counter-clockwise when viewed from
//! outside, so outward normals follow the right-hand rule.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{Matrix3, Point3, Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::topology::EdgeMap;

pub type Face = [usize; 3];

/// Indexed triangle mesh.
///
/// The face list is shared behind an `Arc`, so operations that only move
/// vertices (transforms, resizing, displacement) hand back a mesh whose face
/// list is the very same allocation as the input's.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Point3<f64>>,
    faces: Arc<[Face]>,
}

impl Default for Mesh {
    fn default() -> Self {
        Self::empty()
    }
}

impl Mesh {
    pub fn new(vertices: Vec<Point3<f64>>, faces: Vec<Face>) -> Result<Self> {
        check_faces(vertices.len(), &faces)?;
        Ok(Self {
            vertices,
            faces: faces.into(),
        })
    }

    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
            faces: Arc::from(Vec::new()),
        }
    }

    /// Builds a mesh from faces that are already known to be valid.
    pub(crate) fn from_parts(vertices: Vec<Point3<f64>>, faces: Vec<Face>) -> Self {
        debug_assert!(check_faces(vertices.len(), &faces).is_ok());
        Self {
            vertices,
            faces: faces.into(),
        }
    }

    /// Same topology, new positions. Panics if the vertex count changes.
    pub(crate) fn with_vertices(&self, vertices: Vec<Point3<f64>>) -> Self {
        assert_eq!(vertices.len(), self.vertices.len());
        Self {
            vertices,
            faces: Arc::clone(&self.faces),
        }
    }

    pub fn vertices(&self) -> &[Point3<f64>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// True when both meshes share the same face-list allocation.
    pub fn shares_faces_with(&self, other: &Mesh) -> bool {
        Arc::ptr_eq(&self.faces, &other.faces)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn triangle(&self, face: usize) -> [Point3<f64>; 3] {
        let [a, b, c] = self.faces[face];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangles(&self) -> impl Iterator<Item = [Point3<f64>; 3]> + '_ {
        self.faces
            .iter()
            .map(|&[a, b, c]| [self.vertices[a], self.vertices[b], self.vertices[c]])
    }

    /// Reverses the winding of every face.
    pub fn flipped(&self) -> Mesh {
        let faces: Vec<Face> = self.faces.iter().map(|&[a, b, c]| [a, c, b]).collect();
        Mesh {
            vertices: self.vertices.clone(),
            faces: faces.into(),
        }
    }

    /// Disjoint concatenation of two meshes (no boolean evaluation).
    pub fn concat(&self, other: &Mesh) -> Mesh {
        let offset = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut faces = self.faces.to_vec();
        faces.extend(
            other
                .faces
                .iter()
                .map(|&[a, b, c]| [a + offset, b + offset, c + offset]),
        );
        Mesh::from_parts(vertices, faces)
    }
}

fn check_faces(vertex_count: usize, faces: &[Face]) -> Result<()> {
    for (i, face) in faces.iter().enumerate() {
        if let Some(&bad) = face.iter().find(|&&v| v >= vertex_count) {
            return Err(Error::InvalidMesh(format!(
                "face {i} references vertex {bad}, mesh has {vertex_count}"
            )));
        }
        if face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
            return Err(Error::InvalidMesh(format!(
                "face {i} repeats a vertex: {face:?}"
            )));
        }
    }
    Ok(())
}

/// Position / rotation / scale record using the Unity conventions:
/// rotation is given as Euler angles in degrees, applied about Z, then X,
/// then Y; the full transform is scale, then rotate, then translate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    pub position: Vector3<f64>,
    pub rotation: Vector3<f64>,
    pub scale: Vector3<f64>,
}

impl Default for Transform {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        position: Vector3::new(0.0, 0.0, 0.0),
        rotation: Vector3::new(0.0, 0.0, 0.0),
        scale: Vector3::new(1.0, 1.0, 1.0),
    };

    pub fn new(position: [f64; 3], rotation: [f64; 3], scale: [f64; 3]) -> Self {
        Self {
            position: position.into(),
            rotation: rotation.into(),
            scale: scale.into(),
        }
    }

    pub fn translation(position: [f64; 3]) -> Self {
        Self {
            position: position.into(),
            ..Self::IDENTITY
        }
    }

    pub fn scaling(scale: [f64; 3]) -> Self {
        Self {
            scale: scale.into(),
            ..Self::IDENTITY
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(Error::InvalidTransform(format!(
                "scale components must be positive, got ({}, {}, {})",
                self.scale.x, self.scale.y, self.scale.z
            )));
        }
        if self
            .position
            .iter()
            .chain(self.rotation.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidTransform(
                "position and rotation must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Rotation matrix for the Euler angles: R = Ry · Rx · Rz.
    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        let r = self.rotation.map(f64::to_radians);
        let rz = Rotation3::from_axis_angle(&Vector3::z_axis(), r.z);
        let rx = Rotation3::from_axis_angle(&Vector3::x_axis(), r.x);
        let ry = Rotation3::from_axis_angle(&Vector3::y_axis(), r.y);
        (ry * rx * rz).into_inner()
    }

    pub fn apply_point(&self, p: &Point3<f64>) -> Point3<f64> {
        let scaled = p.coords.component_mul(&self.scale);
        if self.rotation == Vector3::zeros() {
            Point3::from(scaled + self.position)
        } else {
            Point3::from(self.rotation_matrix() * scaled + self.position)
        }
    }
}

/// Maps every vertex through `t` (scale, rotate, translate). Topology is kept.
pub fn apply_transform(mesh: &Mesh, t: &Transform) -> Result<Mesh> {
    t.validate()?;
    let rotate = t.rotation != Vector3::zeros();
    let m = t.rotation_matrix();
    let vertices = mesh
        .vertices
        .iter()
        .map(|p| {
            let s = p.coords.component_mul(&t.scale);
            let r = if rotate { m * s } else { s };
            Point3::from(r + t.position)
        })
        .collect();
    Ok(mesh.with_vertices(vertices))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point3<f64>,
    pub max: Point3<f64>,
}

impl Aabb {
    pub fn new(min: Point3<f64>, max: Point3<f64>) -> Result<Self> {
        if (0..3).any(|i| min[i].partial_cmp(&max[i]).is_none_or(|o| o.is_gt())) {
            return Err(Error::InvalidArgument(format!(
                "aabb min {min:?} exceeds max {max:?}"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point3<f64>>) -> Option<Self> {
        let mut iter = points.into_iter();
        let first = *iter.next()?;
        let (min, max) = iter.fold((first, first), |(lo, hi), p| (lo.inf(p), hi.sup(p)));
        Some(Self { min, max })
    }

    pub fn size(&self) -> Vector3<f64> {
        self.max - self.min
    }

    pub fn center(&self) -> Point3<f64> {
        nalgebra::center(&self.min, &self.max)
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.inf(&other.min),
            max: self.max.sup(&other.max),
        }
    }

    pub fn longest_side(&self) -> f64 {
        self.size().max()
    }
}

/// Width (x), height (y), depth (z) of the vertex bounding box, plus the box.
pub fn bounding_dimensions(mesh: &Mesh) -> Result<(Vector3<f64>, Aabb)> {
    let aabb = Aabb::from_points(&mesh.vertices).ok_or(Error::EmptyMesh)?;
    Ok((aabb.size(), aabb))
}

/// Scales the mesh per axis about the center of its bounding box.
pub fn resize(mesh: &Mesh, factors: [f64; 3]) -> Result<Mesh> {
    if factors.iter().any(|f| !f.is_finite() || *f <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "resize factors must be positive, got {factors:?}"
        )));
    }
    let (_, aabb) = bounding_dimensions(mesh)?;
    let c = aabb.center();
    let f = Vector3::from(factors);
    let vertices = mesh
        .vertices
        .iter()
        .map(|p| c + (p - c).component_mul(&f))
        .collect();
    Ok(mesh.with_vertices(vertices))
}

/// Resizes so that the bounding dimensions equal `target`.
pub fn resize_to(mesh: &Mesh, target: [f64; 3]) -> Result<Mesh> {
    if target.iter().any(|t| !t.is_finite() || *t <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target dimensions must be positive, got {target:?}"
        )));
    }
    let (dims, _) = bounding_dimensions(mesh)?;
    if dims.iter().any(|d| *d <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cannot resize a mesh that is flat along an axis: dimensions {:?}",
            dims.as_slice()
        )));
    }
    resize(
        mesh,
        [target[0] / dims.x, target[1] / dims.y, target[2] / dims.z],
    )
}

/// Enclosed volume as a sum of signed tetrahedra; positive for outward winding.
///
/// Tetrahedra are fanned from the bounding-box center rather than the world
/// origin, which gives the same value for a closed surface with less
/// cancellation for meshes far from the origin.
pub fn signed_volume(mesh: &Mesh) -> Result<f64> {
    let edges = EdgeMap::build(mesh);
    if !edges.is_watertight() {
        return Err(Error::UndefinedVolume("mesh is not watertight".into()));
    }
    if !edges.is_consistently_wound() {
        return Err(Error::UndefinedVolume(
            "mesh winding is inconsistent".into(),
        ));
    }
    let Some(aabb) = Aabb::from_points(&mesh.vertices) else {
        return Ok(0.0);
    };
    let o = aabb.center();
    let six_v: f64 = mesh
        .triangles()
        .map(|[a, b, c]| (a - o).dot(&(b - o).cross(&(c - o))))
        .sum();
    Ok(six_v / 6.0)
}

/// Merges vertices closer than `epsilon` and drops faces that collapse.
///
/// Vertices are visited in index order and each joins the earliest
/// representative within `epsilon`; the representative keeps its position.
pub fn weld(mesh: &Mesh, epsilon: f64) -> Mesh {
    let (vertices, remap) = weld_points(&mesh.vertices, epsilon);
    let faces = mesh
        .faces
        .iter()
        .map(|f| f.map(|v| remap[v]))
        .filter(|[a, b, c]| a != b && b != c && a != c)
        .collect();
    Mesh::from_parts(vertices, faces)
}

pub(crate) fn weld_points(points: &[Point3<f64>], epsilon: f64) -> (Vec<Point3<f64>>, Vec<usize>) {
    let eps = epsilon.max(f64::MIN_POSITIVE);
    let key = |p: &Point3<f64>| -> [i64; 3] { [0, 1, 2].map(|i| (p[i] / eps).floor() as i64) };
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut out: Vec<Point3<f64>> = Vec::new();
    let mut remap = Vec::with_capacity(points.len());
    for p in points {
        let k = key(p);
        let mut best: Option<usize> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(bucket) = grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) else {
                        continue;
                    };
                    for &r in bucket {
                        if (out[r] - p).norm() <= epsilon && best.is_none_or(|b| r < b) {
                            best = Some(r);
                        }
                    }
                }
            }
        }
        let idx = match best {
            Some(r) => r,
            None => {
                out.push(*p);
                grid.entry(k).or_default().push(out.len() - 1);
                out.len() - 1
            }
        };
        remap.push(idx);
    }
    (out, remap)
}
