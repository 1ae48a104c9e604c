//! Per-vertex displacement of a fixed-topology template mesh.
//!
//! Displacement files are plain text, one whitespace-separated `dx dy dz`
//! triple per line (meters), one line per template vertex.

use std::path::Path;

use nalgebra::{Point3, Vector3};

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::primitives::make_icosphere;

/// Subdivision depth of the default template (642 vertices, 1280 faces).
pub const TEMPLATE_SUBDIVISIONS: u32 = 3;
pub const TEMPLATE_VERTEX_COUNT: usize = 642;

/// Genus-zero icosphere of diameter 1 used as the deformation template.
pub fn template_mesh() -> Mesh {
    make_icosphere(TEMPLATE_SUBDIVISIONS)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementField {
    displacements: Vec<Vector3<f64>>,
}

impl DisplacementField {
    pub fn new(displacements: Vec<Vector3<f64>>) -> Self {
        Self { displacements }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![Vector3::zeros(); len])
    }

    pub fn uniform(len: usize, d: Vector3<f64>) -> Self {
        Self::new(vec![d; len])
    }

    pub fn len(&self) -> usize {
        self.displacements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.displacements.is_empty()
    }

    pub fn displacements(&self) -> &[Vector3<f64>] {
        &self.displacements
    }

    /// Element-wise sum; both fields must have the same length.
    pub fn add(&self, other: &DisplacementField) -> Result<DisplacementField> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Self::new(
            self.displacements
                .iter()
                .zip(&other.displacements)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut displacements = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    n + 1,
                    format!("expected 3 values, found {}", fields.len()),
                ));
            }
            let mut d = [0.0; 3];
            for (slot, tok) in d.iter_mut().zip(&fields) {
                *slot = tok
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(n + 1, format!("malformed number `{tok}`")))?;
            }
            displacements.push(Vector3::from(d));
        }
        Ok(Self::new(displacements))
    }

    /// Inverse of [`DisplacementField::parse`]; LF line endings.
    pub fn to_text(&self) -> String {
        self.displacements
            .iter()
            .map(|d| format!("{} {} {}\n", d.x, d.y, d.z))
            .collect()
    }
}

pub fn load_displacement(path: &Path) -> Result<DisplacementField> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
    DisplacementField::parse(&text).map_err(|e| e.in_file(path))
}

/// Moves vertex i by `field[i]`. The output shares the template's face list.
pub fn apply_displacement(template: &Mesh, field: &DisplacementField) -> Result<Mesh> {
    if field.len() != template.vertex_count() {
        return Err(Error::ShapeMismatch {
            expected: template.vertex_count(),
            found: field.len(),
        });
    }
    let vertices: Vec<Point3<f64>> = template
        .vertices()
        .iter()
        .zip(&field.displacements)
        .map(|(p, d)| p + d)
        .collect();
    Ok(template.with_vertices(vertices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{bounding_dimensions, signed_volume};
    use crate::topology::euler_genus;

    #[test]
    fn template_shape() {
        let t = template_mesh();
        assert_eq!(t.vertex_count(), TEMPLATE_VERTEX_COUNT);
        assert_eq!(t.face_count(), 1280);
        assert_eq!(euler_genus(&t).unwrap(), 0);
    }

    #[test]
    fn zero_field_is_identity() {
        let t = template_mesh();
        let out = apply_displacement(&t, &DisplacementField::zeros(t.vertex_count())).unwrap();
        assert_eq!(out.vertices(), t.vertices());
        assert!(out.shares_faces_with(&t));
    }

    #[test]
    fn uniform_field_translates() {
        let t = template_mesh();
        let field = DisplacementField::uniform(t.vertex_count(), Vector3::new(0.1, 0.0, 0.0));
        let out = apply_displacement(&t, &field).unwrap();
        let (_, a) = bounding_dimensions(&t).unwrap();
        let (_, b) = bounding_dimensions(&out).unwrap();
        assert!((b.min.x - a.min.x - 0.1).abs() < 1e-15);
        assert!((b.max.x - a.max.x - 0.1).abs() < 1e-15);
        let (v0, v1) = (signed_volume(&t).unwrap(), signed_volume(&out).unwrap());
        assert!((v0 - v1).abs() <= 1e-12);
    }

    #[test]
    fn length_mismatch() {
        let t = template_mesh();
        let err = apply_displacement(&t, &DisplacementField::zeros(5)).unwrap_err();
        assert!(matches!(
            err,
            Error::ShapeMismatch {
                expected: 642,
                found: 5
            }
        ));
    }

    #[test]
    fn parse_format() {
        let f = DisplacementField::parse("0 0 0\n0 0 0\n0 0 0\n").unwrap();
        assert_eq!(f, DisplacementField::zeros(3));
        let err = DisplacementField::parse("0 0 0\n1 2\n0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = DisplacementField::parse("0 0 0\n1 2 nan\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let f = DisplacementField::new(vec![Vector3::new(0.25, -1e-3, 3.0)]);
        assert_eq!(DisplacementField::parse(&f.to_text()).unwrap(), f);
    }
}
