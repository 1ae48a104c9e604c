//! Unit-sized primitive solids centered at the origin.
//!
//! Sizing and placement always go through a [`Transform`](crate::mesh::Transform);
//! an ellipsoid is a sphere with a non-uniform scale.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::Point3;

use crate::error::{Error, Result};
use crate::mesh::{Face, Mesh};

pub const DEFAULT_STACKS: usize = 16;
pub const DEFAULT_SECTORS: usize = 24;
pub const DEFAULT_CYLINDER_SECTORS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimitiveSpec {
    Cuboid,
    Ellipsoid { stacks: usize, sectors: usize },
    Cylinder { sectors: usize },
}

impl PrimitiveSpec {
    pub fn ellipsoid() -> Self {
        PrimitiveSpec::Ellipsoid {
            stacks: DEFAULT_STACKS,
            sectors: DEFAULT_SECTORS,
        }
    }

    pub fn cylinder() -> Self {
        PrimitiveSpec::Cylinder {
            sectors: DEFAULT_CYLINDER_SECTORS,
        }
    }

    pub fn build(&self) -> Result<Mesh> {
        match *self {
            PrimitiveSpec::Cuboid => Ok(make_cuboid()),
            PrimitiveSpec::Ellipsoid { stacks, sectors } => make_ellipsoid(stacks, sectors),
            PrimitiveSpec::Cylinder { sectors } => make_cylinder(sectors),
        }
    }
}

/// Unit cube spanning [-0.5, 0.5]^3: 8 vertices, 12 triangles.
pub fn make_cuboid() -> Mesh {
    let vertices = (0..8)
        .map(|i| {
            Point3::new(
                if i & 1 == 0 { -0.5 } else { 0.5 },
                if i & 2 == 0 { -0.5 } else { 0.5 },
                if i & 4 == 0 { -0.5 } else { 0.5 },
            )
        })
        .collect();
    // Quads listed counter-clockwise seen from outside.
    let quads: [[usize; 4]; 6] = [
        [0, 4, 6, 2], // -x
        [1, 3, 7, 5], // +x
        [0, 1, 5, 4], // -y
        [2, 6, 7, 3], // +y
        [0, 2, 3, 1], // -z
        [4, 5, 7, 6], // +z
    ];
    let faces = quads
        .iter()
        .flat_map(|&[a, b, c, d]| [[a, b, c], [a, c, d]])
        .collect();
    Mesh::from_parts(vertices, faces)
}

/// UV sphere of diameter 1 with poles on the y axis.
///
/// V = sectors·(stacks−1) + 2, F = 2·sectors·(stacks−1).
pub fn make_ellipsoid(stacks: usize, sectors: usize) -> Result<Mesh> {
    if stacks < 3 || sectors < 3 {
        return Err(Error::InvalidArgument(format!(
            "ellipsoid needs stacks >= 3 and sectors >= 3, got {stacks}x{sectors}"
        )));
    }
    let r = 0.5;
    let mut vertices = Vec::with_capacity(sectors * (stacks - 1) + 2);
    vertices.push(Point3::new(0.0, r, 0.0));
    for i in 1..stacks {
        let phi = PI * i as f64 / stacks as f64;
        let (y, ring) = (r * phi.cos(), r * phi.sin());
        for j in 0..sectors {
            let theta = 2.0 * PI * j as f64 / sectors as f64;
            vertices.push(Point3::new(ring * theta.cos(), y, -ring * theta.sin()));
        }
    }
    vertices.push(Point3::new(0.0, -r, 0.0));
    let south = vertices.len() - 1;
    let ring = |i: usize, j: usize| 1 + (i - 1) * sectors + j % sectors;

    let mut faces: Vec<Face> = Vec::with_capacity(2 * sectors * (stacks - 1));
    for j in 0..sectors {
        faces.push([0, ring(1, j), ring(1, j + 1)]);
    }
    for i in 1..stacks - 1 {
        for j in 0..sectors {
            let (a, b) = (ring(i, j), ring(i, j + 1));
            let (c, d) = (ring(i + 1, j), ring(i + 1, j + 1));
            faces.push([a, c, d]);
            faces.push([a, d, b]);
        }
    }
    for j in 0..sectors {
        faces.push([south, ring(stacks - 1, j + 1), ring(stacks - 1, j)]);
    }
    Ok(Mesh::from_parts(vertices, faces))
}

/// Capped cylinder of diameter 1 and height 1 along y; caps are fans.
///
/// V = 2·sectors + 2, F = 4·sectors.
pub fn make_cylinder(sectors: usize) -> Result<Mesh> {
    if sectors < 3 {
        return Err(Error::InvalidArgument(format!(
            "cylinder needs sectors >= 3, got {sectors}"
        )));
    }
    let r = 0.5;
    let mut vertices = Vec::with_capacity(2 * sectors + 2);
    for y in [0.5, -0.5] {
        for j in 0..sectors {
            let theta = 2.0 * PI * j as f64 / sectors as f64;
            vertices.push(Point3::new(r * theta.cos(), y, -r * theta.sin()));
        }
    }
    let (top, bottom) = (2 * sectors, 2 * sectors + 1);
    vertices.push(Point3::new(0.0, 0.5, 0.0));
    vertices.push(Point3::new(0.0, -0.5, 0.0));
    let upper = |j: usize| j % sectors;
    let lower = |j: usize| sectors + j % sectors;

    let mut faces: Vec<Face> = Vec::with_capacity(4 * sectors);
    for j in 0..sectors {
        faces.push([top, upper(j), upper(j + 1)]);
        faces.push([upper(j), lower(j), lower(j + 1)]);
        faces.push([upper(j), lower(j + 1), upper(j + 1)]);
        faces.push([bottom, lower(j + 1), lower(j)]);
    }
    Ok(Mesh::from_parts(vertices, faces))
}

/// Icosahedron subdivided `levels` times and projected onto the sphere of
/// diameter 1. V = 10·4^levels + 2.
pub fn make_icosphere(levels: u32) -> Mesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Point3<f64>> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| Point3::from(nalgebra::Vector3::from(*p).normalize() * 0.5))
    .collect();
    let mut faces: Vec<Face> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..levels {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point3<f64>>| {
            *midpoints.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let m = nalgebra::center(&vertices[a], &vertices[b]);
                vertices.push(Point3::from(m.coords.normalize() * 0.5));
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    Mesh::from_parts(vertices, faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{apply_transform, bounding_dimensions, signed_volume, Transform};
    use crate::topology::{euler_characteristic, validate_printable};

    fn assert_closed_genus_zero(m: &Mesh) {
        let r = validate_printable(m);
        assert!(r.is_printable(), "{r}");
        assert_eq!(r.genus, Some(0));
    }

    #[test]
    fn cuboid_counts_and_volume() {
        let c = make_cuboid();
        assert_eq!((c.vertex_count(), c.face_count()), (8, 12));
        assert_eq!(signed_volume(&c).unwrap(), 1.0);
        assert_closed_genus_zero(&c);
        let (d, _) = bounding_dimensions(&c).unwrap();
        assert_eq!(d.as_slice(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn cuboid_under_t2_spans_thin_y_band() {
        let t2 = Transform::new([0.0, 0.0, 0.355], [0.0; 3], [0.1, 0.012, 0.1]);
        let m = apply_transform(&make_cuboid(), &t2).unwrap();
        let (_, aabb) = bounding_dimensions(&m).unwrap();
        assert!((aabb.min.y + 0.006).abs() < 1e-15);
        assert!((aabb.max.y - 0.006).abs() < 1e-15);
    }

    #[test]
    fn ellipsoid_counts() {
        let s = make_ellipsoid(16, 24).unwrap();
        assert_eq!((s.vertex_count(), s.face_count()), (362, 720));
        assert_eq!(euler_characteristic(&s), 2);
        assert_closed_genus_zero(&s);
        let v = signed_volume(&s).unwrap();
        let ball = 4.0 / 3.0 * PI * 0.125;
        assert!((v - ball).abs() / ball < 0.05, "{v}");
        assert!(v < ball);
    }

    #[test]
    fn cylinder_counts() {
        let c = make_cylinder(32).unwrap();
        assert_eq!((c.vertex_count(), c.face_count()), (66, 128));
        assert_eq!(euler_characteristic(&c), 2);
        assert_closed_genus_zero(&c);
        let v = signed_volume(&make_cylinder(64).unwrap()).unwrap();
        let exact = PI * 0.25;
        assert!((v - exact).abs() / exact < 0.02, "{v}");
    }

    #[test]
    fn tessellation_minimums() {
        assert!(matches!(
            make_ellipsoid(2, 8),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            make_ellipsoid(8, 2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(make_cylinder(2), Err(Error::InvalidArgument(_))));
        assert_closed_genus_zero(&make_ellipsoid(3, 3).unwrap());
        assert_closed_genus_zero(&make_cylinder(3).unwrap());
    }

    #[test]
    fn icosphere_vertex_counts() {
        for (levels, v) in [(0, 12), (1, 42), (2, 162), (3, 642)] {
            let m = make_icosphere(levels);
            assert_eq!(m.vertex_count(), v);
            assert_eq!(m.face_count(), 20 * 4usize.pow(levels));
            assert_closed_genus_zero(&m);
        }
    }
}
