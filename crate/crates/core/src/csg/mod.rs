//! Boolean operations on closed triangle meshes.
//!
//! Each operand becomes a BSP tree; the trees clip each other's polygons
//! and the surviving polygons are stitched back into a watertight mesh.
//! Coplanar faces with agreeing normals are kept once, so `union(a, a)` and
//! `intersection(a, a)` reproduce `a`.

mod bsp;
mod repair;

pub use bsp::{BspNode, Plane, Polygon, PLANE_EPSILON};
pub use repair::{MIN_TRIANGLE_AREA, WELD_EPSILON};

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::topology::EdgeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BooleanOp {
    Union,
    Difference,
    Intersection,
}

pub fn union(a: &Mesh, b: &Mesh) -> Result<Mesh> {
    boolean(a, b, BooleanOp::Union)
}

pub fn difference(a: &Mesh, b: &Mesh) -> Result<Mesh> {
    boolean(a, b, BooleanOp::Difference)
}

pub fn intersection(a: &Mesh, b: &Mesh) -> Result<Mesh> {
    boolean(a, b, BooleanOp::Intersection)
}

pub fn boolean(a: &Mesh, b: &Mesh, op: BooleanOp) -> Result<Mesh> {
    check_operand(a, "left")?;
    check_operand(b, "right")?;
    if a.is_empty() || b.is_empty() {
        return Ok(match op {
            BooleanOp::Union if a.is_empty() => b.clone(),
            BooleanOp::Union | BooleanOp::Difference => a.clone(),
            BooleanOp::Intersection => Mesh::empty(),
        });
    }
    let mut ta = BspNode::new(to_polygons(a));
    let mut tb = BspNode::new(to_polygons(b));
    match op {
        BooleanOp::Union => {
            ta.clip_to(&tb);
            tb.clip_to(&ta);
            tb.invert();
            tb.clip_to(&ta);
            tb.invert();
            ta.build(tb.into_polygons());
        }
        BooleanOp::Difference => {
            ta.invert();
            ta.clip_to(&tb);
            tb.clip_to(&ta);
            tb.invert();
            tb.clip_to(&ta);
            tb.invert();
            ta.build(tb.into_polygons());
            ta.invert();
        }
        BooleanOp::Intersection => {
            ta.invert();
            tb.clip_to(&ta);
            tb.invert();
            ta.clip_to(&tb);
            tb.clip_to(&ta);
            ta.build(tb.into_polygons());
            ta.invert();
        }
    }
    Ok(repair::polygons_to_mesh(&ta.into_polygons()))
}

fn check_operand(m: &Mesh, which: &str) -> Result<()> {
    let edges = EdgeMap::build(m);
    if !edges.is_watertight() {
        return Err(Error::InvalidOperand(format!(
            "{which} operand is not watertight"
        )));
    }
    if !edges.is_consistently_wound() {
        return Err(Error::InvalidOperand(format!(
            "{which} operand has inconsistent winding"
        )));
    }
    Ok(())
}

fn to_polygons(m: &Mesh) -> Vec<Polygon> {
    m.triangles()
        .filter_map(|t| Polygon::new(t.to_vec()))
        .collect()
}
