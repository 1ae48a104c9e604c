//! Headless solid-modeling kernel for additive manufacturing.
//!
//! Primitive solids are placed with TRS transforms and combined with mesh
//! booleans; results can be resized to physical dimensions, checked for
//! printability, matched against a model database by voxel IoU, and
//! exchanged as OBJ or STL. A line-oriented scene script replays whole
//! construction sessions.

pub mod csg;
pub mod deform;
pub mod error;
pub mod io;
pub mod mesh;
pub mod primitives;
pub mod script;
pub mod topology;
pub mod voxel;

pub use error::{Error, Result};
pub use mesh::{Aabb, Mesh, Transform};
