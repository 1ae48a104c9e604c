//! OBJ and STL interchange.

mod obj;
mod stl;

use std::path::Path;

pub use obj::{parse_obj, write_obj, ObjDocument};
pub use stl::{parse_stl, write_stl, StlMode};

use crate::error::{Error, Result};
use crate::mesh::{weld, Mesh};

/// Tolerance used to recover shared vertices from STL triangle soup.
pub const STL_WELD_EPSILON: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Stl(StlMode),
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("obj") => Ok(MeshFormat::Obj),
            Some("stl") => Ok(MeshFormat::Stl(StlMode::Binary)),
            _ => Err(Error::InvalidArgument(format!(
                "unsupported mesh format for `{}` (expected .obj or .stl)",
                path.display()
            ))),
        }
    }
}

/// Shortest round-trip decimal, capped at 9 significant digits.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    let a = rounded.abs();
    if (1e-5..1e9).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn encode_mesh(mesh: &Mesh, format: MeshFormat) -> Vec<u8> {
    match format {
        MeshFormat::Obj => write_obj(mesh).into_bytes(),
        MeshFormat::Stl(mode) => write_stl(mesh, mode),
    }
}

/// Decodes a mesh; STL soups are welded so the result has shared topology.
pub fn decode_mesh(bytes: &[u8], format: MeshFormat) -> Result<Mesh> {
    match format {
        MeshFormat::Obj => {
            let text = std::str::from_utf8(bytes)
                .map_err(|e| Error::parse(1, format!("obj is not valid UTF-8: {e}")))?;
            parse_obj(text)
        }
        MeshFormat::Stl(_) => Ok(weld(&parse_stl(bytes)?, STL_WELD_EPSILON)),
    }
}

pub fn load_mesh(path: &Path) -> Result<Mesh> {
    let format = MeshFormat::from_path(path)?;
    let bytes = std::fs::read(path).map_err(|e| Error::from(e).in_file(path))?;
    decode_mesh(&bytes, format).map_err(|e| e.in_file(path))
}

pub fn save_mesh(path: &Path, mesh: &Mesh, format: MeshFormat) -> Result<()> {
    std::fs::write(path, encode_mesh(mesh, format)).map_err(|e| Error::from(e).in_file(path))
}
