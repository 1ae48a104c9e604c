//! STL reading and writing. Binary layout (little-endian): 80-byte header,
//! u32 triangle count, then 50-byte records of normal, three vertices (all
//! f32 triples) and a u16 attribute byte count.

use nalgebra::{Point3, Vector3};

use super::format_float;
use crate::error::{Error, Result};
use crate::mesh::{Face, Mesh};

pub const HEADER_LEN: usize = 80;
pub const RECORD_LEN: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StlMode {
    Ascii,
    #[default]
    Binary,
}

fn facet_normal(tri: &[Point3<f64>; 3]) -> Vector3<f64> {
    let n = (tri[1] - tri[0]).cross(&(tri[2] - tri[0]));
    let len = n.norm();
    if len > 0.0 {
        n / len
    } else {
        Vector3::zeros()
    }
}

pub fn write_stl(mesh: &Mesh, mode: StlMode) -> Vec<u8> {
    match mode {
        StlMode::Binary => write_binary(mesh),
        StlMode::Ascii => write_ascii(mesh).into_bytes(),
    }
}

fn write_binary(mesh: &Mesh) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 4 + RECORD_LEN * mesh.face_count());
    let mut header = [0u8; HEADER_LEN];
    let tag = b"meshforge binary stl";
    header[..tag.len()].copy_from_slice(tag);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(mesh.face_count() as u32).to_le_bytes());
    for tri in mesh.triangles() {
        let n = facet_normal(&tri);
        for v in std::iter::once(n).chain(tri.iter().map(|p| p.coords)) {
            for c in v.iter() {
                out.extend_from_slice(&(*c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}

fn write_ascii(mesh: &Mesh) -> String {
    let mut out = String::from("solid meshforge\n");
    let fmt = |v: &Vector3<f64>| {
        format!(
            "{} {} {}",
            format_float(v.x),
            format_float(v.y),
            format_float(v.z)
        )
    };
    for tri in mesh.triangles() {
        out.push_str(&format!(
            "  facet normal {}\n    outer loop\n",
            fmt(&facet_normal(&tri))
        ));
        for p in &tri {
            out.push_str(&format!("      vertex {}\n", fmt(&p.coords)));
        }
        out.push_str("    endloop\n  endfacet\n");
    }
    out.push_str("endsolid meshforge\n");
    out
}

/// Parses ASCII or binary STL into a triangle soup: every facet gets its own
/// three vertices. Weld the result to recover shared topology.
pub fn parse_stl(bytes: &[u8]) -> Result<Mesh> {
    if looks_ascii(bytes) {
        let text = std::str::from_utf8(bytes)
            .map_err(|e| Error::parse(1, format!("ascii stl is not valid UTF-8: {e}")))?;
        parse_ascii(text)
    } else {
        parse_binary(bytes)
    }
}

/// An ASCII file starts with "solid"; some binary exporters also write
/// "solid" into the header, so a size-consistent binary layout wins.
fn looks_ascii(bytes: &[u8]) -> bool {
    let trimmed = bytes
        .iter()
        .position(|b| !b.is_ascii_whitespace())
        .map_or(&bytes[..0], |i| &bytes[i..]);
    if !trimmed.starts_with(b"solid") {
        return false;
    }
    if bytes.len() >= HEADER_LEN + 4 {
        let count = u32::from_le_bytes(bytes[HEADER_LEN..HEADER_LEN + 4].try_into().unwrap());
        if HEADER_LEN as u64 + 4 + RECORD_LEN as u64 * count as u64 == bytes.len() as u64 {
            return false;
        }
    }
    true
}

fn parse_binary(bytes: &[u8]) -> Result<Mesh> {
    if bytes.len() < HEADER_LEN + 4 {
        return Err(Error::ParseBinary {
            offset: bytes.len(),
            message: format!(
                "truncated header: need {} bytes, have {}",
                HEADER_LEN + 4,
                bytes.len()
            ),
        });
    }
    let count = u32::from_le_bytes(bytes[HEADER_LEN..HEADER_LEN + 4].try_into().unwrap()) as usize;
    let body = &bytes[HEADER_LEN + 4..];
    let available = body.len() / RECORD_LEN;
    if available < count {
        let offset = HEADER_LEN + 4 + available * RECORD_LEN;
        return Err(Error::ParseBinary {
            offset,
            message: format!("truncated triangle {available} of {count}"),
        });
    }
    let mut vertices = Vec::with_capacity(count * 3);
    let mut faces: Vec<Face> = Vec::with_capacity(count);
    for (i, rec) in body.chunks_exact(RECORD_LEN).take(count).enumerate() {
        let f = |k: usize| f32::from_le_bytes(rec[4 * k..4 * k + 4].try_into().unwrap()) as f64;
        for v in 0..3 {
            let base = 3 + 3 * v;
            let p = Point3::new(f(base), f(base + 1), f(base + 2));
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::ParseBinary {
                    offset: HEADER_LEN + 4 + i * RECORD_LEN + 4 * base,
                    message: "non-finite vertex coordinate".into(),
                });
            }
            vertices.push(p);
        }
        faces.push([3 * i, 3 * i + 1, 3 * i + 2]);
    }
    Ok(soup(vertices, faces))
}

fn parse_ascii(text: &str) -> Result<Mesh> {
    let mut vertices = Vec::new();
    let mut faces: Vec<Face> = Vec::new();
    let mut pending: Vec<Point3<f64>> = Vec::with_capacity(3);
    let mut in_facet = false;
    let mut saw_end = false;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let mut tokens = raw.split_whitespace();
        let Some(keyword) = tokens.next() else {
            continue;
        };
        match keyword {
            "solid" | "outer" | "endloop" => {}
            "facet" => {
                if in_facet {
                    return Err(Error::parse(line, "nested facet"));
                }
                in_facet = true;
                pending.clear();
            }
            "vertex" => {
                if !in_facet {
                    return Err(Error::parse(line, "vertex outside facet"));
                }
                let mut xyz = [0.0; 3];
                for c in &mut xyz {
                    let tok = tokens
                        .next()
                        .ok_or_else(|| Error::parse(line, "vertex needs 3 coordinates"))?;
                    *c = tok
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::parse(line, format!("malformed number `{tok}`")))?;
                }
                if pending.len() == 3 {
                    return Err(Error::parse(line, "facet has more than 3 vertices"));
                }
                pending.push(Point3::from(xyz));
            }
            "endfacet" => {
                if !in_facet || pending.len() != 3 {
                    return Err(Error::parse(line, "facet must have exactly 3 vertices"));
                }
                let base = vertices.len();
                vertices.append(&mut pending);
                faces.push([base, base + 1, base + 2]);
                in_facet = false;
            }
            "endsolid" => {
                saw_end = true;
                break;
            }
            other => return Err(Error::parse(line, format!("unexpected `{other}`"))),
        }
    }
    if in_facet {
        return Err(Error::parse(text.lines().count(), "unterminated facet"));
    }
    if !saw_end {
        return Err(Error::parse(text.lines().count(), "missing endsolid"));
    }
    Ok(soup(vertices, faces))
}

/// Soup faces always reference three distinct slots, so they are valid.
fn soup(vertices: Vec<Point3<f64>>, faces: Vec<Face>) -> Mesh {
    Mesh::from_parts(vertices, faces)
}
