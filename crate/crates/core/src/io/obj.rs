use nalgebra::Point3;

use super::format_float;
use crate::error::{Error, Result};
use crate::mesh::{Face, Mesh};

/// Parsed OBJ geometry before triangulation.
#[derive(Debug, Clone, Default)]
pub struct ObjDocument {
    pub vertices: Vec<Point3<f64>>,
    /// Zero-based polygon index lists, each with at least three entries.
    pub faces: Vec<Vec<usize>>,
    /// (line, directive) for every directive that was skipped.
    pub ignored: Vec<(usize, String)>,
}

impl ObjDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = ObjDocument::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            let mut tokens = content.split_whitespace();
            let Some(directive) = tokens.next() else {
                continue;
            };
            match directive {
                "v" => {
                    let mut xyz = [0.0; 3];
                    for c in &mut xyz {
                        let tok = tokens
                            .next()
                            .ok_or_else(|| Error::parse(line, "vertex needs 3 coordinates"))?;
                        *c = parse_float(tok, line)?;
                    }
                    // An optional w component is ignored.
                    doc.vertices.push(Point3::from(xyz));
                }
                "f" => {
                    let count = doc.vertices.len();
                    let indices = tokens
                        .map(|t| resolve_index(t, count, line))
                        .collect::<Result<Vec<_>>>()?;
                    if indices.len() < 3 {
                        return Err(Error::parse(line, "face needs at least 3 vertices"));
                    }
                    doc.faces.push(indices);
                }
                other => doc.ignored.push((line, other.to_string())),
            }
        }
        Ok(doc)
    }

    /// Fan-triangulates polygons as (v0, vi, vi+1). Triangles that repeat
    /// a vertex are rejected.
    pub fn into_mesh(self) -> Result<Mesh> {
        let mut faces: Vec<Face> = Vec::with_capacity(self.faces.len());
        for poly in &self.faces {
            for i in 1..poly.len() - 1 {
                faces.push([poly[0], poly[i], poly[i + 1]]);
            }
        }
        Mesh::new(self.vertices, faces)
    }
}

fn parse_float(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::parse(line, format!("malformed number `{tok}`"))),
    }
}

/// Resolves "i", "i/t", "i/t/n" or "i//n" with 1-based or negative indices.
fn resolve_index(tok: &str, count: usize, line: usize) -> Result<usize> {
    let head = tok.split('/').next().unwrap_or("");
    let raw: i64 = head
        .parse()
        .map_err(|_| Error::parse(line, format!("malformed face index `{tok}`")))?;
    let resolved = if raw > 0 {
        raw - 1
    } else if raw < 0 {
        count as i64 + raw
    } else {
        -1
    };
    if resolved < 0 || resolved >= count as i64 {
        return Err(Error::parse(
            line,
            format!("face index {raw} out of range for {count} vertices"),
        ));
    }
    Ok(resolved as usize)
}

pub fn parse_obj(text: &str) -> Result<Mesh> {
    ObjDocument::parse(text)?.into_mesh()
}

/// One `v` line per vertex and one 1-based `f` line per face, after a
/// single header comment.
pub fn write_obj(mesh: &Mesh) -> String {
    let mut out = String::with_capacity(32 * (mesh.vertex_count() + mesh.face_count()) + 32);
    out.push_str("# meshforge obj\n");
    for v in mesh.vertices() {
        out.push_str("v ");
        out.push_str(&format_float(v.x));
        out.push(' ');
        out.push_str(&format_float(v.y));
        out.push(' ');
        out.push_str(&format_float(v.z));
        out.push('\n');
    }
    for [a, b, c] in mesh.faces() {
        out.push_str(&format!("f {} {} {}\n", a + 1, b + 1, c + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle() {
        let m = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n").unwrap();
        assert_eq!((m.vertex_count(), m.face_count()), (3, 1));
    }

    #[test]
    fn quad_is_fanned() {
        let m = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n").unwrap();
        assert_eq!(m.faces(), &[[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn negative_indices_count_back() {
        let m = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -1 -2 -3\n").unwrap();
        assert_eq!(m.faces(), &[[2, 1, 0]]);
    }

    #[test]
    fn slashed_indices_and_ignored_directives() {
        let text = "mtllib x.mtl\no thing\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\n\
                    usemtl m\ns off\ng grp\nf 1/1/1 2//1 3/1\n";
        let doc = ObjDocument::parse(text).unwrap();
        let ignored: Vec<&str> = doc.ignored.iter().map(|(_, d)| d.as_str()).collect();
        assert_eq!(ignored, ["mtllib", "o", "vt", "vn", "usemtl", "s", "g"]);
        assert_eq!(doc.ignored[0].0, 1);
        let m = doc.into_mesh().unwrap();
        assert_eq!(m.faces(), &[[0, 1, 2]]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\n\nf 1 2 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }), "{err}");
        let err = parse_obj("v 0 0 0\nv 1 zero 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_obj("v 0 0 0\nf 0 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(parse_obj("v 0 0\n").is_err());
        assert!(parse_obj("v 0 0 0\nv 1 0 0\nf 1 2\n").is_err());
    }

    #[test]
    fn empty_mesh_writes_header_only() {
        let text = write_obj(&Mesh::empty());
        assert_eq!(text, "# meshforge obj\n");
        assert_eq!(parse_obj(&text).unwrap().vertex_count(), 0);
    }

    #[test]
    fn writer_format() {
        let m = Mesh::new(
            vec![
                Point3::new(0.0, 0.1 + 0.2, -0.0),
                Point3::new(1.0, 2.5, 1e-12),
                Point3::new(-0.45, 0.123456789012, 3.0),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert_eq!(
            write_obj(&m),
            "# meshforge obj\nv 0 0.3 0\nv 1 2.5 1e-12\nv -0.45 0.123456789 3\nf 1 2 3\n"
        );
    }
}
