use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::parse::{parse_script, Command, SceneScript};
use crate::csg::boolean;
use crate::error::{Error, Result};
use crate::io::encode_mesh;
use crate::mesh::{apply_transform, bounding_dimensions, resize, resize_to, Mesh};
use crate::voxel::{best_match, format_matches, MatchResult, ModelDatabase};

/// An exported file held in memory until the caller writes it.
#[derive(Debug, Clone, PartialEq)]
pub struct Export {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub objects: BTreeMap<String, Mesh>,
    pub dimensions: Vec<(String, [f64; 3])>,
    pub matches: Vec<(String, Vec<MatchResult>)>,
    pub exports: Vec<Export>,
    /// Report text: dimension readouts and match rankings in command order.
    pub lines: Vec<String>,
    pub output: Option<String>,
}

impl RunReport {
    pub fn output_mesh(&self) -> Option<&Mesh> {
        self.output.as_ref().and_then(|n| self.objects.get(n))
    }

    pub fn text(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }

    /// Writes every export, resolving relative paths against `dir`.
    /// Returns the written paths.
    pub fn write_exports(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(self.exports.len());
        for e in &self.exports {
            let path = dir.join(&e.path);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|err| Error::from(err).in_file(parent))?;
            }
            std::fs::write(&path, &e.bytes).map_err(|err| Error::from(err).in_file(&path))?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn format_dimensions(name: &str, d: [f64; 3]) -> String {
    format!("{name}: {:.6} {:.6} {:.6}", d[0], d[1], d[2])
}

/// Runs a parsed script. A database is required iff the script uses `match`.
pub fn execute(script: &SceneScript, db: Option<&ModelDatabase>) -> Result<RunReport> {
    if script.uses_match() && db.is_none() {
        return Err(Error::Database(
            "script uses `match` but no model database was given".into(),
        ));
    }
    let mut report = RunReport {
        output: script.output().map(str::to_string),
        ..RunReport::default()
    };
    for stmt in &script.statements {
        run_command(&stmt.command, db, &mut report).map_err(|e| Error::Command {
            line: stmt.line,
            source: Box::new(e),
        })?;
    }
    Ok(report)
}

pub fn run_script(text: &str, db: Option<&ModelDatabase>) -> Result<RunReport> {
    execute(&parse_script(text)?, db)
}

fn get<'a>(objects: &'a BTreeMap<String, Mesh>, name: &str) -> Result<&'a Mesh> {
    objects
        .get(name)
        .ok_or_else(|| Error::InvalidArgument(format!("undefined object `{name}`")))
}

fn run_command(cmd: &Command, db: Option<&ModelDatabase>, report: &mut RunReport) -> Result<()> {
    let objects = &mut report.objects;
    match cmd {
        Command::Primitive {
            name,
            spec,
            transform,
        } => {
            let mesh = apply_transform(&spec.build()?, transform)?;
            objects.insert(name.clone(), mesh);
        }
        Command::Boolean { op, out, a, b } => {
            let mesh = boolean(get(objects, a)?, get(objects, b)?, *op)?;
            objects.insert(out.clone(), mesh);
        }
        Command::Resize { name, factors } => {
            let mesh = resize(get(objects, name)?, *factors)?;
            objects.insert(name.clone(), mesh);
        }
        Command::ResizeTo { name, target } => {
            let mesh = resize_to(get(objects, name)?, *target)?;
            objects.insert(name.clone(), mesh);
        }
        Command::Dimension { name } => {
            let (d, _) = bounding_dimensions(get(objects, name)?)?;
            let d = [d.x, d.y, d.z];
            report.lines.push(format_dimensions(name, d));
            report.dimensions.push((name.clone(), d));
        }
        Command::Match { name, top } => {
            let db = db.ok_or_else(|| Error::Database("no model database".into()))?;
            let results = best_match(get(objects, name)?, db, *top)?;
            report
                .lines
                .extend(format_matches(&results).lines().map(str::to_string));
            report.matches.push((name.clone(), results));
        }
        Command::Export { name, path, format } => {
            let bytes = encode_mesh(get(objects, name)?, *format);
            report.exports.push(Export {
                path: path.clone(),
                bytes,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::signed_volume;
    use crate::primitives::make_cuboid;
    use crate::topology::validate_printable;

    #[test]
    fn resize_to_then_dimension() {
        let r = run_script(
            "cube chair\nresize_to chair 0.4 0.9 0.45\ndimension chair\n",
            None,
        )
        .unwrap();
        assert_eq!(r.text(), "chair: 0.400000 0.900000 0.450000\n");
    }

    #[test]
    fn empty_script_produces_nothing() {
        let r = run_script("", None).unwrap();
        assert!(r.objects.is_empty() && r.exports.is_empty() && r.lines.is_empty());
        assert!(r.output_mesh().is_none());
    }

    #[test]
    fn boolean_result_and_export() {
        let r = run_script(
            "cube a scale 2 2 2\ncube b pos 1 0 0\nsubtract c a b\nexport c c.obj\n",
            None,
        )
        .unwrap();
        let c = r.output_mesh().unwrap();
        assert!(validate_printable(c).is_printable());
        assert!((signed_volume(c).unwrap() - 7.5).abs() < 1e-9);
        assert_eq!(r.exports.len(), 1);
        assert_eq!(r.exports[0].path, PathBuf::from("c.obj"));
    }

    #[test]
    fn match_requires_database() {
        let err = run_script("cube a\nmatch a\n", None).unwrap_err();
        assert!(matches!(err, Error::Database(_)));
        let db = ModelDatabase::from_meshes(8, [("box", make_cuboid())]).unwrap();
        let r = run_script("cube a\nmatch a top 1\n", Some(&db)).unwrap();
        assert_eq!(r.text(), "1\tbox\t1.000000\n");
    }

    #[test]
    fn errors_carry_line() {
        let err = run_script("cube a\n\ncube b scale 0 1 1\n", None).unwrap_err();
        match err {
            Error::Command { line, source } => {
                assert_eq!(line, 3);
                assert!(matches!(*source, Error::InvalidTransform(_)));
            }
            e => panic!("unexpected {e}"),
        }
    }
}
