use std::collections::HashSet;
use std::path::PathBuf;

use crate::csg::BooleanOp;
use crate::error::{Error, Result};
use crate::io::{MeshFormat, StlMode};
use crate::mesh::Transform;
use crate::primitives::{PrimitiveSpec, DEFAULT_CYLINDER_SECTORS, DEFAULT_SECTORS, DEFAULT_STACKS};

/// Number of matches reported when `top` is omitted.
pub const DEFAULT_TOP_K: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Primitive {
        name: String,
        spec: PrimitiveSpec,
        transform: Transform,
    },
    Boolean {
        op: BooleanOp,
        out: String,
        a: String,
        b: String,
    },
    Resize {
        name: String,
        factors: [f64; 3],
    },
    ResizeTo {
        name: String,
        target: [f64; 3],
    },
    Dimension {
        name: String,
    },
    Match {
        name: String,
        top: usize,
    },
    Export {
        name: String,
        path: PathBuf,
        format: MeshFormat,
    },
}

impl Command {
    /// Object created or replaced by this command, if any.
    pub fn defines(&self) -> Option<&str> {
        match self {
            Command::Primitive { name, .. }
            | Command::Resize { name, .. }
            | Command::ResizeTo { name, .. } => Some(name),
            Command::Boolean { out, .. } => Some(out),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub line: usize,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SceneScript {
    pub statements: Vec<Statement>,
}

impl SceneScript {
    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn uses_match(&self) -> bool {
        self.statements
            .iter()
            .any(|s| matches!(s.command, Command::Match { .. }))
    }

    /// The most recently created or modified object.
    pub fn output(&self) -> Option<&str> {
        self.statements
            .iter()
            .rev()
            .find_map(|s| s.command.defines())
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in code.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((byte, col + 1)),
            (true, Some((b, c))) => {
                tokens.push(Token {
                    text: &code[b..byte],
                    column: c,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &code[b..],
            column: c,
        });
    }
    tokens
}

struct Cursor<'a, 'b> {
    line: usize,
    verb: Token<'a>,
    tokens: &'b [Token<'a>],
    pos: usize,
    defined: &'b HashSet<String>,
}

impl<'a> Cursor<'a, '_> {
    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Script {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    /// Column just past the last token, for "missing argument" errors.
    fn end_column(&self) -> usize {
        let last = self.tokens.last().copied().unwrap_or(self.verb);
        last.column + last.text.chars().count()
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>> {
        let tok = self.peek().ok_or_else(|| {
            self.error(
                self.end_column(),
                format!("`{}` expects {what}", self.verb.text),
            )
        })?;
        self.pos += 1;
        Ok(tok)
    }

    fn new_name(&mut self) -> Result<String> {
        let tok = self.next("an object name")?;
        if !is_name(tok.text) {
            return Err(self.error(tok.column, format!("invalid object name `{}`", tok.text)));
        }
        Ok(tok.text.to_string())
    }

    fn existing_name(&mut self) -> Result<String> {
        let tok = self.next("an object name")?;
        if !self.defined.contains(tok.text) {
            return Err(self.error(tok.column, format!("undefined object `{}`", tok.text)));
        }
        Ok(tok.text.to_string())
    }

    fn number(&mut self) -> Result<f64> {
        let tok = self.next("a number")?;
        tok.text
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| {
                self.error(
                    tok.column,
                    format!("expected a number, found `{}`", tok.text),
                )
            })
    }

    fn vec3(&mut self) -> Result<[f64; 3]> {
        Ok([self.number()?, self.number()?, self.number()?])
    }

    fn count(&mut self) -> Result<usize> {
        let tok = self.next("a count")?;
        tok.text.parse::<usize>().map_err(|_| {
            self.error(
                tok.column,
                format!("expected a non-negative integer, found `{}`", tok.text),
            )
        })
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some(tok) => Err(self.error(
                tok.column,
                format!("unexpected argument `{}` to `{}`", tok.text, self.verb.text),
            )),
            None => Ok(()),
        }
    }
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Cube,
    Sphere,
    Cylinder,
}

fn parse_primitive(cur: &mut Cursor<'_, '_>, kind: Kind) -> Result<Command> {
    let name = cur.new_name()?;
    let mut pos = None;
    let mut rot = None;
    let mut scale = None;
    let mut stacks = None;
    let mut sectors = None;
    while let Some(tok) = cur.peek() {
        cur.pos += 1;
        let key = tok.text.to_ascii_lowercase();
        let dup = || cur.error(tok.column, format!("`{}` given twice", tok.text));
        match key.as_str() {
            "pos" | "rot" | "scale" => {
                let slot = match key.as_str() {
                    "pos" => &mut pos,
                    "rot" => &mut rot,
                    _ => &mut scale,
                };
                if slot.is_some() {
                    return Err(dup());
                }
                *slot = Some(cur.vec3()?);
            }
            "stacks" if kind == Kind::Sphere => {
                if stacks.is_some() {
                    return Err(dup());
                }
                stacks = Some(cur.count()?);
            }
            "sectors" if kind != Kind::Cube => {
                if sectors.is_some() {
                    return Err(dup());
                }
                sectors = Some(cur.count()?);
            }
            _ => {
                return Err(cur.error(
                    tok.column,
                    format!("unknown keyword `{}` for `{}`", tok.text, cur.verb.text),
                ))
            }
        }
    }
    let spec = match kind {
        Kind::Cube => PrimitiveSpec::Cuboid,
        Kind::Sphere => PrimitiveSpec::Ellipsoid {
            stacks: stacks.unwrap_or(DEFAULT_STACKS),
            sectors: sectors.unwrap_or(DEFAULT_SECTORS),
        },
        Kind::Cylinder => PrimitiveSpec::Cylinder {
            sectors: sectors.unwrap_or(DEFAULT_CYLINDER_SECTORS),
        },
    };
    let transform = Transform::new(
        pos.unwrap_or([0.0; 3]),
        rot.unwrap_or([0.0; 3]),
        scale.unwrap_or([1.0; 3]),
    );
    Ok(Command::Primitive {
        name,
        spec,
        transform,
    })
}

fn parse_export(cur: &mut Cursor<'_, '_>) -> Result<Command> {
    let name = cur.existing_name()?;
    let tok = cur.next("an output path")?;
    let path = PathBuf::from(tok.text);
    let mut format =
        MeshFormat::from_path(&path).map_err(|e| cur.error(tok.column, e.to_string()))?;
    if let Some(flag) = cur.peek() {
        if flag.text.eq_ignore_ascii_case("ascii") && format == MeshFormat::Stl(StlMode::Binary) {
            cur.pos += 1;
            format = MeshFormat::Stl(StlMode::Ascii);
        }
    }
    Ok(Command::Export { name, path, format })
}

const INTERACTIVE_VERBS: [&str; 4] = ["select", "sync", "capture", "print"];

fn parse_statement(
    line: usize,
    tokens: &[Token<'_>],
    defined: &HashSet<String>,
) -> Result<Command> {
    let verb = tokens[0];
    let mut cur = Cursor {
        line,
        verb,
        tokens: &tokens[1..],
        pos: 0,
        defined,
    };
    let lower = verb.text.to_ascii_lowercase();
    let command = match lower.as_str() {
        "cube" => parse_primitive(&mut cur, Kind::Cube)?,
        "sphere" => parse_primitive(&mut cur, Kind::Sphere)?,
        "cylinder" => parse_primitive(&mut cur, Kind::Cylinder)?,
        "add" | "subtract" | "intersect" => {
            let op = match lower.as_str() {
                "add" => BooleanOp::Union,
                "subtract" => BooleanOp::Difference,
                _ => BooleanOp::Intersection,
            };
            let out = cur.new_name()?;
            let a = cur.existing_name()?;
            let b = cur.existing_name()?;
            Command::Boolean { op, out, a, b }
        }
        "resize" => Command::Resize {
            name: cur.existing_name()?,
            factors: cur.vec3()?,
        },
        "resize_to" => Command::ResizeTo {
            name: cur.existing_name()?,
            target: cur.vec3()?,
        },
        "dimension" => Command::Dimension {
            name: cur.existing_name()?,
        },
        "match" => {
            let name = cur.existing_name()?;
            let mut top = DEFAULT_TOP_K;
            if let Some(tok) = cur.peek() {
                if tok.text.eq_ignore_ascii_case("top") {
                    cur.pos += 1;
                    top = cur.count()?;
                }
            }
            Command::Match { name, top }
        }
        "export" => parse_export(&mut cur)?,
        v if INTERACTIVE_VERBS.contains(&v) => {
            return Err(Error::InteractiveOnly {
                line,
                verb: verb.text.to_string(),
            })
        }
        _ => return Err(cur.error(verb.column, format!("unknown verb `{}`", verb.text))),
    };
    cur.finish()?;
    Ok(command)
}

/// Parses a scene script. Every name must be defined by an earlier line.
pub fn parse_script(text: &str) -> Result<SceneScript> {
    let mut defined = HashSet::new();
    let mut statements = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let command = parse_statement(n + 1, &tokens, &defined)?;
        if let Some(name) = command.defines() {
            defined.insert(name.to_string());
        }
        statements.push(Statement {
            line: n + 1,
            command,
        });
    }
    Ok(SceneScript { statements })
}
