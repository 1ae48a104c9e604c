//! Line-oriented scene scripts that replay a construction session.
//!
//! One command per line; `#` starts a comment. Verbs are case-insensitive,
//! object names are not. Angles are in degrees, lengths in meters.
//!
//! ```text
//! cube NAME [pos X Y Z] [rot X Y Z] [scale X Y Z]
//! sphere NAME [pos ..] [rot ..] [scale ..] [stacks N] [sectors N]
//! cylinder NAME [pos ..] [rot ..] [scale ..] [sectors N]
//! add|subtract|intersect OUT A B
//! resize NAME FX FY FZ
//! resize_to NAME W H D
//! dimension NAME
//! match NAME [top K]
//! export NAME PATH.obj|PATH.stl [ascii]
//! ```
//!
//! `select`, `sync`, `capture` and `print` are rejected as interactive-only.

mod exec;
mod parse;

pub use exec::{execute, format_dimensions, run_script, Export, RunReport};
pub use parse::{parse_script, Command, SceneScript, Statement, DEFAULT_TOP_K};

/// Scenes shipped with the library.
pub mod scenes {
    pub const CHAIR: &str = include_str!("../../assets/scenes/chair.scene");
    pub const SUBTRACT: &str = include_str!("../../assets/scenes/subtract.scene");
    pub const RING: &str = include_str!("../../assets/scenes/ring.scene");
}
