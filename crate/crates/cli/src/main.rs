use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use meshforge::io::{load_mesh, save_mesh, MeshFormat, StlMode};
use meshforge::mesh::{bounding_dimensions, resize_to};
use meshforge::primitives::{
    PrimitiveSpec, DEFAULT_CYLINDER_SECTORS, DEFAULT_SECTORS, DEFAULT_STACKS,
};
use meshforge::script::{execute, parse_script};
use meshforge::topology::validate_printable;
use meshforge::voxel::{
    best_match, format_matches, iou, voxelize, Frame, ModelDatabase, VoxelGrid,
};
use meshforge::{Error, Mesh, Result};

#[derive(Parser)]
#[command(
    name = "meshforge",
    version,
    about = "Solid modeling pipeline for additive manufacturing"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scene script and write its exports
    Build {
        script: PathBuf,
        /// Model database manifest, needed when the script uses `match`
        #[arg(long, env = "MESHFORGE_DB")]
        db: Option<PathBuf>,
        /// Directory that relative export paths resolve against
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Convert between OBJ and STL (format chosen by extension)
    Convert {
        input: PathBuf,
        output: PathBuf,
        /// Write ASCII instead of binary STL
        #[arg(long)]
        ascii: bool,
    },
    /// Print bounding-box width, height and depth in meters
    Dims { mesh: PathBuf },
    /// Scale a mesh so its bounding box has the given dimensions
    Resize {
        mesh: PathBuf,
        #[arg(long, num_args = 3, value_names = ["W", "H", "D"], required = true, allow_negative_numbers = true)]
        to: Vec<f64>,
        output: PathBuf,
        #[arg(long)]
        ascii: bool,
    },
    /// Voxelize a closed mesh in the canonical frame
    Voxelize {
        mesh: PathBuf,
        #[arg(long, default_value_t = meshforge::voxel::DEFAULT_RESOLUTION)]
        res: usize,
        output: PathBuf,
    },
    /// Intersection over union of two voxel grids
    Iou { a: PathBuf, b: PathBuf },
    /// Rank database models by voxel IoU against a mesh
    Match {
        mesh: PathBuf,
        #[arg(long, env = "MESHFORGE_DB")]
        db: PathBuf,
        #[arg(long, default_value_t = meshforge::script::DEFAULT_TOP_K)]
        top: usize,
    },
    /// Check watertightness, manifoldness, winding and genus
    Validate { mesh: PathBuf },
    /// Write a unit primitive
    Primitive {
        kind: Kind,
        /// Tessellation: STACKS,SECTORS for a sphere, SECTORS for a cylinder
        #[arg(long, value_delimiter = ',', value_name = "N[,N]")]
        tess: Vec<usize>,
        output: PathBuf,
        #[arg(long)]
        ascii: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cube,
    Sphere,
    Cylinder,
}

/// Domain failure: an error, or a completed check that did not pass.
enum Failure {
    Error(Error),
    Rejected,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn output_format(path: &Path, ascii: bool) -> Result<MeshFormat> {
    Ok(match MeshFormat::from_path(path)? {
        MeshFormat::Stl(_) if ascii => MeshFormat::Stl(StlMode::Ascii),
        f => f,
    })
}

fn read_vox(path: &Path) -> Result<VoxelGrid> {
    let text = std::fs::read_to_string(path).map_err(|e| file_error(path, e.into()))?;
    VoxelGrid::parse_vox(&text).map_err(|e| file_error(path, e))
}

fn file_error(path: &Path, e: Error) -> Error {
    Error::File {
        path: path.to_path_buf(),
        source: Box::new(e),
    }
}

fn primitive_spec(kind: Kind, tess: &[usize]) -> Result<PrimitiveSpec> {
    let bad = |expected: &str| {
        Err(Error::InvalidArgument(format!(
            "--tess for this primitive takes {expected}, got {} value(s)",
            tess.len()
        )))
    };
    match (kind, tess) {
        (Kind::Cube, []) => Ok(PrimitiveSpec::Cuboid),
        (Kind::Cube, _) => bad("no values"),
        (Kind::Sphere, []) => Ok(PrimitiveSpec::Ellipsoid {
            stacks: DEFAULT_STACKS,
            sectors: DEFAULT_SECTORS,
        }),
        (Kind::Sphere, [stacks, sectors]) => Ok(PrimitiveSpec::Ellipsoid {
            stacks: *stacks,
            sectors: *sectors,
        }),
        (Kind::Sphere, _) => bad("STACKS,SECTORS"),
        (Kind::Cylinder, []) => Ok(PrimitiveSpec::Cylinder {
            sectors: DEFAULT_CYLINDER_SECTORS,
        }),
        (Kind::Cylinder, [sectors]) => Ok(PrimitiveSpec::Cylinder { sectors: *sectors }),
        (Kind::Cylinder, _) => bad("SECTORS"),
    }
}

fn write_mesh(path: &Path, mesh: &Mesh, ascii: bool) -> Result<()> {
    save_mesh(path, mesh, output_format(path, ascii)?)
}

fn run(cmd: Cmd) -> std::result::Result<(), Failure> {
    match cmd {
        Cmd::Build { script, db, out } => {
            let text =
                std::fs::read_to_string(&script).map_err(|e| file_error(&script, e.into()))?;
            let parsed = parse_script(&text).map_err(|e| file_error(&script, e))?;
            let db = match db {
                Some(path) if parsed.uses_match() => Some(ModelDatabase::load(&path)?),
                _ => None,
            };
            let report = execute(&parsed, db.as_ref()).map_err(|e| file_error(&script, e))?;
            report.write_exports(&out)?;
            print!("{}", report.text());
        }
        Cmd::Convert {
            input,
            output,
            ascii,
        } => {
            let mesh = load_mesh(&input)?;
            write_mesh(&output, &mesh, ascii)?;
        }
        Cmd::Dims { mesh } => {
            let (d, _) = bounding_dimensions(&load_mesh(&mesh)?)?;
            println!("{:.6} {:.6} {:.6}", d.x, d.y, d.z);
        }
        Cmd::Resize {
            mesh,
            to,
            output,
            ascii,
        } => {
            let resized = resize_to(&load_mesh(&mesh)?, [to[0], to[1], to[2]])?;
            write_mesh(&output, &resized, ascii)?;
        }
        Cmd::Voxelize { mesh, res, output } => {
            let grid = voxelize(&load_mesh(&mesh)?, res, Frame::Canonical)?;
            std::fs::write(&output, grid.to_vox_string())
                .map_err(|e| file_error(&output, e.into()))?;
            println!("occupied: {}/{}", grid.occupied_count(), grid.len());
        }
        Cmd::Iou { a, b } => {
            println!("{:.6}", iou(&read_vox(&a)?, &read_vox(&b)?)?);
        }
        Cmd::Match { mesh, db, top } => {
            let db = ModelDatabase::load(&db)?;
            print!(
                "{}",
                format_matches(&best_match(&load_mesh(&mesh)?, &db, top)?)
            );
        }
        Cmd::Validate { mesh } => {
            let report = validate_printable(&load_mesh(&mesh)?);
            println!("{report}");
            if !report.is_printable() {
                return Err(Failure::Rejected);
            }
        }
        Cmd::Primitive {
            kind,
            tess,
            output,
            ascii,
        } => {
            let mesh = primitive_spec(kind, &tess)?.build()?;
            write_mesh(&output, &mesh, ascii)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
