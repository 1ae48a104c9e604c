//! Manifest-backed model database and top-k IoU retrieval.
//!
//! A manifest is a UTF-8 JSON object:
//!
//! ```json
//! { "resolution": 32,
//!   "models": [ { "model_id": "chair", "file": "chair.obj", "display_name": "Chair" } ] }
//! ```
//!
//! `file` is relative to the manifest. Canonical voxel grids are cached in
//! `.meshforge-cache/` beside the manifest, keyed by the SHA-256 of the mesh
//! file's bytes and the resolution.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::grid::{iou, voxelize, Frame, VoxelGrid, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};
use crate::io::{decode_mesh, MeshFormat};
use crate::mesh::Mesh;

pub const CACHE_DIR: &str = ".meshforge-cache";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    pub models: Vec<ManifestEntry>,
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub model_id: String,
    pub file: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display_name: Option<String>,
}

#[derive(Debug, Clone)]
pub struct DatabaseEntry {
    pub model_id: String,
    pub display_name: Option<String>,
    pub path: Option<PathBuf>,
    pub grid: VoxelGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub model_id: String,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct ModelDatabase {
    manifest_path: Option<PathBuf>,
    resolution: usize,
    entries: Vec<DatabaseEntry>,
}

impl ModelDatabase {
    /// Builds an in-memory database by voxelizing each mesh canonically.
    pub fn from_meshes<I, S>(resolution: usize, models: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Mesh)>,
        S: Into<String>,
    {
        let mut entries = Vec::new();
        for (id, mesh) in models {
            let model_id = id.into();
            let grid = voxelize(&mesh, resolution, Frame::Canonical)
                .map_err(|e| Error::Database(format!("model `{model_id}`: {e}")))?;
            entries.push(DatabaseEntry {
                model_id,
                display_name: None,
                path: None,
                grid,
            });
        }
        Self::from_entries(None, resolution, entries)
    }

    fn from_entries(
        manifest_path: Option<PathBuf>,
        resolution: usize,
        entries: Vec<DatabaseEntry>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.model_id.as_str()) {
                return Err(Error::Database(format!(
                    "duplicate model_id `{}`",
                    e.model_id
                )));
            }
        }
        Ok(Self {
            manifest_path,
            resolution,
            entries,
        })
    }

    pub fn load(manifest_path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(manifest_path)
            .map_err(|e| Error::from(e).in_file(manifest_path))?;
        let manifest: Manifest = serde_json::from_str(&text)
            .map_err(|e| Error::Database(format!("{}: {e}", manifest_path.display())))?;
        let base = manifest_path.parent().unwrap_or(Path::new("."));
        let cache_dir = base.join(CACHE_DIR);
        let mut entries = Vec::with_capacity(manifest.models.len());
        for m in &manifest.models {
            let path = base.join(&m.file);
            let grid = load_grid(&path, manifest.resolution, &cache_dir)
                .map_err(|e| Error::Database(format!("model `{}`: {e}", m.model_id)))?;
            entries.push(DatabaseEntry {
                model_id: m.model_id.clone(),
                display_name: m.display_name.clone(),
                path: Some(path),
                grid,
            });
        }
        Self::from_entries(
            Some(manifest_path.to_path_buf()),
            manifest.resolution,
            entries,
        )
    }

    pub fn manifest_path(&self) -> Option<&Path> {
        self.manifest_path.as_deref()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn entries(&self) -> &[DatabaseEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads the cached canonical grid for `path`, voxelizing and caching it on
/// a miss. Cache writes are best effort.
fn load_grid(path: &Path, resolution: usize, cache_dir: &Path) -> Result<VoxelGrid> {
    let bytes = std::fs::read(path).map_err(|e| Error::from(e).in_file(path))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let cache_file = cache_dir.join(format!("{digest}-r{resolution}.vox"));
    if let Ok(text) = std::fs::read_to_string(&cache_file) {
        if let Ok(grid) = VoxelGrid::parse_vox(&text) {
            if grid.dims() == [resolution; 3] {
                return Ok(grid);
            }
        }
    }
    let mesh = decode_mesh(&bytes, MeshFormat::from_path(path)?).map_err(|e| e.in_file(path))?;
    let grid = voxelize(&mesh, resolution, Frame::Canonical)?;
    if std::fs::create_dir_all(cache_dir).is_ok() {
        let _ = std::fs::write(&cache_file, grid.to_vox_string());
    }
    Ok(grid)
}

/// Ranks database models by canonical-frame IoU against `query`.
/// Ties are broken by ascending model id.
pub fn best_match(query: &Mesh, db: &ModelDatabase, k: usize) -> Result<Vec<MatchResult>> {
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let q = voxelize(query, db.resolution, Frame::Canonical)?;
    let mut results = db
        .entries
        .iter()
        .map(|e| {
            Ok(MatchResult {
                model_id: e.model_id.clone(),
                score: iou(&q, &e.grid)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.model_id.cmp(&b.model_id))
    });
    results.truncate(k);
    Ok(results)
}

/// Tab-separated ranking: `rank`, `model_id`, score with six decimals.
pub fn format_matches(results: &[MatchResult]) -> String {
    results
        .iter()
        .enumerate()
        .map(|(i, r)| format!("{}\t{}\t{:.6}\n", i + 1, r.model_id, r.score))
        .collect()
}
