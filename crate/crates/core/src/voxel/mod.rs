//! Voxelization, 3D intersection-over-union and best-match retrieval.

mod database;
mod grid;

pub use database::{
    best_match, format_matches, DatabaseEntry, Manifest, ManifestEntry, MatchResult, ModelDatabase,
    CACHE_DIR,
};
pub use grid::{
    iou, voxelize, Frame, VoxelGrid, CANONICAL_FILL, DEFAULT_RESOLUTION, MIN_RESOLUTION,
};
