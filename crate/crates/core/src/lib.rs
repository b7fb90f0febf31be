//! Extraction of explicit geometry and topology from 3D volume segmentations.
//!
//! A segmented volume stores one segment label per voxel. This crate makes
//! the implied structure explicit: segments, the faces between adjacent
//! segments, the curves in which faces meet, and the junction points between
//! curves, each as labeled cell sets on a topological grid, together with
//! the bounding relations between them. Volumes are processed in independent
//! overlapping blocks with bounded memory and optional parallelism; block
//! results are reconciled into a labeling equivalent to whole-volume
//! processing and persisted in a constant-time-queryable on-disk store.

pub mod blockwise;
pub mod error;
pub mod fixtures;
pub mod labeling;
pub mod source;
pub mod store;
pub mod topogrid;
pub mod verify;

pub mod cli;

pub use error::{Error, Result};
