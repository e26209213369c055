//! Totally skew embeddings: constructions, certification of total skewness
//! through the affine-to-linear lift, dimension bounds, and margin search.
//!
//! A submanifold of R^N is totally skew when the tangent lines at any two
//! distinct points are skew: neither parallel nor intersecting. The building
//! block is [`affine::are_skew`], which lifts affine subspaces to linear
//! subspaces of R^{N+1} and measures how far they are from meeting.

pub mod affine;
pub mod bilinear;
pub mod bounds;
pub mod cli;
pub mod embeddings;
mod error;
pub mod linalg;
mod optim;
pub mod sampling;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
