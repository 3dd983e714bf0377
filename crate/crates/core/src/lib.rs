//! Strongly involutive self-dual planar maps and Reuleaux polyhedra.
//!
//! The pipeline enumerates 3-connected planar maps with `n` vertices and
//! `2n - 2` edges, keeps those admitting a strongly involutive self-duality,
//! 4-colours their diameter graphs by repeated remove-contract reductions and
//! searches for metric embeddings in R³ whose unit balls intersect in a
//! Reuleaux polyhedron.

pub mod canon;
pub mod cli;
pub mod codec;
pub mod coloring;
pub mod embedder;
pub mod families;
pub mod generator;
pub mod planar_map;
pub mod pipeline;
pub mod planarity;
pub mod scad;
pub mod selfdual;

pub use planar_map::{Face, MapError, PlanarMap};
pub use selfdual::{DiameterGraph, SelfDualIso};
