//! Visibility queries in 2D polygonal environments with holes.
//!
//! The environment is triangulated once (constrained Delaunay, no Steiner
//! points) and indexed by a uniform bucket grid. Queries locate the query
//! point, then run the triangular expansion algorithm over the mesh.

pub mod cli;
pub mod engine;
pub mod geom;
pub mod graph;
pub mod harness;
pub mod io;
pub mod locate;
pub mod mesh;
pub mod oracle;
pub mod vis;

pub use engine::{EngineConfig, EngineError, RegionResult, VisEngine};
pub use geom::{DirVector, EpsilonConfig, Point, PolygonalEnvironment, Ring};
