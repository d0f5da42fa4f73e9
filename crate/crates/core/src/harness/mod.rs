//! Query-set generation, behaviour classification and benchmarking.

pub mod area;
pub mod bench;
pub mod classify;
pub mod mapgen;
pub mod querysets;
pub mod rng;

pub use area::{boolean_area, xor_area, xor_area_same};
pub use bench::{run_bench, BehaviorRecord, BenchConfig, EngineImpl, OracleImpl, RegionImpl};
pub use classify::{classify, detect_weakly_simple, Behavior, ClassifyContext};
pub use mapgen::{random_map, MapParams};
pub use querysets::{generate_query_sets, QueryKind, QueryPointSet};
