//! File formats and rendering.

pub mod map;
pub mod querysets;
pub mod svg;

pub use map::{format_map, load_map, load_points, parse_map, parse_points, save_map, MapError};
pub use querysets::{load_query_sets, save_query_sets, SetError};
pub use svg::{render_svg, Overlay};
