use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("no rings given")]
    Empty,
    #[error("ring {ring} has {count} vertices, at least 3 are required")]
    TooFewVertices { ring: usize, count: usize },
    #[error("ring {ring} has a non-finite coordinate")]
    NonFinite { ring: usize },
    #[error("ring {ring} repeats vertex {index} consecutively")]
    RepeatedVertex { ring: usize, index: usize },
    #[error("ring {ring} has a zero-area spike at vertex {index}")]
    Spike { ring: usize, index: usize },
    #[error("ring {ring} is self-intersecting (edges {} and {})", edges.0, edges.1)]
    SelfIntersecting { ring: usize, edges: (usize, usize) },
    #[error("ring {ring} crosses the outer boundary")]
    CrossesOuter { ring: usize },
    #[error("holes {a} and {b} overlap")]
    HolesOverlap { a: usize, b: usize },
    #[error("the environment interior is disconnected by touching boundaries")]
    Disconnected,
    #[error("invalid epsilon configuration: {0}")]
    BadEpsilon(String),
}
