pub mod cli;
pub mod cobordism;
pub mod configuration;
pub mod dual_graph;
pub mod enumeration;
pub mod error;
pub mod homology;
pub mod multicurve;
pub mod overlay;
pub mod rational;
pub mod surface;
pub mod surgery;

pub(crate) mod arrangement;
