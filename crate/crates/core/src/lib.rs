pub mod graph;
pub mod homology;
pub mod census;
pub mod cli;
pub mod envelope;
pub mod linalg;
pub mod operad;
pub mod structured;
