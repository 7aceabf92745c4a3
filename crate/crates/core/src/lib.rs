pub mod classify;
pub mod covers;
pub mod group;
pub mod homology;
pub mod linalg;
pub mod lines;
pub mod model;
pub mod rational;
pub mod report;
