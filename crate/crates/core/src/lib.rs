pub mod charts;
pub mod cli;
pub mod figure;
pub mod lattice;
pub mod lp;
pub mod moment;
pub mod polytope;
pub mod report;
pub mod scene;
pub mod smoothness;
pub mod subtorus;
