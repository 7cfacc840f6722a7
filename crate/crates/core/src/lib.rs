pub mod bounds;
pub mod canon;
pub mod cli;
pub mod corpus;
pub mod embed;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod numeric;
pub mod process;
pub mod record;
pub mod rng;
pub mod stats;
pub mod switch;
pub mod unique;
