pub mod cli;
pub mod constructions;
pub mod formula;
pub mod graph;
pub mod knapsack;
pub mod oracle;
pub mod search;
pub mod symmetry;
pub mod tables;
