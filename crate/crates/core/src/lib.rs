pub mod baselines;
pub mod error;
pub mod eval;
pub mod graph;
pub mod grasp;
pub mod greedy;
pub mod result;
pub mod rng;
pub mod spectral;
pub mod synth;
