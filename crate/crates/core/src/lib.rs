pub mod cli;
pub mod components;
pub mod lifting;
pub mod linalg;
pub mod paths;
pub mod sampling;
pub mod spectral;
pub mod tolerances;
