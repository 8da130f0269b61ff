pub mod config;
pub mod emit;
pub mod slln;
pub mod sweep;
pub mod tree_oracle;
