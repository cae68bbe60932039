pub mod coord;
pub mod lattice;
pub mod ring;
pub mod staged;
