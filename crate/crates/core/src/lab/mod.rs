//! Experiments around partition and density regularity: colorings, dense
//! sets, syndetic and Bohr sets, the `W`-trick and the operator `Psi`.

pub mod bohr;
pub mod coloring;
pub mod density;
pub mod psi;
pub mod syndetic;
pub mod wtrick;
