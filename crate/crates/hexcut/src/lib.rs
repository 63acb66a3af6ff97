//! Exact determinantal analysis of lozenge tilings of hexagons with cuts on two
//! opposite edges.

pub mod enumeration;
pub mod error;
pub mod geometry;
pub mod kernel_q;
pub mod kernel_red;
pub mod lkernel;
pub mod linalg;
pub mod num;
pub mod poly;
pub mod render;
pub mod residue;
pub mod sampler;
pub mod selfcheck;
pub mod symfunc;
pub mod tacnode;

pub use error::{Error, Result};
pub use num::Q;
