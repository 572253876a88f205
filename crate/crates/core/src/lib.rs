//! Arithmetic, geometry and automorphisms of the maximal function fields
//! F_i : y^{q+1} = x^{2i}(x² + 1) over F_{q²}.

pub mod arith;
pub mod curve;
pub mod error;
pub mod gaps;
pub mod gf;
pub mod iso;
pub mod lattice;
pub mod maps;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
