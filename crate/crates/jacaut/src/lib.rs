//! Endomorphism lattices, principal polarizations and symplectic
//! automorphism groups of complex tori given by period matrices.

pub mod error;
pub mod catalog;
pub mod cyclic_cover;
pub mod exact_linalg;
pub mod group_id;
pub mod io;
pub mod pipeline;
pub mod polarization;
pub mod symplectic_aut;
pub mod torus;

pub use error::{Error, Result};
