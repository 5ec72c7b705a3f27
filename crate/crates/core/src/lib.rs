//! Computations with right-angled Artin groups A_Γ: graph classification,
//! normal forms, Laurence-Servatius automorphisms, the Out(A_Γ) model for
//! focused graphs with its centralizer algebra, and the Aut(A_Γ) model for
//! austere graphs.

pub mod atlas;
pub mod austere;
pub mod autos;
pub mod error;
pub mod focused;
pub mod graph;
pub mod matalg;
pub mod matrix;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use graph::{GraphRef, SimplicialGraph, VertexSet};
pub use autos::RaagAutomorphism;
pub use matrix::IntMatrix;
pub use words::{GroupWord, Letter};
