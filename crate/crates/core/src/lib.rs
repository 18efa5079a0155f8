//! Matroids represented by matrices over small finite fields.
//!
//! - [`gf`]: arithmetic in GF(p^k)
//! - [`gfmatrix`]: matrices, row reduction and standard forms
//! - [`matroid`]: rank, girth, duality, minors, simplification, isomorphism
//! - [`setsystem`]: the set system of a standard form, traces and packings
//! - [`pipeline`]: short circuits relative to a basis and the minor/girth
//!   dichotomy report
//! - [`generators`]: graphic, uniform, projective and random matroids
//! - [`format`]: `.gfm` and graph text formats
//! - [`cli`]: the batch runner used by the binary

pub mod cli;
pub mod format;
pub mod generators;
pub mod gf;
pub mod gfmatrix;
pub mod matroid;
pub mod pipeline;
pub mod setsystem;

pub use gf::{FieldElem, FieldSpec};
pub use gfmatrix::GFMatrix;
pub use matroid::{Circuit, Girth, RepMatroid};
