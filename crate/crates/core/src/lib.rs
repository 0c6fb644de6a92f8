//! Exact computations on Du Val del Pezzo surfaces over small finite fields.

pub mod catalog;
pub mod cli;
pub mod duval;
pub mod error;
pub mod exactalg;
pub mod fsplit;
pub mod pencil;
pub mod wvariety;

pub use error::{Error, Result};

/// The guide's chapters, compiled as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/fields.md")]
    pub struct Fields;
    #[doc = include_str!("../../../book/src/surfaces.md")]
    pub struct Surfaces;
    #[doc = include_str!("../../../book/src/singular.md")]
    pub struct Singular;
    #[doc = include_str!("../../../book/src/duval.md")]
    pub struct Duval;
    #[doc = include_str!("../../../book/src/fedder.md")]
    pub struct Fedder;
    #[doc = include_str!("../../../book/src/pencil.md")]
    pub struct Pencil;
    #[doc = include_str!("../../../book/src/catalog.md")]
    pub struct Catalog;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
