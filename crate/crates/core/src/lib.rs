//! Closed-form metrology of Holevo-Werner and depolarizing channels.
//!
//! Two Werner states of the same dimension commute, so fidelity, relative
//! entropy, the quantum Chernoff bound, the quantum Fisher information and
//! the multi-copy discrimination bounds all reduce to two-outcome formulas
//! in the Werner parameter `η`. [`analytic`], [`metrology`] and
//! [`discrimination`] implement those formulas. [`linalg`], [`states`],
//! [`channels`] and [`telesim`] rebuild the same quantities from explicit
//! matrices, and [`verify`] compares the two sides.
//!
//! ```
//! use wernerlab::analytic::{fidelity_werner, qcb_werner};
//! use wernerlab::linalg::bures_fidelity_numeric;
//! use wernerlab::states::{werner_state, WernerParams};
//!
//! let exact = fidelity_werner(0.5, -0.25)?;
//! let a = werner_state(WernerParams::new(0.5, 3)?)?;
//! let b = werner_state(WernerParams::new(-0.25, 3)?)?;
//! assert!((bures_fidelity_numeric(&a, &b)? - exact).abs() < 1e-9);
//! assert!(qcb_werner(0.5, -0.25)?.q <= exact);
//! # Ok::<(), wernerlab::Error>(())
//! ```
//!
//! The guide in `book/` covers the physics and the command line; its code
//! blocks run as doctests of this crate.

pub mod analytic;
pub mod channels;
pub mod cli;
pub mod discrimination;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod metrology;
pub mod optimize;
pub mod output;
pub mod random;
pub mod states;
pub mod telesim;
pub mod verify;

pub use error::{Error, Result};

// Book chapters compiled as doctests so their snippets track the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/teleportation.md")]
    mod teleportation {}
    #[doc = include_str!("../../../book/src/estimation.md")]
    mod estimation {}
    #[doc = include_str!("../../../book/src/chernoff.md")]
    mod chernoff {}
    #[doc = include_str!("../../../book/src/discrimination.md")]
    mod discrimination {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
