//! Excursion theory for the Wright–Fisher diffusion with two regular boundaries.
//!
//! The crate is organised bottom-up: [`hyperfun`] provides Gamma and `₂F₁`;
//! [`wfmodel`] the diffusion primitives; [`hitting`], [`greens`] and
//! [`excursions`] the analytic transforms; [`laplinv`] numerical Laplace
//! inversion; and [`simulate`] an exact Monte Carlo engine used as an oracle.

pub mod error;
pub mod excursions;
pub mod greens;
pub mod hitting;
pub mod hyperfun;
pub mod laplinv;
pub mod quadrature;
pub mod simulate;
pub mod wfmodel;

pub use error::{Error, Result};
