//! Exact tensor calculus on frame-presented manifolds with constant structure
//! coefficients, specialised to Lorentzian para-Sasakian structures, the
//! two-parameter general connection family and generalized eta-Ricci
//! solitons.
//!
//! All arithmetic is over arbitrary-precision rationals; nothing is rounded.

// Index loops mirror the component formulas.
#![allow(clippy::needless_range_loop)]

pub mod exact;
pub mod fixture;
pub mod frame;
pub mod paracontact;
pub mod report;
pub mod soliton;
pub mod spec_file;
