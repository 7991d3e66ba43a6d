//! Desk-scale laboratory for automorphism groups of subshifts.
//!
//! The crate is organised bottom-up:
//!
//! * [`shiftlang`]: finite presentations of one-dimensional subshifts and
//!   their languages, complexity functions and entropy estimates.
//! * [`blockcode`]: sliding block codes stored as explicit tables, with
//!   composition, powers, minimal range, inverse search and range profiles.
//! * [`spacetime`]: patches of the spacetime of an automorphism, rectangle
//!   complexity, the coding relation and low-complexity periodicity checks.
//! * [`grouplab`]: exactly evaluable groups (ℤᵈ, Heisenberg, BS(1,n)),
//!   Cayley-ball searches, distortion certificates and growth formulas.
//! * [`audit`]: cross-checks of the inequalities tying distortion, range,
//!   complexity and entropy together on measured data.
//!
//! Data-parallel inner loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and plain iterators otherwise.

pub mod audit;
pub mod blockcode;
pub mod error;
pub mod grouplab;
pub mod par;
pub mod shiftlang;
pub mod spacetime;
pub mod trend;

pub use error::{Error, Result};
