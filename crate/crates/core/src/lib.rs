//! Energy-efficient power control for impulse-radio UWB uplinks.
//!
//! The crate is organised bottom-up:
//!
//! * [`channel`]: Rayleigh tapped-delay-line channels with an exponential
//!   averaged power delay profile.
//! * [`rake`]: partial/all-Rake MRC weights and the signal, self-interference
//!   and multiple-access gains that enter the SINR.
//! * [`game`]: the noncooperative utility-maximisation game and its Nash
//!   equilibrium.
//! * [`lsa`]: large-system closed forms for interference, equilibrium
//!   utility, minimum frame count and the PRake-versus-ARake loss.
//! * [`experiments`]: seeded Monte Carlo experiments producing plot-ready
//!   tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod experiments;
pub mod game;
pub mod lsa;
pub mod params;
pub mod rake;
pub mod roots;
pub mod units;

pub use error::{Error, Result};
pub use params::NetworkParams;
