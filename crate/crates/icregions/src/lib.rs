//! Rate regions for the two-sender, two-receiver discrete interference
//! channel, with and without entanglement shared between the transmitters.
//!
//! The crate models finite channels and encoder strategies explicitly, then
//! evaluates inner and outer bounds on the achievable rate pairs:
//!
//! * [`prob`] — dense finite-alphabet distributions and exact information
//!   measures;
//! * [`quantum`] — complex matrices, states, measurements, and purification;
//! * [`game`] — the 3×3 magic square game, classical and entangled strategies;
//! * [`channel`] — two-user channels and (entangled) encoder specifications,
//!   including the game-based channel where entanglement beats every
//!   classical code;
//! * [`regions`] — two-dimensional rate regions: superposition-coding inner
//!   bounds and genie-style outer bounds;
//! * [`fm`] — exact rational Fourier–Motzkin elimination for rate-split
//!   inequality systems;
//! * [`sim`] — Monte-Carlo encoding/decoding over random codebooks with
//!   typicality decoding.

pub mod channel;
pub mod error;
pub mod fm;
pub mod game;
pub mod prob;
pub mod quantum;
pub mod regions;
pub mod sim;

pub use error::{Error, Result};
