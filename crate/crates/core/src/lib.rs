//! Energy source selection game.
//!
//! A community of `N` consumers chooses, independently and once per day,
//! between competing for a limited pool of cheap local renewable energy
//! during the day (`RES`) or buying medium-priced base-load energy at night
//! (`nonRES`). Excess day demand is served by expensive peak generation and
//! the renewable pool is split proportionally to demand among competitors.
//!
//! The crate provides the pieces needed to study that game end to end:
//!
//! - [`model`] — game data types and the mean-field cost model;
//! - [`equilibrium`] — case classification and closed-form mixed/dominant
//!   Nash equilibria;
//! - [`central`] — the socially optimal dispatch and the price of anarchy;
//! - [`bestresponse`] — the distributed, uncoordinated best-response
//!   algorithm with stochastic capping;
//! - [`oracle`] — exact finite-population expected costs by enumeration,
//!   used to validate the mean-field approximation and dominance claims.
//!
//! All numeric code is generic over the scalar type through [`Scalar`]
//! (`f32` or `f64`); the `*64` aliases at the crate root pin `f64`, which is
//! the precision every stated tolerance assumes.

pub mod bestresponse;
pub mod central;
pub mod equilibrium;
pub mod error;
pub mod model;
pub mod oracle;
mod scalar;

pub use error::Error;
pub use scalar::Scalar;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub type PriceSchedule64 = model::PriceSchedule<f64>;
pub type ConsumerType64 = model::ConsumerType<f64>;
pub type GameInstance64 = model::GameInstance<f64>;
pub type StrategyProfile64 = model::StrategyProfile<f64>;
pub type SocialCostBreakdown64 = model::SocialCostBreakdown<f64>;
pub type EquilibriumReport64 = equilibrium::EquilibriumReport<f64>;
pub type PoAReport64 = central::PoAReport<f64>;
pub type AlgorithmConfig64 = bestresponse::AlgorithmConfig<f64>;
pub type AlgorithmTrace64 = bestresponse::AlgorithmTrace<f64>;
