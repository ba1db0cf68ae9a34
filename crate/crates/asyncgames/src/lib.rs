//! A simulation laboratory for asynchronous games with mediators.
//!
//! The crate models finite Bayesian games extended with asynchronous
//! message passing, adversarial schedulers, and optional trusted
//! mediators. On top of the execution engine it provides:
//!
//! * exhaustive and statistical checkers for resilience, immunity,
//!   robustness, punishment, and scheduler-proofness of strategy
//!   profiles ([`concepts`]);
//! * checkers for game-to-game relations: implementation, bisimulation,
//!   emulation, and cotermination ([`relations`]);
//! * the minimally informative mediator transform ([`mediator`]);
//! * a secret-sharing-based compiler from mediator games to cheap-talk
//!   protocols ([`cheaptalk`]);
//! * colluding adversaries and the covert channels that justify them
//!   ([`adversary`]).
//!
//! All equilibrium verdicts are computed in exact rational arithmetic;
//! floating point is confined to Monte-Carlo statistics. Every verdict
//! is menu-relative: checkers quantify over finite strategy and
//! scheduler menus and report the caps they searched.

pub mod adversary;
pub mod cheaptalk;
pub mod concepts;
pub mod engine;
pub mod fixtures;
pub mod game;
pub mod guide;
pub mod mediator;
pub mod rational;
pub mod relations;

pub use game::{ActionIx, ActionProfile, PlayedAction, TypeIx, UnderlyingGame, UtilityVariant};
pub use rational::Q;
