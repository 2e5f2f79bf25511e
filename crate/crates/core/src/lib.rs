//! Rate regions and capacity conditions for the Gaussian interference
//! channel (IC) and Z-interference channel (Z-IC) whose receivers see two
//! correlated additive states known noncausally at both transmitters.
//!
//! Every rate expression is evaluated exactly from covariances of a
//! [`GaussianScene`]: a set of named linear combinations over independent
//! Gaussian primitives. [`mc`] re-derives the same quantities from samples.

pub mod channel;
pub mod error;
pub mod gaussian;
pub mod mc;
pub mod report;
pub mod strong;
pub mod sweep;
pub mod very_strong;
pub mod weak;

pub use channel::{
    build_scene, classify, decompose, Channel, Direction, IcParams, Regime, RegimeKind, SceneVariant, StateDecomp,
};
pub use error::{Error, Result};
pub use gaussian::{Basis, BasisElement, GaussianScene, LogBase, RandVec};
pub use mc::{McQuery, McReport};
pub use report::{Condition, ConditionReport, RegionBounds, SumRatePoint};
pub use strong::{Segment, StrongScheme};
pub use sweep::{Axis, CheckKind, ParamSet, SweepCell, SweepGrid, SweepResult};
pub use very_strong::{VsIcCoefficients, VsZicCoefficients};
