//! Finite-dimensional general probabilistic theories (GPTs) with polytope state
//! spaces, and the quantities of the information-storability game built on them.
//!
//! The crate is organised bottom-up:
//!
//! * [`lp`] is a dense two-phase simplex kernel with Bland's rule. Every numerical
//!   quantity in the crate reduces to one or more calls into it.
//! * [`gpt`] holds the data model (state spaces, effects, measurements, ensembles),
//!   and [`rays`] enumerates the extreme rays of the positive dual cone.
//! * [`discrimination`], [`degradability`], [`storability`] and [`game`] compute
//!   encoding/decoding power, degradability verdicts, information storability and
//!   optimal game strategies.
//! * [`spaces`] is the catalog of constructible spaces plus closed-form qubit
//!   fixtures; [`doc`] and [`report`] are the JSON/CSV/SVG surfaces.

pub mod degradability;
pub mod discrimination;
pub mod doc;
pub mod error;
pub mod game;
pub mod gpt;
mod linalg;
pub mod lp;
pub mod rays;
pub mod report;
pub mod sample;
pub mod settings;
pub mod spaces;
pub mod storability;

pub use degradability::{DegradabilityVerdict, MeasurementVerdict, Precheck, StochasticMatrix};
pub use discrimination::DiscriminationResult;
pub use error::{Error, Result};
pub use game::{StrategyClass, StrategyReport, SweepRow, SweepTable};
pub use gpt::{Effect, Measurement, StateEnsemble, StateSpace, ValidationReport};
pub use rays::RaySet;
pub use settings::{Caps, IsAlgorithm, Settings, Tolerances};
pub use storability::{IsLevel, Prop5Certificate, StorabilityProfile};
