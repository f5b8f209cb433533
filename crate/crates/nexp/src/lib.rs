//! Analysis and simulation of continued-fraction interval maps
//! `T(x) = N/x - d(x)` on `[alpha, alpha+1]` with a finite digit set.
//!
//! The crate is organized around the lifecycle of one `(N, alpha)` system:
//!
//! * [`numerics`] — exact quadratic irrationals ([`numerics::Surd`]) and
//!   configurable-precision reals ([`numerics::Real`]);
//! * [`map_core`] — the map, its digit function, orbits and expansions;
//! * [`arrangement`] — the cylinder decomposition of the interval, fixed
//!   points, discontinuity points and branch-number machinery;
//! * [`gap_analysis`] — the gap classifier, exact gap endpoints, two-cycle
//!   points, escape times and the linearized auxiliary map;
//! * [`simulate`] — seeded Monte-Carlo orbit simulation, empirical gap
//!   extraction, parameter scans and cobweb traces.

pub mod arrangement;
pub mod error;
pub(crate) mod fastfloat;
pub mod gap_analysis;
pub mod map_core;
pub mod numerics;
pub mod simulate;

pub use error::{Error, Result};
pub use map_core::Params;
pub use numerics::{parse_value, Precision, Real, Surd, Value};
