//! Piecewise affine contractions of the real line and contracted circle maps.
//!
//! * [`maps`]: affine contractions, iterated function systems and the
//!   piecewise maps `f_{Φ,a}` built from them.
//! * [`symbolic`]: preimage layers, regular cells, itineraries, singular
//!   connections and itinerary growth.
//! * [`covers`]: interval covers of the accumulation set of centers and
//!   finiteness certificates for shifted breakpoints.
//! * [`scanner`]: orbit classification, circle-map reduction, parameter
//!   scans with box counting, and periodic-orbit censuses.
//!
//! Everything is generic over [`Scalar`], implemented for exact rationals
//! ([`Rational`]) and `f64`.

pub mod covers;
pub mod error;
pub mod maps;
pub mod scalar;
pub mod scanner;
pub mod symbolic;

pub use error::{Error, Result};
pub use maps::{AffineContraction, Breakpoints, Ifs, Interval, ItineraryWord, PiecewiseContraction};
pub use scalar::{Backend, Rational, Scalar, DEFAULT_TOLERANCE};
