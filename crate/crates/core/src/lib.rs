//! Exact computations on del Pezzo surfaces.
//!
//! ```
//! use delpezzo::{positivity, DelPezzoSurface};
//!
//! let s1: DelPezzoSurface = "S1".parse()?;
//! let beta = s1.parse_class("5,-2")?;
//! let report = positivity::codim_nonintegral(&s1, &beta)?;
//! assert_eq!(report.exact_codim, Some(3));
//! # Ok::<(), delpezzo::Error>(())
//! ```

pub mod bps;
pub mod error;
pub mod hilbert;
pub mod lattice;
pub mod linalg;
pub mod picard;
pub mod poly;
pub mod positivity;
pub mod sampling;
pub(crate) mod rational_serde;
pub mod series;

pub use error::{Error, Result};
pub use lattice::{DelPezzoSurface, DivisorClass, SurfaceKind};
