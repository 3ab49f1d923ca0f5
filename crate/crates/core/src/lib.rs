//! Probabilistic frames on ℝⁿ, represented as finitely supported probability
//! measures.
//!
//! - [`measure`]: discrete measures, pushforwards, mixtures, products.
//! - [`frame`]: frame operator, optimal bounds, canonical dual, completion of
//!   Bessel measures to tight frames, frame potential.
//! - [`duality`]: dual frames certified by transport couplings, the `ψ_h`
//!   parametrization of pushforward duals, trace identities, perturbation.
//! - [`potential`]: dual frame potentials and their sharp lower bounds.
//! - [`transport`]: exact p-Wasserstein distances and the hyperplane
//!   projection identity.
//! - [`lp`]: the two-phase simplex solver behind `duality` and `transport`.
//!
//! ```
//! use probframe::{frame, potential, DiscreteMeasure};
//!
//! let h = 3f64.sqrt() / 2.0;
//! let mercedes =
//!     DiscreteMeasure::uniform(2, vec![vec![0.0, 1.0], vec![-h, -0.5], vec![h, -0.5]]).unwrap();
//! assert!(frame::frame_bounds(&mercedes).unwrap().tight);
//!
//! let (_, dual) = frame::canonical_dual(&mercedes).unwrap();
//! let report = potential::pdfp(&mercedes, &dual).unwrap();
//! assert!((report.value - 2.0).abs() < 1e-12 && report.equality_case);
//! ```

// `!(p >= 1.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod duality;
pub mod error;
pub mod frame;
pub mod linalg;
pub mod lp;
pub mod map;
pub mod measure;
pub mod potential;
pub mod transport;

pub use coupling::Coupling;
pub use error::{FrameError, Result};
pub use frame::FrameBounds;
pub use linalg::{Matrix, SymMatrix};
pub use map::AtomMap;
pub use measure::DiscreteMeasure;
