//! Fermat-spiral yin-yang curves.
//!
//! The crate works on the unit-area disk through the measure-preserving map
//! `(r, φ) ↦ (φ/2π, πr²)` onto the cylinder `S¹ × (0, 1]`. On the cylinder a
//! spiral branch is the graph of a monotone profile `v = α(u)`, the regions it
//! bounds have arc-shaped sections, and symmetric-subset measures reduce to
//! exact arc arithmetic on the circle.
//!
//! Modules:
//! - [`geometry`]: disk/cylinder coordinates and the symmetry actions.
//! - [`circle_set`]: finite unions of arcs, reflection overlaps and their
//!   exact piecewise-linear profile.
//! - [`curves`]: curve families as alpha profiles, sections and sampling.
//! - [`verify`]: axiom checks, relation residuals and the Monte-Carlo oracle.
//! - [`render`]: SVG output following the MetaPost generator.
//! - [`cli`]: the `yy` command line.

pub mod circle_set;
pub mod cli;
pub mod curves;
mod error;
pub mod geometry;
pub mod quadrature;
pub mod render;
pub mod verify;

pub use circle_set::{Arc, CircleSet, OverlapProfile};
pub use curves::{AlphaProfile, CurveSpec, Family};
pub use error::{Error, Result};
pub use geometry::{CirclePoint, CylinderPoint, DiskPoint};
pub use render::{RenderConfig, SvgDocument};
pub use verify::{OracleEstimate, VerifyOptions, VerifyReport};
