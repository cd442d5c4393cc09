//! Exact-arithmetic toolkit for deciding and certifying dual integrality
//! properties of integer linear systems `Mx <= b`.
//!
//! Everything here computes over arbitrary-precision rationals; no floating
//! point is used anywhere. The crate is organized bottom-up:
//!
//! - [`arith`], [`lspec`]: scalars, prime sets, denominator domains.
//! - [`matrix`], [`normal_form`], [`diophantine`]: integer matrices, Smith and
//!   Hermite forms, lattice solving over `Z` and over restricted-denominator
//!   domains.
//! - [`cone`]: generating-set tests for lattices and cones (GSS / GSC).
//! - [`polyhedron`], [`lp`], [`lattice`]: faces, affine hulls, an exact
//!   rational simplex with Bland's rule, and integer point enumeration.
//! - [`tilt`]: tilt constraints, braces, resiliency profiles.
//! - [`analyzer`]: the certification entry points (TDI, near-TDI, TDD,
//!   TD in a restricted-denominator domain) and budgeted weight scans.
//! - [`clutter`]: clutters, blockers, covering systems, and the specialized
//!   dyadic verification pipeline.
//!
//! Scans are data-parallel when the `parallel` feature is enabled (the
//! default) and fall back to a sequential implementation otherwise; reported
//! witnesses are the lexicographically smallest in either mode.

// Row/column arithmetic below indexes several arrays in lockstep; indexed
// loops read better there than zipped iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod analyzer;
pub mod arith;
pub mod clutter;
pub mod cone;
pub mod diophantine;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod lspec;
pub mod matrix;
pub mod normal_form;
pub mod polyhedron;
pub mod report;
pub mod scan;
pub mod tilt;

pub use arith::{Int, Rat};
pub use error::Error;
pub use lspec::LSpec;
pub use matrix::IntMat;
pub use polyhedron::{AffineSubspace, Face, LinearSystem};
