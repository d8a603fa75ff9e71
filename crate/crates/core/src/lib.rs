//! Dispersion of point sets in the unit cube: exact and estimated largest
//! empty axis-parallel boxes, the test-box family for lower bounds,
//! cover-free families, and point generators.
//!
//! The core is generic over [`Scalar`]; the aliases below fix the common
//! instantiations.

pub mod combinatorics;
pub mod construction;
pub mod coverfree;
pub mod dyadic;
pub mod engine;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod pointfile;
pub mod rng;
pub mod scalar;

pub use construction::{
    extract_family, run_reduction, run_reduction_with, ReductionReport, hits_all, k_of_eps, test_box, FamilyMode, FamilyOptions, TestBoxSpec,
    ThresholdRule,
};
pub use coverfree::{certify_cover_free, cover_number, CoverFreeCertificate, CoverNumber, SetFamily};
pub use dyadic::Dyadic;
pub use engine::{estimate_dispersion, exact_dispersion, DispersionResult, Mode, SearchConfig};
pub use error::{Error, Result};
pub use geometry::{box_contains, box_is_empty, box_volume, AxisBox, Point, PointSet};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;

pub type PointF64 = Point<f64>;
pub type PointSetF64 = PointSet<f64>;
pub type BoxF64 = AxisBox<f64>;

pub type PointSetF32 = PointSet<f32>;
pub type BoxF32 = AxisBox<f32>;

pub type DyadicPointSet = PointSet<Dyadic>;
pub type DyadicBox = AxisBox<Dyadic>;

pub type ExactPointSet = PointSet<Rational>;
pub type ExactBox = AxisBox<Rational>;
