//! Exact computations on the blowup `X` of the projective plane over `F_q`
//! at all of its `F_q`-rational points.
//!
//! Divisor classes are numerical: on a blowup of the plane at distinct
//! points the class group is the free lattice on `H, E_1, ..., E_n`, so class
//! equality in [`lattice`] stands in for linear (and `Q`-linear) equivalence.
//! Nothing in the crate uses floating point.

pub mod cone;
pub mod dpctl;
pub mod error;
pub mod gf;
pub mod insep;
pub mod kmk;
pub mod lattice;
pub mod linalg;
pub mod linsys;
pub mod plane;
pub mod poly;
pub mod positivity;
pub mod report;

pub use error::{Error, Result};
pub use gf::{embed, make_field, Elem, Embedding, Field, FieldElem};
pub use lattice::{AllPointsBlowup, DivClass, SurfaceDesc};
pub use linsys::CohomologyTriple;
pub use plane::{enumerate_plane, Incidence, ProjLine, ProjPoint};
pub use report::{run_report, CheckReport, Report, ReportOptions, Status};

/// Prime powers accepted by the full report.
pub const SUPPORTED_Q: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];
