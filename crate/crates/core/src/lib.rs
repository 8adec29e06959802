//! Genuine q-Bernstein-Durrmeyer operators `U_{n,q}` on compact complex
//! disks, for every `q > 0`, with an experiment harness that verifies the
//! quantitative convergence (rate `q^-n` for `q > 1`), the Voronovskaja
//! asymptotics with the limit object `L_q`, the lower-bound floor, and the
//! continuity of `L_q` as `q` decreases to 1.
//!
//! Arithmetic is generic over [`scalar::Scalar`]: exact big rationals for
//! identity verification, `f64` or arbitrary-precision floats for
//! experiment tables.
//!
//! Layout mirrors the mathematical layers:
//! * [`qcore`] — q-integers, q-factorials, q-binomials, Jackson q-integral,
//!   q-Beta, q-Stirling numbers,
//! * [`series`] — analytic test functions with rigorous tail bounds,
//!   circle sup-norms, and the two theorem bound constants,
//! * [`operator`] — the operator itself: moment recurrence with caching,
//!   two independent oracle routes, and the direct Jackson-sum definition,
//! * [`voronovskaja`] — `L_q` by two paths, `L_1`, and the continuity scan,
//! * [`harness`] / [`report`] — experiments and their serialized reports.

pub mod complex;
pub mod error;
pub mod harness;
pub mod operator;
pub mod poly;
pub mod qcore;
pub mod report;
pub mod scalar;
pub mod series;
pub mod voronovskaja;

pub use complex::Cx;
pub use error::{Error, Result};
pub use poly::ComplexPoly;
pub use qcore::QContext;
pub use scalar::{Mpf, NumericMode, Rat, Scalar};
pub use series::{DiskSpec, PowerSeries};
