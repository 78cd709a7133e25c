//! Numerical laboratory for time-frequency localization operators.
//!
//! The operator under study is the composition "restrict to a set `A` in
//! space, restrict to a set `B` in frequency, restrict to `A` again".  It is
//! compact and self-adjoint with eigenvalues in `[0, 1)`, and essentially all
//! of its interesting structure is visible at desk scale: the near-1 plateau
//! of about `|A||B|` eigenvalues, the logarithmically thin plunge region, the
//! super-exponential tail, and the closed-form trace functionals.
//!
//! The crate is organized around that picture:
//!
//! * [`geometry`] — intervals, axis-parallel box unions, implicit regions
//!   with signed-distance oracles, Whitney decompositions, boundary covers
//!   and Minkowski-content profiles, and the axis-box surface coefficient.
//! * [`specfun`] — Si, Ci, E1 and the Euler-Mascheroni constant.
//! * [`spectral1d`] — Nystrom spectra of the 1-D sinc kernel and singular
//!   values of the separated one-dimensional operators.
//! * [`counting`] — tensor-product spectra, counting functions, plunge
//!   counts, and the explicit Slepian/Karnik predictions and envelopes.
//! * [`traces`] — trace functionals, Schatten quasi-norms, the plunge
//!   integral, two-term predictions, and admissibility integrals.
//! * [`trs2`] — exact and semi-analytic `Tr S^2` for box unions, the
//!   explicit single-interval formula and its asymptotic series.
//! * [`verify`] — the acceptance checks, runnable both from the test suite
//!   and from the CLI.

pub mod counting;
mod error;
pub mod geometry;
pub mod oracle;
pub mod quad;
pub mod specfun;
pub mod spectral1d;
pub mod traces;
pub mod trs2;
pub mod verify;

pub use error::{Error, Result};
