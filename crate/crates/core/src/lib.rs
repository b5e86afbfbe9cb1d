//! Simulation and verification toolkit for the tradeoff between almost-sure
//! error tolerances and mean deviation frequencies (MDF) of convergent
//! stochastic processes.
//!
//! The crate is organized around five pieces:
//!
//! * [`specfn`] — the special functions the closed-form bounds need
//!   (Hurwitz zeta, principal Lambert W, digamma, upper incomplete gamma).
//! * [`sequences`] — weight / tolerance / probability-rate sequences, the
//!   partial-sum functional `S_{a,n0}`, and the tradeoff constant `K(a, eps)`.
//! * [`bounds`] — every closed-form bound as a numeric evaluator with
//!   validity-domain checking and the optimizers over free parameters.
//! * [`simulate`] — reproducible path simulators (Pólya urns, Galton-Watson,
//!   decaying random walks, discrete stochastic integrals, the generalized
//!   Chinese restaurant process, moment estimators).
//! * [`mdf`] — Monte Carlo measurement of deviation frequencies, empirical
//!   Ky Fan distances, bound-vs-empirical verdicts, and the urn model
//!   refutation test.

pub mod bounds;
pub mod mdf;
pub mod sequences;
pub mod simulate;
pub mod specfn;
