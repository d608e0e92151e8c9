//! Exact symbolic engine for the (q,t)-deformed Poisson model.
//!
//! Moments of the (q,t)-Poisson distribution can be computed along five
//! independent routes, all producing exact polynomials in `q, t, lambda`:
//!
//! * [`partitions::moment_by_partitions`] sums `lambda^|pi| q^rc t^rn` over set partitions;
//! * [`fock::moment_by_operator`] takes vacuum expectations of powers of the Poisson operator;
//! * [`cards::moment_by_cards`] expands contributors into weighted card arrangements;
//! * [`orthopoly::moment_by_motzkin`] sums weighted Motzkin paths over the Jacobi parameters;
//! * [`cfrac::cf_series`] expands the associated J-fraction as a power series.
//!
//! Two nesting conventions are supported throughout; see
//! [`partitions::NestingMode`] and [`fock::ScalarGauge`].

pub mod cards;
pub mod cfrac;
pub mod fock;
pub mod orthopoly;
pub mod partitions;
pub mod qtnum;
pub mod ring;
pub mod verify;

pub use fock::ScalarGauge;
pub use partitions::NestingMode;
pub use ring::{Polynomial, Rational, Var};
