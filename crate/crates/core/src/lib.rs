#![forbid(unsafe_code)]

//! Symbolic-numeric analysis of one-variable functions in a restricted
//! power-constructible grammar: holomorphic strip widths and sector angles,
//! exact residue-based Fourier transforms of integrable rational functions,
//! Mellin transforms through the exponential substitution, rationality
//! reconstruction from Taylor data, and quadrature oracles that verify the
//! central identity between exponential Fourier decay rates and strip
//! widths.

pub mod expr;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod scalar;
pub mod series;
pub mod transform;

pub use expr::{parse, Expr, FunctionClass};
pub use rational::{CPoly, IntegrabilityReport, Pole, RationalFn};
pub use scalar::{Coeff, GaussianRational};
