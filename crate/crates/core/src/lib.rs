//! Green's functions for conformable fractional boundary value problems.
//!
//! The conformable derivative of order `a` in `(0, 1]` is
//! `D^a f(t) = t^(1-a) f'(t)`. This crate provides closed-form kernels for
//! second-, third- and fourth-order problems built from such derivatives,
//! their positivity bounds, solvers based on the kernel representation,
//! an independent kernel-free solver, and numerical verification of all of
//! the above.
//!
//! ```
//! use conformable_greens::{KernelSpec, Order, ScalarFn};
//! use conformable_greens::solver::{solve_linear, DirectOracle};
//! use conformable_greens::grid::uniform_mesh;
//!
//! let spec = KernelSpec::lidstone(Order::new(0.6)?, Order::new(0.8)?);
//! let h = ScalarFn::polynomial(vec![1.0, -0.5]);
//! let x = solve_linear(&spec, &h, &uniform_mesh(33))?;
//! let oracle = DirectOracle::new(&spec.bvp(), h.as_fn())?;
//! assert!((x.eval(0.5) - oracle.eval(0.5)).abs() < 1e-8);
//! # Ok::<(), conformable_greens::Error>(())
//! ```

// NaN must fail every range check, hence `!(x > 0.0)` rather than `x <= 0.0`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fraccalc;
pub mod greens;
pub mod grid;
pub mod problem;
pub mod quadrature;
pub mod report;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use fraccalc::{Order, ScalarFn};
pub use greens::{BcCoeffs, Family, KernelSpec};
pub use grid::GridFunction;
pub use problem::Bvp;
pub use report::VerifyReport;
