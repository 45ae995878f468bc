//! Contact magnetic trajectories on SL(2,R) with its canonical Sasakian structure.
//!
//! The crate is organised bottom-up: [`lie`] (matrix group and algebra),
//! [`geometry`] (metric, connection, curvature, Sasakian tensors),
//! [`hyperbolic`] (the base plane of curvature -4), [`trajectory`] and
//! [`integrator`] (closed forms and the numerical oracle), [`periodicity`],
//! [`homogeneous`] and [`hopf_tube`].

// `!(y > 0.0)` also rejects NaN; tensor loops read best with indices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod geometry;
pub mod homogeneous;
pub mod hopf_tube;
pub mod hyperbolic;
pub mod integrator;
pub mod lie;
pub mod numdiff;
pub mod par;
pub mod periodicity;
pub mod trajectory;
pub mod verify;

pub use error::{Error, Result};
