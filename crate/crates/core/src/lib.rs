//! Osculating families of plane curves and functions: circles, Taylor
//! polynomials, conics, Moebius maps and cubic ovals, with checks of their
//! disjointness and nesting and of the classical lower bounds on vertices,
//! sextactic points and Schwarzian zeros.

pub mod algebraic;
pub mod circles;
pub mod conics;
pub mod cubics;
pub mod curves;
pub mod error;
pub mod jets;
pub mod moebius;
pub mod poly;
pub mod render;
pub mod scan;
pub mod taylor;

pub use error::{Error, Result};
pub use jets::Jet;
