//! Closed-form laws of the random model and the numerical tools behind them.

pub mod crossing;
pub mod densities;
pub mod dilog;
pub mod irwin_hall;
pub mod quad;

pub use crossing::{axes_cross_quadrature, pdf_s};
pub use densities::*;
pub use dilog::{dilog, dilog_odd};
pub use irwin_hall::{irwin_hall_cdf, irwin_hall_pdf, prob_equal_arcs_disjoint, EqualArcs};
pub use quad::{integrate, integrate_with, QuadOptions, Quadrature};
