//! Curves in 4-dimensional Galilean space.
//!
//! - [`galilean`]: vectors, points, the degenerate metric, the ternary cross
//!   product and the motion group.
//! - [`jet`]: fixed-order truncated Taylor arithmetic used for exact derivatives.
//! - [`expr`] and [`curve`]: the component expression language, admissible
//!   curves `(s, y(s), z(s), w(s))` and the curve-spec file format.
//! - [`frenet`]: the frame `{t, n, b, e}` and curvatures `κ, τ, σ`.
//! - [`mannheim`]: generalized Mannheim condition `κ = γτ²` and mate curves.

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod expr;
pub mod frenet;
pub mod galilean;
pub mod jet;
pub mod mannheim;

pub use curve::{load_curve_spec, Curve, Domain, HelixFamily};
pub use error::{
    CurveError, EvalError, FrenetError, JetError, MannheimError, MotionError, ParseError, SpecError,
};
pub use expr::{parse_expr, Expr, Params};
pub use frenet::{
    frenet_at, frenet_grid, frenet_residuals, invariance_check, Degeneracy, FrenetData,
};
pub use galilean::{
    apply_motion, apply_motion_to_vector, g_cross, g_distance, g_dot, g_norm, GPoint4, GVector4,
    GalileanMotion,
};
pub use jet::{Func, Jet};
pub use mannheim::{
    check_condition, fit_gamma, mannheim_mate, mate_theorem_suite, verify_mate_tangent,
    verify_normal_plane, MannheimReport, TheoremOutcome, TheoremReport,
};
