//! Chart-level tensor calculus for metallic structures `J^2 = aJ + bI`.
//!
//! Tensor field components are expressions in the chart coordinates
//! ([`expr`]); derivatives come from forward-mode dual numbers ([`dual`]), so
//! Lie brackets, Nijenhuis tensors and covariant derivatives are exact up to
//! floating point rounding. Identities are verified by sweeping sample points
//! ([`check`]).
//!
//! Numeric routines are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix `f64`.
//!
//! ```
//! use metallic_core::{Chart, Params, is_metallic};
//!
//! let chart = Chart::new(&["x", "y"]).unwrap();
//! let f = chart.tensor11(&[vec!["cos(x)", "sin(x)"], vec!["sin(x)", "-cos(x)"]]).unwrap();
//! let params = Params::new(1, 1).unwrap();
//! let j = params.metallic_from_product(&f);
//! let points = vec![vec![0.1, 0.2], vec![1.0, -1.0]];
//! assert!(is_metallic(&j, &params, &points, 1e-12).pass);
//! ```

// Tolerance tests are written as `!(r <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chart;
pub mod check;
pub mod connect;
pub mod dual;
pub mod error;
pub mod expr;
pub mod families;
pub mod linalg;
pub mod metallic;
pub mod random;
pub mod riemann;
pub mod scalar;

pub use chart::{
    apply, lie_bracket, nijenhuis, nijenhuis_scaling, Chart, MetricField, NijenhuisScaling,
    TensorField11, TensorField12, VectorField,
};
pub use check::{sweep, CheckResult, Probe};
pub use connect::{
    anti_half_parallel_residual, connection_axioms_residual, covariant_derivative, delta_j,
    distribution_parallel_residual, extract_coefficients, half_parallel_residual,
    metric_compatibility_residual, nabla_j, nabla_tensor, nijenhuis_via_connection,
    obata_connection, parallelism_residual, schouten, vranceanu, Connection, ConnectionCoeffs,
    ConnectionKind, DerivedConnection,
};
pub use dual::DualVector;
pub use error::{Error, Result};
pub use expr::{EvalError, Expr, Func, ParseError, Parser};
pub use families::{
    clifford_metallic, family_2d, metallic_reflection, quaternion_metallic, triple_structure,
    Family2DSpec, Family2DVariant, QuaternionFlavor, TripleKind, TripleStructure,
};
pub use metallic::{
    annihilating_spectrum_check, complex_metallic, conjugate, from_product, generalized_fibonacci,
    inverse_structure, is_metallic, metallic_from_projector, metallic_ratio, projectors,
    tangent_metallic, to_product, MetallicMean, MetallicParams,
};
pub use riemann::{
    equivalence_f_j_symmetry, g_symmetry_check, locally_product_check, nj_symmetry_check,
    orthogonality_check, LocallyProductVerdict,
};
pub use scalar::Scalar;

/// Dual number over `f64`.
pub type Dual = DualVector<f64>;
/// Metallic parameters over `f64`.
pub type Params = MetallicParams<f64>;
/// Dense real matrix.
pub type Matrix = nalgebra::DMatrix<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex<f64>>;
/// Sweep result over `f64`.
pub type Check = CheckResult<f64>;
