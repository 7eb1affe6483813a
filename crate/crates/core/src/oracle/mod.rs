//! Independent component-level evaluation on explicit metrics.

pub mod check;
pub mod component;
pub mod curvature;
pub mod evaluate;
pub mod manifest;
pub mod metric;
pub mod random;

pub use component::{multi_indices, ComponentTensor};
pub use curvature::{christoffel, ricci, riemann, Geometry};
pub use evaluate::{covariant_derivative, evaluate_abstract, evaluate_factor, Bindings, ConstantValues, Evaluated};
pub use manifest::{parse_manifest, sample_metric, sample_metrics, BUILTIN_MANIFEST};
pub use metric::{ComponentMetric, CoordinateChart};
pub use random::{random_field, random_polynomial};
pub use check::{bump_scalar_at_origin, oracle_check, pinning_suite, random_bindings, OracleReport, PinResult, PINNED_IDENTITIES};
