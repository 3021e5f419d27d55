//! Pre-Schwarzian norm estimates for the exponential and square-root
//! Ma–Minda starlike and convex classes.

pub mod auxiliary;
pub mod bounds;
pub mod classes;
pub mod cli;
pub mod disk;
pub mod estimator;
pub mod numeric;
pub mod quadrature;
pub mod schwarz;
pub mod series;

pub use classes::{
    alexander_transform, extremal, member_from_schwarz, membership_residual, phi_eval,
    AnalyticFunction, ClassError, ClassSpec, Family, FunctionTag, Variant,
};
pub use disk::{polar_grid, ComplexValue, UnitDiskPoint};
pub use schwarz::{sample_schwarz, SchwarzFunction};
pub use series::TruncatedSeries;
pub use auxiliary::{
    aux_eval, certify_spec, endpoint_signs, sign_certificate, AuxFunctionId, AuxPoint, Claim,
    Probe,
};
pub use bounds::{alpha_root, norm_bound, AlphaEquation, BoundReport};
pub use estimator::{
    estimate_norm, pre_schwarzian, radial_profile, verify_spec, weighted_field, EstimatorConfig,
    NormEstimate, VerifyReport,
};
