//! Scalar test functions with smoothness-class metadata, difference-based
//! seminorm estimates, and moduli of continuity with the `omega*` transform.

mod modulus;
pub mod quadrature;
mod seminorm;
mod spec;

pub use modulus::{
    lambda_omega_estimate, omega_star, validate_modulus, Modulus, ModulusChoice, ModulusReport,
    Tail,
};
pub use seminorm::{
    nth_difference, seminorm_estimate, seminorm_estimate_with, sup_norm_estimate, SeminormGrid,
};
pub use spec::{
    catalog, exp_i, lacunary, monomial, polynomial, power_alpha, sin_sigma, trig_monomial,
    trig_poly, triangle, wrap_angle, xloglx, Domain, FunctionKind, FunctionSpec, TrigTerm,
    WINDOW_DESCRIPTION,
};
