//! Neutral-fermion calculus over `Q[beta]/(beta^{K+1})`: normal ordering,
//! the `*` involution, beta-deformed modes and currents, the `theta`/`Theta`
//! exponentials, the special vectors and their evaluation to symmetric
//! functions.

mod currents;
mod operators;
mod special;
mod vector;

pub use currents::{apply_current, apply_exp, apply_exp_big_theta, apply_exp_theta, apply_quadratic, QuadraticOperator};
pub use operators::{
    anticommutator_check, anticommutator_on, apply_mode, apply_operator, capital_series, default_test_kets,
    deformed_mode, DeformedKind, OperatorExpansion,
};
pub use special::{
    basis_ket, build_special_ket, chi_eval, double_bra, double_ket, duality_pairing_check, gp_prime_eval,
    omega_eval, round_bra, round_ket, PairingKind, SpecialKind,
};
pub use vector::{mode_on_basis, vev, FockTermJson, FockVector, FockVectorJson, Side};
