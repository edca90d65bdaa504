//! Classical mechanics on an Einstein spacetime: the contact map and its
//! splitting, the Levi-Civita connection, the joined phase objects, the
//! Lorentz force and the special bracket of special phase functions.

mod contact;
mod model;
mod phase;
mod special;

pub use contact::{
    adapted_bases, alpha0, alpha0_derivatives, contact_map, technical_identities_suite, time_form, AdaptedBases,
    AdaptedFrames, AlphaDerivatives, IdentityResidual, TechnicalIdentities,
};
pub use model::{levi_civita, ContactFields, EObserver, EPhasePoint, EinsteinError, EinsteinModel};
pub use phase::{
    dynamical_gamma, electromagnetic_phase_connection, gamma_field, gravitational_phase_connection, hamiltonian_lift,
    horizontal_potential, lambda, law_of_motion_residual, lorentz_force, lorentz_force_field, lorentz_gamma, omega,
    phase_connection, poisson_bracket, poisson_bracket_coordinates, tau_form, theta, velocity, volume_form,
};
pub use special::{
    e_special_bracket, e_special_bracket_definitional, e_special_bracket_definitional_field, e_special_value, examples,
    observed_potential, observed_splitting_f, ESpecialFunction, ObservedFields, ObservingFrame,
};

use crate::modelspec::{parse_model, ModelError};

/// Names of the invariants this module certifies.
pub const INVARIANTS: &[&str] = &[
    "technical-identities",
    "contact-unit-norm",
    "time-form-on-contact",
    "connection-metric-parallel",
    "connection-torsion-free",
    "gamma-time-form",
    "gamma-omega-kernel",
    "omega-closed",
    "omega-horizontal-potential",
    "cosymplectic-volume",
    "lorentz-force-from-gamma",
    "poisson-coordinate-formula",
    "bracket-closed-form-vs-definition",
    "bracket-lift-morphism",
    "bracket-jacobi",
    "hamiltonian-lift-projectable",
    "hamiltonian-lift-non-special-witness",
    "observed-splitting-reconstruction",
];

impl EinsteinModel {
    /// Parses, compiles and validates a model file's text.
    pub fn from_source(src: &str) -> Result<EinsteinModel, ModelError> {
        let compiled = parse_model(src)?.compile()?;
        compiled.validate()?;
        EinsteinModel::from_compiled(compiled)
    }
}
