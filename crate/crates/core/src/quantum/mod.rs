//! The quantum line bundle and the classification of its Hermitian vector
//! fields.

pub mod einstein;
pub mod galilei;
pub mod section1;

pub use section1::{
    classify_h, classify_j, hermitian_bracket, hermitian_product, pair_bracket, GaugeConnection, HermitianField,
    LinearQuantumField, MetricDerivative, Section, SpacetimePair,
};

/// Names of the invariants this module certifies.
pub const INVARIANTS: &[&str] = &[
    "section1-classification-isomorphism",
    "pair-bracket-jacobi",
    "pair-bracket-non-closed-witness",
    "central-extension-exactness",
    "hermitian-complex-linearity",
    "section-compatibility",
    "curvature-defect",
    "galilei-classification-isomorphism",
    "galilei-classification-inverse",
    "galilei-observer-independence",
    "einstein-classification-isomorphism",
    "einstein-classification-inverse",
    "einstein-observer-note",
];
