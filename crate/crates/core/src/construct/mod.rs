//! Bounded precover and preenvelope builders, the envelope search and the
//! counterexample fixture.

mod envelope;
mod fixture;
mod oracle;
mod precover;
mod preenvelope;
mod verify;

pub use envelope::{
    class_closure_defect, hull_embedding, x_injective_envelope, EnvelopeResult, EssentialityCertificate, HullEmbedding,
};
pub use fixture::fixture_injective_components_not_injective_complex;
pub use oracle::{
    module_epi_precover, module_mono_preenvelope, module_precover_defects, module_preenvelope_defects, FreeCover,
    InjectiveHull, PrecoverOracle, PreenvelopeOracle, UniverseSearch,
};
pub use precover::{precover_with, ConstraintCheck, OracleCall, PrecoverResult, PrecoverStep, F_S1, F_S2, S1_LAMBDA, S2_LAMBDA};
pub use preenvelope::{preenvelope_with, PreenvelopeResult, PreenvelopeStep, LAMBDA_T, S_F};
pub use verify::{precover_bounded, preenvelope_bounded, BuildReport, BuildVerifier};
