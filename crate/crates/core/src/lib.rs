//! Fixed point index sequences of isolated invariant fixed points of
//! homeomorphisms of R^3.
//!
//! The crate is split into four engines:
//!
//! * [`sequence`]: exact Dold decompositions of periodic integer sequences,
//!   the roots-of-unity form of a sequence and a growth diagnostic.
//! * [`homology`]: integer simplicial (relative) homology, chain maps,
//!   Lefschetz numbers of iterates and the spectral facts behind periodicity.
//! * [`realization`]: a combinatorial plan for a radial homeomorphism
//!   realizing a given admissible sequence, with exact verification and an
//!   evaluable model of the map.
//! * [`degree`]: fixed point indices computed numerically as the degree of
//!   the normalized displacement on a triangulated sphere.

pub mod arith;
pub mod degree;
pub mod homology;
pub mod matrix;
pub mod poly;
pub mod realization;
pub mod sequence;
pub mod sphere;

pub use sequence::{
    check_dold, dold_coefficients, growth_exponent, roots_of_unity_form, DoldCheck, DoldWitness,
    DoldDecomposition, PeriodicSequence, RootOfUnity, RootOfUnityForm, SequenceError,
};
pub use homology::{
    index_from_traces, lefschetz_number, nonzero_spectrum_match, relative_homology,
    roots_of_unity_eigencheck, ChainMap, EigenCheck, HomologyError, HomologyGroup,
    SimplicialComplex, SimplicialPair,
};
pub use matrix::{smith_normal_form, IntMatrix, MatrixError, SmithForm};
pub use realization::{
    block_lefschetz, build_skew_product, index_sequence, inverse_index_sequence, plan_realization,
    verify_roundtrip, RealizationError, RealizationPlan, SkewProduct,
};
pub use degree::{
    anosov_index_sequence, fixed_point_index, inverse_index_relation, sphere_degree, CatalogMap,
    DegreeError, DegreeReport, IndexReport, TriangulatedSphereMap,
};
