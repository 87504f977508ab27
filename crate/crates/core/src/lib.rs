//! Flag-enumerative invariants of graded posets.
//!
//! The crate builds finite graded posets, classifies them (Eulerian, lower
//! Eulerian, near-Eulerian), and computes their flag enumerators, ab- and
//! cd-indices, local cd-indices, and the mixed cd-index of a strong formal
//! subdivision, along with the commutative h, g, local h and mixed h
//! polynomials and the linear maps connecting the two worlds.

// Index loops over parallel rank tables read better here than iterator
// chains with enumerate/skip/take.
#![allow(clippy::needless_range_loop)]

pub mod constructions;
pub mod hpoly;
pub mod indices;
pub mod ncpoly;
pub mod poset;
pub mod posetmap;
pub mod verify;

pub use hpoly::{
    double_prime, f_closed, f_map, g_closed, g_map, g_poly, g_prime, g_star, h_omega, h_poly,
    h_prime_omega, kappa, l_omega, l_omega_explicit, l_prime_omega, local_h_poly, mixed_h_poly,
    prime_shift, CommMono, CommPoly, HError,
};

pub use indices::{
    ab_index, bary_local_cd, boolean_cd, cd_index, cut_cd_delta, flag_enumerator, flag_vector,
    local_cd_index, mixed_cd_index, prime_cd, pyramid_cd, CdMode, FlagVector, IndexError,
};

pub use posetmap::{
    build_map, carrier_assignment, compose, cut, extension, intermediate_factorization, is_sfs,
    restrict_above, restrict_below, validate_cut, CutData, CutSpec, MapError, PosetMap, SfsMethod,
    SfsResult,
};

pub use constructions::{
    barycentric, boolean, cartesian_product, join, polygon, polytope_product, pyramid,
    simplicial_face_poset, ConstructionError,
};
pub use poset::{build_poset, from_relations, Poset, PosetClassification, PosetError};

pub use ncpoly::{
    ab_to_cd, cd_to_ab, cd_words, comodule_rho, coproduct, coproduct_word, counit, q_int,
    specialize, specialize_mixed, Letter, MixedPoly, MixedWord, NCPoly, NcError, Tensor, Word, Q,
};

pub use verify::{
    barycentric_map, bipyramid_map, cube, cube_triangulation_map, cut_sequences,
    disk_refinement_map, identity_map, negative_corpus, polygon_cut_fixtures, segment_cut_fixture,
    sfs_corpus, stellar_tetrahedron_map, stellar_triangle_map, verify_comodule, verify_cut_lemma,
    verify_decomposition, verify_example_formulas, verify_local_decomposition, verify_mixed_maps,
    CorpusEntry, CutFixture, CutSequence, EqualityCheck, ExampleKind, Theorem, VerifyError,
    VerifyReport,
};
