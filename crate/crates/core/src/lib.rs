//! Combinatorics of changemaker vectors and lensbordant surgeries.
//!
//! The crate is split by topic:
//!
//! - [`changemaker`]: the vectors themselves and their subset-sum predicates.
//! - [`coin`]: the coin game `T^σ_m`, its rational relaxation and the
//!   relevant coefficients `V^σ_i`.
//! - [`knot`]: Alexander polynomials of torus knots, V-sequences and the
//!   relevant subsequences seen through a cobordism.
//! - [`surgery`]: slope bounds, changemaker reconstruction and the
//!   one-parameter family analysis.
//! - [`lattice`]: continued fractions, linear lattices and embeddings into
//!   orthogonal complements of changemakers.
//! - [`e8`]: the `−E8 ⊕ −ℤᵏ` model and the E8-changemaker predicate.

pub mod changemaker;
pub mod coin;
pub mod e8;
pub mod error;
pub mod knot;
pub mod lattice;
pub mod surgery;

pub use changemaker::{
    even_equal_partition, is_changemaker, reachable_sums, Changemaker, DerivedScalars,
};
pub use coin::{
    count_plans, optimal_plan, t_sigma, t_sigma_rational, t_sigma_sweep, v_sigma, v_sigma_direct,
    v_sigma_table, verify_structure, PurchasePlan, SigmaRelevantTable, StructureReport,
};
pub use e8::{
    check_e8_changemaker, classify_poincare, deep_short_set, is_e8_changemaker, pairing_maxima,
    pi_set, roots, short_set, E8Changemaker, E8Vector, E8Verdict, PairingMaxima, PoincareClass,
    SplitVector,
};
pub use error::{Error, Result};
pub use knot::{
    conversion_window, extract_relevant, torsion_coeffs, torus_alexander, LaurentPoly, Parity,
    RelevantView, VSequence,
};
pub use lattice::{
    complement_basis, embed_linear, gram_of, hj_expansion, linear_gram, realize, Embedding,
    GramMatrix, HJExpansion, LensRealization, Realization,
};
pub use surgery::{
    check_v0_bounds, count_bound, family_possible_s, family_recover_s, family_sigma, feasible_r,
    matches_view, reconstruct_sigma, slope_relation_holds, slope_window, synthesize_v,
    verify_family_t, FamilyTReport, RecoverMode, SlopeCandidate, SlopeWindow, V0Case, V0Verdict,
};
