//! Starter-generated one-factorizations of the complete graph K_{q+1} over
//! a prime field F_q, the exact cycle census of every union of two
//! one-factors, and a verification lab that confirms or refutes each claim
//! in the catalog by exhaustive search at concrete q.
//!
//! The pipeline runs bottom-up:
//!
//! * [`field`] — arithmetic in F_q, residue classes, primitive roots,
//!   cyclotomic numbers;
//! * [`starters`] — the S_β and primitive-root-power starter families,
//!   negation, starter predicates, orthogonality;
//! * [`factorization`] — the translation-generated one-factorization
//!   F_γ = F_0 + γ on F_q ∪ {∞}, validation, overlap reports;
//! * [`census`] — cycle decomposition of factor unions, uniformity, and
//!   (l, C_k) classification within and across factorizations;
//! * [`lab`] — one verifier per claim, with machine-readable verdicts and
//!   a batch scan over prime ranges.

pub mod census;
pub mod factorization;
pub mod field;
pub mod lab;
pub mod starters;

pub use census::{
    census_report_json, classify_l_ck, classify_pair_l_ck, count_k_cycles,
    cycles_through_infinity, uniformity_check, union_cycles, CensusError, CensusOutcome,
    CycleStructure,
};
pub use factorization::{
    pair_union_dot, Edge, FactorizationError, OneFactor, OneFactorization, OverlapReport, Vertex,
};
pub use field::{cyclotomic_number, Field, FieldElement, FieldError, PrimeField, ResidueClass};
pub use lab::{
    find_m_set, scan, scan_primes, solve_beta_quadratic, verify_claim, verify_corollary,
    verify_lemma_infty_c4, verify_main_1, verify_one_c4, verify_pair_2c4,
    verify_pair_infty_cycles, Claim, LabError, MSetVariant, ScanConfig, ScanReport, Verdict,
    VerdictReport,
};
pub use starters::{
    are_orthogonal_starters, check_starter, check_strong_starter, is_starter, is_strong_starter,
    OrientedPairIndex, Starter, StarterError, StarterLabel, StarterPair, StarterViolation,
};
