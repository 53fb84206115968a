//! One verifier per claim in the catalog: search the qualifying β, run the
//! relevant census, and emit a machine-readable verdict (confirmed,
//! refuted, or vacuous) at one concrete q. Verifiers re-check every
//! hypothesis instead of assuming it, and refutations always carry a
//! concrete, reproducible counterexample.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::census::{
    classify_l_ck, cross_census_unchecked, cycles_through_infinity, union_cycles, CensusError,
    CensusOutcome, KCycleCensus,
};
use crate::factorization::{FactorizationError, OneFactorization, Vertex};
use crate::field::{FieldElement, FieldError, PrimeField, ResidueClass};
use crate::starters::{
    are_orthogonal_starters, check_starter, check_strong_starter, Starter, StarterError,
};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("beta = {beta} violates the claim hypothesis: {why}")]
    BadResidue { beta: u64, why: String },
    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),
    #[error("claim {0} is parameterized by beta; none was supplied")]
    BetaRequired(&'static str),
    #[error("claim {0} does not take a beta parameter")]
    BetaNotApplicable(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Starter(#[from] StarterError),
    #[error(transparent)]
    Factorization(#[from] FactorizationError),
    #[error(transparent)]
    Census(#[from] CensusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Confirmed,
    Refuted,
    /// The hypothesis set was empty at this q (for example, no qualifying β
    /// exists), so there was nothing to check.
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Confirmed => write!(f, "confirmed"),
            Verdict::Refuted => write!(f, "refuted"),
            Verdict::Vacuous => write!(f, "vacuous"),
        }
    }
}

/// Identifier of one checkable claim. The wire ids (`thm-2.9`, …) are the
/// stable names used in reports, on the command line, and in scan tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Claim {
    /// Every S_β is a strong starter.
    StrongStarterFamily,
    /// Distinct S_β, S_β' are orthogonal.
    DistinctStartersOrthogonal,
    /// S_β and −S_β are orthogonal.
    NegationOrthogonal,
    /// The S_β factorization is uniform.
    UniformFactorization,
    /// A root of β²−β+1 forces a 4-cycle through ∞.
    InfinityFourCycle,
    /// q ≡ −1 (mod 12) admits no non-residue root of β²−β+1.
    NoQuadraticRootInNqr,
    /// Quadratic-root regime: the factorization is (1, C₄).
    OneC4FromQuadraticRoot,
    /// M-set regime: the factorization is (1, C₄).
    OneC4FromMSet,
    /// The set M is nonempty when q ≡ 11 (mod 24).
    MSetNonempty,
    /// Some β yields a (1, C₄) factorization.
    ExistsOneC4,
    /// Cross unions of the S_β / −S_β pair carry no 4-cycle at ∞.
    CrossNoInfinityFourCycle,
    /// Cross unions carry exactly two 4-cycles for β in the restricted M.
    CrossTwoC4,
    /// Unions within the combined family carry at most two 4-cycles.
    CombinedAtMostTwoC4,
    /// Single-β census: is the S_β factorization (1, C₄)?
    OneC4Single,
}

impl Claim {
    pub fn id(self) -> &'static str {
        match self {
            Claim::StrongStarterFamily => "prop-1.2",
            Claim::DistinctStartersOrthogonal => "thm-1.3",
            Claim::NegationOrthogonal => "thm-1.1",
            Claim::UniformFactorization => "thm-2.1",
            Claim::InfinityFourCycle => "lemma-2.2",
            Claim::NoQuadraticRootInNqr => "lemma-2.3",
            Claim::OneC4FromQuadraticRoot => "thm-2.4",
            Claim::OneC4FromMSet => "lemma-2.6",
            Claim::MSetNonempty => "lemma-2.8",
            Claim::ExistsOneC4 => "thm-2.9",
            Claim::CrossNoInfinityFourCycle => "lemma-3.1",
            Claim::CrossTwoC4 => "thm-3.3",
            Claim::CombinedAtMostTwoC4 => "corollary",
            Claim::OneC4Single => "one-c4",
        }
    }

    /// Parse a claim id, accepting the aliases used by the batch tooling.
    pub fn parse(s: &str) -> Option<Claim> {
        let canonical = match s {
            "thm-main1" | "theorem-main-1" => "thm-2.9",
            "thm-main2" | "theorem-main-2" | "lemma-3.2" => "thm-3.3",
            other => other,
        };
        Claim::all_scannable()
            .iter()
            .copied()
            .chain([Claim::OneC4Single])
            .find(|c| c.id() == canonical)
    }

    /// Claims that run without a β parameter, in canonical order.
    pub fn all_scannable() -> [Claim; 13] {
        [
            Claim::StrongStarterFamily,
            Claim::DistinctStartersOrthogonal,
            Claim::NegationOrthogonal,
            Claim::UniformFactorization,
            Claim::InfinityFourCycle,
            Claim::NoQuadraticRootInNqr,
            Claim::OneC4FromQuadraticRoot,
            Claim::OneC4FromMSet,
            Claim::MSetNonempty,
            Claim::ExistsOneC4,
            Claim::CrossNoInfinityFourCycle,
            Claim::CrossTwoC4,
            Claim::CombinedAtMostTwoC4,
        ]
    }

    pub fn description(self) -> &'static str {
        match self {
            Claim::StrongStarterFamily => "every S_beta is a strong starter",
            Claim::DistinctStartersOrthogonal => "distinct S_beta, S_beta' are orthogonal",
            Claim::NegationOrthogonal => "S_beta and -S_beta are orthogonal",
            Claim::UniformFactorization => "the S_beta factorization is uniform",
            Claim::InfinityFourCycle => {
                "a non-residue root of beta^2-beta+1 forces a 4-cycle through infinity"
            }
            Claim::NoQuadraticRootInNqr => {
                "q = -1 (mod 12) admits no non-residue root of beta^2-beta+1"
            }
            Claim::OneC4FromQuadraticRoot => {
                "quadratic-root regime: the S_beta factorization is (1,C4)"
            }
            Claim::OneC4FromMSet => "M-set regime: the S_beta factorization is (1,C4)",
            Claim::MSetNonempty => "the set M is nonempty when q = 11 (mod 24)",
            Claim::ExistsOneC4 => "some beta yields a (1,C4) factorization of K_{q+1}",
            Claim::CrossNoInfinityFourCycle => {
                "cross unions of the S_beta/-S_beta pair carry no 4-cycle at infinity"
            }
            Claim::CrossTwoC4 => {
                "cross unions carry exactly two 4-cycles for beta in the restricted M"
            }
            Claim::CombinedAtMostTwoC4 => {
                "unions within the combined family carry at most two 4-cycles"
            }
            Claim::OneC4Single => "single-beta census: is the S_beta factorization (1,C4)?",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// Machine-readable outcome of one claim check at one q. Reports are pure
/// functions of (claim, q, β set): re-running reproduces them byte for
/// byte.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictReport {
    pub claim: Claim,
    pub q: u64,
    pub verdict: Verdict,
    /// What was searched (candidate β sets and the like).
    pub parameters: Value,
    pub witnesses: Value,
    pub counterexamples: Value,
    pub census: Value,
    pub warnings: Vec<String>,
}

impl VerdictReport {
    pub fn to_json(&self) -> Value {
        json!({
            "claim": self.claim.id(),
            "q": self.q,
            "verdict": self.verdict,
            "parameters": self.parameters,
            "witnesses": self.witnesses,
            "counterexamples": self.counterexamples,
            "census": self.census,
            "warnings": self.warnings,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}

fn cycle_json(cycle: &[Vertex]) -> Value {
    Value::Array(cycle.iter().map(|v| v.to_json()).collect())
}

fn values(betas: &[FieldElement]) -> Vec<u64> {
    betas.iter().map(|b| b.value()).collect()
}

/// Non-residues other than −1, in ascending order: the β admissible for
/// the S_β construction.
pub fn horton_candidates(field: &PrimeField) -> Vec<FieldElement> {
    let minus_one = field.element(field.order() - 1);
    field
        .non_residues()
        .into_iter()
        .filter(|&b| b != minus_one)
        .collect()
}

/// Exhaustive root set of β² − β + 1 = 0, each root with its residue
/// class (roots are never 0 or 1, so the class is always defined).
pub fn solve_beta_quadratic(field: &PrimeField) -> Vec<(FieldElement, ResidueClass)> {
    let one = field.one();
    field
        .elements()
        .filter(|&b| (b * b - b + one).is_zero())
        .map(|b| {
            let class = field
                .classify(b)
                .expect("roots of beta^2-beta+1 are nonzero");
            (b, class)
        })
        .collect()
}

fn nqr_roots(field: &PrimeField) -> Vec<FieldElement> {
    let minus_one = field.element(field.order() - 1);
    solve_beta_quadratic(field)
        .into_iter()
        .filter(|&(b, class)| class == ResidueClass::NonQuadratic && b != minus_one)
        .map(|(b, _)| b)
        .collect()
}

/// Which membership conditions define the searched set of β.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MSetVariant {
    /// β ∈ NQR \ {−1} with β−1 ∈ NQR and β²+1 ∈ QR.
    LemmaFinal,
    /// Additionally β+1 ∈ NQR and β ∉ {−2, 2, 2⁻¹}.
    TheoremMain2,
}

impl MSetVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            MSetVariant::LemmaFinal => "lemma_final",
            MSetVariant::TheoremMain2 => "theorem_main2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MSetScan {
    pub variant: MSetVariant,
    pub members: Vec<FieldElement>,
    /// Whether q ≡ 11 (mod 24), the congruence the membership conditions
    /// are designed for.
    pub congruence_ok: bool,
}

/// Exhaustive membership scan for the set M of admissible β.
pub fn find_m_set(field: &PrimeField, variant: MSetVariant) -> MSetScan {
    let q = field.order();
    let one = field.one();
    let is_nqr = |x: FieldElement| field.classify(x) == Some(ResidueClass::NonQuadratic);
    let is_qr = |x: FieldElement| field.classify(x) == Some(ResidueClass::Quadratic);
    let two = field.element(2);
    let minus_two = -two;
    let half = two.inv().expect("2 is invertible in an odd prime field");

    let members = horton_candidates(field)
        .into_iter()
        .filter(|&b| {
            if variant == MSetVariant::TheoremMain2 && (b == two || b == minus_two || b == half) {
                return false;
            }
            if !is_nqr(b - one) {
                return false;
            }
            if variant == MSetVariant::TheoremMain2 && !is_nqr(b + one) {
                return false;
            }
            is_qr(b * b + one)
        })
        .collect();
    MSetScan {
        variant,
        members,
        congruence_ok: q % 24 == 11,
    }
}

fn congruence_warning(field: &PrimeField, wanted: &str, holds: bool) -> Option<String> {
    if holds {
        None
    } else {
        Some(format!(
            "q = {} is outside the claim's congruence class ({wanted})",
            field.order()
        ))
    }
}

fn horton_factorization(
    field: &PrimeField,
    beta: FieldElement,
) -> Result<OneFactorization, LabError> {
    let starter = Starter::horton(field, beta)?;
    Ok(OneFactorization::from_starter(&starter)?)
}

fn pair_factorizations(
    field: &PrimeField,
    beta: FieldElement,
) -> Result<(OneFactorization, OneFactorization), LabError> {
    let starter = Starter::horton(field, beta)?;
    let fz = OneFactorization::from_starter(&starter)?;
    let gz = OneFactorization::from_starter(&starter.negate())?;
    Ok((fz, gz))
}

fn require_horton_beta(field: &PrimeField, beta: FieldElement) -> Result<(), LabError> {
    // surfaces the BadResidue / BadCongruence diagnostics without building
    Starter::horton(field, beta).map(|_| ()).map_err(LabError::from)
}

/// 4-cycle through ∞ in F_0 ∪ F_i for i the canonical QR generator,
/// given a non-residue root β of β² − β + 1.
pub fn verify_lemma_infty_c4(
    field: &PrimeField,
    beta: FieldElement,
) -> Result<VerdictReport, LabError> {
    require_horton_beta(field, beta)?;
    let one = field.one();
    if !(beta * beta - beta + one).is_zero() {
        return Err(LabError::HypothesisUnmet(format!(
            "beta = {} is not a root of beta^2 - beta + 1 over F_{}",
            beta,
            field.order()
        )));
    }
    let mut warnings = Vec::new();
    if field.order() < 11 {
        warnings.push(format!(
            "q = {} is below the claim's stated range q >= 11",
            field.order()
        ));
    }

    let fz = horton_factorization(field, beta)?;
    let generator = field.qr_generator();
    let through = cycles_through_infinity(fz.factor(0), fz.factor(generator.value()), 4)?;
    let union = union_cycles(fz.factor(0), fz.factor(generator.value()))?;

    let verdict = if through.is_empty() {
        Verdict::Refuted
    } else {
        Verdict::Confirmed
    };
    Ok(VerdictReport {
        claim: Claim::InfinityFourCycle,
        q: field.order(),
        verdict,
        parameters: json!({ "beta": beta.value(), "representative_pair": [0, generator.value()] }),
        witnesses: json!({
            "beta": [beta.value()],
            "cycles": through.iter().map(|c| cycle_json(c)).collect::<Vec<_>>(),
        }),
        counterexamples: if verdict == Verdict::Refuted {
            json!([{
                "pair": [0, generator.value()],
                "four_cycles_through_infinity": 0,
                "structure": union.structure.to_json(),
            }])
        } else {
            json!([])
        },
        census: json!({
            "representative_structure": union.structure.to_json(),
            "four_cycles_through_infinity": through.len(),
        }),
        warnings,
    })
}

fn infinity_regime(fz: &OneFactorization) -> Value {
    let q = fz.field().order();
    let mut through = 0usize;
    let mut avoiding = 0usize;
    for d in 1..=(q - 1) / 2 {
        let cycles = union_cycles(fz.factor(0), fz.factor(d))
            .expect("validated factorization has distinct factors");
        for cycle in cycles.k_cycles(4) {
            if cycle.iter().any(|v| v.is_infinity()) {
                through += 1;
            } else {
                avoiding += 1;
            }
        }
    }
    match (through, avoiding) {
        (0, 0) => Value::Null,
        (_, 0) => Value::from("all"),
        (0, _) => Value::from("none"),
        _ => Value::from("mixed"),
    }
}

/// Full census of the S_β factorization at k = 4: confirmed exactly when
/// every pair union contains one 4-cycle. The report records whether the
/// 4-cycles pass through ∞ and which claim regime β falls in.
pub fn verify_one_c4(field: &PrimeField, beta: FieldElement) -> Result<VerdictReport, LabError> {
    require_horton_beta(field, beta)?;
    let q = field.order();
    let fz = horton_factorization(field, beta)?;
    let census = classify_l_ck(&fz, 4);

    let one = field.one();
    let is_root = (beta * beta - beta + one).is_zero();
    let in_m = find_m_set(field, MSetVariant::LemmaFinal).members.contains(&beta);
    let claim = if is_root && q % 8 == 3 && q % 3 == 1 {
        Claim::OneC4FromQuadraticRoot
    } else if in_m && q % 24 == 11 {
        Claim::OneC4FromMSet
    } else {
        Claim::OneC4Single
    };

    let generator = field.qr_generator();
    let representative = union_cycles(fz.factor(0), fz.factor(generator.value()))?;
    let rep_four: Vec<Value> = representative.k_cycles(4).map(|c| cycle_json(c)).collect();

    let verdict = if census.outcome == (CensusOutcome::Constant { l: 1 }) {
        Verdict::Confirmed
    } else {
        Verdict::Refuted
    };
    Ok(VerdictReport {
        claim,
        q,
        verdict,
        parameters: json!({
            "beta": beta.value(),
            "beta_is_quadratic_root": is_root,
            "beta_in_m_set": in_m,
        }),
        witnesses: if verdict == Verdict::Confirmed {
            json!({ "beta": [beta.value()], "cycles": rep_four })
        } else {
            json!({ "beta": [], "cycles": [] })
        },
        counterexamples: if verdict == Verdict::Refuted {
            json!([census.outcome.to_json()])
        } else {
            json!([])
        },
        census: census_json(&census, json!({
            "representative_pair": [0, generator.value()],
            "representative_structure": representative.structure.to_json(),
            "through_infinity": infinity_regime(&fz),
        })),
        warnings: Vec::new(),
    })
}

fn census_json(census: &KCycleCensus, extra: Value) -> Value {
    let mut per_class = Map::new();
    for &(d, count) in &census.per_class {
        per_class.insert(d.to_string(), Value::from(count));
    }
    let mut out = Map::new();
    out.insert("k".into(), Value::from(census.k));
    out.insert("classification".into(), census.outcome.to_json());
    out.insert("per_class".into(), Value::Object(per_class));
    out.insert(
        "full_pairs_checked".into(),
        Value::from(census.full_pairs_checked),
    );
    if let Some(extra_map) = extra.as_object() {
        for (key, value) in extra_map {
            out.insert(key.clone(), value.clone());
        }
    }
    Value::Object(out)
}

/// Existence scan: every admissible β is censused and the full β → l map
/// reported; confirmed when some β yields l = 1.
pub fn verify_main_1(field: &PrimeField) -> VerdictReport {
    let q = field.order();
    let mut warnings = Vec::new();
    if let Some(w) = congruence_warning(field, "q ≡ 11 (mod 24)", q % 24 == 11) {
        warnings.push(w);
    }
    if q % 4 != 3 {
        return VerdictReport {
            claim: Claim::ExistsOneC4,
            q,
            verdict: Verdict::Vacuous,
            parameters: json!({ "candidates": [] }),
            witnesses: json!({ "beta": [], "cycles": [] }),
            counterexamples: json!([]),
            census: json!({ "beta_to_l": {} }),
            warnings: vec![format!(
                "q = {q} is not ≡ 3 (mod 4); the S_beta construction does not apply"
            )],
        };
    }

    let candidates = horton_candidates(field);
    let results: Vec<(FieldElement, KCycleCensus)> = candidates
        .par_iter()
        .map(|&beta| {
            let fz = horton_factorization(field, beta).expect("admissible beta");
            (beta, classify_l_ck(&fz, 4))
        })
        .collect();

    let mut beta_to_l = Map::new();
    for (beta, census) in &results {
        let value = match census.outcome.constant() {
            Some(l) => Value::from(l),
            None => Value::from("not-constant"),
        };
        beta_to_l.insert(beta.value().to_string(), value);
    }

    let winners: Vec<FieldElement> = results
        .iter()
        .filter(|(_, census)| census.outcome == CensusOutcome::Constant { l: 1 })
        .map(|&(beta, _)| beta)
        .collect();

    let witness_cycles: Vec<Value> = winners
        .iter()
        .map(|&beta| {
            let fz = horton_factorization(field, beta).expect("admissible beta");
            let generator = field.qr_generator();
            let union = union_cycles(fz.factor(0), fz.factor(generator.value()))
                .expect("distinct factors");
            let four: Vec<Value> = union.k_cycles(4).map(|c| cycle_json(c)).collect();
            four.into_iter().next().unwrap_or(Value::Null)
        })
        .collect();

    let verdict = if winners.is_empty() {
        Verdict::Refuted
    } else {
        Verdict::Confirmed
    };
    VerdictReport {
        claim: Claim::ExistsOneC4,
        q,
        verdict,
        parameters: json!({ "candidates": values(&candidates) }),
        witnesses: json!({ "beta": values(&winners), "cycles": witness_cycles }),
        counterexamples: if verdict == Verdict::Refuted {
            json!([{ "exhausted_candidates": values(&candidates),
                     "beta_to_l": Value::Object(beta_to_l.clone()) }])
        } else {
            json!([])
        },
        census: json!({
            "beta_to_l": Value::Object(beta_to_l),
            "full_pairs_checked": q <= 100,
        }),
        warnings,
    }
}

struct CrossInfinitySplit {
    through_total: usize,
    avoiding_total: usize,
    first_through: Option<(u64, u64, Vec<Vertex>)>,
    first_avoiding: Option<(u64, u64, Vec<Vertex>)>,
}

fn cross_infinity_split(fz: &OneFactorization, gz: &OneFactorization) -> CrossInfinitySplit {
    let q = fz.field().order();
    let per_pair: Vec<(usize, usize, Option<Vec<Vertex>>, Option<Vec<Vertex>>)> = (0..q * q)
        .into_par_iter()
        .map(|flat| {
            let (gamma, delta) = (flat / q, flat % q);
            let cycles = union_cycles(fz.factor(gamma), gz.factor(delta))
                .expect("orthogonal factorizations have distinct factors");
            let mut through = 0;
            let mut avoiding = 0;
            let mut first_through = None;
            let mut first_avoiding = None;
            for cycle in cycles.k_cycles(4) {
                if cycle.iter().any(|v| v.is_infinity()) {
                    through += 1;
                    first_through.get_or_insert_with(|| cycle.clone());
                } else {
                    avoiding += 1;
                    first_avoiding.get_or_insert_with(|| cycle.clone());
                }
            }
            (through, avoiding, first_through, first_avoiding)
        })
        .collect();

    let mut split = CrossInfinitySplit {
        through_total: 0,
        avoiding_total: 0,
        first_through: None,
        first_avoiding: None,
    };
    for (flat, (through, avoiding, cycle_t, cycle_a)) in per_pair.into_iter().enumerate() {
        let (gamma, delta) = (flat as u64 / q, flat as u64 % q);
        split.through_total += through;
        split.avoiding_total += avoiding;
        if split.first_through.is_none() {
            if let Some(c) = cycle_t {
                split.first_through = Some((gamma, delta, c));
            }
        }
        if split.first_avoiding.is_none() {
            if let Some(c) = cycle_a {
                split.first_avoiding = Some((gamma, delta, c));
            }
        }
    }
    split
}

/// Census of 4-cycles through and away from ∞ over every ordered cross
/// union F_γ ∪ G_δ of the S_β / −S_β pair. The claim's written statement
/// excludes 4-cycles avoiding ∞ while its use downstream needs 4-cycles
/// through ∞ excluded; both counts are measured and reported, and the
/// verdict follows the through-∞ reading that later claims depend on.
pub fn verify_pair_infty_cycles(
    field: &PrimeField,
    beta: FieldElement,
) -> Result<VerdictReport, LabError> {
    require_horton_beta(field, beta)?;
    let q = field.order();
    let two = field.element(2);
    let half = two.inv().expect("2 is invertible in an odd prime field");
    if beta == two || beta == half {
        return Err(LabError::BadResidue {
            beta: beta.value(),
            why: "beta in {2, 2^-1} is excluded by the claim hypothesis".into(),
        });
    }
    let mut warnings = Vec::new();
    if let Some(w) = congruence_warning(field, "q ≡ 3 (mod 8)", q % 8 == 3) {
        warnings.push(w);
    }

    let (fz, gz) = pair_factorizations(field, beta)?;
    let split = cross_infinity_split(&fz, &gz);

    let through_clear = split.through_total == 0;
    let avoiding_clear = split.avoiding_total == 0;
    let witness_json = |w: &Option<(u64, u64, Vec<Vertex>)>| match w {
        Some((gamma, delta, cycle)) => json!({
            "pair": [gamma, delta],
            "cycle": cycle_json(cycle),
        }),
        None => Value::Null,
    };

    let verdict = if through_clear {
        Verdict::Confirmed
    } else {
        Verdict::Refuted
    };
    Ok(VerdictReport {
        claim: Claim::CrossNoInfinityFourCycle,
        q,
        verdict,
        parameters: json!({ "beta": beta.value(), "ordered_pairs_checked": q * q }),
        witnesses: json!({ "beta": [beta.value()], "cycles": [] }),
        counterexamples: if verdict == Verdict::Refuted {
            json!([witness_json(&split.first_through)])
        } else {
            json!([])
        },
        census: json!({
            "four_cycles_through_infinity_total": split.through_total,
            "four_cycles_avoiding_infinity_total": split.avoiding_total,
            "reading_no_c4_through_infinity": if through_clear { "confirmed" } else { "refuted" },
            "reading_no_c4_avoiding_infinity": if avoiding_clear { "confirmed" } else { "refuted" },
            "first_c4_through_infinity": witness_json(&split.first_through),
            "first_c4_avoiding_infinity": witness_json(&split.first_avoiding),
        }),
        warnings,
    })
}

/// Full ordered cross-pair census for β in the restricted M set:
/// confirmed exactly when the factorizations are orthogonal and every one
/// of the q² unions contains exactly two 4-cycles.
pub fn verify_pair_2c4(field: &PrimeField, beta: FieldElement) -> Result<VerdictReport, LabError> {
    require_horton_beta(field, beta)?;
    let q = field.order();
    let m_set = find_m_set(field, MSetVariant::TheoremMain2);
    if !m_set.members.contains(&beta) {
        return Err(LabError::HypothesisUnmet(format!(
            "beta = {beta} is not in the {} set over F_{q}",
            m_set.variant.as_str()
        )));
    }
    let mut warnings = Vec::new();
    if !m_set.congruence_ok {
        if let Some(w) = congruence_warning(field, "q ≡ 11 (mod 24)", false) {
            warnings.push(w);
        }
    }

    let (fz, gz) = pair_factorizations(field, beta)?;
    let overlap = fz.overlap_report(&gz)?;
    let census = cross_census_unchecked(&fz, &gz, 4, overlap);

    let two_everywhere = census.outcome == CensusOutcome::Constant { l: 2 };
    let verdict = if overlap.orthogonal() && two_everywhere {
        Verdict::Confirmed
    } else {
        Verdict::Refuted
    };

    let mut per_shift = Map::new();
    for &(s, count) in &census.per_shift {
        per_shift.insert(s.to_string(), Value::from(count));
    }
    let counterexamples = if verdict == Verdict::Refuted {
        let mut items = Vec::new();
        if !overlap.orthogonal() {
            items.push(json!({
                "max_overlap": overlap.max_overlap,
                "pair": overlap.witness.map(|(a, b)| json!([a, b])).unwrap_or(Value::Null),
            }));
        }
        match &census.outcome {
            CensusOutcome::Constant { l } => items.push(json!({
                "pair": [0, 0],
                "four_cycles": l,
                "expected": 2,
            })),
            CensusOutcome::NotConstant { low, high } => {
                items.push(json!({
                    "pair": [low.pair.0, low.pair.1],
                    "four_cycles": low.count,
                    "expected": 2,
                }));
                items.push(json!({
                    "pair": [high.pair.0, high.pair.1],
                    "four_cycles": high.count,
                    "expected": 2,
                }));
            }
        }
        Value::Array(items)
    } else {
        json!([])
    };

    Ok(VerdictReport {
        claim: Claim::CrossTwoC4,
        q,
        verdict,
        parameters: json!({
            "beta": beta.value(),
            "m_set_variant": m_set.variant.as_str(),
            "ordered_pairs_checked": q * q,
        }),
        witnesses: if verdict == Verdict::Confirmed {
            json!({ "beta": [beta.value()], "cycles": [] })
        } else {
            json!({ "beta": [], "cycles": [] })
        },
        counterexamples,
        census: json!({
            "classification": census.outcome.to_json(),
            "per_shift": Value::Object(per_shift),
            "max_overlap": overlap.max_overlap,
            "orthogonal": overlap.orthogonal(),
        }),
        warnings,
    })
}

/// Census over the combined family 𝓕 ∪ 𝓖 for every β in the restricted M
/// set: confirmed when no union of two distinct factors carries more than
/// two 4-cycles.
pub fn verify_corollary(field: &PrimeField) -> VerdictReport {
    let q = field.order();
    let mut warnings = Vec::new();
    if let Some(w) = congruence_warning(field, "q ≡ 11 (mod 24)", q % 24 == 11) {
        warnings.push(w);
    }
    if q % 4 != 3 {
        warnings.push(format!(
            "q = {q} is not ≡ 3 (mod 4); the S_beta construction does not apply"
        ));
        return VerdictReport {
            claim: Claim::CombinedAtMostTwoC4,
            q,
            verdict: Verdict::Vacuous,
            parameters: json!({ "m_set": [] }),
            witnesses: json!({ "beta": [], "cycles": [] }),
            counterexamples: json!([]),
            census: json!({ "per_beta": {} }),
            warnings,
        };
    }

    let m_set = find_m_set(field, MSetVariant::TheoremMain2);
    if m_set.members.is_empty() {
        return VerdictReport {
            claim: Claim::CombinedAtMostTwoC4,
            q,
            verdict: Verdict::Vacuous,
            parameters: json!({ "m_set": [], "m_set_variant": m_set.variant.as_str() }),
            witnesses: json!({ "beta": [], "cycles": [] }),
            counterexamples: json!([]),
            census: json!({ "per_beta": {} }),
            warnings: {
                warnings.push(format!("the {} set is empty over F_{q}", m_set.variant.as_str()));
                warnings
            },
        };
    }

    let mut per_beta = Map::new();
    let mut counterexamples = Vec::new();
    let mut all_ok = true;
    for &beta in &m_set.members {
        let (fz, gz) = pair_factorizations(field, beta).expect("m-set beta is admissible");
        let family: Vec<&crate::factorization::OneFactor> =
            fz.factors().iter().chain(gz.factors().iter()).collect();
        let n = family.len() as u64;
        let pairs: Vec<(u64, u64)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let counts: Vec<((u64, u64), usize)> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let count = union_cycles(family[i as usize], family[j as usize])
                    .expect("distinct factors in the combined family")
                    .structure
                    .count_of(4);
                ((i, j), count)
            })
            .collect();
        let max = counts.iter().map(|&(_, c)| c).max().unwrap_or(0);
        let mut distribution = Map::new();
        let highest = counts.iter().map(|&(_, c)| c).max().unwrap_or(0);
        for value in 0..=highest {
            let occurrences = counts.iter().filter(|&&(_, c)| c == value).count();
            if occurrences > 0 {
                distribution.insert(value.to_string(), Value::from(occurrences));
            }
        }
        per_beta.insert(
            beta.value().to_string(),
            json!({
                "max_four_cycles": max,
                "count_distribution": Value::Object(distribution),
            }),
        );
        if max > 2 {
            all_ok = false;
            let &(pair, count) = counts.iter().find(|&&(_, c)| c > 2).unwrap();
            counterexamples.push(json!({
                "beta": beta.value(),
                "pair": [pair.0, pair.1],
                "four_cycles": count,
            }));
        }
    }

    VerdictReport {
        claim: Claim::CombinedAtMostTwoC4,
        q,
        verdict: if all_ok {
            Verdict::Confirmed
        } else {
            Verdict::Refuted
        },
        parameters: json!({
            "m_set": values(&m_set.members),
            "m_set_variant": m_set.variant.as_str(),
        }),
        witnesses: if all_ok {
            json!({ "beta": values(&m_set.members), "cycles": [] })
        } else {
            json!({ "beta": [], "cycles": [] })
        },
        counterexamples: Value::Array(counterexamples),
        census: json!({ "per_beta": Value::Object(per_beta) }),
        warnings,
    }
}

fn family_report(
    claim: Claim,
    field: &PrimeField,
    check: impl Fn(&[FieldElement]) -> (Value, Vec<Value>),
) -> VerdictReport {
    let q = field.order();
    if q % 4 != 3 {
        return VerdictReport {
            claim,
            q,
            verdict: Verdict::Vacuous,
            parameters: json!({ "candidates": [] }),
            witnesses: json!({ "beta": [], "cycles": [] }),
            counterexamples: json!([]),
            census: json!({}),
            warnings: vec![format!(
                "q = {q} is not ≡ 3 (mod 4); the S_beta construction does not apply"
            )],
        };
    }
    let candidates = horton_candidates(field);
    let (census, counterexamples) = check(&candidates);
    let verdict = if counterexamples.is_empty() {
        Verdict::Confirmed
    } else {
        Verdict::Refuted
    };
    VerdictReport {
        claim,
        q,
        verdict,
        parameters: json!({ "candidates": values(&candidates) }),
        witnesses: if verdict == Verdict::Confirmed {
            json!({ "beta": values(&candidates), "cycles": [] })
        } else {
            json!({ "beta": [], "cycles": [] })
        },
        counterexamples: Value::Array(counterexamples),
        census,
        warnings: Vec::new(),
    }
}

/// Run one claim at one q. `beta` restricts the β-parameterized claims to
/// a single instance; claims over the whole family reject it.
pub fn verify_claim(
    field: &PrimeField,
    claim: Claim,
    beta: Option<FieldElement>,
) -> Result<VerdictReport, LabError> {
    if beta.is_some() {
        match claim {
            Claim::InfinityFourCycle
            | Claim::OneC4FromQuadraticRoot
            | Claim::OneC4FromMSet
            | Claim::OneC4Single
            | Claim::CrossNoInfinityFourCycle
            | Claim::CrossTwoC4 => {}
            other => return Err(LabError::BetaNotApplicable(other.id())),
        }
    }

    match claim {
        Claim::StrongStarterFamily => Ok(family_report(claim, field, |candidates| {
            let failures: Vec<Value> = candidates
                .par_iter()
                .filter_map(|&b| {
                    let starter = match Starter::horton(field, b) {
                        Ok(s) => s,
                        Err(e) => {
                            return Some(json!({ "beta": b.value(), "error": e.to_string() }))
                        }
                    };
                    if let Err(v) = check_starter(field, starter.pairs()) {
                        return Some(json!({ "beta": b.value(), "violation": v.to_string() }));
                    }
                    if let Err(v) = check_strong_starter(field, starter.pairs()) {
                        return Some(json!({ "beta": b.value(), "violation": v.to_string() }));
                    }
                    None
                })
                .collect();
            (
                json!({ "beta_checked": candidates.len() }),
                failures,
            )
        })),
        Claim::DistinctStartersOrthogonal => Ok(family_report(claim, field, |candidates| {
            let starters: Vec<Starter> = candidates
                .iter()
                .map(|&b| Starter::horton(field, b).expect("admissible beta"))
                .collect();
            let pairs: Vec<(usize, usize)> = (0..starters.len())
                .flat_map(|i| (i + 1..starters.len()).map(move |j| (i, j)))
                .collect();
            let failures: Vec<Value> = pairs
                .par_iter()
                .filter_map(|&(i, j)| {
                    match are_orthogonal_starters(&starters[i], &starters[j]) {
                        Ok(true) => None,
                        Ok(false) => Some(json!({
                            "beta_pair": [candidates[i].value(), candidates[j].value()],
                        })),
                        Err(e) => Some(json!({ "error": e.to_string() })),
                    }
                })
                .collect();
            (json!({ "pairs_checked": pairs.len() }), failures)
        })),
        Claim::NegationOrthogonal => Ok(family_report(claim, field, |candidates| {
            let failures: Vec<Value> = candidates
                .par_iter()
                .filter_map(|&b| {
                    let starter = Starter::horton(field, b).expect("admissible beta");
                    match are_orthogonal_starters(&starter, &starter.negate()) {
                        Ok(true) => None,
                        Ok(false) => Some(json!({ "beta": b.value() })),
                        Err(e) => Some(json!({ "beta": b.value(), "error": e.to_string() })),
                    }
                })
                .collect();
            (json!({ "beta_checked": candidates.len() }), failures)
        })),
        Claim::UniformFactorization => Ok(family_report(claim, field, |candidates| {
            let results: Vec<(u64, crate::census::UniformityReport)> = candidates
                .par_iter()
                .map(|&b| {
                    let fz = horton_factorization(field, b).expect("admissible beta");
                    (b.value(), crate::census::uniformity_check(&fz))
                })
                .collect();
            let mut structures = Map::new();
            let mut failures = Vec::new();
            for (beta, report) in &results {
                structures.insert(
                    beta.to_string(),
                    match &report.common {
                        Some(s) => Value::from(s.to_string()),
                        None => Value::from("non-uniform"),
                    },
                );
                if !report.uniform {
                    let d = report.divergence.as_ref().unwrap();
                    failures.push(json!({
                        "beta": beta,
                        "pair_a": [d.pair_a.0, d.pair_a.1],
                        "structure_a": d.structure_a.to_string(),
                        "pair_b": [d.pair_b.0, d.pair_b.1],
                        "structure_b": d.structure_b.to_string(),
                    }));
                }
            }
            let full = results.iter().all(|(_, r)| r.full_pairs_checked);
            (
                json!({
                    "common_structure_per_beta": Value::Object(structures),
                    "full_pairs_checked": full,
                }),
                failures,
            )
        })),
        Claim::InfinityFourCycle => match beta {
            Some(b) => verify_lemma_infty_c4(field, b),
            None => {
                let q = field.order();
                let mut warnings = Vec::new();
                if q % 4 != 3 {
                    warnings.push(format!(
                        "q = {q} is not ≡ 3 (mod 4); the S_beta construction does not apply"
                    ));
                }
                let roots = if q % 4 == 3 { nqr_roots(field) } else { Vec::new() };
                if roots.is_empty() {
                    return Ok(VerdictReport {
                        claim,
                        q,
                        verdict: Verdict::Vacuous,
                        parameters: json!({ "nqr_roots": [] }),
                        witnesses: json!({ "beta": [], "cycles": [] }),
                        counterexamples: json!([]),
                        census: json!({
                            "roots": solve_beta_quadratic(field)
                                .iter()
                                .map(|(b, c)| json!({ "beta": b.value(), "class": c.to_string() }))
                                .collect::<Vec<_>>(),
                        }),
                        warnings: {
                            warnings.push(format!(
                                "no non-residue root of beta^2 - beta + 1 exists over F_{q}"
                            ));
                            warnings
                        },
                    });
                }
                let reports: Vec<VerdictReport> = roots
                    .iter()
                    .map(|&b| verify_lemma_infty_c4(field, b).expect("root hypothesis holds"))
                    .collect();
                Ok(merge_per_beta_reports(claim, field, &roots, reports))
            }
        },
        Claim::NoQuadraticRootInNqr => {
            let q = field.order();
            let mut warnings = Vec::new();
            if let Some(w) = congruence_warning(field, "q ≡ −1 (mod 12)", q % 12 == 11) {
                warnings.push(w);
                return Ok(VerdictReport {
                    claim,
                    q,
                    verdict: Verdict::Vacuous,
                    parameters: json!({}),
                    witnesses: json!({ "beta": [], "cycles": [] }),
                    counterexamples: json!([]),
                    census: json!({}),
                    warnings,
                });
            }
            let roots = solve_beta_quadratic(field);
            let offenders = nqr_roots(field);
            let verdict = if offenders.is_empty() {
                Verdict::Confirmed
            } else {
                Verdict::Refuted
            };
            Ok(VerdictReport {
                claim,
                q,
                verdict,
                parameters: json!({}),
                witnesses: json!({ "beta": [], "cycles": [] }),
                counterexamples: Value::Array(
                    offenders
                        .iter()
                        .map(|b| json!({ "beta": b.value(), "class": "NQR" }))
                        .collect(),
                ),
                census: json!({
                    "roots": roots
                        .iter()
                        .map(|(b, c)| json!({ "beta": b.value(), "class": c.to_string() }))
                        .collect::<Vec<_>>(),
                }),
                warnings,
            })
        }
        Claim::OneC4FromQuadraticRoot => {
            let q = field.order();
            if let Some(b) = beta {
                let one = field.one();
                if !(b * b - b + one).is_zero() {
                    return Err(LabError::HypothesisUnmet(format!(
                        "beta = {b} is not a root of beta^2 - beta + 1 over F_{q}"
                    )));
                }
                return verify_one_c4(field, b);
            }
            let mut warnings = Vec::new();
            for (wanted, holds) in [
                ("q ≡ 3 (mod 8)", q % 8 == 3),
                ("q ≡ 1 (mod 3)", q % 3 == 1),
                ("q ≥ 11", q >= 11),
            ] {
                if let Some(w) = congruence_warning(field, wanted, holds) {
                    warnings.push(w);
                }
            }
            let hypothesis_ok = q % 8 == 3 && q % 3 == 1 && q >= 11 && q % 4 == 3;
            let roots = if q % 4 == 3 { nqr_roots(field) } else { Vec::new() };
            if !hypothesis_ok || roots.is_empty() {
                if roots.is_empty() {
                    warnings.push(format!(
                        "no non-residue root of beta^2 - beta + 1 exists over F_{q}"
                    ));
                }
                return Ok(VerdictReport {
                    claim,
                    q,
                    verdict: Verdict::Vacuous,
                    parameters: json!({ "nqr_roots": values(&roots) }),
                    witnesses: json!({ "beta": [], "cycles": [] }),
                    counterexamples: json!([]),
                    census: json!({}),
                    warnings,
                });
            }
            let reports: Vec<VerdictReport> = roots
                .iter()
                .map(|&b| verify_one_c4(field, b).expect("admissible beta"))
                .collect();
            Ok(merge_per_beta_reports(claim, field, &roots, reports))
        }
        Claim::OneC4FromMSet => {
            let q = field.order();
            if let Some(b) = beta {
                let m = find_m_set(field, MSetVariant::LemmaFinal);
                if !m.members.contains(&b) {
                    return Err(LabError::HypothesisUnmet(format!(
                        "beta = {b} is not in the {} set over F_{q}",
                        m.variant.as_str()
                    )));
                }
                return verify_one_c4(field, b);
            }
            let mut warnings = Vec::new();
            if let Some(w) = congruence_warning(field, "q ≡ 11 (mod 24)", q % 24 == 11) {
                warnings.push(w);
            }
            if q % 4 != 3 {
                return Ok(VerdictReport {
                    claim,
                    q,
                    verdict: Verdict::Vacuous,
                    parameters: json!({ "m_set": [] }),
                    witnesses: json!({ "beta": [], "cycles": [] }),
                    counterexamples: json!([]),
                    census: json!({}),
                    warnings,
                });
            }
            let m = find_m_set(field, MSetVariant::LemmaFinal);
            if m.members.is_empty() {
                warnings.push(format!("the {} set is empty over F_{q}", m.variant.as_str()));
                return Ok(VerdictReport {
                    claim,
                    q,
                    verdict: Verdict::Vacuous,
                    parameters: json!({ "m_set": [], "m_set_variant": m.variant.as_str() }),
                    witnesses: json!({ "beta": [], "cycles": [] }),
                    counterexamples: json!([]),
                    census: json!({}),
                    warnings,
                });
            }
            let reports: Vec<VerdictReport> = m
                .members
                .iter()
                .map(|&b| verify_one_c4(field, b).expect("m-set beta is admissible"))
                .collect();
            let mut merged = merge_per_beta_reports(claim, field, &m.members, reports);
            merged.warnings = warnings;
            Ok(merged)
        }
        Claim::MSetNonempty => {
            let q = field.order();
            let mut warnings = Vec::new();
            if let Some(w) = congruence_warning(field, "q ≡ 11 (mod 24)", q % 24 == 11) {
                warnings.push(w);
            }
            if q % 4 != 3 {
                return Ok(VerdictReport {
                    claim,
                    q,
                    verdict: Verdict::Vacuous,
                    parameters: json!({}),
                    witnesses: json!({ "beta": [], "cycles": [] }),
                    counterexamples: json!([]),
                    census: json!({}),
                    warnings,
                });
            }
            let m = find_m_set(field, MSetVariant::LemmaFinal);
            let candidates = horton_candidates(field);
            let verdict = if m.members.is_empty() {
                Verdict::Refuted
            } else {
                Verdict::Confirmed
            };
            Ok(VerdictReport {
                claim,
                q,
                verdict,
                parameters: json!({
                    "m_set_variant": m.variant.as_str(),
                    "candidates": values(&candidates),
                }),
                witnesses: json!({ "beta": values(&m.members), "cycles": [] }),
                counterexamples: if verdict == Verdict::Refuted {
                    json!([{ "exhausted_candidates": values(&candidates), "members_found": 0 }])
                } else {
                    json!([])
                },
                census: json!({ "m_set": values(&m.members) }),
                warnings,
            })
        }
        Claim::ExistsOneC4 => Ok(verify_main_1(field)),
        Claim::CrossNoInfinityFourCycle => match beta {
            Some(b) => verify_pair_infty_cycles(field, b),
            None => {
                let q = field.order();
                let mut warnings = Vec::new();
                if let Some(w) = congruence_warning(field, "q ≡ 3 (mod 8)", q % 8 == 3) {
                    warnings.push(w);
                }
                if q % 4 != 3 {
                    return Ok(VerdictReport {
                        claim,
                        q,
                        verdict: Verdict::Vacuous,
                        parameters: json!({ "candidates": [] }),
                        witnesses: json!({ "beta": [], "cycles": [] }),
                        counterexamples: json!([]),
                        census: json!({}),
                        warnings,
                    });
                }
                let two = field.element(2);
                let half = two.inv().expect("2 is invertible");
                let candidates: Vec<FieldElement> = horton_candidates(field)
                    .into_iter()
                    .filter(|&b| b != two && b != half)
                    .collect();
                let reports: Vec<VerdictReport> = candidates
                    .iter()
                    .map(|&b| verify_pair_infty_cycles(field, b).expect("admissible beta"))
                    .collect();
                let mut merged = merge_per_beta_reports(claim, field, &candidates, reports);
                merged.warnings = warnings;
                Ok(merged)
            }
        },
        Claim::CrossTwoC4 => match beta {
            Some(b) => verify_pair_2c4(field, b),
            None => {
                let q = field.order();
                let mut warnings = Vec::new();
                if let Some(w) = congruence_warning(field, "q ≡ 11 (mod 24)", q % 24 == 11) {
                    warnings.push(w);
                }
                if q % 4 != 3 {
                    return Ok(VerdictReport {
                        claim,
                        q,
                        verdict: Verdict::Vacuous,
                        parameters: json!({ "m_set": [] }),
                        witnesses: json!({ "beta": [], "cycles": [] }),
                        counterexamples: json!([]),
                        census: json!({}),
                        warnings,
                    });
                }
                let m = find_m_set(field, MSetVariant::TheoremMain2);
                if m.members.is_empty() {
                    warnings.push(format!("the {} set is empty over F_{q}", m.variant.as_str()));
                    return Ok(VerdictReport {
                        claim,
                        q,
                        verdict: Verdict::Vacuous,
                        parameters: json!({ "m_set": [], "m_set_variant": m.variant.as_str() }),
                        witnesses: json!({ "beta": [], "cycles": [] }),
                        counterexamples: json!([]),
                        census: json!({}),
                        warnings,
                    });
                }
                let reports: Vec<VerdictReport> = m
                    .members
                    .iter()
                    .map(|&b| verify_pair_2c4(field, b).expect("m-set beta is admissible"))
                    .collect();
                let mut merged = merge_per_beta_reports(claim, field, &m.members, reports);
                merged.warnings = warnings;
                Ok(merged)
            }
        },
        Claim::CombinedAtMostTwoC4 => Ok(verify_corollary(field)),
        Claim::OneC4Single => match beta {
            Some(b) => verify_one_c4(field, b),
            None => Err(LabError::BetaRequired(Claim::OneC4Single.id())),
        },
    }
}

/// Aggregate per-β reports of the same claim into one claim-level report:
/// confirmed when every instance confirms, refuted when any refutes.
fn merge_per_beta_reports(
    claim: Claim,
    field: &PrimeField,
    betas: &[FieldElement],
    reports: Vec<VerdictReport>,
) -> VerdictReport {
    debug_assert_eq!(betas.len(), reports.len());
    let refuted: Vec<(&FieldElement, &VerdictReport)> = betas
        .iter()
        .zip(&reports)
        .filter(|(_, r)| r.verdict == Verdict::Refuted)
        .collect();
    let verdict = if refuted.is_empty() {
        Verdict::Confirmed
    } else {
        Verdict::Refuted
    };

    let mut per_beta = Map::new();
    for (beta, report) in betas.iter().zip(&reports) {
        per_beta.insert(
            beta.value().to_string(),
            json!({
                "verdict": report.verdict,
                "census": report.census,
            }),
        );
    }
    let witnesses_beta: Vec<u64> = betas
        .iter()
        .zip(&reports)
        .filter(|(_, r)| r.verdict == Verdict::Confirmed)
        .map(|(b, _)| b.value())
        .collect();
    let witness_cycles: Vec<Value> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Confirmed)
        .flat_map(|r| {
            r.witnesses["cycles"]
                .as_array()
                .cloned()
                .unwrap_or_default()
        })
        .collect();

    VerdictReport {
        claim,
        q: field.order(),
        verdict,
        parameters: json!({ "beta_instances": values(betas) }),
        witnesses: json!({ "beta": witnesses_beta, "cycles": witness_cycles }),
        counterexamples: Value::Array(
            refuted
                .iter()
                .map(|(b, r)| {
                    json!({
                        "beta": b.value(),
                        "counterexamples": r.counterexamples,
                    })
                })
                .collect(),
        ),
        census: json!({ "per_beta": Value::Object(per_beta) }),
        warnings: Vec::new(),
    }
}

/// Primes in [lo, hi] by a plain sieve.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            if p as u64 >= lo {
                primes.push(p as u64);
            }
            let mut multiple = p * p;
            while multiple <= n {
                composite[multiple] = true;
                multiple += p;
            }
        }
    }
    primes
}

/// Primes the batch scan visits: q ≡ 11 (mod 24) always, plus the
/// q ≡ 3 (mod 4), q ≡ 1 (mod 3) regime on request.
pub fn scan_primes(lo: u64, hi: u64, include_mod3_regime: bool) -> Vec<u64> {
    primes_in_range(lo, hi)
        .into_iter()
        .filter(|&q| q % 24 == 11 || (include_mod3_regime && q % 4 == 3 && q % 3 == 1))
        .collect()
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub lo: u64,
    pub hi: u64,
    pub claims: Vec<Claim>,
    pub include_mod3_regime: bool,
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub q: u64,
    pub claim: Claim,
    pub verdict: Verdict,
    pub summary: String,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub lo: u64,
    pub hi: u64,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn any_refuted(&self) -> bool {
        self.rows.iter().any(|r| r.verdict == Verdict::Refuted)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "range": [self.lo, self.hi],
            "rows": self.rows.iter().map(|r| json!({
                "q": r.q,
                "claim": r.claim.id(),
                "verdict": r.verdict,
                "summary": r.summary,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<6} {:<12} {:<10} summary\n",
            "q", "claim", "verdict"
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "{:<6} {:<12} {:<10} {}\n",
                row.q,
                row.claim.id(),
                row.verdict,
                row.summary
            ));
        }
        out
    }
}

fn summarize(report: &VerdictReport) -> String {
    match report.verdict {
        Verdict::Confirmed => {
            let witnesses = report.witnesses["beta"].as_array().map_or(0, |a| a.len());
            if witnesses > 0 {
                format!("{witnesses} witness beta")
            } else {
                "holds".to_string()
            }
        }
        Verdict::Refuted => {
            let count = report.counterexamples.as_array().map_or(0, |a| a.len());
            format!("{count} counterexample(s)")
        }
        Verdict::Vacuous => report
            .warnings
            .first()
            .cloned()
            .unwrap_or_else(|| "hypothesis set empty".to_string()),
    }
}

/// Run the selected claims over every scan prime in the range. Rows come
/// out in ascending q, claims in canonical order.
pub fn scan(config: &ScanConfig) -> ScanReport {
    let mut claims: Vec<Claim> = Claim::all_scannable()
        .into_iter()
        .filter(|c| config.claims.contains(c))
        .collect();
    if claims.is_empty() && config.claims.is_empty() {
        claims = Claim::all_scannable().to_vec();
    }
    let mut rows = Vec::new();
    for q in scan_primes(config.lo, config.hi, config.include_mod3_regime) {
        let field = PrimeField::new(q).expect("sieve yields valid moduli");
        for &claim in &claims {
            let report = verify_claim(&field, claim, None)
                .expect("claim-level verification takes no beta");
            rows.push(ScanRow {
                q,
                claim,
                verdict: report.verdict,
                summary: summarize(&report),
            });
        }
    }
    ScanReport {
        lo: config.lo,
        hi: config.hi,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn quadratic_roots() {
        let roots19 = solve_beta_quadratic(&f(19));
        let summary: Vec<(u64, ResidueClass)> =
            roots19.iter().map(|&(b, c)| (b.value(), c)).collect();
        assert_eq!(
            summary,
            vec![
                (8, ResidueClass::NonQuadratic),
                (12, ResidueClass::NonQuadratic)
            ]
        );
        assert!(solve_beta_quadratic(&f(11)).is_empty());
        let roots7: Vec<u64> = solve_beta_quadratic(&f(7))
            .iter()
            .map(|&(b, _)| b.value())
            .collect();
        assert_eq!(roots7, vec![3, 5]);
    }

    #[test]
    fn roots_satisfy_the_quadratic_exactly() {
        for q in [7, 19, 31, 43] {
            let field = f(q);
            for (b, _) in solve_beta_quadratic(&field) {
                assert!((b * b - b + field.one()).is_zero());
            }
        }
    }

    #[test]
    fn m_set_fixtures() {
        let field = f(59);
        let lemma = find_m_set(&field, MSetVariant::LemmaFinal);
        assert!(lemma.congruence_ok);
        assert_eq!(
            values(&lemma.members),
            vec![11, 14, 24, 32, 33, 34, 38, 43, 44, 55]
        );
        let main2 = find_m_set(&field, MSetVariant::TheoremMain2);
        assert_eq!(values(&main2.members), vec![32, 33, 38, 43, 55]);

        // the restricted set refines the lemma set
        for b in &main2.members {
            assert!(lemma.members.contains(b));
        }

        let f11 = f(11);
        let m11 = find_m_set(&f11, MSetVariant::LemmaFinal);
        assert!(m11.congruence_ok);
        assert!(m11.members.is_empty());

        let f83 = f(83);
        assert_eq!(
            values(&find_m_set(&f83, MSetVariant::TheoremMain2).members),
            vec![14, 19, 54, 55]
        );
    }

    #[test]
    fn lemma_infty_c4_confirmed_at_q19() {
        let field = f(19);
        let report = verify_lemma_infty_c4(&field, field.element(8)).unwrap();
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert_eq!(report.claim.id(), "lemma-2.2");
        let cycles = report.witnesses["cycles"].as_array().unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0], json!([0, 13, 4, "inf"]));
    }

    #[test]
    fn lemma_infty_c4_rejects_non_roots() {
        let field = f(19);
        assert!(matches!(
            verify_lemma_infty_c4(&field, field.element(4)),
            Err(LabError::Starter(StarterError::BadResidue { beta: 4, .. }))
        ));
        assert!(matches!(
            verify_lemma_infty_c4(&field, field.element(10)),
            Err(LabError::HypothesisUnmet(_))
        ));
    }

    #[test]
    fn lemma_infty_c4_at_q31() {
        let field = f(31);
        for beta in [6u64, 26] {
            let report = verify_lemma_infty_c4(&field, field.element(beta)).unwrap();
            assert_eq!(report.verdict, Verdict::Confirmed);
        }
    }

    #[test]
    fn one_c4_regimes() {
        let f19 = f(19);
        let report = verify_one_c4(&f19, f19.element(8)).unwrap();
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert_eq!(report.claim.id(), "thm-2.4");
        assert_eq!(report.census["through_infinity"], "all");

        let f59 = f(59);
        let report = verify_one_c4(&f59, f59.element(32)).unwrap();
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert_eq!(report.claim.id(), "lemma-2.6");
        assert_eq!(report.census["through_infinity"], "none");
        let cycles = report.witnesses["cycles"].as_array().unwrap();
        assert_eq!(cycles[0], json!([5, 36, 31, 42]));

        // beta outside both regimes: C4-free, hence refuted for (1,C4)
        let report = verify_one_c4(&f59, f59.element(6)).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        assert_eq!(report.claim.id(), "one-c4");
        assert_eq!(report.census["classification"]["l"], 0);

        assert!(matches!(
            verify_one_c4(&f59, f59.element(4)),
            Err(LabError::Starter(StarterError::BadResidue { beta: 4, .. }))
        ));
    }

    #[test]
    fn main1_confirmed_at_q59_and_refuted_at_q11() {
        let report = verify_main_1(&f(59));
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert_eq!(
            report.witnesses["beta"],
            json!([11, 14, 24, 32, 33, 34, 38, 43, 44, 55])
        );
        assert!(report.warnings.is_empty());

        let report11 = verify_main_1(&f(11));
        assert_eq!(report11.verdict, Verdict::Refuted);
        assert_eq!(
            report11.census["beta_to_l"],
            json!({ "2": 0, "6": 0, "7": 0, "8": 0 })
        );
    }

    #[test]
    fn main1_outside_congruence_warns_but_scans() {
        let report = verify_main_1(&f(19));
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert!(!report.warnings.is_empty());
        assert_eq!(report.witnesses["beta"], json!([8, 12, 14, 15]));
    }

    #[test]
    fn pair_infty_cycles_readings() {
        let f19 = f(19);
        let report = verify_pair_infty_cycles(&f19, f19.element(8)).unwrap();
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert_eq!(report.census["four_cycles_through_infinity_total"], 0);
        assert_eq!(report.census["four_cycles_avoiding_infinity_total"], 0);

        // 10 = 2⁻¹ (mod 19) is excluded by hypothesis
        assert!(matches!(
            verify_pair_infty_cycles(&f19, f19.element(10)),
            Err(LabError::BadResidue { beta: 10, .. })
        ));

        // beta = 47 at q = 59: no 4-cycle through ∞, but some avoiding it
        let f59 = f(59);
        let report = verify_pair_infty_cycles(&f59, f59.element(47)).unwrap();
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert_eq!(report.census["reading_no_c4_through_infinity"], "confirmed");
        assert_eq!(report.census["reading_no_c4_avoiding_infinity"], "refuted");
        assert!(report.census["four_cycles_avoiding_infinity_total"]
            .as_u64()
            .unwrap() > 0);
    }

    #[test]
    fn pair_2c4_census_is_definitive_at_q59() {
        let f59 = f(59);
        let report = verify_pair_2c4(&f59, f59.element(32)).unwrap();
        // the census finds C4-free cross unions, so exactly-two is refuted
        assert_eq!(report.verdict, Verdict::Refuted);
        assert_eq!(report.census["classification"]["l"], 0);
        assert_eq!(report.census["orthogonal"], true);
        assert_eq!(report.census["max_overlap"], 1);

        assert!(matches!(
            verify_pair_2c4(&f59, f59.element(10)),
            Err(LabError::HypothesisUnmet(_))
        ));
        let f11 = f(11);
        assert!(matches!(
            verify_pair_2c4(&f11, f11.element(7)),
            Err(LabError::HypothesisUnmet(_))
        ));
    }

    #[test]
    fn corollary_confirmed_at_q59_vacuous_at_q11() {
        let report = verify_corollary(&f(59));
        assert_eq!(report.verdict, Verdict::Confirmed);
        let per_beta = report.census["per_beta"].as_object().unwrap();
        assert_eq!(per_beta.len(), 5);
        for (_, entry) in per_beta {
            assert!(entry["max_four_cycles"].as_u64().unwrap() <= 2);
        }

        let report11 = verify_corollary(&f(11));
        assert_eq!(report11.verdict, Verdict::Vacuous);
    }

    #[test]
    fn claim_parsing_and_aliases() {
        assert_eq!(Claim::parse("thm-2.9"), Some(Claim::ExistsOneC4));
        assert_eq!(Claim::parse("thm-main1"), Some(Claim::ExistsOneC4));
        assert_eq!(Claim::parse("lemma-3.2"), Some(Claim::CrossTwoC4));
        assert_eq!(Claim::parse("thm-main2"), Some(Claim::CrossTwoC4));
        assert_eq!(Claim::parse("one-c4"), Some(Claim::OneC4Single));
        assert_eq!(Claim::parse("nope"), None);
    }

    #[test]
    fn claim_level_family_checks_at_q19() {
        let field = f(19);
        for claim in [
            Claim::StrongStarterFamily,
            Claim::DistinctStartersOrthogonal,
            Claim::NegationOrthogonal,
            Claim::UniformFactorization,
        ] {
            let report = verify_claim(&field, claim, None).unwrap();
            assert_eq!(report.verdict, Verdict::Confirmed, "claim {}", claim.id());
        }
    }

    #[test]
    fn lemma_2_3_confirmed_on_its_congruence_class() {
        let report = verify_claim(&f(59), Claim::NoQuadraticRootInNqr, None).unwrap();
        assert_eq!(report.verdict, Verdict::Confirmed);
        let report19 = verify_claim(&f(19), Claim::NoQuadraticRootInNqr, None).unwrap();
        assert_eq!(report19.verdict, Verdict::Vacuous);
    }

    #[test]
    fn lemma_2_8_refuted_at_q11_confirmed_at_q59() {
        let report11 = verify_claim(&f(11), Claim::MSetNonempty, None).unwrap();
        assert_eq!(report11.verdict, Verdict::Refuted);
        let report59 = verify_claim(&f(59), Claim::MSetNonempty, None).unwrap();
        assert_eq!(report59.verdict, Verdict::Confirmed);
    }

    #[test]
    fn beta_parameter_rules() {
        let field = f(59);
        assert!(matches!(
            verify_claim(&field, Claim::MSetNonempty, Some(field.element(32))),
            Err(LabError::BetaNotApplicable("lemma-2.8"))
        ));
        assert!(matches!(
            verify_claim(&field, Claim::OneC4Single, None),
            Err(LabError::BetaRequired("one-c4"))
        ));
    }

    #[test]
    fn reports_are_reproducible() {
        let field = f(59);
        let a = verify_main_1(&field).to_json_string();
        let b = verify_main_1(&field).to_json_string();
        assert_eq!(a, b);

        let c = verify_pair_2c4(&field, field.element(32))
            .unwrap()
            .to_json_string();
        let d = verify_pair_2c4(&field, field.element(32))
            .unwrap()
            .to_json_string();
        assert_eq!(c, d);
    }

    #[test]
    fn scan_primes_fixture() {
        assert_eq!(scan_primes(11, 200, false), vec![11, 59, 83, 107, 131, 179]);
        assert!(scan_primes(11, 200, true).contains(&19));
        assert!(scan_primes(11, 200, true).contains(&31));
        assert!(scan_primes(11, 200, true).contains(&43));
        assert!(scan_primes(12, 58, false).is_empty());
    }

    #[test]
    fn scan_lemma_2_8_over_small_range() {
        let report = scan(&ScanConfig {
            lo: 11,
            hi: 60,
            claims: vec![Claim::MSetNonempty],
            include_mod3_regime: false,
        });
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.rows[0].q, 11);
        assert_eq!(report.rows[0].verdict, Verdict::Refuted);
        assert_eq!(report.rows[1].q, 59);
        assert_eq!(report.rows[1].verdict, Verdict::Confirmed);
        assert!(report.any_refuted());
    }

    #[test]
    fn empty_scan_range_yields_empty_table() {
        let report = scan(&ScanConfig {
            lo: 12,
            hi: 58,
            claims: vec![Claim::MSetNonempty],
            include_mod3_regime: false,
        });
        assert!(report.rows.is_empty());
        assert!(!report.any_refuted());
    }
}
