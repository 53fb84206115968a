//! Cycle census of factor unions: decompose the 2-regular multigraph
//! F ∪ G into cycles, count k-cycles, test uniformity of a factorization,
//! and classify the constant-k-cycle behaviour within one factorization or
//! across an orthogonal pair.

use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::factorization::{OneFactor, OneFactorization, OverlapReport, Vertex};
use crate::starters::StarterLabel;

/// Pair unions of distinct perfect matchings decompose into even cycles of
/// length ≥ 4; a shared edge contributes a single length-2 entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleStructure {
    lengths: Vec<usize>,
}

impl CycleStructure {
    pub fn from_lengths(mut lengths: Vec<usize>) -> Self {
        lengths.sort_unstable();
        CycleStructure { lengths }
    }

    /// Cycle lengths in ascending order.
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn count_of(&self, k: usize) -> usize {
        self.lengths.iter().filter(|&&len| len == k).count()
    }

    pub fn total_vertices(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.lengths.iter().map(|&l| Value::from(l)).collect())
    }
}

impl fmt::Display for CycleStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("the two factors are identical as edge sets")]
    IdenticalFactors,
    #[error("the factors are not perfect matchings of one common vertex set")]
    MismatchedVertexSets,
    #[error("factorizations are not orthogonal (max overlap {max_overlap})")]
    NotOrthogonal { max_overlap: usize },
    #[error("factorizations live on different vertex sets")]
    FieldMismatch,
}

/// Decomposition of F ∪ G into cycles, each reported as a canonical vertex
/// sequence: the smallest vertex leads and its smaller neighbour comes
/// second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionCycles {
    pub cycles: Vec<Vec<Vertex>>,
    pub structure: CycleStructure,
}

impl UnionCycles {
    pub fn k_cycles(&self, k: usize) -> impl Iterator<Item = &Vec<Vertex>> {
        self.cycles.iter().filter(move |c| c.len() == k)
    }
}

struct PartnerMap {
    q: u64,
    partner: Vec<usize>,
    vertex_of: Vec<Option<Vertex>>,
}

fn partner_map(factor: &OneFactor) -> Result<PartnerMap, CensusError> {
    // the first endpoint of the first canonical edge is always finite
    let q = factor
        .edges()
        .first()
        .map(|e| match e.endpoints().0 {
            Vertex::Finite(x) => x.modulus(),
            Vertex::Infinity => unreachable!("edges store the finite endpoint first"),
        })
        .ok_or(CensusError::MismatchedVertexSets)?;
    let n = q as usize + 1;
    let mut partner = vec![usize::MAX; n];
    let mut vertex_of = vec![None; n];
    for e in factor.edges() {
        let (u, v) = e.endpoints();
        if let Vertex::Finite(x) = u {
            if x.modulus() != q {
                return Err(CensusError::MismatchedVertexSets);
            }
        }
        if let Vertex::Finite(x) = v {
            if x.modulus() != q {
                return Err(CensusError::MismatchedVertexSets);
            }
        }
        let (iu, iv) = (u.index(q), v.index(q));
        if partner[iu] != usize::MAX || partner[iv] != usize::MAX {
            return Err(CensusError::MismatchedVertexSets);
        }
        partner[iu] = iv;
        partner[iv] = iu;
        vertex_of[iu] = Some(u);
        vertex_of[iv] = Some(v);
    }
    if partner.iter().any(|&p| p == usize::MAX) {
        return Err(CensusError::MismatchedVertexSets);
    }
    Ok(PartnerMap {
        q,
        partner,
        vertex_of,
    })
}

/// Unique cycle decomposition of the 2-regular multigraph F ∪ G.
pub fn union_cycles(f: &OneFactor, g: &OneFactor) -> Result<UnionCycles, CensusError> {
    if f.edges() == g.edges() {
        return Err(CensusError::IdenticalFactors);
    }
    let pf = partner_map(f)?;
    let pg = partner_map(g)?;
    if pf.q != pg.q {
        return Err(CensusError::MismatchedVertexSets);
    }
    let n = pf.q as usize + 1;

    let mut visited = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut seq = vec![start];
        // direction with the smaller second vertex; vertex order equals
        // index order because ∞ is the largest index
        let mut via_f = pf.partner[start] <= pg.partner[start];
        let mut cur = if via_f {
            pf.partner[start]
        } else {
            pg.partner[start]
        };
        while cur != start {
            visited[cur] = true;
            seq.push(cur);
            via_f = !via_f;
            cur = if via_f { pf.partner[cur] } else { pg.partner[cur] };
        }
        cycles.push(
            seq.into_iter()
                .map(|i| pf.vertex_of[i].expect("covered vertex"))
                .collect::<Vec<Vertex>>(),
        );
    }
    let structure = CycleStructure::from_lengths(cycles.iter().map(|c| c.len()).collect());
    Ok(UnionCycles { cycles, structure })
}

/// Number of length-k cycles in F ∪ G.
pub fn count_k_cycles(f: &OneFactor, g: &OneFactor, k: usize) -> Result<usize, CensusError> {
    Ok(union_cycles(f, g)?.structure.count_of(k))
}

/// The k-cycles of F ∪ G whose vertex set contains ∞.
pub fn cycles_through_infinity(
    f: &OneFactor,
    g: &OneFactor,
    k: usize,
) -> Result<Vec<Vec<Vertex>>, CensusError> {
    Ok(union_cycles(f, g)?
        .k_cycles(k)
        .filter(|c| c.iter().any(|v| v.is_infinity()))
        .cloned()
        .collect())
}

/// Two factor pairs whose unions disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub pair_a: (u64, u64),
    pub structure_a: CycleStructure,
    pub pair_b: (u64, u64),
    pub structure_b: CycleStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityReport {
    pub uniform: bool,
    /// The shared structure when uniform.
    pub common: Option<CycleStructure>,
    /// Structure of F_0 ∪ F_d per difference class d = 1 .. (q−1)/2.
    pub class_structures: Vec<(u64, CycleStructure)>,
    /// Whether every unordered pair was checked, not just class
    /// representatives.
    pub full_pairs_checked: bool,
    pub divergence: Option<Divergence>,
}

/// A factorization's factors are translates of one another, so the cycle
/// structure of F_γ ∪ F_δ can only depend on the difference class of
/// δ − γ. The check computes one representative per class and, at desk
/// scale (q ≤ 100) or for hand-built factorizations, re-verifies against
/// every unordered pair.
pub fn uniformity_check(fz: &OneFactorization) -> UniformityReport {
    let q = fz.field().order();
    let class_count = (q - 1) / 2;

    let class_structures: Vec<(u64, CycleStructure)> = (1..=class_count)
        .into_par_iter()
        .map(|d| {
            let cycles = union_cycles(fz.factor(0), fz.factor(d))
                .expect("validated factorization has distinct factors");
            (d, cycles.structure)
        })
        .collect();

    let common = class_structures[0].1.clone();
    let mut divergence = class_structures
        .iter()
        .find(|(_, s)| *s != common)
        .map(|(d, s)| Divergence {
            pair_a: (0, 1),
            structure_a: common.clone(),
            pair_b: (0, *d),
            structure_b: s.clone(),
        });

    let full = q <= 100 || *fz.label() == StarterLabel::Custom;
    if full && divergence.is_none() {
        let pairs: Vec<(u64, u64)> = (0..q)
            .flat_map(|i| (i + 1..q).map(move |j| (i, j)))
            .collect();
        divergence = pairs
            .par_iter()
            .find_first(|&&(i, j)| {
                let cycles = union_cycles(fz.factor(i), fz.factor(j))
                    .expect("validated factorization has distinct factors");
                cycles.structure != common
            })
            .map(|&(i, j)| {
                let structure = union_cycles(fz.factor(i), fz.factor(j)).unwrap().structure;
                Divergence {
                    pair_a: (0, 1),
                    structure_a: common.clone(),
                    pair_b: (i, j),
                    structure_b: structure,
                }
            });
    }

    UniformityReport {
        uniform: divergence.is_none(),
        common: if divergence.is_none() {
            Some(common)
        } else {
            None
        },
        class_structures,
        full_pairs_checked: full,
        divergence,
    }
}

/// A factor pair together with its k-cycle count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCount {
    pub pair: (u64, u64),
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CensusOutcome {
    Constant { l: usize },
    NotConstant { low: PairCount, high: PairCount },
}

impl CensusOutcome {
    pub fn constant(&self) -> Option<usize> {
        match self {
            CensusOutcome::Constant { l } => Some(*l),
            CensusOutcome::NotConstant { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CensusOutcome::Constant { l } => json!({ "l": l }),
            CensusOutcome::NotConstant { low, high } => json!({
                "l": "not-constant",
                "witnesses": {
                    "low": { "pair": [low.pair.0, low.pair.1], "count": low.count },
                    "high": { "pair": [high.pair.0, high.pair.1], "count": high.count },
                },
            }),
        }
    }
}

fn outcome_from_counts(counts: &[((u64, u64), usize)]) -> CensusOutcome {
    let first = counts[0].1;
    if counts.iter().all(|&(_, c)| c == first) {
        return CensusOutcome::Constant { l: first };
    }
    let &(low_pair, low) = counts.iter().min_by_key(|&&(p, c)| (c, p)).unwrap();
    let &(high_pair, high) = counts.iter().max_by_key(|&&(p, c)| (c, std::cmp::Reverse(p))).unwrap();
    CensusOutcome::NotConstant {
        low: PairCount {
            pair: low_pair,
            count: low,
        },
        high: PairCount {
            pair: high_pair,
            count: high,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCycleCensus {
    pub k: usize,
    /// k-cycle count of F_0 ∪ F_d per difference class d.
    pub per_class: Vec<(u64, usize)>,
    pub outcome: CensusOutcome,
    pub full_pairs_checked: bool,
    /// Whether l·k ≤ q+1, when the count is constant.
    pub lk_within_bound: Option<bool>,
}

/// Constant number of k-cycles across all pair unions of one
/// factorization, or a non-constant verdict with witness pairs.
pub fn classify_l_ck(fz: &OneFactorization, k: usize) -> KCycleCensus {
    let q = fz.field().order();
    let class_count = (q - 1) / 2;

    let per_class: Vec<(u64, usize)> = (1..=class_count)
        .into_par_iter()
        .map(|d| {
            let count = count_k_cycles(fz.factor(0), fz.factor(d), k)
                .expect("validated factorization has distinct factors");
            (d, count)
        })
        .collect();

    let full = q <= 100 || *fz.label() == StarterLabel::Custom;
    let counts: Vec<((u64, u64), usize)> = if full {
        let pairs: Vec<(u64, u64)> = (0..q)
            .flat_map(|i| (i + 1..q).map(move |j| (i, j)))
            .collect();
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let count = count_k_cycles(fz.factor(i), fz.factor(j), k)
                    .expect("validated factorization has distinct factors");
                ((i, j), count)
            })
            .collect()
    } else {
        per_class.iter().map(|&(d, c)| ((0, d), c)).collect()
    };

    let outcome = outcome_from_counts(&counts);
    let lk_within_bound = outcome.constant().map(|l| (l * k) as u64 <= q + 1);
    KCycleCensus {
        k,
        per_class,
        outcome,
        full_pairs_checked: full,
        lk_within_bound,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossKCycleCensus {
    pub k: usize,
    /// k-cycle count of F_0 ∪ G_s per shift s = 0 .. q−1.
    pub per_shift: Vec<(u64, usize)>,
    /// Outcome over all q² ordered cross pairs (γ, δ).
    pub outcome: CensusOutcome,
    pub overlap: OverlapReport,
}

/// Constant number of k-cycles across all ordered cross pairs F_γ ∪ G_δ of
/// two orthogonal factorizations. Shared edges count as 2-cycles and never
/// as k-cycles for k ≥ 3.
pub fn classify_pair_l_ck(
    a: &OneFactorization,
    b: &OneFactorization,
    k: usize,
) -> Result<CrossKCycleCensus, CensusError> {
    if a.field() != b.field() {
        return Err(CensusError::FieldMismatch);
    }
    let overlap = a
        .overlap_report(b)
        .map_err(|_| CensusError::FieldMismatch)?;
    if !overlap.orthogonal() {
        return Err(CensusError::NotOrthogonal {
            max_overlap: overlap.max_overlap,
        });
    }
    Ok(cross_census_unchecked(a, b, k, overlap))
}

/// The same census without the orthogonality gate, for callers that must
/// report on non-orthogonal pairs instead of rejecting them.
pub fn cross_census_unchecked(
    a: &OneFactorization,
    b: &OneFactorization,
    k: usize,
    overlap: OverlapReport,
) -> CrossKCycleCensus {
    let q = a.field().order();
    let counts: Vec<((u64, u64), usize)> = (0..q * q)
        .into_par_iter()
        .map(|flat| {
            let (gamma, delta) = (flat / q, flat % q);
            let count = count_k_cycles(a.factor(gamma), b.factor(delta), k)
                .expect("orthogonal factorizations have distinct factors");
            ((gamma, delta), count)
        })
        .collect();
    let per_shift: Vec<(u64, usize)> = (0..q).map(|s| (s, counts[s as usize].1)).collect();
    CrossKCycleCensus {
        k,
        per_shift,
        outcome: outcome_from_counts(&counts),
        overlap,
    }
}

/// Machine-readable census of one factorization at cycle length k, shaped
/// as `{"q", "starter", "beta", "k", "per_class", "classification"}`.
pub fn census_report_json(fz: &OneFactorization, k: usize) -> Value {
    let q = fz.field().order();
    let census = classify_l_ck(fz, k);

    let mut per_class = Map::new();
    for d in 1..=(q - 1) / 2 {
        let cycles = union_cycles(fz.factor(0), fz.factor(d))
            .expect("validated factorization has distinct factors");
        per_class.insert(
            d.to_string(),
            json!({
                "lengths": cycles.structure.to_json(),
                "k_count": cycles.structure.count_of(k),
            }),
        );
    }

    let beta = match fz.label() {
        StarterLabel::Horton { beta } => Value::from(*beta),
        _ => Value::Null,
    };
    json!({
        "q": q,
        "starter": fz.label().to_string(),
        "beta": beta,
        "k": k,
        "per_class": Value::Object(per_class),
        "classification": census.outcome.to_json(),
        "full_pairs_checked": census.full_pairs_checked,
        "lk_within_bound": census.lk_within_bound,
    })
}
