//! One-factors and the translation-generated one-factorization of K_{q+1}
//! on the vertex set F_q ∪ {∞}, with validation, overlap reports, JSON
//! serialization, and DOT rendering of factor-pair unions.

use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::field::{FieldElement, PrimeField};
use crate::starters::{check_starter, Starter, StarterLabel, StarterViolation};

/// Vertex of K_{q+1}: a field element or the distinguished point at
/// infinity. Finite vertices order by residue; ∞ sorts last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Finite(FieldElement),
    Infinity,
}

impl Vertex {
    pub fn is_infinity(self) -> bool {
        matches!(self, Vertex::Infinity)
    }

    /// Translation fixing ∞: finite vertices shift by γ.
    pub fn translate(self, gamma: FieldElement) -> Vertex {
        match self {
            Vertex::Finite(x) => Vertex::Finite(x + gamma),
            Vertex::Infinity => Vertex::Infinity,
        }
    }

    /// Dense index in [0, q]: finite residues first, ∞ at position q.
    pub fn index(self, q: u64) -> usize {
        match self {
            Vertex::Finite(x) => x.value() as usize,
            Vertex::Infinity => q as usize,
        }
    }

    pub fn from_index(i: usize, field: &PrimeField) -> Vertex {
        if i as u64 == field.order() {
            Vertex::Infinity
        } else {
            Vertex::Finite(field.element(i as u64))
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            Vertex::Finite(x) => Value::from(x.value()),
            Vertex::Infinity => Value::from("inf"),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Finite(x) => write!(f, "{x}"),
            Vertex::Infinity => write!(f, "inf"),
        }
    }
}

/// Loop-free edge with canonically ordered endpoints, so equality is
/// structural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    a: Vertex,
    b: Vertex,
}

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Edge {
        assert!(u != v, "loops are not edges of K_n");
        if u <= v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.a, self.b)
    }

    pub fn translate(self, gamma: FieldElement) -> Edge {
        Edge::new(self.a.translate(gamma), self.b.translate(gamma))
    }

    pub fn to_json(self) -> Value {
        Value::Array(vec![self.a.to_json(), self.b.to_json()])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

/// Where a one-factor came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorOrigin {
    /// F_γ of a starter-generated factorization.
    Translate { starter: StarterLabel, gamma: u64 },
    Custom,
}

/// A perfect matching on the q+1 vertices, edges stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneFactor {
    edges: Vec<Edge>,
    origin: FactorOrigin,
}

impl OneFactor {
    pub fn new(mut edges: Vec<Edge>) -> OneFactor {
        edges.sort();
        OneFactor {
            edges,
            origin: FactorOrigin::Custom,
        }
    }

    fn translated_from_starter(starter: &Starter, gamma: FieldElement) -> OneFactor {
        let mut edges = Vec::with_capacity(starter.size() + 1);
        edges.push(Edge::new(Vertex::Infinity, Vertex::Finite(gamma)));
        for p in starter.pairs() {
            edges.push(Edge::new(
                Vertex::Finite(p.lo() + gamma),
                Vertex::Finite(p.hi() + gamma),
            ));
        }
        edges.sort();
        OneFactor {
            edges,
            origin: FactorOrigin::Translate {
                starter: starter.label().clone(),
                gamma: gamma.value(),
            },
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn origin(&self) -> &FactorOrigin {
        &self.origin
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// True when the edges cover F_q ∪ {∞} exactly once.
    pub fn is_perfect_matching_on(&self, field: &PrimeField) -> bool {
        let q = field.order();
        if self.edges.len() as u64 != (q + 1) / 2 {
            return false;
        }
        let mut covered = vec![false; q as usize + 1];
        for e in &self.edges {
            let (u, v) = e.endpoints();
            for vertex in [u, v] {
                if let Vertex::Finite(x) = vertex {
                    if x.modulus() != q {
                        return false;
                    }
                }
                let i = vertex.index(q);
                if covered[i] {
                    return false;
                }
                covered[i] = true;
            }
        }
        true
    }

    /// Number of edges shared with another factor.
    pub fn overlap(&self, other: &OneFactor) -> usize {
        let mut count = 0;
        let (mut i, mut j) = (0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            match self.edges[i].cmp(&other.edges[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    pub fn translate(&self, gamma: FieldElement) -> OneFactor {
        let mut edges: Vec<Edge> = self.edges.iter().map(|e| e.translate(gamma)).collect();
        edges.sort();
        OneFactor {
            edges,
            origin: FactorOrigin::Custom,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizationError {
    #[error("the supplied pair set is not a starter: {0}")]
    NotAStarter(StarterViolation),
    #[error("factorizations live on different vertex sets")]
    FieldMismatch,
    #[error("constructed factorization is defective: {0}")]
    Defective(FactorizationDefect),
}

/// Diagnostic reason a candidate factorization fails validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorizationDefect {
    WrongFactorCount { expected: usize, found: usize },
    NotPerfectMatching { factor: usize },
    SharedEdge { factors: (usize, usize), edge: String },
    TranslationBroken { gamma: u64 },
}

impl fmt::Display for FactorizationDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorizationDefect::WrongFactorCount { expected, found } => {
                write!(f, "expected {expected} factors, found {found}")
            }
            FactorizationDefect::NotPerfectMatching { factor } => {
                write!(f, "factor {factor} is not a perfect matching")
            }
            FactorizationDefect::SharedEdge { factors, edge } => {
                write!(f, "factors {} and {} share edge {edge}", factors.0, factors.1)
            }
            FactorizationDefect::TranslationBroken { gamma } => {
                write!(f, "factor {gamma} is not the 0-factor translated by {gamma}")
            }
        }
    }
}

/// The q one-factors F_γ = {{∞, γ}} ∪ {{x+γ, y+γ} : {x,y} ∈ S}, indexed by
/// γ in ascending canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct OneFactorization {
    field: PrimeField,
    label: StarterLabel,
    factors: Vec<OneFactor>,
}

impl OneFactorization {
    /// Build and fully validate the translation-generated factorization.
    pub fn from_starter(starter: &Starter) -> Result<OneFactorization, FactorizationError> {
        check_starter(starter.field(), starter.pairs())
            .map_err(FactorizationError::NotAStarter)?;
        let field = starter.field().clone();
        let factors: Vec<OneFactor> = (0..field.order())
            .map(|gamma| OneFactor::translated_from_starter(starter, field.element(gamma)))
            .collect();
        let fz = OneFactorization {
            field,
            label: starter.label().clone(),
            factors,
        };
        fz.validate().map_err(FactorizationError::Defective)?;
        fz.validate_translation()
            .map_err(FactorizationError::Defective)?;
        Ok(fz)
    }

    /// Wrap raw factors without validation; callers decide when to run
    /// `validate`. Used to feed deliberately defective or hand-built
    /// factorizations to the checks.
    pub fn from_factors(field: &PrimeField, factors: Vec<OneFactor>) -> OneFactorization {
        OneFactorization {
            field: field.clone(),
            label: StarterLabel::Custom,
            factors,
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn label(&self) -> &StarterLabel {
        &self.label
    }

    pub fn factors(&self) -> &[OneFactor] {
        &self.factors
    }

    pub fn factor(&self, gamma: u64) -> &OneFactor {
        &self.factors[(gamma % self.field.order()) as usize]
    }

    /// One-factorization axioms: every factor a perfect matching, factors
    /// pairwise edge-disjoint, and the union all of E(K_{q+1}).
    pub fn validate(&self) -> Result<(), FactorizationDefect> {
        let q = self.field.order();
        if self.factors.len() as u64 != q {
            return Err(FactorizationDefect::WrongFactorCount {
                expected: q as usize,
                found: self.factors.len(),
            });
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if !factor.is_perfect_matching_on(&self.field) {
                return Err(FactorizationDefect::NotPerfectMatching { factor: i });
            }
        }

        // disjointness: each of the q(q+1)/2 edges of K_{q+1} may appear once
        let n = q as usize + 1;
        let mut owner: Vec<Option<usize>> = vec![None; n * n];
        for (i, factor) in self.factors.iter().enumerate() {
            for e in factor.edges() {
                let (u, v) = e.endpoints();
                let slot = u.index(q) * n + v.index(q);
                if let Some(j) = owner[slot] {
                    return Err(FactorizationDefect::SharedEdge {
                        factors: (j, i),
                        edge: e.to_string(),
                    });
                }
                owner[slot] = Some(i);
            }
        }
        // q factors of (q+1)/2 distinct edges are exactly C(q+1, 2) edges,
        // so disjointness already forces full coverage of E(K_{q+1})
        debug_assert_eq!(
            self.factors.iter().map(|f| f.edges().len()).sum::<usize>() as u64,
            q * (q + 1) / 2
        );
        Ok(())
    }

    /// Translation structure F_γ = F_0 + γ, with ∞ fixed.
    pub fn validate_translation(&self) -> Result<(), FactorizationDefect> {
        let base = &self.factors[0];
        for gamma in 1..self.field.order() {
            let shifted = base.translate(self.field.element(gamma));
            if shifted.edges() != self.factors[gamma as usize].edges() {
                return Err(FactorizationDefect::TranslationBroken { gamma });
            }
        }
        Ok(())
    }

    /// Maximum edge overlap over all cross pairs of factors, plus a worst
    /// pair witness. Orthogonal means the maximum is at most one.
    pub fn overlap_report(&self, other: &OneFactorization) -> Result<OverlapReport, FactorizationError> {
        if self.field != other.field {
            return Err(FactorizationError::FieldMismatch);
        }
        let mut max_overlap = 0;
        let mut witness = None;
        for (i, f) in self.factors.iter().enumerate() {
            for (j, g) in other.factors.iter().enumerate() {
                let overlap = f.overlap(g);
                if overlap > max_overlap {
                    max_overlap = overlap;
                    witness = Some((i as u64, j as u64));
                }
            }
        }
        Ok(OverlapReport {
            max_overlap,
            witness,
        })
    }

    /// JSON form: `{"q", "starter", "factors": {"γ": [[u, v], …]}}` with
    /// `"inf"` as the ∞ token and γ keys in ascending order.
    pub fn to_json(&self) -> Value {
        let mut factors = Map::new();
        for (gamma, factor) in self.factors.iter().enumerate() {
            factors.insert(
                gamma.to_string(),
                Value::Array(factor.edges().iter().map(|e| e.to_json()).collect()),
            );
        }
        json!({
            "q": self.field.order(),
            "starter": self.label.to_string(),
            "factors": Value::Object(factors),
        })
    }
}

/// Cross-pair overlap summary for two factorizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlapReport {
    pub max_overlap: usize,
    /// Factor indices attaining the maximum, when it is positive.
    pub witness: Option<(u64, u64)>,
}

impl OverlapReport {
    pub fn orthogonal(&self) -> bool {
        self.max_overlap <= 1
    }
}

/// Render the union of two factors as DOT, one color per factor. The
/// output is deterministic: edges appear in canonical sorted order.
pub fn pair_union_dot(f: &OneFactor, g: &OneFactor, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("graph \"{name}\" {{\n"));
    out.push_str("  layout=circo;\n");
    out.push_str("  node [shape=circle];\n");
    out.push_str("  \"inf\" [shape=doublecircle];\n");
    for e in f.edges() {
        let (u, v) = e.endpoints();
        out.push_str(&format!("  \"{u}\" -- \"{v}\" [color=\"#1f77b4\"];\n"));
    }
    for e in g.edges() {
        let (u, v) = e.endpoints();
        out.push_str(&format!(
            "  \"{u}\" -- \"{v}\" [color=\"#d62728\", style=dashed];\n"
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn horton(q: u64, beta: u64) -> OneFactorization {
        let field = f(q);
        let s = Starter::horton(&field, field.element(beta)).unwrap();
        OneFactorization::from_starter(&s).unwrap()
    }

    fn finite(field: &PrimeField, v: u64) -> Vertex {
        Vertex::Finite(field.element(v))
    }

    #[test]
    fn vertex_order_puts_infinity_last() {
        let field = f(19);
        let mut vs = vec![Vertex::Infinity, finite(&field, 5), finite(&field, 0)];
        vs.sort();
        assert_eq!(vs, vec![finite(&field, 0), finite(&field, 5), Vertex::Infinity]);
    }

    #[test]
    fn edges_store_canonically() {
        let field = f(19);
        let e1 = Edge::new(finite(&field, 5), finite(&field, 2));
        let e2 = Edge::new(finite(&field, 2), finite(&field, 5));
        assert_eq!(e1, e2);
        assert_eq!(e1.endpoints().0, finite(&field, 2));
        let inf_edge = Edge::new(Vertex::Infinity, finite(&field, 0));
        assert_eq!(inf_edge.endpoints().0, finite(&field, 0));
    }

    #[test]
    #[should_panic(expected = "loops are not edges")]
    fn loops_are_rejected() {
        let field = f(19);
        let _ = Edge::new(finite(&field, 3), finite(&field, 3));
    }

    #[test]
    fn horton_factorization_shape_at_q19() {
        let fz = horton(19, 8);
        assert_eq!(fz.factors().len(), 19);
        for factor in fz.factors() {
            assert_eq!(factor.edges().len(), 10);
        }
        let field = fz.field().clone();
        let f0 = fz.factor(0);
        assert!(f0.contains(&Edge::new(Vertex::Infinity, finite(&field, 0))));
        assert!(f0.contains(&Edge::new(finite(&field, 1), finite(&field, 8))));

        let total: usize = fz.factors().iter().map(|f| f.edges().len()).sum();
        assert_eq!(total, 190);
    }

    #[test]
    fn validation_passes_for_starter_built_factorizations() {
        let fz = horton(19, 8);
        assert_eq!(fz.validate(), Ok(()));
        assert_eq!(fz.validate_translation(), Ok(()));
    }

    #[test]
    fn validation_flags_a_factor_missing_an_edge() {
        let fz = horton(19, 8);
        let mut factors = fz.factors().to_vec();
        let mut edges = factors[0].edges().to_vec();
        edges.pop();
        factors[0] = OneFactor::new(edges);
        let broken = OneFactorization::from_factors(fz.field(), factors);
        assert_eq!(
            broken.validate(),
            Err(FactorizationDefect::NotPerfectMatching { factor: 0 })
        );
    }

    #[test]
    fn validation_flags_duplicated_factors() {
        let fz = horton(19, 8);
        let mut factors = fz.factors().to_vec();
        factors[1] = factors[0].clone();
        let broken = OneFactorization::from_factors(fz.field(), factors);
        assert!(matches!(
            broken.validate(),
            Err(FactorizationDefect::SharedEdge { factors: (0, 1), .. })
        ));
    }

    #[test]
    fn validation_flags_an_edge_swap() {
        let fz = horton(19, 8);
        let mut factors = fz.factors().to_vec();
        let mut edges0 = factors[0].edges().to_vec();
        let mut edges1 = factors[1].edges().to_vec();
        let moved0 = edges0.pop().unwrap();
        let moved1 = edges1.pop().unwrap();
        edges0.push(moved1);
        edges1.push(moved0);
        factors[0] = OneFactor::new(edges0);
        factors[1] = OneFactor::new(edges1);
        let broken = OneFactorization::from_factors(fz.field(), factors);
        assert!(broken.validate().is_err());
    }

    #[test]
    fn translation_covariance_holds_everywhere() {
        let fz = horton(19, 8);
        let field = fz.field().clone();
        for gamma in 0..19u64 {
            for delta in 0..19u64 {
                let shift = field.element(gamma) - field.element(delta);
                let shifted = fz.factor(delta).translate(shift);
                assert_eq!(shifted.edges(), fz.factor(gamma).edges());
            }
        }
    }

    #[test]
    fn overlap_reports() {
        let field = f(19);
        let s = Starter::horton(&field, field.element(8)).unwrap();
        let fz = OneFactorization::from_starter(&s).unwrap();
        let gz = OneFactorization::from_starter(&s.negate()).unwrap();

        let cross = fz.overlap_report(&gz).unwrap();
        assert!(cross.orthogonal());
        assert_eq!(cross.max_overlap, 1);

        let self_report = fz.overlap_report(&fz).unwrap();
        assert!(!self_report.orthogonal());
        assert_eq!(self_report.max_overlap, 10);

        let s10 = Starter::horton(&field, field.element(10)).unwrap();
        let hz = OneFactorization::from_starter(&s10).unwrap();
        assert!(fz.overlap_report(&hz).unwrap().orthogonal());

        let f23 = f(23);
        let other = Starter::horton(&f23, f23.element(5)).unwrap();
        let oz = OneFactorization::from_starter(&other).unwrap();
        assert_eq!(
            fz.overlap_report(&oz),
            Err(FactorizationError::FieldMismatch)
        );
    }

    #[test]
    fn json_shape() {
        let fz = horton(19, 8);
        let v = fz.to_json();
        assert_eq!(v["q"], 19);
        assert_eq!(v["starter"], "horton(8)");
        let factors = v["factors"].as_object().unwrap();
        assert_eq!(factors.len(), 19);
        let f0 = factors["0"].as_array().unwrap();
        assert_eq!(f0.len(), 10);
        assert!(f0.contains(&json!([0, "inf"])));
        assert!(f0.contains(&json!([1, 8])));
        // keys come out in ascending numeric order
        let keys: Vec<&String> = factors.keys().collect();
        let expected: Vec<String> = (0..19).map(|g| g.to_string()).collect();
        assert_eq!(keys, expected.iter().collect::<Vec<_>>());
    }

    #[test]
    fn dot_rendering_is_deterministic() {
        let fz = horton(19, 8);
        let a = pair_union_dot(fz.factor(0), fz.factor(4), "u");
        let b = pair_union_dot(fz.factor(0), fz.factor(4), "u");
        assert_eq!(a, b);
        assert!(a.starts_with("graph \"u\" {"));
        assert_eq!(a.matches("--").count(), 20);
        assert!(a.contains("\"inf\" [shape=doublecircle]"));
    }
}
