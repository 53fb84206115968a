//! Starters and strong starters for F_q: the quadratic-residue family
//! S_β = {{x, xβ} : x ∈ QR(q)}, the primitive-root power family, negation,
//! the starter predicates, and pairwise orthogonality.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, PrimeField, ResidueClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarterError {
    #[error("q = {q} must be a prime ≡ 3 (mod 4) with q ≥ 7 for this construction")]
    BadCongruence { q: u64 },
    #[error("beta = {beta} is not admissible: {why}")]
    BadResidue { beta: u64, why: &'static str },
    #[error("starters live over different fields")]
    FieldMismatch,
    #[error("pair set violates the starter axioms: {0}")]
    NotAStarter(StarterViolation),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Reason code returned when a candidate pair set fails validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarterViolation {
    /// Element drawn from a different field than the candidate claims.
    ForeignElement,
    /// Wrong number of pairs for the field order.
    WrongPairCount { expected: usize, found: usize },
    /// A pair of the form {x, x}.
    LoopPair { member: u64 },
    /// Zero appears as a pair member.
    ZeroMember,
    /// A nonzero element appears in more than one pair slot.
    RepeatedMember { member: u64 },
    /// Some ±difference arises from two different pairs.
    RepeatedDifference { difference: u64 },
    /// A pair sums to zero (strong-starter axiom).
    ZeroSum { pair_low: u64 },
    /// Two pairs share the same sum (strong-starter axiom).
    RepeatedSum { sum: u64 },
}

impl fmt::Display for StarterViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarterViolation::ForeignElement => write!(f, "pair member from a different field"),
            StarterViolation::WrongPairCount { expected, found } => {
                write!(f, "expected {expected} pairs, found {found}")
            }
            StarterViolation::LoopPair { member } => {
                write!(f, "pair {{{member}, {member}}} is a loop")
            }
            StarterViolation::ZeroMember => write!(f, "zero appears as a pair member"),
            StarterViolation::RepeatedMember { member } => {
                write!(f, "element {member} appears in more than one pair slot")
            }
            StarterViolation::RepeatedDifference { difference } => {
                write!(f, "difference {difference} arises from two different pairs")
            }
            StarterViolation::ZeroSum { pair_low } => {
                write!(f, "the pair containing {pair_low} sums to zero")
            }
            StarterViolation::RepeatedSum { sum } => {
                write!(f, "two pairs share the sum {sum}")
            }
        }
    }
}

/// Unordered pair of field elements, stored with the smaller value first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarterPair {
    lo: FieldElement,
    hi: FieldElement,
}

impl StarterPair {
    pub fn new(a: FieldElement, b: FieldElement) -> Self {
        if a.value() <= b.value() {
            StarterPair { lo: a, hi: b }
        } else {
            StarterPair { lo: b, hi: a }
        }
    }

    pub fn lo(self) -> FieldElement {
        self.lo
    }

    pub fn hi(self) -> FieldElement {
        self.hi
    }

    pub fn is_loop(self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(self, x: FieldElement) -> bool {
        self.lo == x || self.hi == x
    }

    pub fn sum(self) -> FieldElement {
        self.lo + self.hi
    }

    /// Orientation (x, y) with x − y a quadratic residue. Defined exactly
    /// when −1 is a non-residue, i.e. q ≡ 3 (mod 4).
    pub fn oriented(self, field: &PrimeField) -> Option<(FieldElement, FieldElement)> {
        if self.is_loop() {
            return None;
        }
        let d = self.hi - self.lo;
        match field.classify(d)? {
            ResidueClass::Quadratic => Some((self.hi, self.lo)),
            ResidueClass::NonQuadratic => match field.classify(-d)? {
                ResidueClass::Quadratic => Some((self.lo, self.hi)),
                ResidueClass::NonQuadratic => None,
            },
        }
    }
}

impl fmt::Display for StarterPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.lo, self.hi)
    }
}

/// Provenance of a starter's pair set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarterLabel {
    Horton { beta: u64 },
    MullinNemeth,
    Negated(Box<StarterLabel>),
    Custom,
}

impl fmt::Display for StarterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarterLabel::Horton { beta } => write!(f, "horton({beta})"),
            StarterLabel::MullinNemeth => write!(f, "mullin-nemeth"),
            StarterLabel::Negated(inner) => write!(f, "negated({inner})"),
            StarterLabel::Custom => write!(f, "custom"),
        }
    }
}

/// A validated starter: (q−1)/2 pairs whose members are exactly F_q* and
/// whose ±differences are exactly F_q*.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Starter {
    field: PrimeField,
    pairs: Vec<StarterPair>,
    label: StarterLabel,
}

impl Starter {
    /// S_β = {{x, xβ} : x ∈ QR(q)} for q ≡ 3 (mod 4) and β a non-residue
    /// other than −1. The starter and strong-starter axioms are re-verified
    /// on construction rather than assumed.
    pub fn horton(field: &PrimeField, beta: FieldElement) -> Result<Starter, StarterError> {
        let q = field.order();
        if q % 4 != 3 {
            return Err(StarterError::BadCongruence { q });
        }
        if !field.contains(beta) {
            return Err(StarterError::Field(FieldError::FieldMismatch {
                left: q,
                right: beta.modulus(),
            }));
        }
        match field.classify(beta) {
            None => {
                return Err(StarterError::BadResidue {
                    beta: beta.value(),
                    why: "zero cannot pair the residues",
                })
            }
            Some(ResidueClass::Quadratic) => {
                return Err(StarterError::BadResidue {
                    beta: beta.value(),
                    why: "beta must be a non-residue",
                })
            }
            Some(ResidueClass::NonQuadratic) => {}
        }
        if beta == field.element(q - 1) {
            return Err(StarterError::BadResidue {
                beta: beta.value(),
                why: "beta = -1 collapses the pair differences",
            });
        }

        let pairs: Vec<StarterPair> = field
            .quadratic_residues()
            .into_iter()
            .map(|x| StarterPair::new(x, x * beta))
            .collect();
        Self::validated(
            field.clone(),
            pairs,
            StarterLabel::Horton { beta: beta.value() },
            true,
        )
    }

    /// Pairs {r^{2i}, r^{2i+1}} of consecutive powers of the canonical
    /// primitive root, for q ≡ 3 (mod 4), q > 3.
    pub fn mullin_nemeth(field: &PrimeField) -> Result<Starter, StarterError> {
        let q = field.order();
        if q % 4 != 3 {
            return Err(StarterError::BadCongruence { q });
        }
        let r = field.primitive_root();
        let t = (q - 1) / 2;
        let mut pairs = Vec::with_capacity(t as usize);
        let mut even_power = field.one();
        for _ in 0..t {
            pairs.push(StarterPair::new(even_power, even_power * r));
            even_power = even_power * r * r;
        }
        Self::validated(field.clone(), pairs, StarterLabel::MullinNemeth, true)
    }

    /// Wrap an arbitrary pair collection, validating the starter axioms.
    /// The strong-starter property is not required here.
    pub fn custom(field: &PrimeField, pairs: Vec<StarterPair>) -> Result<Starter, StarterError> {
        Self::validated(field.clone(), pairs, StarterLabel::Custom, false)
    }

    fn validated(
        field: PrimeField,
        mut pairs: Vec<StarterPair>,
        label: StarterLabel,
        require_strong: bool,
    ) -> Result<Starter, StarterError> {
        check_starter(&field, &pairs).map_err(StarterError::NotAStarter)?;
        if require_strong {
            check_strong_starter(&field, &pairs).map_err(StarterError::NotAStarter)?;
        }
        pairs.sort();
        Ok(Starter {
            field,
            pairs,
            label,
        })
    }

    /// Element-wise negation; a starter again, with provenance recorded.
    pub fn negate(&self) -> Starter {
        let pairs: Vec<StarterPair> = self
            .pairs
            .iter()
            .map(|p| StarterPair::new(-p.lo(), -p.hi()))
            .collect();
        Self::validated(
            self.field.clone(),
            pairs,
            StarterLabel::Negated(Box::new(self.label.clone())),
            false,
        )
        .expect("negation of a valid starter is a starter")
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    /// Pairs in canonical (lo, hi) ascending order.
    pub fn pairs(&self) -> &[StarterPair] {
        &self.pairs
    }

    pub fn label(&self) -> &StarterLabel {
        &self.label
    }

    /// Number of pairs, k = (q−1)/2.
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_strong(&self) -> bool {
        check_strong_starter(&self.field, &self.pairs).is_ok()
    }

    pub fn oriented_index(&self) -> Result<OrientedPairIndex, StarterError> {
        OrientedPairIndex::build(self)
    }

    /// JSON form: an array of `[x, y]` residue pairs. For q ≡ 3 (mod 4)
    /// each pair is oriented so x − y ∈ QR(q) and the array is sorted by
    /// that difference; otherwise pairs appear in canonical order.
    pub fn to_json(&self) -> Value {
        if self.field.order() % 4 == 3 {
            let index = self
                .oriented_index()
                .expect("orientation is total for q ≡ 3 (mod 4)");
            Value::Array(
                index
                    .entries()
                    .iter()
                    .map(|&(_, (x, y))| json!([x.value(), y.value()]))
                    .collect(),
            )
        } else {
            Value::Array(
                self.pairs
                    .iter()
                    .map(|p| json!([p.lo().value(), p.hi().value()]))
                    .collect(),
            )
        }
    }
}

/// First violated starter axiom, or `Ok` when the candidate is a starter.
pub fn check_starter(field: &PrimeField, pairs: &[StarterPair]) -> Result<(), StarterViolation> {
    let q = field.order();
    let expected = ((q - 1) / 2) as usize;

    for p in pairs {
        if p.lo().modulus() != q || p.hi().modulus() != q {
            return Err(StarterViolation::ForeignElement);
        }
    }
    if pairs.len() != expected {
        return Err(StarterViolation::WrongPairCount {
            expected,
            found: pairs.len(),
        });
    }

    let mut member_seen = vec![false; q as usize];
    for p in pairs {
        if p.is_loop() {
            return Err(StarterViolation::LoopPair {
                member: p.lo().value(),
            });
        }
        for x in [p.lo(), p.hi()] {
            if x.is_zero() {
                return Err(StarterViolation::ZeroMember);
            }
            let v = x.value() as usize;
            if member_seen[v] {
                return Err(StarterViolation::RepeatedMember { member: x.value() });
            }
            member_seen[v] = true;
        }
    }

    // 2k distinct nonzero members fill F_q*; the same count argument makes
    // difference coverage equivalent to difference distinctness
    let mut diff_seen = vec![false; q as usize];
    for p in pairs {
        let d = p.hi() - p.lo();
        for delta in [d, -d] {
            let v = delta.value() as usize;
            if diff_seen[v] {
                return Err(StarterViolation::RepeatedDifference {
                    difference: delta.value(),
                });
            }
            diff_seen[v] = true;
        }
    }
    Ok(())
}

pub fn is_starter(field: &PrimeField, pairs: &[StarterPair]) -> bool {
    check_starter(field, pairs).is_ok()
}

/// Strong-starter axioms on top of a starter: pair sums are nonzero and
/// pairwise distinct.
pub fn check_strong_starter(
    field: &PrimeField,
    pairs: &[StarterPair],
) -> Result<(), StarterViolation> {
    let q = field.order();
    let mut sum_seen = vec![false; q as usize];
    for p in pairs {
        let s = p.sum();
        if s.is_zero() {
            return Err(StarterViolation::ZeroSum {
                pair_low: p.lo().value(),
            });
        }
        let v = s.value() as usize;
        if sum_seen[v] {
            return Err(StarterViolation::RepeatedSum { sum: s.value() });
        }
        sum_seen[v] = true;
    }
    Ok(())
}

pub fn is_strong_starter(field: &PrimeField, pairs: &[StarterPair]) -> bool {
    check_starter(field, pairs).is_ok() && check_strong_starter(field, pairs).is_ok()
}

/// Pairs of a starter aligned by their QR-oriented difference: for each
/// quadratic residue d there is exactly one pair (x, y) with x − y = d.
/// Only defined for q ≡ 3 (mod 4), where exactly one of ±(x−y) is a
/// residue because −1 is not.
#[derive(Debug, Clone)]
pub struct OrientedPairIndex {
    // (difference, (x, y)) with x − y = difference ∈ QR(q), ascending
    entries: Vec<(FieldElement, (FieldElement, FieldElement))>,
}

impl OrientedPairIndex {
    pub fn build(starter: &Starter) -> Result<Self, StarterError> {
        let field = starter.field();
        let q = field.order();
        if q % 4 != 3 {
            return Err(StarterError::BadCongruence { q });
        }
        let mut entries: Vec<(FieldElement, (FieldElement, FieldElement))> = starter
            .pairs()
            .iter()
            .map(|p| {
                let (x, y) = p
                    .oriented(field)
                    .expect("valid starter pairs orient when q ≡ 3 (mod 4)");
                (x - y, (x, y))
            })
            .collect();
        entries.sort_by_key(|&(d, _)| d.value());
        debug_assert!(entries.windows(2).all(|w| w[0].0 != w[1].0));
        Ok(OrientedPairIndex { entries })
    }

    /// Entries as (difference, (x, y)), ascending by difference.
    pub fn entries(&self) -> &[(FieldElement, (FieldElement, FieldElement))] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Oriented pair whose difference is `d`, if `d` is a residue.
    pub fn get(&self, d: FieldElement) -> Option<(FieldElement, FieldElement)> {
        self.entries
            .binary_search_by_key(&d.value(), |&(diff, _)| diff.value())
            .ok()
            .map(|i| self.entries[i].1)
    }
}

/// Orthogonality of two starters over the same field: align pairs by
/// oriented difference and require the displacement u − x to be nonzero
/// and injective across difference classes.
pub fn are_orthogonal_starters(a: &Starter, b: &Starter) -> Result<bool, StarterError> {
    if a.field() != b.field() {
        return Err(StarterError::FieldMismatch);
    }
    let q = a.field().order();
    if q % 4 != 3 {
        return Err(StarterError::BadCongruence { q });
    }
    let index_a = a.oriented_index()?;
    let index_b = b.oriented_index()?;

    let mut seen = vec![false; q as usize];
    for (&(d, (x, _)), &(d2, (u, _))) in index_a.entries().iter().zip(index_b.entries()) {
        debug_assert_eq!(d, d2);
        let displacement = u - x;
        if displacement.is_zero() {
            return Ok(false);
        }
        let v = displacement.value() as usize;
        if seen[v] {
            return Ok(false);
        }
        seen[v] = true;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn pair(field: &PrimeField, a: u64, b: u64) -> StarterPair {
        StarterPair::new(field.element(a), field.element(b))
    }

    #[test]
    fn horton_starter_basic_shape() {
        let field = f(19);
        let s = Starter::horton(&field, field.element(8)).unwrap();
        assert_eq!(s.size(), 9);
        assert!(s.pairs().contains(&pair(&field, 1, 8)));
        assert!(s.is_strong());
    }

    #[test]
    fn horton_rejects_residue_and_minus_one() {
        let field = f(19);
        assert!(matches!(
            Starter::horton(&field, field.element(4)),
            Err(StarterError::BadResidue { beta: 4, .. })
        ));
        assert!(matches!(
            Starter::horton(&field, field.element(18)),
            Err(StarterError::BadResidue { beta: 18, .. })
        ));
        assert!(matches!(
            Starter::horton(&field, field.zero()),
            Err(StarterError::BadResidue { beta: 0, .. })
        ));
    }

    #[test]
    fn horton_rejects_bad_congruence() {
        let field = f(13);
        assert_eq!(
            Starter::horton(&field, field.element(2)),
            Err(StarterError::BadCongruence { q: 13 })
        );
    }

    #[test]
    fn mullin_nemeth_fixtures() {
        let field = f(7);
        let s = Starter::mullin_nemeth(&field).unwrap();
        let expected: Vec<StarterPair> = [(1, 3), (2, 6), (4, 5)]
            .into_iter()
            .map(|(a, b)| pair(&field, a, b))
            .collect();
        assert_eq!(s.pairs(), expected.as_slice());

        let f11 = f(11);
        let s11 = Starter::mullin_nemeth(&f11).unwrap();
        assert!(s11.is_strong());
        let expected11: Vec<StarterPair> = [(1, 2), (4, 8), (5, 10), (7, 9), (3, 6)]
            .into_iter()
            .map(|(a, b)| pair(&f11, a, b))
            .collect();
        let mut sorted = expected11.clone();
        sorted.sort();
        assert_eq!(s11.pairs(), sorted.as_slice());

        assert_eq!(
            Starter::mullin_nemeth(&f(13)),
            Err(StarterError::BadCongruence { q: 13 })
        );
    }

    #[test]
    fn negation_is_an_involution() {
        let field = f(19);
        let s = Starter::horton(&field, field.element(8)).unwrap();
        let double_negated = s.negate().negate();
        assert_eq!(s.pairs(), double_negated.pairs());
    }

    #[test]
    fn negated_horton_pairs_run_over_the_non_residues() {
        let field = f(19);
        let beta = field.element(8);
        let s = Starter::horton(&field, beta).unwrap();
        let mut expected: Vec<StarterPair> = field
            .non_residues()
            .into_iter()
            .map(|y| StarterPair::new(y, y * beta))
            .collect();
        expected.sort();
        assert_eq!(s.negate().pairs(), expected.as_slice());
    }

    #[test]
    fn negation_valid_for_every_horton_starter_over_f11() {
        let field = f(11);
        for beta in field.non_residues() {
            if beta.value() == 10 {
                continue;
            }
            let s = Starter::horton(&field, beta).unwrap();
            assert!(is_starter(&field, s.negate().pairs()));
        }
    }

    #[test]
    fn starter_predicate_rejects_bad_candidates() {
        let f7 = f(7);
        // differences ±1 three times over
        let candidate = vec![pair(&f7, 1, 2), pair(&f7, 3, 4), pair(&f7, 5, 6)];
        assert_eq!(
            check_starter(&f7, &candidate),
            Err(StarterViolation::RepeatedDifference { difference: 1 })
        );
        assert!(!is_starter(&f7, &candidate));

        let f5 = f(5);
        assert_eq!(
            check_starter(&f5, &[]),
            Err(StarterViolation::WrongPairCount {
                expected: 2,
                found: 0
            })
        );

        let with_zero = vec![pair(&f5, 0, 1), pair(&f5, 2, 3)];
        assert_eq!(check_starter(&f5, &with_zero), Err(StarterViolation::ZeroMember));

        let with_loop = vec![pair(&f5, 2, 2), pair(&f5, 1, 4)];
        assert_eq!(
            check_starter(&f5, &with_loop),
            Err(StarterViolation::LoopPair { member: 2 })
        );

        let foreign = vec![pair(&f7, 1, 2), pair(&f5, 1, 2)];
        assert_eq!(
            check_starter(&f5, &foreign),
            Err(StarterViolation::ForeignElement)
        );
    }

    #[test]
    fn strong_starter_predicate() {
        let field = f(19);
        let s = Starter::horton(&field, field.element(8)).unwrap();
        assert!(is_strong_starter(&field, s.pairs()));

        // {{1,5},{2,3},{4,6}} over F_7: sums 6, 5, 3 are distinct and nonzero
        let f7 = f(7);
        let patterned = vec![pair(&f7, 1, 5), pair(&f7, 2, 3), pair(&f7, 4, 6)];
        assert!(is_starter(&f7, &patterned));
        assert!(is_strong_starter(&f7, &patterned));

        // {{1,4},{2,3}} over F_5 is a starter but not strong (both sums are 0)
        let f5 = f(5);
        let weak = vec![pair(&f5, 1, 4), pair(&f5, 2, 3)];
        assert!(is_starter(&f5, &weak));
        assert_eq!(
            check_strong_starter(&f5, &weak),
            Err(StarterViolation::ZeroSum { pair_low: 1 })
        );
    }

    #[test]
    fn orthogonality_fixtures_over_f19() {
        let field = f(19);
        let s8 = Starter::horton(&field, field.element(8)).unwrap();
        let s10 = Starter::horton(&field, field.element(10)).unwrap();
        assert_eq!(are_orthogonal_starters(&s8, &s10), Ok(true));
        assert_eq!(are_orthogonal_starters(&s8, &s8), Ok(false));
        assert_eq!(are_orthogonal_starters(&s8, &s8.negate()), Ok(true));
    }

    #[test]
    fn orthogonality_rejects_mismatched_inputs() {
        let f19 = f(19);
        let f23 = f(23);
        let a = Starter::horton(&f19, f19.element(8)).unwrap();
        let b = Starter::horton(&f23, f23.element(5)).unwrap();
        assert_eq!(
            are_orthogonal_starters(&a, &b),
            Err(StarterError::FieldMismatch)
        );

        let f5 = f(5);
        let c = Starter::custom(&f5, vec![pair(&f5, 1, 4), pair(&f5, 2, 3)]).unwrap();
        assert_eq!(
            are_orthogonal_starters(&c, &c),
            Err(StarterError::BadCongruence { q: 5 })
        );
    }

    #[test]
    fn oriented_index_is_total_and_bijective() {
        let field = f(19);
        let s = Starter::horton(&field, field.element(8)).unwrap();
        let index = s.oriented_index().unwrap();
        assert_eq!(index.len(), 9);
        let diffs: Vec<u64> = index.entries().iter().map(|&(d, _)| d.value()).collect();
        let qr: Vec<u64> = field
            .quadratic_residues()
            .iter()
            .map(|a| a.value())
            .collect();
        assert_eq!(diffs, qr);
        for &(d, (x, y)) in index.entries() {
            assert_eq!(x - y, d);
            assert_eq!(index.get(d), Some((x, y)));
        }
    }

    #[test]
    fn starter_json_is_sorted_by_oriented_difference() {
        let field = f(19);
        let s = Starter::horton(&field, field.element(8)).unwrap();
        let json = s.to_json();
        let arr = json.as_array().unwrap();
        assert_eq!(arr.len(), 9);
        let diffs: Vec<u64> = arr
            .iter()
            .map(|entry| {
                let x = entry[0].as_u64().unwrap();
                let y = entry[1].as_u64().unwrap();
                (x + 19 - y) % 19
            })
            .collect();
        let mut sorted = diffs.clone();
        sorted.sort_unstable();
        assert_eq!(diffs, sorted);
    }

    #[test]
    fn labels_render_their_provenance() {
        let field = f(19);
        let s = Starter::horton(&field, field.element(8)).unwrap();
        assert_eq!(s.label().to_string(), "horton(8)");
        assert_eq!(s.negate().label().to_string(), "negated(horton(8))");
        assert_eq!(
            Starter::mullin_nemeth(&f(7)).unwrap().label().to_string(),
            "mullin-nemeth"
        );
    }
}
