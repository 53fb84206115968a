//! Exact arithmetic in the prime field F_q plus residue-class machinery:
//! quadratic-residue classification, primitive roots, and cyclotomic numbers.
//!
//! `PrimeField` is an immutable handle (cheap to clone, safe to share across
//! threads); `FieldElement` is a plain value type carrying its modulus so
//! that elements of distinct fields can never be combined silently.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Smallest modulus the library accepts. Everything downstream needs at
/// least two starter pairs, which rules out F_3.
pub const MIN_MODULUS: u64 = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is even; only odd primes are supported")]
    EvenModulus(u64),
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("modulus {0} is below the minimum supported modulus {MIN_MODULUS}")]
    ModulusTooSmall(u64),
    #[error("cannot combine an element of F_{left} with an element of F_{right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero has no residue class")]
    ZeroArgument,
}

/// Which coset of the squares a nonzero element lies in.
///
/// Coset index 0 is the subgroup QR(q) of squares, index 1 its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ResidueClass {
    #[serde(rename = "QR")]
    Quadratic,
    #[serde(rename = "NQR")]
    NonQuadratic,
}

impl ResidueClass {
    pub fn coset_index(self) -> usize {
        match self {
            ResidueClass::Quadratic => 0,
            ResidueClass::NonQuadratic => 1,
        }
    }

    pub fn from_coset_index(i: usize) -> Option<Self> {
        match i {
            0 => Some(ResidueClass::Quadratic),
            1 => Some(ResidueClass::NonQuadratic),
            _ => None,
        }
    }

    /// Class of a product: QR·QR = NQR·NQR = QR, mixed products are NQR.
    pub fn product(self, other: Self) -> Self {
        if self == other {
            ResidueClass::Quadratic
        } else {
            ResidueClass::NonQuadratic
        }
    }

    pub fn is_quadratic(self) -> bool {
        self == ResidueClass::Quadratic
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueClass::Quadratic => write!(f, "QR"),
            ResidueClass::NonQuadratic => write!(f, "NQR"),
        }
    }
}

/// A canonical residue in [0, q) tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn require_same_field(self, rhs: FieldElement) -> Result<(), FieldError> {
        if self.modulus == rhs.modulus {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch {
                left: self.modulus,
                right: rhs.modulus,
            })
        }
    }

    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.require_same_field(rhs)?;
        let mut v = self.value + rhs.value;
        if v >= self.modulus {
            v -= self.modulus;
        }
        Ok(FieldElement {
            value: v,
            modulus: self.modulus,
        })
    }

    pub fn checked_sub(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.require_same_field(rhs)?;
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus - (rhs.value - self.value)
        };
        Ok(FieldElement {
            value: v,
            modulus: self.modulus,
        })
    }

    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.require_same_field(rhs)?;
        // widen so products stay exact for any u64 modulus
        let v = ((self.value as u128 * rhs.value as u128) % self.modulus as u128) as u64;
        Ok(FieldElement {
            value: v,
            modulus: self.modulus,
        })
    }

    pub fn negated(self) -> FieldElement {
        let v = if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        };
        FieldElement {
            value: v,
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(self) -> Result<FieldElement, FieldError> {
        if self.value == 0 {
            return Err(FieldError::ZeroInverse);
        }
        self.pow(-1)
    }

    /// Exponentiation; negative exponents go through the inverse.
    pub fn pow(self, exp: i64) -> Result<FieldElement, FieldError> {
        let q = self.modulus;
        if exp < 0 {
            if self.value == 0 {
                return Err(FieldError::ZeroInverse);
            }
            // a^-1 = a^(q-2), so a^(-e) = (a^(q-2))^e
            let inv_value = pow_mod(self.value, q - 2, q);
            return Ok(FieldElement {
                value: pow_mod(inv_value, exp.unsigned_abs(), q),
                modulus: q,
            });
        }
        Ok(FieldElement {
            value: pow_mod(self.value, exp as u64, q),
            modulus: q,
        })
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.checked_add(rhs)
            .expect("arithmetic between elements of different fields")
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.checked_sub(rhs)
            .expect("arithmetic between elements of different fields")
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.checked_mul(rhs)
            .expect("arithmetic between elements of different fields")
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.negated()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut base = base as u128 % m;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Contract satisfied by any coefficient field usable with the starter
/// machinery. Only the prime-field implementation ships; the trait is the
/// seam where an extension-field backend would plug in.
pub trait Field {
    type Element: Copy + Eq + Ord + std::hash::Hash + fmt::Debug;

    fn order(&self) -> u64;
    fn zero(&self) -> Self::Element;
    fn one(&self) -> Self::Element;
    fn add(&self, a: Self::Element, b: Self::Element) -> Self::Element;
    fn neg(&self, a: Self::Element) -> Self::Element;
    fn mul(&self, a: Self::Element, b: Self::Element) -> Self::Element;
    fn inv(&self, a: Self::Element) -> Option<Self::Element>;
    /// Residue class of a nonzero element; `None` for zero.
    fn classify(&self, a: Self::Element) -> Option<ResidueClass>;
    fn nonzero_elements(&self) -> Vec<Self::Element>;

    fn sub(&self, a: Self::Element, b: Self::Element) -> Self::Element {
        self.add(a, self.neg(b))
    }
}

struct FieldInner {
    q: u64,
    primitive_root: u64,
    // residue_class[v] for v in 1..q; index 0 is unused
    is_square: Vec<bool>,
}

/// Handle to F_q for an odd prime q. Construction verifies primality,
/// builds the residue-class table and cross-checks it against Euler's
/// criterion, and locates the smallest primitive root.
#[derive(Clone)]
pub struct PrimeField {
    inner: Arc<FieldInner>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.q == other.inner.q
    }
}

impl Eq for PrimeField {}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeField(q = {})", self.inner.q)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q % 2 == 0 {
            return Err(FieldError::EvenModulus(q));
        }
        if q < MIN_MODULUS {
            return Err(FieldError::ModulusTooSmall(q));
        }
        if !is_prime(q) {
            return Err(FieldError::CompositeModulus(q));
        }

        let mut is_square = vec![false; q as usize];
        for x in 1..q {
            is_square[((x as u128 * x as u128) % q as u128) as usize] = true;
        }
        // cross-check the squares table against Euler's criterion; a
        // disagreement would mean the modulus is not prime after all
        for v in 1..q {
            let euler_square = pow_mod(v, (q - 1) / 2, q) == 1;
            if euler_square != is_square[v as usize] {
                return Err(FieldError::CompositeModulus(q));
            }
        }

        let factors = prime_factors(q - 1);
        let primitive_root = (2..q)
            .find(|&r| factors.iter().all(|&p| pow_mod(r, (q - 1) / p, q) != 1))
            .ok_or(FieldError::CompositeModulus(q))?;

        Ok(PrimeField {
            inner: Arc::new(FieldInner {
                q,
                primitive_root,
                is_square,
            }),
        })
    }

    pub fn order(&self) -> u64 {
        self.inner.q
    }

    /// Canonical residue of `value` as a field element.
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.inner.q,
            modulus: self.inner.q,
        }
    }

    pub fn element_from_signed(&self, value: i64) -> FieldElement {
        let q = self.inner.q as i128;
        let v = ((value as i128 % q) + q) % q;
        FieldElement {
            value: v as u64,
            modulus: self.inner.q,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.modulus == self.inner.q
    }

    /// Smallest positive primitive root; deterministic by construction.
    pub fn primitive_root(&self) -> FieldElement {
        self.element(self.inner.primitive_root)
    }

    /// r² for the canonical primitive root r; generates the subgroup QR(q).
    pub fn qr_generator(&self) -> FieldElement {
        let r = self.primitive_root();
        r * r
    }

    /// Residue class of a nonzero element of this field.
    pub fn residue_class(&self, a: FieldElement) -> Result<ResidueClass, FieldError> {
        if !self.contains(a) {
            return Err(FieldError::FieldMismatch {
                left: self.inner.q,
                right: a.modulus,
            });
        }
        if a.is_zero() {
            return Err(FieldError::ZeroArgument);
        }
        Ok(if self.inner.is_square[a.value as usize] {
            ResidueClass::Quadratic
        } else {
            ResidueClass::NonQuadratic
        })
    }

    pub fn is_qr(&self, a: FieldElement) -> Result<bool, FieldError> {
        Ok(self.residue_class(a)? == ResidueClass::Quadratic)
    }

    /// Residue class, or `None` for zero. Panics on a foreign element.
    pub fn classify(&self, a: FieldElement) -> Option<ResidueClass> {
        assert!(
            self.contains(a),
            "element of F_{} classified against F_{}",
            a.modulus,
            self.inner.q
        );
        if a.is_zero() {
            None
        } else if self.inner.is_square[a.value as usize] {
            Some(ResidueClass::Quadratic)
        } else {
            Some(ResidueClass::NonQuadratic)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.q).map(move |v| self.element(v))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.inner.q).map(move |v| self.element(v))
    }

    /// All quadratic residues in ascending canonical order.
    pub fn quadratic_residues(&self) -> Vec<FieldElement> {
        self.nonzero_elements()
            .filter(|&a| self.inner.is_square[a.value as usize])
            .collect()
    }

    /// All non-residues in ascending canonical order.
    pub fn non_residues(&self) -> Vec<FieldElement> {
        self.nonzero_elements()
            .filter(|&a| !self.inner.is_square[a.value as usize])
            .collect()
    }

    /// Order of `a` in the multiplicative group, via the divisors of q−1.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroArgument);
        }
        let q = self.inner.q;
        let mut order = q - 1;
        for p in prime_factors(q - 1) {
            while order % p == 0 && pow_mod(a.value, order / p, q) == 1 {
                order /= p;
            }
        }
        Ok(order)
    }

    /// Cyclotomic number (i, j) for e = 2: the number of x in coset C_i
    /// with x + 1 in coset C_j, counted by direct enumeration.
    pub fn cyclotomic_number(&self, i: ResidueClass, j: ResidueClass) -> u64 {
        cyclotomic_number(self, i, j)
    }
}

impl Field for PrimeField {
    type Element = FieldElement;

    fn order(&self) -> u64 {
        PrimeField::order(self)
    }

    fn zero(&self) -> FieldElement {
        PrimeField::zero(self)
    }

    fn one(&self) -> FieldElement {
        PrimeField::one(self)
    }

    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    fn neg(&self, a: FieldElement) -> FieldElement {
        -a
    }

    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a * b
    }

    fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        a.inv().ok()
    }

    fn classify(&self, a: FieldElement) -> Option<ResidueClass> {
        PrimeField::classify(self, a)
    }

    fn nonzero_elements(&self) -> Vec<FieldElement> {
        PrimeField::nonzero_elements(self).collect()
    }
}

/// Cyclotomic number (i, j) over any field satisfying the contract,
/// counted by direct enumeration over the coset C_i.
pub fn cyclotomic_number<F: Field>(field: &F, i: ResidueClass, j: ResidueClass) -> u64 {
    let one = field.one();
    field
        .nonzero_elements()
        .into_iter()
        .filter(|&x| field.classify(x) == Some(i))
        .filter(|&x| field.classify(field.add(x, one)) == Some(j))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn construction_accepts_odd_primes_only() {
        assert_eq!(f(19).order(), 19);
        assert_eq!(PrimeField::new(4), Err(FieldError::EvenModulus(4)));
        assert_eq!(PrimeField::new(15), Err(FieldError::CompositeModulus(15)));
        assert_eq!(PrimeField::new(3), Err(FieldError::ModulusTooSmall(3)));
        assert_eq!(PrimeField::new(2), Err(FieldError::EvenModulus(2)));
        assert_eq!(PrimeField::new(1), Err(FieldError::ModulusTooSmall(1)));
    }

    #[test]
    fn qr_sets_split_the_nonzero_elements_evenly() {
        for q in [5, 7, 11, 19, 59] {
            let field = f(q);
            assert_eq!(field.quadratic_residues().len() as u64, (q - 1) / 2);
            assert_eq!(field.non_residues().len() as u64, (q - 1) / 2);
        }
    }

    #[test]
    fn beta_quadratic_identity_in_f19() {
        // 8² − 8 + 1 ≡ 0 (mod 19)
        let field = f(19);
        let beta = field.element(8);
        let value = beta * beta - beta + field.one();
        assert!(value.is_zero());
    }

    #[test]
    fn inverses() {
        let field = f(11);
        assert_eq!(field.one().inv().unwrap(), field.one());
        assert_eq!(field.element(2).inv().unwrap(), field.element(6));
        assert_eq!(field.zero().inv(), Err(FieldError::ZeroInverse));

        // exhaustive multiplication-table check of every inverse in F_11
        for a in field.nonzero_elements() {
            let found = field
                .nonzero_elements()
                .find(|&b| (a * b) == field.one())
                .unwrap();
            assert_eq!(a.inv().unwrap(), found);
        }
    }

    #[test]
    fn pow_supports_negative_exponents() {
        let field = f(19);
        let a = field.element(8);
        assert_eq!(a.pow(-1).unwrap(), a.inv().unwrap());
        assert_eq!(a.pow(-2).unwrap(), a.inv().unwrap().pow(2).unwrap());
        assert_eq!(a.pow(0).unwrap(), field.one());
        assert_eq!(field.zero().pow(-1), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn fermat_little_theorem_in_f19() {
        let field = f(19);
        for a in field.nonzero_elements() {
            assert_eq!(a.pow(18).unwrap(), field.one());
        }
    }

    #[test]
    fn elements_of_distinct_fields_do_not_combine() {
        let a = f(19).element(5);
        let b = f(23).element(5);
        assert_eq!(
            a.checked_add(b),
            Err(FieldError::FieldMismatch { left: 19, right: 23 })
        );
        assert_eq!(
            a.checked_mul(b),
            Err(FieldError::FieldMismatch { left: 19, right: 23 })
        );
    }

    #[test]
    fn residue_classification_in_f19() {
        let field = f(19);
        assert_eq!(
            field.residue_class(field.element(8)),
            Ok(ResidueClass::NonQuadratic)
        );
        assert_eq!(
            field.residue_class(field.one()),
            Ok(ResidueClass::Quadratic)
        );
        // −1 is a non-residue when q ≡ 3 (mod 4)
        assert_eq!(
            field.residue_class(field.element(18)),
            Ok(ResidueClass::NonQuadratic)
        );
        assert_eq!(
            field.residue_class(field.zero()),
            Err(FieldError::ZeroArgument)
        );

        let nqr: Vec<u64> = field.non_residues().iter().map(|a| a.value()).collect();
        assert_eq!(nqr, vec![2, 3, 8, 10, 12, 13, 14, 15, 18]);
    }

    #[test]
    fn primitive_roots_are_smallest() {
        assert_eq!(f(19).primitive_root().value(), 2);
        assert_eq!(f(59).primitive_root().value(), 2);
        // exhaustive order check: 2 has order 3 mod 7, so 3 is smallest
        let field = f(7);
        for r in 2..7 {
            let elem = field.element(r);
            let order = field.multiplicative_order(elem).unwrap();
            if r < 3 {
                assert_ne!(order, 6);
            }
        }
        assert_eq!(field.primitive_root().value(), 3);
    }

    #[test]
    fn qr_generator_generates_the_squares() {
        assert_eq!(f(19).qr_generator().value(), 4);
        assert_eq!(f(59).qr_generator().value(), 4);
        let field = f(11);
        let g = field.qr_generator();
        assert_eq!(field.multiplicative_order(g).unwrap(), 5);
    }

    #[test]
    fn cyclotomic_numbers_small_fields() {
        use ResidueClass::{NonQuadratic as N, Quadratic as Q};
        // f = 5 (odd): (0,0) = (f−1)/2 = 2
        assert_eq!(f(11).cyclotomic_number(Q, Q), 2);
        // f = 6 (even): (0,1) = f/2 = 3
        assert_eq!(f(13).cyclotomic_number(Q, N), 3);
        // every x ≠ 0, −1 is counted exactly once
        let field = f(11);
        let total: u64 = [(Q, Q), (Q, N), (N, Q), (N, N)]
            .into_iter()
            .map(|(i, j)| field.cyclotomic_number(i, j))
            .sum();
        assert_eq!(total, 11 - 2);
    }

    #[test]
    fn residue_class_product_rule() {
        use ResidueClass::{NonQuadratic as N, Quadratic as Q};
        assert_eq!(Q.product(Q), Q);
        assert_eq!(Q.product(N), N);
        assert_eq!(N.product(N), Q);
    }

    #[test]
    fn signed_element_construction() {
        let field = f(19);
        assert_eq!(field.element_from_signed(-1).value(), 18);
        assert_eq!(field.element_from_signed(-20).value(), 18);
        assert_eq!(field.element_from_signed(20).value(), 1);
    }
}
