//! The group G = ℤ² in multiplicative notation, its endomorphisms, and the
//! integral group ring ℤG.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::lattice::{IntMatrix2, Vec2};

/// `u^m v^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub m: BigInt,
    pub n: BigInt,
}

impl GroupElement {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        GroupElement { m: m.into(), n: n.into() }
    }

    pub fn identity() -> Self {
        Self::new(0, 0)
    }

    pub fn u() -> Self {
        Self::new(1, 0)
    }

    pub fn v() -> Self {
        Self::new(0, 1)
    }

    pub fn from_exponents(x: &Vec2) -> Self {
        GroupElement { m: x[0].clone(), n: x[1].clone() }
    }

    /// Θ(g) = (m, n).
    pub fn exponents(&self) -> Vec2 {
        [self.m.clone(), self.n.clone()]
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_zero() && self.n.is_zero()
    }

    pub fn inverse(&self) -> Self {
        GroupElement { m: -&self.m, n: -&self.n }
    }

    pub fn pow(&self, k: &BigInt) -> Self {
        GroupElement { m: &self.m * k, n: &self.n * k }
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, o: &GroupElement) -> GroupElement {
        GroupElement { m: &self.m + &o.m, n: &self.n + &o.n }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, o: GroupElement) -> GroupElement {
        &self * &o
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.m.is_zero(), self.n.is_zero()) {
            (true, true) => write!(f, "1"),
            (false, true) => write!(f, "u^{}", self.m),
            (true, false) => write!(f, "v^{}", self.n),
            (false, false) => write!(f, "u^{} v^{}", self.m, self.n),
        }
    }
}

/// An endomorphism φ of G given by its matrix `[φ]`; the columns are
/// Θ(φ(u)) = (b1, b2) and Θ(φ(v)) = (b3, b4).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    matrix: IntMatrix2,
}

impl Endomorphism {
    pub fn new(matrix: IntMatrix2) -> Self {
        Endomorphism { matrix }
    }

    /// From the row-major matrix `[[a, b], [c, d]]`, so `b1 = a`, `b3 = b`, `b2 = c`, `b4 = d`.
    pub fn from_rows(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(IntMatrix2::new(a, b, c, d))
    }

    pub fn identity() -> Self {
        Self::new(IntMatrix2::identity())
    }

    pub fn matrix(&self) -> &IntMatrix2 {
        &self.matrix
    }

    pub fn b1(&self) -> &BigInt {
        self.matrix.entry(0, 0)
    }

    pub fn b2(&self) -> &BigInt {
        self.matrix.entry(1, 0)
    }

    pub fn b3(&self) -> &BigInt {
        self.matrix.entry(0, 1)
    }

    pub fn b4(&self) -> &BigInt {
        self.matrix.entry(1, 1)
    }

    /// `[φ] − I`.
    pub fn minus_identity(&self) -> IntMatrix2 {
        &self.matrix - &IntMatrix2::identity()
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        GroupElement::from_exponents(&self.matrix.apply(&g.exponents()))
    }

    pub fn compose(&self, inner: &Endomorphism) -> Endomorphism {
        Endomorphism::new(&self.matrix * &inner.matrix)
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

/// A finite ℤ-linear combination of keys, with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, BigInt>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(key: K, c: impl Into<BigInt>) -> Self {
        let mut x = Self::zero();
        x.add_term(key, c.into());
        x
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (K, C)>) -> Self {
        let mut x = Self::zero();
        for (k, c) in terms {
            x.add_term(k, c.into());
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigInt)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn pop_first(&mut self) -> Option<(K, BigInt)> {
        self.terms.pop_first()
    }

    pub fn coeff(&self, key: &K) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, key: K, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LinComb { terms: self.terms.iter().map(|(g, c)| (g.clone(), c * k)).collect() }
    }

    /// Apply a key map and re-collect terms.
    pub fn map_keys<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> LinComb<L> {
        LinComb::from_terms(self.terms.iter().map(|(k, c)| (f(k), c.clone())))
    }

    /// Keep the terms whose key satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&K) -> bool) -> Self {
        LinComb {
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, BigInt)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, BigInt)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl<K: Ord + Clone> AddAssign<&LinComb<K>> for LinComb<K> {
    fn add_assign(&mut self, o: &LinComb<K>) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
    }
}

impl<K: Ord + Clone> SubAssign<&LinComb<K>> for LinComb<K> {
    fn sub_assign(&mut self, o: &LinComb<K>) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), -c);
        }
    }
}

impl<K: Ord + Clone> Add for &LinComb<K> {
    type Output = LinComb<K>;
    fn add(self, o: &LinComb<K>) -> LinComb<K> {
        let mut x = self.clone();
        x += o;
        x
    }
}

impl<K: Ord + Clone> Sub for &LinComb<K> {
    type Output = LinComb<K>;
    fn sub(self, o: &LinComb<K>) -> LinComb<K> {
        let mut x = self.clone();
        x -= o;
        x
    }
}

impl<K: Ord + Clone> Add for LinComb<K> {
    type Output = LinComb<K>;
    fn add(mut self, o: LinComb<K>) -> LinComb<K> {
        self += &o;
        self
    }
}

impl<K: Ord + Clone> Sub for LinComb<K> {
    type Output = LinComb<K>;
    fn sub(mut self, o: LinComb<K>) -> LinComb<K> {
        self -= &o;
        self
    }
}

impl<K: Ord + Clone> Neg for &LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        LinComb { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

impl<K: Ord + Clone> Neg for LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        -&self
    }
}

/// An element of the group ring ℤG.
pub type RingElement = LinComb<GroupElement>;

impl RingElement {
    pub fn one() -> Self {
        Self::monomial(1, GroupElement::identity())
    }

    pub fn monomial(c: impl Into<BigInt>, g: GroupElement) -> Self {
        Self::term(g, c)
    }

    pub fn group(g: GroupElement) -> Self {
        Self::term(g, 1)
    }

    /// Multiply every term by the group element `g`.
    pub fn shift(&self, g: &GroupElement) -> Self {
        self.map_keys(|h| h * g)
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, o: &RingElement) -> RingElement {
        ring_mul(self, o)
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, o: RingElement) -> RingElement {
        ring_mul(&self, &o)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.iter().enumerate() {
            let sign = if c < &BigInt::zero() { "-" } else if i > 0 { "+" } else { "" };
            let mag = if c < &BigInt::zero() { -c } else { c.clone() };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            if mag.is_one() {
                write!(f, "{g}")?;
            } else if g.is_identity() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}·{g}")?;
            }
        }
        Ok(())
    }
}

/// φ applied termwise.
pub fn apply_phi(phi: &Endomorphism, x: &RingElement) -> RingElement {
    x.map_keys(|g| phi.apply(g))
}

/// Product in ℤG.
pub fn ring_mul(x: &RingElement, y: &RingElement) -> RingElement {
    let mut out = RingElement::zero();
    for (g, a) in x.iter() {
        for (h, b) in y.iter() {
            out.add_term(g * h, a * b);
        }
    }
    out
}
