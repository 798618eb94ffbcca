//! φ-twisted conjugacy in G: `g1 ~ g2` iff `g1 = g · g2 · φ(g)⁻¹` for some g.
//! The classes are the cosets of `im([φ] − I)` in ℤ².

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::algebra::{Endomorphism, GroupElement};
use crate::lattice::{self, column_hermite, reduce_mod_hermite, IntMatrix2, Lattice, Vec2};

/// Canonical representative of a semiconjugacy class: the reduction of Θ(g)
/// into the fundamental domain of the Hermite form of `[φ] − I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    pub rep: GroupElement,
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.rep.m, self.rep.n)
    }
}

/// Precomputed class data for a fixed φ; use this when classifying many elements.
#[derive(Clone, Debug)]
pub struct Classifier {
    hermite: IntMatrix2,
}

impl Classifier {
    pub fn new(phi: &Endomorphism) -> Self {
        Classifier { hermite: column_hermite(&phi.minus_identity()) }
    }

    pub fn class_of_exponents(&self, x: &Vec2) -> ClassId {
        ClassId { rep: GroupElement::from_exponents(&reduce_mod_hermite(&self.hermite, x)) }
    }

    pub fn class_of(&self, g: &GroupElement) -> ClassId {
        self.class_of_exponents(&g.exponents())
    }

    /// The column Hermite form of `[φ] − I`.
    pub fn hermite(&self) -> &IntMatrix2 {
        &self.hermite
    }
}

/// A conjugator exponent `z` with `([φ] − I) z = Θ(g2 g1⁻¹)`, if one exists.
/// Then `g = u^{z1} v^{z2}` satisfies `g1 = g · g2 · φ(g)⁻¹`.
pub fn same_class(phi: &Endomorphism, g1: &GroupElement, g2: &GroupElement) -> Option<Vec2> {
    let w = (g2 * &g1.inverse()).exponents();
    lattice::solve_affine(&phi.minus_identity(), &w).map(|s| s.particular)
}

/// Check `g1 = g · g2 · φ(g)⁻¹` for `g = u^{z1} v^{z2}`.
pub fn is_witness(phi: &Endomorphism, g1: &GroupElement, g2: &GroupElement, z: &Vec2) -> bool {
    let g = GroupElement::from_exponents(z);
    &(&g * g2) * &phi.apply(&g).inverse() == *g1
}

pub fn class_id(phi: &Endomorphism, g: &GroupElement) -> ClassId {
    Classifier::new(phi).class_of(g)
}

/// `ker([φ] − I)`; the same lattice serves as the semicentralizer of every element.
pub fn semicentralizer(phi: &Endomorphism) -> Lattice {
    lattice::kernel(&phi.minus_identity())
}

/// Number of semiconjugacy classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassCount {
    Finite(BigInt),
    Infinite,
}

pub fn class_count(phi: &Endomorphism) -> ClassCount {
    let d = phi.minus_identity().det();
    if d == BigInt::from(0) {
        ClassCount::Infinite
    } else {
        ClassCount::Finite(d.abs())
    }
}

/// The canonical primitive generator of `ker([φ] − I)` when it has rank 1.
pub fn alpha(phi: &Endomorphism) -> Option<Vec2> {
    match semicentralizer(phi).basis() {
        [g] => Some(g.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vec2;

    fn g(m: i64, n: i64) -> GroupElement {
        GroupElement::new(m, n)
    }

    #[test]
    fn same_class_examples() {
        let shear = Endomorphism::from_rows(1, 1, 0, 1);
        let z = same_class(&shear, &g(0, 0), &g(5, 0)).unwrap();
        assert_eq!(z, vec2(0, 5));
        assert!(is_witness(&shear, &g(0, 0), &g(5, 0), &z));
        assert!(same_class(&shear, &g(0, 0), &g(0, 1)).is_none());
        let phi = Endomorphism::from_rows(3, 0, 0, 2);
        assert_eq!(same_class(&phi, &g(4, -2), &g(4, -2)), Some(vec2(0, 0)));
    }

    #[test]
    fn class_id_examples() {
        let phi = Endomorphism::from_rows(3, 0, 0, 2);
        assert_eq!(class_id(&phi, &g(3, 7)).rep, g(1, 0));
        assert_eq!(class_id(&phi, &g(0, 0)).rep, g(0, 0));
        let shear = Endomorphism::from_rows(1, 1, 0, 1);
        for k in -7..=7 {
            assert_eq!(class_id(&shear, &g(k, 0)).rep, g(0, 0));
        }
    }

    #[test]
    fn semicentralizer_and_count_examples() {
        let shear = Endomorphism::from_rows(1, 1, 0, 1);
        assert_eq!(semicentralizer(&shear).basis(), &[vec2(1, 0)]);
        assert_eq!(semicentralizer(&Endomorphism::identity()).rank(), 2);
        let phi = Endomorphism::from_rows(3, 0, 0, 2);
        assert_eq!(semicentralizer(&phi).rank(), 0);
        assert_eq!(class_count(&phi), ClassCount::Finite(BigInt::from(2)));
        assert_eq!(class_count(&Endomorphism::identity()), ClassCount::Infinite);
        assert_eq!(class_count(&Endomorphism::from_rows(2, 0, 0, 2)), ClassCount::Finite(BigInt::from(1)));
    }
}
