//! Brute-force checkers, independent of the normal forms used elsewhere:
//! bounded conjugator enumeration, bounded boundary certificates by exact
//! linear algebra, and a seeded generator of valid cellular data.

use std::collections::{BTreeSet, HashMap};

use itertools::{iproduct, Itertools};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Endomorphism, GroupElement, RingElement};
use crate::error::{Error, Result};
use crate::hochschild::{d1, d2, decompose_components, Tensor1, Tensor2, TensorChain1, TensorChain2};
use crate::lattice::{vec2, Vec2};
use crate::semiconjugacy::{ClassId, Classifier};
use crate::sparse::{IntEchelon, ModPEchelon};
use crate::trace::{translation_homotopy, with_boundary_exclusions, CellularHomotopyData};

/// Search window and size limits for the brute-force routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Exponents range over `[−exponent_bound, exponent_bound]`.
    pub exponent_bound: u32,
    /// Number of random terms the generator may add to a homotopy.
    pub max_terms: u32,
}

impl SearchBudget {
    pub fn new(exponent_bound: u32, max_terms: u32) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::Budget("max_terms must be positive".into()));
        }
        Ok(SearchBudget { exponent_bound, max_terms })
    }

    pub fn window(exponent_bound: u32) -> Self {
        SearchBudget { exponent_bound, max_terms: 1 }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { exponent_bound: 3, max_terms: 3 }
    }
}

/// All points of `[−b, b]²`, ordered by max-norm and then lexicographically.
pub fn window_points(b: u32) -> Vec<Vec2> {
    let b = b as i64;
    iproduct!(-b..=b, -b..=b)
        .sorted_by_key(|&(x, y)| (x.abs().max(y.abs()), x, y))
        .map(|(x, y)| vec2(x, y))
        .collect()
}

/// The first `z` in the window with `([φ] − I) z = Θ(g2 g1⁻¹)`.
pub fn brute_same_class(
    phi: &Endomorphism,
    g1: &GroupElement,
    g2: &GroupElement,
    budget: &SearchBudget,
) -> Option<Vec2> {
    let a = phi.minus_identity();
    let w = (g2 * &g1.inverse()).exponents();
    window_points(budget.exponent_bound).into_iter().find(|z| a.apply(z) == w)
}

/// Look for `y` with `d2(y) = cycle` among 2-chains `a⊗b⊗c` whose exponents
/// lie in `[−B, B]²`, with middle factor `b ∈ {1, u^±1, v^±1}` and `a·b·c`
/// in a class met by the cycle. The system is first tested for consistency
/// modulo a large prime (inconsistency there rules out integer solutions),
/// then solved exactly over ℤ.
pub fn brute_certificate(
    phi: &Endomorphism,
    cycle: &TensorChain1,
    budget: &SearchBudget,
) -> Result<Option<TensorChain2>> {
    let b = d1(phi, cycle);
    if !b.is_zero() {
        return Err(Error::NotACycle(b.to_string()));
    }
    if cycle.is_zero() {
        return Ok(Some(TensorChain2::zero()));
    }
    let bound = BigInt::from(budget.exponent_bound);
    let in_window = |g: &GroupElement| g.m.magnitude() <= bound.magnitude() && g.n.magnitude() <= bound.magnitude();
    if !cycle.keys().all(|t| in_window(&t.a) && in_window(&t.b)) {
        return Ok(None);
    }
    let classifier = Classifier::new(phi);
    let classes: BTreeSet<ClassId> = decompose_components(phi, cycle).into_keys().collect();
    let points: Vec<GroupElement> =
        window_points(budget.exponent_bound).iter().map(GroupElement::from_exponents).collect();
    let middles: Vec<GroupElement> = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]
        .into_iter()
        .map(|(m, n)| GroupElement::new(m, n))
        .filter(|g| in_window(g))
        .collect();

    let mut rows: HashMap<Tensor1, u32> = HashMap::new();
    let row_id = |t: Tensor1, rows: &mut HashMap<Tensor1, u32>| {
        let n = rows.len() as u32;
        *rows.entry(t).or_insert(n)
    };
    let target: Vec<(u32, i64)> = cycle
        .iter()
        .map(|(t, c)| (row_id(t.clone(), &mut rows), i64::try_from(c).expect("small coefficients")))
        .collect();

    let mut candidates: Vec<Tensor2> = Vec::new();
    let mut columns: Vec<Vec<(u32, i64)>> = Vec::new();
    for a in &points {
        for m in &middles {
            let ab = a * m;
            for c in &points {
                if !classes.contains(&classifier.class_of(&(&ab * c))) {
                    continue;
                }
                let t = Tensor2::new(a.clone(), m.clone(), c.clone());
                let image = d2(phi, &TensorChain2::term(t.clone(), 1));
                if image.is_zero() {
                    continue;
                }
                let col: Vec<(u32, i64)> = image
                    .iter()
                    .map(|(k, v)| (row_id(k.clone(), &mut rows), i64::try_from(v).expect("small")))
                    .collect();
                candidates.push(t);
                columns.push(col);
            }
        }
    }
    for col in columns.iter_mut() {
        col.sort_unstable();
    }
    let mut target = target;
    target.sort_unstable();

    let mut modp = ModPEchelon::default();
    for col in &columns {
        modp.insert(col);
    }
    if !modp.spans(&target) {
        return Ok(None);
    }
    let mut exact = IntEchelon::default();
    for (i, col) in columns.iter().enumerate() {
        exact.insert(i, col);
    }
    let Some(y) = exact.solve(&target) else { return Ok(None) };
    let cert: TensorChain2 = y.into_iter().map(|(i, c)| (candidates[i].clone(), c)).collect();
    debug_assert_eq!(d2(phi, &cert), *cycle);
    Ok(Some(cert))
}

/// Random rank-one perturbation `[φ] = I + p qᵀ` with entries of `p`, `q`
/// in `[−bound, bound]`, both nonzero, so `det([φ] − I) = 0` and
/// `ker([φ] − I)` has rank one.
pub fn random_rank_one_phi(seed: u64, bound: i64) -> Endomorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let v = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        if v != (0, 0) {
            return v;
        }
    };
    let p = draw(&mut rng);
    let q = draw(&mut rng);
    Endomorphism::from_rows(1 + p.0 * q.0, p.0 * q.1, p.1 * q.0, 1 + p.1 * q.1)
}

/// Seeded valid cellular data for φ: the linear map for `[φ]` translated by
/// a random lift, dragged around a random loop, with a random null-homotopic
/// correction of at most `max_terms` terms in `D₀`. Exclusions follow
/// [`crate::trace::potential_boundary_classes`].
pub fn generate_valid_data(phi: &Endomorphism, budget: &SearchBudget, seed: u64) -> Result<CellularHomotopyData> {
    if budget.max_terms == 0 {
        return Err(Error::Budget("max_terms must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = budget.exponent_bound as i64;
    let point = |rng: &mut ChaCha8Rng| GroupElement::new(rng.gen_range(-b..=b), rng.gen_range(-b..=b));
    let lift = point(&mut rng);
    let track = point(&mut rng);
    let mut correction = RingElement::zero();
    for _ in 0..rng.gen_range(0..=budget.max_terms) {
        let c = [-2i64, -1, 1, 2][rng.gen_range(0..4)];
        correction.add_term(point(&mut rng), BigInt::from(c));
    }
    let data = translation_homotopy(phi, &lift, &track, &correction)?;
    Ok(with_boundary_exclusions(phi, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::{tensor1, tensor2};
    use crate::trace::validate_cellular;

    fn g(m: i64, n: i64) -> GroupElement {
        GroupElement::new(m, n)
    }

    fn shear() -> Endomorphism {
        Endomorphism::from_rows(1, 1, 0, 1)
    }

    #[test]
    fn brute_same_class_examples() {
        let w = brute_same_class(&shear(), &g(0, 0), &g(5, 0), &SearchBudget::window(6)).unwrap();
        assert_eq!(Endomorphism::from_rows(0, 1, 0, 0).matrix().apply(&w), vec2(5, 0));
        // first witness of max-norm 5 in lexicographic order
        assert_eq!(w, vec2(-5, 5));
        assert!(brute_same_class(&shear(), &g(0, 0), &g(0, 1), &SearchBudget::window(20)).is_none());
        assert_eq!(brute_same_class(&shear(), &g(2, 3), &g(2, 3), &SearchBudget::window(0)), Some(vec2(0, 0)));
    }

    #[test]
    fn brute_certificate_examples() {
        let phi = shear();
        let x = tensor1(1, g(0, 0), g(1, 2));
        let y = brute_certificate(&phi, &x, &SearchBudget::window(2)).unwrap().unwrap();
        assert_eq!(d2(&phi, &y), x);
        assert_eq!(y, tensor2(1, g(0, 0), g(0, 0), g(1, 2)));
        for b in 0..=3 {
            let x = tensor1(1, g(1, 0), g(1, 0));
            assert_eq!(brute_certificate(&phi, &x, &SearchBudget::window(b)).unwrap(), None);
        }
        assert_eq!(
            brute_certificate(&phi, &TensorChain1::zero(), &SearchBudget::window(1)).unwrap(),
            Some(TensorChain2::zero())
        );
        assert!(brute_certificate(&phi, &tensor1(1, g(0, 1), g(0, 0)), &SearchBudget::window(1)).is_err());
    }

    #[test]
    fn brute_certificate_finds_scaling_boundaries() {
        let phi = Endomorphism::from_rows(3, 0, 0, 2);
        let x = d2(&phi, &tensor2(1, g(1, 0), g(0, 1), g(-1, 0)));
        let y = brute_certificate(&phi, &x, &SearchBudget::window(3)).unwrap().unwrap();
        assert_eq!(d2(&phi, &y), x);
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        let phi = shear();
        let a = generate_valid_data(&phi, &SearchBudget::default(), 7).unwrap();
        let b = generate_valid_data(&phi, &SearchBudget::default(), 7).unwrap();
        assert_eq!(a, b);
        assert!(validate_cellular(&phi, &a).is_empty());
        for seed in 0..20 {
            let phi = random_rank_one_phi(seed, 3);
            assert!(phi.minus_identity().det() == BigInt::from(0));
            let data = generate_valid_data(&phi, &SearchBudget::default(), seed).unwrap();
            assert!(validate_cellular(&phi, &data).is_empty());
        }
    }
}
