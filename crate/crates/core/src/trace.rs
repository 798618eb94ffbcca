//! One-parameter trace of a torus homotopy from cellular chain data, and the
//! resulting Nielsen number and Lefschetz class.
//!
//! The torus carries one 0-cell `w`, 1-cells `u`, `v` and a 2-cell `E`
//! attached along `u v u⁻¹ v⁻¹`. Chains are right ℤG-modules; a matrix
//! `M` of a map sends cell `i` to `Σ_j cell_j · M[j][i]`. The boundaries are
//! `∂₁ = [u−1, v−1]` and `∂₂ = [1−v, u−1]ᵀ`. Maps twisted by φ compose as
//! `[D ∘ ∂] = [D]·φ([∂])`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{apply_phi, ring_mul, Endomorphism, GroupElement, RingElement};
use crate::error::{Error, Result};
use crate::hochschild::{
    d1, decompose_components, is_trivial, Tensor1, TensorChain1, TrivialityVerdict,
};
use crate::lattice::{column_hermite, primitive_part, vec_add, vec_is_zero, vec_neg, vec_scale, zero_vec, Vec2};
use crate::semiconjugacy::{alpha, ClassId, Classifier};

/// ℤG-matrices of a chain map in degrees 0, 1, 2.
/// `deg1[j][i]` is the coefficient of cell `j` in the image of cell `i`
/// (cells ordered `u`, `v`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapMatrices {
    pub deg0: RingElement,
    pub deg1: [[RingElement; 2]; 2],
    pub deg2: RingElement,
}

impl ChainMapMatrices {
    /// Every entry multiplied by `x`.
    pub fn scaled(&self, x: &RingElement) -> Self {
        let m = |e: &RingElement| ring_mul(e, x);
        ChainMapMatrices {
            deg0: m(&self.deg0),
            deg1: [[m(&self.deg1[0][0]), m(&self.deg1[0][1])], [m(&self.deg1[1][0]), m(&self.deg1[1][1])]],
            deg2: m(&self.deg2),
        }
    }

    /// Alternating sum of diagonal entries: the chain-level Reidemeister trace.
    pub fn reidemeister_trace(&self) -> RingElement {
        &(&self.deg0 - &self.deg1[0][0]) - &(&self.deg1[1][1] - &self.deg2)
    }

    fn diagonal_support(&self) -> impl Iterator<Item = &GroupElement> {
        [&self.deg0, &self.deg1[0][0], &self.deg1[1][1], &self.deg2].into_iter().flat_map(|e| e.keys())
    }
}

/// Chain-level data of a homotopy over the standard CW torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularHomotopyData {
    /// Coefficients of `D₀(w)` on `u`, `v`.
    pub d0: [RingElement; 2],
    /// Coefficients on `E` of `D₁(u)`, `D₁(v)`.
    pub d1: [RingElement; 2],
    pub f0: ChainMapMatrices,
    pub f1: ChainMapMatrices,
    /// Representatives of the classes deleted from the trace. Any element of
    /// a class may be given; it is canonicalised with the class of φ.
    pub excluded_classes: BTreeSet<GroupElement>,
}

/// Which side the group acts on when reading off the trace; `Left` negates R.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ActionSide {
    #[default]
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityKind {
    ChainMapF0,
    ChainMapF1,
    Homotopy,
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentityKind::ChainMapF0 => "F0 chain map",
            IdentityKind::ChainMapF1 => "F1 chain map",
            IdentityKind::Homotopy => "chain homotopy",
        })
    }
}

/// A failed matrix identity: `defect = lhs − rhs` at `entry`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: IdentityKind,
    pub degree: u8,
    pub entry: (usize, usize),
    pub defect: RingElement,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} identity fails in degree {} at entry ({},{}): lhs − rhs = {}",
            self.kind, self.degree, self.entry.0, self.entry.1, self.defect
        )
    }
}

fn mono(c: i64, m: i64, n: i64) -> RingElement {
    RingElement::monomial(c, GroupElement::new(m, n))
}

/// `[∂₁] = [u−1, v−1]`.
pub fn boundary1() -> [RingElement; 2] {
    [mono(1, 1, 0) - mono(1, 0, 0), mono(1, 0, 1) - mono(1, 0, 0)]
}

/// `[∂₂] = [1−v, u−1]ᵀ`.
pub fn boundary2() -> [RingElement; 2] {
    [mono(1, 0, 0) - mono(1, 0, 1), mono(1, 1, 0) - mono(1, 0, 0)]
}

fn push_violation(out: &mut Vec<Violation>, kind: IdentityKind, degree: u8, entry: (usize, usize), defect: RingElement) {
    if !defect.is_zero() {
        out.push(Violation { kind, degree, entry, defect });
    }
}

fn chain_map_violations(phi: &Endomorphism, f: &ChainMapMatrices, kind: IdentityKind, out: &mut Vec<Violation>) {
    let b1 = boundary1();
    let b2 = boundary2();
    // [∂₁][F₁] = [F₀]·φ([∂₁])
    for i in 0..2 {
        let lhs = &ring_mul(&b1[0], &f.deg1[0][i]) + &ring_mul(&b1[1], &f.deg1[1][i]);
        let rhs = ring_mul(&f.deg0, &apply_phi(phi, &b1[i]));
        push_violation(out, kind, 1, (0, i), &lhs - &rhs);
    }
    // [∂₂][F₂] = [F₁]·φ([∂₂])
    for j in 0..2 {
        let lhs = ring_mul(&b2[j], &f.deg2);
        let rhs = &ring_mul(&f.deg1[j][0], &apply_phi(phi, &b2[0])) + &ring_mul(&f.deg1[j][1], &apply_phi(phi, &b2[1]));
        push_violation(out, kind, 2, (j, 0), &lhs - &rhs);
    }
}

/// Check that F̃₀, F̃₁ are chain maps and that `∂D + D∂ = F̃₁ − F̃₀` in
/// degrees 0, 1 and 2. Empty result means valid.
pub fn validate_cellular(phi: &Endomorphism, data: &CellularHomotopyData) -> Vec<Violation> {
    let mut out = Vec::new();
    chain_map_violations(phi, &data.f0, IdentityKind::ChainMapF0, &mut out);
    chain_map_violations(phi, &data.f1, IdentityKind::ChainMapF1, &mut out);
    let b1 = boundary1();
    let b2 = boundary2();
    let h = IdentityKind::Homotopy;
    // degree 0: ∂₁ D₀ = ΔF₀
    let lhs = &ring_mul(&b1[0], &data.d0[0]) + &ring_mul(&b1[1], &data.d0[1]);
    push_violation(&mut out, h, 0, (0, 0), &lhs - &(&data.f1.deg0 - &data.f0.deg0));
    // degree 1: ∂₂ D₁ + D₀ φ(∂₁) = ΔF₁
    for j in 0..2 {
        for i in 0..2 {
            let lhs = &ring_mul(&b2[j], &data.d1[i]) + &ring_mul(&data.d0[j], &apply_phi(phi, &b1[i]));
            let delta = &data.f1.deg1[j][i] - &data.f0.deg1[j][i];
            push_violation(&mut out, h, 1, (j, i), &lhs - &delta);
        }
    }
    // degree 2: D₁ φ(∂₂) = ΔF₂
    let lhs = &ring_mul(&data.d1[0], &apply_phi(phi, &b2[0])) + &ring_mul(&data.d1[1], &apply_phi(phi, &b2[1]));
    push_violation(&mut out, h, 2, (0, 0), &lhs - &(&data.f1.deg2 - &data.f0.deg2));
    out
}

/// `Σ αβ · g⊗h` over the terms `αg` of `x` and `βh` of `y`.
pub fn ring_tensor(x: &RingElement, y: &RingElement) -> TensorChain1 {
    let mut out = TensorChain1::zero();
    for (g, a) in x.iter() {
        for (h, b) in y.iter() {
            out.add_term(Tensor1::new(g.clone(), h.clone()), a * b);
        }
    }
    out
}

/// `tr(−[∂₁]⊗[D₀]) + tr([∂₂]⊗[D₁])` before any classes are removed.
pub fn full_trace(data: &CellularHomotopyData) -> TensorChain1 {
    let b1 = boundary1();
    let b2 = boundary2();
    let mut r = TensorChain1::zero();
    for j in 0..2 {
        r -= &ring_tensor(&b1[j], &data.d0[j]);
        r += &ring_tensor(&b2[j], &data.d1[j]);
    }
    r
}

/// The one-parameter trace R with the excluded classes removed.
pub fn one_parameter_trace(phi: &Endomorphism, data: &CellularHomotopyData, side: ActionSide) -> Result<TensorChain1> {
    let violations = validate_cellular(phi, data);
    if !violations.is_empty() {
        return Err(Error::InvalidCellular(violations));
    }
    let classifier = Classifier::new(phi);
    let excluded: BTreeSet<ClassId> = data.excluded_classes.iter().map(|g| classifier.class_of(g)).collect();
    let r = full_trace(data).filter(|t| !excluded.contains(&classifier.class_of(&(&t.a * &t.b))));
    Ok(match side {
        ActionSide::Right => r,
        ActionSide::Left => -r,
    })
}

/// `det([φ] − I)`.
pub fn det_slice(phi: &Endomorphism) -> BigInt {
    phi.minus_identity().det()
}

/// Whether `L = ±N·α` holds for a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremVerdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub r: TensorChain1,
    pub components: BTreeMap<ClassId, TrivialityVerdict>,
    pub nielsen: usize,
    pub lefschetz: Vec2,
    pub alpha: Option<Vec2>,
    pub theorem: TheoremVerdict,
}

/// Per-class verdicts, N, L and the theorem check for a cycle R.
pub fn analyze(phi: &Endomorphism, r: &TensorChain1, support_bound: u64) -> Result<TraceReport> {
    let b = d1(phi, r);
    if !b.is_zero() {
        return Err(Error::NotACycle(b.to_string()));
    }
    let comps: Vec<(ClassId, TensorChain1)> = decompose_components(phi, r).into_iter().collect();
    let verdicts: Vec<TrivialityVerdict> = comps
        .par_iter()
        .map(|(_, c)| is_trivial(phi, c, support_bound))
        .collect::<Result<_>>()?;
    let components: BTreeMap<ClassId, TrivialityVerdict> =
        comps.into_iter().map(|(k, _)| k).zip(verdicts).collect();

    let mut nielsen = 0usize;
    let mut lefschetz = zero_vec();
    let mut unknown = false;
    for v in components.values() {
        match v {
            TrivialityVerdict::Nontrivial(inv) => {
                nielsen += 1;
                lefschetz = vec_add(&lefschetz, inv);
            }
            TrivialityVerdict::Unknown(_) => unknown = true,
            TrivialityVerdict::Trivial(_) => {}
        }
    }
    let alpha = alpha(phi);
    let theorem = if unknown { TheoremVerdict::Inconclusive } else { theorem_verdict(nielsen, &lefschetz, alpha.as_ref()) };
    Ok(TraceReport { r: r.clone(), components, nielsen, lefschetz, alpha, theorem })
}

/// `L = ±N·α` when α exists, `N = 0` and `L = 0` otherwise.
pub fn theorem_verdict(nielsen: usize, lefschetz: &Vec2, alpha: Option<&Vec2>) -> TheoremVerdict {
    let holds = match alpha {
        Some(a) => {
            let na = vec_scale(&BigInt::from(nielsen), a);
            *lefschetz == na || *lefschetz == vec_neg(&na)
        }
        None => nielsen == 0 && vec_is_zero(lefschetz),
    };
    if holds {
        TheoremVerdict::Holds
    } else {
        TheoremVerdict::Fails
    }
}

/// Validate, trace and analyze in one go.
pub fn analyze_data(
    phi: &Endomorphism,
    data: &CellularHomotopyData,
    side: ActionSide,
    support_bound: u64,
) -> Result<TraceReport> {
    let r = one_parameter_trace(phi, data, side)?;
    analyze(phi, &r, support_bound)
}

/// `(u^a − 1)/(u − 1)` for the exponent `a`, as a Laurent polynomial in one
/// generator placed at `offset`: `Σ_{0≤i<a} g^{offset+i e}` for `a ≥ 0`, and
/// `−Σ_{a≤i<0} g^{offset+i e}` for `a < 0`.
fn geometric_sum(a: &BigInt, axis: usize, offset: &Vec2) -> RingElement {
    let mut out = RingElement::zero();
    let (lo, hi, sign) = if a.is_negative() { (a.clone(), BigInt::zero(), -1) } else { (BigInt::zero(), a.clone(), 1) };
    let mut i = lo;
    while i < hi {
        let mut p = offset.clone();
        p[axis] += &i;
        out.add_term(GroupElement::from_exponents(&p), BigInt::from(sign));
        i += 1;
    }
    out
}

/// Fox derivatives `(∂w/∂u, ∂w/∂v)` of the word `u^a v^b`.
pub fn fox_derivatives(w: &GroupElement) -> [RingElement; 2] {
    [geometric_sum(&w.m, 0, &zero_vec()), geometric_sum(&w.n, 1, &[w.m.clone(), BigInt::zero()])]
}

/// The cellular chain map of the linear torus map with matrix `[φ]`.
pub fn fox_chain_map(phi: &Endomorphism) -> ChainMapMatrices {
    let cols = [fox_derivatives(&phi.apply(&GroupElement::u())), fox_derivatives(&phi.apply(&GroupElement::v()))];
    let deg1 = [[cols[0][0].clone(), cols[1][0].clone()], [cols[0][1].clone(), cols[1][1].clone()]];
    let deg2 = &ring_mul(&deg1[0][0], &deg1[1][1]) - &ring_mul(&deg1[0][1], &deg1[1][0]);
    ChainMapMatrices { deg0: RingElement::one(), deg1, deg2 }
}

/// Solve `(1 − t) q = p` with `t` the generator on `axis`, if the quotient
/// is a Laurent polynomial.
pub fn divide_by_one_minus_generator(p: &RingElement, axis: usize) -> Option<RingElement> {
    // q_x − q_{x−e} = p_x, so q_x is the running sum of p along the line
    let mut lines: BTreeMap<BigInt, Vec<(BigInt, BigInt)>> = BTreeMap::new();
    for (g, c) in p.iter() {
        let e = g.exponents();
        lines.entry(e[1 - axis].clone()).or_default().push((e[axis].clone(), c.clone()));
    }
    let mut q = RingElement::zero();
    for (other, mut pts) in lines {
        pts.sort();
        let mut running = BigInt::zero();
        let mut it = pts.into_iter().peekable();
        while let Some((pos, c)) = it.next() {
            running += c;
            let next = it.peek().map(|(p, _)| p.clone());
            if !running.is_zero() {
                let next = next?;
                let mut k = pos;
                while k < next {
                    let mut e = [BigInt::zero(), BigInt::zero()];
                    e[axis] = k.clone();
                    e[1 - axis] = other.clone();
                    q.add_term(GroupElement::from_exponents(&e), running.clone());
                    k += 1;
                }
            }
        }
        if !running.is_zero() {
            return None;
        }
    }
    Some(q)
}

/// Cellular data of the homotopy that drags the linear map `x ↦ [φ]x`
/// (lifted through `lift`) around the loop `track`. `correction` is an
/// arbitrary element adding the null-homotopic term `∂₂`-shaped piece
/// `((v−1)h, (1−u)h)` to `D₀`. Excluded classes are left empty.
pub fn translation_homotopy(
    phi: &Endomorphism,
    lift: &GroupElement,
    track: &GroupElement,
    correction: &RingElement,
) -> Result<CellularHomotopyData> {
    let g0 = RingElement::group(lift.clone());
    let f0 = fox_chain_map(phi).scaled(&g0);
    let f1 = f0.scaled(&RingElement::group(track.clone()));
    let fox = fox_derivatives(track);
    let b1 = boundary1();
    let d0 = [
        &ring_mul(&g0, &fox[0]) + &ring_mul(&b1[1], correction),
        &ring_mul(&g0, &fox[1]) - &ring_mul(&b1[0], correction),
    ];
    let mut d1 = [RingElement::zero(), RingElement::zero()];
    for i in 0..2 {
        let rest = |j: usize| &(&f1.deg1[j][i] - &f0.deg1[j][i]) - &ring_mul(&d0[j], &apply_phi(phi, &b1[i]));
        let q = divide_by_one_minus_generator(&rest(0), 1)
            .ok_or_else(|| Error::Generation("degree-1 residue not divisible by 1 − v".into()))?;
        if ring_mul(&boundary2()[1], &q) != rest(1) {
            return Err(Error::Generation("degree-1 residue inconsistent with ∂₂".into()));
        }
        d1[i] = q;
    }
    let data = CellularHomotopyData { d0, d1, f0, f1, excluded_classes: BTreeSet::new() };
    let violations = validate_cellular(phi, &data);
    if violations.is_empty() {
        Ok(data)
    } else {
        Err(Error::InvalidCellular(violations))
    }
}

/// Classes that may carry fixed points of the end maps.
///
/// Collects the classes of the diagonal entries of both chain maps. When
/// `[φ] − I` has rank 1, the classes form lines indexed by `ℤ²/sat(im)`, and
/// for each end map every class whose line index lies between the smallest
/// and largest index met by that map is included.
pub fn potential_boundary_classes(phi: &Endomorphism, f0: &ChainMapMatrices, f1: &ChainMapMatrices) -> BTreeSet<ClassId> {
    let classifier = Classifier::new(phi);
    let a = phi.minus_identity();
    let mut out = BTreeSet::new();
    if a.rank() != 1 {
        for f in [f0, f1] {
            out.extend(f.diagonal_support().map(|g| classifier.class_of(g)));
        }
        return out;
    }
    let h = column_hermite(&a);
    let ell = if h.entry(0, 0).is_zero() { h.column(1) } else { h.column(0) };
    let d = ell[0].gcd(&ell[1]);
    let p = primitive_part(&ell);
    let q = [-&p[1], p[0].clone()];
    let e = q[0].extended_gcd(&q[1]);
    let unit = [e.x.clone() * &e.gcd, e.y.clone() * &e.gcd];
    for f in [f0, f1] {
        let idx: Vec<BigInt> = f.diagonal_support().map(|g| &q[0] * &g.m + &q[1] * &g.n).collect();
        let (Some(lo), Some(hi)) = (idx.iter().min(), idx.iter().max()) else { continue };
        let mut line = lo.clone();
        while &line <= hi {
            let z0 = vec_scale(&line, &unit);
            let mut j = BigInt::zero();
            while j < d {
                out.insert(classifier.class_of_exponents(&vec_add(&z0, &vec_scale(&j, &p))));
                j += 1;
            }
            line += 1;
        }
    }
    out
}

/// Attach [`potential_boundary_classes`] as the excluded classes.
pub fn with_boundary_exclusions(phi: &Endomorphism, mut data: CellularHomotopyData) -> CellularHomotopyData {
    data.excluded_classes =
        potential_boundary_classes(phi, &data.f0, &data.f1).into_iter().map(|c| c.rep).collect();
    data
}

/// φ = I with the constant homotopy between identical chain maps: `R = 0`.
pub fn fixed_point_free_example() -> (Endomorphism, CellularHomotopyData) {
    let phi = Endomorphism::identity();
    let f = fox_chain_map(&phi);
    let zero = || [RingElement::zero(), RingElement::zero()];
    let data = CellularHomotopyData { d0: zero(), d1: zero(), f0: f.clone(), f1: f, excluded_classes: BTreeSet::new() };
    (phi, data)
}

/// The shear `[[1,1],[0,1]]` dragged around the loop `v³`.
pub fn shear_example() -> (Endomorphism, CellularHomotopyData) {
    let phi = Endomorphism::from_rows(1, 1, 0, 1);
    let data = translation_homotopy(&phi, &GroupElement::identity(), &GroupElement::new(0, 3), &RingElement::zero())
        .expect("shear example is valid");
    (phi.clone(), with_boundary_exclusions(&phi, data))
}

/// `[[3,0],[0,2]]` (det([φ] − I) = 2) dragged around the loop `u v`.
pub fn scaling_example() -> (Endomorphism, CellularHomotopyData) {
    let phi = Endomorphism::from_rows(3, 0, 0, 2);
    let h = RingElement::group(GroupElement::new(1, -1));
    let data = translation_homotopy(&phi, &GroupElement::identity(), &GroupElement::new(1, 1), &h)
        .expect("scaling example is valid");
    (phi.clone(), with_boundary_exclusions(&phi, data))
}

/// The shipped corpus, by name.
pub fn corpus() -> Vec<(&'static str, Endomorphism, CellularHomotopyData)> {
    let (p1, d1) = shear_example();
    let (p2, d2) = fixed_point_free_example();
    let (p3, d3) = scaling_example();
    vec![("shear", p1, d1), ("fixed_point_free", p2, d2), ("scaling", p3, d3)]
}
