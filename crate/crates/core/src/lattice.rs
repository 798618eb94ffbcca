//! Exact 2×2 integer linear algebra: Smith and Hermite forms, affine
//! Diophantine systems, kernels and cokernels.

use std::fmt;
use std::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A vector of ℤ².
pub type Vec2 = [BigInt; 2];

pub fn vec2(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Vec2 {
    [x.into(), y.into()]
}

pub fn vec_add(a: &Vec2, b: &Vec2) -> Vec2 {
    [&a[0] + &b[0], &a[1] + &b[1]]
}

pub fn vec_sub(a: &Vec2, b: &Vec2) -> Vec2 {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

pub fn vec_scale(k: &BigInt, a: &Vec2) -> Vec2 {
    [k * &a[0], k * &a[1]]
}

pub fn vec_neg(a: &Vec2) -> Vec2 {
    [-&a[0], -&a[1]]
}

pub fn vec_is_zero(a: &Vec2) -> bool {
    a[0].is_zero() && a[1].is_zero()
}

pub fn zero_vec() -> Vec2 {
    [BigInt::zero(), BigInt::zero()]
}

/// Divide out the content and make the first nonzero coordinate positive.
/// The zero vector is returned unchanged.
pub fn primitive_part(a: &Vec2) -> Vec2 {
    let g = a[0].gcd(&a[1]);
    if g.is_zero() {
        return a.clone();
    }
    let mut p = [&a[0] / &g, &a[1] / &g];
    let first = if p[0].is_zero() { &p[1] } else { &p[0] };
    if first.is_negative() {
        p = vec_neg(&p);
    }
    p
}

/// 2×2 integer matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix2 {
    pub rows: [[BigInt; 2]; 2],
}

impl IntMatrix2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        IntMatrix2 { rows: [[a.into(), b.into()], [c.into(), d.into()]] }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0, 0)
    }

    pub fn from_columns(c1: &Vec2, c2: &Vec2) -> Self {
        IntMatrix2 { rows: [[c1[0].clone(), c2[0].clone()], [c1[1].clone(), c2[1].clone()]] }
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vec2 {
        [self.rows[0][j].clone(), self.rows[1][j].clone()]
    }

    pub fn det(&self) -> BigInt {
        &self.rows[0][0] * &self.rows[1][1] - &self.rows[0][1] * &self.rows[1][0]
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows[0][1].is_zero() && self.rows[1][0].is_zero()
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        [
            &self.rows[0][0] * &v[0] + &self.rows[0][1] * &v[1],
            &self.rows[1][0] * &v[0] + &self.rows[1][1] * &v[1],
        ]
    }

    pub fn transpose(&self) -> Self {
        let r = &self.rows;
        IntMatrix2 { rows: [[r[0][0].clone(), r[1][0].clone()], [r[0][1].clone(), r[1][1].clone()]] }
    }

    /// Inverse of a unimodular matrix, `None` otherwise.
    pub fn unimodular_inverse(&self) -> Option<Self> {
        let d = self.det();
        if !d.abs().is_one() {
            return None;
        }
        let r = &self.rows;
        Some(IntMatrix2 {
            rows: [
                [&r[1][1] * &d, -&r[0][1] * &d],
                [-&r[1][0] * &d, &r[0][0] * &d],
            ],
        })
    }

    /// Rank over ℚ.
    pub fn rank(&self) -> usize {
        if self.is_zero() {
            0
        } else if self.det().is_zero() {
            1
        } else {
            2
        }
    }

    /// Gcd of all entries.
    pub fn content(&self) -> BigInt {
        self.rows.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    fn swap_rows(&mut self) {
        self.rows.swap(0, 1);
    }

    fn swap_cols(&mut self) {
        for row in self.rows.iter_mut() {
            row.swap(0, 1);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..2 {
            let t = k * &self.rows[src][j];
            self.rows[dst][j] += t;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..2 {
            let t = k * &self.rows[i][src];
            self.rows[i][dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..2 {
            self.rows[i][j] = -&self.rows[i][j];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..2 {
            self.rows[i][j] = -&self.rows[i][j];
        }
    }
}

impl Mul for &IntMatrix2 {
    type Output = IntMatrix2;
    fn mul(self, o: &IntMatrix2) -> IntMatrix2 {
        let a = &self.rows;
        let b = &o.rows;
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        IntMatrix2 { rows: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }
}

impl Sub for &IntMatrix2 {
    type Output = IntMatrix2;
    fn sub(self, o: &IntMatrix2) -> IntMatrix2 {
        let e = |i: usize, j: usize| &self.rows[i][j] - &o.rows[i][j];
        IntMatrix2 { rows: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.rows;
        write!(f, "[[{},{}],[{},{}]]", r[0][0], r[0][1], r[1][0], r[1][1])
    }
}

/// `M = u · s · v` with `u`, `v` unimodular and `s = diag(d1, d2)`, `d1 | d2`, both ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix2,
    pub s: IntMatrix2,
    pub v: IntMatrix2,
}

impl Smith {
    pub fn invariant_factors(&self) -> (BigInt, BigInt) {
        (self.s.rows[0][0].clone(), self.s.rows[1][1].clone())
    }
}

/// Smith normal form by elementary operations. The invariant `M = u·s·v` is
/// maintained throughout: a row operation `s ← E s` updates `u ← u E⁻¹`, a
/// column operation `s ← s F` updates `v ← F⁻¹ v`.
pub fn smith_normal_form(m: &IntMatrix2) -> Smith {
    let mut s = m.clone();
    let mut u = IntMatrix2::identity();
    let mut v = IntMatrix2::identity();

    loop {
        if s.is_zero() {
            break;
        }
        // smallest nonzero entry to the pivot position
        let (pi, pj) = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .filter(|&(i, j)| !s.rows[i][j].is_zero())
            .min_by_key(|&(i, j)| s.rows[i][j].abs())
            .expect("nonzero matrix");
        if pi == 1 {
            s.swap_rows();
            u.swap_cols();
        }
        if pj == 1 {
            s.swap_cols();
            v.swap_rows();
        }
        let p = s.rows[0][0].clone();
        let q = s.rows[1][0].div_floor(&p);
        if !q.is_zero() {
            s.add_row(1, 0, &-&q);
            u.add_col(0, 1, &q);
        }
        let q = s.rows[0][1].div_floor(&p);
        if !q.is_zero() {
            s.add_col(1, 0, &-&q);
            v.add_row(0, 1, &q);
        }
        if !s.rows[1][0].is_zero() || !s.rows[0][1].is_zero() {
            continue;
        }
        if s.rows[1][1].is_multiple_of(&p) {
            break;
        }
        // bring d2 into the first row to force divisibility
        s.add_row(0, 1, &BigInt::one());
        u.add_col(1, 0, &-BigInt::one());
    }
    for i in 0..2 {
        if s.rows[i][i].is_negative() {
            s.negate_row(i);
            u.negate_col(i);
        }
    }
    debug_assert_eq!(&(&u * &s) * &v, *m);
    Smith { u, s, v }
}

/// Sublattice of ℤ² with a canonical basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    basis: Vec<Vec2>,
}

impl Lattice {
    pub fn zero() -> Self {
        Lattice { basis: Vec::new() }
    }

    pub fn full() -> Self {
        Lattice { basis: vec![vec2(1, 0), vec2(0, 1)] }
    }

    /// Rank-1 lattice spanned by `g`, or the zero lattice if `g = 0`.
    /// The generator is normalised to have its first nonzero coordinate positive.
    pub fn line(g: &Vec2) -> Self {
        if vec_is_zero(g) {
            return Self::zero();
        }
        let first = if g[0].is_zero() { &g[1] } else { &g[0] };
        let g = if first.is_negative() { vec_neg(g) } else { g.clone() };
        Lattice { basis: vec![g] }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec2] {
        &self.basis
    }

    pub fn contains(&self, x: &Vec2) -> bool {
        match self.basis.as_slice() {
            [] => vec_is_zero(x),
            [g] => {
                let cross = &g[0] * &x[1] - &g[1] * &x[0];
                if !cross.is_zero() {
                    return false;
                }
                let (num, den) = if g[0].is_zero() { (&x[1], &g[1]) } else { (&x[0], &g[0]) };
                num.is_multiple_of(den)
            }
            _ => {
                let m = IntMatrix2::from_columns(&self.basis[0], &self.basis[1]);
                solve_affine(&m, x).is_some()
            }
        }
    }
}

/// The kernel of `m` as a lattice; rank-1 kernels are generated by a
/// primitive vector whose first nonzero coordinate is positive.
pub fn kernel(m: &IntMatrix2) -> Lattice {
    match m.rank() {
        0 => Lattice::full(),
        2 => Lattice::zero(),
        _ => {
            // rows are proportional; take a nonzero row (a, b) and use (-b, a)
            let row = if m.rows[0].iter().all(Zero::is_zero) { &m.rows[1] } else { &m.rows[0] };
            let g = primitive_part(&[-&row[1], row[0].clone()]);
            Lattice::line(&g)
        }
    }
}

/// One solution of `M z = w` together with the homogeneous solution lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec2,
    pub kernel: Lattice,
}

/// Solve `M z = w` over ℤ. The particular solution is reduced modulo the
/// kernel so that it is canonical: for a rank-1 kernel generated by `k`, the
/// coordinate selected by the first nonzero entry of `k` is brought into
/// `[0, |k_i|)`.
pub fn solve_affine(m: &IntMatrix2, w: &Vec2) -> Option<AffineSolution> {
    let smith = smith_normal_form(m);
    let u_inv = smith.u.unimodular_inverse().expect("unimodular");
    let v_inv = smith.v.unimodular_inverse().expect("unimodular");
    // M = U S V, so S (V z) = U⁻¹ w
    let rhs = u_inv.apply(w);
    let mut y = zero_vec();
    for i in 0..2 {
        let d = &smith.s.rows[i][i];
        if d.is_zero() {
            if !rhs[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = rhs[i].div_mod_floor(d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let mut z = v_inv.apply(&y);
    let kernel = kernel(m);
    if let [g] = kernel.basis() {
        let i = if g[0].is_zero() { 1 } else { 0 };
        let t = z[i].div_floor(&g[i]);
        z = vec_sub(&z, &vec_scale(&t, g));
    }
    debug_assert_eq!(m.apply(&z), *w);
    Some(AffineSolution { particular: z, kernel })
}

/// Lower-triangular column Hermite form of `m`: a matrix `[[h11, 0], [h21, h22]]`
/// whose columns span the same lattice as the columns of `m`.
///
/// Normalisation: `h11 ≥ 0`, `h22 ≥ 0`; when `h11 > 0` and `h22 > 0` then
/// `0 ≤ h21 < h22`; when `h11 = 0` then `h21 = 0`.
pub fn column_hermite(m: &IntMatrix2) -> IntMatrix2 {
    let mut c1 = m.column(0);
    let mut c2 = m.column(1);
    // Euclid on the first coordinates
    while !c2[0].is_zero() {
        if c1[0].is_zero() || c2[0].abs() < c1[0].abs() {
            std::mem::swap(&mut c1, &mut c2);
            continue;
        }
        let q = c2[0].div_floor(&c1[0]);
        c2 = vec_sub(&c2, &vec_scale(&q, &c1));
    }
    if c1[0].is_negative() {
        c1 = vec_neg(&c1);
    }
    if c1[0].is_zero() {
        // both columns on the second axis
        let g = c1[1].gcd(&c2[1]);
        return IntMatrix2::new(0, 0, 0, g);
    }
    if c2[1].is_negative() {
        c2 = vec_neg(&c2);
    }
    if !c2[1].is_zero() {
        let q = c1[1].div_floor(&c2[1]);
        c1 = vec_sub(&c1, &vec_scale(&q, &c2));
    }
    IntMatrix2::from_columns(&c1, &c2)
}

/// Canonical representative of `x` modulo the column lattice of a matrix in
/// column Hermite form (see [`column_hermite`]).
pub fn reduce_mod_hermite(h: &IntMatrix2, x: &Vec2) -> Vec2 {
    let mut x = x.clone();
    let h11 = &h.rows[0][0];
    if h11.is_positive() {
        let t = x[0].div_floor(h11);
        x = vec_sub(&x, &vec_scale(&t, &h.column(0)));
    }
    let h22 = &h.rows[1][1];
    if h22.is_positive() {
        let t = x[1].div_floor(h22);
        x[1] -= t * h22;
    }
    x
}

/// Coset representatives of ℤ² / Mℤ².
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cokernel {
    Finite(Vec<Vec2>),
    Infinite { invariant_factors: (BigInt, BigInt) },
}

pub fn cokernel_reps(m: &IntMatrix2) -> Cokernel {
    if m.det().is_zero() {
        let smith = smith_normal_form(m);
        return Cokernel::Infinite { invariant_factors: smith.invariant_factors() };
    }
    let h = column_hermite(m);
    let mut reps = Vec::new();
    let mut i = BigInt::zero();
    while i < h.rows[0][0] {
        let mut j = BigInt::zero();
        while j < h.rows[1][1] {
            reps.push([i.clone(), j.clone()]);
            j += 1;
        }
        i += 1;
    }
    Cokernel::Finite(reps)
}
