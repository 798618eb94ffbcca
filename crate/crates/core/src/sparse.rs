//! Sparse linear systems over ℤ: a mod-p consistency test and an exact
//! integer echelon form with combination tracking.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

fn to_mod(c: i64) -> u64 {
    c.rem_euclid(P as i64) as u64
}

type ModVec = Vec<(u32, u64)>;

/// `a − f·b`, both sorted by row.
fn axpy_mod(a: &ModVec, f: u64, b: &ModVec) -> ModVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else {
            let sub = mul_mod(f, b[j].1);
            let (row, val) = if i < a.len() && a[i].0 == b[j].0 {
                let v = (a[i].1 + P - sub) % P;
                i += 1;
                (b[j].0, v)
            } else {
                (b[j].0, (P - sub) % P)
            };
            j += 1;
            if val != 0 {
                out.push((row, val));
            }
        }
    }
    out
}

/// Row-echelon basis over 𝔽_p, pivoting on the largest row index.
#[derive(Default)]
pub struct ModPEchelon {
    pivots: HashMap<u32, ModVec>,
}

impl ModPEchelon {
    fn reduce(&self, mut v: ModVec) -> ModVec {
        while let Some(&(row, val)) = v.last() {
            match self.pivots.get(&row) {
                Some(p) => v = axpy_mod(&v, val, p),
                None => break,
            }
        }
        v
    }

    pub fn insert(&mut self, col: &[(u32, i64)]) {
        let v: ModVec = col.iter().map(|&(r, c)| (r, to_mod(c))).filter(|&(_, c)| c != 0).collect();
        let v = self.reduce(v);
        if let Some(&(row, val)) = v.last() {
            let inv = inv_mod(val);
            let v = v.into_iter().map(|(r, c)| (r, mul_mod(c, inv))).collect();
            self.pivots.insert(row, v);
        }
    }

    /// Whether `target` is in the 𝔽_p-span of the inserted columns.
    pub fn spans(&self, target: &[(u32, i64)]) -> bool {
        let v: ModVec = target.iter().map(|&(r, c)| (r, to_mod(c))).filter(|&(_, c)| c != 0).collect();
        self.reduce(v).is_empty()
    }
}

type IntVec = BTreeMap<u32, BigInt>;
type Combo = BTreeMap<usize, BigInt>;

fn axpy_int<K: Ord + Copy>(a: &mut BTreeMap<K, BigInt>, f: &BigInt, b: &BTreeMap<K, BigInt>) {
    for (k, c) in b {
        let e = a.entry(*k).or_insert_with(BigInt::zero);
        *e -= f * c;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

fn lin2<K: Ord + Copy>(s: &BigInt, a: &BTreeMap<K, BigInt>, t: &BigInt, b: &BTreeMap<K, BigInt>) -> BTreeMap<K, BigInt> {
    let mut out = BTreeMap::new();
    for (k, c) in a {
        out.insert(*k, s * c);
    }
    for (k, c) in b {
        let e = out.entry(*k).or_insert_with(BigInt::zero);
        *e += t * c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Echelon basis of a ℤ-lattice of sparse vectors; each basis vector records
/// its expression in the inserted columns.
#[derive(Default)]
pub struct IntEchelon {
    pivots: HashMap<u32, (IntVec, Combo)>,
}

impl IntEchelon {
    pub fn insert(&mut self, index: usize, col: &[(u32, i64)]) {
        let mut v: IntVec = col.iter().filter(|(_, c)| *c != 0).map(|&(r, c)| (r, BigInt::from(c))).collect();
        let mut combo: Combo = BTreeMap::from([(index, BigInt::from(1))]);
        loop {
            let Some((&row, lead)) = v.last_key_value() else { return };
            let lead = lead.clone();
            let Some((p, pc)) = self.pivots.get(&row) else {
                self.pivots.insert(row, (v, combo));
                return;
            };
            let plead = p[&row].clone();
            if lead.is_multiple_of(&plead) {
                let f = &lead / &plead;
                let (p, pc) = (p.clone(), pc.clone());
                axpy_int(&mut v, &f, &p);
                axpy_int(&mut combo, &f, &pc);
                continue;
            }
            // unimodular 2×2 step: new pivot has lead gcd, the other vector loses its lead
            let e = plead.extended_gcd(&lead);
            let (p, pc) = self.pivots.remove(&row).expect("pivot");
            let new_p = lin2(&e.x, &p, &e.y, &v);
            let new_pc = lin2(&e.x, &pc, &e.y, &combo);
            let a = &lead / &e.gcd;
            let b = &plead / &e.gcd;
            v = lin2(&a, &p, &-&b, &v);
            combo = lin2(&a, &pc, &-&b, &combo);
            self.pivots.insert(row, (new_p, new_pc));
        }
    }

    /// Integer coefficients `y` with `Σ y_i col_i = target`, if they exist.
    pub fn solve(&self, target: &[(u32, i64)]) -> Option<Combo> {
        let mut v: IntVec = target.iter().filter(|(_, c)| *c != 0).map(|&(r, c)| (r, BigInt::from(c))).collect();
        let mut y: Combo = BTreeMap::new();
        while let Some((&row, lead)) = v.last_key_value() {
            let (p, pc) = self.pivots.get(&row)?;
            let plead = &p[&row];
            if !lead.is_multiple_of(plead) {
                return None;
            }
            let f = lead / plead;
            axpy_int(&mut v, &f, p);
            // y += f·pc
            axpy_int(&mut y, &-&f, pc);
        }
        Some(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_p_span() {
        let mut e = ModPEchelon::default();
        e.insert(&[(0, 1), (1, 1)]);
        e.insert(&[(1, 1), (2, 1)]);
        assert!(e.spans(&[(0, 1), (2, -1)]));
        assert!(!e.spans(&[(0, 1)]));
    }

    #[test]
    fn integer_lattice_membership() {
        let mut e = IntEchelon::default();
        e.insert(0, &[(0, 2)]);
        e.insert(1, &[(0, 3), (1, 1)]);
        e.insert(2, &[(1, 2)]);
        // (1,1) = (3,1) − (2,0)
        let y = e.solve(&[(0, 1), (1, 1)]).unwrap();
        let mut acc = [BigInt::zero(), BigInt::zero()];
        let cols = [[2, 0], [3, 1], [0, 2]];
        for (i, c) in &y {
            for r in 0..2 {
                acc[r] += c * cols[*i][r];
            }
        }
        assert_eq!(acc, [BigInt::from(1), BigInt::from(1)]);
        // (0,1) is not in the lattice: index is 2
        assert!(e.solve(&[(1, 1)]).is_none());
        assert!(e.solve(&[(1, 2)]).is_some());
    }
}
