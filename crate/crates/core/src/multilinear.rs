//! Monomials, exterior-power bases, and a few multilinear identities.
//!
//! Monomials of a fixed degree are always listed in decreasing
//! graded-reverse-lexicographic order; `p`-subsets are always listed in
//! colexicographic order, ranked by the combinatorial number system.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Dimension of `Sym^a` of an `m`-dimensional space.
pub fn sym_dim(m: u64, a: u64) -> u64 {
    if m == 0 {
        return (a == 0) as u64;
    }
    binomial(m + a - 1, a)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub deg: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let deg = exps.iter().sum();
        Monomial { exps, deg }
    }

    pub fn one(n: usize) -> Self {
        Monomial {
            exps: vec![0; n],
            deg: 0,
        }
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] += 1;
        Monomial {
            exps,
            deg: self.deg + 1,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            exps,
            deg: self.deg + other.deg,
        }
    }
}

/// Compares exponent vectors in grevlex: higher degree first, then the
/// monomial with the smaller exponent in the last differing variable is
/// larger.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex_cmp(&self.exps, &other.exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All degree-`d` monomials in `n` variables, largest first.
pub fn enumerate_monomials(n: usize, d: u32) -> Vec<Monomial> {
    assert!(n >= 1, "need at least one variable");
    let mut out = Vec::with_capacity(binomial(n as u64 + d as u64 - 1, d as u64) as usize);
    let mut exps = vec![0u32; n];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == exps.len() {
            exps[i] = left;
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
    }
    rec(0, d, &mut exps, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Degree-`d` monomial basis with a position lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: u32) -> Self {
        let monomials = enumerate_monomials(n, d);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.exps.clone(), i))
            .collect();
        MonomialBasis { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn get(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn position(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Monomial> {
        self.monomials.iter()
    }
}

/// A strictly increasing list of basis indices, i.e. a basis vector
/// `e_{i_0} ∧ ... ∧ e_{i_{p-1}}` of an exterior power.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgeIndex(Vec<usize>);

impl WedgeIndex {
    pub fn new(members: Vec<usize>) -> Self {
        assert!(
            members.windows(2).all(|w| w[0] < w[1]),
            "wedge members must be strictly increasing"
        );
        WedgeIndex(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Colex rank: `sum_i C(members[i], i + 1)`.
    pub fn colex_rank(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &m)| binomial(m as u64, i as u64 + 1) as usize)
            .sum()
    }
}

/// Removes the `j`-th member and returns the Koszul sign `(-1)^j`.
pub fn wedge_removal_sign(w: &WedgeIndex, j: usize) -> (WedgeIndex, i8) {
    assert!(j < w.len(), "removal position {j} out of range");
    let mut members = w.0.clone();
    members.remove(j);
    (
        WedgeIndex(members),
        if j.is_multiple_of(2) { 1 } else { -1 },
    )
}

/// The `p`-subsets of `{0..r-1}` in colex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WedgeBasis {
    r: usize,
    p: usize,
    count: usize,
}

pub fn wedge_rank_pair(r: usize, p: usize) -> Result<WedgeBasis> {
    if p > r {
        return Err(Error::WedgeOutOfRange { r, p });
    }
    Ok(WedgeBasis {
        r,
        p,
        count: binomial(r as u64, p as u64) as usize,
    })
}

impl WedgeBasis {
    pub fn ambient(&self) -> usize {
        self.r
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn subset(&self, mut idx: usize) -> WedgeIndex {
        assert!(idx < self.count, "wedge index {idx} out of range");
        let mut members = vec![0; self.p];
        let mut hi = self.r;
        for slot in (0..self.p).rev() {
            // largest m < hi with C(m, slot + 1) <= idx
            let mut m = hi - 1;
            while binomial(m as u64, slot as u64 + 1) as usize > idx {
                m -= 1;
            }
            members[slot] = m;
            idx -= binomial(m as u64, slot as u64 + 1) as usize;
            hi = m;
        }
        WedgeIndex(members)
    }

    pub fn index(&self, w: &WedgeIndex) -> usize {
        assert_eq!(w.len(), self.p);
        assert!(w.0.last().is_none_or(|&m| m < self.r));
        w.colex_rank()
    }

    pub fn iter(&self) -> impl Iterator<Item = WedgeIndex> + '_ {
        (0..self.count).map(move |i| self.subset(i))
    }
}

/// How `Sym^i F -> Sym^{i-1} F ⊗ F` distributes a monomial over its slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comultiplication {
    /// `x^a ↦ Σ_j a_j · x^{a - e_j} ⊗ x_j`.
    WithMultiplicity,
    /// `x^a ↦ Σ_{j : a_j > 0} x^{a - e_j} ⊗ x_j`.
    Plain,
}

type IntColumns = Vec<BTreeMap<usize, i64>>;

/// Builds comultiplication and multiplication for `Sym^i` of an
/// `f_dim`-dimensional space and checks that the composite is `i · id`.
pub fn sym_comultiply_then_multiply(f_dim: usize, i: usize) -> Result<u64> {
    sym_composite(f_dim, i, Comultiplication::WithMultiplicity)
}

pub fn sym_composite(f_dim: usize, i: usize, rule: Comultiplication) -> Result<u64> {
    assert!(f_dim >= 1 && i >= 1);
    let top = MonomialBasis::new(f_dim, i as u32);
    let lower = MonomialBasis::new(f_dim, i as u32 - 1);
    let tensor_index = |b: usize, j: usize| b * f_dim + j;

    let comult: IntColumns = top
        .iter()
        .map(|m| {
            let mut col = BTreeMap::new();
            for j in 0..f_dim {
                let a = m.exps[j];
                if a == 0 {
                    continue;
                }
                let mut e = m.exps.clone();
                e[j] -= 1;
                let b = lower.position(&e).expect("lower monomial");
                let coef = match rule {
                    Comultiplication::WithMultiplicity => a as i64,
                    Comultiplication::Plain => 1,
                };
                col.insert(tensor_index(b, j), coef);
            }
            col
        })
        .collect();

    let mut mult: IntColumns = vec![BTreeMap::new(); lower.len() * f_dim];
    for (b, m) in lower.iter().enumerate() {
        for j in 0..f_dim {
            let t = top.position(&m.times_var(j).exps).expect("top monomial");
            mult[tensor_index(b, j)].insert(t, 1);
        }
    }

    let expected = i as i64;
    for (c, col) in comult.iter().enumerate() {
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        for (&k, &a) in col {
            for (&r, &b) in &mult[k] {
                *out.entry(r).or_default() += a * b;
            }
        }
        out.retain(|_, v| *v != 0);
        if out.len() != 1 || out.get(&c) != Some(&expected) {
            return Err(Error::SymComposite {
                f_dim,
                power: i,
                detail: format!("column {c} maps to {out:?}, expected {{{c}: {expected}}}"),
            });
        }
    }
    Ok(i as u64)
}

/// Alternating dimension sums of the wedge and Sym exact sequences attached
/// to `0 -> F1 -> F2 -> F3 -> 0` with `dim F1 = d1`, `dim F2 = d2`.
pub fn weyman_dimension_identity(d1: u64, d2: u64, i: u64) -> bool {
    let Some(d3) = d2.checked_sub(d1) else {
        return false;
    };
    let wedge: i128 = (0..=i)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * binomial(d2, i - j) as i128 * sym_dim(d1, j) as i128
        })
        .sum();
    let sym: i128 = (0..=i)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * sym_dim(d2, i - j) as i128 * binomial(d3, j) as i128
        })
        .sum();
    wedge - binomial(d3, i) as i128 == 0 && sym - sym_dim(d1, i) as i128 == 0
}
