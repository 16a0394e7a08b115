//! Slow, independent computation of `κ_{p,q}` used to cross-check the main
//! engine on small instances.
//!
//! Nothing here touches [`crate::ring`] or [`crate::koszul`]: the Koszul
//! complex is built over the free polynomial ring with bitmask wedge
//! indices and hashed monomials, the ideal is carried as an explicit
//! subspace of each graded piece, and ranks come from a plain Gaussian
//! elimination. With `D` the free differential out of `∧^p ⊗ S_q`,
//! `W = ∧^{p-1} ⊗ I_{q+1}` and `W' = ∧^p ⊗ I_q`,
//!
//! `κ_{p,q} = N + rank W − rank[D | W] − rank[D_in | W']`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::instances::{InstanceSpec, Presentation};
use crate::multilinear::enumerate_monomials;
use crate::poly::Polynomial;

pub const MAX_VARS: usize = 6;
pub const MAX_Q: usize = 2;

type Vector = HashMap<usize, u32>;

fn rank(mut rows: Vec<Vec<u32>>, ctx: FieldContext) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = ctx.inv(rows[r][c]).expect("nonzero pivot");
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = ctx.mul(row[c], inv);
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = ctx.sub(*x, ctx.mul(f, y));
            }
        }
        r += 1;
    }
    r
}

/// Null space of the map whose columns are `cols` (each of length `m`).
fn kernel(cols: &[Vec<u32>], m: usize, ctx: FieldContext) -> Vec<Vec<u32>> {
    let n = cols.len();
    let mut rows: Vec<Vec<u32>> = (0..m)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..m).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = ctx.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = ctx.sub(*x, ctx.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u32; n];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(rows[i][free]);
            }
            v
        })
        .collect()
}

struct FreeRing {
    n: usize,
    ctx: FieldContext,
    /// Monomial exponent vectors of each degree with a lookup table.
    monomials: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    /// Basis of `I_q` in monomial coordinates.
    ideal: Vec<Vec<Vec<u32>>>,
}

impl FreeRing {
    fn new(spec: &InstanceSpec, top: usize) -> Result<Self> {
        let ctx = spec.ctx()?;
        let pres = spec.presentation()?;
        let n = match &pres {
            Presentation::Ideal(p) => p.num_vars,
            Presentation::Parametrization(p) => p.forms.len(),
        };
        if n > MAX_VARS {
            return Err(Error::InvalidInstance(format!(
                "oracle handles at most {MAX_VARS} variables, instance has {n}"
            )));
        }
        let monomials: Vec<Vec<Vec<u32>>> = (0..=top)
            .map(|d| {
                enumerate_monomials(n, d as u32)
                    .into_iter()
                    .map(|m| m.exps)
                    .collect()
            })
            .collect();
        let index = monomials
            .iter()
            .map(|ms| {
                ms.iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, m)| (m, i))
                    .collect()
            })
            .collect();
        let mut ring = FreeRing {
            n,
            ctx,
            monomials,
            index,
            ideal: Vec::new(),
        };
        ring.ideal = (0..=top).map(|d| ring.ideal_piece(&pres, d)).collect();
        Ok(ring)
    }

    fn coords(&self, d: usize, f: &Polynomial) -> Vec<u32> {
        let mut v = vec![0u32; self.monomials[d].len()];
        for t in f.terms() {
            v[self.index[d][&t.exps]] = t.coeff;
        }
        v
    }

    fn ideal_piece(&self, pres: &Presentation, d: usize) -> Vec<Vec<u32>> {
        let ctx = self.ctx;
        match pres {
            Presentation::Ideal(p) => {
                let mut span = Vec::new();
                for (g, &deg) in p.generators.iter().zip(&p.degrees) {
                    let Some(rest) = d.checked_sub(deg as usize) else {
                        continue;
                    };
                    for m in &self.monomials[rest] {
                        let mono = Polynomial::from_terms(self.n, [(1, m.clone())], ctx);
                        span.push(self.coords(d, &mono.mul(g, ctx)));
                    }
                }
                span
            }
            Presentation::Parametrization(p) => {
                // kernel of x^a ↦ Π f_i^{a_i}
                let images: Vec<Polynomial> = self.monomials[d]
                    .iter()
                    .map(|a| {
                        let mut acc = Polynomial::from_terms(4, [(1, vec![0; 4])], ctx);
                        for (i, &e) in a.iter().enumerate() {
                            for _ in 0..e {
                                acc = acc.mul(&p.forms[i], ctx);
                            }
                        }
                        acc
                    })
                    .collect();
                let mut targets: HashMap<Vec<u32>, usize> = HashMap::new();
                for f in &images {
                    for t in f.terms() {
                        let next = targets.len();
                        targets.entry(t.exps.clone()).or_insert(next);
                    }
                }
                let cols: Vec<Vec<u32>> = images
                    .iter()
                    .map(|f| {
                        let mut v = vec![0u32; targets.len()];
                        for t in f.terms() {
                            v[targets[&t.exps]] = t.coeff;
                        }
                        v
                    })
                    .collect();
                kernel(&cols, targets.len(), ctx)
            }
        }
    }

    fn subsets(&self, p: usize) -> Vec<u32> {
        (0u32..1 << self.n)
            .filter(|m| m.count_ones() as usize == p)
            .collect()
    }

    /// Flat coordinates of `∧^p ⊗ S_q`, as a map `(subset, monomial) -> index`.
    fn layout(&self, p: usize, q: usize) -> HashMap<(u32, usize), usize> {
        let mut out = HashMap::new();
        for w in self.subsets(p) {
            for m in 0..self.monomials[q].len() {
                let next = out.len();
                out.insert((w, m), next);
            }
        }
        out
    }

    /// Images of the basis of `∧^p ⊗ S_q` under the free differential.
    fn differential(&self, p: usize, q: usize) -> Vec<Vector> {
        let target = self.layout(p - 1, q + 1);
        let mut cols = Vec::new();
        for w in self.subsets(p) {
            for m in &self.monomials[q] {
                let mut v = Vector::new();
                let members = (0..self.n).filter(|&i| w & (1 << i) != 0);
                for (j, i) in members.enumerate() {
                    let mut xm = m.clone();
                    xm[i] += 1;
                    let key = (w & !(1 << i), self.index[q + 1][&xm]);
                    let c = if j % 2 == 0 { 1 } else { self.ctx.p() - 1 };
                    v.insert(target[&key], c);
                }
                cols.push(v);
            }
        }
        cols
    }

    /// Spanning vectors of `∧^p ⊗ I_q`.
    fn wedge_ideal(&self, p: usize, q: usize) -> Vec<Vector> {
        let layout = self.layout(p, q);
        let mut out = Vec::new();
        for w in self.subsets(p) {
            for g in &self.ideal[q] {
                out.push(
                    g.iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(m, &c)| (layout[&(w, m)], c))
                        .collect(),
                );
            }
        }
        out
    }

    fn dense_rank(&self, vectors: &[Vector], dim: usize) -> usize {
        let rows = vectors
            .iter()
            .map(|v| {
                let mut row = vec![0u32; dim];
                for (&i, &c) in v {
                    row[i] = c;
                }
                row
            })
            .collect();
        rank(rows, self.ctx)
    }

    fn kappa(&self, p: usize, q: usize) -> u64 {
        let n = self.n;
        if p > n {
            return 0;
        }
        let mid = self.layout(p, q).len();
        let mut kappa = mid as i64;
        if p >= 1 {
            let dim_out = self.layout(p - 1, q + 1).len();
            let w = self.wedge_ideal(p - 1, q + 1);
            let mut dw = self.differential(p, q);
            let rank_w = self.dense_rank(&w, dim_out) as i64;
            dw.extend(w);
            kappa += rank_w - self.dense_rank(&dw, dim_out) as i64;
        }
        let mut quotient = self.wedge_ideal(p, q);
        if q >= 1 && p < n {
            quotient.extend(self.differential(p + 1, q - 1));
        }
        kappa -= self.dense_rank(&quotient, mid) as i64;
        u64::try_from(kappa).expect("nonnegative cohomology")
    }
}

/// `κ_{p,q}` for every `p <= pmax`, `q <= qmax`, as `table[p][q]`.
pub fn naive_table(spec: &InstanceSpec, pmax: usize, qmax: usize) -> Result<Vec<Vec<u64>>> {
    if qmax > MAX_Q {
        return Err(Error::CellOutOfRange {
            p: pmax,
            q: qmax,
            reason: format!("oracle handles q <= {MAX_Q}"),
        });
    }
    let ring = FreeRing::new(spec, qmax + 1)?;
    Ok((0..=pmax)
        .map(|p| (0..=qmax).map(|q| ring.kappa(p, q)).collect())
        .collect())
}

pub fn naive_kappa(spec: &InstanceSpec, p: usize, q: usize) -> Result<u64> {
    if q > MAX_Q {
        return Err(Error::CellOutOfRange {
            p,
            q,
            reason: format!("oracle handles q <= {MAX_Q}"),
        });
    }
    Ok(FreeRing::new(spec, q + 1)?.kappa(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_rnc, generate, Family};

    fn ctx() -> FieldContext {
        FieldContext::new(31991).unwrap()
    }

    #[test]
    fn twisted_cubic_by_hand() {
        // three quadrics with two linear syzygies
        let t = naive_table(&gen_rnc(3, ctx()).unwrap(), 3, 2).unwrap();
        assert_eq!(t[0], vec![1, 0, 0]);
        assert_eq!(t[1], vec![0, 3, 0]);
        assert_eq!(t[2], vec![0, 2, 0]);
        assert_eq!(t[3], vec![0, 0, 0]);
    }

    #[test]
    fn genus_four_complete_intersection() {
        // Koszul resolution of (2,3): κ11 = κ12 = 1, the syzygy lands in κ23
        let spec = generate(Family::CurveCi23G4, None, ctx(), 5).unwrap();
        let t = naive_table(&spec, 2, 2).unwrap();
        assert_eq!(t[1], vec![0, 1, 1]);
        assert_eq!(t[2], vec![0, 0, 0]);
    }

    #[test]
    fn size_limits() {
        let big = generate(Family::K3GrassG6, None, ctx(), 1).unwrap();
        assert!(naive_kappa(&big, 1, 1).is_err());
        assert!(naive_kappa(&gen_rnc(3, ctx()).unwrap(), 1, 3).is_err());
    }

    #[test]
    fn kernel_helper() {
        let c = ctx();
        // columns (1,0), (0,1), (1,1): kernel spanned by (1,1,-1)
        let k = kernel(&[vec![1, 0], vec![0, 1], vec![1, 1]], 2, c);
        assert_eq!(k, vec![vec![c.neg(1), c.neg(1), 1]]);
    }
}
