//! Koszul cohomology of a graded ring.
//!
//! For `V = R_1` with basis `v_0..v_{r-1}` the Koszul complex has terms
//! `∧^p V ⊗ R_q` and differential
//!
//! ```text
//! d(v_{i_0} ∧ ... ∧ v_{i_{p-1}} ⊗ b) = Σ_j (-1)^j (… v̂_{i_j} …) ⊗ v_{i_j} b
//! ```
//!
//! `κ_{p,q}` is the dimension of the cohomology at `∧^p V ⊗ R_q`, i.e. the
//! graded Betti number `β_{p,p+q}` of `R` over `Sym V`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::SparseMatrix;
use crate::multilinear::{binomial, wedge_rank_pair, wedge_removal_sign};
use crate::ring::GradedAlgebra;

/// Sign attached to removing the `j`-th wedge factor. Only `Alternating`
/// gives a complex; `Constant` exists so the chain check can be exercised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRule {
    Alternating,
    Constant,
}

fn out_of_range(p: usize, q: usize, reason: impl Into<String>) -> Error {
    Error::CellOutOfRange {
        p,
        q,
        reason: reason.into(),
    }
}

/// `d : ∧^p V ⊗ R_q -> ∧^{p-1} V ⊗ R_{q+1}` as a sparse matrix. Columns are
/// indexed `(w, b) ↦ colex(w) * dim R_q + b`, rows likewise.
pub fn assemble_sparse(ring: &GradedAlgebra, p: usize, q: usize) -> Result<SparseMatrix> {
    assemble_sparse_with(ring, p, q, SignRule::Alternating)
}

pub fn assemble_sparse_with(
    ring: &GradedAlgebra,
    p: usize,
    q: usize,
    signs: SignRule,
) -> Result<SparseMatrix> {
    let r = ring.r1_dim();
    if p == 0 || p > r {
        return Err(out_of_range(p, q, format!("need 1 <= p <= {r}")));
    }
    if q >= ring.qmax() {
        return Err(out_of_range(p, q, format!("need q < {}", ring.qmax())));
    }
    let ctx = ring.ctx();
    let src = wedge_rank_pair(r, p)?;
    let dst = wedge_rank_pair(r, p - 1)?;
    let (dq, dq1) = (ring.dim(q), ring.dim(q + 1));

    // columns of every multiplication map R_q -> R_{q+1}
    let mult_cols: Vec<Vec<Vec<(usize, u32)>>> = (0..r)
        .map(|i| {
            let m = ring.mult(i, q);
            (0..dq)
                .map(|b| {
                    (0..dq1)
                        .filter_map(|c| {
                            let v = m.get(c, b);
                            (v != 0).then_some((c, v))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut columns = vec![Vec::new(); src.len() * dq];
    for (widx, w) in src.iter().enumerate() {
        for j in 0..p {
            let (rest, sign) = wedge_removal_sign(&w, j);
            let sign = match signs {
                SignRule::Alternating => sign,
                SignRule::Constant => 1,
            };
            let row_base = dst.index(&rest) * dq1;
            let i = w.members()[j];
            for b in 0..dq {
                let col = &mut columns[widx * dq + b];
                for &(c, v) in &mult_cols[i][b] {
                    let v = if sign < 0 { ctx.neg(v) } else { v };
                    col.push((row_base + c, v));
                }
            }
        }
    }
    Ok(SparseMatrix::from_columns(dst.len() * dq1, columns, ctx))
}

/// Dense form of [`assemble_sparse`]; shape `C(r,p-1)·dims[q+1] × C(r,p)·dims[q]`.
pub fn assemble_differential(
    ring: &GradedAlgebra,
    p: usize,
    q: usize,
) -> Result<crate::field::MatrixGF> {
    Ok(assemble_sparse(ring, p, q)?.to_dense())
}

/// Whether `d(p, q) ∘ d(p+1, q-1) = 0` under the given sign rule.
pub fn chain_condition_holds(
    ring: &GradedAlgebra,
    p: usize,
    q: usize,
    signs: SignRule,
) -> Result<bool> {
    if q == 0 {
        return Err(out_of_range(p, q, "no incoming differential at q = 0"));
    }
    let out = assemble_sparse_with(ring, p, q, signs)?;
    let inc = assemble_sparse_with(ring, p + 1, q - 1, signs)?;
    Ok(out.mul(&inc).is_zero())
}

/// Size, rank and elimination time of one assembled differential.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DifferentialStats {
    pub p: usize,
    pub q: usize,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub rank: usize,
    pub seconds: f64,
}

fn rank_of(p: usize, q: usize, d: &SparseMatrix) -> DifferentialStats {
    let start = Instant::now();
    let rank = d.rank();
    assert!(rank <= d.rows().min(d.cols()));
    DifferentialStats {
        p,
        q,
        rows: d.rows(),
        cols: d.cols(),
        nnz: d.nnz(),
        rank,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// One cohomology group `K_{p,q}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulCell {
    pub p: usize,
    pub q: usize,
    /// `C(r,p+1)·dims[q-1]` (zero at `q = 0`).
    pub dim_in: usize,
    /// `C(r,p)·dims[q]`.
    pub dim_mid: usize,
    /// `C(r,p-1)·dims[q+1]` (zero at `p = 0`).
    pub dim_out: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub kappa: u64,
}

fn wedge_len(r: usize, p: usize) -> usize {
    binomial(r as u64, p as u64) as usize
}

fn check_cell_range(ring: &GradedAlgebra, p: usize, q: usize) -> Result<()> {
    if q > ring.qmax() || (p >= 1 && p <= ring.r1_dim() && q + 1 > ring.qmax()) {
        return Err(out_of_range(
            p,
            q,
            format!("ring is truncated at degree {}", ring.qmax()),
        ));
    }
    Ok(())
}

fn make_cell(
    ring: &GradedAlgebra,
    p: usize,
    q: usize,
    out: Option<&DifferentialStats>,
    inc: Option<&DifferentialStats>,
) -> Result<KoszulCell> {
    let r = ring.r1_dim();
    let dim_mid = wedge_len(r, p) * ring.dim(q);
    let rank_out = out.map_or(0, |d| d.rank);
    let rank_in = inc.map_or(0, |d| d.rank);
    if rank_out + rank_in > dim_mid {
        return Err(Error::ChainCondition { p, q });
    }
    Ok(KoszulCell {
        p,
        q,
        dim_in: inc.map_or(0, |d| d.cols),
        dim_mid,
        dim_out: out.map_or(0, |d| d.rows),
        rank_in,
        rank_out,
        kappa: (dim_mid - rank_out - rank_in) as u64,
    })
}

/// Source bidegree `(p, q)` of a differential.
type DiffKey = (usize, usize);

/// Differentials touching cell `(p, q)`: outgoing `(p, q)` and incoming
/// `(p+1, q-1)`, when they exist.
fn cell_differentials(r: usize, p: usize, q: usize) -> (Option<DiffKey>, Option<DiffKey>) {
    let out = (p >= 1 && p <= r).then_some((p, q));
    let inc = (q >= 1 && p < r).then(|| (p + 1, q - 1));
    (out, inc)
}

/// `κ_{p,q}` together with the two differentials it was computed from.
pub fn koszul_cell(
    ring: &GradedAlgebra,
    p: usize,
    q: usize,
) -> Result<(
    KoszulCell,
    Option<DifferentialStats>,
    Option<DifferentialStats>,
)> {
    check_cell_range(ring, p, q)?;
    let (out_idx, in_idx) = cell_differentials(ring.r1_dim(), p, q);
    let out = out_idx
        .map(|(a, b)| assemble_sparse(ring, a, b))
        .transpose()?;
    let inc = in_idx
        .map(|(a, b)| assemble_sparse(ring, a, b))
        .transpose()?;
    if let (Some(o), Some(i)) = (&out, &inc) {
        if !o.mul(i).is_zero() {
            return Err(Error::ChainCondition { p, q });
        }
    }
    let out_stats = out.as_ref().map(|d| rank_of(p, q, d));
    let in_stats = inc.as_ref().map(|d| rank_of(p + 1, q.wrapping_sub(1), d));
    let cell = make_cell(ring, p, q, out_stats.as_ref(), in_stats.as_ref())?;
    Ok((cell, out_stats, in_stats))
}

pub fn koszul_dim(ring: &GradedAlgebra, p: usize, q: usize) -> Result<u64> {
    Ok(koszul_cell(ring, p, q)?.0.kappa)
}

/// Provenance copied into tables and reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableMeta {
    pub family: String,
    pub genus: u32,
    pub seed: u64,
    pub prime: u32,
    pub r1_dim: usize,
    pub dims: Vec<usize>,
}

impl TableMeta {
    pub fn of(ring: &GradedAlgebra) -> Self {
        TableMeta {
            family: ring.meta.family.clone(),
            genus: ring.meta.genus,
            seed: ring.meta.seed,
            prime: ring.ctx().p(),
            r1_dim: ring.r1_dim(),
            dims: ring.dims().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BettiTable {
    pub meta: TableMeta,
    pub pmax: usize,
    pub qmax: usize,
    /// `kappa[p][q]`.
    pub kappa: Vec<Vec<u64>>,
    pub cells: Vec<KoszulCell>,
    pub differentials: Vec<DifferentialStats>,
    pub seconds: f64,
}

/// The timing-free part of a table; identical input gives identical bytes.
#[derive(Serialize)]
struct CanonicalTable<'a> {
    meta: &'a TableMeta,
    pmax: usize,
    qmax: usize,
    kappa: &'a [Vec<u64>],
}

impl BettiTable {
    pub fn kappa(&self, p: usize, q: usize) -> Option<u64> {
        self.kappa.get(p).and_then(|col| col.get(q)).copied()
    }

    /// Entries `κ_{0..=pmax, q}`.
    pub fn row(&self, q: usize) -> Vec<u64> {
        (0..=self.pmax).map(|p| self.kappa[p][q]).collect()
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(&CanonicalTable {
            meta: &self.meta,
            pmax: self.pmax,
            qmax: self.qmax,
            kappa: &self.kappa,
        })
        .expect("table serializes")
    }

    /// Macaulay-style grid: one line per `q`, one column per `p`, zeros
    /// shown as `.`.
    pub fn to_grid(&self) -> String {
        let cell = |v: u64| {
            if v == 0 {
                ".".to_string()
            } else {
                v.to_string()
            }
        };
        let width = self
            .kappa
            .iter()
            .flatten()
            .map(|&v| cell(v).len())
            .chain(std::iter::once(self.pmax.to_string().len()))
            .max()
            .unwrap_or(1);
        let label = self.qmax.to_string().len() + 1;
        let mut s = String::new();
        let _ = write!(s, "{:label$}", "");
        for p in 0..=self.pmax {
            let _ = write!(s, " {:>width$}", p);
        }
        s.push('\n');
        for q in 0..=self.qmax {
            let _ = write!(s, "{:>label$}", format!("{q}:"));
            for p in 0..=self.pmax {
                let _ = write!(s, " {:>width$}", cell(self.kappa[p][q]));
            }
            s.push('\n');
        }
        s
    }
}

/// All cells `0 <= p <= pmax`, `0 <= q <= qmax_cells`. Each differential is
/// assembled and eliminated once; eliminations run on the rayon pool.
pub fn betti_table(ring: &GradedAlgebra, pmax: usize, qmax_cells: usize) -> Result<BettiTable> {
    let start = Instant::now();
    if qmax_cells + 1 > ring.qmax() {
        return Err(out_of_range(
            pmax,
            qmax_cells,
            format!(
                "table needs ring degree {}, ring stops at {}",
                qmax_cells + 1,
                ring.qmax()
            ),
        ));
    }
    let r = ring.r1_dim();
    let mut needed = BTreeSet::new();
    for p in 0..=pmax {
        for q in 0..=qmax_cells {
            let (o, i) = cell_differentials(r, p, q);
            needed.extend(o);
            needed.extend(i);
        }
    }
    let needed: Vec<DiffKey> = needed.into_iter().collect();
    let assembled: BTreeMap<DiffKey, SparseMatrix> = needed
        .par_iter()
        .map(|&(p, q)| {
            assemble_sparse(ring, p, q)
                .map(|d| ((p, q), d))
                .map_err(|e| Error::Cell {
                    p,
                    q,
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;

    for p in 0..=pmax {
        for q in 0..=qmax_cells {
            if let (Some(o), Some(i)) = cell_differentials(r, p, q) {
                if !assembled[&o].mul(&assembled[&i]).is_zero() {
                    return Err(Error::ChainCondition { p, q });
                }
            }
        }
    }

    // largest first so long eliminations start early
    let mut order = needed.clone();
    order.sort_by_key(|k| std::cmp::Reverse(assembled[k].rows() * assembled[k].cols()));
    let stats: BTreeMap<DiffKey, DifferentialStats> = order
        .par_iter()
        .map(|&(p, q)| ((p, q), rank_of(p, q, &assembled[&(p, q)])))
        .collect();

    let mut kappa = vec![vec![0u64; qmax_cells + 1]; pmax + 1];
    let mut cells = Vec::new();
    for (p, column) in kappa.iter_mut().enumerate() {
        for (q, slot) in column.iter_mut().enumerate() {
            let (o, i) = cell_differentials(r, p, q);
            let cell = make_cell(ring, p, q, o.map(|k| &stats[&k]), i.map(|k| &stats[&k]))
                .map_err(|e| Error::Cell {
                    p,
                    q,
                    source: Box::new(e),
                })?;
            *slot = cell.kappa;
            cells.push(cell);
        }
    }
    Ok(BettiTable {
        meta: TableMeta::of(ring),
        pmax,
        qmax: qmax_cells,
        kappa,
        cells,
        differentials: stats.into_values().collect(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Outcome of checking the single cell `κ_{k,1}` for `g = 2k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreenVerdict {
    pub genus: u32,
    pub k: usize,
    pub kappa: u64,
    pub pass: bool,
    pub outgoing: Option<DifferentialStats>,
    pub incoming: Option<DifferentialStats>,
    pub seconds: f64,
}

pub fn verify_green(ring: &GradedAlgebra, genus: u32) -> Result<GreenVerdict> {
    if genus % 2 == 1 {
        return Err(Error::OddGenus(genus));
    }
    if genus < 4 {
        return Err(Error::GenusOutOfRange {
            genus,
            reason: "need g >= 4".into(),
        });
    }
    let start = Instant::now();
    let k = genus as usize / 2;
    let (cell, outgoing, incoming) = koszul_cell(ring, k, 1)?;
    Ok(GreenVerdict {
        genus,
        k,
        kappa: cell.kappa,
        pass: cell.kappa == 0,
        outgoing,
        incoming,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Cells `(p, m-p)` making up the strand of total degree `m`, if the table
/// covers all of them.
fn strand_cells(table: &BettiTable, r: usize, m: usize) -> Option<Vec<(usize, usize)>> {
    let cells: Vec<(usize, usize)> = (0..=m.min(r)).map(|p| (p, m - p)).collect();
    cells
        .iter()
        .all(|&(p, q)| p <= table.pmax && q <= table.qmax)
        .then_some(cells)
}

pub fn strand_complete(table: &BettiTable, ring: &GradedAlgebra, m: usize) -> bool {
    strand_cells(table, ring.r1_dim(), m).is_some()
}

/// `Σ_{p+q=m} (-1)^p κ_{p,q} = Σ_{p+q=m} (-1)^p C(r,p) dims[q]`. Strands the
/// table does not fully cover are vacuously true.
pub fn euler_strand_check(table: &BettiTable, ring: &GradedAlgebra, m: usize) -> bool {
    let r = ring.r1_dim();
    let Some(cells) = strand_cells(table, r, m) else {
        return true;
    };
    let sign = |p: usize| if p.is_multiple_of(2) { 1i128 } else { -1 };
    let lhs: i128 = cells
        .iter()
        .map(|&(p, q)| sign(p) * table.kappa[p][q] as i128)
        .sum();
    let rhs: i128 = cells
        .iter()
        .map(|&(p, q)| sign(p) * binomial(r as u64, p as u64) as i128 * ring.dim(q) as i128)
        .sum();
    lhs == rhs
}

/// `κ_{p,2} = κ_{g-2-p,1}` for `1 <= p <= g-3`; false if the table does not
/// reach the required cells.
pub fn gorenstein_duality_check(table: &BettiTable, genus: u32) -> bool {
    let g = genus as usize;
    if g < 4 {
        return false;
    }
    (1..=g - 3).all(|p| match (table.kappa(p, 2), table.kappa(g - 2 - p, 1)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    })
}

/// `κ_{p,1}` of a surface ring against that of its hyperplane section.
pub fn lefschetz_compare(surface: &GradedAlgebra, curve: &GradedAlgebra, p: usize) -> Result<bool> {
    Ok(koszul_dim(surface, p, 1)? == koszul_dim(curve, p, 1)?)
}
