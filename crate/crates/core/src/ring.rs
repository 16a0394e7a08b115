//! Degree-truncated graded coordinate rings.
//!
//! A [`GradedAlgebra`] stores, for each degree `q <= qmax`, only the
//! dimension of `R_q` and the matrices of multiplication by the degree-one
//! basis elements `R_q -> R_{q+1}`. That is all the Koszul complex needs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, MatrixGF};
use crate::multilinear::MonomialBasis;
use crate::poly::Polynomial;

/// Default top degree of constructed rings.
pub const DEFAULT_QMAX: usize = 4;

/// Where a ring came from; carried into reports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RingMeta {
    pub family: String,
    pub genus: u32,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    r1_dim: usize,
    dims: Vec<usize>,
    /// `mult[i][q]`: multiplication by the `i`-th degree-one basis element,
    /// a `dims[q+1] x dims[q]` matrix.
    mult: Vec<Vec<MatrixGF>>,
    ctx: FieldContext,
    pub meta: RingMeta,
}

impl GradedAlgebra {
    /// Assembles a ring from raw multiplication maps and checks the
    /// structural invariants.
    pub fn from_parts(
        dims: Vec<usize>,
        mult: Vec<Vec<MatrixGF>>,
        ctx: FieldContext,
        meta: RingMeta,
    ) -> Result<Self> {
        let ring = GradedAlgebra {
            r1_dim: dims.get(1).copied().unwrap_or(0),
            dims,
            mult,
            ctx,
            meta,
        };
        ring.validate()?;
        Ok(ring)
    }

    pub fn r1_dim(&self) -> usize {
        self.r1_dim
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, q: usize) -> usize {
        self.dims[q]
    }

    pub fn qmax(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    pub fn mult(&self, i: usize, q: usize) -> &MatrixGF {
        &self.mult[i][q]
    }

    pub fn with_meta(mut self, meta: RingMeta) -> Self {
        self.meta = meta;
        self
    }

    fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::RingInvariant(msg));
        if self.dims.len() < 3 {
            return fail(format!("need degrees 0..2, have {}", self.dims.len()));
        }
        if self.dims[0] != 1 {
            return fail(format!("dim R_0 = {}", self.dims[0]));
        }
        if self.mult.len() != self.r1_dim {
            return fail(format!(
                "{} multiplication families for dim R_1 = {}",
                self.mult.len(),
                self.r1_dim
            ));
        }
        for (i, maps) in self.mult.iter().enumerate() {
            if maps.len() != self.qmax() {
                return fail(format!("variable {i} has {} maps", maps.len()));
            }
            for (q, m) in maps.iter().enumerate() {
                if m.rows() != self.dims[q + 1] || m.cols() != self.dims[q] || m.ctx() != self.ctx {
                    return fail(format!(
                        "mult[{i}][{q}] has shape {}x{}",
                        m.rows(),
                        m.cols()
                    ));
                }
            }
        }
        for q in 0..self.qmax() - 1 {
            for (i, j) in self.commutativity_pairs() {
                let ij = self.mult[i][q + 1].mul(&self.mult[j][q]);
                let ji = self.mult[j][q + 1].mul(&self.mult[i][q]);
                if ij != ji {
                    return fail(format!("x{i} x{j} != x{j} x{i} on R_{q}"));
                }
            }
        }
        for q in 0..self.qmax() {
            let stacked = MatrixGF::from_fn(
                self.dims[q + 1],
                self.r1_dim * self.dims[q],
                self.ctx,
                |r, c| self.mult[c / self.dims[q]][q].get(r, c % self.dims[q]),
            );
            if stacked.rank() != self.dims[q + 1] {
                return fail(format!("R_{} not generated by R_1 * R_{q}", q + 1));
            }
        }
        Ok(())
    }

    /// All pairs `i < j` for small ambient dimension, otherwise a fixed
    /// pseudo-random sample of 24 pairs.
    fn commutativity_pairs(&self) -> Vec<(usize, usize)> {
        let r = self.r1_dim;
        if r <= 10 {
            return (0..r)
                .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
                .collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
        (0..24)
            .map(|_| {
                let i = rng.gen_range(0..r);
                let mut j = rng.gen_range(0..r - 1);
                if j >= i {
                    j += 1;
                }
                (i.min(j), i.max(j))
            })
            .collect()
    }
}

/// Homogeneous generators of an ideal in `num_vars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPresentation {
    pub num_vars: usize,
    pub generators: Vec<Polynomial>,
    pub degrees: Vec<u32>,
}

impl IdealPresentation {
    /// Generators must be nonzero and homogeneous; degrees are read off.
    pub fn new(num_vars: usize, generators: Vec<Polynomial>) -> Result<Self> {
        let degrees = generators
            .iter()
            .enumerate()
            .map(|(index, g)| {
                g.homogeneous_degree()
                    .ok_or(Error::NotHomogeneous { index, degree: 0 })
            })
            .collect::<Result<Vec<_>>>()?;
        let pres = IdealPresentation {
            num_vars,
            generators,
            degrees,
        };
        pres.validate()?;
        Ok(pres)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degrees.len() != self.generators.len() {
            return Err(Error::InvalidInstance("degree list length mismatch".into()));
        }
        for (index, (g, &degree)) in self.generators.iter().zip(&self.degrees).enumerate() {
            if g.num_vars() != self.num_vars {
                return Err(Error::InvalidInstance(format!(
                    "generator {index} uses {} variables, expected {}",
                    g.num_vars(),
                    self.num_vars
                )));
            }
            if g.homogeneous_degree() != Some(degree) {
                return Err(Error::NotHomogeneous { index, degree });
            }
            if degree < 2 {
                return Err(Error::AmbientNotMinimal { index });
            }
        }
        Ok(())
    }
}

/// Bihomogeneous forms in `(s, u; a, b)`; exponent vectors are
/// `[e_s, e_u, e_a, e_b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedParametrization {
    pub forms: Vec<Polynomial>,
    pub bidegree: (u32, u32),
}

impl BigradedParametrization {
    pub fn validate(&self) -> Result<()> {
        let (d, e) = self.bidegree;
        for (index, f) in self.forms.iter().enumerate() {
            let ok = f.num_vars() == 4
                && !f.is_zero()
                && f.terms()
                    .iter()
                    .all(|t| t.exps[0] + t.exps[1] == d && t.exps[2] + t.exps[3] == e);
            if !ok {
                return Err(Error::NotBihomogeneous { index, d, e });
            }
        }
        Ok(())
    }
}

struct IdealLevel {
    basis: MonomialBasis,
    rref: MatrixGF,
    /// RREF row whose pivot sits in this column.
    pivot_row: Vec<Option<usize>>,
    /// Position of a standard monomial inside the basis of `R_q`.
    standard_pos: Vec<Option<usize>>,
    standard: Vec<usize>,
}

impl IdealLevel {
    fn build(pres: &IdealPresentation, q: u32, ctx: FieldContext) -> Self {
        let n = pres.num_vars;
        let basis = MonomialBasis::new(n, q);
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (g, &dg) in pres.generators.iter().zip(&pres.degrees) {
            if dg > q {
                continue;
            }
            for m in MonomialBasis::new(n, q - dg).iter() {
                let mut row = vec![0u32; basis.len()];
                for t in g.terms() {
                    let e: Vec<u32> = t.exps.iter().zip(&m.exps).map(|(a, b)| a + b).collect();
                    let c = basis.position(&e).expect("product monomial");
                    row[c] = ctx.add(row[c], t.coeff);
                }
                rows.push(row);
            }
        }
        let span = MatrixGF::from_fn(rows.len(), basis.len(), ctx, |r, c| rows[r][c]);
        let (rref, pivots) = span.rref();
        let mut pivot_row = vec![None; basis.len()];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_row[c] = Some(r);
        }
        let standard: Vec<usize> = (0..basis.len())
            .filter(|&c| pivot_row[c].is_none())
            .collect();
        let mut standard_pos = vec![None; basis.len()];
        for (k, &c) in standard.iter().enumerate() {
            standard_pos[c] = Some(k);
        }
        IdealLevel {
            basis,
            rref,
            pivot_row,
            standard_pos,
            standard,
        }
    }

    /// Coordinates of the monomial in column `c` in the standard basis.
    fn normal_form(&self, c: usize, ctx: FieldContext) -> Vec<(usize, u32)> {
        if let Some(k) = self.standard_pos[c] {
            return vec![(k, 1)];
        }
        let row = self.pivot_row[c].expect("non-standard monomial has a pivot");
        self.standard
            .iter()
            .enumerate()
            .filter_map(|(k, &sc)| {
                let v = self.rref.get(row, sc);
                (v != 0).then(|| (k, ctx.neg(v)))
            })
            .collect()
    }
}

/// `S/I` truncated at degree `qmax`, with standard monomials (grevlex) as
/// the basis of each `R_q`.
pub fn ring_from_ideal(
    pres: &IdealPresentation,
    qmax: usize,
    ctx: FieldContext,
) -> Result<GradedAlgebra> {
    if qmax < 2 {
        return Err(Error::DegreeBound(qmax));
    }
    pres.validate()?;
    let n = pres.num_vars;
    let levels: Vec<IdealLevel> = (0..=qmax as u32)
        .map(|q| IdealLevel::build(pres, q, ctx))
        .collect();
    let dims: Vec<usize> = levels.iter().map(|l| l.standard.len()).collect();
    let mut mult = vec![Vec::with_capacity(qmax); dims[1]];
    for q in 0..qmax {
        let (lo, hi) = (&levels[q], &levels[q + 1]);
        for (i, slot) in mult.iter_mut().enumerate() {
            // no linear generators, so the i-th basis element of R_1 is x_i
            let var = i;
            let mut m = MatrixGF::zeros(dims[q + 1], dims[q], ctx);
            for (k, &c) in lo.standard.iter().enumerate() {
                let mut e = lo.basis.get(c).exps.clone();
                e[var] += 1;
                let target = hi.basis.position(&e).expect("shifted monomial");
                for (row, v) in hi.normal_form(target, ctx) {
                    m.set(row, k, v);
                }
            }
            slot.push(m);
        }
    }
    debug_assert_eq!(dims[1], n);
    debug_assert!(levels[1]
        .standard
        .iter()
        .enumerate()
        .all(|(i, &c)| levels[1].basis.get(c).exps[i] == 1));
    GradedAlgebra::from_parts(dims, mult, ctx, RingMeta::default())
}

struct ParamLevel {
    /// RREF rows spanning `R_q` inside bidegree `(dq, eq)` forms.
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

fn bidegree_len(d: u32, e: u32, q: u32) -> usize {
    ((d * q + 1) * (e * q + 1)) as usize
}

/// Product of a bidegree `(d q1, e q1)` vector with a `(d q2, e q2)` vector.
/// Coordinates are indexed by `e_u * (e q + 1) + e_b`.
fn convolve(
    a: &[u32],
    q1: u32,
    b: &[u32],
    q2: u32,
    (d, e): (u32, u32),
    ctx: FieldContext,
) -> Vec<u32> {
    let (w1, w2, w) = (e * q1 + 1, e * q2 + 1, e * (q1 + q2) + 1);
    let p = ctx.p() as u64;
    let mut out = vec![0u64; bidegree_len(d, e, q1 + q2)];
    for (ia, &va) in a.iter().enumerate() {
        if va == 0 {
            continue;
        }
        let (ua, ba) = (ia as u32 / w1, ia as u32 % w1);
        for (ib, &vb) in b.iter().enumerate() {
            if vb == 0 {
                continue;
            }
            let (ub, bb) = (ib as u32 / w2, ib as u32 % w2);
            let k = ((ua + ub) * w + ba + bb) as usize;
            out[k] = (out[k] + va as u64 * vb as u64) % p;
        }
    }
    out.into_iter().map(|v| v as u32).collect()
}

/// The image ring of the map given by the forms: `R_q` is the span of all
/// degree-`q` products of forms inside the bidegree `(dq, eq)` forms. It is
/// built as the span of `R_{q-1} * f_i`, which is the same space.
pub fn ring_from_parametrization(
    param: &BigradedParametrization,
    qmax: usize,
    ctx: FieldContext,
) -> Result<GradedAlgebra> {
    if qmax < 2 {
        return Err(Error::DegreeBound(qmax));
    }
    param.validate()?;
    let (d, e) = param.bidegree;
    let forms: Vec<Vec<u32>> = param
        .forms
        .iter()
        .map(|f| {
            let mut v = vec![0u32; bidegree_len(d, e, 1)];
            for t in f.terms() {
                v[(t.exps[1] * (e + 1) + t.exps[3]) as usize] = t.coeff;
            }
            v
        })
        .collect();

    let mut levels = vec![ParamLevel {
        basis: vec![vec![1]],
        pivots: vec![0],
    }];
    for q in 1..=qmax as u32 {
        let prev = &levels[q as usize - 1];
        let products: Vec<Vec<u32>> = prev
            .basis
            .iter()
            .flat_map(|b| forms.iter().map(move |f| (b, f)))
            .map(|(b, f)| convolve(b, q - 1, f, 1, (d, e), ctx))
            .collect();
        let width = bidegree_len(d, e, q);
        let span = MatrixGF::from_fn(products.len(), width, ctx, |r, c| products[r][c]);
        let (rref, pivots) = span.rref();
        let basis = (0..pivots.len()).map(|r| rref.row(r).to_vec()).collect();
        levels.push(ParamLevel { basis, pivots });
    }
    let dims: Vec<usize> = levels.iter().map(|l| l.basis.len()).collect();
    if dims[1] != forms.len() {
        return Err(Error::DegenerateParametrization {
            independent: dims[1],
            forms: forms.len(),
        });
    }
    let mut mult = vec![Vec::with_capacity(qmax); forms.len()];
    for q in 0..qmax {
        let (lo, hi) = (&levels[q], &levels[q + 1]);
        for (f, slot) in forms.iter().zip(mult.iter_mut()) {
            let mut m = MatrixGF::zeros(dims[q + 1], dims[q], ctx);
            for (k, b) in lo.basis.iter().enumerate() {
                let v = convolve(b, q as u32, f, 1, (d, e), ctx);
                for (row, &pc) in hi.pivots.iter().enumerate() {
                    m.set(row, k, v[pc]);
                }
            }
            slot.push(m);
        }
    }
    GradedAlgebra::from_parts(dims, mult, ctx, RingMeta::default())
}

/// The Hilbert function a family is expected to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyLabel {
    CanonicalCurve {
        genus: u32,
    },
    K3 {
        genus: u32,
    },
    RationalNormalCurve {
        degree: u32,
    },
    /// Checked against the K3 Hilbert function of the same genus.
    TangentDevelopable {
        genus: u32,
    },
}

impl FamilyLabel {
    pub fn predicted_dim(&self, q: usize) -> usize {
        let q = q as u64;
        let v = match *self {
            FamilyLabel::CanonicalCurve { genus } => {
                let g = genus as u64;
                match q {
                    0 => 1,
                    1 => g,
                    _ => (2 * q - 1) * (g - 1),
                }
            }
            FamilyLabel::K3 { genus } | FamilyLabel::TangentDevelopable { genus } => {
                if q == 0 {
                    1
                } else {
                    q * q * (genus as u64 - 1) + 2
                }
            }
            FamilyLabel::RationalNormalCurve { degree } => degree as u64 * q + 1,
        };
        v as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertRow {
    pub q: usize,
    pub expected: usize,
    pub actual: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub family: FamilyLabel,
    pub rows: Vec<HilbertRow>,
}

impl HilbertReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub fn hilbert_check(ring: &GradedAlgebra, expected: FamilyLabel) -> HilbertReport {
    let rows = ring
        .dims()
        .iter()
        .enumerate()
        .map(|(q, &actual)| {
            let expected = expected.predicted_dim(q);
            HilbertRow {
                q,
                expected,
                actual,
                pass: expected == actual,
            }
        })
        .collect();
    HilbertReport {
        family: expected,
        rows,
    }
}
