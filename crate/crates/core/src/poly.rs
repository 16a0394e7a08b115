//! Sparse multivariate polynomials over `GF(p)`, just enough to build and
//! transform instance presentations.

use std::collections::BTreeMap;

use crate::field::FieldContext;
use crate::multilinear::grevlex_cmp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: u32,
    pub exps: Vec<u32>,
}

/// Terms are kept combined, nonzero, and in decreasing grevlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    num_vars: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(
        num_vars: usize,
        terms: impl IntoIterator<Item = (u32, Vec<u32>)>,
        ctx: FieldContext,
    ) -> Self {
        let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for (c, e) in terms {
            assert_eq!(e.len(), num_vars, "exponent vector length");
            let slot = acc.entry(e).or_insert(0);
            *slot = ctx.add(*slot, c % ctx.p());
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(exps, coeff)| Term { coeff, exps })
            .collect();
        terms.sort_by(|a, b| grevlex_cmp(&b.exps, &a.exps));
        Polynomial { num_vars, terms }
    }

    /// The linear form `Σ coeffs[i] x_i`.
    pub fn linear(coeffs: &[u32], ctx: FieldContext) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            n,
            coeffs.iter().enumerate().map(|(i, &c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (c, e)
            }),
            ctx,
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(d)` when every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.iter().map(|t| t.exps.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, other: &Polynomial, ctx: FieldContext) -> Polynomial {
        assert_eq!(self.num_vars, other.num_vars);
        Self::from_terms(
            self.num_vars,
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|t| (t.coeff, t.exps.clone())),
            ctx,
        )
    }

    pub fn scale(&self, s: u32, ctx: FieldContext) -> Polynomial {
        Self::from_terms(
            self.num_vars,
            self.terms
                .iter()
                .map(|t| (ctx.mul(t.coeff, s), t.exps.clone())),
            ctx,
        )
    }

    pub fn mul(&self, other: &Polynomial, ctx: FieldContext) -> Polynomial {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let e = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                out.push((ctx.mul(a.coeff, b.coeff), e));
            }
        }
        Self::from_terms(self.num_vars, out, ctx)
    }

    /// Substitutes `x_i ↦ images[i]` (all images share a variable count).
    pub fn substitute(&self, images: &[Polynomial], ctx: FieldContext) -> Polynomial {
        assert_eq!(images.len(), self.num_vars);
        let target = images.first().map_or(0, |p| p.num_vars);
        let mut result = Polynomial::zero(target);
        for t in &self.terms {
            let mut acc = Polynomial::from_terms(target, [(t.coeff, vec![0; target])], ctx);
            for (i, &e) in t.exps.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(&images[i], ctx);
                }
            }
            result = result.add(&acc, ctx);
        }
        result
    }
}
