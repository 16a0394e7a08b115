//! Seeded generators for the varieties the engine is run on, their JSON
//! interchange format, and the numeric invariants of the rank-two bundle
//! attached to an even-genus K3.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, drawing
//! coefficients uniformly from `[0, p)` in a fixed order, so a
//! `(family, genus, prime, seed)` tuple always reproduces the same payload.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::multilinear::{binomial, enumerate_monomials};
use crate::poly::Polynomial;
use crate::ring::{
    hilbert_check, ring_from_ideal, ring_from_parametrization, BigradedParametrization,
    FamilyLabel, GradedAlgebra, HilbertReport, IdealPresentation, RingMeta,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "rnc")]
    Rnc,
    #[serde(rename = "curve-ci23-g4")]
    CurveCi23G4,
    #[serde(rename = "k3-ci23-g4")]
    K3Ci23G4,
    #[serde(rename = "curve-grass-g6")]
    CurveGrassG6,
    #[serde(rename = "k3-grass-g6")]
    K3GrassG6,
    #[serde(rename = "curve-grass-g8")]
    CurveGrassG8,
    #[serde(rename = "k3-grass-g8")]
    K3GrassG8,
    #[serde(rename = "tandev")]
    Tandev,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Rnc,
        Family::CurveCi23G4,
        Family::K3Ci23G4,
        Family::CurveGrassG6,
        Family::K3GrassG6,
        Family::CurveGrassG8,
        Family::K3GrassG8,
        Family::Tandev,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Rnc => "rnc",
            Family::CurveCi23G4 => "curve-ci23-g4",
            Family::K3Ci23G4 => "k3-ci23-g4",
            Family::CurveGrassG6 => "curve-grass-g6",
            Family::K3GrassG6 => "k3-grass-g6",
            Family::CurveGrassG8 => "curve-grass-g8",
            Family::K3GrassG8 => "k3-grass-g8",
            Family::Tandev => "tandev",
        }
    }

    /// Genus of the families that only exist in one genus.
    pub fn fixed_genus(&self) -> Option<u32> {
        match self {
            Family::CurveCi23G4 | Family::K3Ci23G4 => Some(4),
            Family::CurveGrassG6 | Family::K3GrassG6 => Some(6),
            Family::CurveGrassG8 | Family::K3GrassG8 => Some(8),
            Family::Rnc | Family::Tandev => None,
        }
    }

    pub fn is_k3(&self) -> bool {
        matches!(
            self,
            Family::K3Ci23G4 | Family::K3GrassG6 | Family::K3GrassG8
        )
    }

    pub fn is_curve(&self) -> bool {
        matches!(
            self,
            Family::CurveCi23G4 | Family::CurveGrassG6 | Family::CurveGrassG8
        )
    }

    /// The canonical-curve family obtained by a hyperplane section.
    pub fn section(&self) -> Option<Family> {
        match self {
            Family::K3Ci23G4 => Some(Family::CurveCi23G4),
            Family::K3GrassG6 => Some(Family::CurveGrassG6),
            Family::K3GrassG8 => Some(Family::CurveGrassG8),
            _ => None,
        }
    }

    pub fn label(&self, genus: u32) -> FamilyLabel {
        match self {
            Family::Rnc => FamilyLabel::RationalNormalCurve { degree: genus },
            Family::Tandev => FamilyLabel::TangentDevelopable { genus },
            f if f.is_k3() => FamilyLabel::K3 { genus },
            _ => FamilyLabel::CanonicalCurve { genus },
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Curve,
    K3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub c: u64,
    pub e: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealPayload {
    pub num_vars: usize,
    pub generators: Vec<GeneratorJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamPayload {
    pub bidegree: [u32; 2],
    pub forms: Vec<FormJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Ideal(IdealPayload),
    Parametrization(ParamPayload),
}

/// Serialized description of one variety. Field order is the JSON key
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub schema_version: u32,
    pub family: Family,
    /// For `rnc` this is the degree `n` of the curve.
    pub genus: u32,
    pub prime: u32,
    pub seed: u64,
    pub payload: Payload,
}

/// Decoded payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Ideal(IdealPresentation),
    Parametrization(BigradedParametrization),
}

fn terms_json(p: &Polynomial) -> Vec<TermJson> {
    p.terms()
        .iter()
        .map(|t| TermJson {
            c: t.coeff as u64,
            e: t.exps.clone(),
        })
        .collect()
}

fn poly_from_json(
    num_vars: usize,
    terms: &[TermJson],
    ctx: FieldContext,
    what: &str,
) -> Result<Polynomial> {
    for t in terms {
        if t.e.len() != num_vars {
            return Err(Error::InvalidInstance(format!(
                "{what}: exponent vector of length {}, expected {num_vars}",
                t.e.len()
            )));
        }
        if t.c >= ctx.p() as u64 {
            return Err(Error::InvalidInstance(format!(
                "{what}: coefficient {} not reduced mod {}",
                t.c,
                ctx.p()
            )));
        }
    }
    Ok(Polynomial::from_terms(
        num_vars,
        terms.iter().map(|t| (t.c as u32, t.e.clone())),
        ctx,
    ))
}

impl InstanceSpec {
    fn new(family: Family, genus: u32, ctx: FieldContext, seed: u64, payload: Payload) -> Self {
        InstanceSpec {
            schema_version: SCHEMA_VERSION,
            family,
            genus,
            prime: ctx.p(),
            seed,
            payload,
        }
    }

    fn from_ideal(
        family: Family,
        genus: u32,
        ctx: FieldContext,
        seed: u64,
        pres: &IdealPresentation,
    ) -> Self {
        let payload = Payload::Ideal(IdealPayload {
            num_vars: pres.num_vars,
            generators: pres
                .generators
                .iter()
                .zip(&pres.degrees)
                .map(|(g, &degree)| GeneratorJson {
                    degree,
                    terms: terms_json(g),
                })
                .collect(),
        });
        Self::new(family, genus, ctx, seed, payload)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn ctx(&self) -> Result<FieldContext> {
        FieldContext::new(self.prime as u64)
    }

    pub fn label(&self) -> FamilyLabel {
        self.family.label(self.genus)
    }

    /// Decodes and validates the payload.
    pub fn presentation(&self) -> Result<Presentation> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let ctx = self.ctx()?;
        match &self.payload {
            Payload::Ideal(ip) => {
                let generators = ip
                    .generators
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        poly_from_json(ip.num_vars, &g.terms, ctx, &format!("generator {i}"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let pres = IdealPresentation {
                    num_vars: ip.num_vars,
                    generators,
                    degrees: ip.generators.iter().map(|g| g.degree).collect(),
                };
                pres.validate()?;
                Ok(Presentation::Ideal(pres))
            }
            Payload::Parametrization(pp) => {
                let forms = pp
                    .forms
                    .iter()
                    .enumerate()
                    .map(|(i, f)| poly_from_json(4, &f.terms, ctx, &format!("form {i}")))
                    .collect::<Result<Vec<_>>>()?;
                let param = BigradedParametrization {
                    forms,
                    bidegree: (pp.bidegree[0], pp.bidegree[1]),
                };
                param.validate()?;
                Ok(Presentation::Parametrization(param))
            }
        }
    }

    /// Builds the graded ring up to degree `qmax`.
    pub fn build_ring(&self, qmax: usize) -> Result<GradedAlgebra> {
        let ctx = self.ctx()?;
        let ring = match self.presentation()? {
            Presentation::Ideal(p) => ring_from_ideal(&p, qmax, ctx)?,
            Presentation::Parametrization(p) => ring_from_parametrization(&p, qmax, ctx)?,
        };
        Ok(ring.with_meta(RingMeta {
            family: self.family.to_string(),
            genus: self.genus,
            seed: self.seed,
        }))
    }

    /// [`build_ring`](Self::build_ring) followed by the Hilbert-function
    /// guard; a mismatch means the random draw was not general.
    pub fn checked_ring(&self, qmax: usize) -> Result<(GradedAlgebra, HilbertReport)> {
        let ring = self.build_ring(qmax)?;
        let report = hilbert_check(&ring, self.label());
        if !report.pass() {
            let bad: Vec<String> = report
                .rows
                .iter()
                .filter(|r| !r.pass)
                .map(|r| format!("dim R_{} = {} (expected {})", r.q, r.actual, r.expected))
                .collect();
            return Err(Error::DegenerateDraw(format!(
                "{} seed {}: {}",
                self.family,
                self.seed,
                bad.join(", ")
            )));
        }
        Ok((ring, report))
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Every monomial of degree `d` with a uniformly random coefficient.
fn random_form(n: usize, d: u32, rng: &mut ChaCha8Rng, ctx: FieldContext) -> Polynomial {
    Polynomial::from_terms(
        n,
        enumerate_monomials(n, d)
            .into_iter()
            .map(|m| (rng.gen_range(0..ctx.p()), m.exps)),
        ctx,
    )
}

fn random_linear_forms(
    count: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
    ctx: FieldContext,
) -> Vec<Polynomial> {
    (0..count)
        .map(|_| {
            let coeffs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..ctx.p())).collect();
            Polynomial::linear(&coeffs, ctx)
        })
        .collect()
}

/// Rational normal curve of degree `n`: forms `s^{n-i} u^i`.
pub fn gen_rnc(n: u32, ctx: FieldContext) -> Result<InstanceSpec> {
    if !(2..=9).contains(&n) {
        return Err(Error::GenusOutOfRange {
            genus: n,
            reason: "rational normal curves need degree 2..=9".into(),
        });
    }
    let forms = (0..=n)
        .map(|i| FormJson {
            terms: vec![TermJson {
                c: 1,
                e: vec![n - i, i, 0, 0],
            }],
        })
        .collect();
    Ok(InstanceSpec::new(
        Family::Rnc,
        n,
        ctx,
        0,
        Payload::Parametrization(ParamPayload {
            bidegree: [n, 0],
            forms,
        }),
    ))
}

/// A random quadric and a random cubic: in `P^3` a canonical genus-4 curve,
/// in `P^4` a genus-4 K3 surface.
pub fn gen_ci23(model: Model, seed: u64, ctx: FieldContext) -> Result<InstanceSpec> {
    let (n, family) = match model {
        Model::Curve => (4, Family::CurveCi23G4),
        Model::K3 => (5, Family::K3Ci23G4),
    };
    let mut rng = rng_for(seed, 0);
    let quadric = random_form(n, 2, &mut rng, ctx);
    let cubic = random_form(n, 3, &mut rng, ctx);
    let pres = IdealPresentation::new(n, vec![quadric, cubic])?;
    Ok(InstanceSpec::from_ideal(family, 4, ctx, seed, &pres))
}

/// The Plücker quadrics of `Gr(2, m)` in coordinates `p_{ij}`, `i < j`,
/// ordered lexicographically.
pub fn plucker_quadrics(m: usize, ctx: FieldContext) -> Vec<Polynomial> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let n = pairs.len();
    let var = |i: usize, j: usize| pairs.iter().position(|&x| x == (i, j)).unwrap();
    let quad = |a: usize, b: usize, c: u32| {
        let mut e = vec![0u32; n];
        e[a] += 1;
        e[b] += 1;
        (c, e)
    };
    let minus = ctx.p() - 1;
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    out.push(Polynomial::from_terms(
                        n,
                        [
                            quad(var(i, j), var(k, l), 1),
                            quad(var(i, k), var(j, l), minus),
                            quad(var(i, l), var(j, k), 1),
                        ],
                        ctx,
                    ));
                }
            }
        }
    }
    out
}

/// Linear sections of `Gr(2,5)` (plus one quadric) and `Gr(2,6)`.
pub fn gen_grass(genus: u32, model: Model, seed: u64, ctx: FieldContext) -> Result<InstanceSpec> {
    let (m, vars, extra_quadric, family) = match (genus, model) {
        (6, Model::Curve) => (5, 6, true, Family::CurveGrassG6),
        (6, Model::K3) => (5, 7, true, Family::K3GrassG6),
        (8, Model::Curve) => (6, 8, false, Family::CurveGrassG8),
        (8, Model::K3) => (6, 9, false, Family::K3GrassG8),
        _ => {
            return Err(Error::GenusOutOfRange {
                genus,
                reason: "Grassmannian sections exist for genus 6 and 8".into(),
            })
        }
    };
    let mut rng = rng_for(seed, 0);
    let coords = binomial(m as u64, 2) as usize;
    let images = random_linear_forms(coords, vars, &mut rng, ctx);
    let mut generators: Vec<Polynomial> = plucker_quadrics(m, ctx)
        .iter()
        .map(|q| q.substitute(&images, ctx))
        .collect();
    if extra_quadric {
        generators.push(random_form(vars, 2, &mut rng, ctx));
    }
    if generators.iter().any(|g| g.is_zero()) {
        return Err(Error::DegenerateDraw(format!(
            "{family} seed {seed}: zero generator"
        )));
    }
    let pres = IdealPresentation::new(vars, generators)?;
    Ok(InstanceSpec::from_ideal(family, genus, ctx, seed, &pres))
}

/// Tangent developable of the rational normal curve of degree `g`:
/// `f_i = a ∂_s ν_i + b ∂_u ν_i` with `ν_i = s^{g-i} u^i`, bidegree `(g-1, 1)`.
pub fn gen_tandev(genus: u32, ctx: FieldContext) -> Result<InstanceSpec> {
    if genus % 2 == 1 {
        return Err(Error::OddGenus(genus));
    }
    if !(4..=12).contains(&genus) {
        return Err(Error::GenusOutOfRange {
            genus,
            reason: "tangent developables are generated for 4 <= g <= 12".into(),
        });
    }
    let g = genus;
    let forms = (0..=g)
        .map(|i| {
            let mut terms = Vec::new();
            if i < g {
                terms.push(TermJson {
                    c: ((g - i) % ctx.p()) as u64,
                    e: vec![g - i - 1, i, 1, 0],
                });
            }
            if i > 0 {
                terms.push(TermJson {
                    c: (i % ctx.p()) as u64,
                    e: vec![g - i, i - 1, 0, 1],
                });
            }
            FormJson { terms }
        })
        .collect();
    Ok(InstanceSpec::new(
        Family::Tandev,
        genus,
        ctx,
        0,
        Payload::Parametrization(ParamPayload {
            bidegree: [g - 1, 1],
            forms,
        }),
    ))
}

/// Dispatches on the family, checking the genus is one the family offers.
pub fn generate(
    family: Family,
    genus: Option<u32>,
    ctx: FieldContext,
    seed: u64,
) -> Result<InstanceSpec> {
    if let (Some(fixed), Some(g)) = (family.fixed_genus(), genus) {
        if fixed != g {
            return Err(Error::GenusOutOfRange {
                genus: g,
                reason: format!("{family} has genus {fixed}"),
            });
        }
    }
    let need_genus =
        || genus.ok_or_else(|| Error::InvalidInstance(format!("{family} needs an explicit genus")));
    let mut spec = match family {
        Family::Rnc => gen_rnc(need_genus()?, ctx)?,
        Family::Tandev => gen_tandev(need_genus()?, ctx)?,
        Family::CurveCi23G4 => gen_ci23(Model::Curve, seed, ctx)?,
        Family::K3Ci23G4 => gen_ci23(Model::K3, seed, ctx)?,
        Family::CurveGrassG6 => gen_grass(6, Model::Curve, seed, ctx)?,
        Family::K3GrassG6 => gen_grass(6, Model::K3, seed, ctx)?,
        Family::CurveGrassG8 => gen_grass(8, Model::Curve, seed, ctx)?,
        Family::K3GrassG8 => gen_grass(8, Model::K3, seed, ctx)?,
    };
    spec.seed = seed;
    Ok(spec)
}

/// Restricts a K3 instance to a random hyperplane, giving a canonical curve
/// of the same genus in one fewer variable.
pub fn hyperplane_section(surface: &InstanceSpec, seed: u64) -> Result<InstanceSpec> {
    let Some(curve_family) = surface.family.section() else {
        return Err(Error::InvalidInstance(format!(
            "hyperplane_section needs a K3 instance, got {}",
            surface.family
        )));
    };
    let ctx = surface.ctx()?;
    let Presentation::Ideal(pres) = surface.presentation()? else {
        return Err(Error::InvalidInstance(
            "K3 instance without ideal payload".into(),
        ));
    };
    let mut rng = rng_for(seed, 1);
    let n = pres.num_vars;
    let images = random_linear_forms(n, n - 1, &mut rng, ctx);
    let generators: Vec<Polynomial> = pres
        .generators
        .iter()
        .map(|g| g.substitute(&images, ctx))
        .collect();
    if generators.iter().any(|g| g.is_zero()) {
        return Err(Error::DegenerateDraw(format!(
            "hyperplane seed {seed}: zero generator"
        )));
    }
    let cut = IdealPresentation::new(n - 1, generators)?;
    Ok(InstanceSpec::from_ideal(
        curve_family,
        surface.genus,
        ctx,
        seed,
        &cut,
    ))
}

/// Numeric invariants of the rank-two bundle `E` on a genus `g = 2k` K3
/// with `det E = L`, and of the surrounding construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LMLedger {
    pub g: u32,
    pub k: u32,
    pub h0_e: u64,
    pub h1_e: u64,
    pub h2_e: u64,
    pub c2_e: u64,
    /// `P(H^0(E)) ≅ P^{k+1}`.
    pub dim_p: u64,
    /// Rank of the kernel bundle on the zero-locus side.
    pub rank_w: u64,
    pub dim_sym_k_h0e: u64,
    pub h0_l: u64,
    /// Rank of the kernel bundle `M_L` on the canonical curve (`h^0(ω) = g`).
    pub rank_ml: u64,
    /// Length of the zero scheme of a general section of `E`.
    pub zero_locus_degree: u64,
    /// `h^1(L ⊗ I_Z) = h^2(O_X)`.
    pub h1_l_iz: u64,
}

pub fn lm_ledger(genus: u32) -> Result<LMLedger> {
    if genus % 2 == 1 {
        return Err(Error::OddGenus(genus));
    }
    if genus < 4 {
        return Err(Error::GenusOutOfRange {
            genus,
            reason: "need g >= 4".into(),
        });
    }
    let g = genus as u64;
    let k = g / 2;
    Ok(LMLedger {
        g: genus,
        k: k as u32,
        h0_e: k + 2,
        h1_e: 0,
        h2_e: 0,
        c2_e: k + 1,
        dim_p: k + 1,
        rank_w: k,
        dim_sym_k_h0e: binomial(2 * k + 1, k),
        h0_l: g + 1,
        rank_ml: g - 1,
        zero_locus_degree: k + 1,
        h1_l_iz: 1,
    })
}

impl LMLedger {
    /// Cross-checks between the closed forms; returns the first failing
    /// identity.
    pub fn check(&self) -> std::result::Result<(), &'static str> {
        let (g, k) = (self.g as i64, self.k as i64);
        let checks: [(&'static str, bool); 8] = [
            ("g = 2k", g == 2 * k),
            ("dim P = h0(E) - 1", self.dim_p + 1 == self.h0_e),
            (
                "rank W = deg Z - 1",
                self.rank_w + 1 == self.zero_locus_degree,
            ),
            ("deg Z = c2(E)", self.zero_locus_degree == self.c2_e),
            (
                "Sym^k H0(E) dimension",
                self.dim_sym_k_h0e == binomial(self.h0_e + k as u64 - 1, k as u64),
            ),
            (
                // χ(E) = c1²/2 − c2 + 2·rank on a K3, with c1² = 2g − 2
                "Riemann-Roch for E",
                self.h0_e as i64 - self.h1_e as i64 + self.h2_e as i64
                    == (2 * g - 2) / 2 - self.c2_e as i64 + 4,
            ),
            ("h0(L) = g + 1", self.h0_l as i64 == g + 1),
            (
                "rank M_L = h0(ω) - 1",
                self.rank_ml as i64 == g - 1 && self.h1_l_iz == 1,
            ),
        ];
        match checks.iter().find(|(_, ok)| !ok) {
            Some((name, _)) => Err(name),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> FieldContext {
        FieldContext::new(31991).unwrap()
    }

    #[test]
    fn ledger_examples() {
        let l = lm_ledger(4).unwrap();
        assert_eq!((l.k, l.h0_e, l.dim_p, l.dim_sym_k_h0e), (2, 4, 3, 10));
        let l = lm_ledger(8).unwrap();
        assert_eq!((l.k, l.h0_e, l.c2_e, l.rank_w), (4, 6, 5, 4));
        assert!(lm_ledger(2).is_err());
        assert!(matches!(lm_ledger(7), Err(Error::OddGenus(7))));
        for g in (4..=20).step_by(2) {
            assert_eq!(lm_ledger(g).unwrap().check(), Ok(()));
        }
        let mut broken = lm_ledger(6).unwrap();
        broken.c2_e += 1;
        assert!(broken.check().is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
            assert_eq!(serde_json::to_string(&f).unwrap(), format!("\"{f}\""));
        }
        assert!("k3".parse::<Family>().is_err());
    }

    #[test]
    fn plucker_counts() {
        assert_eq!(plucker_quadrics(4, ctx()).len(), 1);
        assert_eq!(plucker_quadrics(5, ctx()).len(), 5);
        assert_eq!(plucker_quadrics(6, ctx()).len(), 15);
        assert!(plucker_quadrics(6, ctx())
            .iter()
            .all(|q| q.homogeneous_degree() == Some(2)));
    }

    #[test]
    fn generator_shapes() {
        let t = gen_tandev(10, ctx()).unwrap();
        let Payload::Parametrization(pp) = &t.payload else {
            panic!()
        };
        assert_eq!(pp.forms.len(), 11);
        assert_eq!(pp.bidegree, [9, 1]);

        let g8 = generate(Family::CurveGrassG8, None, ctx(), 7).unwrap();
        let Payload::Ideal(ip) = &g8.payload else {
            panic!()
        };
        assert_eq!((ip.generators.len(), ip.num_vars), (15, 8));
        assert!(ip.generators.iter().all(|g| g.degree == 2));

        let g6 = generate(Family::K3GrassG6, None, ctx(), 1).unwrap();
        let Payload::Ideal(ip) = &g6.payload else {
            panic!()
        };
        assert_eq!((ip.generators.len(), ip.num_vars), (6, 7));

        let ci = generate(Family::K3Ci23G4, None, ctx(), 1).unwrap();
        let Payload::Ideal(ip) = &ci.payload else {
            panic!()
        };
        let degs: Vec<u32> = ip.generators.iter().map(|g| g.degree).collect();
        assert_eq!(degs, vec![2, 3]);

        let rnc = generate(Family::Rnc, Some(3), ctx(), 0).unwrap();
        let Payload::Parametrization(pp) = &rnc.payload else {
            panic!()
        };
        assert_eq!(pp.forms.len(), 4);
    }

    #[test]
    fn invalid_combinations() {
        assert!(generate(Family::CurveGrassG8, Some(6), ctx(), 0).is_err());
        assert!(generate(Family::Tandev, None, ctx(), 0).is_err());
        assert!(generate(Family::Tandev, Some(5), ctx(), 0).is_err());
        assert!(generate(Family::Tandev, Some(14), ctx(), 0).is_err());
        assert!(generate(Family::Rnc, Some(10), ctx(), 0).is_err());
        assert!(generate(Family::Rnc, Some(1), ctx(), 0).is_err());
    }

    #[test]
    fn reproducible_payloads() {
        for f in Family::ALL {
            let genus = match f {
                Family::Rnc => Some(4),
                Family::Tandev => Some(6),
                _ => None,
            };
            let a = generate(f, genus, ctx(), 42).unwrap().to_json();
            let b = generate(f, genus, ctx(), 42).unwrap().to_json();
            assert_eq!(a, b);
        }
        let a = generate(Family::K3GrassG6, None, ctx(), 1).unwrap();
        let b = generate(Family::K3GrassG6, None, ctx(), 2).unwrap();
        assert_ne!(a.payload, b.payload);
    }

    #[test]
    fn json_key_order() {
        let s = gen_rnc(2, ctx()).unwrap().to_json();
        let keys: Vec<usize> = [
            "schema_version",
            "family",
            "genus",
            "prime",
            "seed",
            "payload",
        ]
        .iter()
        .map(|k| s.find(&format!("\"{k}\"")).unwrap())
        .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let back = InstanceSpec::from_json(&s).unwrap();
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn hyperplane_section_rules() {
        let k3 = generate(Family::K3Ci23G4, None, ctx(), 3).unwrap();
        let c = hyperplane_section(&k3, 9).unwrap();
        assert_eq!(c.family, Family::CurveCi23G4);
        let Payload::Ideal(ip) = &c.payload else {
            panic!()
        };
        assert_eq!(ip.num_vars, 4);
        assert!(hyperplane_section(&c, 9).is_err());
        assert!(hyperplane_section(&gen_rnc(3, ctx()).unwrap(), 9).is_err());
    }

    #[test]
    fn rejects_unreduced_coefficients() {
        let mut spec = gen_rnc(3, ctx()).unwrap();
        if let Payload::Parametrization(pp) = &mut spec.payload {
            pp.forms[0].terms[0].c = 31991;
        }
        assert!(matches!(
            spec.presentation(),
            Err(Error::InvalidInstance(_))
        ));
    }
}
