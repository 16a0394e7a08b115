//! Calibration suite run by `betti selftest`.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::instances::{gen_rnc, generate, Family, InstanceSpec};
use crate::koszul::{betti_table, chain_condition_holds, SignRule};
use crate::multilinear::{
    binomial, sym_composite, sym_comultiply_then_multiply, weyman_dimension_identity,
    Comultiplication,
};
use crate::oracle;
use crate::ring::DEFAULT_QMAX;

pub const CHECK_PRIMES: [u64; 3] = [10007, 31991, 65521];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

fn timed(name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        name: name.into(),
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// `κ_{p,1} = p·C(n,p+1)` and nothing off the linear strand.
pub fn rnc_closed_form(n: u32, ctx: FieldContext) -> Result<(bool, String)> {
    let spec = gen_rnc(n, ctx)?;
    let ring = spec.checked_ring(DEFAULT_QMAX)?.0;
    let table = betti_table(&ring, n as usize + 1, 2)?;
    for p in 0..=table.pmax {
        for q in 0..=2 {
            let expected = match (p, q) {
                (0, 0) => 1,
                (p, 1) if p >= 1 => p as u64 * binomial(n as u64, p as u64 + 1),
                _ => 0,
            };
            if table.kappa[p][q] != expected {
                return Ok((
                    false,
                    format!("κ_{{{p},{q}}} = {}, expected {expected}", table.kappa[p][q]),
                ));
            }
        }
    }
    Ok((true, format!("row q=1 {:?}", &table.row(1)[1..])))
}

pub fn sym_grid() -> Result<(bool, String)> {
    let mut cases = 0;
    for f in 1..=8 {
        for i in 1..=6 {
            if sym_comultiply_then_multiply(f, i)? != i as u64 {
                return Ok((false, format!("F={f}, i={i}")));
            }
            cases += 1;
        }
    }
    Ok((true, format!("{cases} cases")))
}

pub fn weyman_grid() -> Result<(bool, String)> {
    let mut cases = 0;
    for d1 in 1..=4 {
        for d2 in d1..=10 {
            for i in 1..=6 {
                if !weyman_dimension_identity(d1, d2, i) {
                    return Ok((false, format!("d1={d1}, d2={d2}, i={i}")));
                }
                cases += 1;
            }
        }
    }
    Ok((true, format!("{cases} cases")))
}

/// The small instances the brute-force oracle can handle.
pub fn oracle_instances(ctx: FieldContext) -> Result<Vec<InstanceSpec>> {
    let mut specs = Vec::new();
    for n in 2..=5 {
        specs.push(gen_rnc(n, ctx)?);
    }
    for seed in [1, 2] {
        specs.push(generate(Family::CurveCi23G4, None, ctx, seed)?);
        specs.push(generate(Family::K3Ci23G4, None, ctx, seed)?);
    }
    specs.push(generate(Family::Tandev, Some(4), ctx, 0)?);
    specs.push(generate(Family::CurveGrassG6, None, ctx, 1)?);
    Ok(specs)
}

/// Engine and oracle agree on every cell `p <= r`, `q <= 2`.
pub fn oracle_agreement(spec: &InstanceSpec) -> Result<(bool, String)> {
    let ring = spec.checked_ring(DEFAULT_QMAX)?.0;
    let pmax = ring.r1_dim();
    let engine = betti_table(&ring, pmax, oracle::MAX_Q)?;
    let naive = oracle::naive_table(spec, pmax, oracle::MAX_Q)?;
    for (p, (ours, theirs)) in engine.kappa.iter().zip(&naive).enumerate() {
        if let Some(q) = (0..=oracle::MAX_Q).find(|&q| ours[q] != theirs[q]) {
            return Ok((
                false,
                format!("κ_{{{p},{q}}}: engine {}, oracle {}", ours[q], theirs[q]),
            ));
        }
    }
    Ok((true, format!("{} cells", (pmax + 1) * (oracle::MAX_Q + 1))))
}

/// The same family and seed give the same table under every prime.
pub fn multi_prime_agreement(
    family: Family,
    genus: Option<u32>,
    seed: u64,
) -> Result<(bool, String)> {
    let mut tables = Vec::new();
    for p in CHECK_PRIMES {
        let ctx = FieldContext::new(p)?;
        let ring = generate(family, genus, ctx, seed)?
            .checked_ring(DEFAULT_QMAX)?
            .0;
        tables.push(betti_table(&ring, ring.r1_dim(), 2)?.kappa);
    }
    let agree = tables.windows(2).all(|w| w[0] == w[1]);
    Ok((agree, format!("primes {CHECK_PRIMES:?}")))
}

/// A constant sign in the differential must be caught by the chain check,
/// and the multiplicity-free comultiplication by the Sym identity.
fn negative_controls(ctx: FieldContext) -> Result<(bool, String)> {
    let ring = gen_rnc(3, ctx)?.checked_ring(DEFAULT_QMAX)?.0;
    if chain_condition_holds(&ring, 1, 1, SignRule::Constant)? {
        return Ok((false, "constant signs passed the chain check".into()));
    }
    if !chain_condition_holds(&ring, 1, 1, SignRule::Alternating)? {
        return Ok((false, "alternating signs failed the chain check".into()));
    }
    match sym_composite(4, 2, Comultiplication::Plain) {
        Err(Error::SymComposite { .. }) => Ok((true, "both corruptions detected".into())),
        other => Ok((false, format!("plain comultiplication gave {other:?}"))),
    }
}

/// Runs every check; the caller decides how to report failures.
pub fn run_selftest(ctx: FieldContext) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push(timed(format!("rnc n={n} closed form"), || {
            rnc_closed_form(n, ctx)
        }));
    }
    out.push(timed("sym composite grid", sym_grid));
    out.push(timed("weyman identity grid", weyman_grid));
    out.push(timed("negative controls", || negative_controls(ctx)));
    match oracle_instances(ctx) {
        Ok(specs) => {
            for spec in specs {
                let name = format!(
                    "oracle {} genus {} seed {}",
                    spec.family, spec.genus, spec.seed
                );
                out.push(timed(name, || oracle_agreement(&spec)));
            }
        }
        Err(e) => out.push(timed("oracle instances", || Err(e))),
    }
    for (family, genus) in [
        (Family::CurveCi23G4, None),
        (Family::K3Ci23G4, None),
        (Family::Tandev, Some(4)),
    ] {
        out.push(timed(format!("multi-prime {family}"), || {
            multi_prime_agreement(family, genus, 1)
        }));
    }
    out
}
