use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in GF(p)")]
    DivisionByZero,

    #[error("modulus {0} is not a prime in [3, 2^31)")]
    NotPrime(u64),

    #[error("wedge degree {p} out of range for ambient dimension {r}")]
    WedgeOutOfRange { r: usize, p: usize },

    #[error("Sym composite identity violated (dim F = {f_dim}, power {power}): {detail}")]
    SymComposite {
        f_dim: usize,
        power: usize,
        detail: String,
    },

    #[error("degree bound {0} too small (need at least 2)")]
    DegreeBound(usize),

    #[error("generator {index} is not homogeneous of degree {degree}")]
    NotHomogeneous { index: usize, degree: u32 },

    #[error("ambient not minimal: generator {index} is linear")]
    AmbientNotMinimal { index: usize },

    #[error("form {index} is not bihomogeneous of bidegree ({d}, {e})")]
    NotBihomogeneous { index: usize, d: u32, e: u32 },

    #[error("parametrization degenerate: {independent} of {forms} forms independent")]
    DegenerateParametrization { independent: usize, forms: usize },

    #[error("ring invariant violated: {0}")]
    RingInvariant(String),

    #[error("Koszul cell (p={p}, q={q}) out of range: {reason}")]
    CellOutOfRange { p: usize, q: usize, reason: String },

    #[error("chain condition violated at (p={p}, q={q})")]
    ChainCondition { p: usize, q: usize },

    #[error("odd genus {0} out of scope")]
    OddGenus(u32),

    #[error("genus {genus} out of range: {reason}")]
    GenusOutOfRange { genus: u32, reason: String },

    #[error("degenerate draw; reseed ({0})")]
    DegenerateDraw(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("at cell (p={p}, q={q}): {source}")]
    Cell {
        p: usize,
        q: usize,
        #[source]
        source: Box<Error>,
    },
}
