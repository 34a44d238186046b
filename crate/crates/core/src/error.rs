use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the library. The CLI maps these onto process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("modulus {0} is not prime; use smith_normal_form")]
    CompositeModulus(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("precision exhausted ({context}) at N = {precision}; the word-size cap is {cap}")]
    PrecisionExhausted {
        context: String,
        precision: u32,
        cap: u32,
    },
    #[error("prime {q} divides the index [O_F : Z[theta]]")]
    BadIndex { q: BigInt },
    #[error("prime {0} too large for word-size residue arithmetic")]
    PrimeTooLarge(BigInt),
    #[error("element is zero")]
    ZeroElement,
    #[error("mu_p is not contained in the local field")]
    MuPNotContained,
    #[error("radicand is a p-th power")]
    PthPower,
    #[error("element is not a unit at the given prime")]
    NotAUnit,
    #[error("prime lies above p; use the wild symbol")]
    WildPrime,
    #[error("subgroup is not contained in B_F")]
    NotInBF,
    #[error("ambient field or prime mismatch")]
    AmbientMismatch,
    #[error("Minkowski bound {bound} exceeds ceiling {ceiling}; supply bundle data")]
    BoundTooLarge { bound: u64, ceiling: u64 },
    #[error("S-unit candidate {0} is not an S-unit")]
    NotSUnit(usize),
    #[error("S-unit generators are multiplicatively dependent")]
    DependentUnits,
    #[error("S-unit generators are not p-saturated")]
    Unsaturated,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("uncertified Gross defect (delta_upper = {0})")]
    UncertifiedDefect(usize),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// 2 certification failure, 3 precision exhaustion, 4 bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted { .. } => 3,
            Error::BadInput(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::ZeroPolynomial
            | Error::NotMonic
            | Error::NotSquarefree
            | Error::DimensionMismatch(_)
            | Error::AmbientMismatch
            | Error::ZeroElement
            | Error::PthPower => 4,
            _ => 2,
        }
    }
}
