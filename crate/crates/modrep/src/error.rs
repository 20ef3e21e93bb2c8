//! Error type shared across the workbench.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field size {0} exceeds the 2^20 bound")]
    FieldTooLarge(u64),
    #[error("polynomial is not irreducible over GF({p})")]
    ReducibleModulus { p: u32 },
    #[error("{m} does not divide the unit group order {order}; the field is too small")]
    NoRootOfUnity { m: u64, order: u64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrices belong to different fields")]
    FieldMismatch,
    #[error("modules belong to different groups or fields")]
    ModuleMismatch,
    #[error("group closure exceeds the {0}-element bound")]
    GroupTooLarge(usize),
    #[error("element index {0} out of range")]
    BadElement(usize),
    #[error("action does not extend to an automorphism of the base group")]
    NotAutomorphism,
    #[error("automorphism order {ord} does not divide {m}")]
    ActionOrder { ord: usize, m: usize },
    #[error("subgroup is not elementary abelian of exponent {0}")]
    NotElementaryAbelian(u32),
    #[error("element {0} is outside the normalizer of E")]
    OutsideNormalizer(usize),
    #[error("line coordinates must not all be zero")]
    ZeroLine,
    #[error("line is not stable under the group action")]
    UnstableLine,
    #[error("line coordinates are dependent over the prime field; the line is not minimally supported on E")]
    FpDependentLine,
    #[error("|G/C_G(E)| = {0} is divisible by the characteristic")]
    QuotientOrderDivisible(usize),
    #[error("non-split field: End of a simple module of dimension {dim} has dimension {end_dim}; extend the scalar field")]
    NonSplitField { dim: usize, end_dim: usize },
    #[error("randomized search exhausted after {attempts} attempts (seed {seed}): {what}")]
    SearchExhausted { what: String, attempts: usize, seed: u64 },
    #[error("isomorphism test inconclusive after {attempts} attempts (seed {seed})")]
    IsoInconclusive { attempts: usize, seed: u64 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown builtin scenario '{0}'")]
    UnknownBuiltin(String),
    #[error("dot output requires an ext_blocks check")]
    DotWithoutExtBlocks,
    #[error("block correspondence fiber for kH-block {label} meets several kG-blocks: {blocks:?}")]
    CorrespondenceNotSingleton { label: usize, blocks: Vec<usize> },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
