use thiserror::Error;

/// Errors raised by the exact-arithmetic kernels and the verification layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("values from incompatible contexts (cyclotomic orders {left} and {right})")]
    IncompatibleContext { left: u64, right: u64 },
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is not a p-adic unit")]
    NotAUnit,
    #[error("element is not in the subgroup {0}")]
    NotInSubgroup(&'static str),
    #[error("element is not in K = SL2(o)")]
    NotInK,
    #[error("root of unity of order {order} does not live in Q(zeta_{field})")]
    ConductorExceedsContext { order: u64, field: u64 },
    #[error("context too large: {0}")]
    ContextTooLarge(String),
    #[error(
        "finite-sum result disagrees with closed form: computed {computed}, expected {expected}"
    )]
    MismatchWithClosedForm { computed: String, expected: String },
    #[error("principal value unstable between depths {depth} and {next}: {lhs} vs {rhs}")]
    UnstablePrincipalValue {
        depth: u32,
        next: u32,
        lhs: String,
        rhs: String,
    },
    #[error("integrand not constant at relative depth {depth} on shell {shell}")]
    NonConstantIntegrand { shell: i32, depth: u32 },
    #[error("result does not lie in the two-dimensional span: {0}")]
    BasisResolutionFailure(String),
    #[error("expected a Laurent monomial, got {0}")]
    NotAMonomial(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
