use crate::pc::{Inconsistency, ParseError};

/// Errors raised by the engine.
///
/// [`Error::Fault`] is special: it marks a condition that the underlying
/// mathematics rules out once the hypothesis checks have passed, so it points
/// at an engine bug or a misclassified input rather than at bad user data.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Inconsistent(#[from] Inconsistency),
    #[error("enumeration of {size} elements exceeds the cap of {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not abelian")]
    NotAbelian,
    #[error("subgroup is not elementary abelian")]
    NotElementaryAbelian,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("p = 2 is not supported by the constructions")]
    EvenPrime,
    #[error("group is not normally constrained")]
    NotNormallyConstrained,
    #[error("route mismatch: construction needs {expected}, group routes to {found}")]
    RouteMismatch { expected: String, found: String },
    #[error("the derivation does not vanish on its module (value {0} at a module generator)")]
    ModuleNotAnnihilated(String),
    #[error("relator {0} broken by a lifted map")]
    RelatorBroken(String),
    #[error("[G, h] is not contained in the module")]
    CommutatorsNotInModule,
    #[error("generator images do not lie in the module")]
    ImagesNotInModule,
    #[error("expected {expected} images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("the first {0} PC generators do not generate the group modulo its Frattini subgroup")]
    GeneratorsNotMinimal(usize),
    #[error("structure oracle disagreement: {0}")]
    OracleDisagreement(String),
    #[error("engine fault ({kind}): {state}")]
    Fault { kind: FaultKind, state: String },
}

/// Conditions proved impossible under the constructions' hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FaultKind {
    /// No non-inner automorphism among the full assignment family.
    CaseACountingFailure,
    /// The centralizer intersection does not have order `p^2`.
    KOrderUnexpected,
    /// A constructed automorphism turned out to be inner, or an assignment
    /// that must extend to a derivation did not.
    EngineContradiction,
}

impl std::fmt::Display for FaultKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FaultKind::CaseACountingFailure => "CaseACountingFailure",
            FaultKind::KOrderUnexpected => "KOrderUnexpected",
            FaultKind::EngineContradiction => "EngineContradiction",
        })
    }
}

impl Error {
    pub fn is_fault(&self) -> bool {
        matches!(self, Error::Fault { .. })
    }

    pub(crate) fn fault(kind: FaultKind, state: impl Into<String>) -> Self {
        Error::Fault {
            kind,
            state: state.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
