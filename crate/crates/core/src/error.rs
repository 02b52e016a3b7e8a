use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("compactness flags violate the closure rules: {0}")]
    InconsistentFlags(String),
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("weight {0} is not regular")]
    NotRegular(String),
    #[error("weight {0} is not strongly elliptic")]
    NotStronglyElliptic(String),
    #[error("weight {0} is not strictly dominant for the compact roots")]
    NotDominant(String),
    #[error("character decomposition did not terminate: {0}")]
    NonTerminating(String),
    #[error("embedding does not map the lattice of G' into the lattice of G: {0}")]
    IncompatibleLattices(String),
    #[error("Blattner multiplicity is negative ({value}) at {at}")]
    NegativeMultiplicity { at: String, value: i64 },
    #[error("asymptotic support is empty: {0}")]
    EmptySupport(String),
    #[error("degenerate cone: {0}")]
    DegenerateCone(String),
    #[error("cone has zero gap against the projection kernel")]
    ZeroGap,
    #[error("restriction is not admissible: witness {0}")]
    NotAdmissiblePair(String),
    #[error("orbit {0} lies outside the certified window")]
    UncertifiedRange(String),
    #[error("unexpected K~-type {ktype}: {reason}")]
    UnexpectedKtype { ktype: String, reason: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable reason tag.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::InvalidCartan(_) => "invalid_cartan",
            Error::InconsistentFlags(_) => "inconsistent_flags",
            Error::InvalidDatum(_) => "invalid_datum",
            Error::NotRegular(_) => "not_regular",
            Error::NotStronglyElliptic(_) => "not_strongly_elliptic",
            Error::NotDominant(_) => "not_dominant",
            Error::NonTerminating(_) => "non_terminating",
            Error::IncompatibleLattices(_) => "incompatible_lattices",
            Error::NegativeMultiplicity { .. } => "negative_multiplicity",
            Error::EmptySupport(_) => "empty_support",
            Error::DegenerateCone(_) => "degenerate_cone",
            Error::ZeroGap => "zero_gap",
            Error::NotAdmissiblePair(_) => "not_admissible_pair",
            Error::UncertifiedRange(_) => "uncertified_range",
            Error::UnexpectedKtype { .. } => "unexpected_ktype",
            Error::Config(_) => "config",
            Error::Parse(_) => "parse",
        }
    }

    /// True for the alarms that signal a convention or implementation fault.
    pub fn is_internal_consistency(&self) -> bool {
        matches!(self, Error::NegativeMultiplicity { .. } | Error::UnexpectedKtype { .. } | Error::ZeroGap)
    }
}
