use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no basis state has {sector} total excitations in this network")]
    EmptySpace { sector: usize },
    #[error("basis state is not part of excitation sector {sector}")]
    NotInSector { sector: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("hop between cavities {0} and {1} is listed twice")]
    DuplicateHop(usize, usize),
    #[error("value {value} outside domain: {what}")]
    Domain { what: &'static str, value: f64 },
    #[error("operator is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("norm drifted by {drift:e} (tolerance {tolerance:e}); decrease the step")]
    NormDrift { drift: f64, tolerance: f64 },
    #[error("norm increased by {0:e}; effective Hamiltonian must only remove probability")]
    NormIncrease(f64),
    #[error("pulse windows overlap: {0}")]
    Overlap(String),
    #[error("emission density became negative ({0:e}); refine the time grid")]
    GridResolution(f64),
    #[error("empty sample set")]
    EmptySamples,
    #[error("pairing is not a perfect matching of {0} atoms")]
    BadPairing(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
