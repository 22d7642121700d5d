use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quadrature did not converge: error estimate {estimate:.3e} after {subdivisions} subdivisions")]
    NonConvergence { estimate: f64, subdivisions: usize },

    #[error("no sign change in bracket [{lo}, {hi}]: f(lo)={f_lo:.6e}, f(hi)={f_hi:.6e}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("frequency {omega} rad/ps outside model validity [{lo}, {hi}]")]
    OutOfValidityRange { omega: f64, lo: f64, hi: f64 },

    #[error("γ_s = γ_i = 0: first-order expansion does not apply")]
    DegenerateGammas,

    #[error("γ_s = γ_i: fluorescence bandwidth is infinite")]
    InfiniteBandwidth,

    #[error("Hessian of the phase mismatch vanishes: validity length unbounded")]
    ZeroCurvature,

    #[error("no extended phase-matching solution in bracket: {0}")]
    NoSolutionInBracket(String),

    #[error("τ_θ = 0: the HOM dip is degenerate (rate identically 1)")]
    DegenerateDip,

    #[error("amplitude does not factorize: defect {defect:.3e} exceeds {limit:.3e}")]
    NotFactorizable { defect: f64, limit: f64 },

    #[error("post-selected state is not a Bell state (success probability {success_prob:.6})")]
    NotABellState { success_prob: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
