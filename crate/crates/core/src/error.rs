use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("SubcriticalAngle: incidence angle {theta_deg:.4} deg does not exceed the critical angle {critical_deg:.4} deg; the probe is not evanescent")]
    SubcriticalAngle { theta_deg: f64, critical_deg: f64 },

    #[error("StepSizeUnderflow: integrator could not meet tolerance at t = {t:.6e} s (step {step:.3e} s after {steps} steps)")]
    StepSizeUnderflow { t: f64, step: f64, steps: usize },

    #[error("SingularSystem: steady-state equations have a {nullity}-dimensional null space")]
    SingularSystem { nullity: usize },

    #[error("NonConvergedQuadrature: doubling the quadrature orders changed chi by a relative {change:.3e} (threshold {threshold:.3e})")]
    NonConvergedQuadrature { change: f64, threshold: f64 },

    #[error("NoDipFound: pump-off depth {depth:.3e} is below ten times the baseline noise {noise:.3e}")]
    NoDipFound { depth: f64, noise: f64 },

    #[error("InvariantViolation: {0}")]
    InvariantViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("at probe detuning {detuning_hz:.6e} Hz: {source}")]
    AtDetuning {
        detuning_hz: f64,
        #[source]
        source: Box<SimError>,
    },
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
