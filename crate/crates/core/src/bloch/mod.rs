//! Four-level optical Bloch equations: Hamiltonian, relaxation, steady states
//! and convective trajectories through the evanescent region.

pub mod density;
pub mod equations;
pub mod hamiltonian;
pub mod propagate;
pub mod relaxation;
pub mod steady;
pub mod trajectory;

pub use density::{DensityMatrix, Matrix4, E3, E4, G1, G2};
pub use equations::{obe_rhs, FieldProfile, Liouvillian};
pub use hamiltonian::{build_interaction, LocalHamiltonian};
pub use propagate::{propagate_time, propagate_time_with, InvariantStats};
pub use relaxation::lindblad_relaxation;
pub use steady::{local_steady_state, stationary_or_thermal, stationary_state};
pub use trajectory::{integrate_trajectory, Regime, TrajectoryDiagnostics, TrajectoryResult, TrajectorySolver};
