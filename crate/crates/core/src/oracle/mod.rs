//! Ground truth that shares no code with the solver: certificate checking,
//! exhaustive factor search and exhaustive instance enumeration.

mod brute;
mod enumerate;
mod exhaustive;
mod verify;

pub use brute::{brute_force_two_factor, hamiltonian_subset_dp, BRUTE_FORCE_MAX_VERTICES};
pub use enumerate::{count_labeled, enumerate_instances, EXHAUSTIVE_MAX_K};
pub use exhaustive::{run_exhaustive, EnumerationReport, ExhaustiveOptions, InstanceStatus};
pub use verify::{verify_two_factor, Violation};
