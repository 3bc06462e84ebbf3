//! Reductions between counting problems: vertex expansion with modular
//! unscaling, planarization, the A-trail instance, and the approximation
//! preserving instance built from shuffle gadgets.

pub mod ap;
pub mod primes;
pub mod atrail;
pub mod crt;
pub mod expand;
pub mod planarize;

pub use ap::{ap_instance, estimate_et, r_factor, ATrailOracle, ApInstance, BruteForceOracle, Estimate, ExactNetworkOracle};
pub use atrail::to_atrail_instance;
pub use crt::{unscale_and_crt, vertex_factor, DegreeProfile, ResiduePair};
pub use expand::{count_et_via_crt, expand_to_4regular, tour_bound, CrtReport, Expansion, Threshold};
pub use planarize::{planarize, Crossing, Planarized};
pub use primes::select_primes;
