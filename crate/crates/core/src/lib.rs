//! Simulator and fluid-limit analyzer for the paired-stub Hamilton cycle
//! strategy in the semi-random graph process.
//!
//! In the semi-random process a uniformly random vertex `v` is presented
//! each round and the builder may add one edge incident to `v`. The
//! strategy here grows a single path, pairs isolated vertices, and keeps
//! "stubedges" from path vertices to non-path vertices in reserve so that
//! a later presentation of a path neighbor can splice the reserved vertex
//! into the path.
//!
//! - [`process`] runs the strategy exactly, one round at a time.
//! - [`closer`] turns a Hamilton path into a Hamilton cycle.
//! - [`ode`] integrates the fluid-limit system and extracts the
//!   completion time `tau*`.
//! - [`verifier`] audits states, enumerates exact one-round expectations,
//!   and checks stubend statistics and final cycles.
//! - [`experiment`] runs seeded multi-trial experiments and writes CSV,
//!   JSON and SVG output.
//!
//! ```
//! use rand::SeedableRng;
//! use semirandom_hc::process::{Config, ProcessState};
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let mut state = ProcessState::new(Config::new(500, 7)).unwrap();
//! state.run_main_phase(&mut rng, 50).unwrap();
//! assert!(state.is_hamilton_path());
//! ```

pub mod closer;
pub mod experiment;
pub mod ode;
pub mod process;
pub mod trajectory;
pub mod verifier;

pub use process::{Config, ProcessState, StopMode};
pub use trajectory::TrajectoryRow;
