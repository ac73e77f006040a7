//! Weighted self-normalized martingale concentration bounds.
//!
//! The crate is split into four layers:
//!
//! * [`bounds`]: closed-form weight functions, tail bounds, baselines and
//!   the pointwise inequalities they rest on.
//! * [`martingale`]: path bookkeeping for `M_n`, `[M]_n`, `<M>_n`, the
//!   weighted normalization `S_n(a)` and the supermartingale `V_n(t)`.
//! * [`processes`]: exact simulators for the autoregressive, IDLA and
//!   online-learning processes, each exposing its martingale decomposition.
//! * [`montecarlo`]: replicated estimation of tail events and expectations
//!   with Hoeffding confidence intervals, and bound-vs-empirical tables.

pub mod bounds;
pub mod martingale;
pub mod montecarlo;
pub mod processes;
pub mod rng;
pub mod sum;

pub use bounds::{BoundsError, HolderPair, WeightParam};
pub use martingale::{MartingaleError, MartingalePath};
pub use montecarlo::{BoundRow, ExpectationEstimate, MCEstimate, McError};
pub use processes::{ProcessSpec, ProcessTrace};
pub use rng::StreamKey;
