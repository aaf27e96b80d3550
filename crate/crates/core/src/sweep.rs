//! Batch evaluation over independent parameter sets, data-parallel when the
//! `parallel` feature is enabled. Results are always returned in input order
//! and do not depend on the execution mode.

use crate::error::Result;
use crate::integrate::integrate_ivp;
use crate::params::{CapillaryParams, IvpConfig};
use crate::profile::DropProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential execution without the `parallel` feature.
    #[default]
    Parallel,
}

/// `items.iter().map(f)`, distributed over the rayon pool for
/// [`Execution::Parallel`].
pub fn map<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Like [`map`] for fallible `f`; the first error in input order wins.
pub fn try_map<T, U, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    map(exec, items, f).into_iter().collect()
}

/// Profiles `u(r; u0)` on `[0, r_max]` for every apex height in `u0s`.
pub fn foliate(
    kappa: f64,
    u0s: &[f64],
    r_max: f64,
    cfg: &IvpConfig,
    exec: Execution,
) -> Result<Vec<DropProfile>> {
    let params = CapillaryParams::with_kappa(kappa)?;
    try_map(exec, u0s, |&u0| integrate_ivp(&params, u0, r_max, cfg))
}
