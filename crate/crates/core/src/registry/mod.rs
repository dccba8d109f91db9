//! Catalog of congruence checks and the runner that evaluates them prime by prime.
//!
//! A check pairs a left-hand recipe (usually a sum) with a right-hand recipe
//! (usually a closed form), both evaluated in `Z/p^k Z` through a shared [`Ctx`].

mod catalog;
mod context;

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use catalog::{catalog, CatalogConfig};
pub use context::Ctx;

use crate::error::{Error, Result};
use crate::residue::Residue;

pub type SideFn = Arc<dyn Fn(&Ctx) -> Result<Residue> + Send + Sync>;
pub type JointFn = Arc<dyn Fn(&Ctx) -> Result<(Residue, Residue)> + Send + Sync>;

#[derive(Clone)]
pub enum Recipe {
    Pair {
        lhs: SideFn,
        rhs: SideFn,
    },
    /// Both sides from one computation (e.g. polynomial identities).
    Joint(JointFn),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precondition {
    AtLeast(u64),
    Exactly(u64),
}

impl Precondition {
    pub fn holds(self, p: u64) -> bool {
        match self {
            Precondition::AtLeast(lo) => p >= lo,
            Precondition::Exactly(q) => p == q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Pass,
    /// `lhs - rhs ≡ delta (mod p^k)` at this prime is the documented outcome.
    KnownFail {
        p: u64,
        delta: i64,
    },
}

#[derive(Clone)]
pub struct CongruenceCheck {
    pub id: String,
    pub params: Vec<i64>,
    pub precondition: Precondition,
    pub power: u32,
    pub recipe: Recipe,
    pub expect: Expect,
}

impl fmt::Debug for CongruenceCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CongruenceCheck")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("precondition", &self.precondition)
            .field("power", &self.power)
            .field("expect", &self.expect)
            .finish()
    }
}

impl CongruenceCheck {
    pub fn pair(
        id: impl Into<String>,
        params: Vec<i64>,
        min_p: u64,
        power: u32,
        lhs: impl Fn(&Ctx) -> Result<Residue> + Send + Sync + 'static,
        rhs: impl Fn(&Ctx) -> Result<Residue> + Send + Sync + 'static,
    ) -> Self {
        CongruenceCheck {
            id: id.into(),
            params,
            precondition: Precondition::AtLeast(min_p),
            power,
            recipe: Recipe::Pair {
                lhs: Arc::new(lhs),
                rhs: Arc::new(rhs),
            },
            expect: Expect::Pass,
        }
    }

    pub fn joint(
        id: impl Into<String>,
        params: Vec<i64>,
        min_p: u64,
        power: u32,
        f: impl Fn(&Ctx) -> Result<(Residue, Residue)> + Send + Sync + 'static,
    ) -> Self {
        CongruenceCheck {
            id: id.into(),
            params,
            precondition: Precondition::AtLeast(min_p),
            power,
            recipe: Recipe::Joint(Arc::new(f)),
            expect: Expect::Pass,
        }
    }

    pub fn only_at(mut self, p: u64) -> Self {
        self.precondition = Precondition::Exactly(p);
        self
    }

    pub fn expect(mut self, e: Expect) -> Self {
        self.expect = e;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    pub p: u64,
    pub k: u32,
    pub lhs: Option<Residue>,
    pub rhs: Option<Residue>,
    pub status: Status,
    pub elapsed_us: u64,
    /// Error text when a side could not be evaluated.
    pub detail: Option<String>,
}

/// Lazily built contexts for one prime, one per modulus power.
pub struct PrimeContexts {
    p: u64,
    ctxs: Vec<Option<Ctx>>,
}

impl PrimeContexts {
    pub fn new(p: u64) -> Self {
        PrimeContexts {
            p,
            ctxs: Vec::new(),
        }
    }

    pub fn get(&mut self, k: u32) -> Result<&Ctx> {
        let i = k as usize;
        if self.ctxs.len() <= i {
            self.ctxs.resize_with(i + 1, || None);
        }
        if self.ctxs[i].is_none() {
            self.ctxs[i] = Some(Ctx::new(self.p, k)?);
        }
        Ok(self.ctxs[i].as_ref().expect("just built"))
    }
}

fn evaluate(check: &CongruenceCheck, ctx: &Ctx) -> Result<(Residue, Residue)> {
    match &check.recipe {
        Recipe::Pair { lhs, rhs } => Ok((lhs(ctx)?, rhs(ctx)?)),
        Recipe::Joint(f) => f(ctx),
    }
}

/// Runs one check at `p`, with the modulus power capped by `power_cap`.
pub fn run_check_in(
    check: &CongruenceCheck,
    pool: &mut PrimeContexts,
    power_cap: Option<u32>,
) -> CheckResult {
    let p = pool.p;
    let k = power_cap.map_or(check.power, |c| check.power.min(c.max(1)));
    let mut result = CheckResult {
        id: check.id.clone(),
        p,
        k,
        lhs: None,
        rhs: None,
        status: Status::Skipped,
        elapsed_us: 0,
        detail: None,
    };
    if !check.precondition.holds(p) {
        return result;
    }
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| -> Result<(Residue, Residue)> {
        let ctx = pool.get(k)?;
        evaluate(check, ctx)
    }))
    .unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Error::InvalidArgument(format!("check panicked: {msg}")))
    });
    result.elapsed_us = start.elapsed().as_micros() as u64;
    match outcome {
        Ok((lhs, mut rhs)) => {
            if let Expect::KnownFail { p: kp, delta } = check.expect {
                if kp == p {
                    rhs += Residue::new(delta, p, k).expect("ring already built");
                }
            }
            result.status = if lhs == rhs {
                Status::Pass
            } else {
                Status::Fail
            };
            result.lhs = Some(lhs);
            result.rhs = Some(rhs);
        }
        Err(e) => {
            result.status = Status::Fail;
            result.detail = Some(e.to_string());
        }
    }
    result
}

pub fn run_check(check: &CongruenceCheck, p: u64) -> CheckResult {
    run_check_in(check, &mut PrimeContexts::new(p), None)
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub jobs: usize,
    pub power_cap: Option<u32>,
    pub timing: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            jobs: 1,
            power_cap: None,
            timing: true,
        }
    }
}

/// Every check at every prime, parallel over primes, sorted by `(id, p)`.
pub fn run_sweep(
    checks: &[CongruenceCheck],
    primes: &[u64],
    opts: SweepOptions,
) -> Result<Vec<CheckResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let mut results: Vec<CheckResult> = pool.install(|| {
        primes
            .par_iter()
            .flat_map_iter(|&p| {
                let mut ctxs = PrimeContexts::new(p);
                checks
                    .iter()
                    .map(|c| run_check_in(c, &mut ctxs, opts.power_cap))
                    .collect::<Vec<_>>()
            })
            .collect()
    });
    if !opts.timing {
        for r in &mut results {
            r.elapsed_us = 0;
        }
    }
    results.sort_by(|a, b| a.id.cmp(&b.id).then(a.p.cmp(&b.p)));
    Ok(results)
}
