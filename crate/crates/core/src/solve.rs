//! End-to-end solving: parameters, random labelings, local search, and a
//! best-of-seeds reduction.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{gap_report, ilb_total, ILB_MAX_N};
use crate::construction::{build_schedule, choose_params, Labeling, ParamMode, Params, Variant};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::localsearch::{labeling_weight, swap_improve, SearchConfig};
use crate::schedule::{validate_schedule, Schedule};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub variant: Variant,
    pub mode: ParamMode,
    pub seed: u64,
    /// Independent runs with seeds `seed, seed + 1, ...`.
    pub seeds: usize,
    pub local_search: bool,
    pub max_passes: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            variant: Variant::Cycle3,
            mode: ParamMode::Practical,
            seed: 0,
            seeds: 1,
            local_search: true,
            max_passes: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub m: usize,
    pub d: usize,
    pub l: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub variant: Variant,
    pub params: ParamSummary,
    pub seed: u64,
    pub weight: f64,
    /// `None` when the instance is too large for the independent lower bound.
    pub gap_vs_ilb: Option<f64>,
    pub passes: usize,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub report: SolveReport,
    pub labeling: Labeling,
    pub schedule: Schedule,
}

struct Run {
    seed: u64,
    labeling: Labeling,
    weight: f64,
    passes: usize,
}

fn run_seed(inst: &Instance, p: &Params, cfg: &SolveConfig, seed: u64) -> Result<Run> {
    let start = Labeling::random(inst.n, seed);
    if !cfg.local_search {
        let weight = labeling_weight(inst, p, &start, cfg.variant)?;
        return Ok(Run { seed, labeling: start, weight, passes: 0 });
    }
    let search = SearchConfig {
        seed,
        max_passes: cfg.max_passes,
        variant: cfg.variant,
    };
    let out = swap_improve(inst, p, &start, &search)?;
    Ok(Run {
        seed,
        labeling: out.labeling,
        weight: out.weight,
        passes: out.passes,
    })
}

pub fn solve(inst: &Instance, cfg: &SolveConfig) -> Result<Solution> {
    let started = Instant::now();
    let p = choose_params(inst.n, cfg.mode)?;
    let seeds: Vec<u64> = (0..cfg.seeds.max(1) as u64).map(|i| cfg.seed.wrapping_add(i)).collect();
    let runs = seeds
        .par_iter()
        .map(|&s| run_seed(inst, &p, cfg, s))
        .collect::<Result<Vec<_>>>()?;
    let best = runs
        .into_iter()
        .min_by(|a, b| a.weight.total_cmp(&b.weight).then(a.seed.cmp(&b.seed)))
        .expect("at least one seed");
    let schedule = build_schedule(inst, &p, &best.labeling, cfg.variant)?;
    let violations = validate_schedule(&schedule);
    if let Some(v) = violations.first() {
        return Err(Error::Internal(format!(
            "constructed schedule has {} violations, first: {v}",
            violations.len()
        )));
    }
    let gap_vs_ilb = if inst.n <= ILB_MAX_N {
        gap_report(best.weight, ilb_total(inst)?).ok()
    } else {
        None
    };
    let report = SolveReport {
        variant: cfg.variant,
        params: ParamSummary { m: p.m, d: p.d, l: p.l },
        seed: best.seed,
        weight: best.weight,
        gap_vs_ilb,
        passes: best.passes,
        runtime_ms: started.elapsed().as_millis() as u64,
    };
    Ok(Solution {
        report,
        labeling: best.labeling,
        schedule,
    })
}
