//! Lower bounds on the optimal schedule weight.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{choose_params, ParamMode, Params};
use crate::error::{Error, Result};
use crate::instance::{Instance, League};
use crate::packing::{min_cycle_packing, select_core};

/// Largest league size for which the per-team subset DP is attempted.
pub const ILB_MAX_N: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub ilb_total: f64,
    pub ilb_per_team: Vec<f64>,
    pub lb_lemma1: f64,
    pub lb_lemma2: f64,
    pub best_lb: f64,
}

impl BoundsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Cheapest closed walk from `v` through `trip` (1 to 3 venues).
pub fn trip_cost(inst: &Instance, v: usize, trip: &[usize]) -> f64 {
    let w = |a, b| inst.w(a, b);
    match *trip {
        [a] => 2.0 * w(v, a),
        [a, b] => w(v, a) + w(a, b) + w(b, v),
        [a, b, c] => {
            let abc = w(v, a) + w(a, b) + w(b, c) + w(c, v);
            let acb = w(v, a) + w(a, c) + w(c, b) + w(b, v);
            let bac = w(v, b) + w(b, a) + w(a, c) + w(c, v);
            abc.min(acb).min(bac)
        }
        _ => panic!("trips visit 1 to 3 venues"),
    }
}

/// Minimum travel of team `v` alone: the opposite league split into trips of
/// at most three venues. Subset DP that always extends the trip containing
/// the lowest-indexed opponent not yet served.
pub fn ilb_team(inst: &Instance, v: usize) -> Result<f64> {
    if v >= inst.size() {
        return Err(Error::TeamOutOfRange(v));
    }
    if inst.n > ILB_MAX_N {
        return Err(Error::TooLarge(inst.n));
    }
    let opp: Vec<usize> = inst.league(inst.league_of(v).opposite()).collect();
    let k = opp.len();
    let full = (1usize << k) - 1;
    let mut dp = vec![f64::INFINITY; 1 << k];
    dp[0] = 0.0;
    for mask in 0..full {
        let base = dp[mask];
        if base.is_infinite() {
            continue;
        }
        let i = (!mask).trailing_zeros() as usize;
        let a = opp[i];
        let m1 = mask | 1 << i;
        relax(&mut dp[m1], base + trip_cost(inst, v, &[a]));
        for j in i + 1..k {
            if mask >> j & 1 == 1 {
                continue;
            }
            let m2 = m1 | 1 << j;
            relax(&mut dp[m2], base + trip_cost(inst, v, &[a, opp[j]]));
            for l in j + 1..k {
                if mask >> l & 1 == 0 {
                    relax(&mut dp[m2 | 1 << l], base + trip_cost(inst, v, &[a, opp[j], opp[l]]));
                }
            }
        }
    }
    Ok(dp[full])
}

fn relax(slot: &mut f64, value: f64) {
    if value < *slot {
        *slot = value;
    }
}

/// Per-team values for all `2n` teams, computed in parallel.
pub fn ilb_per_team(inst: &Instance) -> Result<Vec<f64>> {
    (0..inst.size()).into_par_iter().map(|v| ilb_team(inst, v)).collect()
}

pub fn ilb_total(inst: &Instance) -> Result<f64> {
    Ok(ilb_per_team(inst)?.iter().sum())
}

/// `(4/3)` times the total inter-league distance.
pub fn lb_lemma1(inst: &Instance) -> f64 {
    4.0 / 3.0 * inst.cross_total()
}

/// Cycle-packing bound on cores of size `n_core` (a positive multiple of 3).
pub fn lb_lemma2(inst: &Instance, n_core: usize) -> Result<f64> {
    let (core_x, _) = select_core(inst, League::X, n_core)?;
    let (core_y, _) = select_core(inst, League::Y, n_core)?;
    let cross: f64 = core_x
        .iter()
        .map(|&x| core_y.iter().map(|&y| inst.w(x, y)).sum::<f64>())
        .sum();
    let cx = min_cycle_packing(inst, &core_x)?.weight(inst);
    let cy = min_cycle_packing(inst, &core_y)?.weight(inst);
    let nc = n_core as f64;
    Ok(2.0 / 3.0 * (2.0 * cross + 0.5 * nc * cx + 0.5 * nc * cy))
}

/// Core size used for reporting: the practical parameters' core, or the
/// largest multiple of 3 not above `n` when no parameters exist.
pub fn report_core_size(n: usize) -> usize {
    match choose_params(n, ParamMode::Practical) {
        Ok(p) => p.n_core,
        Err(_) => n / 3 * 3,
    }
}

/// All bounds, using the core of `params` for the cycle-packing bound.
pub fn lower_bounds(inst: &Instance, params: &Params) -> Result<BoundsReport> {
    if params.n != inst.n {
        return Err(Error::SizeMismatch(format!(
            "params for n = {} but instance has n = {}",
            params.n, inst.n
        )));
    }
    report_with_core(inst, params.n_core)
}

/// All bounds with the reporting core size for this instance.
pub fn bounds_report(inst: &Instance) -> Result<BoundsReport> {
    report_with_core(inst, report_core_size(inst.n))
}

fn report_with_core(inst: &Instance, n_core: usize) -> Result<BoundsReport> {
    let ilb_per_team = ilb_per_team(inst)?;
    let ilb_total = ilb_per_team.iter().sum();
    let lb_lemma1 = lb_lemma1(inst);
    let lb_lemma2 = if n_core >= 3 { lb_lemma2(inst, n_core)? } else { 0.0 };
    Ok(BoundsReport {
        ilb_total,
        ilb_per_team,
        lb_lemma1,
        lb_lemma2,
        best_lb: f64::max(ilb_total, lb_lemma1.max(lb_lemma2)),
    })
}

/// Relative gap of `result` above `ilb`.
pub fn gap_report(result: f64, ilb: f64) -> Result<f64> {
    if ilb == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok((result - ilb) / ilb)
}

struct Search<'a> {
    inst: &'a Instance,
    n: usize,
    /// Per day option: `(x, y, x_home)` for every X team.
    options: Vec<Vec<(usize, usize, bool)>>,
    remaining: Vec<bool>,
    last_opp: Vec<usize>,
    run: Vec<(bool, usize)>,
    loc: Vec<usize>,
    best: f64,
}

impl Search<'_> {
    fn game_index(&self, x: usize, y: usize, x_home: bool) -> usize {
        (x * self.n + (y - self.n)) * 2 + x_home as usize
    }

    fn home_return(&self) -> f64 {
        self.loc.iter().enumerate().map(|(t, &l)| self.inst.w(l, t)).sum()
    }

    fn dfs(&mut self, day: usize, cost: f64) {
        if cost + self.home_return() >= self.best {
            return;
        }
        if day == 2 * self.n {
            self.best = cost + self.home_return();
            return;
        }
        for o in 0..self.options.len() {
            let games = self.options[o].clone();
            let ok = games.iter().all(|&(x, y, xh)| {
                self.remaining[self.game_index(x, y, xh)]
                    && self.last_opp[x] != y
                    && !(self.run[x].0 == xh && self.run[x].1 == 3)
                    && !(self.run[y].0 == !xh && self.run[y].1 == 3)
            });
            if !ok {
                continue;
            }
            let saved = (self.last_opp.clone(), self.run.clone(), self.loc.clone());
            let mut add = 0.0;
            for &(x, y, xh) in &games {
                let gi = self.game_index(x, y, xh);
                self.remaining[gi] = false;
                self.last_opp[x] = y;
                self.last_opp[y] = x;
                let venue = if xh { x } else { y };
                for (team, home) in [(x, xh), (y, !xh)] {
                    add += self.inst.w(self.loc[team], venue);
                    self.loc[team] = venue;
                    self.run[team] = if self.run[team].0 == home && self.run[team].1 > 0 {
                        (home, self.run[team].1 + 1)
                    } else {
                        (home, 1)
                    };
                }
            }
            self.dfs(day + 1, cost + add);
            for &(x, y, xh) in &games {
                let gi = self.game_index(x, y, xh);
                self.remaining[gi] = true;
            }
            (self.last_opp, self.run, self.loc) = saved;
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Optimal schedule weight by exhaustive day-by-day search with pruning.
/// Only for `n <= 3`.
pub fn exact_opt_tiny(inst: &Instance) -> Result<f64> {
    let n = inst.n;
    if n > 3 {
        return Err(Error::TooLarge(n));
    }
    let mut options = Vec::new();
    for perm in permutations(n) {
        for mask in 0..1usize << n {
            options.push((0..n).map(|x| (x, n + perm[x], mask >> x & 1 == 1)).collect());
        }
    }
    let mut search = Search {
        inst,
        n,
        options,
        remaining: vec![true; 2 * n * n],
        last_opp: vec![usize::MAX; 2 * n],
        run: vec![(false, 0); 2 * n],
        loc: (0..2 * n).collect(),
        best: f64::INFINITY,
    };
    search.dfs(0, 0.0);
    if search.best.is_infinite() {
        return Err(Error::Infeasible(n));
    }
    Ok(search.best)
}
