//! Core selection, cycle packings, 3-path packings and path labelings.
//!
//! Per-vertex costs (`delta`) are slices indexed by global team index; a core
//! team's cost is its total distance to the opposite league's core.

use std::collections::HashSet;

use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use crate::construction::{Labeling, Params};
use crate::error::{Error, Result};
use crate::instance::{Instance, League};

/// Vertex-disjoint cycles, each stored once without repeating its first vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CyclePacking {
    pub cycles: Vec<Vec<usize>>,
}

impl CyclePacking {
    pub fn weight(&self, inst: &Instance) -> f64 {
        self.cycles.iter().map(|c| cycle_weight(inst, c)).sum()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cycles.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn vertex_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PathPacking3 {
    pub paths: Vec<[usize; 3]>,
}

impl PathPacking3 {
    /// Sum of edge weights over all paths.
    pub fn weight(&self, inst: &Instance) -> f64 {
        self.paths.iter().map(|p| path_weight(inst, p)).sum()
    }

    /// Sum of `delta` over path endpoints.
    pub fn terminal_cost(&self, delta: &[f64]) -> f64 {
        self.paths.iter().map(|p| delta[p[0]] + delta[p[2]]).sum()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.paths.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }
}

pub fn cycle_weight(inst: &Instance, cycle: &[usize]) -> f64 {
    let k = cycle.len();
    (0..k).map(|i| inst.w(cycle[i], cycle[(i + 1) % k])).sum()
}

pub fn path_weight(inst: &Instance, path: &[usize; 3]) -> f64 {
    inst.w(path[0], path[1]) + inst.w(path[1], path[2])
}

/// The `n_core` teams of `league` with the largest distance sum to the whole
/// opposite league (ties to the smaller index), and the remaining teams.
/// Both lists are in ascending index order.
pub fn select_core(inst: &Instance, league: League, n_core: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if n_core > inst.n || n_core % 3 != 0 {
        return Err(Error::InvalidParams(format!(
            "core size {n_core} must be a multiple of 3 and at most n = {}",
            inst.n
        )));
    }
    let mut ranked: Vec<(f64, usize)> = inst.league(league).map(|t| (inst.delta_league(t), t)).collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut core: Vec<usize> = ranked[..n_core].iter().map(|&(_, t)| t).collect();
    let mut rest: Vec<usize> = ranked[n_core..].iter().map(|&(_, t)| t).collect();
    core.sort_unstable();
    rest.sort_unstable();
    Ok((core, rest))
}

/// Per-team distance sums: X teams against `core_y`, Y teams against `core_x`.
pub fn opposite_core_costs(inst: &Instance, core_x: &[usize], core_y: &[usize]) -> Vec<f64> {
    (0..inst.size())
        .map(|t| {
            let other = match inst.league_of(t) {
                League::X => core_y,
                League::Y => core_x,
            };
            other.iter().map(|&o| inst.w(t, o)).sum()
        })
        .collect()
}

/// Minimum-weight cover of `vertices` by vertex-disjoint cycles of order at
/// least 3.
///
/// Solved as a perfect matching problem: every vertex gets two port nodes and
/// every edge `ab` a node pair `(A, B)` joined by a zero-cost edge, with `A`
/// linked to both ports of `a` at cost `w(a, b)` and `B` linked to both ports
/// of `b` at cost 0. An edge is in the cover iff `A` and `B` are matched to
/// ports.
pub fn min_cycle_packing(inst: &Instance, vertices: &[usize]) -> Result<CyclePacking> {
    let k = vertices.len();
    if k < 3 {
        return Err(Error::TooFewVertices(k));
    }
    if k == 3 {
        return Ok(CyclePacking {
            cycles: vec![canonical_cycle(vertices.to_vec())],
        });
    }
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    if vs.len() != k {
        return Err(Error::InvalidParams("duplicate vertices in cycle packing input".into()));
    }

    let max_w = vs
        .iter()
        .flat_map(|&a| vs.iter().map(move |&b| (a, b)))
        .map(|(a, b)| inst.w(a, b))
        .fold(0.0f64, f64::max);
    let scale = if max_w > 0.0 { (1u64 << 40) as f64 / max_w } else { 1.0 };
    let to_int = |w: f64| (w * scale).round() as i128;
    let ceiling: i128 = (1i128 << 41) + 1;

    let edges: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let mut g: UnGraph<(), i128> = UnGraph::with_capacity(2 * k + 2 * edges.len(), 5 * edges.len());
    let ports: Vec<[NodeIndex; 2]> = (0..k).map(|_| [g.add_node(()), g.add_node(())]).collect();
    let mut pair_nodes = Vec::with_capacity(edges.len());
    for &(a, b) in &edges {
        let na = g.add_node(());
        let nb = g.add_node(());
        let cost = to_int(inst.w(vs[a], vs[b]));
        g.add_edge(na, nb, ceiling);
        for p in ports[a] {
            g.add_edge(p, na, ceiling - cost);
        }
        for p in ports[b] {
            g.add_edge(nb, p, ceiling);
        }
        pair_nodes.push((na, nb));
    }

    let matching = rustworkx_core::max_weight_matching::max_weight_matching(
        &g,
        true,
        |e| Ok::<i128, std::convert::Infallible>(*e.weight()),
        false,
    )
    .unwrap_or_else(|never| match never {});
    let matched: HashSet<(usize, usize)> = matching
        .into_iter()
        .flat_map(|(u, v)| [(u, v), (v, u)])
        .collect();

    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(2); k];
    for (e, &(a, b)) in edges.iter().enumerate() {
        let (na, nb) = pair_nodes[e];
        if !matched.contains(&(na.index(), nb.index())) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    if adj.iter().any(|n| n.len() != 2) {
        return Err(Error::Internal("matching did not decode to a 2-factor".into()));
    }

    let mut seen = vec![false; k];
    let mut cycles = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut prev = start;
        let mut cur = adj[start][0].min(adj[start][1]);
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        cycles.push(cycle.into_iter().map(|i| vs[i]).collect());
    }
    Ok(CyclePacking { cycles })
}

/// Rotates to the smallest vertex and orients towards its smaller neighbour.
fn canonical_cycle(mut c: Vec<usize>) -> Vec<usize> {
    let pos = (0..c.len()).min_by_key(|&i| c[i]).unwrap_or(0);
    c.rotate_left(pos);
    if c.len() > 2 && c[c.len() - 1] < c[1] {
        c[1..].reverse();
    }
    c
}

/// Keeps 3-cycles; opens every longer cycle at its cheapest edge and joins
/// the resulting paths into one cycle, in input order.
pub fn make_divisible3(c: &CyclePacking, delta: &[f64], n_core: usize, inst: &Instance) -> Result<CyclePacking> {
    let total = c.vertex_count();
    if total % 3 != 0 {
        return Err(Error::NotDivisibleBy3(total));
    }
    let mut cycles = Vec::new();
    let mut joined: Vec<usize> = Vec::new();
    let scale = n_core as f64;
    for cycle in &c.cycles {
        let q = cycle.len();
        if q == 3 {
            cycles.push(cycle.clone());
            continue;
        }
        let score = |i: usize| {
            let (a, b) = (cycle[i], cycle[(i + 1) % q]);
            delta[a] + delta[b] - scale * inst.w(a, b)
        };
        let key = |i: usize| {
            let (a, b) = (cycle[i], cycle[(i + 1) % q]);
            (a.min(b), a.max(b))
        };
        let mut cut = 0;
        for i in 1..q {
            let (si, sc) = (score(i), score(cut));
            if si < sc || (si == sc && key(i) < key(cut)) {
                cut = i;
            }
        }
        joined.extend((1..=q).map(|t| cycle[(cut + t) % q]));
    }
    if !joined.is_empty() {
        cycles.push(joined);
    }
    Ok(CyclePacking { cycles })
}

/// Cuts every cycle into consecutive triples, choosing per cycle the start
/// offset that minimizes endpoint cost plus `n_core` times path weight.
pub fn cycles_to_3paths(c: &CyclePacking, delta: &[f64], n_core: usize, inst: &Instance) -> Result<PathPacking3> {
    let mut paths = Vec::new();
    for cycle in &c.cycles {
        let q = cycle.len();
        if q % 3 != 0 || q == 0 {
            return Err(Error::NotDivisibleBy3(q));
        }
        let cut = |offset: usize| -> Vec<[usize; 3]> {
            (0..q / 3)
                .map(|t| {
                    let s = offset + 3 * t;
                    [cycle[s % q], cycle[(s + 1) % q], cycle[(s + 2) % q]]
                })
                .collect()
        };
        let cost = |ps: &[[usize; 3]]| -> f64 {
            ps.iter()
                .map(|p| delta[p[0]] + delta[p[2]] + n_core as f64 * path_weight(inst, p))
                .sum()
        };
        let mut best = cut(0);
        let mut best_cost = cost(&best);
        for offset in 1..3 {
            let cand = cut(offset);
            let c = cost(&cand);
            if c < best_cost {
                best = cand;
                best_cost = c;
            }
        }
        paths.extend(best);
    }
    Ok(PathPacking3 { paths })
}

/// Everything the labeling step needs for one instance and parameter choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingPlan {
    pub params: Params,
    pub core_x: Vec<usize>,
    pub core_y: Vec<usize>,
    pub leftover_x: Vec<usize>,
    pub leftover_y: Vec<usize>,
    /// Distance of each team to the opposite core.
    pub costs: Vec<f64>,
    pub min_x: CyclePacking,
    pub min_y: CyclePacking,
    pub paths_x: PathPacking3,
    pub paths_y: PathPacking3,
}

impl PackingPlan {
    pub fn new(inst: &Instance, params: &Params) -> Result<PackingPlan> {
        let (core_x, leftover_x) = select_core(inst, League::X, params.n_core)?;
        let (core_y, leftover_y) = select_core(inst, League::Y, params.n_core)?;
        let costs = opposite_core_costs(inst, &core_x, &core_y);
        let (min_x, min_y) = rayon::join(
            || min_cycle_packing(inst, &core_x),
            || min_cycle_packing(inst, &core_y),
        );
        let (min_x, min_y) = (min_x?, min_y?);
        let n_core = params.n_core;
        let paths_x = cycles_to_3paths(&make_divisible3(&min_x, &costs, n_core, inst)?, &costs, n_core, inst)?;
        let paths_y = cycles_to_3paths(&make_divisible3(&min_y, &costs, n_core, inst)?, &costs, n_core, inst)?;
        Ok(PackingPlan {
            params: *params,
            core_x,
            core_y,
            leftover_x,
            leftover_y,
            costs,
            min_x,
            min_y,
            paths_x,
            paths_y,
        })
    }

    pub fn random_labeling(&self, seed: u64) -> Result<Labeling> {
        random_labeling(&self.paths_x, &self.paths_y, &self.leftover_x, &self.leftover_y, &self.params, seed)
    }

    pub fn derandomized_labeling(&self, inst: &Instance) -> Result<Labeling> {
        derandomize_labeling(&self.paths_x, &self.paths_y, &self.leftover_x, &self.leftover_y, &self.params, inst)
    }
}

fn check_labeling_inputs(
    paths_x: &PathPacking3,
    paths_y: &PathPacking3,
    leftover_x: &[usize],
    leftover_y: &[usize],
    p: &Params,
) -> Result<()> {
    let md = p.paths();
    if paths_x.paths.len() != md || paths_y.paths.len() != md {
        return Err(Error::SizeMismatch(format!(
            "expected {md} paths per league, got {} and {}",
            paths_x.paths.len(),
            paths_y.paths.len()
        )));
    }
    if leftover_x.len() != p.l || leftover_y.len() != p.l {
        return Err(Error::SizeMismatch(format!(
            "expected {} leftover teams per league, got {} and {}",
            p.l,
            leftover_x.len(),
            leftover_y.len()
        )));
    }
    Ok(())
}

fn labeling_from_orders(
    paths_x: &PathPacking3,
    paths_y: &PathPacking3,
    order_x: &[usize],
    order_y: &[usize],
    leftover_x: &[usize],
    leftover_y: &[usize],
) -> Labeling {
    let build = |paths: &PathPacking3, order: &[usize], rest: &[usize]| -> Vec<usize> {
        order
            .iter()
            .flat_map(|&i| paths.paths[i])
            .chain(rest.iter().copied())
            .collect()
    };
    Labeling {
        x_order: build(paths_x, order_x, leftover_x),
        y_order: build(paths_y, order_y, leftover_y),
    }
}

/// Uniformly shuffles the path order of each league; path orientation and
/// leftover order are kept as given.
pub fn random_labeling(
    paths_x: &PathPacking3,
    paths_y: &PathPacking3,
    leftover_x: &[usize],
    leftover_y: &[usize],
    p: &Params,
    seed: u64,
) -> Result<Labeling> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    check_labeling_inputs(paths_x, paths_y, leftover_x, leftover_y, p)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut order_x: Vec<usize> = (0..p.paths()).collect();
    let mut order_y: Vec<usize> = (0..p.paths()).collect();
    order_x.shuffle(&mut rng);
    order_y.shuffle(&mut rng);
    Ok(labeling_from_orders(paths_x, paths_y, &order_x, &order_y, leftover_x, leftover_y))
}

/// Whether super-teams `S_a` and `T_b` meet in a left super-game.
fn is_left(p: &Params, a: usize, b: usize) -> bool {
    let m = p.m;
    let slot = (b + m - a) % m;
    let position = (a + m - slot) % m;
    position < p.l
}

/// Closed walk `from -> path[0] -> path[1] -> path[2] -> from`.
fn loop_cost(inst: &Instance, from: usize, path: &[usize]) -> f64 {
    inst.w(from, path[0]) + inst.w(path[0], path[1]) + inst.w(path[1], path[2]) + inst.w(path[2], from)
}

fn round_trips(inst: &Instance, from: usize, to: &[usize]) -> f64 {
    to.iter().map(|&t| 2.0 * inst.w(from, t)).sum()
}

/// Charge of one super-game between X path `px` at path slot `slot_x` and Y
/// path `py` at path slot `slot_y`, under the home-return accounting.
fn pair_charge(inst: &Instance, p: &Params, px: &[usize], slot_x: usize, py: &[usize], slot_y: usize) -> f64 {
    let d = p.d;
    let (a, i) = (slot_x / d, slot_x % d);
    let (b, j) = (slot_y / d, slot_y % d);
    if is_left(p, a, b) {
        return 4.0 * px.iter().map(|&x| py.iter().map(|&y| inst.w(x, y)).sum::<f64>()).sum::<f64>();
    }
    let mut total: f64 = px.iter().map(|&x| loop_cost(inst, x, py)).sum();
    for (jp, &y) in py.iter().enumerate() {
        total += if jp >= 1 && i == d - 1 - j {
            round_trips(inst, y, px)
        } else {
            loop_cost(inst, y, px)
        };
    }
    total
}

/// Labeling-independent part: every game involving a leftover team is a
/// home-return round trip for both sides.
fn leftover_charge(inst: &Instance, leftover_x: &[usize], leftover_y: &[usize]) -> f64 {
    let lx: f64 = leftover_x.iter().map(|&x| 2.0 * inst.delta_league(x)).sum();
    let ly: f64 = leftover_y.iter().map(|&y| 2.0 * inst.delta_league(y)).sum();
    let is_left_y: HashSet<usize> = leftover_y.iter().copied().collect();
    let is_left_x: HashSet<usize> = leftover_x.iter().copied().collect();
    let core_vs_left: f64 = inst
        .league(League::X)
        .filter(|x| !is_left_x.contains(x))
        .map(|x| round_trips(inst, x, leftover_y))
        .sum::<f64>()
        + inst
            .league(League::Y)
            .filter(|y| !is_left_y.contains(y))
            .map(|y| round_trips(inst, y, leftover_x))
            .sum::<f64>();
    lx + ly + core_vs_left
}

/// Upper bound on the 3-path construction's total distance for `labeling`,
/// obtained by sending teams home before and after every game of left
/// super-games and the last slot, around every normal super-game, and
/// between the two halves of any path trip split by the block boundary.
pub fn surrogate_weight(inst: &Instance, p: &Params, labeling: &Labeling) -> f64 {
    let x = &labeling.x_order;
    let y = &labeling.y_order;
    let core = p.n_core;
    let mut total = leftover_charge(inst, &x[core..], &y[core..]);
    for sx in 0..p.paths() {
        for sy in 0..p.paths() {
            total += pair_charge(inst, p, &x[3 * sx..3 * sx + 3], sx, &y[3 * sy..3 * sy + 3], sy);
        }
    }
    total
}

/// Mean of [`surrogate_weight`] over uniformly random path orders.
pub fn expected_surrogate_weight(
    inst: &Instance,
    p: &Params,
    paths_x: &PathPacking3,
    paths_y: &PathPacking3,
    leftover_x: &[usize],
    leftover_y: &[usize],
) -> Result<f64> {
    check_labeling_inputs(paths_x, paths_y, leftover_x, leftover_y, p)?;
    let md = p.paths();
    let mut total = 0.0;
    for sx in 0..md {
        for sy in 0..md {
            for px in &paths_x.paths {
                for py in &paths_y.paths {
                    total += pair_charge(inst, p, px, sx, py, sy);
                }
            }
        }
    }
    Ok(leftover_charge(inst, leftover_x, leftover_y) + total / (md * md) as f64)
}

/// Greedy assignment of items to slots by conditional expectation: slot `s`
/// takes the remaining item minimizing its own cost plus the mean cost of
/// filling later slots uniformly from what is left. Ties go to the smaller
/// item index.
fn assign_by_conditional_expectation(cost: &[Vec<f64>]) -> Vec<usize> {
    let k = cost.len();
    let mut remaining: Vec<usize> = (0..k).collect();
    let mut order = Vec::with_capacity(k);
    for slot in 0..k {
        let r = remaining.len();
        let col: Vec<f64> = (slot + 1..k)
            .map(|s| remaining.iter().map(|&it| cost[it][s]).sum())
            .collect();
        let mut best = (f64::INFINITY, usize::MAX);
        for (pos, &it) in remaining.iter().enumerate() {
            let mut v = cost[it][slot];
            if r > 1 {
                for (c, s) in col.iter().zip(slot + 1..k) {
                    v += (c - cost[it][s]) / (r - 1) as f64;
                }
            }
            if v < best.0 {
                best = (v, pos);
            }
        }
        order.push(remaining.remove(best.1));
    }
    order
}

/// Deterministic labeling by the method of conditional expectations on
/// [`surrogate_weight`]: X path slots first, then Y path slots with X fixed.
pub fn derandomize_labeling(
    paths_x: &PathPacking3,
    paths_y: &PathPacking3,
    leftover_x: &[usize],
    leftover_y: &[usize],
    p: &Params,
    inst: &Instance,
) -> Result<Labeling> {
    check_labeling_inputs(paths_x, paths_y, leftover_x, leftover_y, p)?;
    let md = p.paths();
    let x_cost: Vec<Vec<f64>> = paths_x
        .paths
        .iter()
        .map(|px| {
            (0..md)
                .map(|sx| {
                    let mut s = 0.0;
                    for sy in 0..md {
                        for py in &paths_y.paths {
                            s += pair_charge(inst, p, px, sx, py, sy);
                        }
                    }
                    s / md as f64
                })
                .collect()
        })
        .collect();
    let order_x = assign_by_conditional_expectation(&x_cost);
    let y_cost: Vec<Vec<f64>> = paths_y
        .paths
        .iter()
        .map(|py| {
            (0..md)
                .map(|sy| {
                    order_x
                        .iter()
                        .enumerate()
                        .map(|(sx, &ix)| pair_charge(inst, p, &paths_x.paths[ix], sx, py, sy))
                        .sum()
                })
                .collect()
        })
        .collect();
    let order_y = assign_by_conditional_expectation(&y_cost);
    Ok(labeling_from_orders(paths_x, paths_y, &order_x, &order_y, leftover_x, leftover_y))
}
