//! The 3-path and 3-cycle constructions.
//!
//! League X is split into `m` super-teams `S_0..S_{m-1}` of `3d` teams each
//! plus `l` leftover teams; league Y likewise into `T_0..T_{m-1}`. Leftover
//! teams with the same rank form a team-pair. The first `m` time slots each
//! span `6d` days and host one super-game per position; positions `0..l` are
//! "left" super-games that also carry a team-pair. The last slot spans `2l`
//! days and plays the games the left super-games withheld.
//!
//! Slots, positions, super-teams and days are 0-based throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, League};
use crate::schedule::{Game, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Path3,
    Cycle3,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path3" => Ok(Variant::Path3),
            "cycle3" => Ok(Variant::Cycle3),
            other => Err(Error::InvalidParams(format!("unknown variant `{other}`"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Path3 => "path3",
            Variant::Cycle3 => "cycle3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub l: usize,
    pub n_core: usize,
}

impl Params {
    /// Validates `(m, d)` for `n`: `m` odd, `3md <= n` and `n - 3md <= m`.
    pub fn new(n: usize, m: usize, d: usize) -> Result<Params> {
        if m == 0 || m % 2 == 0 {
            return Err(Error::InvalidParams(format!("m = {m} must be odd and positive")));
        }
        if d == 0 {
            return Err(Error::InvalidParams("d must be positive".into()));
        }
        let n_core = 3 * m * d;
        if n_core > n {
            return Err(Error::InvalidParams(format!("3md = {n_core} exceeds n = {n}")));
        }
        let l = n - n_core;
        if l > m {
            return Err(Error::InvalidParams(format!("l = {l} exceeds m = {m}")));
        }
        Ok(Params { n, m, d, l, n_core })
    }

    /// Number of 3-paths per league.
    pub fn paths(&self) -> usize {
        self.m * self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamMode {
    /// `d = 6 * ceil(1 / eps)`, `m = 2 * floor(n / 6d) - 1`.
    Theory(f64),
    /// Largest core, ties broken towards larger `d`.
    Practical,
    Explicit { m: usize, d: usize },
}

pub fn choose_params(n: usize, mode: ParamMode) -> Result<Params> {
    match mode {
        ParamMode::Theory(eps) => {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidParams(format!("epsilon = {eps} must be positive")));
            }
            let d = 6 * (1.0 / eps).ceil() as usize;
            let blocks = n / (6 * d);
            if blocks == 0 {
                return Err(Error::InvalidParams(format!(
                    "n = {n} is too small for d = {d} (needs n >= 6d)"
                )));
            }
            Params::new(n, 2 * blocks - 1, d)
        }
        ParamMode::Explicit { m, d } => Params::new(n, m, d),
        ParamMode::Practical => {
            let mut best: Option<Params> = None;
            for m in (1..=n.max(1)).step_by(2) {
                for d in 1..=n / (3 * m) {
                    if let Ok(p) = Params::new(n, m, d) {
                        let better = match best {
                            None => true,
                            Some(b) => (p.n_core, p.d) > (b.n_core, b.d),
                        };
                        if better {
                            best = Some(p);
                        }
                    }
                }
            }
            best.ok_or(Error::NoFeasibleParams(n))
        }
    }
}

/// Assignment of teams to construction positions.
///
/// Position `p < n_core` of a league lies on 3-path `p / 3` and in super-team
/// `p / 3d`; position `n_core + k` is the league's member of team-pair `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labeling {
    pub x_order: Vec<usize>,
    pub y_order: Vec<usize>,
}

impl Labeling {
    pub fn identity(n: usize) -> Labeling {
        Labeling {
            x_order: (0..n).collect(),
            y_order: (n..2 * n).collect(),
        }
    }

    /// Uniformly random labeling of both leagues.
    pub fn random(n: usize, seed: u64) -> Labeling {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut l = Labeling::identity(n);
        l.x_order.shuffle(&mut rng);
        l.y_order.shuffle(&mut rng);
        l
    }

    pub fn n(&self) -> usize {
        self.x_order.len()
    }

    pub fn order(&self, league: League) -> &[usize] {
        match league {
            League::X => &self.x_order,
            League::Y => &self.y_order,
        }
    }

    pub fn order_mut(&mut self, league: League) -> &mut Vec<usize> {
        match league {
            League::X => &mut self.x_order,
            League::Y => &mut self.y_order,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for (league, order, base) in [(League::X, &self.x_order, 0), (League::Y, &self.y_order, n)] {
            if order.len() != n {
                return Err(Error::SizeMismatch(format!(
                    "league {league:?} labeling has {} teams, expected {n}",
                    order.len()
                )));
            }
            let mut seen = vec![false; n];
            for &t in order {
                if t < base || t >= base + n || std::mem::replace(&mut seen[t - base], true) {
                    return Err(Error::InvalidParams(format!(
                        "league {league:?} labeling is not a permutation"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Teams of super-team `i` in league `league`.
    pub fn super_team(&self, p: &Params, league: League, i: usize) -> &[usize] {
        let size = 3 * p.d;
        &self.order(league)[i * size..(i + 1) * size]
    }

    /// Members `(x, y)` of team-pair `k`.
    pub fn pair(&self, p: &Params, k: usize) -> (usize, usize) {
        (self.x_order[p.n_core + k], self.y_order[p.n_core + k])
    }
}

/// One day's worth of oriented games with no team repeated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DayBlock {
    pub games: Vec<Game>,
}

impl DayBlock {
    pub fn new(games: Vec<Game>) -> Self {
        DayBlock { games }
    }

    pub fn reversed(&self) -> DayBlock {
        DayBlock {
            games: self.games.iter().map(|g| g.reversed()).collect(),
        }
    }

    pub fn oriented(&self, reverse: bool) -> DayBlock {
        if reverse {
            self.reversed()
        } else {
            self.clone()
        }
    }

    pub fn extend(&mut self, other: &DayBlock) {
        self.games.extend_from_slice(&other.games);
    }

    /// Away game of `team` in this block, if any.
    pub fn away_game(&self, team: usize) -> Option<Game> {
        self.games.iter().copied().find(|g| g.away == team)
    }

    pub fn home_game(&self, team: usize) -> Option<Game> {
        self.games.iter().copied().find(|g| g.home == team)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SuperGame {
    /// Index of the X super-team.
    pub s: usize,
    /// Index of the Y super-team.
    pub t: usize,
    /// Team-pair carried by a left super-game.
    pub pair: Option<usize>,
}

/// Super-game pairings per slot. Between consecutive slots the S super-teams
/// shift one position left, the T super-teams two, and team-pairs stay at
/// positions `0..l`.
pub fn supergame_rotation(m: usize, l: usize) -> Result<Vec<Vec<SuperGame>>> {
    if m == 0 || m % 2 == 0 {
        return Err(Error::InvalidParams(format!("m = {m} must be odd")));
    }
    if l > m {
        return Err(Error::InvalidParams(format!("l = {l} exceeds m = {m}")));
    }
    Ok((0..m)
        .map(|r| {
            (0..m)
                .map(|k| SuperGame {
                    s: (k + r) % m,
                    t: (k + 2 * r) % m,
                    pair: (k < l).then_some(k),
                })
                .collect()
        })
        .collect())
}

/// Slot in which `S_i` meets `T_j`.
pub fn meeting_slot(m: usize, i: usize, j: usize) -> usize {
    (j + m - i % m) % m
}

fn check_sides(s_teams: &[usize], t_teams: &[usize], expected: usize) -> Result<()> {
    if s_teams.len() != expected || t_teams.len() != expected {
        return Err(Error::SizeMismatch(format!(
            "expected {expected} teams per side, got {} and {}",
            s_teams.len(),
            t_teams.len()
        )));
    }
    Ok(())
}

/// Normal super-game of the 3-path construction on `6d` days:
/// `s_{3i+i'}` visits `t_{3j+j'}` on day `(6(i+j)+i'+j') mod 6d` and hosts it
/// three days later.
pub fn extend_normal_path(s_teams: &[usize], t_teams: &[usize], d: usize) -> Result<Vec<DayBlock>> {
    check_sides(s_teams, t_teams, 3 * d)?;
    let days = 6 * d;
    let mut blocks = vec![DayBlock::default(); days];
    for i in 0..d {
        for ip in 0..3 {
            for j in 0..d {
                for jp in 0..3 {
                    let s = s_teams[3 * i + ip];
                    let t = t_teams[3 * j + jp];
                    let base = 6 * (i + j) + ip + jp;
                    blocks[base % days].games.push(Game::new(s, t));
                    blocks[(base + 3) % days].games.push(Game::new(t, s));
                }
            }
        }
    }
    Ok(blocks)
}

/// Six days `m_0 m_1 m_2 m̄_0 m̄_1 m̄_2` with `m_i = {s_k -> t_{(k+i) mod 3}}`.
fn cycle_block(s: [usize; 3], t: [usize; 3]) -> [DayBlock; 6] {
    let m = |i: usize| DayBlock::new((0..3).map(|k| Game::new(s[k], t[(k + i) % 3])).collect());
    let (m0, m1, m2) = (m(0), m(1), m(2));
    let (r0, r1, r2) = (m0.reversed(), m1.reversed(), m2.reversed());
    [m0, m1, m2, r0, r1, r2]
}

/// Travel of every team appearing in `blocks`, leaving home before the first
/// day and returning after the last.
pub(crate) fn block_travel(inst: &Instance, teams: &[usize], blocks: &[DayBlock]) -> f64 {
    let mut total = 0.0;
    for &team in teams {
        let mut at = team;
        for b in blocks {
            let loc = b
                .games
                .iter()
                .find(|g| g.away == team || g.home == team)
                .map(|g| g.home)
                .unwrap_or(team);
            total += inst.w(at, loc);
            at = loc;
        }
        total += inst.w(at, team);
    }
    total
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// One 3-vs-3 cycle super-game, relabeled (36 ways) to minimize the six
/// teams' travel. Ties keep the lexicographically smallest relabeling.
fn best_cycle_block(inst: &Instance, s: &[usize], t: &[usize]) -> [DayBlock; 6] {
    let teams: Vec<usize> = s.iter().chain(t).copied().collect();
    let mut best: Option<(f64, [DayBlock; 6])> = None;
    for ps in PERMS3 {
        for pt in PERMS3 {
            let blocks = cycle_block(ps.map(|k| s[k]), pt.map(|k| t[k]));
            let cost = block_travel(inst, &teams, &blocks);
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, blocks));
            }
        }
    }
    best.expect("36 candidates").1
}

/// Normal super-game of the 3-cycle construction. With `d > 1` the `6d` days
/// form `d` sub-slots; sub-slot `j` pairs `SC_i` with `TC_{(i+j) mod d}`.
pub fn extend_normal_cycle(
    s_teams: &[usize],
    t_teams: &[usize],
    d: usize,
    inst: &Instance,
) -> Result<Vec<DayBlock>> {
    check_sides(s_teams, t_teams, 3 * d)?;
    let mut blocks = vec![DayBlock::default(); 6 * d];
    for j in 0..d {
        for i in 0..d {
            let tj = (i + j) % d;
            let sub = best_cycle_block(inst, &s_teams[3 * i..3 * i + 3], &t_teams[3 * tj..3 * tj + 3]);
            for (k, b) in sub.iter().enumerate() {
                blocks[6 * j + k].extend(b);
            }
        }
    }
    Ok(blocks)
}

/// Output of a left super-game extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftExtension {
    pub days: Vec<DayBlock>,
    /// `m_0` restricted to super-team members; its reversal is withheld too.
    pub withheld: DayBlock,
}

/// Day order of a left super-game as `(index i of m_i, reversed?)`.
pub fn left_order(d: usize, variant: Variant) -> Vec<(usize, bool)> {
    if d == 1 {
        return match variant {
            Variant::Path3 => vec![(1, false), (2, false), (3, true), (1, true), (3, false), (2, true)],
            Variant::Cycle3 => vec![(1, false), (2, false), (3, false), (1, true), (2, true), (3, true)],
        };
    }
    let k = 3 * d;
    let first: Vec<(usize, bool)> = (1..=k).map(|i| (i, i % 2 == 0)).collect();
    let second: Vec<(usize, bool)> = if d % 2 == 0 {
        (2..=k).chain(std::iter::once(1)).map(|i| (i, i % 2 == 1)).collect()
    } else {
        (1..=k).map(|i| (i, i % 2 == 1)).collect()
    };
    first.into_iter().chain(second).collect()
}

/// Left super-game between `3d` teams per side plus the team-pair
/// `(pair_x, pair_y)`, using `m_i = {s_k -> t_{(k+i) mod (3d+1)}}`.
pub fn extend_left(
    s_teams: &[usize],
    t_teams: &[usize],
    pair: (usize, usize),
    d: usize,
    variant: Variant,
) -> Result<LeftExtension> {
    check_sides(s_teams, t_teams, 3 * d)?;
    let k = 3 * d + 1;
    let s: Vec<usize> = s_teams.iter().copied().chain(std::iter::once(pair.0)).collect();
    let t: Vec<usize> = t_teams.iter().copied().chain(std::iter::once(pair.1)).collect();
    let m = |i: usize| DayBlock::new((0..k).map(|a| Game::new(s[a], t[(a + i) % k])).collect());
    let days = left_order(d, variant)
        .into_iter()
        .map(|(i, rev)| m(i).oriented(rev))
        .collect();
    let withheld = DayBlock::new((0..3 * d).map(|a| Game::new(s[a], t[a])).collect());
    Ok(LeftExtension { days, withheld })
}

/// `m_0 m̄_1 m_2 m̄_3 ...` over `len` blocks followed by its venue reversal.
fn alternating_pattern(len: usize, start_reversed: bool) -> Vec<(usize, bool)> {
    let first: Vec<(usize, bool)> = (0..len).map(|i| (i, (i % 2 == 1) ^ start_reversed)).collect();
    let second = first.iter().map(|&(i, r)| (i, !r)).collect::<Vec<_>>();
    first.into_iter().chain(second).collect()
}

/// Raw last slot: pair games and withheld super-team games over `2l` days.
/// For `l = 1` this is `m_0 ∪ M_1` then its reversal, which needs
/// [`rotate_fix`].
fn last_slot_blocks(p: &Params, labeling: &Labeling, withheld: &[DayBlock]) -> Vec<DayBlock> {
    let l = p.l;
    if l == 0 {
        return Vec::new();
    }
    let pair_block = |i: usize| {
        DayBlock::new(
            (0..l)
                .map(|a| Game::new(labeling.x_order[p.n_core + a], labeling.y_order[p.n_core + (a + i) % l]))
                .collect(),
        )
    };
    // Pair games use m_0 m̄_1 ...; withheld blocks use M_1 M̄_2 ..., which is
    // the same parity pattern over their 0-based index.
    alternating_pattern(l, false)
        .into_iter()
        .map(|(i, rev)| {
            let mut day = pair_block(i).oriented(rev);
            day.extend(&withheld[i].oriented(rev));
            day
        })
        .collect()
}

/// The `2l` days of the last slot. `withheld[k]` must hold the union `M_{k+1}`
/// of the withheld games of all left super-games at position `k`.
pub fn build_last_slot(p: &Params, labeling: &Labeling, withheld: &[DayBlock]) -> Result<Vec<DayBlock>> {
    if p.l == 1 {
        return Err(Error::InvalidParams(
            "l = 1 needs the rotation fix; use build_schedule".into(),
        ));
    }
    if withheld.len() != p.l {
        return Err(Error::SizeMismatch(format!(
            "expected {} withheld blocks, got {}",
            p.l,
            withheld.len()
        )));
    }
    Ok(last_slot_blocks(p, labeling, withheld))
}

/// Moves the last day to the front.
pub fn rotate_fix(s: &Schedule) -> Schedule {
    let mut out = s.clone();
    out.rotate_last_to_front();
    out
}

/// All `2n` days of the construction as game lists, before any rotation.
pub fn assemble_days(
    inst: &Instance,
    p: &Params,
    labeling: &Labeling,
    variant: Variant,
) -> Result<Vec<DayBlock>> {
    if p.n != inst.n {
        return Err(Error::SizeMismatch(format!(
            "params for n = {} but instance has n = {}",
            p.n, inst.n
        )));
    }
    labeling.validate(inst.n)?;
    let rotation = supergame_rotation(p.m, p.l)?;
    let slot_days = 6 * p.d;
    let mut days = Vec::with_capacity(2 * p.n);
    let mut withheld = vec![DayBlock::default(); p.l];
    for slot in &rotation {
        let mut blocks = vec![DayBlock::default(); slot_days];
        for sg in slot {
            let s = labeling.super_team(p, League::X, sg.s);
            let t = labeling.super_team(p, League::Y, sg.t);
            let games = match sg.pair {
                Some(k) => {
                    let ext = extend_left(s, t, labeling.pair(p, k), p.d, variant)?;
                    withheld[k].extend(&ext.withheld);
                    ext.days
                }
                None => match variant {
                    Variant::Path3 => extend_normal_path(s, t, p.d)?,
                    Variant::Cycle3 => extend_normal_cycle(s, t, p.d, inst)?,
                },
            };
            for (b, g) in blocks.iter_mut().zip(&games) {
                b.extend(g);
            }
        }
        days.extend(blocks);
    }
    days.extend(last_slot_blocks(p, labeling, &withheld));
    Ok(days)
}

/// Builds the full schedule; applies [`rotate_fix`] when `l = 1`.
pub fn build_schedule(inst: &Instance, p: &Params, labeling: &Labeling, variant: Variant) -> Result<Schedule> {
    let days = assemble_days(inst, p, labeling, variant)?;
    let games: Vec<Vec<Game>> = days.into_iter().map(|b| b.games).collect();
    let schedule = Schedule::from_days(p.n, &games)
        .map_err(|e| Error::Internal(format!("construction produced a malformed grid: {e}")))?;
    Ok(if p.l == 1 { rotate_fix(&schedule) } else { schedule })
}
