//! Schedules, the feasibility validator and the travel objective.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Maximum length of a home stand or road trip.
pub const MAX_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Venue {
    Home,
    Away,
}

impl Venue {
    pub fn flip(self) -> Venue {
        match self {
            Venue::Home => Venue::Away,
            Venue::Away => Venue::Home,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub opponent: usize,
    pub venue: Venue,
}

/// An oriented game: `away` travels to the home of `home`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Game {
    pub away: usize,
    pub home: usize,
}

impl Game {
    pub fn new(away: usize, home: usize) -> Self {
        Game { away, home }
    }

    pub fn reversed(self) -> Game {
        Game {
            away: self.home,
            home: self.away,
        }
    }
}

/// Day-by-team grid over `2n` days.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    grid: Vec<Vec<Entry>>,
}

impl Schedule {
    pub fn new(n: usize, grid: Vec<Vec<Entry>>) -> Result<Schedule> {
        let size = 2 * n;
        if grid.len() != size {
            return Err(Error::Shape(format!("expected {size} days, found {}", grid.len())));
        }
        for (day, row) in grid.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Shape(format!(
                    "day {day}: expected {size} entries, found {}",
                    row.len()
                )));
            }
            if let Some(e) = row.iter().find(|e| e.opponent >= size) {
                return Err(Error::Shape(format!(
                    "day {day}: opponent {} out of range",
                    e.opponent
                )));
            }
        }
        Ok(Schedule { n, grid })
    }

    /// Builds a grid from per-day game lists. Every team must play exactly
    /// once per day.
    pub fn from_days(n: usize, days: &[Vec<Game>]) -> Result<Schedule> {
        let size = 2 * n;
        if days.len() != size {
            return Err(Error::Shape(format!("expected {size} days, found {}", days.len())));
        }
        let mut grid = Vec::with_capacity(size);
        for (day, games) in days.iter().enumerate() {
            let mut row: Vec<Option<Entry>> = vec![None; size];
            for g in games {
                for (team, entry) in [
                    (g.home, Entry { opponent: g.away, venue: Venue::Home }),
                    (g.away, Entry { opponent: g.home, venue: Venue::Away }),
                ] {
                    if team >= size || row[team].replace(entry).is_some() {
                        return Err(Error::Shape(format!("day {day}: team {team} booked twice or out of range")));
                    }
                }
            }
            let row = row
                .into_iter()
                .enumerate()
                .map(|(t, e)| e.ok_or_else(|| Error::Shape(format!("day {day}: team {t} idle"))))
                .collect::<Result<Vec<_>>>()?;
            grid.push(row);
        }
        Schedule::new(n, grid)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn days(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[Vec<Entry>] {
        &self.grid
    }

    pub fn entry(&self, day: usize, team: usize) -> Entry {
        self.grid[day][team]
    }

    pub fn set_entry(&mut self, day: usize, team: usize, entry: Entry) {
        self.grid[day][team] = entry;
    }

    /// Venue (as a team index) where `team` plays on `day`.
    pub fn location(&self, day: usize, team: usize) -> usize {
        let e = self.grid[day][team];
        match e.venue {
            Venue::Home => team,
            Venue::Away => e.opponent,
        }
    }

    /// Games of one day, listed from the home side.
    pub fn games_on(&self, day: usize) -> Vec<Game> {
        self.grid[day]
            .iter()
            .enumerate()
            .filter(|(_, e)| e.venue == Venue::Home)
            .map(|(home, e)| Game::new(e.opponent, home))
            .collect()
    }

    pub fn game_count(&self) -> usize {
        (0..self.days()).map(|d| self.games_on(d).len()).sum()
    }

    /// Moves the last day to the front; every other day shifts one later.
    pub fn rotate_last_to_front(&mut self) {
        self.grid.rotate_right(1);
    }

    pub fn render(&self) -> String {
        render(self)
    }

    pub fn to_json(&self) -> String {
        crate::io::serialize_schedule(self)
    }

    pub fn parse(bytes: &[u8]) -> Result<Schedule> {
        crate::io::parse_schedule(bytes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationKind {
    MissingOrDuplicateGame,
    RepeatPairing,
    RunTooLong,
    IntraLeague,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub day: Option<usize>,
    pub teams: Vec<usize>,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if let Some(d) = self.day {
            write!(f, " day {d}")?;
        }
        write!(f, " teams {:?}: {}", self.teams, self.detail)
    }
}

/// Collects every violation of the double round-robin, no-repeat and
/// bounded-by-3 rules. An empty result means the schedule is feasible.
pub fn validate_schedule(s: &Schedule) -> Vec<Violation> {
    let n = s.n;
    let size = 2 * n;
    let mut out = Vec::new();
    let same_league = |a: usize, b: usize| (a < n) == (b < n);

    for day in 0..s.days() {
        for team in 0..size {
            let e = s.grid[day][team];
            if e.opponent == team || same_league(team, e.opponent) {
                out.push(Violation {
                    kind: ViolationKind::IntraLeague,
                    day: Some(day),
                    teams: vec![team, e.opponent],
                    detail: "opponent is in the same league".into(),
                });
                continue;
            }
            let back = s.grid[day][e.opponent];
            if back.opponent != team || back.venue != e.venue.flip() {
                out.push(Violation {
                    kind: ViolationKind::Inconsistent,
                    day: Some(day),
                    teams: vec![team, e.opponent],
                    detail: format!("opponent's entry is {:?} vs {}", back.venue, back.opponent),
                });
            }
        }
    }

    // Each ordered (home, away) cross-league pair exactly once.
    // Counted once from each side so a game claimed by only one team shows up.
    let mut hosted = vec![0usize; size * size];
    let mut visited = vec![0usize; size * size];
    for row in &s.grid {
        for (team, e) in row.iter().enumerate() {
            if same_league(team, e.opponent) {
                continue;
            }
            match e.venue {
                Venue::Home => hosted[team * size + e.opponent] += 1,
                Venue::Away => visited[e.opponent * size + team] += 1,
            }
        }
    }
    for home in 0..size {
        for away in 0..size {
            if same_league(home, away) {
                continue;
            }
            let c = hosted[home * size + away];
            if c != 1 || visited[home * size + away] != 1 {
                out.push(Violation {
                    kind: ViolationKind::MissingOrDuplicateGame,
                    day: None,
                    teams: vec![home, away],
                    detail: format!("{home} hosts {away} {c} times"),
                });
            }
        }
    }

    let mut repeats = BTreeSet::new();
    for day in 0..s.days().saturating_sub(1) {
        for team in 0..size {
            let o = s.grid[day][team].opponent;
            if s.grid[day + 1][team].opponent == o {
                repeats.insert((day, team.min(o), team.max(o)));
            }
        }
    }
    out.extend(repeats.into_iter().map(|(day, a, b)| Violation {
        kind: ViolationKind::RepeatPairing,
        day: Some(day),
        teams: vec![a, b],
        detail: format!("meet on days {day} and {}", day + 1),
    }));

    for team in 0..size {
        let mut start = 0;
        for day in 1..=s.days() {
            if day == s.days() || s.grid[day][team].venue != s.grid[start][team].venue {
                let len = day - start;
                if len > MAX_RUN {
                    out.push(Violation {
                        kind: ViolationKind::RunTooLong,
                        day: Some(start),
                        teams: vec![team],
                        detail: format!("{len} consecutive {:?} games", s.grid[start][team].venue),
                    });
                }
                start = day;
            }
        }
    }
    out
}

/// A team's closed walk and its split into trips (maximal away runs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Itinerary {
    pub team: usize,
    /// Home, then each day's venue, then home again.
    pub venues: Vec<usize>,
    /// Away venues of each trip, in visiting order.
    pub trips: Vec<Vec<usize>>,
}

impl Itinerary {
    pub fn walk_length(&self, inst: &Instance) -> f64 {
        self.venues.windows(2).map(|w| inst.w(w[0], w[1])).sum()
    }

    /// Cost of one trip as a closed walk from home.
    pub fn trip_cost(&self, inst: &Instance, trip: usize) -> f64 {
        let stops = &self.trips[trip];
        let mut prev = self.team;
        let mut total = 0.0;
        for &v in stops {
            total += inst.w(prev, v);
            prev = v;
        }
        total + inst.w(prev, self.team)
    }
}

pub fn decompose_trips(s: &Schedule, team: usize) -> Result<Itinerary> {
    if team >= 2 * s.n {
        return Err(Error::TeamOutOfRange(team));
    }
    let mut venues = Vec::with_capacity(s.days() + 2);
    venues.push(team);
    let mut trips: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut run_start = 0;
    for day in 0..s.days() {
        let e = s.grid[day][team];
        let loc = s.location(day, team);
        venues.push(loc);
        match e.venue {
            Venue::Away => {
                if current.is_empty() {
                    run_start = day;
                }
                current.push(loc);
            }
            Venue::Home => {
                if !current.is_empty() {
                    trips.push(std::mem::take(&mut current));
                }
            }
        }
        if current.len() > MAX_RUN {
            return Err(Error::RunTooLong {
                team,
                day: run_start,
                len: current.len(),
            });
        }
    }
    if !current.is_empty() {
        trips.push(current);
    }
    venues.push(team);
    Ok(Itinerary { team, venues, trips })
}

/// Total travel of all teams under direct traveling, starting and ending at
/// home.
pub fn total_distance(s: &Schedule, inst: &Instance) -> Result<f64> {
    if s.n != inst.n {
        return Err(Error::ShapeMismatch {
            schedule: s.n,
            instance: inst.n,
        });
    }
    let mut total = 0.0;
    for team in 0..inst.size() {
        total += team_distance(s, inst, team);
    }
    Ok(total)
}

pub(crate) fn team_distance(s: &Schedule, inst: &Instance, team: usize) -> f64 {
    let mut prev = team;
    let mut total = 0.0;
    for row in &s.grid {
        let e = row[team];
        let loc = match e.venue {
            Venue::Home => team,
            Venue::Away => e.opponent,
        };
        total += inst.w(prev, loc);
        prev = loc;
    }
    total + inst.w(prev, team)
}

/// Text grid: one row per team, one column per day; away games carry `@`.
pub fn render(s: &Schedule) -> String {
    let size = 2 * s.n;
    let label = |t: usize| {
        if t < s.n {
            format!("x{t}")
        } else {
            format!("y{}", t - s.n)
        }
    };
    let cell = |e: &Entry| match e.venue {
        Venue::Home => label(e.opponent),
        Venue::Away => format!("@{}", label(e.opponent)),
    };
    let width = (0..s.days())
        .flat_map(|d| s.grid[d].iter().map(|e| cell(e).len()))
        .chain((0..s.days()).map(|d| d.to_string().len()))
        .max()
        .unwrap_or(1);
    let lw = (0..size).map(|t| label(t).len()).max().unwrap_or(2);
    let mut out = String::new();
    let _ = write!(out, "{:lw$} |", "");
    for d in 0..s.days() {
        let _ = write!(out, " {:>width$}", d);
    }
    out.push('\n');
    for t in 0..size {
        if t == s.n {
            let _ = writeln!(out, "{}", "-".repeat(lw + 2 + s.days() * (width + 1)));
        }
        let _ = write!(out, "{:lw$} |", label(t));
        for d in 0..s.days() {
            let _ = write!(out, " {:>width$}", cell(&s.grid[d][t]));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The n = 3 example: rows x0..x2, y0..y2; `(opponent, home?)` per day.
    pub fn sample_n3() -> Schedule {
        // y_j has index 3 + j.
        let x_rows: [[(usize, bool); 6]; 3] = [
            [(0, false), (1, false), (2, false), (0, true), (1, true), (2, true)],
            [(2, true), (0, false), (1, false), (2, false), (0, true), (1, true)],
            [(1, true), (2, true), (0, false), (1, false), (2, false), (0, true)],
        ];
        let mut days = vec![Vec::new(); 6];
        for (x, row) in x_rows.iter().enumerate() {
            for (d, &(y, home)) in row.iter().enumerate() {
                let y = 3 + y;
                days[d].push(if home { Game::new(y, x) } else { Game::new(x, y) });
            }
        }
        Schedule::from_days(3, &days).unwrap()
    }
}
