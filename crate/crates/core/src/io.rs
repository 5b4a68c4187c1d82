//! JSON file formats for instances, schedules and bound reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{default_teams, Coordinates, Instance, League, TeamInfo};
use crate::schedule::{Entry, Schedule, Venue};

#[derive(Debug, Serialize, Deserialize)]
struct TeamRecord {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lon: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Leagues {
    #[serde(rename = "X")]
    x: Vec<TeamRecord>,
    #[serde(rename = "Y")]
    y: Vec<TeamRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    name: String,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    leagues: Option<Leagues>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<f64>>>,
}

/// Parses an instance file. When both `leagues` and `matrix` are present the
/// matrix is authoritative and the leagues only supply names and coordinates.
pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_slice(bytes)?;
    let n = file.n;
    let teams = match &file.leagues {
        Some(leagues) => {
            if leagues.x.len() != leagues.y.len() {
                return Err(Error::UnequalLeagues {
                    x: leagues.x.len(),
                    y: leagues.y.len(),
                });
            }
            if leagues.x.len() != n {
                return Err(Error::InvariantViolation {
                    invariant: "league-size",
                    detail: format!("n = {n} but leagues have {} teams", leagues.x.len()),
                });
            }
            let records = leagues
                .x
                .iter()
                .map(|r| (League::X, r))
                .chain(leagues.y.iter().map(|r| (League::Y, r)));
            let mut teams = Vec::with_capacity(2 * n);
            for (index, (league, r)) in records.enumerate() {
                let coords = match (r.lat, r.lon) {
                    (Some(lat), Some(lon)) => Some(Coordinates::new(lat, lon)),
                    (None, None) => None,
                    _ => {
                        return Err(Error::MissingCoordinates(r.name.clone()));
                    }
                };
                teams.push(TeamInfo {
                    index,
                    name: r.name.clone(),
                    league,
                    coords,
                });
            }
            Some(teams)
        }
        None => None,
    };
    match (file.matrix, teams) {
        (Some(matrix), teams) => Instance::from_matrix(file.name, n, matrix, teams),
        (None, Some(teams)) => Instance::from_coords(file.name, teams),
        (None, None) => Err(Error::Parse {
            line: 0,
            column: 0,
            message: "instance needs either `leagues` with coordinates or `matrix`".into(),
        }),
    }
}

/// Serializes an instance with its full matrix, plus the leagues block so
/// names and coordinates survive a round trip.
pub fn serialize_instance(inst: &Instance) -> String {
    let record = |t: &TeamInfo| TeamRecord {
        name: t.name.clone(),
        lat: t.coords.map(|c| c.lat_deg),
        lon: t.coords.map(|c| c.lon_deg),
    };
    let named = inst.teams != default_teams(inst.n);
    let file = InstanceFile {
        name: inst.name.clone(),
        n: inst.n,
        leagues: named.then(|| Leagues {
            x: inst.teams[..inst.n].iter().map(record).collect(),
            y: inst.teams[inst.n..].iter().map(record).collect(),
        }),
        matrix: Some(inst.matrix()),
    };
    serde_json::to_string_pretty(&file).expect("instance serializes")
}

#[derive(Debug, Serialize, Deserialize)]
struct GameRecord {
    home: usize,
    away: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct ScheduleFile {
    n: usize,
    days: Vec<Vec<GameRecord>>,
}

/// Parses a schedule file: `2n` day arrays of `n` `{home, away}` games.
pub fn parse_schedule(bytes: &[u8]) -> Result<Schedule> {
    let file: ScheduleFile = serde_json::from_slice(bytes)?;
    let n = file.n;
    let size = 2 * n;
    if file.days.len() != size {
        return Err(Error::Shape(format!(
            "expected {size} days, found {}",
            file.days.len()
        )));
    }
    let mut grid = Vec::with_capacity(size);
    for (day, games) in file.days.iter().enumerate() {
        if games.len() != n {
            return Err(Error::Shape(format!(
                "day {day}: expected {n} games, found {}",
                games.len()
            )));
        }
        let mut row: Vec<Option<Entry>> = vec![None; size];
        for g in games {
            for (team, opponent, venue) in [(g.home, g.away, Venue::Home), (g.away, g.home, Venue::Away)] {
                if team >= size {
                    return Err(Error::Shape(format!("day {day}: team {team} out of range")));
                }
                if row[team].is_some() {
                    return Err(Error::Shape(format!("day {day}: team {team} plays twice")));
                }
                row[team] = Some(Entry { opponent, venue });
            }
        }
        let row = row
            .into_iter()
            .enumerate()
            .map(|(team, e)| e.ok_or_else(|| Error::Shape(format!("day {day}: team {team} has no game"))))
            .collect::<Result<Vec<_>>>()?;
        grid.push(row);
    }
    Schedule::new(n, grid)
}

/// Serializes a schedule; each game is listed once, from its home team.
pub fn serialize_schedule(s: &Schedule) -> String {
    let days = s
        .grid()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, e)| e.venue == Venue::Home)
                .map(|(home, e)| GameRecord {
                    home,
                    away: e.opponent,
                })
                .collect()
        })
        .collect();
    serde_json::to_string(&ScheduleFile { n: s.n(), days }).expect("schedule serializes")
}
