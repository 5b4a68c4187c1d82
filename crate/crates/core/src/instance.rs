//! Problem instances: two leagues of `n` teams and a symmetric semi-metric
//! distance matrix between their home venues.
//!
//! Team indices `0..n` form league X and `n..2n` form league Y.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius in miles.
pub const EARTH_RADIUS_MILES: f64 = 3958.7613;

/// Relative slack allowed when checking the triangle inequality.
pub const TRIANGLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum League {
    X,
    Y,
}

impl League {
    pub fn opposite(self) -> League {
        match self {
            League::X => League::Y,
            League::Y => League::X,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coordinates {
    pub lat_deg: f64,
    pub lon_deg: f64,
}

impl Coordinates {
    pub fn new(lat_deg: f64, lon_deg: f64) -> Self {
        Coordinates { lat_deg, lon_deg }
    }

    pub fn is_valid(&self) -> bool {
        (-90.0..=90.0).contains(&self.lat_deg) && (-180.0..=180.0).contains(&self.lon_deg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamInfo {
    pub index: usize,
    pub name: String,
    pub league: League,
    pub coords: Option<Coordinates>,
}

/// Great-circle distance in miles.
pub fn haversine(a: Coordinates, b: Coordinates) -> f64 {
    let phi1 = a.lat_deg.to_radians();
    let phi2 = b.lat_deg.to_radians();
    let half_dphi = (phi2 - phi1) / 2.0;
    let half_dlambda = (b.lon_deg.to_radians() - a.lon_deg.to_radians()) / 2.0;
    let s_phi = half_dphi.sin();
    let s_lambda = half_dlambda.sin();
    // cos(phi1) * cos(phi2) is evaluated in a fixed order so the result is
    // symmetric to the last bit.
    let (c_lo, c_hi) = if phi1 <= phi2 {
        (phi1.cos(), phi2.cos())
    } else {
        (phi2.cos(), phi1.cos())
    };
    let h = (s_phi * s_phi + c_lo * c_hi * s_lambda * s_lambda).clamp(0.0, 1.0);
    2.0 * EARTH_RADIUS_MILES * h.sqrt().atan2((1.0 - h).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub n: usize,
    pub teams: Vec<TeamInfo>,
    dist: Vec<f64>,
}

impl Instance {
    /// Builds an instance from an explicit `2n x 2n` matrix and validates it.
    ///
    /// When `teams` is `None`, teams are named `x0..`, `y0..`.
    pub fn from_matrix(
        name: impl Into<String>,
        n: usize,
        matrix: Vec<Vec<f64>>,
        teams: Option<Vec<TeamInfo>>,
    ) -> Result<Instance> {
        let size = 2 * n;
        if matrix.len() != size || matrix.iter().any(|row| row.len() != size) {
            return Err(Error::InvariantViolation {
                invariant: "matrix-shape",
                detail: format!("expected a {size}x{size} matrix"),
            });
        }
        let teams = match teams {
            Some(t) => t,
            None => default_teams(n),
        };
        let dist = matrix.into_iter().flatten().collect();
        let inst = Instance {
            name: name.into(),
            n,
            teams,
            dist,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Builds the distance matrix from team coordinates via [`haversine`].
    pub fn from_coords(name: impl Into<String>, teams: Vec<TeamInfo>) -> Result<Instance> {
        let nx = teams.iter().filter(|t| t.league == League::X).count();
        let ny = teams.len() - nx;
        if nx != ny {
            return Err(Error::UnequalLeagues { x: nx, y: ny });
        }
        let n = nx;
        let mut coords = Vec::with_capacity(teams.len());
        for t in &teams {
            let c = t
                .coords
                .ok_or_else(|| Error::MissingCoordinates(t.name.clone()))?;
            if !c.is_valid() {
                return Err(Error::InvalidCoordinates {
                    name: t.name.clone(),
                    lat: c.lat_deg,
                    lon: c.lon_deg,
                });
            }
            coords.push(c);
        }
        let size = 2 * n;
        let mut dist = vec![0.0; size * size];
        for a in 0..size {
            for b in (a + 1)..size {
                let d = haversine(coords[a], coords[b]);
                dist[a * size + b] = d;
                dist[b * size + a] = d;
            }
        }
        let inst = Instance {
            name: name.into(),
            n,
            teams,
            dist,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Checks every instance invariant, naming the first one that fails.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let size = 2 * n;
        if n == 0 {
            return Err(Error::InvariantViolation {
                invariant: "league-size",
                detail: "n must be at least 1".into(),
            });
        }
        if self.teams.len() != size {
            return Err(Error::InvariantViolation {
                invariant: "league-size",
                detail: format!("expected {size} teams, found {}", self.teams.len()),
            });
        }
        for (i, t) in self.teams.iter().enumerate() {
            let expected = if i < n { League::X } else { League::Y };
            if t.index != i || t.league != expected {
                return Err(Error::InvariantViolation {
                    invariant: "league-size",
                    detail: format!("team {} ({}) is out of place", i, t.name),
                });
            }
        }
        if self.dist.len() != size * size {
            return Err(Error::InvariantViolation {
                invariant: "matrix-shape",
                detail: format!("expected {} entries", size * size),
            });
        }
        for a in 0..size {
            for b in 0..size {
                let d = self.w(a, b);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvariantViolation {
                        invariant: "nonnegative",
                        detail: format!("dist[{a}][{b}] = {d}"),
                    });
                }
            }
            if self.w(a, a) != 0.0 {
                return Err(Error::InvariantViolation {
                    invariant: "zero-diagonal",
                    detail: format!("dist[{a}][{a}] = {}", self.w(a, a)),
                });
            }
        }
        for a in 0..size {
            for b in (a + 1)..size {
                if self.w(a, b) != self.w(b, a) {
                    return Err(Error::InvariantViolation {
                        invariant: "symmetry",
                        detail: format!("dist[{a}][{b}] != dist[{b}][{a}]"),
                    });
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                let ab = self.w(a, b);
                for c in 0..size {
                    let bc = self.w(b, c);
                    if self.w(a, c) > ab + bc + TRIANGLE_TOLERANCE * (ab + bc) {
                        return Err(Error::InvariantViolation {
                            invariant: "triangle-inequality",
                            detail: format!("dist[{a}][{c}] > dist[{a}][{b}] + dist[{b}][{c}]"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of teams in both leagues.
    #[inline]
    pub fn size(&self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn w(&self, a: usize, b: usize) -> f64 {
        self.dist[a * 2 * self.n + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        let size = self.size();
        &self.dist[a * size..(a + 1) * size]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.size()).map(<[f64]>::to_vec).collect()
    }

    pub fn league_of(&self, team: usize) -> League {
        if team < self.n {
            League::X
        } else {
            League::Y
        }
    }

    pub fn league(&self, league: League) -> std::ops::Range<usize> {
        match league {
            League::X => 0..self.n,
            League::Y => self.n..2 * self.n,
        }
    }

    /// Sum of distances from `team` to each of `opponents`, which must all be
    /// in the other league.
    pub fn delta_cost(&self, team: usize, opponents: &[usize]) -> Result<f64> {
        if team >= self.size() {
            return Err(Error::TeamOutOfRange(team));
        }
        let league = self.league_of(team);
        let mut total = 0.0;
        for &o in opponents {
            if o >= self.size() {
                return Err(Error::TeamOutOfRange(o));
            }
            if self.league_of(o) == league {
                return Err(Error::LeagueMismatch { team, opponent: o });
            }
            total += self.w(team, o);
        }
        Ok(total)
    }

    /// Cost of `team` against a whole league (the opposite one).
    pub fn delta_league(&self, team: usize) -> f64 {
        let other = self.league(self.league_of(team).opposite());
        self.row(team)[other].iter().sum()
    }

    /// Total cross-league distance `δ_X(Y)`.
    pub fn cross_total(&self) -> f64 {
        self.league(League::X).map(|x| self.delta_league(x)).sum()
    }

    /// Returns a copy with every distance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Instance {
        let mut out = self.clone();
        for d in &mut out.dist {
            *d *= factor;
        }
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Instance> {
        crate::io::parse_instance(bytes)
    }

    pub fn to_json(&self) -> String {
        crate::io::serialize_instance(self)
    }
}

pub(crate) fn default_teams(n: usize) -> Vec<TeamInfo> {
    (0..2 * n)
        .map(|i| {
            let (league, tag, k) = if i < n {
                (League::X, 'x', i)
            } else {
                (League::Y, 'y', i - n)
            };
            TeamInfo {
                index: i,
                name: format!("{tag}{k}"),
                league,
                coords: None,
            }
        })
        .collect()
}

const NBA_WEST: [(&str, f64, f64); 16] = [
    ("Dallas Mavericks", 32.7904, -96.8103),
    ("Denver Nuggets", 39.7487, -105.0076),
    ("Golden State Warriors", 37.7680, -122.3879),
    ("Houston Rockets", 29.7509, -95.3622),
    ("LA Clippers", 34.0430, -118.2673),
    ("Los Angeles Lakers", 34.0430, -118.2673),
    ("Memphis Grizzlies", 35.1382, -90.0506),
    ("New Orleans Pelicans", 29.9490, -90.0821),
    ("Oklahoma City Thunder", 35.4634, -97.5151),
    ("Phoenix Suns", 33.4457, -112.0712),
    ("Portland Trail Blazers", 45.5316, -122.6668),
    ("Sacramento Kings", 38.5802, -121.4997),
    ("San Antonio Spurs", 29.4270, -98.4375),
    ("Utah Jazz", 40.7683, -111.9011),
    ("Las Vegas Team", 36.1028, -115.1782),
    ("Seattle Team", 47.6221, -122.3541),
];

const NBA_EAST: [(&str, f64, f64); 16] = [
    ("Atlanta Hawks", 33.7573, -84.3963),
    ("Boston Celtics", 42.3662, -71.0621),
    ("Brooklyn Nets", 40.6826, -73.9754),
    ("Charlotte Hornets", 35.2252, -80.8393),
    ("Chicago Bulls", 41.8807, -87.6742),
    ("Cleveland Cavaliers", 41.4965, -81.6880),
    ("Detroit Pistons", 42.3411, -83.0552),
    ("Indiana Pacers", 39.7640, -86.1555),
    ("Miami Heat", 25.7814, -80.1870),
    ("Milwaukee Bucks", 43.0451, -87.9173),
    ("Minnesota Timberwolves", 44.9795, -93.2760),
    ("New York Knicks", 40.7505, -73.9934),
    ("Orlando Magic", 28.5381, -81.3841),
    ("Philadelphia 76ers", 39.9012, -75.1720),
    ("Toronto Raptors", 43.6435, -79.3790),
    ("Washington Wizards", 38.8982, -77.0208),
];

/// The 32-team NBA instance: Western Conference as league X (indices 0..16),
/// Eastern Conference as league Y (indices 16..32), in table order.
pub fn nba32() -> Instance {
    let teams = NBA_WEST
        .iter()
        .map(|t| (League::X, t))
        .chain(NBA_EAST.iter().map(|t| (League::Y, t)))
        .enumerate()
        .map(|(index, (league, &(name, lat, lon)))| TeamInfo {
            index,
            name: name.to_string(),
            league,
            coords: Some(Coordinates::new(lat, lon)),
        })
        .collect();
    Instance::from_coords("nba32", teams).expect("embedded NBA instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law_of_cosines(a: Coordinates, b: Coordinates) -> f64 {
        let (p1, p2) = (a.lat_deg.to_radians(), b.lat_deg.to_radians());
        let dl = (b.lon_deg - a.lon_deg).to_radians();
        let c = p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos();
        EARTH_RADIUS_MILES * c.clamp(-1.0, 1.0).acos()
    }

    fn team(index: usize, league: League, lat: f64, lon: f64) -> TeamInfo {
        TeamInfo {
            index,
            name: format!("t{index}"),
            league,
            coords: Some(Coordinates::new(lat, lon)),
        }
    }

    #[test]
    fn haversine_identical_points_is_zero() {
        let a = Coordinates::new(32.7904, -96.8103);
        assert_eq!(haversine(a, a), 0.0);
    }

    #[test]
    fn haversine_dallas_houston() {
        let dallas = Coordinates::new(32.7904, -96.8103);
        let houston = Coordinates::new(29.7509, -95.3622);
        // Frozen from a 40-digit evaluation of the spherical Vincenty formula.
        let expected = 226.745_922_771_040_9;
        let got = haversine(dallas, houston);
        assert!((got - expected).abs() < 1e-9, "{got}");
        assert!((got - law_of_cosines(dallas, houston)).abs() < 1e-6);
    }

    #[test]
    fn haversine_is_bitwise_symmetric() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = Coordinates::new(rng.random_range(-90.0..=90.0), rng.random_range(-180.0..=180.0));
            let b = Coordinates::new(rng.random_range(-90.0..=90.0), rng.random_range(-180.0..=180.0));
            assert_eq!(haversine(a, b).to_bits(), haversine(b, a).to_bits());
            assert!(haversine(a, b) >= 0.0);
        }
    }

    #[test]
    fn colocated_teams_have_zero_distance() {
        let teams = vec![team(0, League::X, 10.0, 10.0), team(1, League::Y, 10.0, 10.0)];
        let inst = Instance::from_coords("pair", teams).unwrap();
        assert_eq!(inst.w(0, 1), 0.0);
    }

    #[test]
    fn meridian_points_make_triangle_tight() {
        let teams = vec![
            team(0, League::X, 10.0, 20.0),
            team(1, League::X, 30.0, 20.0),
            team(2, League::Y, 50.0, 20.0),
            team(3, League::Y, 50.0, 20.0),
        ];
        let inst = Instance::from_coords("meridian", teams).unwrap();
        let sum = inst.w(0, 1) + inst.w(1, 2);
        assert!((inst.w(0, 2) - sum).abs() <= 1e-9 * sum);
        assert!((inst.w(0, 1) - 1381.868_379_710_62).abs() < 1e-6);
        assert!((inst.w(0, 2) - 2763.736_759_421_24).abs() < 1e-6);
    }

    #[test]
    fn unequal_leagues_and_missing_coords() {
        let teams = vec![team(0, League::X, 0.0, 0.0)];
        assert_eq!(
            Instance::from_coords("bad", teams).unwrap_err(),
            Error::UnequalLeagues { x: 1, y: 0 }
        );
        let mut teams = vec![team(0, League::X, 0.0, 0.0), team(1, League::Y, 1.0, 1.0)];
        teams[1].coords = None;
        assert!(matches!(
            Instance::from_coords("bad", teams),
            Err(Error::MissingCoordinates(_))
        ));
    }

    #[test]
    fn nba32_shape_and_colocated_la_teams() {
        let inst = nba32();
        assert_eq!(inst.n, 16);
        assert_eq!(inst.size(), 32);
        assert_eq!(inst.teams[4].name, "LA Clippers");
        assert_eq!(inst.teams[5].name, "Los Angeles Lakers");
        assert_eq!(inst.w(4, 5), 0.0);
        assert_eq!(inst.teams[16].name, "Atlanta Hawks");
        assert_eq!(inst.league_of(15), League::X);
        assert_eq!(inst.league_of(16), League::Y);
        inst.validate().unwrap();
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        let m = vec![
            vec![0.0, 1.0, 2.0, 2.0],
            vec![1.0, 0.0, 2.0, 2.0],
            vec![2.0, 2.0, 0.0, 1.0],
            vec![2.0, 2.5, 1.0, 0.0],
        ];
        let err = Instance::from_matrix("asym", 2, m, None).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { invariant: "symmetry", .. }));
    }

    #[test]
    fn triangle_violation_is_rejected() {
        let m = vec![
            vec![0.0, 1.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 1.0],
            vec![5.0, 1.0, 1.0, 0.0],
        ];
        let err = Instance::from_matrix("tri", 2, m, None).unwrap_err();
        assert!(matches!(
            err,
            Error::InvariantViolation { invariant: "triangle-inequality", .. }
        ));
    }

    #[test]
    fn delta_cost_cases() {
        let inst = nba32();
        assert_eq!(inst.delta_cost(0, &[]).unwrap(), 0.0);
        let ys: Vec<usize> = (16..32).collect();
        let mut hand = 0.0;
        for y in 16..32 {
            hand += inst.matrix()[0][y];
        }
        assert_eq!(inst.delta_cost(0, &ys).unwrap(), hand);
        assert_eq!(inst.delta_league(0), hand);
        assert_eq!(
            inst.delta_cost(0, &[1]).unwrap_err(),
            Error::LeagueMismatch { team: 0, opponent: 1 }
        );
        let zero = Instance::from_matrix("z", 2, vec![vec![0.0; 4]; 4], None).unwrap();
        assert_eq!(zero.delta_cost(0, &[2, 3]).unwrap(), 0.0);
    }

    #[test]
    fn delta_sums_commute() {
        use rand::{RngExt, SeedableRng};
        let inst = nba32();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let xs: Vec<usize> = (0..16).filter(|_| rng.random_bool(0.5)).collect();
            let ys: Vec<usize> = (16..32).filter(|_| rng.random_bool(0.5)).collect();
            let a: f64 = xs.iter().map(|&x| inst.delta_cost(x, &ys).unwrap()).sum();
            let b: f64 = ys.iter().map(|&y| inst.delta_cost(y, &xs).unwrap()).sum();
            assert!((a - b).abs() <= 1e-9 * a.max(1.0));
        }
    }
}
