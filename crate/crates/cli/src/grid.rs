//! Direction-grid specifications: `equator[:N]`, `meridian[:N]`,
//! `fibonacci:N`.

use blochpair::Direction;
use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use crate::CliError;

const DEFAULT_COUNT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpec {
    /// `N` azimuths at polar angle pi/2.
    Equator(usize),
    /// `N` polar angles sweeping `[0, pi]` at azimuth 0.
    Meridian(usize),
    /// `N` near-uniform directions on the golden spiral.
    Fibonacci(usize),
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, count) = match s.split_once(':') {
            Some((kind, count)) => {
                let n: usize = count
                    .parse()
                    .map_err(|_| CliError::Parse(format!("grid count `{count}` is not a number")))?;
                (kind, Some(n))
            }
            None => (s, None),
        };
        let spec = match kind {
            "equator" => GridSpec::Equator(count.unwrap_or(DEFAULT_COUNT)),
            "meridian" => GridSpec::Meridian(count.unwrap_or(DEFAULT_COUNT)),
            "fibonacci" => GridSpec::Fibonacci(count.ok_or_else(|| {
                CliError::Parse("fibonacci grid needs a count: fibonacci:N".into())
            })?),
            other => {
                return Err(CliError::Parse(format!(
                    "unknown grid `{other}` (expected equator, meridian, or fibonacci:N)"
                )))
            }
        };
        if spec.count() == 0 {
            return Err(CliError::Parse("grid count must be at least 1".into()));
        }
        Ok(spec)
    }
}

impl GridSpec {
    pub fn count(&self) -> usize {
        match *self {
            GridSpec::Equator(n) | GridSpec::Meridian(n) | GridSpec::Fibonacci(n) => n,
        }
    }

    pub fn is_equator(&self) -> bool {
        matches!(self, GridSpec::Equator(_))
    }

    pub fn directions(&self) -> Vec<Direction> {
        match *self {
            GridSpec::Equator(n) => (0..n)
                .map(|k| Direction::new(PI / 2.0, TAU * k as f64 / n as f64).unwrap())
                .collect(),
            GridSpec::Meridian(n) => (0..n)
                .map(|k| {
                    let theta = if n == 1 {
                        0.0
                    } else {
                        PI * k as f64 / (n - 1) as f64
                    };
                    Direction::new(theta.min(PI), 0.0).unwrap()
                })
                .collect(),
            GridSpec::Fibonacci(n) => {
                let golden_angle = PI * (3.0 - 5.0_f64.sqrt());
                (0..n)
                    .map(|k| {
                        let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                        let theta = z.clamp(-1.0, 1.0).acos();
                        let phi = (golden_angle * k as f64).rem_euclid(TAU);
                        Direction::new(theta, phi).unwrap()
                    })
                    .collect()
            }
        }
    }
}
