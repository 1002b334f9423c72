//! Command-line front end: parse states from JSON documents, run Schmidt
//! decompositions and measurements, and emit analysis tables and point-cloud
//! CSV data.

mod document;
mod grid;
mod report;

use blochpair::{
    born_probabilities, collapse_pair, density_from_point, luder_pair, map_sphere_grid,
    partial_trace_over_first, partial_trace_over_second, project_onto_direction, sample_collapse,
    BipartiteState, Branch, CollapseOutcome, Direction, MeasuredSpin, SphericalPoint,
    DEFAULT_TOLERANCE,
};
use clap::{Parser, Subcommand, ValueEnum};
use document::load_state;
use grid::GridSpec;
use report::*;
use serde_json::json;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable overriding the default validation tolerance.
const TOLERANCE_ENV: &str = "BLOCHPAIR_TOLERANCE";

#[derive(Debug)]
pub enum CliError {
    /// Malformed input: exit code 2.
    Parse(String),
    /// Well-formed but invalid values: exit code 3.
    Domain(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) | CliError::Domain(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<blochpair::Error> for CliError {
    fn from(e: blochpair::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "blochpair", version, about = "Entangled spin-pair toolkit on the Bloch sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Non-collapse update keeping both branches as a mixture
    Luder,
    /// Von Neumann collapse with partner-state propagation
    Collapse,
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt-decompose a state: r, adapted bases, reduced densities
    Schmidt {
        /// State document path, or `-` for standard input
        state: String,
        /// Machine-readable JSON report
        #[arg(long)]
        json: bool,
        /// Write the report to a file instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Measure one spin of the pair
    Measure {
        /// State document path, or `-` for standard input
        state: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Polar angle of the apparatus (radians unless --degrees)
        #[arg(long)]
        theta: f64,
        /// Azimuth of the apparatus (radians unless --degrees)
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// Which spin the apparatus acts on
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        target: u8,
        /// Interpret --theta/--phi in degrees
        #[arg(long)]
        degrees: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Map collapse directions to partner points as point-cloud CSV
    Map {
        /// State document path, or `-` for standard input
        state: String,
        /// Direction grid: equator[:N], meridian[:N], or fibonacci:N
        #[arg(long, default_value = "equator")]
        grid: String,
        /// Write the CSV to a file instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample collapse outcomes with a seeded deterministic generator
    Sample {
        /// State document path, or `-` for standard input
        state: String,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        target: u8,
        /// Number of draws
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        /// RNG seed; identical seeds give bit-identical histograms
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        degrees: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Project a single-spin ball point onto a grid of measurement axes (CSV)
    Littlesphere {
        /// Radius of the state's ball point, in [0, 1]
        #[arg(long)]
        r: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, default_value = "fibonacci:100")]
        grid: String,
        #[arg(long)]
        degrees: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Schmidt {
            state,
            json,
            output,
        } => cmd_schmidt(&state, json, output.as_deref()),
        Command::Measure {
            state,
            mode,
            theta,
            phi,
            target,
            degrees,
            json,
            output,
        } => {
            let n = direction(theta, phi, degrees)?;
            cmd_measure(&state, mode, n, spin(target), json, output.as_deref())
        }
        Command::Map {
            state,
            grid,
            output,
        } => cmd_map(&state, &grid.parse()?, output.as_deref()),
        Command::Sample {
            state,
            theta,
            phi,
            target,
            shots,
            seed,
            degrees,
            json,
            output,
        } => {
            let n = direction(theta, phi, degrees)?;
            cmd_sample(&state, n, spin(target), shots, seed, json, output.as_deref())
        }
        Command::Littlesphere {
            r,
            theta,
            phi,
            grid,
            degrees,
            output,
        } => {
            let (theta, phi) = to_radians(theta, phi, degrees);
            let point = SphericalPoint::new(r, theta, phi)?;
            cmd_littlesphere(point, &grid.parse()?, output.as_deref())
        }
    }
}

fn to_radians(theta: f64, phi: f64, degrees: bool) -> (f64, f64) {
    if degrees {
        (theta.to_radians(), phi.to_radians())
    } else {
        (theta, phi)
    }
}

fn direction(theta: f64, phi: f64, degrees: bool) -> Result<Direction, CliError> {
    let (theta, phi) = to_radians(theta, phi, degrees);
    Ok(Direction::new(theta, phi)?)
}

fn spin(target: u8) -> MeasuredSpin {
    match target {
        1 => MeasuredSpin::First,
        _ => MeasuredSpin::Second,
    }
}

fn tolerance() -> Result<f64, CliError> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .ok_or_else(|| {
                CliError::Parse(format!("{TOLERANCE_ENV}=`{raw}` is not a positive number"))
            }),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

fn load(path: &str) -> Result<BipartiteState, CliError> {
    let (state, warning) = load_state(path)?;
    if let Some(warning) = warning {
        eprintln!("{warning}");
    }
    Ok(state)
}

fn cmd_schmidt(path: &str, json: bool, output: Option<&std::path::Path>) -> Result<(), CliError> {
    let psi = load(path)?;
    let form = psi.schmidt();
    let rebuilt = form.state()?;
    let fidelity = psi.fidelity(&rebuilt);
    let d1 = psi.density_first();
    let d2 = psi.density_second();

    let text = if json {
        let value = json!({
            "r": form.r,
            "weights": {"hi": form.weights().0, "lo": form.weights().1},
            "x1_hi": json_vector2(&form.x1_hi),
            "x1_lo": json_vector2(&form.x1_lo),
            "x2_hi": json_vector2(&form.x2_hi),
            "x2_lo": json_vector2(&form.x2_lo),
            "density_first": json_matrix2(&d1),
            "density_second": json_matrix2(&d2),
            "reconstruction_fidelity": fidelity,
        });
        format!("{:#}\n", value)
    } else {
        format!(
            "entanglement parameter r = {:.12}\n\
             schmidt weights = ({:.12}, {:.12})\n\
             adapted basis, first spin:\n  x1_hi = {}\n  x1_lo = {}\n\
             adapted basis, second spin:\n  x2_hi = {}\n  x2_lo = {}\n\
             reduced density, first spin:\n{}\n\
             reduced density, second spin:\n{}\n\
             reconstruction fidelity = {:.12}\n",
            form.r,
            form.weights().0,
            form.weights().1,
            fmt_vector2(&form.x1_hi),
            fmt_vector2(&form.x1_lo),
            fmt_vector2(&form.x2_hi),
            fmt_vector2(&form.x2_lo),
            fmt_matrix2(&d1, "  "),
            fmt_matrix2(&d2, "  "),
            fidelity,
        )
    };
    emit(&text, output)
}

fn cmd_measure(
    path: &str,
    mode: Mode,
    n: Direction,
    target: MeasuredSpin,
    json: bool,
    output: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let psi = load(path)?;
    let tol = tolerance()?;
    let target_label = if target == MeasuredSpin::First { 1 } else { 2 };

    let text = match mode {
        Mode::Luder => {
            let result = luder_pair(&psi, n, target);
            let rho_before = psi.joint_density();
            // the marginal of the spin that was not measured must not move
            let drift = match target {
                MeasuredSpin::First => result
                    .d2_after
                    .max_abs_diff(&partial_trace_over_first(&rho_before)),
                MeasuredSpin::Second => result
                    .d1_after
                    .max_abs_diff(&partial_trace_over_second(&rho_before)),
            };
            if json {
                let value = json!({
                    "mode": "luder",
                    "target": target_label,
                    "direction": {"theta": n.theta, "phi": n.phi},
                    "rho_after": json_matrix4(&result.rho_after),
                    "density_first_after": json_matrix2(&result.d1_after),
                    "density_second_after": json_matrix2(&result.d2_after),
                    "partner_marginal_drift": drift,
                    "partner_marginal_invariant": drift <= tol,
                });
                format!("{:#}\n", value)
            } else {
                format!(
                    "non-collapse measurement: target spin {target_label}, \
                     theta={:.9}, phi={:.9}\n\
                     joint density after:\n{}\n\
                     reduced density, first spin:\n{}\n\
                     reduced density, second spin:\n{}\n\
                     partner marginal drift = {:.3e} ({})\n",
                    n.theta,
                    n.phi,
                    fmt_matrix4(&result.rho_after, "  "),
                    fmt_matrix2(&result.d1_after, "  "),
                    fmt_matrix2(&result.d2_after, "  "),
                    drift,
                    if drift <= tol { "invariant" } else { "MOVED" },
                )
            }
        }
        Mode::Collapse => {
            let (plus, minus) = collapse_pair(&psi, n, target);
            if json {
                let value = json!({
                    "mode": "collapse",
                    "target": target_label,
                    "direction": {"theta": n.theta, "phi": n.phi},
                    "branches": [json_branch(&plus), json_branch(&minus)],
                });
                format!("{:#}\n", value)
            } else {
                format!(
                    "collapse measurement: target spin {target_label}, theta={:.9}, phi={:.9}\n{}{}",
                    n.theta,
                    n.phi,
                    text_branch(&plus),
                    text_branch(&minus),
                )
            }
        }
    };
    emit(&text, output)
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

fn json_branch(outcome: &CollapseOutcome) -> serde_json::Value {
    json!({
        "branch": branch_name(outcome.branch),
        "probability": outcome.probability,
        "collapsed": json_vector2(&outcome.collapsed.amplitudes),
        "suppressed": outcome.is_suppressed(),
        "partner": outcome.partner.as_ref().map(|p| json_vector2(&p.amplitudes)),
        "partner_point": outcome.partner_point.as_ref().map(json_point),
    })
}

fn text_branch(outcome: &CollapseOutcome) -> String {
    let name = branch_name(outcome.branch);
    match (&outcome.partner, &outcome.partner_point) {
        (Some(partner), Some(point)) => format!(
            "branch {name}: probability {:.12}\n  collapsed ray = {}\n  partner ray   = {}\n  partner point = {}\n",
            outcome.probability,
            fmt_vector2(&outcome.collapsed.amplitudes),
            fmt_vector2(&partner.amplitudes),
            fmt_point(point),
        ),
        _ => format!(
            "branch {name}: probability {:.3e} -- suppressed (below 1e-14), no partner state\n",
            outcome.probability,
        ),
    }
}

fn cmd_map(path: &str, grid: &GridSpec, output: Option<&std::path::Path>) -> Result<(), CliError> {
    let psi = load(path)?;
    let tol = tolerance()?;
    let images = map_sphere_grid(&psi, &grid.directions());

    let mut lines = vec![CSV_HEADER.to_string()];
    for image in &images {
        let Some(partner) = image.partner else {
            eprintln!(
                "warning: direction theta={:.9}, phi={:.9} has probability {:.3e}; \
                 branch suppressed, row skipped",
                image.direction.theta, image.direction.phi, image.probability
            );
            continue;
        };
        let record = PointCloudRecord::new(image.direction, partner.canonical(), image.probability);
        if !record.is_consistent(tol) {
            return Err(CliError::Domain(
                "internal consistency check failed for a point-cloud record".into(),
            ));
        }
        lines.push(record.csv_line());
    }
    if grid.is_equator() {
        lines.push(format!(
            "# cone_polar_cosine = {:.16e}",
            psi.entanglement_parameter()
        ));
    }
    lines.push(String::new());
    emit(&lines.join("\n"), output)
}

fn cmd_sample(
    path: &str,
    n: Direction,
    target: MeasuredSpin,
    shots: u64,
    seed: u64,
    json: bool,
    output: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let psi = load(path)?;
    let (plus, minus) = collapse_pair(&psi, n, target);
    let hist = sample_collapse(&psi, n, target, shots, seed);

    let text = if json {
        let value = json!({
            "shots": hist.shots,
            "seed": hist.seed,
            "generator": hist.generator,
            "direction": {"theta": n.theta, "phi": n.phi},
            "counts": {"plus": hist.counts_plus, "minus": hist.counts_minus},
            "frequencies": {
                "plus": hist.frequency_plus(),
                "minus": 1.0 - hist.frequency_plus(),
            },
            "probabilities": {"plus": plus.probability, "minus": minus.probability},
        });
        format!("{:#}\n", value)
    } else {
        format!(
            "collapse sampling: {} shots, seed {}, generator {}\n\
             direction theta={:.9}, phi={:.9}\n\
             branch   count        frequency      probability\n\
             plus     {:<12} {:<14.9} {:.9}\n\
             minus    {:<12} {:<14.9} {:.9}\n",
            hist.shots,
            hist.seed,
            hist.generator,
            n.theta,
            n.phi,
            hist.counts_plus,
            hist.frequency_plus(),
            plus.probability,
            hist.counts_minus,
            1.0 - hist.frequency_plus(),
            minus.probability,
        )
    };
    emit(&text, output)
}

fn cmd_littlesphere(
    point: SphericalPoint,
    grid: &GridSpec,
    output: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let tol = tolerance()?;
    let d = density_from_point(point);
    let cart = point.to_cartesian();
    let center = cart.scale(0.5);
    let radius = 0.5 * cart.norm();

    let mut lines = vec![CSV_HEADER.to_string()];
    for n in grid.directions() {
        let projected = project_onto_direction(cart, n);
        let deviation = (projected.sub(&center).norm() - radius).abs();
        if deviation > tol {
            return Err(CliError::Domain(format!(
                "projected point left the little sphere by {deviation:.3e}"
            )));
        }
        let (p_plus, _) = born_probabilities(&d, n, tol)?;
        let record = PointCloudRecord::new(n, projected.to_spherical().canonical(), p_plus);
        if !record.is_consistent(tol) {
            return Err(CliError::Domain(
                "internal consistency check failed for a point-cloud record".into(),
            ));
        }
        lines.push(record.csv_line());
    }
    lines.push(String::new());
    emit(&lines.join("\n"), output)
}
