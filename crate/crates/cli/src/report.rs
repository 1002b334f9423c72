//! Output primitives: complex/matrix pretty-printing, JSON encoding of
//! complex data, and the point-cloud CSV format.

use blochpair::{CMatrix2, CMatrix4, CVector2, Direction, SphericalPoint};
use blochpair::Complex64;
use serde_json::{json, Value};
use std::path::Path;

use crate::CliError;

pub const CSV_HEADER: &str = "theta_in,phi_in,r_out,theta_out,phi_out,x,y,z,probability";

/// One direction-to-point row of a point-cloud file.
#[derive(Debug, Clone)]
pub struct PointCloudRecord {
    pub theta_in: f64,
    pub phi_in: f64,
    pub r_out: f64,
    pub theta_out: f64,
    pub phi_out: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub probability: f64,
}

impl PointCloudRecord {
    pub fn new(input: Direction, point: SphericalPoint, probability: f64) -> Self {
        let cart = point.to_cartesian();
        Self {
            theta_in: input.theta,
            phi_in: input.phi,
            r_out: point.r,
            theta_out: point.theta,
            phi_out: point.phi,
            x: cart.x,
            y: cart.y,
            z: cart.z,
            probability,
        }
    }

    /// Spherical and Cartesian columns describe the same point within `tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let p = SphericalPoint {
            r: self.r_out,
            theta: self.theta_out,
            phi: self.phi_out,
        }
        .to_cartesian();
        (p.x - self.x).abs() <= tol && (p.y - self.y).abs() <= tol && (p.z - self.z).abs() <= tol
    }

    /// 17 significant digits per column, lossless for binary64.
    pub fn csv_line(&self) -> String {
        [
            self.theta_in,
            self.phi_in,
            self.r_out,
            self.theta_out,
            self.phi_out,
            self.x,
            self.y,
            self.z,
            self.probability,
        ]
        .map(|v| format!("{v:.16e}"))
        .join(",")
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    format!("{:+.6}{:+.6}i", z.re, z.im)
}

pub fn fmt_vector2(v: &CVector2) -> String {
    format!("({}, {})", fmt_complex(v.entries[0]), fmt_complex(v.entries[1]))
}

pub fn fmt_matrix2(m: &CMatrix2, indent: &str) -> String {
    m.entries
        .iter()
        .map(|row| {
            format!(
                "{indent}[ {}  {} ]",
                fmt_complex(row[0]),
                fmt_complex(row[1])
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn fmt_matrix4(m: &CMatrix4, indent: &str) -> String {
    m.entries
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|z| fmt_complex(*z)).collect();
            format!("{indent}[ {} ]", cells.join("  "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn fmt_point(p: &SphericalPoint) -> String {
    format!("r={:.9}, theta={:.9}, phi={:.9}", p.r, p.theta, p.phi)
}

pub fn json_complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn json_vector2(v: &CVector2) -> Value {
    json!([json_complex(v.entries[0]), json_complex(v.entries[1])])
}

pub fn json_matrix2(m: &CMatrix2) -> Value {
    Value::Array(
        m.entries
            .iter()
            .map(|row| Value::Array(row.iter().map(|z| json_complex(*z)).collect()))
            .collect(),
    )
}

pub fn json_matrix4(m: &CMatrix4) -> Value {
    Value::Array(
        m.entries
            .iter()
            .map(|row| Value::Array(row.iter().map(|z| json_complex(*z)).collect()))
            .collect(),
    )
}

pub fn json_point(p: &SphericalPoint) -> Value {
    json!({"r": p.r, "theta": p.theta, "phi": p.phi})
}

/// Writes to the path, or to standard output when no path is given.
pub fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Parse(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
