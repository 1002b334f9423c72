//! On-disk state document: a small JSON file carrying either the four
//! amplitudes in product-basis order or the 2x2 coefficient matrix, with
//! complex numbers written as `[re, im]` pairs.

use blochpair::BipartiteState;
use blochpair::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::Path;

use crate::CliError;

/// Norm deviations up to this are accepted silently.
const NORM_ACCEPT: f64 = 1e-9;
/// Norm deviations up to this are renormalized with a warning; beyond it the
/// document is rejected.
const NORM_RENORMALIZE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub format_version: u32,
    /// Four `[re, im]` pairs in the product-basis order
    /// `(e1_1 (x) e2_1, e1_1 (x) e2_2, e1_2 (x) e2_1, e1_2 (x) e2_2)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<[[f64; 2]; 4]>,
    /// 2x2 coefficient matrix of `[re, im]` pairs; rows index the first spin.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<[[[f64; 2]; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StateDocument {
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn from_state(state: &BipartiteState, label: Option<String>) -> Self {
        let amps = state.amplitudes();
        Self {
            format_version: 1,
            amplitudes: Some([
                [amps[0].re, amps[0].im],
                [amps[1].re, amps[1].im],
                [amps[2].re, amps[2].im],
                [amps[3].re, amps[3].im],
            ]),
            lambda: None,
            label,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: StateDocument =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("state document: {e}")))?;
        if doc.format_version != 1 {
            return Err(CliError::Parse(format!(
                "unsupported format_version {} (expected 1)",
                doc.format_version
            )));
        }
        match (&doc.amplitudes, &doc.lambda) {
            (Some(_), Some(_)) => Err(CliError::Parse(
                "state document must carry either `amplitudes` or `lambda`, not both".into(),
            )),
            (None, None) => Err(CliError::Parse(
                "state document carries neither `amplitudes` nor `lambda`".into(),
            )),
            _ => Ok(doc),
        }
    }

    /// Builds the state, applying the renormalization policy. The returned
    /// string, if any, is a warning to surface on stderr.
    pub fn to_state(&self) -> Result<(BipartiteState, Option<String>), CliError> {
        let mut amps = match (&self.amplitudes, &self.lambda) {
            (Some(pairs), None) => [
                Complex64::new(pairs[0][0], pairs[0][1]),
                Complex64::new(pairs[1][0], pairs[1][1]),
                Complex64::new(pairs[2][0], pairs[2][1]),
                Complex64::new(pairs[3][0], pairs[3][1]),
            ],
            (None, Some(rows)) => [
                Complex64::new(rows[0][0][0], rows[0][0][1]),
                Complex64::new(rows[0][1][0], rows[0][1][1]),
                Complex64::new(rows[1][0][0], rows[1][0][1]),
                Complex64::new(rows[1][1][0], rows[1][1][1]),
            ],
            _ => unreachable!("validated in parse"),
        };
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CliError::Parse("amplitudes must be finite".into()));
        }

        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let deviation = (norm - 1.0).abs();
        let mut warning = None;
        if deviation > NORM_RENORMALIZE {
            return Err(CliError::Domain(format!(
                "state norm deviates from 1 by {deviation:.3e}, beyond the {NORM_RENORMALIZE:.0e} rejection threshold"
            )));
        }
        if deviation > NORM_ACCEPT {
            for a in &mut amps {
                *a /= norm;
            }
            warning = Some(format!(
                "warning: renormalized input state (norm deviation {deviation:.3e})"
            ));
        }
        let state = BipartiteState::from_amplitudes(amps).map_err(CliError::from)?;
        Ok((state, warning))
    }

}

/// Reads a state document from a path, or from standard input when the path
/// is `-`.
pub fn load_state(path: &str) -> Result<(BipartiteState, Option<String>), CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Parse(format!("reading standard input: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(Path::new(path))
            .map_err(|e| CliError::Parse(format!("reading {path}: {e}")))?
    };
    StateDocument::parse(&text)?.to_state()
}
