//! JSON and CSV ingestion of priors, channels, and joint distributions.
//!
//! JSON accepts either a prior (with an optional channel) or a joint mass
//! matrix:
//!
//! ```json
//! {"x_alphabet": ["a","b"], "y_alphabet": ["0","1"],
//!  "px": [0.5, 0.5], "channel": [[0.9, 0.1], [0.2, 0.8]]}
//! ```
//!
//! ```json
//! {"joint": [[0.3, 0.2], [0.1, 0.4]]}
//! ```
//!
//! CSV carries a joint only: header row holds the output symbols (first
//! cell ignored), each body row holds an input symbol followed by its mass.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::Error;
use crate::prob::{joint_from, Alphabet, Channel, JointDist, Pmf};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Json,
    Csv,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(InputFormat::Json),
            "csv" => Ok(InputFormat::Csv),
            other => Err(Error::ParseError(format!(
                "unknown input format '{other}' (expected json or csv)"
            ))),
        }
    }
}

/// What a run actually received; commands pull the view they need and fail
/// with a validation error when the input cannot provide it.
#[derive(Debug, Clone)]
pub enum InputData {
    PriorChannel { px: Pmf, channel: Channel },
    Joint(JointDist),
    PriorOnly(Pmf),
}

impl InputData {
    /// Prior on the secret, available for every input shape.
    pub fn prior(&self) -> Pmf {
        match self {
            InputData::PriorChannel { px, .. } => px.clone(),
            InputData::Joint(j) => j.x_marginal(),
            InputData::PriorOnly(p) => p.clone(),
        }
    }

    /// Prior plus channel; a bare prior cannot supply one.
    pub fn prior_channel(&self) -> Result<(Pmf, Channel)> {
        match self {
            InputData::PriorChannel { px, channel } => Ok((px.clone(), channel.clone())),
            InputData::Joint(j) => Ok(j.to_prior_channel()),
            InputData::PriorOnly(_) => Err(Error::ValidationError(
                "this command needs a channel or a joint, but the input has only 'px'".into(),
            )),
        }
    }

    /// Joint distribution; a bare prior cannot supply one.
    pub fn joint(&self) -> Result<JointDist> {
        match self {
            InputData::PriorChannel { px, channel } => joint_from(px, channel),
            InputData::Joint(j) => Ok(j.clone()),
            InputData::PriorOnly(_) => Err(Error::ValidationError(
                "this command needs a channel or a joint, but the input has only 'px'".into(),
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    x_alphabet: Option<Vec<String>>,
    y_alphabet: Option<Vec<String>>,
    px: Option<Vec<f64>>,
    channel: Option<Vec<Vec<f64>>>,
    joint: Option<Vec<Vec<f64>>>,
}

fn alphabet_or_indexed(given: Option<Vec<String>>, prefix: &str, n: usize) -> Result<Alphabet> {
    match given {
        Some(symbols) => {
            if symbols.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: symbols.len(),
                });
            }
            Alphabet::new(symbols)
        }
        None => Alphabet::indexed(prefix, n),
    }
}

fn matrix_width(matrix: &[Vec<f64>], what: &str) -> Result<usize> {
    let width = matrix.first().map(|row| row.len()).unwrap_or(0);
    if matrix.is_empty() || width == 0 {
        return Err(Error::ParseError(format!("'{what}' must be non-empty")));
    }
    if matrix.iter().any(|row| row.len() != width) {
        return Err(Error::ParseError(format!(
            "'{what}' rows must all have the same length"
        )));
    }
    Ok(width)
}

pub fn parse_json(text: &str) -> Result<InputData> {
    let raw: RawInput = serde_json::from_str(text)
        .map_err(|e| Error::ParseError(format!("invalid JSON input: {e}")))?;

    if let Some(joint) = raw.joint {
        if raw.px.is_some() || raw.channel.is_some() {
            return Err(Error::ParseError(
                "give either 'joint' or 'px' (+ 'channel'), not both".into(),
            ));
        }
        let ny = matrix_width(&joint, "joint")?;
        let x = alphabet_or_indexed(raw.x_alphabet, "x", joint.len())?;
        let y = alphabet_or_indexed(raw.y_alphabet, "y", ny)?;
        return Ok(InputData::Joint(JointDist::new(x, y, joint)?));
    }

    let px = raw
        .px
        .ok_or_else(|| Error::ParseError("input needs either 'joint' or 'px'".into()))?;
    let x = alphabet_or_indexed(raw.x_alphabet, "x", px.len())?;
    let prior = Pmf::new(x.clone(), px)?;

    match raw.channel {
        Some(rows) => {
            let ny = matrix_width(&rows, "channel")?;
            let y = alphabet_or_indexed(raw.y_alphabet, "y", ny)?;
            let channel = Channel::new(x, y, rows)?;
            Ok(InputData::PriorChannel { px: prior, channel })
        }
        None => {
            if raw.y_alphabet.is_some() {
                return Err(Error::ParseError(
                    "'y_alphabet' given without 'channel' or 'joint'".into(),
                ));
            }
            Ok(InputData::PriorOnly(prior))
        }
    }
}

pub fn parse_csv(text: &str) -> Result<InputData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| Error::ParseError("empty CSV input".into()))?
        .map_err(|e| Error::ParseError(format!("invalid CSV: {e}")))?;
    if header.len() < 2 {
        return Err(Error::ParseError(
            "CSV header needs a corner cell followed by the output symbols".into(),
        ));
    }
    let y_syms: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();

    let mut x_syms = Vec::new();
    let mut mass = Vec::new();
    for record in records {
        let record = record.map_err(|e| Error::ParseError(format!("invalid CSV: {e}")))?;
        if record.is_empty() || (record.len() == 1 && record[0].is_empty()) {
            continue; // blank line
        }
        if record.len() != y_syms.len() + 1 {
            return Err(Error::ParseError(format!(
                "CSV row for '{}' has {} cells, expected {}",
                record.get(0).unwrap_or(""),
                record.len(),
                y_syms.len() + 1
            )));
        }
        x_syms.push(record[0].to_owned());
        let row: Vec<f64> = record
            .iter()
            .skip(1)
            .map(|cell| {
                cell.parse::<f64>()
                    .map_err(|_| Error::ParseError(format!("'{cell}' is not a number")))
            })
            .collect::<Result<_>>()?;
        mass.push(row);
    }

    let joint = JointDist::new(Alphabet::new(x_syms)?, Alphabet::new(y_syms)?, mass)?;
    Ok(InputData::Joint(joint))
}

pub fn load_input(path: &Path, format: InputFormat) -> Result<InputData> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::ParseError(format!("cannot read {}: {e}", path.display())))?;
    match format {
        InputFormat::Json => parse_json(&text),
        InputFormat::Csv => parse_csv(&text),
    }
}
