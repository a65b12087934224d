//! Run configuration: JSON schema, presets, and resolution into validated
//! library objects.
//!
//! A configuration is a single JSON object with up to five fields:
//!
//! ```json
//! {
//!   "channel": "magic-square" | "<path>" | { ...channel object... },
//!   "encoder": "quantum" | "classical-table1" | "<path>" | { ...encoder object... },
//!   "distributions": { "v0": [...], "pair1": [[...]], "pair2": [[...]] },
//!   "rates": { "r1Common": 0.0, "r1Private": 1.0, "r2Common": 0.0, "r2Private": 1.0 },
//!   "blocklength": 1
//! }
//! ```
//!
//! Every field is optional; the default is the magic-square channel driven by
//! the perfect entangled encoder under uniform question distributions.
//! Complex matrices are nested arrays of `[re, im]` pairs, row-major.

use std::fs;

use icregions::channel::{
    build_joint, classical_encoder, ms_channel, quantum_encoder, DmIc, DmIcFile, EncoderSide,
    EntangledEncoderSpec,
};
use icregions::error::Error as LibError;
use icregions::game::{ClassicalStrategyPair, QuantumStrategy};
use icregions::prob::{Alphabet, ConditionalPmf, JointPmf};
use icregions::quantum::{ComplexMatrix, DensityOperator, Povm};
use icregions::sim::{FactorDists, RateSplit};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// A complex matrix on disk: rows of `[re, im]` pairs.
pub type MatrixRepr = Vec<Vec<[f64; 2]>>;

/// Either a preset name / file path, or the object written inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourceOr<T> {
    Name(String),
    Inline(T),
}

/// One sender's half of an encoder on disk. `measurements[t][i]` is the
/// operator for outcome `x[i]` of the measurement selected by flat index
/// `t = (iv0 * |u| + iu) * |v| + iv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EncoderSideFile {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub x: Vec<String>,
    pub measurements: Vec<Vec<MatrixRepr>>,
}

/// Full encoder description on disk: the shared bipartite state, how its
/// dimension splits between the senders, the time-sharing alphabet, and the
/// two measurement families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EncoderFile {
    pub shared_state: MatrixRepr,
    pub partition: [usize; 2],
    pub v0: Vec<String>,
    pub side1: EncoderSideFile,
    pub side2: EncoderSideFile,
}

/// Optional input distributions. `pair1[iv0]` is a probability row over
/// `(v1, u1)` pairs, `v`-major; likewise `pair2`. Omitted means uniform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DistributionsFile {
    pub v0: Vec<f64>,
    pub pair1: Vec<Vec<f64>>,
    pub pair2: Vec<Vec<f64>>,
}

/// Top-level run configuration as parsed from `--config`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfigFile {
    #[serde(default = "default_channel")]
    pub channel: SourceOr<DmIcFile>,
    #[serde(default = "default_encoder")]
    pub encoder: SourceOr<EncoderFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distributions: Option<DistributionsFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<RateSplit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocklength: Option<usize>,
}

fn default_channel() -> SourceOr<DmIcFile> {
    SourceOr::Name("magic-square".into())
}

fn default_encoder() -> SourceOr<EncoderFile> {
    SourceOr::Name("quantum".into())
}

impl Default for RunConfigFile {
    fn default() -> Self {
        RunConfigFile {
            channel: default_channel(),
            encoder: default_encoder(),
            distributions: None,
            rates: None,
            blocklength: None,
        }
    }
}

/// All library objects a command needs, fully validated.
#[derive(Debug)]
pub struct Resolved {
    pub channel: DmIc,
    pub encoder: EntangledEncoderSpec,
    pub dists: FactorDists,
    pub rates: Option<RateSplit>,
    pub blocklength: usize,
}

impl Resolved {
    /// The joint distribution over `(V0, V1, U1, V2, U2, X1, X2, Y1, Y2)`
    /// realized by the configured inputs, encoder, and channel.
    pub fn joint(&self) -> Result<JointPmf> {
        Ok(build_joint(
            self.dists.p_v0(),
            self.dists.pair(1),
            self.dists.pair(2),
            &self.encoder,
            &self.channel,
        )?)
    }
}

/// Load a configuration from `--config`: inline JSON if the argument starts
/// with `{`, otherwise a file path. `None` yields the built-in default.
pub fn load_config(arg: Option<&str>) -> Result<RunConfigFile> {
    let Some(arg) = arg else {
        return Ok(RunConfigFile::default());
    };
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)
            .map_err(|e| CliError::validation(format!("cannot read config file `{arg}`: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Resolve a parsed configuration into validated library objects. Every
/// probability row and operator passes its module validator here, before any
/// computation runs.
pub fn resolve(file: &RunConfigFile) -> Result<Resolved> {
    let channel = match &file.channel {
        SourceOr::Name(name) if name == "magic-square" => ms_channel(),
        SourceOr::Name(path) => channel_from_repr(read_json(path, "channel")?)?,
        SourceOr::Inline(repr) => channel_from_repr(repr.clone())?,
    };
    let encoder = match &file.encoder {
        SourceOr::Name(name) if name == "quantum" => {
            quantum_encoder(&QuantumStrategy::standard()?)?
        }
        SourceOr::Name(name) if name == "classical-table1" => {
            classical_encoder(&ClassicalStrategyPair::standard_optimal())?
        }
        SourceOr::Name(path) => read_json::<EncoderFile>(path, "encoder")?.to_spec()?,
        SourceOr::Inline(repr) => repr.to_spec()?,
    };
    let dists = match &file.distributions {
        Some(d) => factor_dists(d, &encoder)?,
        None => FactorDists::uniform_for(&encoder)?,
    };
    Ok(Resolved {
        channel,
        encoder,
        dists,
        rates: file.rates,
        blocklength: file.blocklength.unwrap_or(1),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str, what: &str) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::validation(format!(
            "cannot read {what} file `{path}`: {e} \
             (expected a preset name, a file path, or an inline object)"
        ))
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Build a channel, rephrasing row-mass violations as a stochasticity defect
/// with its magnitude.
fn channel_from_repr(repr: DmIcFile) -> Result<DmIc> {
    DmIc::from_file_repr(repr).map_err(|e| match e {
        LibError::RowMassNotOne { row, total, .. } => {
            let deficit = (1.0 - total).abs();
            // Six-decimal rounding of the total would mask a deficit below
            // 1e-6, so show the raw value in that case.
            let shown_total = if deficit < 1e-6 {
                total.to_string()
            } else {
                short_magnitude(total)
            };
            CliError::validation(format!(
                "invalid channel: transition row {row} sums to {shown_total}, violating \
                 stochasticity {} (every row must sum to 1)",
                short_magnitude(deficit)
            ))
        }
        other => other.into(),
    })
}

/// Compact decimal for an error magnitude: six places with trailing zeros
/// trimmed, falling back to scientific notation below that resolution.
fn short_magnitude(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-6 {
        return format!("{x:e}");
    }
    let s = format!("{x:.6}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed.is_empty() {
        "0".into()
    } else {
        trimmed.to_string()
    }
}

fn factor_dists(d: &DistributionsFile, enc: &EntangledEncoderSpec) -> Result<FactorDists> {
    let p_v0 = JointPmf::new(vec![enc.v0().clone()], d.v0.clone())?;
    let build_pair = |k: u8, rows: &Vec<Vec<f64>>| -> Result<ConditionalPmf> {
        let side = enc.side(k);
        if rows.len() != enc.v0().len() {
            return Err(CliError::validation(format!(
                "distributions.pair{k} needs one row per v0 symbol ({}), got {}",
                enc.v0().len(),
                rows.len()
            )));
        }
        let width = side.v().len() * side.u().len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(CliError::validation(format!(
                    "distributions.pair{k} row {i} needs {width} entries \
                     (|v{k}| x |u{k}|), got {}",
                    row.len()
                )));
            }
        }
        Ok(ConditionalPmf::new(
            vec![enc.v0().clone()],
            vec![side.v().clone(), side.u().clone()],
            rows.concat(),
        )?)
    };
    let p1 = build_pair(1, &d.pair1)?;
    let p2 = build_pair(2, &d.pair2)?;
    Ok(FactorDists::new(p_v0, p1, p2)?)
}

/// Inverse of [`matrix_from_repr`]; exists to state and test the round-trip
/// guarantee of the on-disk schema.
#[cfg(test)]
pub fn matrix_repr(m: &ComplexMatrix) -> MatrixRepr {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

pub fn matrix_from_repr(repr: &MatrixRepr) -> Result<ComplexMatrix> {
    if repr.is_empty() {
        return Err(CliError::validation("matrix has no rows".to_string()));
    }
    let cols = repr[0].len();
    if cols == 0 {
        return Err(CliError::validation("matrix has no columns".to_string()));
    }
    let mut data = Vec::with_capacity(repr.len() * cols);
    for (i, row) in repr.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::validation(format!(
                "matrix row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        for &[re, im] in row {
            data.push(Complex64::new(re, im));
        }
    }
    Ok(ComplexMatrix::new(repr.len(), cols, data)?)
}

impl EncoderFile {
    /// Inverse of [`EncoderFile::to_spec`]; exists to state and test the
    /// round-trip guarantee of the on-disk schema.
    #[cfg(test)]
    pub fn from_spec(spec: &EntangledEncoderSpec) -> Self {
        let side = |k: u8| {
            let s = spec.side(k);
            let mut measurements = Vec::new();
            for iv0 in 0..spec.v0().len() {
                for iu in 0..s.u().len() {
                    for iv in 0..s.v().len() {
                        let povm = spec.povm(k, iv0, iu, iv);
                        measurements.push(
                            (0..povm.len())
                                .map(|i| matrix_repr(povm.operator(i)))
                                .collect(),
                        );
                    }
                }
            }
            EncoderSideFile {
                u: s.u().symbols().to_vec(),
                v: s.v().symbols().to_vec(),
                x: s.x().symbols().to_vec(),
                measurements,
            }
        };
        EncoderFile {
            shared_state: matrix_repr(spec.shared_state().matrix()),
            partition: [spec.partition().0, spec.partition().1],
            v0: spec.v0().symbols().to_vec(),
            side1: side(1),
            side2: side(2),
        }
    }

    pub fn to_spec(&self) -> Result<EntangledEncoderSpec> {
        let state = DensityOperator::new(matrix_from_repr(&self.shared_state)?)?;
        let v0 = Alphabet::new("V0", self.v0.clone())?;
        let side = |k: u8, f: &EncoderSideFile| -> Result<EncoderSide> {
            let u = Alphabet::new(format!("U{k}"), f.u.clone())?;
            let v = Alphabet::new(format!("V{k}"), f.v.clone())?;
            let x = Alphabet::new(format!("X{k}"), f.x.clone())?;
            let expected = v0.len() * u.len() * v.len();
            if f.measurements.len() != expected {
                return Err(CliError::validation(format!(
                    "side{k} needs {expected} measurements (|v0| x |u| x |v|), got {}",
                    f.measurements.len()
                )));
            }
            let mut povms = Vec::with_capacity(expected);
            for (t, outcome_ops) in f.measurements.iter().enumerate() {
                if outcome_ops.len() != x.len() {
                    return Err(CliError::validation(format!(
                        "side{k} measurement {t} has {} outcomes, expected one per x symbol ({})",
                        outcome_ops.len(),
                        x.len()
                    )));
                }
                let outcomes = x
                    .symbols()
                    .iter()
                    .zip(outcome_ops)
                    .map(|(label, op)| Ok((label.clone(), matrix_from_repr(op)?)))
                    .collect::<Result<Vec<_>>>()?;
                povms.push(Povm::new(outcomes)?);
            }
            Ok(EncoderSide::new(u, v, x, povms))
        };
        let side1 = side(1, &self.side1)?;
        let side2 = side(2, &self.side2)?;
        Ok(EntangledEncoderSpec::new(
            state,
            (self.partition[0], self.partition[1]),
            v0,
            side1,
            side2,
        )?)
    }
}
