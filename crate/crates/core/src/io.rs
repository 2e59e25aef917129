//! Plain-text measurement files and certificate records.
//!
//! A measurement file is a sequence of blocks:
//!
//! ```text
//! # comments and blank lines are ignored
//! measurement Jz projective
//! outcome 0.5
//! 1 0   0 0
//! 0 0   0 0
//! outcome -0.5
//! 0 0   0 0
//! 0 0   1 0
//! ```
//!
//! Each matrix row lists `re im` pairs; the first row fixes the dimension.
//! The kind after the label is `projective` or `povm` (default `povm`).

use serde::Serialize;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measurement::{Measurement, MeasurementKind, Outcome};
use crate::oracle::{Certification, DeterministicStrategy, Phenomenon, SteeringFunctional};
use crate::scalar::Real;

struct Block<T: Real> {
    label: String,
    kind: MeasurementKind,
    line: usize,
    outcomes: Vec<(T, Vec<Vec<Complex<T>>>)>,
}

pub fn parse_measurements<T: Real>(text: &str) -> Result<Vec<Measurement<T>>> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut blocks: Vec<Block<T>> = Vec::new();
    let mut dim: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        match words.next() {
            Some("measurement") => {
                let label = words.next().ok_or_else(|| err(line, "missing measurement label".into()))?;
                let kind = match words.next() {
                    None | Some("povm") => MeasurementKind::Povm,
                    Some("projective") => MeasurementKind::Projective,
                    Some(other) => return Err(err(line, format!("unknown measurement kind {other}"))),
                };
                if let Some(extra) = words.next() {
                    return Err(err(line, format!("unexpected token {extra}")));
                }
                blocks.push(Block {
                    label: label.to_string(),
                    kind,
                    line,
                    outcomes: Vec::new(),
                });
            }
            Some("outcome") => {
                let block = blocks.last_mut().ok_or_else(|| err(line, "outcome before any measurement".into()))?;
                let value = words
                    .next()
                    .ok_or_else(|| err(line, "missing outcome value".into()))
                    .and_then(|w| parse_real::<T>(w).ok_or_else(|| err(line, format!("bad outcome value {w}"))))?;
                if let Some(extra) = words.next() {
                    return Err(err(line, format!("unexpected token {extra}")));
                }
                block.outcomes.push((value, Vec::new()));
            }
            Some(_) => {
                let outcome = blocks
                    .last_mut()
                    .and_then(|b| b.outcomes.last_mut())
                    .ok_or_else(|| err(line, "matrix row before any outcome header".into()))?;
                let numbers = content
                    .split_whitespace()
                    .map(|w| parse_real::<T>(w).ok_or_else(|| err(line, format!("bad number {w}"))))
                    .collect::<Result<Vec<T>>>()?;
                if numbers.len() % 2 != 0 {
                    return Err(err(line, "row needs re im pairs".into()));
                }
                let row: Vec<Complex<T>> = numbers.chunks(2).map(|p| Complex::new(p[0], p[1])).collect();
                let d = *dim.get_or_insert(row.len());
                if row.len() != d {
                    return Err(err(line, format!("row has {} entries, expected {d}", row.len())));
                }
                if outcome.1.len() == d {
                    return Err(err(line, format!("effect already has {d} rows")));
                }
                outcome.1.push(row);
            }
            None => unreachable!("blank lines skipped"),
        }
    }
    if blocks.is_empty() {
        return Err(err(0, "no measurements".into()));
    }
    let d = dim.unwrap_or(0);
    blocks
        .into_iter()
        .map(|b| {
            let outcomes = b
                .outcomes
                .into_iter()
                .map(|(value, rows)| {
                    if rows.len() != d {
                        return Err(err(b.line, format!("an effect of {} has {} rows, expected {d}", b.label, rows.len())));
                    }
                    let data = rows.into_iter().flatten().collect();
                    Ok(Outcome {
                        value,
                        effect: ComplexMatrix::from_vec(d, d, data)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Measurement::new(b.label, outcomes, b.kind)
        })
        .collect()
}

fn parse_real<T: Real>(w: &str) -> Option<T> {
    w.parse::<f64>().ok().filter(|v| v.is_finite()).and_then(T::from_f64)
}

/// Inverse of [`parse_measurements`], with round-trip float formatting.
pub fn format_measurements<T: Real>(ms: &[Measurement<T>]) -> String {
    let mut out = String::new();
    for m in ms {
        let kind = match m.kind() {
            MeasurementKind::Projective => "projective",
            MeasurementKind::Povm => "povm",
        };
        out.push_str(&format!("measurement {} {kind}\n", m.label()));
        for o in m.outcomes() {
            out.push_str(&format!("outcome {:e}\n", o.value.to_f64_lossy()));
            for i in 0..o.effect.rows() {
                let row: Vec<String> = (0..o.effect.cols())
                    .map(|j| {
                        let z = o.effect[(i, j)];
                        format!("{:e} {:e}", z.re.to_f64_lossy(), z.im.to_f64_lossy())
                    })
                    .collect();
                out.push_str(&row.join("  "));
                out.push('\n');
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasurementDescriptor<T: Real> {
    pub label: String,
    pub outcome_values: Vec<T>,
}

impl<T: Real> From<&Measurement<T>> for MeasurementDescriptor<T> {
    fn from(m: &Measurement<T>) -> Self {
        Self {
            label: m.label().to_string(),
            outcome_values: m.values(),
        }
    }
}

/// Self-contained record of a certification run, for external re-verification.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateRecord<T: Real> {
    pub verdict: String,
    pub certified: bool,
    pub lhs_bound: T,
    pub observed_value: T,
    pub threshold: T,
    pub grid_bound: Option<T>,
    pub maximizer: DeterministicStrategy,
    pub alice: Vec<MeasurementDescriptor<T>>,
    pub bob: Vec<MeasurementDescriptor<T>>,
    pub pairing: Vec<(usize, usize)>,
    /// Row-major (Alice outcome, Bob outcome) coefficients per pairing entry.
    pub coefficients: Vec<Vec<T>>,
    pub tag: Option<String>,
}

impl<T: Real> CertificateRecord<T> {
    pub fn new(
        phen: &Phenomenon<T>,
        functional: &SteeringFunctional<T>,
        cert: &Certification<T>,
        tag: Option<String>,
    ) -> Self {
        let s = phen.strategy();
        Self {
            verdict: if cert.certified { "certified-steering" } else { "not-certified" }.into(),
            certified: cert.certified,
            lhs_bound: cert.lhs_bound,
            observed_value: cert.observed_value,
            threshold: cert.threshold,
            grid_bound: functional.grid_bound,
            maximizer: cert.maximizer.clone(),
            alice: s.alice.iter().map(Into::into).collect(),
            bob: s.bob.iter().map(Into::into).collect(),
            pairing: s.pairing.clone(),
            coefficients: functional.coefficients.clone(),
            tag,
        }
    }
}
