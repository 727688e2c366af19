//! Serialization: deterministic JSON, CSV profiles, and input spec types.
//!
//! Floats are printed with 17 significant digits so every emitted value
//! reparses to the identical f64 and byte-identical reruns stay
//! byte-identical. Non-finite values become JSON null.

use crate::criteria::{PredictionCheck, Verdict};
use crate::operators::OperatorValues;
use crate::sampling::{LimsupEstimate, RadialProfile, SupEstimate, SweepConfig};
use crate::valence::{GridSpec, ValenceReport};
use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use std::io;

/// Serialize a complex number as [re, im].
pub fn ser_complex<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&c.re)?;
    seq.serialize_element(&c.im)?;
    seq.end()
}

/// Serialize a slice of complex numbers as [[re, im], ...].
pub fn ser_complex_vec<S: Serializer>(
    v: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Wrap(#[serde(serialize_with = "ser_complex")] Complex64);
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&Wrap(*c))?;
    }
    seq.end()
}

/// Canonical float rendering shared by JSON and CSV output.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.8e}")
    }
}

/// Serialize to compact JSON with canonical float formatting.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Render a radial profile as CSV: radius, sup, samples, refined.
pub fn profile_csv(profile: &RadialProfile) -> String {
    let mut out = String::from("radius,sup,samples,refined\n");
    for i in 0..profile.radii.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(profile.radii[i]),
            fmt_float(profile.sups[i]),
            profile.angular_counts[i],
            profile.refined[i],
        ));
    }
    out
}

/// Input description of a harmonic map: label plus the two analytic parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapSpec {
    pub label: String,
    pub h: String,
    #[serde(default = "zero_expr")]
    pub g: String,
}

fn zero_expr() -> String {
    "0".into()
}

/// Input description of a cover family: generator, sheet count, overlap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverSpec {
    pub psi: String,
    pub m: usize,
    pub rho: f64,
}

/// Operator values tagged with the point they were taken at.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OperatorSample {
    #[serde(serialize_with = "ser_complex")]
    pub z: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub p: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub s: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub hyp: Complex64,
    pub pre_q: f64,
    pub nehari_q: f64,
    pub becker_q: f64,
}

impl OperatorSample {
    pub fn new(z: Complex64, v: OperatorValues) -> Self {
        OperatorSample {
            z,
            p: v.p,
            s: v.s,
            hyp: v.hyp,
            pre_q: v.pre_q,
            nehari_q: v.nehari_q,
            becker_q: v.becker_q,
        }
    }
}

/// One weighted channel's sweep: the norm estimate, the per-radius profile,
/// and the boundary limsup when the profile is deep enough to support one.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelSweep {
    pub channel: &'static str,
    pub estimate: SupEstimate,
    pub profile: RadialProfile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limsup: Option<LimsupEstimate>,
}

/// One channel's sup norm, tagged with the channel name.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormSummary {
    pub channel: &'static str,
    #[serde(flatten)]
    pub estimate: SupEstimate,
}

/// Operator summary: per-channel sup norms plus point samples.
#[derive(Debug, Clone, Serialize, Default)]
pub struct OperatorsSection {
    pub sup_norms: Vec<NormSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<OperatorSample>,
}

/// The full effective configuration of a run, echoed for audit.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveConfig {
    pub command: &'static str,
    pub sweep: SweepConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annulus_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_samples: Option<usize>,
}

impl EffectiveConfig {
    pub fn new(command: &'static str, sweep: SweepConfig) -> Self {
        EffectiveConfig {
            command,
            sweep,
            delta0: None,
            r0: None,
            radius: None,
            grid: None,
            alpha: None,
            annulus_samples: None,
            pair_samples: None,
        }
    }
}

/// Top-level report; sections absent from the run are omitted entirely.
#[derive(Debug, Clone, Serialize, Default)]
pub struct Report {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<EffectiveConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operators: Option<OperatorsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles: Option<Vec<ChannelSweep>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Vec<Verdict>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predictions: Option<Vec<PredictionCheck>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valence: Option<ValenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<crate::cover::CoverReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(label: impl Into<String>) -> Self {
        Report { label: label.into(), ..Report::default() }
    }
}
