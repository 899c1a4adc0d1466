//! Experiment configuration: `key = value` text plus per-key overrides.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::ctc::{ctc_rate_point, RateId};
use crate::error::{Error, Result};
use crate::geometry::{PlyFormat, ScaleFactor};
use crate::sr::MAX_S_PRIME;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Simulate the codec's geometric effect with a plain down-scale.
    Simulate,
    /// Read clouds decoded by an external codec.
    External,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "simulate" => Ok(Mode::Simulate),
            "external" => Ok(Mode::External),
            other => Err(Error::Config(format!("unknown mode {other:?}, expected simulate|external"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScaleSource {
    Explicit(ScaleFactor),
    Ctc { precision: u32, rates: Vec<RateId> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SPrimePolicy {
    None,
    Auto,
    Fixed(u32),
}

impl FromStr for SPrimePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(SPrimePolicy::None),
            "auto" => Ok(SPrimePolicy::Auto),
            n => {
                let k: u32 = n.parse().map_err(|_| Error::Config(format!("bad s' value {n:?}")))?;
                if !k.is_power_of_two() || k > MAX_S_PRIME {
                    return Err(Error::Config(format!("s' = {k} must be a power of two <= {MAX_S_PRIME}")));
                }
                Ok(SPrimePolicy::Fixed(k))
            }
        }
    }
}

/// One scale to evaluate, with the tag used in file names and rate logs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatePoint {
    pub tag: String,
    pub scale: ScaleFactor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub inputs: Vec<PathBuf>,
    pub mode: Mode,
    pub scale: ScaleSource,
    pub s_prime: SPrimePolicy,
    pub out_dir: PathBuf,
    pub peak: Option<u32>,
    pub rates: Option<PathBuf>,
    pub decoded_dir: Option<PathBuf>,
    pub jobs: usize,
    pub ply_format: PlyFormat,
}

impl ExperimentConfig {
    pub fn rate_points(&self) -> Result<Vec<RatePoint>> {
        match &self.scale {
            ScaleSource::Explicit(s) => Ok(vec![RatePoint { tag: scale_tag(*s), scale: *s }]),
            ScaleSource::Ctc { precision, rates } => rates
                .iter()
                .map(|&r| Ok(RatePoint { tag: r.to_string(), scale: ctc_rate_point(*precision, r)?.scale }))
                .collect(),
        }
    }

    /// The resolved configuration in the same `key = value` syntax it is read from.
    pub fn to_kv_string(&self) -> String {
        let mut s = String::new();
        let inputs: Vec<String> = self.inputs.iter().map(|p| p.display().to_string()).collect();
        let _ = writeln!(s, "inputs = {}", inputs.join(","));
        let _ = writeln!(s, "mode = {}", match self.mode {
            Mode::Simulate => "simulate",
            Mode::External => "external",
        });
        match &self.scale {
            ScaleSource::Explicit(sf) => {
                let _ = writeln!(s, "scale = {sf}");
            }
            ScaleSource::Ctc { precision, rates } => {
                let ids: Vec<String> = rates.iter().map(|r| r.to_string()).collect();
                let _ = writeln!(s, "ctc = {precision}:{}", ids.join(","));
            }
        }
        let _ = writeln!(s, "sprime = {}", match self.s_prime {
            SPrimePolicy::None => "none".to_string(),
            SPrimePolicy::Auto => "auto".to_string(),
            SPrimePolicy::Fixed(k) => k.to_string(),
        });
        let _ = writeln!(s, "out = {}", self.out_dir.display());
        if let Some(p) = self.peak {
            let _ = writeln!(s, "peak = {p}");
        }
        if let Some(r) = &self.rates {
            let _ = writeln!(s, "rates = {}", r.display());
        }
        if let Some(d) = &self.decoded_dir {
            let _ = writeln!(s, "decoded = {}", d.display());
        }
        let _ = writeln!(s, "jobs = {}", self.jobs);
        let _ = writeln!(s, "format = {}", match self.ply_format {
            PlyFormat::Ascii => "ascii",
            PlyFormat::BinaryLittleEndian => "binary",
        });
        s
    }
}

/// File-name safe tag for an explicit scale: `4/3` becomes `s4-3`.
pub fn scale_tag(s: ScaleFactor) -> String {
    format!("s{}", s.to_string().replace('/', "-"))
}

fn parse_ctc_sweep(v: &str) -> Result<(u32, Vec<RateId>)> {
    let (prec, ids) = v.split_once(':').ok_or_else(|| Error::Config(format!("expected PREC:RID, got {v:?}")))?;
    let precision: u32 = prec.trim().parse().map_err(|_| Error::Config(format!("bad precision {prec:?}")))?;
    let rates = if ids.trim() == "all" {
        RateId::ALL.to_vec()
    } else {
        ids.split(',').map(str::parse).collect::<Result<Vec<_>>>()?
    };
    for &r in &rates {
        ctc_rate_point(precision, r)?;
    }
    Ok((precision, rates))
}

/// Accumulates settings from a config file and overrides, then validates.
#[derive(Clone, Debug, Default)]
pub struct ConfigBuilder {
    inputs: Vec<PathBuf>,
    mode: Option<Mode>,
    scale: Option<ScaleFactor>,
    ctc: Option<(u32, Vec<RateId>)>,
    s_prime: Option<SPrimePolicy>,
    out_dir: Option<PathBuf>,
    peak: Option<u32>,
    rates: Option<PathBuf>,
    decoded_dir: Option<PathBuf>,
    jobs: Option<usize>,
    ply_format: Option<PlyFormat>,
}

impl ConfigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_text(mut self, text: &str) -> Result<Self> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(self)
    }

    /// Sets one key. Later calls override earlier ones, except `inputs`,
    /// which accumulates.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "inputs" | "input" => self
                .inputs
                .extend(value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(PathBuf::from)),
            "mode" => self.mode = Some(value.parse()?),
            "scale" => self.scale = Some(value.parse()?),
            "ctc" => self.ctc = Some(parse_ctc_sweep(value)?),
            "sprime" => self.s_prime = Some(value.parse()?),
            "out" => self.out_dir = Some(PathBuf::from(value)),
            "peak" => {
                self.peak = Some(value.parse().map_err(|_| Error::Config(format!("bad peak {value:?}")))?)
            }
            "rates" => self.rates = Some(PathBuf::from(value)),
            "decoded" => self.decoded_dir = Some(PathBuf::from(value)),
            "jobs" => {
                let j: usize = value.parse().map_err(|_| Error::Config(format!("bad job count {value:?}")))?;
                self.jobs = Some(j.max(1));
            }
            "format" => {
                self.ply_format = Some(match value {
                    "ascii" => PlyFormat::Ascii,
                    "binary" => PlyFormat::BinaryLittleEndian,
                    other => return Err(Error::Config(format!("unknown PLY format {other:?}"))),
                })
            }
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn build(self) -> Result<ExperimentConfig> {
        let scale = match (self.scale, self.ctc) {
            (Some(_), Some(_)) => {
                return Err(Error::Config("set either an explicit scale or a CTC rate point, not both".into()))
            }
            (None, None) => return Err(Error::Config("no scale given (scale or ctc)".into())),
            (Some(s), None) => {
                s.require_downscale().map_err(|e| Error::Config(e.to_string()))?;
                ScaleSource::Explicit(s)
            }
            (None, Some((precision, rates))) => ScaleSource::Ctc { precision, rates },
        };
        if self.inputs.is_empty() {
            return Err(Error::Config("no input clouds".into()));
        }
        let mode = self.mode.unwrap_or(Mode::Simulate);
        if mode == Mode::External && self.decoded_dir.is_none() {
            return Err(Error::Config("external mode needs a decoded directory".into()));
        }
        Ok(ExperimentConfig {
            inputs: self.inputs,
            mode,
            scale,
            s_prime: self.s_prime.unwrap_or(SPrimePolicy::None),
            out_dir: self.out_dir.ok_or_else(|| Error::Config("no output directory".into()))?,
            peak: self.peak,
            rates: self.rates,
            decoded_dir: self.decoded_dir,
            jobs: self.jobs.unwrap_or(1),
            ply_format: self.ply_format.unwrap_or(PlyFormat::BinaryLittleEndian),
        })
    }
}
