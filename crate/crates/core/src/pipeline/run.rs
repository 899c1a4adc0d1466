use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use rayon::prelude::*;

use super::config::{ExperimentConfig, Mode, RatePoint, SPrimePolicy};
use super::report::{write_report, write_runs, RateLog, ReportRow, RunRecord};
use crate::error::{Error, Result};
use crate::geometry::{
    downscale, load_ply, save_ply, translation_of, upscale_nni, ScaleFactor, Translation, VoxelCloud,
};
use crate::metrics::{d1_report, PsnrParams};
use crate::sr::{choose_s_prime, dus_prepare, dus_restore, super_resolve};

pub const REPORT_FILE: &str = "report.csv";
pub const RUNS_FILE: &str = "runs.csv";
pub const RESOLVED_CONFIG_FILE: &str = "config.resolved.txt";

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub rows: Vec<ReportRow>,
    pub runs: Vec<RunRecord>,
}

struct Input {
    name: String,
    cloud: VoxelCloud,
}

fn cloud_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Where an external codec's decoded cloud is expected: `<decoded>/<cloud>_<tag>.ply`.
pub fn decoded_path(dir: &Path, cloud: &str, tag: &str) -> PathBuf {
    dir.join(format!("{cloud}_{tag}.ply"))
}

/// Down-scaled ("decoded") geometry and how to map it back to `v`.
struct Decoded {
    cloud: VoxelCloud,
    t: Translation,
    s_prime: u32,
    t0: Translation,
}

fn decode(cfg: &ExperimentConfig, input: &Input, rp: &RatePoint) -> Result<Decoded> {
    let v = &input.cloud;
    let s_prime = match cfg.s_prime {
        SPrimePolicy::None => None,
        SPrimePolicy::Auto => Some(choose_s_prime(v)?),
        SPrimePolicy::Fixed(k) => Some(k),
    };
    let (dense, t0) = match s_prime {
        Some(k) => dus_prepare(v, k)?,
        None => (v.clone(), Translation::ZERO),
    };
    let t = translation_of(&dense)?;
    let cloud = match cfg.mode {
        Mode::Simulate => downscale(&dense, rp.scale, t)?,
        Mode::External => {
            let dir = cfg.decoded_dir.as_deref().ok_or_else(|| Error::Config("no decoded directory".into()))?;
            load_ply(decoded_path(dir, &input.name, &rp.tag), None)?
        }
    };
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(Decoded { cloud, t, s_prime: s_prime.unwrap_or(1), t0 })
}

fn restore(d: &Decoded, up: VoxelCloud, dus: bool) -> Result<VoxelCloud> {
    if dus {
        dus_restore(&up, d.s_prime, d.t0)
    } else {
        Ok(up)
    }
}

fn run_job(cfg: &ExperimentConfig, input: &Input, rp: &RatePoint, log: &RateLog) -> Result<(Vec<ReportRow>, Vec<RunRecord>)> {
    let dus = cfg.s_prime != SPrimePolicy::None;
    let v = &input.cloud;
    let peak = cfg.peak.unwrap_or(v.peak());
    let params = PsnrParams::with_peak(peak);
    let rate = log.get(&input.name, &rp.tag);
    let suffix = if dus { "+dus" } else { "" };

    let started = Instant::now();
    let d = decode(cfg, input, rp)?;
    let decode_ms = started.elapsed().as_secs_f64() * 1e3;
    if cfg.mode == Mode::Simulate {
        save_ply(&d.cloud, cfg.ply_format, cfg.out_dir.join(format!("{}_{}_decoded.ply", input.name, rp.tag)))?;
    }

    type Method = fn(&VoxelCloud, ScaleFactor, Translation) -> Result<VoxelCloud>;
    let methods: [(&str, Method); 2] = [("sr", super_resolve), ("nni", upscale_nni)];
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for (name, method) in methods {
        let started = Instant::now();
        let out = restore(&d, method(&d.cloud, rp.scale, d.t)?, dus)?;
        let wall_ms = decode_ms + started.elapsed().as_secs_f64() * 1e3;
        let report = d1_report(v, &out, params)?;
        let condition = format!("{name}{suffix}");
        save_ply(&out, cfg.ply_format, cfg.out_dir.join(format!("{}_{}_{}.ply", input.name, rp.tag, name)))?;
        info!("{} {} {}: D1 PSNR {:.3} dB, {} points", input.name, rp.tag, condition, report.psnr, out.len());
        rows.push(ReportRow {
            cloud: input.name.clone(),
            condition: condition.clone(),
            rate_bpp: rate,
            d1_psnr_db: report.psnr,
            points_in: v.len(),
            points_out: out.len(),
        });
        runs.push(RunRecord {
            cloud: input.name.clone(),
            condition,
            rate_point: rp.tag.clone(),
            scale: rp.scale.to_string(),
            s_prime: d.s_prime,
            wall_ms,
        });
    }
    Ok((rows, runs))
}

/// Runs every (input, rate point) job and writes the report, the run log,
/// the resolved configuration and all output clouds into `cfg.out_dir`.
///
/// Jobs run on `cfg.jobs` threads; rows come back in configuration order.
pub fn run_pipeline(cfg: &ExperimentConfig) -> Result<PipelineOutput> {
    fs::create_dir_all(&cfg.out_dir)?;
    fs::write(cfg.out_dir.join(RESOLVED_CONFIG_FILE), cfg.to_kv_string())?;
    let rate_points = cfg.rate_points()?;
    let log = match &cfg.rates {
        Some(p) => RateLog::read(File::open(p)?)?,
        None => RateLog::default(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;

    let results = pool.install(|| -> Result<Vec<(Vec<ReportRow>, Vec<RunRecord>)>> {
        let inputs = cfg
            .inputs
            .par_iter()
            .map(|p| Ok(Input { name: cloud_name(p), cloud: load_ply(p, None)? }))
            .collect::<Result<Vec<_>>>()?;
        let jobs: Vec<(&Input, &RatePoint)> =
            inputs.iter().flat_map(|i| rate_points.iter().map(move |rp| (i, rp))).collect();
        jobs.par_iter().map(|(i, rp)| run_job(cfg, i, rp, &log)).collect()
    })?;

    let (mut rows, mut runs) = (Vec::new(), Vec::new());
    for (r, u) in results {
        rows.extend(r);
        runs.extend(u);
    }
    write_report(&rows, File::create(cfg.out_dir.join(REPORT_FILE))?)?;
    write_runs(&runs, File::create(cfg.out_dir.join(RUNS_FILE))?)?;
    Ok(PipelineOutput { rows, runs })
}
