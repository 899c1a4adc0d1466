use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fracsr::ctc::{ctc_scale, parse_ctc_cell};
use fracsr::geometry::{
    downscale, load_ply, save_ply, translation_of, upscale_nni, PlyFormat, ScaleFactor, Translation,
};
use fracsr::metrics::{bd_rate, d1_report, load_rd_csv, PsnrParams};
use fracsr::pipeline::{run_pipeline, ConfigBuilder, REPORT_FILE};
use fracsr::plot::emit_plot;
use fracsr::sr::{build_lut, choose_s_prime, dus_super_resolve, super_resolve_traced};

#[derive(Parser)]
#[command(name = "fracsr", version, about = "Fractional super-resolution for down-scaled voxelized point clouds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScaleArgs {
    /// Scale factor as NUM/DEN or an integer
    #[arg(long, conflicts_with = "ctc")]
    scale: Option<ScaleFactor>,
    /// CTC rate point as PREC:RID, e.g. 10:R4
    #[arg(long)]
    ctc: Option<String>,
}

impl ScaleArgs {
    fn resolve(&self) -> Result<ScaleFactor> {
        match (&self.scale, &self.ctc) {
            (Some(s), None) => Ok(*s),
            (None, Some(cell)) => {
                let (prec, rid) = parse_ctc_cell(cell)?;
                Ok(ctc_scale(prec, rid)?)
            }
            _ => bail!("give exactly one of --scale or --ctc"),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write ASCII PLY instead of binary
    #[arg(long)]
    ascii: bool,
}

impl OutputArgs {
    fn format(&self) -> PlyFormat {
        if self.ascii {
            PlyFormat::Ascii
        } else {
            PlyFormat::BinaryLittleEndian
        }
    }
}

fn parse_translation(s: &str) -> Result<Translation, String> {
    let parts: Vec<i32> = s
        .split(',')
        .map(|p| p.trim().parse::<i32>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [x, y, z] => Ok(Translation([*x, *y, *z])),
        _ => Err("expected X,Y,Z".into()),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Down-scale a cloud (simulates the codec's lossy geometry step)
    Downscale {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        scale: ScaleArgs,
        /// Translation subtracted before scaling; defaults to the cloud minimum
        #[arg(long, value_parser = parse_translation)]
        translation: Option<Translation>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Nearest-neighbour up-scale of a down-scaled cloud
    UpscaleNni {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        scale: ScaleArgs,
        #[arg(long, value_parser = parse_translation, default_value = "0,0,0")]
        translation: Translation,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Self-supervised fractional super-resolution of a down-scaled cloud
    Sr {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        scale: ScaleArgs,
        #[arg(long, value_parser = parse_translation, default_value = "0,0,0")]
        translation: Translation,
        /// Dump the (single-pass) LUT as CSV
        #[arg(long)]
        lut_dump: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Down-up-scaling SR on an original cloud (codec simulated)
    DusSr {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        scale: ScaleArgs,
        /// Pre-scale factor: auto or a power of two
        #[arg(long, default_value = "auto")]
        sprime: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// D1 (point-to-point) PSNR between two clouds
    Psnr {
        reference: PathBuf,
        test: PathBuf,
        /// Peak value; defaults to 2^depth - 1 of the reference
        #[arg(long)]
        peak: Option<u32>,
    },
    /// BD-rate of every curve in an RD CSV against an anchor curve
    Bdrate {
        csv: PathBuf,
        #[arg(long)]
        anchor: String,
    },
    /// Batch experiment over clouds and rate points
    Pipeline {
        /// Input PLY files (added to any listed in the config file)
        inputs: Vec<PathBuf>,
        /// key = value configuration file
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        scale: Option<String>,
        /// PREC:RID, PREC:RID,RID,... or PREC:all
        #[arg(long)]
        ctc: Option<String>,
        /// auto, none or a power of two
        #[arg(long)]
        sprime: Option<String>,
        #[arg(long)]
        peak: Option<u32>,
        /// simulate or external
        #[arg(long)]
        mode: Option<String>,
        /// Directory holding externally decoded clouds (<cloud>_<tag>.ply)
        #[arg(long)]
        decoded: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// External rate log CSV (cloud,rate_id,rate_bpp)
        #[arg(long)]
        rates: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Render RD curves from CSV as SVG
    Plot {
        csv: PathBuf,
        output: PathBuf,
    },
}

fn load(path: &PathBuf) -> Result<fracsr::VoxelCloud> {
    load_ply(path, None).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    match cli.command {
        Command::Downscale { input, output, scale, translation, out } => {
            let v = load(&input)?;
            let t = match translation {
                Some(t) => t,
                None => translation_of(&v)?,
            };
            let d = downscale(&v, scale.resolve()?, t)?;
            save_ply(&d, out.format(), &output)?;
            let [x, y, z] = t.components();
            writeln!(stdout, "points {} -> {}; translation {x},{y},{z}", v.len(), d.len())?;
        }
        Command::UpscaleNni { input, output, scale, translation, out } => {
            let v = load(&input)?;
            let up = upscale_nni(&v, scale.resolve()?, translation)?;
            save_ply(&up, out.format(), &output)?;
            writeln!(stdout, "points {} -> {}", v.len(), up.len())?;
        }
        Command::Sr { input, output, scale, translation, lut_dump, out } => {
            let v = load(&input)?;
            let s = scale.resolve()?;
            let run = super_resolve_traced(&v, s, translation)?;
            if let Some(path) = lut_dump {
                let lut = build_lut(&v, run.passes[0].factor)?;
                lut.write_csv(File::create(&path)?)?;
            }
            save_ply(&run.output, out.format(), &output)?;
            for (i, p) in run.passes.iter().enumerate() {
                writeln!(
                    stdout,
                    "pass {i}: x{} {} -> {} points ({} LUT entries)",
                    p.factor, p.points_in, p.points_out, p.lut_entries
                )?;
            }
        }
        Command::DusSr { input, output, scale, sprime, out } => {
            let v = load(&input)?;
            let k = match sprime.as_str() {
                "auto" => choose_s_prime(&v)?,
                n => n.parse().context("--sprime must be auto or a power of two")?,
            };
            let sr = dus_super_resolve(&v, scale.resolve()?, k)?;
            save_ply(&sr, out.format(), &output)?;
            writeln!(stdout, "s' = {k}; points {} -> {}", v.len(), sr.len())?;
        }
        Command::Psnr { reference, test, peak } => {
            let a = load(&reference)?;
            let b = load(&test)?;
            let r = d1_report(&a, &b, PsnrParams::with_peak(peak.unwrap_or(a.peak())))?;
            writeln!(stdout, "mse_ab {}\nmse_ba {}\nd1_psnr_db {}", r.mse_ab, r.mse_ba, r.psnr)?;
        }
        Command::Bdrate { csv, anchor } => {
            let curves = load_rd_csv(File::open(&csv).with_context(|| format!("reading {}", csv.display()))?)?;
            let base = curves
                .iter()
                .find(|c| c.label() == anchor)
                .with_context(|| format!("no curve labelled {anchor:?}"))?;
            for c in curves.iter().filter(|c| c.label() != anchor) {
                let r = bd_rate(base, c)?;
                let flag = if r.is_fallback() { " (piecewise-cubic, < 4 points)" } else { "" };
                writeln!(stdout, "{}: {:.4}%{flag}", c.label(), r.percent)?;
            }
        }
        Command::Pipeline { inputs, config, scale, ctc, sprime, peak, mode, decoded, out, rates, jobs } => {
            let mut builder = ConfigBuilder::new();
            if let Some(path) = &config {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                builder = builder.parse_text(&text)?;
            }
            for p in &inputs {
                builder.set("inputs", &p.display().to_string())?;
            }
            let overrides = [
                ("scale", scale),
                ("ctc", ctc),
                ("sprime", sprime),
                ("peak", peak.map(|p| p.to_string())),
                ("mode", mode),
                ("decoded", decoded.map(|p| p.display().to_string())),
                ("out", out.map(|p| p.display().to_string())),
                ("rates", rates.map(|p| p.display().to_string())),
                ("jobs", jobs.map(|j| j.to_string())),
            ];
            for (key, value) in overrides {
                if let Some(v) = value {
                    builder.set(key, &v)?;
                }
            }
            let cfg = builder.build()?;
            let result = run_pipeline(&cfg)?;
            for r in &result.rows {
                writeln!(stdout, "{} {} {:.4} dB ({} -> {} points)", r.cloud, r.condition, r.d1_psnr_db, r.points_in, r.points_out)?;
            }
            writeln!(stdout, "report: {}", cfg.out_dir.join(REPORT_FILE).display())?;
        }
        Command::Plot { csv, output } => {
            let curves = load_rd_csv(File::open(&csv).with_context(|| format!("reading {}", csv.display()))?)?;
            let mut w = BufWriter::new(File::create(&output)?);
            emit_plot(&curves, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    run(Cli::parse())
}
