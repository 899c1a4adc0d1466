use std::io::{Read, Write};

use crate::error::{Error, Result};

/// One operating point: rate in bits per input point, quality in dB.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RdPoint {
    pub rate: f64,
    pub quality: f64,
}

/// Operating points of one codec configuration, sorted by rate.
#[derive(Clone, Debug, PartialEq)]
pub struct RdCurve {
    label: String,
    points: Vec<RdPoint>,
}

impl RdCurve {
    /// Sorts `points` by rate; rates must be positive, finite and distinct.
    /// Quality may be `+inf` (lossless) but not NaN.
    pub fn new(label: impl Into<String>, mut points: Vec<RdPoint>) -> Result<Self> {
        let label = label.into();
        for p in &points {
            if !(p.rate.is_finite() && p.rate > 0.0) {
                return Err(Error::RdCurve(format!("{label}: rate {} must be positive and finite", p.rate)));
            }
            if p.quality.is_nan() || p.quality == f64::NEG_INFINITY {
                return Err(Error::RdCurve(format!("{label}: invalid quality {}", p.quality)));
            }
        }
        points.sort_by(|a, b| a.rate.total_cmp(&b.rate));
        if let Some(w) = points.windows(2).find(|w| w[0].rate == w[1].rate) {
            return Err(Error::RdCurve(format!("{label}: duplicate rate {}", w[0].rate)));
        }
        Ok(RdCurve { label, points })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[RdPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_label(self, label: impl Into<String>) -> Self {
        RdCurve { label: label.into(), ..self }
    }
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim() == name)
}

/// Reads RD curves from CSV, grouped by label in order of first appearance.
///
/// Accepts `label,rate_bpp,d1_psnr_db`, or the pipeline report schema
/// (`cloud,condition,rate_bpp,d1_psnr_db,...`) where the label becomes
/// `cloud/condition` and rows with an empty rate are skipped.
pub fn load_rd_csv<R: Read>(r: R) -> Result<Vec<RdCurve>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rdr.headers()?.clone();
    let rate_col = column(&headers, "rate_bpp").ok_or_else(|| Error::Csv("missing rate_bpp column".into()))?;
    let psnr_col = column(&headers, "d1_psnr_db").ok_or_else(|| Error::Csv("missing d1_psnr_db column".into()))?;
    let label_cols = match (column(&headers, "label"), column(&headers, "cloud"), column(&headers, "condition")) {
        (Some(l), _, _) => vec![l],
        (None, Some(c), Some(k)) => vec![c, k],
        _ => return Err(Error::Csv("missing label (or cloud,condition) columns".into())),
    };
    let report_schema = label_cols.len() == 2;

    let mut groups: Vec<(String, Vec<RdPoint>)> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).ok_or_else(|| Error::Csv(format!("row {}: missing field", line + 2)));
        let label = label_cols.iter().map(|&i| field(i)).collect::<Result<Vec<_>>>()?.join("/");
        let rate_txt = field(rate_col)?;
        if rate_txt.is_empty() && report_schema {
            continue;
        }
        let num = |txt: &str| {
            txt.parse::<f64>().map_err(|_| Error::Csv(format!("row {}: bad number {txt:?}", line + 2)))
        };
        let point = RdPoint { rate: num(rate_txt)?, quality: num(field(psnr_col)?)? };
        match groups.iter_mut().find(|(l, _)| *l == label) {
            Some((_, pts)) => pts.push(point),
            None => groups.push((label, vec![point])),
        }
    }
    groups.into_iter().map(|(label, pts)| RdCurve::new(label, pts)).collect()
}

pub fn write_rd_csv<W: Write>(curves: &[RdCurve], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["label", "rate_bpp", "d1_psnr_db"])?;
    for c in curves {
        for p in c.points() {
            wtr.write_record([c.label(), &p.rate.to_string(), &p.quality.to_string()])?;
        }
    }
    wtr.flush()?;
    Ok(())
}
