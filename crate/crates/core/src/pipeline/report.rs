use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One row of the metric report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub cloud: String,
    pub condition: String,
    pub rate_bpp: Option<f64>,
    pub d1_psnr_db: f64,
    pub points_in: usize,
    pub points_out: usize,
}

/// Per-job bookkeeping that is not part of the report proper.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub cloud: String,
    pub condition: String,
    pub rate_point: String,
    pub scale: String,
    pub s_prime: u32,
    pub wall_ms: f64,
}

pub fn write_report<W: Write>(rows: &[ReportRow], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    if rows.is_empty() {
        wtr.write_record(["cloud", "condition", "rate_bpp", "d1_psnr_db", "points_in", "points_out"])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_report<R: Read>(r: R) -> Result<Vec<ReportRow>> {
    csv::Reader::from_reader(r).deserialize().map(|r| r.map_err(Error::from)).collect()
}

pub fn write_runs<W: Write>(runs: &[RunRecord], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in runs {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct RateLogRow {
    cloud: String,
    rate_id: String,
    rate_bpp: f64,
}

/// External rate log `cloud,rate_id,rate_bpp`, keyed by `(cloud, rate_id)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RateLog(HashMap<(String, String), f64>);

impl RateLog {
    pub fn read<R: Read>(r: R) -> Result<Self> {
        let mut map = HashMap::new();
        for row in csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r).deserialize::<RateLogRow>() {
            let row = row?;
            if !(row.rate_bpp.is_finite() && row.rate_bpp > 0.0) {
                return Err(Error::Csv(format!("rate for {}/{} must be positive", row.cloud, row.rate_id)));
            }
            map.insert((row.cloud, row.rate_id), row.rate_bpp);
        }
        Ok(RateLog(map))
    }

    pub fn get(&self, cloud: &str, rate_id: &str) -> Option<f64> {
        self.0.get(&(cloud.to_string(), rate_id.to_string())).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::load_rd_csv;

    fn rows() -> Vec<ReportRow> {
        vec![
            ReportRow {
                cloud: "sphere".into(),
                condition: "sr".into(),
                rate_bpp: Some(0.25),
                d1_psnr_db: 71.123456789,
                points_in: 100,
                points_out: 98,
            },
            ReportRow {
                cloud: "sphere".into(),
                condition: "nni".into(),
                rate_bpp: None,
                d1_psnr_db: f64::INFINITY,
                points_in: 100,
                points_out: 60,
            },
        ]
    }

    #[test]
    fn report_round_trips() {
        let mut buf = Vec::new();
        write_report(&rows(), &mut buf).unwrap();
        assert!(buf.starts_with(b"cloud,condition,rate_bpp,d1_psnr_db,points_in,points_out\n"));
        assert_eq!(read_report(buf.as_slice()).unwrap(), rows());
    }

    #[test]
    fn report_feeds_rd_loader() {
        let mut buf = Vec::new();
        write_report(&rows(), &mut buf).unwrap();
        let curves = load_rd_csv(buf.as_slice()).unwrap();
        assert_eq!(curves.len(), 1);
        assert_eq!(curves[0].points()[0].quality, 71.123456789);
    }

    #[test]
    fn rate_log_lookup() {
        let log = RateLog::read("cloud,rate_id,rate_bpp\nsphere,R6,0.9\nsphere,R5,0.5\n".as_bytes()).unwrap();
        assert_eq!(log.get("sphere", "R5"), Some(0.5));
        assert_eq!(log.get("torus", "R5"), None);
        assert!(RateLog::read("cloud,rate_id,rate_bpp\nsphere,R6,0\n".as_bytes()).is_err());
    }
}
