//! Geometry quality metrics and rate-distortion tooling.

mod bdrate;
mod nn;
mod psnr;
mod rd;

pub use bdrate::{bd_rate, BdRate, RateModel, INTEGRATION_STEPS};
pub use nn::{squared_distance, PointIndex};
pub use psnr::{d1_psnr, d1_report, directional_mse, directional_sse, psnr_from_mse, D1Report, PsnrParams};
pub use rd::{load_rd_csv, write_rd_csv, RdCurve, RdPoint};
