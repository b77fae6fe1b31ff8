//! Quality tables: protect every image at every requested plane and score
//! the result against the original.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::embedding::BitPlane;
use crate::error::{Error, Result};
use crate::keying::CameraId;
use crate::metrics::{format_db, quality_report, QualityReport};
use crate::protection::protect;
use crate::raster::ImagePlanes;

pub const CSV_HEADER: [&str; 10] = [
    "image", "width", "height", "plane", "mae", "mse", "psnr_db", "ssim", "uiqi", "ms",
];

/// One (image, plane) measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub image: String,
    pub width: usize,
    pub height: usize,
    pub plane: BitPlane,
    pub quality: QualityReport,
    pub ms: f64,
}

/// Per-plane means over all images.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneAverage {
    pub plane: BitPlane,
    pub images: usize,
    pub quality: QualityReport,
    pub ms: f64,
}

/// Reference figures for two earlier schemes. Only PSNR, MSE
/// and SSIM were reported for them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Baseline {
    pub name: &'static str,
    pub psnr_db: f64,
    pub mse: f64,
    pub ssim: f64,
}

pub const BASELINES: [Baseline; 2] = [
    Baseline {
        name: "SGVC",
        psnr_db: 52.16478,
        mse: 0.57906,
        ssim: 0.95148,
    },
    Baseline {
        name: "MW",
        psnr_db: 42.34178,
        mse: 0.97638,
        ssim: 0.92584,
    },
];

#[derive(Clone, Debug, PartialEq)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    pub averages: Vec<PlaneAverage>,
}

impl BenchResult {
    pub fn average(&self, plane: BitPlane) -> Option<&PlaneAverage> {
        self.averages.iter().find(|a| a.plane == plane)
    }
}

/// Runs every (image, plane) pair. Rows are ordered image-major, then by
/// the order of `planes`, whatever order the work finishes in.
pub fn run_bench(
    images: &[(String, ImagePlanes)],
    planes: &[BitPlane],
    id: &CameraId,
) -> Result<BenchResult> {
    if images.is_empty() {
        return Err(Error::InvalidInput("no images to benchmark".into()));
    }
    if planes.is_empty() {
        return Err(Error::InvalidInput("no planes requested".into()));
    }
    let jobs: Vec<(usize, BitPlane)> = (0..images.len())
        .flat_map(|i| planes.iter().map(move |&p| (i, p)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(i, plane)| {
            let (name, image) = &images[i];
            let start = Instant::now();
            let protected = protect(image, id, plane)?;
            let quality = quality_report(image, &protected.planes)?;
            Ok(BenchRow {
                image: name.clone(),
                width: image.width(),
                height: image.height(),
                plane,
                quality,
                ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let averages = planes
        .iter()
        .map(|&plane| {
            let of_plane: Vec<&BenchRow> = rows.iter().filter(|r| r.plane == plane).collect();
            let n = of_plane.len() as f64;
            let mean = |f: fn(&BenchRow) -> f64| of_plane.iter().map(|r| f(r)).sum::<f64>() / n;
            PlaneAverage {
                plane,
                images: of_plane.len(),
                quality: QualityReport {
                    mae: mean(|r| r.quality.mae),
                    mse: mean(|r| r.quality.mse),
                    psnr_db: mean(|r| r.quality.psnr_db),
                    ssim: mean(|r| r.quality.ssim),
                    uiqi: mean(|r| r.quality.uiqi),
                },
                ms: mean(|r| r.ms),
            }
        })
        .collect();

    Ok(BenchResult { rows, averages })
}

fn quality_fields(q: &QualityReport) -> [String; 5] {
    [
        q.mae.to_string(),
        q.mse.to_string(),
        format_db(q.psnr_db),
        q.ssim.to_string(),
        q.uiqi.to_string(),
    ]
}

/// Data rows, then one `AVG` row per plane, then (optionally) one row per
/// baseline with its unreported columns left empty.
pub fn write_csv<W: Write>(out: W, result: &BenchResult, baselines: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &result.rows {
        let [mae, mse, psnr, ssim, uiqi] = quality_fields(&r.quality);
        w.write_record([
            r.image.clone(),
            r.width.to_string(),
            r.height.to_string(),
            r.plane.to_string(),
            mae,
            mse,
            psnr,
            ssim,
            uiqi,
            format!("{:.3}", r.ms),
        ])
        .map_err(csv_err)?;
    }
    for a in &result.averages {
        let [mae, mse, psnr, ssim, uiqi] = quality_fields(&a.quality);
        w.write_record([
            "AVG".to_string(),
            String::new(),
            String::new(),
            a.plane.to_string(),
            mae,
            mse,
            psnr,
            ssim,
            uiqi,
            format!("{:.3}", a.ms),
        ])
        .map_err(csv_err)?;
    }
    if baselines {
        for b in BASELINES {
            w.write_record([
                b.name.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                b.mse.to_string(),
                b.psnr_db.to_string(),
                b.ssim.to_string(),
                String::new(),
                String::new(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Human-readable per-plane summary.
pub fn summary_table(result: &BenchResult, baselines: bool) -> String {
    let mut s = String::from("plane  images  AVG-MAE    AVG-MSE     AVG-PSNR   AVG-SSIM   AVG-UIQI\n");
    for a in &result.averages {
        let q = &a.quality;
        s.push_str(&format!(
            "{:<6} {:<7} {:<10.6} {:<11.6} {:<10.4} {:<10.6} {:<10.6}\n",
            a.plane.index(),
            a.images,
            q.mae,
            q.mse,
            q.psnr_db,
            q.ssim,
            q.uiqi
        ));
    }
    if baselines {
        for b in BASELINES {
            s.push_str(&format!(
                "{:<6} {:<7} {:<10} {:<11.5} {:<10.5} {:<10.5} {:<10}\n",
                b.name, "-", "n/a", b.mse, b.psnr_db, b.ssim, "n/a"
            ));
        }
    }
    s
}
