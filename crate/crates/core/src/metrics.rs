//! Full-reference quality measures between an original and a watermarked
//! image: MAE, MSE, PSNR, and global (single-window) SSIM and UIQI.
//!
//! All three channels are pooled into one sample set of `3 * W * H` values.
//! Moments are accumulated in `f64` with a two-pass mean-then-deviation
//! scheme.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::raster::{Channel, ImagePlanes};

/// Peak intensity for 8-bit samples.
pub const PEAK: f64 = 255.0;
/// SSIM luminance stabilizer, `(0.01 * 255)^2`.
pub const SSIM_C1: f64 = (0.01 * PEAK) * (0.01 * PEAK);
/// SSIM contrast stabilizer, `(0.03 * 255)^2`.
pub const SSIM_C2: f64 = (0.03 * PEAK) * (0.03 * PEAK);

fn check_dims(x: &ImagePlanes, v: &ImagePlanes) -> Result<()> {
    if x.dims() != v.dims() {
        return Err(Error::DimensionMismatch {
            expected: x.dims(),
            actual: v.dims(),
        });
    }
    Ok(())
}

fn pooled<'a>(img: &'a ImagePlanes) -> impl Iterator<Item = u8> + Clone + 'a {
    Channel::ALL
        .into_iter()
        .flat_map(move |c| img.plane(c).as_slice().iter().copied())
}

fn sample_count(img: &ImagePlanes) -> f64 {
    (3 * img.width() * img.height()) as f64
}

pub fn mae(x: &ImagePlanes, v: &ImagePlanes) -> Result<f64> {
    check_dims(x, v)?;
    let sum: u64 = pooled(x)
        .zip(pooled(v))
        .map(|(a, b)| u64::from(a.abs_diff(b)))
        .sum();
    Ok(sum as f64 / sample_count(x))
}

pub fn mse(x: &ImagePlanes, v: &ImagePlanes) -> Result<f64> {
    check_dims(x, v)?;
    let sum: u64 = pooled(x)
        .zip(pooled(v))
        .map(|(a, b)| {
            let d = u64::from(a.abs_diff(b));
            d * d
        })
        .sum();
    Ok(sum as f64 / sample_count(x))
}

/// `10 log10(255^2 / mse)`, or `+inf` when `mse == 0`.
pub fn psnr(mse: f64) -> Result<f64> {
    if mse.is_nan() || mse < 0.0 {
        return Err(Error::NegativeMse(mse));
    }
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / mse).log10())
}

/// Global first and second moments of a pair of images.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairStats {
    pub mean_x: f64,
    pub mean_v: f64,
    pub var_x: f64,
    pub var_v: f64,
    pub cov: f64,
}

impl PairStats {
    pub fn compute(x: &ImagePlanes, v: &ImagePlanes) -> Result<Self> {
        check_dims(x, v)?;
        let n = sample_count(x);
        let (sx, sv) = pooled(x)
            .zip(pooled(v))
            .fold((0u64, 0u64), |(sx, sv), (a, b)| (sx + u64::from(a), sv + u64::from(b)));
        let mean_x = sx as f64 / n;
        let mean_v = sv as f64 / n;
        let (mut var_x, mut var_v, mut cov) = (0.0, 0.0, 0.0);
        for (a, b) in pooled(x).zip(pooled(v)) {
            let dx = f64::from(a) - mean_x;
            let dv = f64::from(b) - mean_v;
            var_x += dx * dx;
            var_v += dv * dv;
            cov += dx * dv;
        }
        Ok(Self {
            mean_x,
            mean_v,
            var_x: var_x / n,
            var_v: var_v / n,
            cov: cov / n,
        })
    }

    pub fn ssim(&self, c1: f64, c2: f64) -> f64 {
        let luminance = (2.0 * self.mean_x * self.mean_v + c1)
            / (self.mean_x * self.mean_x + self.mean_v * self.mean_v + c1);
        let structure = (2.0 * self.cov + c2) / (self.var_x + self.var_v + c2);
        luminance * structure
    }

    pub fn uiqi(&self) -> Result<f64> {
        if self.var_x <= 0.0 || self.var_v <= 0.0 {
            return Err(Error::UndefinedStatistics("constant image has zero variance"));
        }
        let mean_sq = self.mean_x * self.mean_x + self.mean_v * self.mean_v;
        if mean_sq <= 0.0 {
            return Err(Error::UndefinedStatistics("both images have zero mean"));
        }
        let (sx, sv) = (self.var_x.sqrt(), self.var_v.sqrt());
        let correlation = self.cov / (sx * sv);
        let luminance = 2.0 * self.mean_x * self.mean_v / mean_sq;
        let contrast = 2.0 * sx * sv / (self.var_x + self.var_v);
        Ok(correlation * luminance * contrast)
    }
}

pub fn ssim(x: &ImagePlanes, v: &ImagePlanes) -> Result<f64> {
    ssim_with_constants(x, v, SSIM_C1, SSIM_C2)
}

pub fn ssim_with_constants(x: &ImagePlanes, v: &ImagePlanes, c1: f64, c2: f64) -> Result<f64> {
    Ok(PairStats::compute(x, v)?.ssim(c1, c2))
}

/// Errors with [`Error::UndefinedStatistics`] when either image is
/// constant or both have zero mean.
pub fn uiqi(x: &ImagePlanes, v: &ImagePlanes) -> Result<f64> {
    PairStats::compute(x, v)?.uiqi()
}

/// The five measures together.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub mae: f64,
    pub mse: f64,
    #[serde(serialize_with = "ser_db", deserialize_with = "de_db")]
    pub psnr_db: f64,
    pub ssim: f64,
    pub uiqi: f64,
}

/// Identical images have undefined UIQI only if they are constant; such a
/// pair is reported with `uiqi = 1` since the images are equal.
pub fn quality_report(x: &ImagePlanes, v: &ImagePlanes) -> Result<QualityReport> {
    let mse_value = mse(x, v)?;
    let stats = PairStats::compute(x, v)?;
    let uiqi = match stats.uiqi() {
        Ok(q) => q,
        Err(_) if x == v => 1.0,
        Err(e) => return Err(e),
    };
    Ok(QualityReport {
        mae: mae(x, v)?,
        mse: mse_value,
        psnr_db: psnr(mse_value)?,
        ssim: stats.ssim(SSIM_C1, SSIM_C2),
        uiqi,
    })
}

/// Decimal form used in JSON and CSV output; infinity prints as `inf`.
pub fn format_db(db: f64) -> String {
    if db.is_infinite() && db > 0.0 {
        "inf".to_string()
    } else {
        db.to_string()
    }
}

fn ser_db<S: Serializer>(db: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if db.is_infinite() && *db > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*db)
    }
}

fn de_db<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Db {
        Num(f64),
        Text(String),
    }
    match Db::deserialize(d)? {
        Db::Num(v) => Ok(v),
        Db::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Db::Text(t) => Err(serde::de::Error::custom(format!("bad psnr `{t}`"))),
    }
}
