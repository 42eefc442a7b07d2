use serde::{Deserialize, Serialize};

use super::stats::{self, RunningMoments};
use crate::color::{self, HsvPlanes, LabPlanes};
use crate::image::ImageRgb8;

pub const WEIGHT_SIGMA_C: f64 = 0.4680;
pub const WEIGHT_CONL: f64 = 0.2745;
pub const WEIGHT_MU_S: f64 = 0.2576;

/// Divisor applied to the chroma std and the L percentile spread.
pub const LAB_SCALE: f64 = 100.0;

const LOW_PERCENTILE: f64 = 0.01;
const HIGH_PERCENTILE: f64 = 0.99;

/// UCIQE with its three components. `total` is always the weighted sum of
/// the stored components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UciqeScore {
    pub sigma_c: f64,
    pub conl: f64,
    pub mu_s: f64,
    pub total: f64,
}

impl UciqeScore {
    pub fn from_components(sigma_c: f64, conl: f64, mu_s: f64) -> Self {
        Self {
            sigma_c,
            conl,
            mu_s,
            total: weighted_total(sigma_c, conl, mu_s),
        }
    }

    pub const ZERO: UciqeScore = UciqeScore {
        sigma_c: 0.0,
        conl: 0.0,
        mu_s: 0.0,
        total: 0.0,
    };
}

pub(crate) fn weighted_total(sigma_c: f64, conl: f64, mu_s: f64) -> f64 {
    WEIGHT_SIGMA_C * sigma_c + WEIGHT_CONL * conl + WEIGHT_MU_S * mu_s
}

fn chroma(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

/// Population std of per-pixel chroma `sqrt(a² + b²)`, divided by [`LAB_SCALE`].
pub fn chroma_std(lab: &LabPlanes) -> f64 {
    let c: Vec<f64> = lab.a.iter().zip(&lab.b).map(|(&a, &b)| chroma(a, b)).collect();
    stats::population_std(&c) / LAB_SCALE
}

/// Single-pass variant of [`chroma_std`] (Welford). Agrees with the
/// two-pass form to within floating-point rounding.
pub fn chroma_std_streaming(lab: &LabPlanes) -> f64 {
    let mut acc = RunningMoments::new();
    acc.extend(lab.a.iter().zip(&lab.b).map(|(&a, &b)| chroma(a, b)));
    acc.population_std() / LAB_SCALE
}

/// `(P99(L) - P1(L)) / 100`, percentiles by linear interpolation.
pub fn luminance_contrast(lab: &LabPlanes) -> f64 {
    contrast_of(lab.l.clone())
}

fn contrast_of(mut l: Vec<f64>) -> f64 {
    if l.len() < 2 {
        return 0.0;
    }
    let hi = stats::percentile_select(&mut l, HIGH_PERCENTILE);
    let lo = stats::percentile_select(&mut l, LOW_PERCENTILE);
    (hi - lo) / LAB_SCALE
}

/// Arithmetic mean of the saturation plane.
pub fn mean_saturation(hsv: &HsvPlanes) -> f64 {
    stats::mean(&hsv.s)
}

/// Composes the plane conversions and the three component kernels.
pub fn uciqe_reference(image: &ImageRgb8) -> UciqeScore {
    let lab = color::srgb_to_lab(image);
    let hsv = color::srgb_to_hsv(image);
    UciqeScore::from_components(
        chroma_std(&lab),
        luminance_contrast(&lab),
        mean_saturation(&hsv),
    )
}

/// UCIQE of one image in a single fused pass. Bitwise equal to
/// [`uciqe_reference`]; only the intermediate planes that are needed get
/// materialized.
pub fn uciqe(image: &ImageRgb8) -> UciqeScore {
    let n = image.len();
    let mut l = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    let mut s_sum = stats::FixedSum::default();
    for &p in image.pixels() {
        let [pl, pa, pb] = color::srgb_pixel_to_lab_fast(p);
        l.push(pl);
        c.push(chroma(pa, pb));
        s_sum.add(color::rgb_pixel_to_hsv(p).1);
    }
    let sigma_c = stats::population_std(&c) / LAB_SCALE;
    let mu_s = s_sum.value() / n as f64;
    UciqeScore::from_components(sigma_c, contrast_of(l), mu_s)
}
