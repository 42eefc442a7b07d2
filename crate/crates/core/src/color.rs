//! sRGB to CIELab (D65, 2° observer) and HSV conversions.
//!
//! Lab stays in native CIE units (L in [0, 100], a/b unscaled). Any scaling
//! applied for quality scores lives in [`crate::metrics`].

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::image::ImageRgb8;

/// sRGB (linear) to XYZ, D65.
const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_175_0],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

/// D65 reference white as the matrix image of linear (1, 1, 1), so sRGB
/// white lands exactly on L = 100, a = b = 0.
pub const D65_WHITE: [f64; 3] = [
    RGB_TO_XYZ[0][0] + RGB_TO_XYZ[0][1] + RGB_TO_XYZ[0][2],
    RGB_TO_XYZ[1][0] + RGB_TO_XYZ[1][1] + RGB_TO_XYZ[1][2],
    RGB_TO_XYZ[2][0] + RGB_TO_XYZ[2][1] + RGB_TO_XYZ[2][2],
];

const EPSILON: f64 = 216.0 / 24389.0; // (6/29)^3
const KAPPA: f64 = 24389.0 / 27.0;

/// Per-pixel CIELab planes in native units.
#[derive(Debug, Clone, PartialEq)]
pub struct LabPlanes {
    pub width: usize,
    pub height: usize,
    pub l: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl LabPlanes {
    /// Builds planes directly, e.g. for synthetic chroma distributions.
    pub fn from_planes(
        width: usize,
        height: usize,
        l: Vec<f64>,
        a: Vec<f64>,
        b: Vec<f64>,
    ) -> Result<Self> {
        let n = width * height;
        if l.len() != n || a.len() != n || b.len() != n {
            return Err(Error::InvalidImage(format!(
                "Lab planes must each hold {n} values for {width}x{height}"
            )));
        }
        Ok(Self {
            width,
            height,
            l,
            a,
            b,
        })
    }

    pub fn len(&self) -> usize {
        self.l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l.is_empty()
    }
}

/// Per-pixel hexcone HSV planes. H in degrees [0, 360), S and V in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct HsvPlanes {
    pub width: usize,
    pub height: usize,
    pub h: Vec<f64>,
    pub s: Vec<f64>,
    pub v: Vec<f64>,
}

impl HsvPlanes {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// sRGB transfer function inverse for one 8-bit channel value.
pub fn srgb_to_linear(c: u8) -> f64 {
    let c = c as f64 / 255.0;
    if c <= 0.040_45 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

// Cube root for positive finite inputs: bit-trick seed, two Halley steps, a
// Newton polish. Within 2 ulp of `f64::cbrt`.
fn cbrt_pos(x: f64) -> f64 {
    let mut y = f64::from_bits(x.to_bits() / 3 + 0x2A9F_7893_782D_A1CE);
    for _ in 0..2 {
        let y3 = y * y * y;
        y *= (y3 + 2.0 * x) / (2.0 * y3 + x);
    }
    y - (y * y * y - x) / (3.0 * y * y)
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        cbrt_pos(t)
    } else {
        t * (841.0 / 108.0) + 4.0 / 29.0
    }
}

fn linear_to_lab(lin: [f64; 3]) -> [f64; 3] {
    let m = &RGB_TO_XYZ;
    let x = m[0][0] * lin[0] + m[0][1] * lin[1] + m[0][2] * lin[2];
    let y = m[1][0] * lin[0] + m[1][1] * lin[1] + m[1][2] * lin[2];
    let z = m[2][0] * lin[0] + m[2][1] * lin[1] + m[2][2] * lin[2];
    let yr = y / D65_WHITE[1];
    let fx = lab_f(x / D65_WHITE[0]);
    let fy = lab_f(yr);
    let fz = lab_f(z / D65_WHITE[2]);
    // linear segment written as KAPPA * Y so black is exactly 0
    let l = if yr > EPSILON { 116.0 * fy - 16.0 } else { KAPPA * yr };
    [l, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// Lab of a single sRGB byte triple, computed without tables.
pub fn srgb_pixel_to_lab(rgb: [u8; 3]) -> [f64; 3] {
    linear_to_lab(rgb.map(srgb_to_linear))
}

fn linear_table() -> &'static [f64; 256] {
    static TABLE: OnceLock<[f64; 256]> = OnceLock::new();
    TABLE.get_or_init(|| std::array::from_fn(|i| srgb_to_linear(i as u8)))
}

/// Reference conversion: every pixel goes through the full formula chain.
pub fn srgb_to_lab(image: &ImageRgb8) -> LabPlanes {
    convert_lab(image, srgb_pixel_to_lab)
}

/// [`srgb_pixel_to_lab`] with the transfer function read from a table.
pub fn srgb_pixel_to_lab_fast(rgb: [u8; 3]) -> [f64; 3] {
    let table = linear_table();
    linear_to_lab(rgb.map(|c| table[c as usize]))
}

/// Same chain with the transfer function tabulated over the 256 byte values.
/// The table entries are produced by [`srgb_to_linear`], so results are
/// bitwise equal to [`srgb_to_lab`].
pub fn srgb_to_lab_fast(image: &ImageRgb8) -> LabPlanes {
    convert_lab(image, srgb_pixel_to_lab_fast)
}

fn convert_lab(image: &ImageRgb8, f: impl Fn([u8; 3]) -> [f64; 3]) -> LabPlanes {
    let n = image.len();
    let (mut l, mut a, mut b) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for &p in image.pixels() {
        let [pl, pa, pb] = f(p);
        l.push(pl);
        a.push(pa);
        b.push(pb);
    }
    LabPlanes {
        width: image.width(),
        height: image.height(),
        l,
        a,
        b,
    }
}

/// Hexcone HSV of one byte triple: `(h_degrees, s, v)`.
pub fn rgb_pixel_to_hsv([r, g, b]: [u8; 3]) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let v = max as f64 / 255.0;
    if max == min {
        return (0.0, 0.0, v);
    }
    let delta = (max - min) as f64;
    let s = delta / max as f64;
    let (r, g, b) = (r as f64, g as f64, b as f64);
    let sector = if max as f64 == r {
        (g - b) / delta
    } else if max as f64 == g {
        (b - r) / delta + 2.0
    } else {
        (r - g) / delta + 4.0
    };
    let mut h = 60.0 * sector;
    if h < 0.0 {
        h += 360.0;
    }
    (h, s, v)
}

/// Inverse hexcone mapping back to bytes.
pub fn hsv_to_rgb_pixel(h: f64, s: f64, v: f64) -> [u8; 3] {
    let max = v * 255.0;
    let min = max * (1.0 - s);
    let delta = max - min;
    let sector = h / 60.0;
    let (r, g, b) = if sector < 1.0 {
        (max, min + delta * sector, min)
    } else if sector < 2.0 {
        (min + delta * (2.0 - sector), max, min)
    } else if sector < 3.0 {
        (min, max, min + delta * (sector - 2.0))
    } else if sector < 4.0 {
        (min, min + delta * (4.0 - sector), max)
    } else if sector < 5.0 {
        (min + delta * (sector - 4.0), min, max)
    } else {
        (max, min, min + delta * (6.0 - sector))
    };
    [r, g, b].map(crate::image::to_byte)
}

pub fn srgb_to_hsv(image: &ImageRgb8) -> HsvPlanes {
    let n = image.len();
    let (mut h, mut s, mut v) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for &p in image.pixels() {
        let (ph, ps, pv) = rgb_pixel_to_hsv(p);
        h.push(ph);
        s.push(ps);
        v.push(pv);
    }
    HsvPlanes {
        width: image.width(),
        height: image.height(),
        h,
        s,
        v,
    }
}
