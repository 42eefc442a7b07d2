use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::ImageRgb8;

/// Reported PSNR never exceeds this, so identical images stay finite.
pub const PSNR_CAP_DB: f64 = 99.0;

/// Side length of the square SSIM window.
pub const SSIM_WINDOW: usize = 8;

const C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullRefScore {
    pub psnr_db: f64,
    pub ssim: f64,
}

fn check_dims(reference: &ImageRgb8, test: &ImageRgb8) -> Result<()> {
    if reference.width() != test.width() || reference.height() != test.height() {
        return Err(Error::DimensionMismatch {
            ref_width: reference.width(),
            ref_height: reference.height(),
            test_width: test.width(),
            test_height: test.height(),
        });
    }
    Ok(())
}

/// PSNR over all three channels, `10 log10(255² / MSE)`, capped at
/// [`PSNR_CAP_DB`].
pub fn psnr(reference: &ImageRgb8, test: &ImageRgb8) -> Result<f64> {
    check_dims(reference, test)?;
    let sse: u64 = reference
        .as_bytes()
        .iter()
        .zip(test.as_bytes())
        .map(|(&a, &b)| {
            let d = a as i64 - b as i64;
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(PSNR_CAP_DB);
    }
    let mse = sse as f64 / reference.as_bytes().len() as f64;
    Ok((10.0 * (255.0 * 255.0 / mse).log10()).min(PSNR_CAP_DB))
}

/// Mean SSIM over every 8x8 window (stride 1) of the Rec. 601 luma plane.
/// Window statistics use population moments.
pub fn ssim(reference: &ImageRgb8, test: &ImageRgb8) -> Result<f64> {
    check_dims(reference, test)?;
    let (w, h) = (reference.width(), reference.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            min_width: SSIM_WINDOW,
            min_height: SSIM_WINDOW,
        });
    }
    let x = reference.luma();
    let y = test.luma();
    let n = (SSIM_WINDOW * SSIM_WINDOW) as f64;
    let mut total = 0.0;
    let mut count = 0usize;
    for wy in 0..=h - SSIM_WINDOW {
        for wx in 0..=w - SSIM_WINDOW {
            let idx = |i: usize| (wy + i / SSIM_WINDOW) * w + wx + i % SSIM_WINDOW;
            let (mut sx, mut sy) = (0.0, 0.0);
            for i in 0..SSIM_WINDOW * SSIM_WINDOW {
                sx += x[idx(i)];
                sy += y[idx(i)];
            }
            let (mx, my) = (sx / n, sy / n);
            let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
            for i in 0..SSIM_WINDOW * SSIM_WINDOW {
                let dx = x[idx(i)] - mx;
                let dy = y[idx(i)] - my;
                vx += dx * dx;
                vy += dy * dy;
                cxy += dx * dy;
            }
            let (vx, vy, cxy) = (vx / n, vy / n, cxy / n);
            let num = (2.0 * mx * my + C1) * (2.0 * cxy + C2);
            let den = (mx * mx + my * my + C1) * (vx + vy + C2);
            total += num / den;
            count += 1;
        }
    }
    Ok(total / count as f64)
}

pub fn full_reference(reference: &ImageRgb8, test: &ImageRgb8) -> Result<FullRefScore> {
    Ok(FullRefScore {
        psnr_db: psnr(reference, test)?,
        ssim: ssim(reference, test)?,
    })
}
