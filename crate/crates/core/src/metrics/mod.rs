//! No-reference UCIQE scoring and full-reference PSNR/SSIM.
//!
//! Chroma spread and luminance contrast are reported divided by 100, the
//! nominal range of L and of chroma in native CIELab units. Without that
//! scaling the components would not be comparable with the saturation term,
//! which is already in [0, 1].

mod fullref;
pub mod stats;
mod uciqe;

pub use fullref::{full_reference, psnr, ssim, FullRefScore, PSNR_CAP_DB, SSIM_WINDOW};
pub use uciqe::{
    chroma_std, chroma_std_streaming, luminance_contrast, mean_saturation, uciqe,
    uciqe_reference, UciqeScore, LAB_SCALE, WEIGHT_CONL, WEIGHT_MU_S, WEIGHT_SIGMA_C,
};
