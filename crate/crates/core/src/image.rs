//! The 8-bit RGB raster passed between every stage, plus PNG/JPEG I/O.

use std::path::Path;

use image::imageops::FilterType;

use crate::error::{Error, Result};

/// Row-major 8-bit RGB image. Never empty.
#[derive(Clone, PartialEq, Eq)]
pub struct ImageRgb8 {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl std::fmt::Debug for ImageRgb8 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImageRgb8")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl ImageRgb8 {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} pixels supplied for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image filled with a single color.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        Self::new(width, height, vec![rgb; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [[u8; 3]] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<[u8; 3]> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.pixels.as_flattened()
    }

    /// Copies out the `w`x`h` window whose top-left corner is (`x0`, `y0`).
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Self> {
        if x0 + w > self.width || y0 + h > self.height {
            return Err(Error::InvalidImage(format!(
                "crop {w}x{h}+{x0}+{y0} exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut pixels = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            let row = y * self.width;
            pixels.extend_from_slice(&self.pixels[row + x0..row + x0 + w]);
        }
        Self::new(w, h, pixels)
    }

    /// Box-filter downsampling by an integer factor in both axes.
    /// Each output byte is the block mean rounded half-to-even.
    pub fn box_downsample(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.width.is_multiple_of(factor) || !self.height.is_multiple_of(factor) {
            return Err(Error::InvalidImage(format!(
                "{}x{} is not divisible by downsampling factor {factor}",
                self.width, self.height
            )));
        }
        let (ow, oh) = (self.width / factor, self.height / factor);
        let area = (factor * factor) as f64;
        let mut out = Vec::with_capacity(ow * oh);
        for oy in 0..oh {
            for ox in 0..ow {
                let mut acc = [0u32; 3];
                for y in oy * factor..(oy + 1) * factor {
                    let row = &self.pixels[y * self.width + ox * factor..][..factor];
                    for p in row {
                        for c in 0..3 {
                            acc[c] += p[c] as u32;
                        }
                    }
                }
                out.push(acc.map(|s| to_byte(s as f64 / area)));
            }
        }
        Self::new(ow, oh, out)
    }

    /// Bilinear (triangle filter) resize to exactly `width`x`height`.
    pub fn resize(&self, width: usize, height: usize) -> Result<Self> {
        if width == self.width && height == self.height {
            return Ok(self.clone());
        }
        let resized = image::imageops::resize(
            &self.to_rgb_image(),
            width as u32,
            height as u32,
            FilterType::Triangle,
        );
        Self::from_rgb_image(resized)
    }

    pub fn rotate90(&self) -> Self {
        let (w, h) = (self.width, self.height);
        let mut pixels = Vec::with_capacity(w * h);
        for y in 0..w {
            for x in 0..h {
                pixels.push(self.get(y, h - 1 - x));
            }
        }
        Self {
            width: h,
            height: w,
            pixels,
        }
    }

    pub fn mirror_horizontal(&self) -> Self {
        let mut pixels = Vec::with_capacity(self.len());
        for row in self.pixels.chunks_exact(self.width) {
            pixels.extend(row.iter().rev());
        }
        Self {
            pixels,
            ..*self
        }
    }

    /// Rec. 601 luma, `0.299 R + 0.587 G + 0.114 B`, one value per pixel.
    pub fn luma(&self) -> Vec<f64> {
        self.pixels
            .iter()
            .map(|&[r, g, b]| 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64)
            .collect()
    }

    /// Integer gray level used for histogram statistics.
    pub fn gray_levels(&self) -> Vec<u8> {
        self.luma().into_iter().map(to_byte).collect()
    }

    pub fn to_rgb_image(&self) -> image::RgbImage {
        image::RgbImage::from_raw(
            self.width as u32,
            self.height as u32,
            self.as_bytes().to_vec(),
        )
        .expect("buffer length matches dimensions")
    }

    pub fn from_rgb_image(img: image::RgbImage) -> Result<Self> {
        let (w, h) = (img.width() as usize, img.height() as usize);
        let pixels = img
            .into_raw()
            .chunks_exact(3)
            .map(|c| [c[0], c[1], c[2]])
            .collect();
        Self::new(w, h, pixels)
    }

    /// Decodes any supported file and converts it to 8-bit RGB.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let decoded = image::load_from_memory(&bytes).map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_rgb_image(decoded.into_rgb8())
    }

    /// Writes an 8-bit RGB PNG, creating parent directories as needed.
    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        self.to_rgb_image()
            .save_with_format(path, image::ImageFormat::Png)
            .map_err(|e| Error::Encode {
                path: path.to_path_buf(),
                message: e.to_string(),
            })
    }
}

/// Round half-to-even and saturate into a byte.
pub fn to_byte(v: f64) -> u8 {
    v.round_ties_even().clamp(0.0, 255.0) as u8
}

/// True for file extensions the loader understands.
pub fn is_image_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
        .unwrap_or(false)
}

/// Image files directly inside `dir`, sorted by file name.
pub fn list_images(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_file() && is_image_path(&path) {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(paths)
}
