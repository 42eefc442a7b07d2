use crate::error::{Error, Result};
use crate::image::ImageRgb8;

/// Side of the square patches cut from full-size source photographs.
pub const TILE_SIZE: usize = 1024;
/// Side of the tiles after downsampling.
pub const OUTPUT_SIZE: usize = 256;
pub const DOWNSAMPLE_FACTOR: usize = TILE_SIZE / OUTPUT_SIZE;

/// Tiles whose gray-level entropy falls below this are treated as flat.
pub const DEFAULT_ENTROPY_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone)]
pub struct SourceTile {
    pub origin_id: String,
    /// Row-major position in the tile grid.
    pub tile_index: usize,
    pub image: ImageRgb8,
    pub entropy_bits: f64,
}

impl SourceTile {
    /// File name used when tiles are written out.
    pub fn file_name(&self) -> String {
        format!("{}_t{:03}.png", self.origin_id, self.tile_index)
    }
}

/// Cuts non-overlapping 1024x1024 tiles from the top-left grid (partial
/// tiles at the right and bottom edges are dropped) and box-downsamples each
/// to 256x256.
pub fn tile_and_downsample(origin_id: &str, image: &ImageRgb8) -> Result<Vec<SourceTile>> {
    let (w, h) = (image.width(), image.height());
    if w < TILE_SIZE || h < TILE_SIZE {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            min_width: TILE_SIZE,
            min_height: TILE_SIZE,
        });
    }
    let (cols, rows) = (w / TILE_SIZE, h / TILE_SIZE);
    let mut tiles = Vec::with_capacity(cols * rows);
    for row in 0..rows {
        for col in 0..cols {
            let tile = image
                .crop(col * TILE_SIZE, row * TILE_SIZE, TILE_SIZE, TILE_SIZE)?
                .box_downsample(DOWNSAMPLE_FACTOR)?;
            tiles.push(SourceTile {
                origin_id: origin_id.to_string(),
                tile_index: row * cols + col,
                entropy_bits: gray_entropy(&tile),
                image: tile,
            });
        }
    }
    Ok(tiles)
}

/// Shannon entropy (bits) of the 256-bin histogram of rounded Rec. 601 luma.
pub fn gray_entropy(image: &ImageRgb8) -> f64 {
    let mut hist = [0u64; 256];
    for g in image.gray_levels() {
        hist[g as usize] += 1;
    }
    let n = image.len() as f64;
    let h: f64 = hist
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    h.clamp(0.0, 8.0)
}

/// True if the tile carries enough texture to keep.
pub fn entropy_filter(tile: &SourceTile, threshold_bits: f64) -> bool {
    tile.entropy_bits >= threshold_bits
}
