//! Image containers and bit-exact file I/O.
//!
//! Three containers cover the pipeline: [`GrayRaster`] for 8-bit single-band
//! input, [`ColorRasterF`] for the unclipped real-valued colorized product
//! (the representation under which inversion is exact), and [`ColorRaster8`]
//! for display renders, baseline outputs, and reference images.
//!
//! File formats: binary PGM (`P5`) and PPM (`P6`) restricted to maxval 255,
//! and the RPC container for lossless persistence of [`ColorRasterF`].

mod pnm;
mod rpc;

pub use pnm::{read_pgm, read_ppm, write_pgm, write_ppm};
pub use rpc::{read_rpc, write_rpc};

use thiserror::Error;

/// Errors produced by raster construction and file I/O.
#[derive(Debug, Error)]
pub enum RasterError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported maxval {0}: only maxval 255 is supported")]
    UnsupportedMaxval(u32),
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("bad magic: expected {expected:?}")]
    BadMagic { expected: &'static str },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("out-of-range channel value: {0}")]
    OutOfRange(String),
}

fn check_dims(width: usize, height: usize) -> Result<usize, RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::MalformedHeader(format!(
            "width and height must be >= 1, got {width}x{height}"
        )));
    }
    width
        .checked_mul(height)
        .ok_or_else(|| RasterError::MalformedHeader(format!("{width}x{height} overflows")))
}

/// Single-band 8-bit intensity image, row-major, top-left origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayRaster {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayRaster {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, RasterError> {
        let pixels = check_dims(width, height)?;
        if data.len() != pixels {
            return Err(RasterError::DimensionMismatch(format!(
                "expected {pixels} pixels for {width}x{height}, got {}",
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    /// Builds a raster by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width >= 1 && height >= 1);
        let data = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }
}

/// Three-plane real-valued color image with unclipped channels.
///
/// This is the lossless colorized product: channel values may exceed 255
/// (they are only clamped when rendered for display via [`render`]), which
/// is what makes exact inversion back to the source band possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorRasterF {
    width: usize,
    height: usize,
    r: Vec<f64>,
    g: Vec<f64>,
    b: Vec<f64>,
    /// `(alpha, beta)` provenance when produced by the color function.
    meta: Option<(f64, f64)>,
}

impl ColorRasterF {
    pub fn new(
        width: usize,
        height: usize,
        r: Vec<f64>,
        g: Vec<f64>,
        b: Vec<f64>,
        meta: Option<(f64, f64)>,
    ) -> Result<Self, RasterError> {
        let pixels = check_dims(width, height)?;
        if r.len() != pixels || g.len() != pixels || b.len() != pixels {
            return Err(RasterError::DimensionMismatch(format!(
                "expected {pixels} values per plane for {width}x{height}, got R={} G={} B={}",
                r.len(),
                g.len(),
                b.len()
            )));
        }
        for plane in [&r, &g, &b] {
            if let Some(v) = plane.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(RasterError::OutOfRange(format!(
                    "channel values must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(Self { width, height, r, g, b, meta })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn red(&self) -> &[f64] {
        &self.r
    }

    pub fn green(&self) -> &[f64] {
        &self.g
    }

    pub fn blue(&self) -> &[f64] {
        &self.b
    }

    pub fn meta(&self) -> Option<(f64, f64)> {
        self.meta
    }

    pub fn pixel(&self, idx: usize) -> (f64, f64, f64) {
        (self.r[idx], self.g[idx], self.b[idx])
    }
}

/// Three-channel 8-bit color image, interleaved RGB, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorRaster8 {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ColorRaster8 {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, RasterError> {
        let pixels = check_dims(width, height)?;
        let expected = pixels
            .checked_mul(3)
            .ok_or_else(|| RasterError::MalformedHeader(format!("{width}x{height} overflows")))?;
        if data.len() != expected {
            return Err(RasterError::DimensionMismatch(format!(
                "expected {expected} bytes for {width}x{height} RGB, got {}",
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    /// Builds a color raster by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        assert!(width >= 1 && height >= 1);
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Interleaved RGB bytes.
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data.chunks_exact(3).map(|c| [c[0], c[1], c[2]])
    }

    /// Extracts the three channel planes as `f64` values in `[0, 255]`.
    pub fn planes_f64(&self) -> [Vec<f64>; 3] {
        let n = self.width * self.height;
        let mut planes = [
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        ];
        for px in self.data.chunks_exact(3) {
            planes[0].push(px[0] as f64);
            planes[1].push(px[1] as f64);
            planes[2].push(px[2] as f64);
        }
        planes
    }
}

/// Rounds half-away-from-zero. `100.5` becomes `101`, `-0.5` becomes `-1`.
///
/// This is the single rounding rule used everywhere a real value is
/// quantized to 8 bits, so results reproduce bit-exactly across languages.
pub fn round_half_away(v: f64) -> f64 {
    v.round()
}

fn quantize_channel(v: f64) -> u8 {
    round_half_away(v.clamp(0.0, 255.0)) as u8
}

/// Renders the unclipped colorized product to a displayable 8-bit image.
///
/// Each channel is clamped to `[0, 255]` and then rounded half-away-from-zero.
pub fn render(raster: &ColorRasterF) -> ColorRaster8 {
    let mut data = Vec::with_capacity(raster.width * raster.height * 3);
    for i in 0..raster.width * raster.height {
        data.push(quantize_channel(raster.r[i]));
        data.push(quantize_channel(raster.g[i]));
        data.push(quantize_channel(raster.b[i]));
    }
    ColorRaster8 { width: raster.width, height: raster.height, data }
}
