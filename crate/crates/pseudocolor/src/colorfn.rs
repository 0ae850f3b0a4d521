//! The reversible color function.
//!
//! Forward: `(R, G, B) = (4αI, 4βI, 4(1−α−β)I)` per pixel, evaluated in
//! 64-bit floats and stored unclipped. Because the three weights sum to 4,
//! the inverse `I = (R + G + B) / 4` recovers every 8-bit intensity exactly
//! after rounding; this holds for all valid `(α, β)` and survives 32-bit
//! channel storage in the RPC container.
//!
//! The weight ordering of `(α, β, 1−α−β)` decides which hue sector the whole
//! image lands in; [`classify_region`] reports it.

use crate::raster::{round_half_away, ColorRasterF, GrayRaster};
use thiserror::Error;

/// A colorization parameter violates `0 < α < 1`, `0 < β < 1`, `α + β < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum InvalidParams {
    #[error("alpha must satisfy 0 < alpha < 1, got {0}")]
    Alpha(f64),
    #[error("beta must satisfy 0 < beta < 1, got {0}")]
    Beta(f64),
    #[error("alpha + beta must be < 1, got {0} + {1} = {sum}", sum = .0 + .1)]
    Sum(f64, f64),
}

/// Validated `(α, β)` pair for the color function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorParams {
    alpha: f64,
    beta: f64,
}

impl ColorParams {
    /// Validates `0 < α < 1`, `0 < β < 1`, `α + β < 1`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self, InvalidParams> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(InvalidParams::Alpha(alpha));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(InvalidParams::Beta(beta));
        }
        if alpha + beta >= 1.0 {
            return Err(InvalidParams::Sum(alpha, beta));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The implied blue weight `1 − α − β`.
    pub fn gamma(&self) -> f64 {
        1.0 - self.alpha - self.beta
    }
}

/// Hue sector selected by the ordering of the channel weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorRegion {
    RedYellow,
    YellowGreen,
    GreenCyan,
    CyanBlue,
    BlueMagenta,
    MagentaRed,
    /// At least two of `(α, β, 1−α−β)` are equal; the parameters sit on a
    /// sector boundary and no single region applies.
    Boundary,
}

impl std::fmt::Display for ColorRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ColorRegion::RedYellow => "red-yellow",
            ColorRegion::YellowGreen => "yellow-green",
            ColorRegion::GreenCyan => "green-cyan",
            ColorRegion::CyanBlue => "cyan-blue",
            ColorRegion::BlueMagenta => "blue-magenta",
            ColorRegion::MagentaRed => "magenta-red",
            ColorRegion::Boundary => "boundary",
        };
        f.write_str(name)
    }
}

/// Classifies parameters into a hue region by the strict ordering of the
/// channel weights `(R, G, B) ∝ (α, β, 1−α−β)`. Any tie is [`ColorRegion::Boundary`].
pub fn classify_region(params: ColorParams) -> ColorRegion {
    let wr = params.alpha();
    let wg = params.beta();
    let wb = params.gamma();
    if wr == wg || wg == wb || wr == wb {
        return ColorRegion::Boundary;
    }
    match (wb < wg, wb < wr, wg < wr) {
        (true, true, true) => ColorRegion::RedYellow,    // B < G < R
        (true, true, false) => ColorRegion::YellowGreen, // B < R < G
        (true, false, false) => ColorRegion::GreenCyan,  // R < B < G
        (false, false, false) => ColorRegion::CyanBlue,  // R < G < B
        (false, false, true) => ColorRegion::BlueMagenta, // G < R < B
        (false, true, true) => ColorRegion::MagentaRed,  // G < B < R
        // wb < wg, wb >= wr, wg >= wr would need wr > wb and wr <= wb at once
        _ => unreachable!("inconsistent strict ordering"),
    }
}

/// Applies the forward color function to every pixel, unclipped.
pub fn colorize(raster: &GrayRaster, params: ColorParams) -> ColorRasterF {
    let kr = 4.0 * params.alpha();
    let kg = 4.0 * params.beta();
    let kb = 4.0 * params.gamma();
    let n = raster.width() * raster.height();
    let mut r = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for &i in raster.data() {
        let i = i as f64;
        r.push(kr * i);
        g.push(kg * i);
        b.push(kb * i);
    }
    ColorRasterF::new(
        raster.width(),
        raster.height(),
        r,
        g,
        b,
        Some((params.alpha(), params.beta())),
    )
    .expect("colorize output is always well-formed")
}

/// Recovers the grayscale band: `I = (R + G + B) / 4` per pixel, rounded
/// half-away-from-zero and clamped to `[0, 255]`.
///
/// The clamp only matters for hand-crafted inputs; anything produced by
/// [`colorize`] from an 8-bit band inverts exactly.
pub fn invert(raster: &ColorRasterF) -> GrayRaster {
    let n = raster.width() * raster.height();
    let mut data = Vec::with_capacity(n);
    for i in 0..n {
        let (r, g, b) = raster.pixel(i);
        let v = round_half_away((r + g + b) / 4.0).clamp(0.0, 255.0);
        data.push(v as u8);
    }
    GrayRaster::new(raster.width(), raster.height(), data).expect("dimensions preserved")
}
