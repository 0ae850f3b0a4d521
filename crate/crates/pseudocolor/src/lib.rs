//! Reversible pseudo-coloring for single-band grayscale rasters.
//!
//! The core of this library is a linear color function that maps an 8-bit
//! intensity `I` to an unclipped RGB triple `(4αI, 4βI, 4(1−α−β)I)` for free
//! parameters `0 < α < 1`, `0 < β < 1`, `α + β < 1`. Because the channel
//! weights sum to 4, the original band is recovered exactly as
//! `I = (R + G + B) / 4` — colorization loses no intensity information as
//! long as the colorized product is stored unclipped (see [`raster::ColorRasterF`]
//! and the RPC container format).
//!
//! Around that core the crate provides:
//!
//! - [`raster`] — image containers plus binary PGM/PPM I/O and the lossless
//!   RPC float container.
//! - [`colorspace`] — hexcone RGB↔HSV conversion and a sector-table hue
//!   formula equivalent to the hexcone hue.
//! - [`colorfn`] — the reversible color function: parameter validation,
//!   color-region classification, forward colorization, exact inversion.
//! - [`baselines`] — comparison colorizers: Otsu multi-level quantization
//!   with a hue-rewrite enhancement pass, and an HSV split-spectrum mapper.
//! - [`postproc`] — histogram matching against a reference image and
//!   Gaussian low-pass filtering (3×3 spatial mask and frequency domain).
//! - [`metrics`] — RMSE, HSV saturation error, windowed SSIM with per-band
//!   reporting, and report assembly for method comparisons.

pub mod baselines;
pub mod colorfn;
pub mod colorspace;
pub mod metrics;
pub mod postproc;
pub mod raster;

pub use colorfn::{ColorParams, ColorRegion};
pub use raster::{ColorRaster8, ColorRasterF, GrayRaster};
