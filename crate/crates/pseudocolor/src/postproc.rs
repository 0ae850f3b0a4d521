//! Post-processing: histogram matching and Gaussian low-pass filtering.
//!
//! Histogram matching remaps each channel so its cumulative histogram tracks
//! a reference image's. The Gaussian low-pass filter comes in two forms: a
//! fixed 3×3 spatial mask, and a frequency-domain transfer function
//! `H(u, v) = exp(-D²(u, v) / (2·d0))` applied through a discrete Fourier
//! transform. Note the transfer function divides by `2·d0`, not `2·d0²`;
//! `d0` is a plain positive scale on the squared distance.

use crate::raster::{round_half_away, ColorRaster8, GrayRaster};

/// The 3×3 spatial Gaussian mask. Coefficients sum to 1.000034, close enough
/// to unity that constant images are unchanged after 8-bit rounding.
pub const GAUSSIAN_MASK_3X3: [[f64; 3]; 3] = [
    [0.0007, 0.0256, 0.0007],
    [0.0256, 0.894834, 0.0256],
    [0.0007, 0.0256, 0.0007],
];

// ---------------------------------------------------------------------------
// Histogram matching
// ---------------------------------------------------------------------------

fn channel_cdf(counts: &[u64; 256]) -> [f64; 256] {
    let total: u64 = counts.iter().sum();
    let mut cdf = [0.0f64; 256];
    let mut acc = 0u64;
    for i in 0..256 {
        acc += counts[i];
        cdf[i] = acc as f64 / total as f64;
    }
    cdf
}

fn matching_lut(source: &[f64; 256], reference: &[f64; 256]) -> [u8; 256] {
    let mut lut = [0u8; 256];
    for v in 0..256 {
        // Smallest reference level whose CDF reaches the source CDF at v.
        let target = source[v];
        let mut w = 0;
        while w < 255 && reference[w] < target {
            w += 1;
        }
        lut[v] = w as u8;
    }
    lut
}

/// Monotone CDF matching, each channel independently. Dimensions of the two
/// images are unrelated; only their histograms matter.
pub fn histogram_match(source: &ColorRaster8, reference: &ColorRaster8) -> ColorRaster8 {
    let mut luts = [[0u8; 256]; 3];
    for c in 0..3 {
        let mut src_counts = [0u64; 256];
        let mut ref_counts = [0u64; 256];
        for px in source.data().chunks_exact(3) {
            src_counts[px[c] as usize] += 1;
        }
        for px in reference.data().chunks_exact(3) {
            ref_counts[px[c] as usize] += 1;
        }
        luts[c] = matching_lut(&channel_cdf(&src_counts), &channel_cdf(&ref_counts));
    }
    let data = source
        .data()
        .chunks_exact(3)
        .flat_map(|px| [luts[0][px[0] as usize], luts[1][px[1] as usize], luts[2][px[2] as usize]])
        .collect();
    ColorRaster8::new(source.width(), source.height(), data).expect("dimensions preserved")
}

// ---------------------------------------------------------------------------
// Spatial Gaussian
// ---------------------------------------------------------------------------

fn convolve3_plane(get: impl Fn(usize, usize) -> f64, width: usize, height: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let mut acc = 0.0;
            for (dy, row) in GAUSSIAN_MASK_3X3.iter().enumerate() {
                // Edge replication keeps constant images constant at borders.
                let sy = (y + dy).saturating_sub(1).min(height - 1);
                for (dx, &w) in row.iter().enumerate() {
                    let sx = (x + dx).saturating_sub(1).min(width - 1);
                    acc += w * get(sx, sy);
                }
            }
            out.push(round_half_away(acc.clamp(0.0, 255.0)) as u8);
        }
    }
    out
}

/// 3×3 Gaussian mask over a grayscale raster, edge-replicated borders.
pub fn gaussian_spatial_gray(raster: &GrayRaster) -> GrayRaster {
    let data = convolve3_plane(
        |x, y| raster.get(x, y) as f64,
        raster.width(),
        raster.height(),
    );
    GrayRaster::new(raster.width(), raster.height(), data).expect("dimensions preserved")
}

fn interleave(planes: [Vec<u8>; 3]) -> Vec<u8> {
    let mut data = Vec::with_capacity(planes[0].len() * 3);
    for ((r, g), b) in planes[0].iter().zip(&planes[1]).zip(&planes[2]) {
        data.extend_from_slice(&[*r, *g, *b]);
    }
    data
}

/// 3×3 Gaussian mask applied to each channel of a color raster.
pub fn gaussian_spatial_color(raster: &ColorRaster8) -> ColorRaster8 {
    let (w, h) = (raster.width(), raster.height());
    let plane = |c: usize| convolve3_plane(|x, y| raster.get(x, y)[c] as f64, w, h);
    let data = interleave([plane(0), plane(1), plane(2)]);
    ColorRaster8::new(w, h, data).expect("dimensions preserved")
}

// ---------------------------------------------------------------------------
// Frequency-domain Gaussian
// ---------------------------------------------------------------------------

/// Low-pass keeps the spectrum center; high-pass is its complement, so the
/// two transfer surfaces sum to one at every frequency bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMode {
    LowPass,
    HighPass,
}

/// Frequency-domain Gaussian filter configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFreqConfig {
    d0: f64,
    mode: FilterMode,
}

impl GaussianFreqConfig {
    pub fn new(d0: f64, mode: FilterMode) -> Result<Self, String> {
        if d0.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !d0.is_finite() {
            return Err(format!("d0 must be a positive finite number, got {d0}"));
        }
        Ok(Self { d0, mode })
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    pub fn mode(&self) -> FilterMode {
        self.mode
    }
}

/// The transfer surface `H(u, v)` over the centered spectrum, row-major,
/// with the spectrum center at `(⌊w/2⌋, ⌊h/2⌋)`.
pub fn gaussian_transfer(width: usize, height: usize, config: &GaussianFreqConfig) -> Vec<f64> {
    let cx = (width / 2) as f64;
    let cy = (height / 2) as f64;
    let mut surface = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
            let lp = (-d2 / (2.0 * config.d0)).exp();
            surface.push(match config.mode {
                FilterMode::LowPass => lp,
                FilterMode::HighPass => 1.0 - lp,
            });
        }
    }
    surface
}

#[derive(Debug, Clone, Copy)]
struct Cx {
    re: f64,
    im: f64,
}

impl Cx {
    const ZERO: Cx = Cx { re: 0.0, im: 0.0 };

    fn mul(self, other: Cx) -> Cx {
        Cx {
            re: self.re * other.re - self.im * other.im,
            im: self.re * other.im + self.im * other.re,
        }
    }

    fn add(self, other: Cx) -> Cx {
        Cx { re: self.re + other.re, im: self.im + other.im }
    }

    fn scale(self, k: f64) -> Cx {
        Cx { re: self.re * k, im: self.im * k }
    }
}

/// O(n²) DFT of one line; `sign` is -1 forward, +1 inverse (unscaled).
fn dft_line(input: &[Cx], twiddles: &[Cx]) -> Vec<Cx> {
    let n = input.len();
    (0..n)
        .map(|k| {
            let mut acc = Cx::ZERO;
            for (j, &x) in input.iter().enumerate() {
                acc = acc.add(x.mul(twiddles[k * j % n]));
            }
            acc
        })
        .collect()
}

fn twiddle_table(n: usize, sign: f64) -> Vec<Cx> {
    (0..n)
        .map(|k| {
            let ang = sign * 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            Cx { re: ang.cos(), im: ang.sin() }
        })
        .collect()
}

fn transpose(data: &[Cx], width: usize, height: usize) -> Vec<Cx> {
    let mut out = vec![Cx::ZERO; data.len()];
    for y in 0..height {
        for x in 0..width {
            out[x * height + y] = data[y * width + x];
        }
    }
    out
}

/// Row-column 2-D DFT. The inverse applies the 1/(w·h) scale.
fn dft_2d(data: &[Cx], width: usize, height: usize, inverse: bool) -> Vec<Cx> {
    let sign = if inverse { 1.0 } else { -1.0 };

    let row_tw = twiddle_table(width, sign);
    let mut rows: Vec<Cx> = Vec::with_capacity(data.len());
    for row in data.chunks_exact(width) {
        rows.extend(dft_line(row, &row_tw));
    }

    let transposed = transpose(&rows, width, height);
    let col_tw = twiddle_table(height, sign);
    let mut cols: Vec<Cx> = Vec::with_capacity(data.len());
    for col in transposed.chunks_exact(height) {
        cols.extend(dft_line(col, &col_tw));
    }
    let mut out = transpose(&cols, height, width);

    if inverse {
        let k = 1.0 / (width * height) as f64;
        for v in &mut out {
            *v = v.scale(k);
        }
    }
    out
}

/// Circular shift: `out[y][x] = in[(y - sy) mod h][(x - sx) mod w]`.
fn circshift(data: &[Cx], width: usize, height: usize, sx: usize, sy: usize) -> Vec<Cx> {
    let mut out = vec![Cx::ZERO; data.len()];
    for y in 0..height {
        let ty = (y + sy) % height;
        for x in 0..width {
            let tx = (x + sx) % width;
            out[ty * width + tx] = data[y * width + x];
        }
    }
    out
}

/// Filters one real-valued plane through the frequency domain and returns
/// the real part of the inverse transform, unrounded.
pub fn gaussian_frequency_plane(
    plane: &[f64],
    width: usize,
    height: usize,
    config: &GaussianFreqConfig,
) -> Vec<f64> {
    assert_eq!(plane.len(), width * height, "plane length must match dimensions");
    let complex: Vec<Cx> = plane.iter().map(|&v| Cx { re: v, im: 0.0 }).collect();
    let spectrum = dft_2d(&complex, width, height, false);

    // Center the spectrum, apply the transfer surface, undo the shift.
    let shifted = circshift(&spectrum, width, height, width / 2, height / 2);
    let transfer = gaussian_transfer(width, height, config);
    let filtered: Vec<Cx> = shifted
        .iter()
        .zip(&transfer)
        .map(|(v, &t)| v.scale(t))
        .collect();
    let unshifted = circshift(&filtered, width, height, width - width / 2, height - height / 2);

    dft_2d(&unshifted, width, height, true)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

/// Frequency-domain Gaussian filter over a grayscale raster.
pub fn gaussian_frequency_gray(raster: &GrayRaster, config: &GaussianFreqConfig) -> GrayRaster {
    let plane: Vec<f64> = raster.data().iter().map(|&v| v as f64).collect();
    let filtered = gaussian_frequency_plane(&plane, raster.width(), raster.height(), config);
    let data = filtered
        .into_iter()
        .map(|v| round_half_away(v.clamp(0.0, 255.0)) as u8)
        .collect();
    GrayRaster::new(raster.width(), raster.height(), data).expect("dimensions preserved")
}

/// Frequency-domain Gaussian filter applied to each channel.
pub fn gaussian_frequency_color(
    raster: &ColorRaster8,
    config: &GaussianFreqConfig,
) -> ColorRaster8 {
    let (w, h) = (raster.width(), raster.height());
    let planes = raster.planes_f64();
    let filter = |p: &[f64]| -> Vec<u8> {
        gaussian_frequency_plane(p, w, h, config)
            .into_iter()
            .map(|v| round_half_away(v.clamp(0.0, 255.0)) as u8)
            .collect()
    };
    let data = interleave([filter(&planes[0]), filter(&planes[1]), filter(&planes[2])]);
    ColorRaster8::new(w, h, data).expect("dimensions preserved")
}
