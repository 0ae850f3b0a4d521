//! Comparison colorizers.
//!
//! Two baselines to benchmark the reversible color function against:
//!
//! - Otsu multi-level quantization: pick `k-1` thresholds maximizing
//!   between-class variance, paint each class with a palette color, then run
//!   [`samanta_enhance`] which rewrites each pixel's hue through the sector
//!   table while keeping saturation and value.
//! - Daily-style split-spectrum mapping: bin the intensity, spread hues
//!   across the bins, keep intensity as HSV value.

use crate::colorspace::{hsv_to_rgb, hue_eq6, rgb_to_hsv, HsvPixel};
use crate::raster::{round_half_away, ColorRaster8, GrayRaster};
use thiserror::Error;

/// The histogram populates fewer distinct intensities than requested classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("degenerate histogram: {distinct} distinct populated intensities, need at least {required}")]
pub struct DegenerateHistogram {
    pub distinct: usize,
    pub required: usize,
}

/// 256-bin intensity histogram; counts sum to the pixel count.
pub fn histogram(raster: &GrayRaster) -> [u64; 256] {
    let mut bins = [0u64; 256];
    for &v in raster.data() {
        bins[v as usize] += 1;
    }
    bins
}

/// Thresholds partitioning `[0, 255]` into `k` classes:
/// `[0..t1], (t1..t2], ..., (t_{k-1}..255]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OtsuThresholds {
    thresholds: Vec<u8>,
}

impl OtsuThresholds {
    /// `thresholds` must be strictly increasing values in `[0, 254]`.
    pub fn new(thresholds: Vec<u8>) -> Self {
        assert!(!thresholds.is_empty(), "at least two classes required");
        assert!(
            thresholds.windows(2).all(|w| w[0] < w[1]) && *thresholds.last().unwrap() <= 254,
            "thresholds must be strictly increasing and <= 254"
        );
        Self { thresholds }
    }

    pub fn thresholds(&self) -> &[u8] {
        &self.thresholds
    }

    pub fn class_count(&self) -> usize {
        self.thresholds.len() + 1
    }

    /// Class index of an intensity. A pixel exactly at a threshold belongs
    /// to the class below (closed upper bound on the left class).
    pub fn class_of(&self, intensity: u8) -> usize {
        self.thresholds
            .iter()
            .position(|&t| intensity <= t)
            .unwrap_or(self.thresholds.len())
    }
}

/// Multi-level Otsu: exhaustively searches threshold tuples and returns the
/// lexicographically smallest one maximizing the between-class variance
/// `Σ ω_c (μ_c − μ_T)²` of the normalized histogram.
///
/// `k` must be 2, 3, or 4; an exhaustive scan over `C(255, k-1)` tuples is
/// cheap at that size.
pub fn otsu(hist: &[u64; 256], k: usize) -> Result<OtsuThresholds, DegenerateHistogram> {
    assert!((2..=4).contains(&k), "k must be 2, 3, or 4");
    let distinct = hist.iter().filter(|&&c| c > 0).count();
    if distinct < k {
        return Err(DegenerateHistogram { distinct, required: k });
    }

    let total: u64 = hist.iter().sum();
    let mut cum_w = [0.0f64; 257]; // cumulative probability mass
    let mut cum_m = [0.0f64; 257]; // cumulative first moment
    for i in 0..256 {
        let p = hist[i] as f64 / total as f64;
        cum_w[i + 1] = cum_w[i] + p;
        cum_m[i + 1] = cum_m[i] + i as f64 * p;
    }
    let mean_total = cum_m[256];

    // Between-class variance of the partition at cut points
    // `bounds = [0, t1+1, ..., 256]`; empty classes contribute nothing.
    let variance = |bounds: &[usize]| -> f64 {
        let mut var = 0.0;
        for c in 0..bounds.len() - 1 {
            let w = cum_w[bounds[c + 1]] - cum_w[bounds[c]];
            if w > 0.0 {
                let m = (cum_m[bounds[c + 1]] - cum_m[bounds[c]]) / w;
                var += w * (m - mean_total) * (m - mean_total);
            }
        }
        var
    };

    let mut best: Option<(f64, Vec<u8>)> = None;
    let mut consider = |tuple: &[usize]| {
        let mut bounds = Vec::with_capacity(tuple.len() + 2);
        bounds.push(0);
        bounds.extend(tuple.iter().map(|&t| t + 1));
        bounds.push(256);
        let var = variance(&bounds);
        // Strict comparison keeps the lexicographically smallest argmax
        // because tuples are enumerated in lexicographic order.
        if best.as_ref().is_none_or(|(b, _)| var > *b) {
            best = Some((var, tuple.iter().map(|&t| t as u8).collect()));
        }
    };

    match k {
        2 => {
            for t1 in 0..=254 {
                consider(&[t1]);
            }
        }
        3 => {
            for t1 in 0..=253 {
                for t2 in t1 + 1..=254 {
                    consider(&[t1, t2]);
                }
            }
        }
        _ => {
            for t1 in 0..=252 {
                for t2 in t1 + 1..=253 {
                    for t3 in t2 + 1..=254 {
                        consider(&[t1, t2, t3]);
                    }
                }
            }
        }
    }

    Ok(OtsuThresholds::new(best.expect("search space non-empty").1))
}

/// One RGB color per quantization class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizePalette {
    colors: Vec<[u8; 3]>,
}

impl QuantizePalette {
    pub fn new(colors: Vec<[u8; 3]>) -> Self {
        assert!(colors.len() >= 2, "palette needs at least two colors");
        Self { colors }
    }

    /// Evenly spaced fully saturated hues from blue (240°) down to red (0°),
    /// so three classes map to blue, green, red from dark to bright.
    pub fn spectral(k: usize) -> Self {
        assert!(k >= 2);
        let colors = (0..k)
            .map(|c| {
                let hue = 240.0 - 240.0 * c as f64 / (k - 1) as f64;
                let (r, g, b) = hsv_to_rgb(HsvPixel { h: hue.rem_euclid(360.0), s: 1.0, v: 1.0 });
                [
                    round_half_away(r * 255.0) as u8,
                    round_half_away(g * 255.0) as u8,
                    round_half_away(b * 255.0) as u8,
                ]
            })
            .collect();
        Self { colors }
    }

    pub fn colors(&self) -> &[[u8; 3]] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

/// Replaces every pixel with its class color.
pub fn quantize_pseudocolor(
    raster: &GrayRaster,
    thresholds: &OtsuThresholds,
    palette: &QuantizePalette,
) -> ColorRaster8 {
    assert_eq!(
        palette.len(),
        thresholds.class_count(),
        "palette size must equal class count"
    );
    let mut data = Vec::with_capacity(raster.width() * raster.height() * 3);
    for &v in raster.data() {
        data.extend_from_slice(&palette.colors()[thresholds.class_of(v)]);
    }
    ColorRaster8::new(raster.width(), raster.height(), data).expect("dimensions preserved")
}

/// Hue-rewrite enhancement: per pixel, replace the hexcone hue with the
/// sector-table hue while keeping saturation and value. Achromatic pixels
/// pass through unchanged.
pub fn samanta_enhance(raster: &ColorRaster8) -> ColorRaster8 {
    let mut data = Vec::with_capacity(raster.data().len());
    for [r, g, b] in raster.pixels() {
        match hue_eq6(r as f64, g as f64, b as f64) {
            Err(_) => data.extend_from_slice(&[r, g, b]),
            Ok(hue) => {
                let hsv = rgb_to_hsv(r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0);
                let (nr, ng, nb) = hsv_to_rgb(HsvPixel { h: hue, s: hsv.s, v: hsv.v });
                data.push(round_half_away(nr * 255.0) as u8);
                data.push(round_half_away(ng * 255.0) as u8);
                data.push(round_half_away(nb * 255.0) as u8);
            }
        }
    }
    ColorRaster8::new(raster.width(), raster.height(), data).expect("dimensions preserved")
}

/// Split-spectrum configuration: intensity bins and the hue range spread
/// across them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DailyConfig {
    num_bins: usize,
    hue_start: f64,
    hue_end: f64,
}

impl DailyConfig {
    pub fn new(num_bins: usize, hue_start: f64, hue_end: f64) -> Result<Self, String> {
        if num_bins < 2 {
            return Err(format!("num_bins must be >= 2, got {num_bins}"));
        }
        if hue_start == hue_end {
            return Err(format!("hue_start and hue_end must differ, got {hue_start}"));
        }
        Ok(Self { num_bins, hue_start, hue_end })
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }
}

impl Default for DailyConfig {
    /// Three bins over blue (240°) to red (0°).
    fn default() -> Self {
        Self { num_bins: 3, hue_start: 240.0, hue_end: 0.0 }
    }
}

/// Split-spectrum colorization: intensity binned into equal-width bins over
/// `[0, 255]`, hue linearly spaced from `hue_start` to `hue_end` by bin
/// index, saturation 1, value `I / 255`.
pub fn daily_colorize(raster: &GrayRaster, config: &DailyConfig) -> ColorRaster8 {
    let n = config.num_bins;
    let hues: Vec<f64> = (0..n)
        .map(|bin| {
            let t = bin as f64 / (n - 1) as f64;
            (config.hue_start + (config.hue_end - config.hue_start) * t).rem_euclid(360.0)
        })
        .collect();
    let mut data = Vec::with_capacity(raster.width() * raster.height() * 3);
    for &v in raster.data() {
        let bin = (v as usize * n) / 256;
        let (r, g, b) = hsv_to_rgb(HsvPixel { h: hues[bin], s: 1.0, v: v as f64 / 255.0 });
        data.push(round_half_away(r * 255.0) as u8);
        data.push(round_half_away(g * 255.0) as u8);
        data.push(round_half_away(b * 255.0) as u8);
    }
    ColorRaster8::new(raster.width(), raster.height(), data).expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spike_histogram(spikes: &[(usize, u64)]) -> [u64; 256] {
        let mut h = [0u64; 256];
        for &(pos, count) in spikes {
            h[pos] = count;
        }
        h
    }

    #[test]
    fn histogram_counts() {
        let r = GrayRaster::new(2, 1, vec![0, 255]).unwrap();
        let h = histogram(&r);
        assert_eq!(h[0], 1);
        assert_eq!(h[255], 1);
        assert_eq!(h.iter().sum::<u64>(), 2);

        let r = GrayRaster::new(3, 2, vec![7; 6]).unwrap();
        assert_eq!(histogram(&r)[7], 6);
    }

    #[test]
    fn otsu_two_spikes() {
        // All t in [50, 199] tie; the lexicographically smallest wins.
        let h = spike_histogram(&[(50, 10), (200, 10)]);
        assert_eq!(otsu(&h, 2).unwrap().thresholds(), &[50]);
    }

    #[test]
    fn otsu_three_spikes() {
        let h = spike_histogram(&[(30, 5), (128, 5), (220, 5)]);
        assert_eq!(otsu(&h, 3).unwrap().thresholds(), &[30, 128]);
    }

    #[test]
    fn otsu_rejects_degenerate() {
        let h = spike_histogram(&[(100, 42)]);
        assert_eq!(
            otsu(&h, 2),
            Err(DegenerateHistogram { distinct: 1, required: 2 })
        );
    }

    #[test]
    fn class_boundaries_are_left_closed() {
        let t = OtsuThresholds::new(vec![50]);
        assert_eq!(t.class_of(10), 0);
        assert_eq!(t.class_of(50), 0);
        assert_eq!(t.class_of(51), 1);
        assert_eq!(t.class_of(200), 1);
    }

    #[test]
    fn quantize_paints_class_colors() {
        let r = GrayRaster::new(3, 1, vec![10, 50, 200]).unwrap();
        let t = OtsuThresholds::new(vec![50]);
        let p = QuantizePalette::new(vec![[0, 0, 255], [255, 0, 0]]);
        let out = quantize_pseudocolor(&r, &t, &p);
        assert_eq!(out.get(0, 0), [0, 0, 255]);
        assert_eq!(out.get(1, 0), [0, 0, 255]);
        assert_eq!(out.get(2, 0), [255, 0, 0]);
    }

    #[test]
    fn spectral_palette_is_blue_green_red_for_three() {
        let p = QuantizePalette::spectral(3);
        assert_eq!(p.colors(), &[[0, 0, 255], [0, 255, 0], [255, 0, 0]]);
    }

    #[test]
    fn samanta_passes_achromatic_through() {
        let c = ColorRaster8::new(1, 1, vec![128, 128, 128]).unwrap();
        assert_eq!(samanta_enhance(&c), c);
    }

    #[test]
    fn samanta_is_identity_when_hues_agree() {
        let c = ColorRaster8::new(1, 1, vec![200, 150, 100]).unwrap();
        assert_eq!(samanta_enhance(&c), c);
    }

    #[test]
    fn daily_reference_pixels() {
        let config = DailyConfig::new(3, 240.0, 0.0).unwrap();
        let r = GrayRaster::new(2, 1, vec![0, 255]).unwrap();
        let out = daily_colorize(&r, &config);
        assert_eq!(out.get(0, 0), [0, 0, 0]); // V = 0 forces black
        assert_eq!(out.get(1, 0), [255, 0, 0]); // bin 2, hue 0, V = 1
    }

    #[test]
    fn daily_config_validation() {
        assert!(DailyConfig::new(1, 240.0, 0.0).is_err());
        assert!(DailyConfig::new(3, 120.0, 120.0).is_err());
    }

    #[test]
    fn daily_value_is_monotone_in_intensity() {
        let config = DailyConfig::default();
        let everything = GrayRaster::new(256, 1, (0..=255).collect()).unwrap();
        let out = daily_colorize(&everything, &config);
        // V maps to the max channel; within a bin it must track intensity.
        let value_of = |i: usize| *out.get(i, 0).iter().max().unwrap();
        for i in 1..256 {
            if i * config.num_bins() / 256 == (i - 1) * config.num_bins() / 256 {
                assert!(value_of(i) >= value_of(i - 1), "dip at intensity {i}");
            }
        }
    }

    proptest! {
        #[test]
        fn otsu_invariant_under_count_scaling(
            seed in any::<u64>(),
            scale in 2u64..20,
        ) {
            let mut s = seed;
            let mut h = [0u64; 256];
            for bin in h.iter_mut() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *bin = (s >> 56) % 40;
            }
            prop_assume!(h.iter().filter(|&&c| c > 0).count() >= 2);
            let mut scaled = h;
            for bin in scaled.iter_mut() {
                *bin *= scale;
            }
            prop_assert_eq!(otsu(&h, 2).unwrap(), otsu(&scaled, 2).unwrap());
        }

        #[test]
        fn samanta_is_idempotent(seed in any::<u64>()) {
            let mut s = seed;
            let c = ColorRaster8::from_fn(8, 4, |_, _| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                [(s >> 16) as u8, (s >> 32) as u8, (s >> 48) as u8]
            });
            let once = samanta_enhance(&c);
            prop_assert_eq!(samanta_enhance(&once), once);
        }

        #[test]
        fn quantize_recovers_class_map(seed in any::<u64>()) {
            let mut s = seed;
            let r = GrayRaster::from_fn(8, 8, |_, _| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 40) as u8
            });
            let t = OtsuThresholds::new(vec![80, 160]);
            let p = QuantizePalette::spectral(3);
            let out = quantize_pseudocolor(&r, &t, &p);
            for (i, px) in out.pixels().enumerate() {
                let class = t.class_of(r.data()[i]);
                prop_assert_eq!(px, p.colors()[class]);
            }
        }

        // Bin counts whose hue steps are multiples of 60 degrees survive the
        // 8-bit quantization exactly, so the distinct-hue bound is testable
        // on the rendered output.
        #[test]
        fn daily_hue_count_bounded(seed in any::<u64>(), bins in prop_oneof![Just(2usize), Just(3), Just(5)]) {
            let mut s = seed;
            let r = GrayRaster::from_fn(16, 4, |_, _| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 40) as u8
            });
            let config = DailyConfig::new(bins, 240.0, 0.0).unwrap();
            let out = daily_colorize(&r, &config);
            // Bucket to whole degrees; recomputed hues sit within 1e-9 of
            // the bin hue so nearest-degree rounding is stable.
            let mut hues: Vec<u64> = out
                .pixels()
                .filter(|px| px[0] != px[1] || px[1] != px[2])
                .map(|px| {
                    let h = rgb_to_hsv(px[0] as f64 / 255.0, px[1] as f64 / 255.0, px[2] as f64 / 255.0).h;
                    h.round() as u64 % 360
                })
                .collect();
            hues.sort_unstable();
            hues.dedup();
            prop_assert!(hues.len() <= bins);
        }
    }
}
