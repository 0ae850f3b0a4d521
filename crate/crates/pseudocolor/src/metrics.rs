//! Quality assessment: RMSE, HSV saturation error, and windowed SSIM.
//!
//! SSIM follows the canonical two-factor formulation
//! `[(2·μx·μy + C1)(2·σxy + C2)] / [(μx² + μy² + C1)(σx² + σy² + C2)]`
//! with weighted window statistics; the structure stabilizer `C3` is folded
//! in as `C3 = C2/2`, which makes the three-component
//! luminance/contrast/structure product collapse to the form above. The map
//! is computed at fully interior window positions and its unweighted mean is
//! the scalar score.

use crate::colorfn::invert;
use crate::colorspace::rgb_to_hsv;
use crate::raster::{ColorRaster8, ColorRasterF, GrayRaster};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("image too small: {width}x{height} cannot fit a {side}x{side} window")]
    ImageTooSmall { width: usize, height: usize, side: usize },
}

/// Root mean squared difference between two equally sized planes.
pub fn rmse(a: &[f64], b: &[f64]) -> Result<f64, MetricsError> {
    if a.len() != b.len() || a.is_empty() {
        return Err(MetricsError::DimensionMismatch(format!(
            "plane lengths {} and {} must match and be non-empty",
            a.len(),
            b.len()
        )));
    }
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((sum / a.len() as f64).sqrt())
}

/// RMSE over the HSV saturation channels of two color images. Saturation
/// lives in `[0, 1]`, so the result is already a normalized fraction.
pub fn saturation_error(
    colorized: &ColorRaster8,
    reference: &ColorRaster8,
) -> Result<f64, MetricsError> {
    if colorized.width() != reference.width() || colorized.height() != reference.height() {
        return Err(MetricsError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            colorized.width(),
            colorized.height(),
            reference.width(),
            reference.height()
        )));
    }
    let sat = |img: &ColorRaster8| -> Vec<f64> {
        img.pixels()
            .map(|[r, g, b]| rgb_to_hsv(r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0).s)
            .collect()
    };
    rmse(&sat(colorized), &sat(reference))
}

/// SSIM configuration: Gaussian weighting window plus stabilization
/// constants over a dynamic range `L`.
///
/// `c3` is retained for completeness and defaults to `c2 / 2`; the scoring
/// formula uses the collapsed two-factor form, which equals the full
/// three-component product exactly under that default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimConfig {
    pub window_side: usize,
    pub sigma: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub dynamic_range: f64,
}

impl SsimConfig {
    /// Standard constants for a given dynamic range: `C1 = (0.01·L)²`,
    /// `C2 = (0.03·L)²`, `C3 = C2/2`, 11×11 window with sigma 1.5.
    pub fn for_dynamic_range(l: f64) -> Self {
        assert!(l > 0.0);
        let c1 = (0.01 * l) * (0.01 * l);
        let c2 = (0.03 * l) * (0.03 * l);
        Self { window_side: 11, sigma: 1.5, c1, c2, c3: c2 / 2.0, dynamic_range: l }
    }

    fn validate(&self) {
        assert!(self.window_side % 2 == 1 && self.window_side >= 1, "window side must be odd");
        assert!(self.sigma > 0.0, "sigma must be positive");
        assert!(
            self.c1 > 0.0 && self.c2 > 0.0 && self.c3 > 0.0,
            "stabilization constants must be positive"
        );
    }

    /// Normalized Gaussian window weights, row-major `side x side`.
    pub fn window_weights(&self) -> Vec<f64> {
        self.validate();
        let side = self.window_side;
        let half = (side / 2) as isize;
        let mut weights = Vec::with_capacity(side * side);
        for y in -half..=half {
            for x in -half..=half {
                let d2 = (x * x + y * y) as f64;
                weights.push((-d2 / (2.0 * self.sigma * self.sigma)).exp());
            }
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        weights
    }
}

impl Default for SsimConfig {
    fn default() -> Self {
        Self::for_dynamic_range(255.0)
    }
}

/// The spatially varying SSIM map over valid (fully interior) window
/// positions.
#[derive(Debug, Clone, PartialEq)]
pub struct SsimMap {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

/// Windowed SSIM between two planes. Returns the local map and its
/// unweighted mean.
pub fn ssim(
    a: &[f64],
    b: &[f64],
    width: usize,
    height: usize,
    config: &SsimConfig,
) -> Result<(SsimMap, f64), MetricsError> {
    if a.len() != b.len() || a.len() != width * height {
        return Err(MetricsError::DimensionMismatch(format!(
            "plane lengths {} and {} for {width}x{height}",
            a.len(),
            b.len()
        )));
    }
    let side = config.window_side;
    if width < side || height < side {
        return Err(MetricsError::ImageTooSmall { width, height, side });
    }
    let weights = config.window_weights();

    let map_w = width - side + 1;
    let map_h = height - side + 1;
    let mut map = Vec::with_capacity(map_w * map_h);
    let mut total = 0.0;
    for wy in 0..map_h {
        for wx in 0..map_w {
            let mut mean_x = 0.0;
            let mut mean_y = 0.0;
            let mut xx = 0.0;
            let mut yy = 0.0;
            let mut xy = 0.0;
            let mut wi = 0;
            for dy in 0..side {
                let row = (wy + dy) * width + wx;
                for dx in 0..side {
                    let w = weights[wi];
                    wi += 1;
                    let px = a[row + dx];
                    let py = b[row + dx];
                    mean_x += w * px;
                    mean_y += w * py;
                    xx += w * px * px;
                    yy += w * py * py;
                    xy += w * px * py;
                }
            }
            let var_x = xx - mean_x * mean_x;
            let var_y = yy - mean_y * mean_y;
            let cov = xy - mean_x * mean_y;
            let value = ((2.0 * mean_x * mean_y + config.c1) * (2.0 * cov + config.c2))
                / ((mean_x * mean_x + mean_y * mean_y + config.c1)
                    * (var_x + var_y + config.c2));
            map.push(value);
            total += value;
        }
    }
    let mean = total / map.len() as f64;
    Ok((SsimMap { width: map_w, height: map_h, data: map }, mean))
}

/// SSIM between two grayscale rasters.
pub fn ssim_gray(
    a: &GrayRaster,
    b: &GrayRaster,
    config: &SsimConfig,
) -> Result<(SsimMap, f64), MetricsError> {
    let pa: Vec<f64> = a.data().iter().map(|&v| v as f64).collect();
    let pb: Vec<f64> = b.data().iter().map(|&v| v as f64).collect();
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(MetricsError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    ssim(&pa, &pb, a.width(), a.height(), config)
}

/// Per-band SSIM scores and their arithmetic mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimBands {
    pub r: f64,
    pub g: f64,
    pub b: f64,
    pub mean: f64,
}

/// SSIM on each channel plane; mean is the average of the three band scores.
pub fn ssim_color(
    a: &ColorRaster8,
    b: &ColorRaster8,
    config: &SsimConfig,
) -> Result<SsimBands, MetricsError> {
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(MetricsError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let pa = a.planes_f64();
    let pb = b.planes_f64();
    let mut scores = [0.0; 3];
    for c in 0..3 {
        scores[c] = ssim(&pa[c], &pb[c], a.width(), a.height(), config)?.1;
    }
    Ok(SsimBands {
        r: scores[0],
        g: scores[1],
        b: scores[2],
        mean: (scores[0] + scores[1] + scores[2]) / 3.0,
    })
}

/// One colorized output to be scored: a display image plus, when the method
/// is reversible, the lossless product it was rendered from.
pub struct ReportVariant<'a> {
    pub label: String,
    pub image: &'a ColorRaster8,
    pub lossless: Option<&'a ColorRasterF>,
}

/// Metric results for one comparison run. Reference-dependent fields are
/// `None` when no reference image was supplied; `reversible` is `None` for
/// methods without a lossless product.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub method_label: String,
    pub reversible: Option<bool>,
    pub rmse: Option<f64>,
    pub nrmse: Option<f64>,
    pub saturation_error: Option<f64>,
    pub ssim_per_band: Option<[f64; 3]>,
    pub ssim_mean: Option<f64>,
}

/// Scores every variant against the optional reference.
///
/// `rmse` is the root mean squared difference over all `3·M·N` channel
/// samples; `nrmse` divides it by the 255 dynamic range. The reversibility
/// check inverts each lossless product and compares it with `gray_input`.
pub fn build_report(
    gray_input: &GrayRaster,
    variants: &[ReportVariant<'_>],
    reference: Option<&ColorRaster8>,
    config: &SsimConfig,
) -> Result<Vec<MetricReport>, MetricsError> {
    let dims = (gray_input.width(), gray_input.height());
    for v in variants {
        if (v.image.width(), v.image.height()) != dims {
            return Err(MetricsError::DimensionMismatch(format!(
                "variant {:?} is {}x{}, input is {}x{}",
                v.label,
                v.image.width(),
                v.image.height(),
                dims.0,
                dims.1
            )));
        }
    }
    if let Some(r) = reference {
        if (r.width(), r.height()) != dims {
            return Err(MetricsError::DimensionMismatch(format!(
                "reference is {}x{}, input is {}x{}",
                r.width(),
                r.height(),
                dims.0,
                dims.1
            )));
        }
    }

    let mut reports = Vec::with_capacity(variants.len());
    for v in variants {
        let reversible = v.lossless.map(|c| &invert(c) == gray_input);
        let report = match reference {
            None => MetricReport {
                method_label: v.label.clone(),
                reversible,
                rmse: None,
                nrmse: None,
                saturation_error: None,
                ssim_per_band: None,
                ssim_mean: None,
            },
            Some(reference) => {
                let flat = |img: &ColorRaster8| -> Vec<f64> {
                    img.data().iter().map(|&v| v as f64).collect()
                };
                let rm = rmse(&flat(v.image), &flat(reference))?;
                let bands = ssim_color(v.image, reference, config)?;
                MetricReport {
                    method_label: v.label.clone(),
                    reversible,
                    rmse: Some(rm),
                    nrmse: Some(rm / 255.0),
                    saturation_error: Some(saturation_error(v.image, reference)?),
                    ssim_per_band: Some([bands.r, bands.g, bands.b]),
                    ssim_mean: Some(bands.mean),
                }
            }
        };
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorfn::{colorize, ColorParams};
    use crate::raster::render;
    use proptest::prelude::*;

    fn lcg_plane(n: usize, seed: u64) -> Vec<f64> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 40) as u8 as f64
            })
            .collect()
    }

    fn lcg_color(width: usize, height: usize, seed: u64) -> ColorRaster8 {
        let mut s = seed;
        ColorRaster8::from_fn(width, height, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            [(s >> 16) as u8, (s >> 32) as u8, (s >> 48) as u8]
        })
    }

    #[test]
    fn rmse_basics() {
        let a = vec![5.0; 8];
        assert_eq!(rmse(&a, &a).unwrap(), 0.0);
        let b = vec![15.0; 8];
        assert!((rmse(&a, &b).unwrap() - 10.0).abs() < 1e-12);
        assert!(rmse(&a, &[1.0]).is_err());
    }

    #[test]
    fn rmse_matches_double_loop_oracle() {
        let a = lcg_plane(16, 1);
        let b = lcg_plane(16, 2);
        let mut acc = 0.0;
        for y in 0..4 {
            for x in 0..4 {
                let d = a[y * 4 + x] - b[y * 4 + x];
                acc += d * d;
            }
        }
        let expected = (acc / 16.0).sqrt();
        assert!((rmse(&a, &b).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn saturation_error_extremes() {
        let img = lcg_color(6, 6, 7);
        assert_eq!(saturation_error(&img, &img).unwrap(), 0.0);

        // Fully saturated vs fully achromatic differs by 1 everywhere.
        let saturated = ColorRaster8::from_fn(4, 4, |_, _| [255, 0, 0]);
        let gray = ColorRaster8::from_fn(4, 4, |_, _| [128, 128, 128]);
        assert!((saturation_error(&saturated, &gray).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn saturation_error_composes_oracles() {
        let a = lcg_color(5, 3, 21);
        let b = lcg_color(5, 3, 22);
        let s = |img: &ColorRaster8| -> Vec<f64> {
            img.pixels()
                .map(|[r, g, b]| {
                    rgb_to_hsv(r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0).s
                })
                .collect()
        };
        let expected = rmse(&s(&a), &s(&b)).unwrap();
        assert_eq!(saturation_error(&a, &b).unwrap(), expected);
    }

    #[test]
    fn ssim_self_is_exactly_one() {
        let a = lcg_plane(16 * 16, 5);
        let (_, mean) = ssim(&a, &a, 16, 16, &SsimConfig::default()).unwrap();
        assert_eq!(mean, 1.0);
    }

    #[test]
    fn ssim_is_symmetric() {
        let a = lcg_plane(16 * 16, 5);
        let b = lcg_plane(16 * 16, 6);
        let cfg = SsimConfig::default();
        let (_, ab) = ssim(&a, &b, 16, 16, &cfg).unwrap();
        let (_, ba) = ssim(&b, &a, 16, 16, &cfg).unwrap();
        assert!((ab - ba).abs() < 1e-12);
    }

    #[test]
    fn ssim_constant_offset_closed_form() {
        let cfg = SsimConfig::default();
        let c = 100.0;
        let a = vec![c; 13 * 13];
        let b = vec![c + 1.0; 13 * 13];
        let (map, mean) = ssim(&a, &b, 13, 13, &cfg).unwrap();
        let expected = (2.0 * c * (c + 1.0) + cfg.c1) / (c * c + (c + 1.0) * (c + 1.0) + cfg.c1);
        assert!((mean - expected).abs() < 1e-12);
        assert!(map.data.iter().all(|v| (v - expected).abs() < 1e-12));
    }

    #[test]
    fn ssim_rejects_small_images() {
        let a = vec![0.0; 9];
        let err = ssim(&a, &a, 3, 3, &SsimConfig::default()).unwrap_err();
        assert!(matches!(err, MetricsError::ImageTooSmall { side: 11, .. }));
    }

    #[test]
    fn ssim_color_identity_and_mean() {
        let img = lcg_color(16, 16, 17);
        let bands = ssim_color(&img, &img, &SsimConfig::default()).unwrap();
        assert_eq!((bands.r, bands.g, bands.b, bands.mean), (1.0, 1.0, 1.0, 1.0));

        let other = lcg_color(16, 16, 18);
        let bands = ssim_color(&img, &other, &SsimConfig::default()).unwrap();
        assert!((bands.mean - (bands.r + bands.g + bands.b) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn report_without_reference_is_labels_and_reversibility() {
        let gray = GrayRaster::from_fn(16, 16, |x, y| (x * 16 + y) as u8);
        let params = ColorParams::new(0.38, 0.15).unwrap();
        let lossless = colorize(&gray, params);
        let image = render(&lossless);
        let variants = [ReportVariant {
            label: "proposed".into(),
            image: &image,
            lossless: Some(&lossless),
        }];
        let reports = build_report(&gray, &variants, None, &SsimConfig::default()).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].method_label, "proposed");
        assert_eq!(reports[0].reversible, Some(true));
        assert_eq!(reports[0].rmse, None);
        assert_eq!(reports[0].ssim_mean, None);
    }

    #[test]
    fn report_against_self_reference_is_perfect() {
        let gray = GrayRaster::from_fn(16, 16, |x, _| (x * 16) as u8);
        let img = lcg_color(16, 16, 3);
        let variants = [ReportVariant { label: "v".into(), image: &img, lossless: None }];
        let reports = build_report(&gray, &variants, Some(&img), &SsimConfig::default()).unwrap();
        let r = &reports[0];
        assert_eq!(r.rmse, Some(0.0));
        assert_eq!(r.nrmse, Some(0.0));
        assert_eq!(r.saturation_error, Some(0.0));
        assert_eq!(r.ssim_mean, Some(1.0));
        assert_eq!(r.reversible, None);
    }

    #[test]
    fn noisier_variant_scores_worse_rmse() {
        let gray = GrayRaster::from_fn(16, 16, |x, y| ((x + y) * 8) as u8);
        let reference = lcg_color(16, 16, 40);
        let perturb = |img: &ColorRaster8, amp: i16| -> ColorRaster8 {
            let mut s = 99u64;
            let data = img
                .data()
                .iter()
                .map(|&v| {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let noise = ((s >> 33) as i16 % (2 * amp + 1)) - amp;
                    (v as i16 + noise).clamp(0, 255) as u8
                })
                .collect();
            ColorRaster8::new(img.width(), img.height(), data).unwrap()
        };
        let mild = perturb(&reference, 3);
        let harsh = perturb(&reference, 60);
        let variants = [
            ReportVariant { label: "mild".into(), image: &mild, lossless: None },
            ReportVariant { label: "harsh".into(), image: &harsh, lossless: None },
        ];
        let reports =
            build_report(&gray, &variants, Some(&reference), &SsimConfig::default()).unwrap();
        assert!(reports[1].rmse.unwrap() >= reports[0].rmse.unwrap());
    }

    #[test]
    fn report_rejects_mismatched_dimensions() {
        let gray = GrayRaster::from_fn(16, 16, |_, _| 0);
        let img = lcg_color(8, 8, 3);
        let variants = [ReportVariant { label: "v".into(), image: &img, lossless: None }];
        assert!(build_report(&gray, &variants, None, &SsimConfig::default()).is_err());
    }

    proptest! {
        #[test]
        fn rmse_triangle_inequality(seed in any::<u64>()) {
            let a = lcg_plane(24, seed);
            let b = lcg_plane(24, seed.wrapping_add(1));
            let c = lcg_plane(24, seed.wrapping_add(2));
            let ab = rmse(&a, &b).unwrap();
            let bc = rmse(&b, &c).unwrap();
            let ac = rmse(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-9);
        }

        #[test]
        fn ssim_mean_bounded(seed in any::<u64>()) {
            let a = lcg_plane(14 * 14, seed);
            let b = lcg_plane(14 * 14, seed.wrapping_add(7));
            let (_, mean) = ssim(&a, &b, 14, 14, &SsimConfig::default()).unwrap();
            prop_assert!((-1.0..=1.0).contains(&mean));
        }

        // Saturation error reads only the S channel. A cyclic channel
        // permutation is an exact 120-degree hue rotation in the hexcone
        // model, so it must leave the metric bit-identical.
        #[test]
        fn saturation_error_ignores_hue_rotation(seed in any::<u64>()) {
            let a = lcg_color(6, 4, seed);
            let b = lcg_color(6, 4, seed.wrapping_add(13));
            let rotate = |img: &ColorRaster8| -> ColorRaster8 {
                let data = img.pixels().flat_map(|[r, g, b]| [b, r, g]).collect();
                ColorRaster8::new(img.width(), img.height(), data).unwrap()
            };
            let before = saturation_error(&a, &b).unwrap();
            let after = saturation_error(&rotate(&a), &rotate(&b)).unwrap();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn ssim_decreases_with_noise_on_average() {
        let base = lcg_plane(20 * 20, 77);
        let cfg = SsimConfig::default();
        let mut means = Vec::new();
        for amp in [2.0, 8.0, 32.0] {
            let mut total = 0.0;
            let trials = 100;
            for t in 0..trials {
                let mut s = 1000 + t as u64;
                let noisy: Vec<f64> = base
                    .iter()
                    .map(|&v| {
                        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        let u = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                        (v + amp * u).clamp(0.0, 255.0)
                    })
                    .collect();
                total += ssim(&base, &noisy, 20, 20, &cfg).unwrap().1;
            }
            means.push(total / trials as f64);
        }
        assert!(means[0] > means[1] && means[1] > means[2], "{means:?}");
    }
}
