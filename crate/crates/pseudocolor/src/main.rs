//! Command-line front-end: colorize, invert, baseline colorizers,
//! post-processing, and metric reports over PGM/PPM/RPC files.
//!
//! Exit codes: 0 success, 2 parameter error, 3 I/O or format error,
//! 4 algorithmic degeneracy (e.g. a histogram with too few distinct levels).

use clap::{Parser, Subcommand, ValueEnum};
use pseudocolor::baselines::{
    daily_colorize, histogram, otsu, quantize_pseudocolor, samanta_enhance, DailyConfig,
    QuantizePalette,
};
use pseudocolor::colorfn::{classify_region, colorize, invert, ColorParams};
use pseudocolor::metrics::{build_report, MetricReport, ReportVariant, SsimConfig};
use pseudocolor::postproc::{
    gaussian_frequency_color, gaussian_frequency_gray, gaussian_spatial_color,
    gaussian_spatial_gray, histogram_match, FilterMode, GaussianFreqConfig,
};
use pseudocolor::raster::{
    read_pgm, read_ppm, read_rpc, render, write_pgm, write_ppm, write_rpc, ColorRaster8,
};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pseudocolor", version, about = "Reversible pseudo-coloring for single-band rasters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Colorize a grayscale PGM into a lossless RPC product
    Colorize {
        /// Input grayscale image (binary PGM, maxval 255)
        input: PathBuf,
        /// Output lossless colorized product (RPC)
        output: PathBuf,
        /// Red weight, 0 < alpha < 1
        #[arg(long)]
        alpha: f64,
        /// Green weight, 0 < beta < 1; alpha + beta < 1
        #[arg(long)]
        beta: f64,
        /// Also write a clipped 8-bit render (binary PPM)
        #[arg(long)]
        ppm: Option<PathBuf>,
    },
    /// Recover the grayscale band from an RPC product
    Invert {
        /// Input colorized product (RPC)
        input: PathBuf,
        /// Output grayscale image (binary PGM)
        output: PathBuf,
    },
    /// Run a baseline colorizer
    Baseline {
        #[arg(long, value_enum)]
        method: BaselineMethod,
        /// Input grayscale image (binary PGM)
        input: PathBuf,
        /// Output colorized image (binary PPM)
        output: PathBuf,
        /// Class count for otsu-samanta (2-4)
        #[arg(long, default_value_t = 3)]
        classes: usize,
        /// Palette for otsu-samanta as "r,g,b;r,g,b;..." (defaults to a
        /// blue-to-red spectral ramp)
        #[arg(long)]
        palette: Option<String>,
        /// Intensity bin count for daily
        #[arg(long, default_value_t = 3)]
        bins: usize,
        /// First bin hue in degrees for daily
        #[arg(long, default_value_t = 240.0)]
        hue_start: f64,
        /// Last bin hue in degrees for daily
        #[arg(long, default_value_t = 0.0)]
        hue_end: f64,
    },
    /// Post-process a colorized image
    Postprocess {
        #[arg(long, value_enum)]
        op: PostprocessOp,
        /// Input image (PPM; PGM also accepted for the Gaussian filters)
        input: PathBuf,
        /// Output image, same format as the input
        output: PathBuf,
        /// Reference image for histogram matching (PPM)
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Transfer-function scale for glpf-freq (> 0)
        #[arg(long)]
        d0: Option<f64>,
        /// Use the high-pass complement for glpf-freq
        #[arg(long, default_value_t = false)]
        highpass: bool,
    },
    /// Score candidate images and write a JSON report
    Metrics {
        /// Candidate images (PPM, or RPC which is rendered first)
        #[arg(required = true)]
        candidates: Vec<PathBuf>,
        /// Natural-color reference image (PPM)
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Report output path (JSON)
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineMethod {
    /// Otsu quantization followed by the hue-rewrite enhancement
    OtsuSamanta,
    /// HSV split-spectrum intensity binning
    Daily,
}

#[derive(Clone, Copy, ValueEnum)]
enum PostprocessOp {
    /// Histogram matching against a reference image
    Hm,
    /// 3x3 spatial Gaussian mask
    GlpfSpatial,
    /// Frequency-domain Gaussian filter
    GlpfFreq,
}

enum CliError {
    Param(String),
    IoFormat(String),
    Degenerate(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Param(_) => 2,
            CliError::IoFormat(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Param(m) | CliError::IoFormat(m) | CliError::Degenerate(m) => m,
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::IoFormat(format!("{}: {e}", path.display())))
}

/// Writes through a temp file and renames, so outputs are never half-written.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| CliError::IoFormat(format!("{}: {e}", path.display())))
}

fn parse_palette(arg: &str) -> Result<Vec<[u8; 3]>, CliError> {
    arg.split(';')
        .map(|entry| {
            let parts: Vec<&str> = entry.split(',').collect();
            if parts.len() != 3 {
                return Err(CliError::Param(format!(
                    "palette entry {entry:?} must be r,g,b"
                )));
            }
            let mut px = [0u8; 3];
            for (slot, part) in px.iter_mut().zip(&parts) {
                *slot = part.trim().parse().map_err(|_| {
                    CliError::Param(format!("palette component {part:?} must be 0-255"))
                })?;
            }
            Ok(px)
        })
        .collect()
}

/// Either kind of image the postprocess and metrics commands accept.
enum AnyImage {
    Gray(pseudocolor::GrayRaster),
    Color(ColorRaster8),
}

fn read_image(path: &Path) -> Result<AnyImage, CliError> {
    let bytes = read_file(path)?;
    match bytes.first() {
        Some(b'P') if bytes.get(1) == Some(&b'5') => read_pgm(&bytes)
            .map(AnyImage::Gray)
            .map_err(|e| CliError::IoFormat(format!("{}: {e}", path.display()))),
        _ => read_ppm(&bytes)
            .map(AnyImage::Color)
            .map_err(|e| CliError::IoFormat(format!("{}: {e}", path.display()))),
    }
}

/// Reads a metrics candidate: PPM directly, or an RPC product rendered to
/// its 8-bit display form.
fn read_candidate(path: &Path) -> Result<ColorRaster8, CliError> {
    let bytes = read_file(path)?;
    if bytes.starts_with(b"RPC1") {
        let raster =
            read_rpc(&bytes).map_err(|e| CliError::IoFormat(format!("{}: {e}", path.display())))?;
        Ok(render(&raster))
    } else {
        read_ppm(&bytes).map_err(|e| CliError::IoFormat(format!("{}: {e}", path.display())))
    }
}

#[derive(Serialize)]
struct JsonReport {
    reference: Option<String>,
    entries: Vec<JsonEntry>,
}

#[derive(Serialize)]
struct JsonEntry {
    label: String,
    rmse: Option<f64>,
    nrmse: Option<f64>,
    saturation_error: Option<f64>,
    ssim: Option<JsonSsim>,
}

#[derive(Serialize)]
struct JsonSsim {
    r: f64,
    g: f64,
    b: f64,
    mean: f64,
}

fn to_json_entry(report: &MetricReport) -> JsonEntry {
    JsonEntry {
        label: report.method_label.clone(),
        rmse: report.rmse,
        nrmse: report.nrmse,
        saturation_error: report.saturation_error,
        ssim: report.ssim_per_band.map(|[r, g, b]| JsonSsim {
            r,
            g,
            b,
            mean: report.ssim_mean.expect("band scores imply a mean"),
        }),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Colorize { input, output, alpha, beta, ppm } => {
            let params = ColorParams::new(alpha, beta)
                .map_err(|e| CliError::Param(e.to_string()))?;
            let bytes = read_file(&input)?;
            let gray = read_pgm(&bytes)
                .map_err(|e| CliError::IoFormat(format!("{}: {e}", input.display())))?;
            let colorized = colorize(&gray, params);
            eprintln!("alpha = {:.16e}, beta = {:.16e}", params.alpha(), params.beta());
            eprintln!("region: {}", classify_region(params));
            write_atomic(&output, &write_rpc(&colorized))?;
            if let Some(ppm_path) = ppm {
                write_atomic(&ppm_path, &write_ppm(&render(&colorized)))?;
            }
            Ok(())
        }
        Command::Invert { input, output } => {
            let bytes = read_file(&input)?;
            let colorized = read_rpc(&bytes)
                .map_err(|e| CliError::IoFormat(format!("{}: {e}", input.display())))?;
            write_atomic(&output, &write_pgm(&invert(&colorized)))
        }
        Command::Baseline {
            method,
            input,
            output,
            classes,
            palette,
            bins,
            hue_start,
            hue_end,
        } => {
            let bytes = read_file(&input)?;
            let gray = read_pgm(&bytes)
                .map_err(|e| CliError::IoFormat(format!("{}: {e}", input.display())))?;
            let colorized = match method {
                BaselineMethod::OtsuSamanta => {
                    if !(2..=4).contains(&classes) {
                        return Err(CliError::Param(format!(
                            "classes must be 2, 3, or 4, got {classes}"
                        )));
                    }
                    let palette = match palette {
                        Some(arg) => QuantizePalette::new(parse_palette(&arg)?),
                        None => QuantizePalette::spectral(classes),
                    };
                    if palette.len() != classes {
                        return Err(CliError::Param(format!(
                            "palette has {} colors but {classes} classes requested",
                            palette.len()
                        )));
                    }
                    let thresholds = otsu(&histogram(&gray), classes)
                        .map_err(|e| CliError::Degenerate(e.to_string()))?;
                    let printable: Vec<String> =
                        thresholds.thresholds().iter().map(|t| t.to_string()).collect();
                    eprintln!("thresholds: {}", printable.join(", "));
                    samanta_enhance(&quantize_pseudocolor(&gray, &thresholds, &palette))
                }
                BaselineMethod::Daily => {
                    let config = DailyConfig::new(bins, hue_start, hue_end)
                        .map_err(CliError::Param)?;
                    daily_colorize(&gray, &config)
                }
            };
            write_atomic(&output, &write_ppm(&colorized))
        }
        Command::Postprocess { op, input, output, reference, d0, highpass } => {
            match op {
                PostprocessOp::Hm => {
                    let reference = reference.ok_or_else(|| {
                        CliError::Param("hm requires --reference".to_string())
                    })?;
                    let src = match read_image(&input)? {
                        AnyImage::Color(c) => c,
                        AnyImage::Gray(_) => {
                            return Err(CliError::Param(
                                "hm requires a color (P6) input".to_string(),
                            ))
                        }
                    };
                    let reference = match read_image(&reference)? {
                        AnyImage::Color(c) => c,
                        AnyImage::Gray(_) => {
                            return Err(CliError::Param(
                                "hm requires a color (P6) reference".to_string(),
                            ))
                        }
                    };
                    write_atomic(&output, &write_ppm(&histogram_match(&src, &reference)))
                }
                PostprocessOp::GlpfSpatial => match read_image(&input)? {
                    AnyImage::Gray(g) => {
                        write_atomic(&output, &write_pgm(&gaussian_spatial_gray(&g)))
                    }
                    AnyImage::Color(c) => {
                        write_atomic(&output, &write_ppm(&gaussian_spatial_color(&c)))
                    }
                },
                PostprocessOp::GlpfFreq => {
                    let d0 = d0.ok_or_else(|| {
                        CliError::Param("glpf-freq requires --d0".to_string())
                    })?;
                    let mode = if highpass { FilterMode::HighPass } else { FilterMode::LowPass };
                    let config =
                        GaussianFreqConfig::new(d0, mode).map_err(CliError::Param)?;
                    match read_image(&input)? {
                        AnyImage::Gray(g) => {
                            write_atomic(&output, &write_pgm(&gaussian_frequency_gray(&g, &config)))
                        }
                        AnyImage::Color(c) => write_atomic(
                            &output,
                            &write_ppm(&gaussian_frequency_color(&c, &config)),
                        ),
                    }
                }
            }
        }
        Command::Metrics { candidates, reference, report } => {
            let images: Vec<(String, ColorRaster8)> = candidates
                .iter()
                .map(|p| Ok((p.display().to_string(), read_candidate(p)?)))
                .collect::<Result<_, CliError>>()?;
            let reference_img = reference
                .as_ref()
                .map(|p| read_candidate(p))
                .transpose()?;

            let first = &images[0].1;
            for (label, img) in &images[1..] {
                if (img.width(), img.height()) != (first.width(), first.height()) {
                    return Err(CliError::IoFormat(format!(
                        "dimension mismatch: {label} is {}x{}, {} is {}x{}",
                        img.width(),
                        img.height(),
                        images[0].0,
                        first.width(),
                        first.height()
                    )));
                }
            }
            if let Some(r) = &reference_img {
                if (r.width(), r.height()) != (first.width(), first.height()) {
                    return Err(CliError::IoFormat(format!(
                        "dimension mismatch: reference is {}x{}, candidates are {}x{}",
                        r.width(),
                        r.height(),
                        first.width(),
                        first.height()
                    )));
                }
            }

            // The report only needs dimensions from the gray side; synthesize
            // a blank band of matching size.
            let gray = pseudocolor::GrayRaster::from_fn(first.width(), first.height(), |_, _| 0);
            let variants: Vec<ReportVariant<'_>> = images
                .iter()
                .map(|(label, img)| ReportVariant {
                    label: label.clone(),
                    image: img,
                    lossless: None,
                })
                .collect();
            let reports = build_report(
                &gray,
                &variants,
                reference_img.as_ref(),
                &SsimConfig::default(),
            )
            .map_err(|e| CliError::IoFormat(e.to_string()))?;

            let json = JsonReport {
                reference: reference.map(|p| p.display().to_string()),
                entries: reports.iter().map(to_json_entry).collect(),
            };
            let mut body = serde_json::to_string_pretty(&json)
                .map_err(|e| CliError::IoFormat(e.to_string()))?;
            body.push('\n');
            write_atomic(&report, body.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
