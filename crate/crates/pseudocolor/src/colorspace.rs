//! Hexcone HSV color model and a sector-table hue formula.
//!
//! One saturation definition is used everywhere in this crate:
//! `S = (max - min) / max` (hexcone model). The sector-table formula
//! [`hue_eq6`] computes hue as `60°(m + n(M-L)/(H-L))` from the sorted
//! channel values and a per-ordering `(m, n)` pair; it agrees with the
//! standard hexcone hue on every chromatic input, which is verified by a
//! property test.

use thiserror::Error;

/// A pixel in HSV: hue in degrees `[0, 360)`, saturation and value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsvPixel {
    pub h: f64,
    pub s: f64,
    pub v: f64,
}

/// The input has all channels equal, so hue is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("achromatic pixel: hue is undefined when all channels are equal")]
pub struct AchromaticPixel;

/// Converts RGB fractions in `[0, 1]` to hexcone HSV.
///
/// `v = max(r, g, b)`; `s = (max - min) / max` for `max > 0`, else 0;
/// `h` by the standard sector formula, 0 when `max = min`.
pub fn rgb_to_hsv(r: f64, g: f64, b: f64) -> HsvPixel {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;

    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    let h = if delta == 0.0 {
        0.0
    } else if max == r {
        let h = 60.0 * (g - b) / delta;
        if h < 0.0 {
            h + 360.0
        } else {
            h
        }
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    HsvPixel { h, s, v }
}

/// Converts HSV back to RGB fractions. Inverse of [`rgb_to_hsv`] on its range.
pub fn hsv_to_rgb(p: HsvPixel) -> (f64, f64, f64) {
    if p.s == 0.0 {
        return (p.v, p.v, p.v);
    }
    let h6 = p.h.rem_euclid(360.0) / 60.0;
    let sector = (h6.floor() as usize) % 6;
    let f = h6 - h6.floor();
    let p_ = p.v * (1.0 - p.s);
    let q = p.v * (1.0 - p.s * f);
    let t = p.v * (1.0 - p.s * (1.0 - f));
    match sector {
        0 => (p.v, t, p_),
        1 => (q, p.v, p_),
        2 => (p_, p.v, t),
        3 => (p_, q, p.v),
        4 => (t, p_, p.v),
        _ => (p.v, p_, q),
    }
}

/// Which channel holds the smallest, middle, and largest value.
///
/// Variant letters list the channels from smallest to largest, so `Bgr`
/// means `B < G < R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelOrdering {
    Bgr,
    Brg,
    Rbg,
    Rgb,
    Grb,
    Gbr,
}

impl ChannelOrdering {
    /// Non-strict match, so boundary pixels (two channels equal) satisfy
    /// both adjacent orderings and either row yields the same boundary hue.
    fn matches(self, r: f64, g: f64, b: f64) -> bool {
        let (lo, mid, hi) = self.sort(r, g, b);
        lo <= mid && mid <= hi
    }

    fn sort(self, r: f64, g: f64, b: f64) -> (f64, f64, f64) {
        match self {
            ChannelOrdering::Bgr => (b, g, r),
            ChannelOrdering::Brg => (b, r, g),
            ChannelOrdering::Rbg => (r, b, g),
            ChannelOrdering::Rgb => (r, g, b),
            ChannelOrdering::Grb => (g, r, b),
            ChannelOrdering::Gbr => (g, b, r),
        }
    }
}

/// One row of the hue sector table: `hue = 60°(m + n(M-L)/(H-L))` where
/// `(L, M, H)` are the channel values sorted by `ordering`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HueParams {
    pub m: u8,
    pub n: i8,
    pub ordering: ChannelOrdering,
}

impl HueParams {
    /// The six sector rows, one per hue region from red-yellow to magenta-red.
    pub const TABLE: [HueParams; 6] = [
        HueParams { m: 0, n: 1, ordering: ChannelOrdering::Bgr },
        HueParams { m: 2, n: -1, ordering: ChannelOrdering::Brg },
        HueParams { m: 2, n: 1, ordering: ChannelOrdering::Rbg },
        HueParams { m: 4, n: -1, ordering: ChannelOrdering::Rgb },
        HueParams { m: 4, n: 1, ordering: ChannelOrdering::Grb },
        HueParams { m: 6, n: -1, ordering: ChannelOrdering::Gbr },
    ];

    /// Selects the first table row whose ordering matches the channel values.
    pub fn for_rgb(r: f64, g: f64, b: f64) -> Result<HueParams, AchromaticPixel> {
        if r == g && g == b {
            return Err(AchromaticPixel);
        }
        Ok(*Self::TABLE
            .iter()
            .find(|row| row.ordering.matches(r, g, b))
            .expect("some ordering always matches"))
    }

    fn hue(self, r: f64, g: f64, b: f64) -> f64 {
        let (lo, mid, hi) = self.ordering.sort(r, g, b);
        let h = 60.0 * (self.m as f64 + self.n as f64 * (mid - lo) / (hi - lo));
        h.rem_euclid(360.0)
    }
}

/// Computes hue from the sector table. Scale-invariant, so channel values in
/// any common non-negative scale are accepted.
pub fn hue_eq6(r: f64, g: f64, b: f64) -> Result<f64, AchromaticPixel> {
    HueParams::for_rgb(r, g, b).map(|row| row.hue(r, g, b))
}
