//! Binary PGM (`P5`) and PPM (`P6`) readers and writers, maxval 255 only.
//!
//! The reader accepts arbitrary whitespace and `#` comment lines between
//! header tokens. Exactly one whitespace byte separates the maxval from the
//! pixel payload, so payloads whose first bytes happen to be whitespace
//! characters survive a round-trip. The writer emits the canonical header
//! `"P5\n<w> <h>\n255\n"`.

use super::{check_dims, ColorRaster8, GrayRaster, RasterError};

struct HeaderParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderParser<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => return,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32, RasterError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(RasterError::MalformedHeader(format!("expected numeric {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| RasterError::MalformedHeader(format!("invalid {what}")))
    }

    /// Consumes the single whitespace byte that separates maxval from payload.
    fn payload(self) -> Result<&'a [u8], RasterError> {
        match self.bytes.get(self.pos) {
            Some(b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c) => Ok(&self.bytes[self.pos + 1..]),
            _ => Err(RasterError::MalformedHeader(
                "expected single whitespace before payload".into(),
            )),
        }
    }
}

fn parse_header<'a>(
    bytes: &'a [u8],
    magic: &[u8; 2],
) -> Result<(usize, usize, &'a [u8]), RasterError> {
    if bytes.len() < 2 || &bytes[..2] != magic {
        return Err(RasterError::MalformedHeader(format!(
            "expected magic {:?}",
            std::str::from_utf8(magic).unwrap()
        )));
    }
    let mut p = HeaderParser::new(&bytes[2..]);
    let width = p.number("width")? as usize;
    let height = p.number("height")? as usize;
    let maxval = p.number("maxval")?;
    if maxval != 255 {
        return Err(RasterError::UnsupportedMaxval(maxval));
    }
    check_dims(width, height)?;
    p.payload()
        .map(|payload| (width, height, payload))
}

/// Decodes a binary PGM (`P5`, maxval 255) image.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayRaster, RasterError> {
    let (width, height, payload) = parse_header(bytes, b"P5")?;
    let expected = width * height;
    if payload.len() < expected {
        return Err(RasterError::TruncatedPayload { expected, found: payload.len() });
    }
    GrayRaster::new(width, height, payload[..expected].to_vec())
}

/// Encodes a grayscale raster as canonical binary PGM.
pub fn write_pgm(raster: &GrayRaster) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", raster.width(), raster.height()).into_bytes();
    out.extend_from_slice(raster.data());
    out
}

/// Decodes a binary PPM (`P6`, maxval 255) image.
pub fn read_ppm(bytes: &[u8]) -> Result<ColorRaster8, RasterError> {
    let (width, height, payload) = parse_header(bytes, b"P6")?;
    let expected = width * height * 3;
    if payload.len() < expected {
        return Err(RasterError::TruncatedPayload { expected, found: payload.len() });
    }
    ColorRaster8::new(width, height, payload[..expected].to_vec())
}

/// Encodes a color raster as canonical binary PPM.
pub fn write_ppm(raster: &ColorRaster8) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", raster.width(), raster.height()).into_bytes();
    out.extend_from_slice(raster.data());
    out
}
