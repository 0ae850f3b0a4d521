//! RPC container: lossless persistence for the unclipped colorized product.
//!
//! Layout: ASCII header `"RPC1\n<width> <height>\n<alpha> <beta>\n"` followed
//! by three planar channel blocks (R, G, B), each `width * height`
//! little-endian IEEE-754 `f32` values, row-major. Alpha and beta are printed
//! with 17 significant digits (`nan nan` when the raster carries no
//! provenance), which round-trips any finite `f64` exactly.
//!
//! Channels are stored as `f32`; the writer quantizes to 32 bits, so
//! `read(write(x))` equals `x` with that quantization applied symmetrically
//! and a write/read/write cycle is byte-identical. 32-bit storage still
//! recovers every 8-bit intensity exactly through the inverse color function.

use super::{check_dims, ColorRasterF, RasterError};

const MAGIC: &str = "RPC1";

fn format_param(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{:.16e}", v)
    }
}

/// Serializes the raster to RPC bytes, quantizing channels to 32 bits.
pub fn write_rpc(raster: &ColorRasterF) -> Vec<u8> {
    let (alpha, beta) = match raster.meta() {
        Some((a, b)) => (format_param(a), format_param(b)),
        None => ("nan".to_string(), "nan".to_string()),
    };
    let mut out = format!(
        "{MAGIC}\n{} {}\n{alpha} {beta}\n",
        raster.width(),
        raster.height()
    )
    .into_bytes();
    for plane in [raster.red(), raster.green(), raster.blue()] {
        for &v in plane {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    out
}

fn take_line<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a str, RasterError> {
    let rest = &bytes[*pos..];
    let end = rest
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| RasterError::MalformedHeader("unterminated header line".into()))?;
    *pos += end + 1;
    std::str::from_utf8(&rest[..end])
        .map_err(|_| RasterError::MalformedHeader("non-ASCII header line".into()))
}

/// Deserializes RPC bytes back into a [`ColorRasterF`].
pub fn read_rpc(bytes: &[u8]) -> Result<ColorRasterF, RasterError> {
    let mut pos = 0;
    if take_line(bytes, &mut pos)? != MAGIC {
        return Err(RasterError::BadMagic { expected: MAGIC });
    }

    let dims = take_line(bytes, &mut pos)?;
    let mut it = dims.split_ascii_whitespace();
    let width: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| RasterError::DimensionMismatch(format!("bad dimension line {dims:?}")))?;
    let height: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| RasterError::DimensionMismatch(format!("bad dimension line {dims:?}")))?;
    if it.next().is_some() {
        return Err(RasterError::DimensionMismatch(format!("bad dimension line {dims:?}")));
    }
    let pixels = check_dims(width, height)?;

    let params = take_line(bytes, &mut pos)?;
    let mut it = params.split_ascii_whitespace();
    let alpha: f64 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| RasterError::MalformedHeader(format!("bad parameter line {params:?}")))?;
    let beta: f64 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| RasterError::MalformedHeader(format!("bad parameter line {params:?}")))?;
    let meta = if alpha.is_nan() && beta.is_nan() {
        None
    } else {
        Some((alpha, beta))
    };

    let expected = pixels * 3 * 4;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(RasterError::TruncatedPayload { expected, found: payload.len() });
    }
    let mut planes = Vec::with_capacity(3);
    for p in 0..3 {
        let block = &payload[p * pixels * 4..(p + 1) * pixels * 4];
        planes.push(
            block
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
                .collect::<Vec<f64>>(),
        );
    }
    let b = planes.pop().unwrap();
    let g = planes.pop().unwrap();
    let r = planes.pop().unwrap();
    ColorRasterF::new(width, height, r, g, b, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn round_trips_exact_values() {
        let c = ColorRasterF::new(
            1,
            1,
            vec![304.0],
            vec![120.0],
            vec![376.0],
            Some((0.38, 0.15)),
        )
        .unwrap();
        let back = read_rpc(&write_rpc(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_magic() {
        let c = ColorRasterF::new(1, 1, vec![1.0], vec![2.0], vec![3.0], None).unwrap();
        let mut bytes = write_rpc(&c);
        bytes[3] = b'2';
        assert!(matches!(read_rpc(&bytes), Err(RasterError::BadMagic { .. })));
    }

    #[test]
    fn rejects_truncated_planes() {
        // Declared 2x2 but only 3 pixels of plane data present.
        let mut bytes = b"RPC1\n2 2\nnan nan\n".to_vec();
        bytes.extend(std::iter::repeat_n(0u8, 3 * 4 * 3));
        let err = read_rpc(&bytes).unwrap_err();
        assert!(matches!(err, RasterError::TruncatedPayload { expected: 48, found: 36 }));
    }

    #[test]
    fn preserves_absent_meta() {
        let c = ColorRasterF::new(2, 1, vec![0.5, 1.5], vec![0.0, 2.5], vec![3.5, 9.0], None)
            .unwrap();
        assert_eq!(read_rpc(&write_rpc(&c)).unwrap().meta(), None);
    }

    proptest! {
        #[test]
        fn write_read_is_quantize32(
            vals in proptest::collection::vec(0.0f64..1024.0, 3..48),
            alpha in 0.001f64..0.998,
            beta in 0.001f64..0.998,
        ) {
            let n = vals.len() / 3;
            let r = vals[..n].to_vec();
            let g = vals[n..2 * n].to_vec();
            let b = vals[2 * n..3 * n].to_vec();
            let meta = Some((alpha, beta));
            let c = ColorRasterF::new(n, 1, r.clone(), g.clone(), b.clone(), meta).unwrap();
            let back = read_rpc(&write_rpc(&c)).unwrap();
            prop_assert_eq!(back.meta(), meta);
            for (orig, got) in [( &r, back.red()), (&g, back.green()), (&b, back.blue())] {
                for (o, v) in orig.iter().zip(got) {
                    prop_assert_eq!(*o as f32 as f64, *v);
                }
            }
            // A second write/read cycle is bit-stable.
            let bytes = write_rpc(&back);
            prop_assert_eq!(read_rpc(&bytes).unwrap(), back);
        }
    }
}
