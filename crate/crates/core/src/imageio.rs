//! Binary PPM (`P6`, maxval 255) reading and writing.

/// 8-bit interleaved RGB raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

/// PPM parse failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PpmError {
    #[error("bad magic: expected \"P6\"")]
    BadMagic,
    #[error("malformed header: {0}")]
    MalformedHeader(&'static str),
    #[error("unsupported maxval {0}, only 255 is accepted")]
    UnsupportedMaxval(u64),
    #[error("zero image dimension ({width}x{height})")]
    ZeroDimension { width: usize, height: usize },
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("dimensions {width}x{height} too large")]
    TooLarge { width: u64, height: u64 },
}

impl RgbImage {
    /// Creates an image from interleaved RGB bytes.
    ///
    /// Returns `None` when a dimension is zero or `data.len() != 3 * width * height`.
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Option<Self> {
        if width == 0 || height == 0 || data.len() != width.checked_mul(height)?.checked_mul(3)? {
            return None;
        }
        Some(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be non-zero");
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data.chunks_exact(3).map(|p| [p[0], p[1], p[2]])
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    /// Skips whitespace and `#` comments (which run to the end of the line).
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u64, PpmError> {
        self.skip_separators();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PpmError::MalformedHeader(what));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PpmError::MalformedHeader(what))
    }
}

/// Parses a binary PPM.
///
/// Bytes after the pixel payload are ignored.
pub fn read_ppm(bytes: &[u8]) -> Result<RgbImage, PpmError> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(PpmError::BadMagic);
    }
    let mut cur = HeaderCursor { bytes, pos: 2 };
    if !cur
        .bytes
        .get(cur.pos)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(PpmError::BadMagic);
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PpmError::ZeroDimension {
            width: width as usize,
            height: height as usize,
        });
    }
    if maxval != 255 {
        return Err(PpmError::UnsupportedMaxval(maxval));
    }
    // exactly one whitespace byte separates maxval from the payload
    match cur.bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(PpmError::MalformedHeader("missing separator after maxval")),
    }
    let expected = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(3))
        .and_then(|n| usize::try_from(n).ok())
        .ok_or(PpmError::TooLarge { width, height })?;
    let payload = &bytes[cur.pos..];
    if payload.len() < expected {
        return Err(PpmError::TruncatedPayload {
            expected,
            found: payload.len(),
        });
    }
    Ok(RgbImage {
        width: width as usize,
        height: height as usize,
        data: payload[..expected].to_vec(),
    })
}

/// Serializes to the canonical form `P6\n<w> <h>\n255\n` followed by the payload.
pub fn write_ppm(img: &RgbImage) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.data.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.data);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_pixel() {
        let mut bytes = b"P6 1 1 255\n".to_vec();
        bytes.extend_from_slice(&[10, 20, 30]);
        let img = read_ppm(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (1, 1));
        assert_eq!(img.pixel(0, 0), [10, 20, 30]);
    }

    #[test]
    fn comment_in_header() {
        let mut bytes = b"P6\n# comment\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        let img = read_ppm(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (2, 1));
        assert_eq!(img.pixel(1, 0), [4, 5, 6]);
    }

    #[test]
    fn comment_between_every_field() {
        let mut bytes = b"P6#a\n1#b\n#c\n1 #d\n255\n".to_vec();
        bytes.extend_from_slice(&[7, 8, 9]);
        assert_eq!(read_ppm(&bytes).unwrap().pixel(0, 0), [7, 8, 9]);
    }

    #[test]
    fn errors_are_distinct() {
        assert_eq!(read_ppm(b"P5 1 1 255\n\0"), Err(PpmError::BadMagic));
        assert_eq!(
            read_ppm(b"P6 1 1 65535\n\0\0\0\0\0\0"),
            Err(PpmError::UnsupportedMaxval(65535))
        );
        assert_eq!(
            read_ppm(b"P6 2 1 255\n\0\0\0"),
            Err(PpmError::TruncatedPayload {
                expected: 6,
                found: 3
            })
        );
        assert!(matches!(
            read_ppm(b"P6 0 4 255\n"),
            Err(PpmError::ZeroDimension { .. })
        ));
        assert!(matches!(
            read_ppm(b"P6 x 4 255\n"),
            Err(PpmError::MalformedHeader(_))
        ));
    }

    #[test]
    fn trailing_bytes_ignored() {
        let mut bytes = b"P6 1 1 255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3, 99, 99]);
        assert_eq!(read_ppm(&bytes).unwrap().data(), &[1, 2, 3]);
    }

    #[test]
    fn canonical_black_pixel() {
        let img = RgbImage::new(1, 1, vec![0, 0, 0]).unwrap();
        assert_eq!(write_ppm(&img), b"P6\n1 1\n255\n\0\0\0".to_vec());
    }

    #[test]
    fn two_by_two_layout() {
        let img = RgbImage::from_fn(2, 2, |x, y| [x as u8, y as u8, (10 * y + x) as u8]);
        let bytes = write_ppm(&img);
        let payload = &bytes[b"P6\n2 2\n255\n".len()..];
        assert_eq!(payload, &[0, 0, 0, 1, 0, 1, 0, 1, 10, 1, 1, 11]);
    }

    proptest! {
        #[test]
        fn roundtrip(w in 1usize..20, h in 1usize..20, seed in any::<u64>()) {
            let mut s = seed;
            let img = RgbImage::from_fn(w, h, |_, _| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = s.to_le_bytes();
                [b[5], b[6], b[7]]
            });
            let bytes = write_ppm(&img);
            prop_assert_eq!(&read_ppm(&bytes).unwrap(), &img);
            prop_assert_eq!(bytes, write_ppm(&img.clone()));
        }
    }
}
