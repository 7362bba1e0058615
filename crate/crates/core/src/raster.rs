//! Pixel buffers, region extraction, grayscale conversion and the 3×3
//! convolution engine every later stage runs on.

use crate::error::{Error, Result};
use crate::geometry::Rect;

/// RGBA raster laid out like the `data` array returned by `getImageData`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelBuffer {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl PixelBuffer {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidBuffer(format!("dimensions {width}x{height} must be positive")));
        }
        if data.len() != width * height * 4 {
            return Err(Error::InvalidBuffer(format!(
                "expected {} RGBA samples for {width}x{height}, got {}",
                width * height * 4,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    /// Buffer filled with a single color.
    pub fn filled(width: usize, height: usize, rgba: [u8; 4]) -> Result<Self> {
        Self::new(width, height, rgba.repeat(width * height))
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 4]) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 4);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 4] {
        let i = (y * self.width + x) * 4;
        [self.data[i], self.data[i + 1], self.data[i + 2], self.data[i + 3]]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, rgba: [u8; 4]) {
        let i = (y * self.width + x) * 4;
        self.data[i..i + 4].copy_from_slice(&rgba);
    }

    /// Copies the region `[x, x+w) × [y, y+h)`. Unlike the browser API the
    /// rectangle must lie inside the buffer.
    pub fn get_image_data(&self, x: i64, y: i64, w: i64, h: i64) -> Result<PixelBuffer> {
        let rect = Rect::new(x, y, w, h);
        if w < 1
            || h < 1
            || x < 0
            || y < 0
            || x + w > self.width as i64
            || y + h > self.height as i64
        {
            return Err(Error::Bounds { rect, width: self.width, height: self.height });
        }
        let (x, y, w, h) = (x as usize, y as usize, w as usize, h as usize);
        let mut data = Vec::with_capacity(w * h * 4);
        for row in y..y + h {
            let start = (row * self.width + x) * 4;
            data.extend_from_slice(&self.data[start..start + w * 4]);
        }
        PixelBuffer::new(w, h, data)
    }

    /// Writes `src` with its top-left corner at `(x, y)`; the inverse of
    /// [`get_image_data`](Self::get_image_data).
    pub fn put_image_data(&mut self, src: &PixelBuffer, x: i64, y: i64) -> Result<()> {
        let rect = Rect::new(x, y, src.width as i64, src.height as i64);
        if x < 0 || y < 0 || x + src.width as i64 > self.width as i64 || y + src.height as i64 > self.height as i64 {
            return Err(Error::Bounds { rect, width: self.width, height: self.height });
        }
        let (x, y) = (x as usize, y as usize);
        for row in 0..src.height {
            let dst = ((y + row) * self.width + x) * 4;
            let s = row * src.width * 4;
            self.data[dst..dst + src.width * 4].copy_from_slice(&src.data[s..s + src.width * 4]);
        }
        Ok(())
    }

    /// Rec. 601 luma; alpha is ignored.
    pub fn to_gray(&self) -> GrayBuffer {
        let data = self
            .data
            .chunks_exact(4)
            .map(|p| 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64)
            .collect();
        GrayBuffer { width: self.width, height: self.height, data }
    }
}

/// Single-channel real-valued raster. Holds intensities as well as signed
/// filter responses.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayBuffer {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayBuffer {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidBuffer(format!("dimensions {width}x{height} must be positive")));
        }
        if data.len() != width * height {
            return Err(Error::InvalidBuffer(format!(
                "expected {} samples for {width}x{height}, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Sample with edge replication for out-of-range coordinates.
    pub fn get_clamped(&self, x: i64, y: i64) -> f64 {
        let cx = x.clamp(0, self.width as i64 - 1) as usize;
        let cy = y.clamp(0, self.height as i64 - 1) as usize;
        self.data[cy * self.width + cx]
    }

    /// 3×3 binomial smoothing.
    pub fn denoise(&self) -> GrayBuffer {
        self.convolve3x3(&Kernel3x3::BINOMIAL)
    }

    /// Applies `kernel` as a correlation (no flip) with edge replication.
    /// Output keeps the input dimensions and may be negative.
    pub fn convolve3x3(&self, kernel: &Kernel3x3) -> GrayBuffer {
        let (w, h) = (self.width as i64, self.height as i64);
        let k = kernel.coefficients();
        let k_sum: f64 = k.iter().sum();
        let mut out = Vec::with_capacity(self.data.len());
        for y in 0..h {
            for x in 0..w {
                // Summing offsets from the center keeps flat neighborhoods
                // exactly zero under zero-sum kernels.
                let center = self.get_clamped(x, y);
                let mut acc = 0.0;
                for ky in 0..3 {
                    for kx in 0..3 {
                        let c = k[ky * 3 + kx];
                        if c != 0.0 {
                            acc += c * (self.get_clamped(x + kx as i64 - 1, y + ky as i64 - 1) - center);
                        }
                    }
                }
                if k_sum != 0.0 {
                    acc += k_sum * center;
                }
                out.push(acc);
            }
        }
        GrayBuffer { width: self.width, height: self.height, data: out }
    }

    /// Foreground where `pred` holds for the sample.
    pub fn threshold(&self, pred: impl Fn(f64) -> bool) -> BinaryMap {
        BinaryMap {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| pred(v)).collect(),
        }
    }
}

/// Row-major 3×3 coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel3x3([f64; 9]);

impl Kernel3x3 {
    /// Discrete Laplacian used for the zero-crossing stage.
    pub const LAPLACIAN: Kernel3x3 = Kernel3x3([1.0, 1.0, 1.0, 1.0, -8.0, 1.0, 1.0, 1.0, 1.0]);
    /// Responds to one-pixel-wide vertical strokes.
    pub const VERTICAL_LINE: Kernel3x3 = Kernel3x3([-1.0, 2.0, -1.0, -1.0, 2.0, -1.0, -1.0, 2.0, -1.0]);
    /// Responds to one-pixel-wide horizontal strokes.
    pub const HORIZONTAL_LINE: Kernel3x3 = Kernel3x3([-1.0, -1.0, -1.0, 2.0, 2.0, 2.0, -1.0, -1.0, -1.0]);
    /// Normalized `[1 2 1; 2 4 2; 1 2 1] / 16`.
    pub const BINOMIAL: Kernel3x3 = Kernel3x3([
        1.0 / 16.0,
        2.0 / 16.0,
        1.0 / 16.0,
        2.0 / 16.0,
        4.0 / 16.0,
        2.0 / 16.0,
        1.0 / 16.0,
        2.0 / 16.0,
        1.0 / 16.0,
    ]);

    pub const fn new(coefficients: [f64; 9]) -> Self {
        Self(coefficients)
    }

    pub fn from_slice(coefficients: &[f64]) -> Result<Self> {
        let arr: [f64; 9] = coefficients
            .try_into()
            .map_err(|_| Error::InvalidBuffer(format!("kernel needs 9 coefficients, got {}", coefficients.len())))?;
        Ok(Self(arr))
    }

    pub fn coefficients(&self) -> &[f64; 9] {
        &self.0
    }
}

/// One boolean per pixel: edge maps and binarized foregrounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMap {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMap {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::InvalidBuffer(format!(
                "expected {} cells for {width}x{height}, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self { width, height, data: vec![false; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    /// Parses rows of `#` (set) and `.` (clear); whitespace separates rows.
    pub fn from_ascii(rows: &str) -> Self {
        let rows: Vec<&str> = rows.split_whitespace().collect();
        let width = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.chars().map(|c| c == '#')).collect();
        Self { width, height: rows.len(), data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1a, b'\n'];

/// Decodes a PNG stream into RGBA. Images without alpha decode as opaque.
///
/// The chunk structure is walked first so that truncation, bad lengths and
/// CRC mismatches report the byte offset of the offending chunk.
pub fn decode_image(bytes: &[u8]) -> Result<PixelBuffer> {
    let fail = |offset: usize, message: String| Error::Decode { offset, message };
    if bytes.is_empty() {
        return Err(fail(0, "empty input".into()));
    }
    if let Some(i) = PNG_SIGNATURE.iter().zip(bytes).position(|(a, b)| a != b) {
        return Err(fail(i, "not a PNG signature".into()));
    }
    if bytes.len() < PNG_SIGNATURE.len() {
        return Err(fail(bytes.len(), "truncated signature".into()));
    }

    let mut offset = PNG_SIGNATURE.len();
    let mut idat_offset = None;
    let mut seen_iend = false;
    while offset < bytes.len() {
        if bytes.len() - offset < 12 {
            return Err(fail(offset, "truncated chunk header".into()));
        }
        let len = u32::from_be_bytes(bytes[offset..offset + 4].try_into().unwrap()) as usize;
        let kind = &bytes[offset + 4..offset + 8];
        let end = offset
            .checked_add(12)
            .and_then(|v| v.checked_add(len))
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| fail(offset, format!("chunk {} truncated", String::from_utf8_lossy(kind))))?;
        let stored = u32::from_be_bytes(bytes[end - 4..end].try_into().unwrap());
        if crc32fast::hash(&bytes[offset + 4..end - 4]) != stored {
            return Err(fail(offset, format!("CRC mismatch in chunk {}", String::from_utf8_lossy(kind))));
        }
        if offset == PNG_SIGNATURE.len() {
            if kind != b"IHDR" || len != 13 {
                return Err(fail(offset, "first chunk must be a 13-byte IHDR".into()));
            }
            let ihdr = &bytes[offset + 8..offset + 8 + 13];
            let (depth, color, interlace) = (ihdr[8], ihdr[9], ihdr[12]);
            if depth != 8 || !(color == 2 || color == 6) {
                return Err(fail(
                    offset,
                    format!("unsupported PNG variant (bit depth {depth}, color type {color}); need 8-bit RGB or RGBA"),
                ));
            }
            if interlace != 0 {
                return Err(fail(offset, "interlaced PNG is not supported".into()));
            }
        }
        if kind == b"IDAT" && idat_offset.is_none() {
            idat_offset = Some(offset);
        }
        offset = end;
        if kind == b"IEND" {
            seen_iend = true;
            break;
        }
    }
    if !seen_iend {
        return Err(fail(offset, "missing IEND chunk".into()));
    }
    let data_offset = idat_offset.ok_or_else(|| fail(offset, "no IDAT chunk".into()))?;

    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = decoder.read_info().map_err(|e| fail(PNG_SIGNATURE.len(), e.to_string()))?;
    let mut raw = vec![0; reader.output_buffer_size().unwrap_or(0)];
    let info = reader.next_frame(&mut raw).map_err(|e| fail(data_offset, e.to_string()))?;
    let (width, height) = (info.width as usize, info.height as usize);
    raw.truncate(info.buffer_size());
    let data = match info.color_type {
        png::ColorType::Rgba => raw,
        png::ColorType::Rgb => raw
            .chunks_exact(3)
            .flat_map(|p| [p[0], p[1], p[2], 255])
            .collect(),
        other => return Err(fail(data_offset, format!("unexpected decoded color type {other:?}"))),
    };
    PixelBuffer::new(width, height, data)
}

/// Encodes an RGBA buffer as PNG. Used for debug output and tests.
pub fn encode_png(buf: &PixelBuffer) -> Vec<u8> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, buf.width as u32, buf.height as u32);
        enc.set_color(png::ColorType::Rgba);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header().expect("in-memory png header");
        writer.write_image_data(&buf.data).expect("in-memory png body");
    }
    out
}
