//! RGB rasters held as three separate 8-bit planes, and the lossless
//! file boundary.
//!
//! Everything is row-major with 0-based indices: pixel `(x, y)` lives at
//! `y * width + x` in every plane.

use std::path::Path;

use image::{DynamicImage, ExtendedColorType, ImageFormat, ImageReader, RgbImage};

use crate::error::{Error, Result};

/// A `width` x `height` grid of bytes in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ByteGrid {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ByteGrid {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::PlaneLength {
                len: data.len(),
                width,
                height,
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
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
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.data
    }

    pub(crate) fn ensure_same_dims(&self, other: &ByteGrid) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                actual: other.dims(),
            });
        }
        Ok(())
    }
}

/// Which plane of an [`ImagePlanes`] to address.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Red,
    Green,
    Blue,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Red, Channel::Green, Channel::Blue];
}

impl std::str::FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "red" | "r" => Ok(Channel::Red),
            "green" | "g" => Ok(Channel::Green),
            "blue" | "b" => Ok(Channel::Blue),
            other => Err(format!("unknown channel `{other}`")),
        }
    }
}

/// An RGB image as three equally sized 8-bit planes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ImagePlanes {
    red: ByteGrid,
    green: ByteGrid,
    blue: ByteGrid,
}

impl ImagePlanes {
    /// Builds an image from three plane grids. All must share one non-empty size.
    pub fn from_grids(red: ByteGrid, green: ByteGrid, blue: ByteGrid) -> Result<Self> {
        let (width, height) = red.dims();
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        red.ensure_same_dims(&green)?;
        red.ensure_same_dims(&blue)?;
        Ok(Self { red, green, blue })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Result<Self> {
        let n = width * height;
        let (mut r, mut g, mut b) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for y in 0..height {
            for x in 0..width {
                let [pr, pg, pb] = f(x, y);
                r.push(pr);
                g.push(pg);
                b.push(pb);
            }
        }
        merge_planes(r, g, b, width, height)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.red.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.red.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        self.red.dims()
    }

    pub fn red(&self) -> &ByteGrid {
        &self.red
    }

    pub fn green(&self) -> &ByteGrid {
        &self.green
    }

    pub fn blue(&self) -> &ByteGrid {
        &self.blue
    }

    pub fn plane(&self, channel: Channel) -> &ByteGrid {
        match channel {
            Channel::Red => &self.red,
            Channel::Green => &self.green,
            Channel::Blue => &self.blue,
        }
    }

    pub fn plane_mut(&mut self, channel: Channel) -> &mut ByteGrid {
        match channel {
            Channel::Red => &mut self.red,
            Channel::Green => &mut self.green,
            Channel::Blue => &mut self.blue,
        }
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        [self.red.get(x, y), self.green.get(x, y), self.blue.get(x, y)]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, [r, g, b]: [u8; 3]) {
        self.red.set(x, y, r);
        self.green.set(x, y, g);
        self.blue.set(x, y, b);
    }

    /// Replaces the red plane, keeping green and blue.
    pub fn with_red(&self, red: ByteGrid) -> Result<Self> {
        Self::from_grids(red, self.green.clone(), self.blue.clone())
    }

    pub fn into_grids(self) -> (ByteGrid, ByteGrid, ByteGrid) {
        (self.red, self.green, self.blue)
    }

    /// Interleaves the planes back into an RGB raster.
    pub fn to_rgb_image(&self) -> RgbImage {
        let (w, h) = self.dims();
        let mut buf = Vec::with_capacity(w * h * 3);
        for i in 0..w * h {
            buf.extend_from_slice(&[self.red.data[i], self.green.data[i], self.blue.data[i]]);
        }
        RgbImage::from_raw(w as u32, h as u32, buf).expect("buffer sized from dims")
    }
}

/// Separates an 8-bit RGB raster into its three planes.
pub fn split_planes(raster: &DynamicImage) -> Result<ImagePlanes> {
    let rgb = match raster {
        DynamicImage::ImageRgb8(rgb) => rgb,
        DynamicImage::ImageRgb16(_)
        | DynamicImage::ImageRgba16(_)
        | DynamicImage::ImageLuma16(_)
        | DynamicImage::ImageLumaA16(_)
        | DynamicImage::ImageRgb32F(_)
        | DynamicImage::ImageRgba32F(_) => {
            return Err(Error::UnsupportedBitDepth(format!("{:?}", raster.color())))
        }
        other => return Err(Error::UnsupportedFormat(format!("{:?}", other.color()))),
    };
    split_rgb(rgb)
}

pub(crate) fn split_rgb(rgb: &RgbImage) -> Result<ImagePlanes> {
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let mut r = Vec::with_capacity(w * h);
    let mut g = Vec::with_capacity(w * h);
    let mut b = Vec::with_capacity(w * h);
    for px in rgb.as_raw().chunks_exact(3) {
        r.push(px[0]);
        g.push(px[1]);
        b.push(px[2]);
    }
    merge_planes(r, g, b, w, h)
}

/// Recombines three row-major planes into an image.
pub fn merge_planes(
    red: Vec<u8>,
    green: Vec<u8>,
    blue: Vec<u8>,
    width: usize,
    height: usize,
) -> Result<ImagePlanes> {
    ImagePlanes::from_grids(
        ByteGrid::new(width, height, red)?,
        ByteGrid::new(width, height, green)?,
        ByteGrid::new(width, height, blue)?,
    )
}

/// Reads a PNG, BMP or JPEG file. An alpha channel is dropped with a warning.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImagePlanes> {
    let path = path.as_ref();
    let decoded = ImageReader::open(path)?
        .with_guessed_format()?
        .decode()
        .map_err(|source| match source {
            image::ImageError::IoError(e) => Error::Io(e),
            source => Error::Decode {
                path: path.to_path_buf(),
                source,
            },
        })?;
    match decoded {
        DynamicImage::ImageRgba8(rgba) => {
            log::warn!("{}: discarding alpha channel", path.display());
            split_rgb(&DynamicImage::ImageRgba8(rgba).to_rgb8())
        }
        other => split_planes(&other),
    }
}

/// Writes `planes` as an 8-bit RGB PNG. Any other extension is refused.
pub fn store_image(planes: &ImagePlanes, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if !has_png_extension(path) {
        return Err(Error::LossyOutput(path.to_path_buf()));
    }
    let (w, h) = planes.dims();
    image::save_buffer_with_format(
        path,
        planes.to_rgb_image().as_raw(),
        w as u32,
        h as u32,
        ExtendedColorType::Rgb8,
        ImageFormat::Png,
    )
    .map_err(|e| match e {
        image::ImageError::IoError(io) => Error::Io(io),
        other => Error::Encode(other),
    })
}

pub fn has_png_extension(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"))
}
