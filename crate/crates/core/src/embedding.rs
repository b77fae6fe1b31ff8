//! Single bit-plane substitution into the red plane.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::raster::ByteGrid;

/// Bit position 0..=7 that carries the watermark; 0 is least significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitPlane(u8);

impl BitPlane {
    pub const LSB: BitPlane = BitPlane(0);
    /// The "fourth bit" preset, bit index 3.
    pub const FOURTH: BitPlane = BitPlane(3);
    pub const MSB: BitPlane = BitPlane(7);

    /// Planes used by the default quality benchmark.
    pub const TABLE_PLANES: [BitPlane; 3] = [BitPlane(0), BitPlane(1), BitPlane(2)];

    pub fn new(index: u8) -> Result<Self> {
        if index > 7 {
            return Err(Error::InvalidPlane(index));
        }
        Ok(Self(index))
    }

    pub fn all() -> impl Iterator<Item = BitPlane> {
        (0..8).map(BitPlane)
    }

    #[inline]
    pub fn index(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn mask(self) -> u8 {
        1 << self.0
    }

    /// Mean squared change per embedded pixel when cipher bits are uniform: 4^p / 2.
    pub fn expected_sq_error_per_pixel(self) -> f64 {
        f64::from(1u32 << (2 * self.0)) / 2.0
    }

    /// Mean absolute change per embedded pixel when cipher bits are uniform: 2^p / 2.
    pub fn expected_abs_error_per_pixel(self) -> f64 {
        f64::from(1u32 << self.0) / 2.0
    }
}

impl fmt::Display for BitPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for BitPlane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lsb" => Ok(Self::LSB),
            "fourth" | "4sb" | "#4" => Ok(Self::FOURTH),
            "msb" => Ok(Self::MSB),
            other => other
                .parse::<u8>()
                .map_err(|_| Error::UnknownPlane(s.to_string()))
                .and_then(BitPlane::new),
        }
    }
}

/// Copies bit `plane` of each cipher byte into the matching red byte.
/// Every other red bit is left as is.
pub fn embed_plane(red: &ByteGrid, cipher: &ByteGrid, plane: BitPlane) -> Result<ByteGrid> {
    red.ensure_same_dims(cipher)?;
    let mask = plane.mask();
    let data = red
        .as_slice()
        .iter()
        .zip(cipher.as_slice())
        .map(|(&r, &c)| (r & !mask) | (c & mask))
        .collect();
    ByteGrid::new(red.width(), red.height(), data)
}

/// Bit `plane` of each byte, as 0 or 1.
pub fn extract_plane(grid: &ByteGrid, plane: BitPlane) -> ByteGrid {
    let data = grid
        .as_slice()
        .iter()
        .map(|&v| (v >> plane.index()) & 1)
        .collect();
    ByteGrid::new(grid.width(), grid.height(), data).expect("same length as source")
}
