//! Protect and verify.
//!
//! Protection: `red' = embed(red, AES_k(green ^ blue), p)` with green and blue
//! passed through untouched. Verification recomputes the cipher matrix from
//! the received green and blue planes and compares bit `p` of it against bit
//! `p` of the received red plane, tallying mismatches per 4x4 block.
//!
//! Modifying red bits other than `p` goes unnoticed; nothing in the scheme
//! binds them.

use serde::{Deserialize, Serialize};

use crate::blockcipher::{encrypt_grid, xor_planes, BlockGrid, BLOCK_SIDE};
use crate::embedding::{embed_plane, BitPlane};
use crate::error::{Error, Result};
use crate::keying::{derive_key, derive_soi, CameraId, CipherKey, Soi};
use crate::raster::{ByteGrid, ImagePlanes};

/// Output of [`protect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtectedImage {
    pub planes: ImagePlanes,
    pub plane: BitPlane,
    /// First 4 SOI bytes as hex. Not part of the pixel data.
    pub soi_fingerprint: String,
}

fn cipher_matrix(image: &ImagePlanes, key: &CipherKey) -> Result<ByteGrid> {
    encrypt_grid(&xor_planes(image.green(), image.blue())?, key)
}

pub fn protect(image: &ImagePlanes, id: &CameraId, plane: BitPlane) -> Result<ProtectedImage> {
    let soi = derive_soi(id);
    let planes = protect_with_key(image, &derive_key(&soi), plane)?;
    Ok(ProtectedImage {
        planes,
        plane,
        soi_fingerprint: soi.fingerprint(),
    })
}

/// [`protect`] for callers that already hold the key.
pub fn protect_with_key(
    image: &ImagePlanes,
    key: &CipherKey,
    plane: BitPlane,
) -> Result<ImagePlanes> {
    let cipher = cipher_matrix(image, key)?;
    image.with_red(embed_plane(image.red(), &cipher, plane)?)
}

pub fn verify(image: &ImagePlanes, id: &CameraId, plane: BitPlane) -> Result<TamperReport> {
    let soi = derive_soi(id);
    verify_with_soi(image, &soi, plane)
}

pub fn verify_with_soi(image: &ImagePlanes, soi: &Soi, plane: BitPlane) -> Result<TamperReport> {
    let cipher = cipher_matrix(image, &derive_key(soi))?;
    let (width, height) = image.dims();
    let tiles = BlockGrid::for_dims(width, height);
    let mask = plane.mask();
    let red = image.red().as_slice();
    let cm = cipher.as_slice();

    let mut mismatches = vec![0u8; tiles.len()];
    for y in 0..height {
        let row_blocks = &mut mismatches[(y / BLOCK_SIDE) * tiles.blocks_x..][..tiles.blocks_x];
        let row = y * width;
        for x in 0..width {
            if (red[row + x] ^ cm[row + x]) & mask != 0 {
                row_blocks[x / BLOCK_SIDE] += 1;
            }
        }
    }

    Ok(TamperReport {
        width,
        height,
        plane,
        blocks_x: tiles.blocks_x,
        blocks_y: tiles.blocks_y,
        mismatches,
        soi_fingerprint: soi.fingerprint(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockVerdict {
    Clean,
    Tampered,
}

/// Per-block verification outcome. A block is tampered when at least one of
/// its in-bounds pixels disagrees with the recomputed cipher bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TamperReport {
    pub width: usize,
    pub height: usize,
    pub plane: BitPlane,
    pub blocks_x: usize,
    pub blocks_y: usize,
    /// Row-major mismatch count per block, 0..=16.
    pub mismatches: Vec<u8>,
    pub soi_fingerprint: String,
}

impl TamperReport {
    pub fn block_grid(&self) -> BlockGrid {
        BlockGrid::for_dims(self.width, self.height)
    }

    pub fn mismatches_at(&self, bx: usize, by: usize) -> u8 {
        self.mismatches[by * self.blocks_x + bx]
    }

    pub fn verdict(&self, bx: usize, by: usize) -> BlockVerdict {
        if self.mismatches_at(bx, by) > 0 {
            BlockVerdict::Tampered
        } else {
            BlockVerdict::Clean
        }
    }

    /// `(bx, by, mismatches)` for every tampered block, row-major.
    pub fn tampered_blocks(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        self.mismatches
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i % self.blocks_x, i / self.blocks_x, m))
    }

    pub fn total_tampered(&self) -> usize {
        self.mismatches.iter().filter(|&&m| m > 0).count()
    }

    pub fn tampered_fraction(&self) -> f64 {
        if self.mismatches.is_empty() {
            return 0.0;
        }
        self.total_tampered() as f64 / self.mismatches.len() as f64
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches.iter().all(|&m| m == 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ReportWire::from(self)).expect("report serializes")
    }

    pub fn to_json_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&ReportWire::from(self)).expect("report serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let wire: ReportWire =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        wire.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct TamperedBlock {
    bx: usize,
    by: usize,
    mismatches: u8,
}

#[derive(Serialize, Deserialize)]
struct ReportWire {
    width: usize,
    height: usize,
    plane: u8,
    block_size: usize,
    blocks_x: usize,
    blocks_y: usize,
    tampered_blocks: Vec<TamperedBlock>,
    total_tampered: usize,
    tampered_fraction: f64,
    soi_fingerprint: String,
}

impl From<&TamperReport> for ReportWire {
    fn from(r: &TamperReport) -> Self {
        Self {
            width: r.width,
            height: r.height,
            plane: r.plane.index(),
            block_size: BLOCK_SIDE,
            blocks_x: r.blocks_x,
            blocks_y: r.blocks_y,
            tampered_blocks: r
                .tampered_blocks()
                .map(|(bx, by, mismatches)| TamperedBlock { bx, by, mismatches })
                .collect(),
            total_tampered: r.total_tampered(),
            tampered_fraction: r.tampered_fraction(),
            soi_fingerprint: r.soi_fingerprint.clone(),
        }
    }
}

impl TryFrom<ReportWire> for TamperReport {
    type Error = Error;

    fn try_from(w: ReportWire) -> Result<Self> {
        let tiles = BlockGrid::for_dims(w.width, w.height);
        if w.block_size != BLOCK_SIDE || (tiles.blocks_x, tiles.blocks_y) != (w.blocks_x, w.blocks_y)
        {
            return Err(Error::InvalidInput("inconsistent block grid".into()));
        }
        let mut mismatches = vec![0u8; tiles.len()];
        for b in &w.tampered_blocks {
            if b.bx >= w.blocks_x || b.by >= w.blocks_y {
                return Err(Error::InvalidInput(format!("block ({}, {}) out of range", b.bx, b.by)));
            }
            mismatches[tiles.index(b.bx, b.by)] = b.mismatches;
        }
        Ok(Self {
            width: w.width,
            height: w.height,
            plane: BitPlane::new(w.plane)?,
            blocks_x: w.blocks_x,
            blocks_y: w.blocks_y,
            mismatches,
            soi_fingerprint: w.soi_fingerprint,
        })
    }
}

/// Overlay colour for tampered blocks.
pub const MARKER: [u8; 3] = [255, 0, 0];

/// Blends every pixel of each tampered block halfway toward [`MARKER`].
pub fn render_tamper_map(report: &TamperReport, base: &ImagePlanes) -> Result<ImagePlanes> {
    if base.dims() != (report.width, report.height) {
        return Err(Error::DimensionMismatch {
            expected: (report.width, report.height),
            actual: base.dims(),
        });
    }
    let tiles = report.block_grid();
    let mut out = base.clone();
    for (bx, by, _) in report.tampered_blocks() {
        let (x0, y0, x1, y1) = tiles.pixel_rect(bx, by);
        for y in y0..y1 {
            for x in x0..x1 {
                out.set_pixel(x, y, overlay(base.pixel(x, y)));
            }
        }
    }
    Ok(out)
}

pub fn overlay(px: [u8; 3]) -> [u8; 3] {
    std::array::from_fn(|c| (u16::from(px[c]) + u16::from(MARKER[c])).div_ceil(2) as u8)
}
