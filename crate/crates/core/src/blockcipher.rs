//! The Cipher Matrix: AES-128 over the green XOR blue matrix, one
//! independent 16-byte block per 4x4 pixel tile.
//!
//! Tiles are encrypted without chaining so that a change inside one tile
//! alters only that tile's ciphertext. Images whose sides are not multiples
//! of four are zero padded on the right and bottom before encryption; the
//! padding never leaves this module.

use aes::cipher::generic_array::GenericArray;
use aes::cipher::{BlockDecrypt, BlockEncrypt, KeyInit};
use aes::Aes128;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::keying::CipherKey;
use crate::raster::ByteGrid;

/// Side length of a tile in pixels.
pub const BLOCK_SIDE: usize = 4;
/// Bytes per tile, and the AES block size.
pub const BLOCK_BYTES: usize = BLOCK_SIDE * BLOCK_SIDE;

pub type Block = [u8; BLOCK_BYTES];

/// Tiling of a `width` x `height` raster into 4x4 blocks, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockGrid {
    pub width: usize,
    pub height: usize,
    pub blocks_x: usize,
    pub blocks_y: usize,
}

impl BlockGrid {
    pub fn for_dims(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            blocks_x: width.div_ceil(BLOCK_SIDE),
            blocks_y: height.div_ceil(BLOCK_SIDE),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks_x * self.blocks_y
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Block coordinates `(bx, by)` containing pixel `(x, y)`.
    pub fn block_of(&self, x: usize, y: usize) -> (usize, usize) {
        (x / BLOCK_SIDE, y / BLOCK_SIDE)
    }

    pub fn index(&self, bx: usize, by: usize) -> usize {
        by * self.blocks_x + bx
    }

    /// In-bounds pixel rectangle `(x0, y0, x1, y1)` of a block, half-open.
    pub fn pixel_rect(&self, bx: usize, by: usize) -> (usize, usize, usize, usize) {
        let x0 = bx * BLOCK_SIDE;
        let y0 = by * BLOCK_SIDE;
        (
            x0,
            y0,
            (x0 + BLOCK_SIDE).min(self.width),
            (y0 + BLOCK_SIDE).min(self.height),
        )
    }

    /// Number of real (non-padding) pixels in a block.
    pub fn pixels_in(&self, bx: usize, by: usize) -> usize {
        let (x0, y0, x1, y1) = self.pixel_rect(bx, by);
        (x1 - x0) * (y1 - y0)
    }
}

/// Element-wise XOR of two equally sized grids.
pub fn xor_planes(green: &ByteGrid, blue: &ByteGrid) -> Result<ByteGrid> {
    green.ensure_same_dims(blue)?;
    let data = green
        .as_slice()
        .iter()
        .zip(blue.as_slice())
        .map(|(g, b)| g ^ b)
        .collect();
    ByteGrid::new(green.width(), green.height(), data)
}

/// A keyed AES-128 instance. Key expansion happens once.
#[derive(Clone)]
pub struct TileCipher {
    aes: Aes128,
}

impl TileCipher {
    pub fn new(key: &CipherKey) -> Self {
        Self {
            aes: Aes128::new(GenericArray::from_slice(key.as_bytes())),
        }
    }

    pub fn encrypt_block(&self, block: &Block) -> Block {
        let mut buf = GenericArray::clone_from_slice(block);
        self.aes.encrypt_block(&mut buf);
        buf.into()
    }

    pub fn decrypt_block(&self, block: &Block) -> Block {
        let mut buf = GenericArray::clone_from_slice(block);
        self.aes.decrypt_block(&mut buf);
        buf.into()
    }
}

impl std::fmt::Debug for TileCipher {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("TileCipher(..)")
    }
}

/// Encrypts one 16-byte block under `key`. Slices of any other length are rejected.
pub fn aes_encrypt_block(key: &[u8], block: &[u8]) -> Result<Block> {
    let (key, block) = fixed_lengths(key, block)?;
    Ok(TileCipher::new(&key).encrypt_block(&block))
}

pub fn aes_decrypt_block(key: &[u8], block: &[u8]) -> Result<Block> {
    let (key, block) = fixed_lengths(key, block)?;
    Ok(TileCipher::new(&key).decrypt_block(&block))
}

fn fixed_lengths(key: &[u8], block: &[u8]) -> Result<(CipherKey, Block)> {
    let key: [u8; 16] = key
        .try_into()
        .map_err(|_| Error::InvalidInput(format!("AES-128 key must be 16 bytes, got {}", key.len())))?;
    let block: Block = block
        .try_into()
        .map_err(|_| Error::InvalidInput(format!("AES block must be 16 bytes, got {}", block.len())))?;
    Ok((CipherKey::from_bytes(key), block))
}

/// Produces the Cipher Matrix for `grid`: each 4x4 tile, read row-major and
/// zero padded past the edges, is replaced by its AES-128 encryption. The
/// result has the same dimensions as `grid`.
pub fn encrypt_grid(grid: &ByteGrid, key: &CipherKey) -> Result<ByteGrid> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let cipher = TileCipher::new(key);
    let (width, height) = grid.dims();
    let tiles = BlockGrid::for_dims(width, height);
    let src = grid.as_slice();
    let mut out = vec![0u8; width * height];

    out.par_chunks_mut(width * BLOCK_SIDE)
        .enumerate()
        .for_each(|(by, rows)| {
            let y0 = by * BLOCK_SIDE;
            let rows_here = rows.len() / width;
            for bx in 0..tiles.blocks_x {
                let x0 = bx * BLOCK_SIDE;
                let cols_here = (width - x0).min(BLOCK_SIDE);
                let mut block = [0u8; BLOCK_BYTES];
                for i in 0..rows_here {
                    let row = &src[(y0 + i) * width + x0..][..cols_here];
                    block[i * BLOCK_SIDE..][..cols_here].copy_from_slice(row);
                }
                let enc = cipher.encrypt_block(&block);
                for i in 0..rows_here {
                    rows[i * width + x0..][..cols_here]
                        .copy_from_slice(&enc[i * BLOCK_SIDE..][..cols_here]);
                }
            }
        });

    ByteGrid::new(width, height, out)
}
