//! Fragile watermarking for RGB images.
//!
//! A camera ID is hashed into a 160-bit identifier whose 16-byte prefix keys
//! AES-128. The green and blue planes are XORed and encrypted in independent
//! 4x4 tiles; one bit plane of that cipher matrix replaces the same bit plane
//! of the red channel. Verification recomputes the cipher matrix from the
//! received green and blue planes and reports every 4x4 block whose red bits
//! disagree.
//!
//! ```
//! use pixelseal::{fixtures, protect, verify, BitPlane, CameraId};
//!
//! let image = fixtures::natural_scene(64, 48, 7);
//! let id = CameraId::from_text("camera-0042")?;
//! let sealed = protect(&image, &id, BitPlane::LSB)?;
//! assert!(verify(&sealed.planes, &id, BitPlane::LSB)?.is_clean());
//! # Ok::<(), pixelseal::Error>(())
//! ```
//!
//! The `examples/` directory has one runnable program per capability, and
//! the `pixelseal` binary exposes protect, verify, metrics, attack and bench
//! subcommands.

pub mod attacks;
pub mod blockcipher;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod fixtures;
pub mod keying;
pub mod metrics;
pub mod protection;
pub mod raster;

pub use attacks::{apply_attack, Attack, AttackSpec, Rect};
pub use blockcipher::{encrypt_grid, xor_planes, BlockGrid};
pub use embedding::{embed_plane, extract_plane, BitPlane};
pub use error::{Error, Result};
pub use keying::{derive_key, derive_soi, CameraId, CipherKey, Soi};
pub use metrics::{quality_report, QualityReport};
pub use protection::{protect, render_tamper_map, verify, ProtectedImage, TamperReport};
pub use raster::{load_image, merge_planes, split_planes, store_image, ByteGrid, Channel, ImagePlanes};
