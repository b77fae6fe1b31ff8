//! Camera identity to cipher key.
//!
//! A camera ID is hashed to a 160-bit Secret Originality Identifier (SOI);
//! the first 16 bytes of the SOI key AES-128.

use std::fmt;

use sha1::{Digest, Sha1};

use crate::error::{Error, Result};

/// Non-empty camera identifier bytes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CameraId(Vec<u8>);

impl CameraId {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(Error::EmptyCameraId);
        }
        Ok(Self(bytes))
    }

    /// UTF-8 bytes of `text`.
    pub fn from_text(text: &str) -> Result<Self> {
        Self::new(text.as_bytes())
    }

    pub fn from_hex(hex_str: &str) -> Result<Self> {
        Self::new(hex::decode(hex_str.trim())?)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

// Camera IDs are secrets; keep them out of logs.
impl fmt::Debug for CameraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CameraId({} bytes)", self.0.len())
    }
}

/// A 160-bit digest function used to derive the SOI.
pub trait OriginalityDigest {
    fn digest160(data: &[u8]) -> [u8; SOI_LEN];
}

/// SHA-1, the default SOI digest.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sha1Digest;

impl OriginalityDigest for Sha1Digest {
    fn digest160(data: &[u8]) -> [u8; SOI_LEN] {
        Sha1::digest(data).into()
    }
}

pub const SOI_LEN: usize = 20;
pub const KEY_LEN: usize = 16;

/// Secret Originality Identifier: the 160-bit digest of a camera ID.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Soi([u8; SOI_LEN]);

impl Soi {
    pub fn from_bytes(bytes: [u8; SOI_LEN]) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; SOI_LEN] {
        &self.0
    }

    /// First four bytes, hex encoded. Identifies which ID was used without
    /// being enough to verify anything.
    pub fn fingerprint(&self) -> String {
        hex::encode(&self.0[..4])
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for Soi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Soi({}..)", self.fingerprint())
    }
}

/// AES-128 key taken from the SOI prefix.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CipherKey([u8; KEY_LEN]);

impl CipherKey {
    pub fn from_bytes(bytes: [u8; KEY_LEN]) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; KEY_LEN] {
        &self.0
    }
}

impl fmt::Debug for CipherKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CipherKey(..)")
    }
}

pub fn derive_soi(id: &CameraId) -> Soi {
    derive_soi_with::<Sha1Digest>(id)
}

pub fn derive_soi_with<D: OriginalityDigest>(id: &CameraId) -> Soi {
    Soi(D::digest160(id.as_bytes()))
}

pub fn derive_key(soi: &Soi) -> CipherKey {
    let mut key = [0u8; KEY_LEN];
    key.copy_from_slice(&soi.0[..KEY_LEN]);
    CipherKey(key)
}

/// Shorthand for `derive_key(&derive_soi(id))`.
pub fn key_for(id: &CameraId) -> CipherKey {
    derive_key(&derive_soi(id))
}
