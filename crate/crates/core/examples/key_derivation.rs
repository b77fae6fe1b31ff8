// Camera identifier -> 160-bit SOI -> 128-bit AES key.
//
// ```text
// cargo run --example key_derivation -- "MCC-F220/cam-01"
// ```

use pixelseal::{derive_key, derive_soi, CameraId};

pub struct Derived {
    pub soi_hex: String,
    pub key_hex: String,
    pub fingerprint: String,
}

pub fn run_example(camera: &str) -> pixelseal::Result<Derived> {
    let id = CameraId::from_text(camera)?;
    let soi = derive_soi(&id);
    let key = derive_key(&soi);
    Ok(Derived {
        soi_hex: soi.to_hex(),
        key_hex: hex::encode(key.as_bytes()),
        fingerprint: soi.fingerprint(),
    })
}

fn main() -> pixelseal::Result<()> {
    let camera = std::env::args().nth(1).unwrap_or_else(|| "MCC-F220/cam-01".into());
    let d = run_example(&camera)?;
    println!("camera       {camera}");
    println!("soi          {}", d.soi_hex);
    println!("aes-128 key  {}", d.key_hex);
    println!("fingerprint  {}", d.fingerprint);
    Ok(())
}
