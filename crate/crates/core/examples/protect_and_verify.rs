// Embed the cipher matrix into a red bit plane and check it again.

use pixelseal::fixtures::natural_scene;
use pixelseal::{protect, verify, BitPlane, CameraId};

pub struct RoundTrip {
    pub plane: BitPlane,
    pub changed_red_samples: usize,
    pub clean: bool,
    pub wrong_key_fraction: f64,
}

pub fn run_example(width: usize, height: usize) -> pixelseal::Result<Vec<RoundTrip>> {
    let original = natural_scene(width, height, 2024);
    let id = CameraId::from_text("MCC-F220/cam-01")?;
    let other = CameraId::from_text("MCC-F220/cam-02")?;

    [BitPlane::LSB, BitPlane::FOURTH, BitPlane::MSB]
        .into_iter()
        .map(|plane| {
            let protected = protect(&original, &id, plane)?;
            let changed_red_samples = original
                .red()
                .as_slice()
                .iter()
                .zip(protected.planes.red().as_slice())
                .filter(|(a, b)| a != b)
                .count();
            Ok(RoundTrip {
                plane,
                changed_red_samples,
                clean: verify(&protected.planes, &id, plane)?.is_clean(),
                wrong_key_fraction: verify(&protected.planes, &other, plane)?.tampered_fraction(),
            })
        })
        .collect()
}

fn main() -> pixelseal::Result<()> {
    let (w, h) = (320, 240);
    println!("{w}x{h} scene, {} red samples", w * h);
    for r in run_example(w, h)? {
        println!(
            "plane {:<6} changed {:>6}  verifies clean: {:<5}  wrong camera flags {:.1}% of blocks",
            r.plane.to_string(),
            r.changed_red_samples,
            r.clean,
            100.0 * r.wrong_key_fraction
        );
    }
    Ok(())
}
