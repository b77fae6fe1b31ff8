// MAE, MSE, PSNR, SSIM and UIQI of protected images against the original,
// next to the values expected for a uniformly random replaced bit. The
// metrics pool all three channels, so the expected red-plane change is
// spread over three samples.

use pixelseal::fixtures::natural_scene;
use pixelseal::{protect, quality_report, BitPlane, CameraId, QualityReport};

pub fn run_example(width: usize, height: usize) -> pixelseal::Result<Vec<(BitPlane, QualityReport)>> {
    let original = natural_scene(width, height, 7);
    let id = CameraId::from_text("MCC-F220/cam-01")?;
    BitPlane::all()
        .map(|plane| {
            let protected = protect(&original, &id, plane)?;
            Ok((plane, quality_report(&original, &protected.planes)?))
        })
        .collect()
}

fn main() -> pixelseal::Result<()> {
    println!("plane   MAE      (exp)    MSE        (exp)       PSNR dB  SSIM     UIQI");
    for (plane, q) in run_example(800, 532)? {
        println!(
            "{:<7} {:<8.4} {:<8.4} {:<10.4} {:<11.4} {:<8.3} {:<8.5} {:.5}",
            plane.index(),
            q.mae,
            plane.expected_abs_error_per_pixel() / 3.0,
            q.mse,
            plane.expected_sq_error_per_pixel() / 3.0,
            q.psnr_db,
            q.ssim,
            q.uiqi
        );
    }
    Ok(())
}
