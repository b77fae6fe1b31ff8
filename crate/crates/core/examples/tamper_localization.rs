// Run each attack against a protected image, list flagged 4x4 blocks and
// write a highlighted tamper map.
//
// ```text
// cargo run --example tamper_localization -- map.png
// ```

use std::path::Path;

use pixelseal::attacks::{copy_move, one_pixel, recompress, splice};
use pixelseal::fixtures::natural_scene;
use pixelseal::{
    protect, render_tamper_map, store_image, verify, BitPlane, CameraId, Channel, ImagePlanes, Rect,
};

pub struct Finding {
    pub attack: &'static str,
    pub blocks: Vec<(usize, usize)>,
    pub fraction: f64,
}

pub fn run_example(map_path: Option<&Path>) -> pixelseal::Result<Vec<Finding>> {
    let id = CameraId::from_text("MCC-F220/cam-01")?;
    let plane = BitPlane::LSB;
    let scene = natural_scene(128, 96, 5);
    let protected = protect(&scene, &id, plane)?.planes;
    let donor = natural_scene(128, 96, 6);

    let attacks: Vec<(&'static str, ImagePlanes)> = vec![
        ("untouched", protected.clone()),
        ("one_pixel", one_pixel(&protected, Some(37), Some(22), Some(Channel::Green), 1)?),
        ("copy_move", copy_move(&protected, Rect::new(5, 3, 8, 8), 90, 60)?),
        ("copy_move_aligned", copy_move(&protected, Rect::new(4, 4, 8, 8), 40, 40)?),
        ("splice", splice(&protected, &donor, Rect::new(60, 10, 12, 6))?),
        ("recompress_q95", recompress(&protected, 95)?),
    ];

    let mut findings = Vec::new();
    for (attack, image) in &attacks {
        let report = verify(image, &id, plane)?;
        if *attack == "splice" {
            if let Some(path) = map_path {
                store_image(&render_tamper_map(&report, image)?, path)?;
            }
        }
        findings.push(Finding {
            attack,
            blocks: report.tampered_blocks().map(|(bx, by, _)| (bx, by)).collect(),
            fraction: report.tampered_fraction(),
        });
    }
    Ok(findings)
}

fn main() -> pixelseal::Result<()> {
    let map = std::env::args().nth(1).unwrap_or_else(|| "tamper_map.png".into());
    for f in run_example(Some(Path::new(&map)))? {
        let shown: Vec<String> = f.blocks.iter().take(6).map(|(x, y)| format!("({x},{y})")).collect();
        let more = if f.blocks.len() > 6 { " ..." } else { "" };
        println!(
            "{:<18} {:>5} blocks ({:>5.1}%)  {}{more}",
            f.attack,
            f.blocks.len(),
            100.0 * f.fraction,
            shown.join(" ")
        );
    }
    println!("splice tamper map written to {map}");
    Ok(())
}
