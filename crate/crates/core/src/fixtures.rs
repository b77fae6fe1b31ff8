//! Seeded synthetic photographs.
//!
//! The scenes mix smooth luminance gradients, a few hard-edged shapes with
//! their own colour, correlated RGB channels and mild sensor-like noise.
//! They stand in for natural images in examples and tests; any real corpus
//! can be used instead via [`crate::raster::load_image`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::raster::ImagePlanes;

struct Wave {
    fx: f64,
    fy: f64,
    phase: f64,
    amp: f64,
}

struct Shape {
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
    ellipse: bool,
    tint: [f64; 3],
}

/// A `width` x `height` scene fully determined by `seed`.
pub fn natural_scene(width: usize, height: usize, seed: u64) -> ImagePlanes {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (wf, hf) = (width as f64, height as f64);

    let waves: Vec<Wave> = (0..4)
        .map(|_| Wave {
            fx: rng.random_range(0.5..4.0) * std::f64::consts::TAU / wf,
            fy: rng.random_range(0.5..4.0) * std::f64::consts::TAU / hf,
            phase: rng.random_range(0.0..std::f64::consts::TAU),
            amp: rng.random_range(10.0..30.0),
        })
        .collect();
    let base: [f64; 3] = std::array::from_fn(|_| rng.random_range(90.0..160.0));
    let slope = (rng.random_range(-40.0..40.0), rng.random_range(-40.0..40.0));
    let shapes: Vec<Shape> = (0..rng.random_range(3..8))
        .map(|_| Shape {
            cx: rng.random_range(0.0..wf),
            cy: rng.random_range(0.0..hf),
            rx: rng.random_range(0.05..0.25) * wf,
            ry: rng.random_range(0.05..0.25) * hf,
            ellipse: rng.random(),
            tint: std::array::from_fn(|_| rng.random_range(-50.0..50.0)),
        })
        .collect();
    let noise_sigma = rng.random_range(2.0..6.0);

    ImagePlanes::from_fn(width, height, |x, y| {
        let (xf, yf) = (x as f64, y as f64);
        let lum: f64 = waves
            .iter()
            .map(|w| w.amp * (w.fx * xf + w.fy * yf + w.phase).sin())
            .sum::<f64>()
            + slope.0 * (xf / wf - 0.5)
            + slope.1 * (yf / hf - 0.5);
        let mut tint = [0.0; 3];
        for s in &shapes {
            let (dx, dy) = ((xf - s.cx) / s.rx, (yf - s.cy) / s.ry);
            let inside = if s.ellipse {
                dx * dx + dy * dy <= 1.0
            } else {
                dx.abs() <= 1.0 && dy.abs() <= 1.0
            };
            if inside {
                tint = s.tint;
            }
        }
        let grain = gaussian(&mut rng) * noise_sigma;
        std::array::from_fn(|c| {
            let chroma = gaussian(&mut rng) * noise_sigma * 0.5;
            (base[c] + lum + tint[c] + grain + chroma).round().clamp(0.0, 255.0) as u8
        })
    })
    .expect("non-empty dimensions")
}

/// `count` scenes named `scene-00`, `scene-01`, ...
pub fn corpus(count: usize, width: usize, height: usize, seed: u64) -> Vec<(String, ImagePlanes)> {
    (0..count)
        .map(|i| {
            (
                format!("scene-{i:02}"),
                natural_scene(width, height, seed.wrapping_add(i as u64 * 0x9e37_79b9)),
            )
        })
        .collect()
}

// Box-Muller; one sample per call is enough here.
fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
