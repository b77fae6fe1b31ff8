//! Deterministic tampering used to exercise verification.
//!
//! Every attack is a pure function of the image and its [`AttackSpec`];
//! anything left unspecified (pixel position, channel, direction) is drawn
//! from a ChaCha stream seeded with `spec.seed`.

use std::fmt;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::codecs::jpeg::JpegEncoder;
use image::{ExtendedColorType, ImageFormat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::BitPlane;
use crate::error::{Error, Result};
use crate::keying::CameraId;
use crate::protection::verify;
use crate::raster::{load_image, split_rgb, Channel, ImagePlanes};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }

    fn check(&self, (w, h): (usize, usize)) -> Result<()> {
        let fits = self.width > 0
            && self.height > 0
            && self.x.checked_add(self.width).is_some_and(|r| r <= w)
            && self.y.checked_add(self.height).is_some_and(|b| b <= h);
        if fits {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                rect: *self,
                width: w,
                height: h,
            })
        }
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}+{}+{}", self.width, self.height, self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Attack {
    /// Nudge one sample by +-1.
    OnePixel {
        x: Option<usize>,
        y: Option<usize>,
        channel: Option<Channel>,
    },
    /// Paste `source` (all channels) with its top-left corner at `(dest_x, dest_y)`.
    CopyMove {
        source: Rect,
        dest_x: usize,
        dest_y: usize,
    },
    /// Replace `rect` with the same rectangle of a same-sized donor image.
    Splice { rect: Rect, donor: PathBuf },
    /// Leaves pixels alone; verification runs under `camera_id` instead.
    WrongKey { camera_id: String },
    /// JPEG encode and decode at `quality` (1-100).
    Recompress { quality: u8 },
}

impl Attack {
    pub fn name(&self) -> &'static str {
        match self {
            Attack::OnePixel { .. } => "one_pixel",
            Attack::CopyMove { .. } => "copy_move",
            Attack::Splice { .. } => "splice",
            Attack::WrongKey { .. } => "wrong_key",
            Attack::Recompress { .. } => "recompress",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackSpec {
    #[serde(flatten)]
    pub attack: Attack,
    #[serde(default)]
    pub seed: u64,
}

impl AttackSpec {
    pub fn new(attack: Attack, seed: u64) -> Self {
        Self { attack, seed }
    }

    pub fn one_pixel(seed: u64) -> Self {
        Self::new(
            Attack::OnePixel {
                x: None,
                y: None,
                channel: None,
            },
            seed,
        )
    }
}

pub fn apply_attack(image: &ImagePlanes, spec: &AttackSpec) -> Result<ImagePlanes> {
    match &spec.attack {
        Attack::OnePixel { x, y, channel } => one_pixel(image, *x, *y, *channel, spec.seed),
        Attack::CopyMove {
            source,
            dest_x,
            dest_y,
        } => copy_move(image, *source, *dest_x, *dest_y),
        Attack::Splice { rect, donor } => splice(image, &load_image(donor)?, *rect),
        Attack::WrongKey { .. } => Ok(image.clone()),
        Attack::Recompress { quality } => recompress(image, *quality),
    }
}

/// Changes exactly one sample by one intensity level. Unset coordinates
/// and channel come from `seed`, as does the direction; a step that would
/// leave 0..=255 goes the other way.
pub fn one_pixel(
    image: &ImagePlanes,
    x: Option<usize>,
    y: Option<usize>,
    channel: Option<Channel>,
    seed: u64,
) -> Result<ImagePlanes> {
    let (w, h) = image.dims();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rx = rng.random_range(0..w);
    let ry = rng.random_range(0..h);
    let rc = Channel::ALL[rng.random_range(0..3)];
    let up: bool = rng.random();
    let (x, y, channel) = (x.unwrap_or(rx), y.unwrap_or(ry), channel.unwrap_or(rc));
    Rect::new(x, y, 1, 1).check((w, h))?;

    let mut out = image.clone();
    let v = out.plane(channel).get(x, y);
    let nudged = match (up, v) {
        (true, 255) | (false, 1..) => v - 1,
        _ => v + 1,
    };
    out.plane_mut(channel).set(x, y, nudged);
    Ok(out)
}

pub fn copy_move(image: &ImagePlanes, source: Rect, dest_x: usize, dest_y: usize) -> Result<ImagePlanes> {
    source.check(image.dims())?;
    Rect::new(dest_x, dest_y, source.width, source.height).check(image.dims())?;
    let mut out = image.clone();
    for dy in 0..source.height {
        for dx in 0..source.width {
            out.set_pixel(dest_x + dx, dest_y + dy, image.pixel(source.x + dx, source.y + dy));
        }
    }
    Ok(out)
}

pub fn splice(image: &ImagePlanes, donor: &ImagePlanes, rect: Rect) -> Result<ImagePlanes> {
    if donor.dims() != image.dims() {
        return Err(Error::DonorSizeMismatch {
            donor: donor.dims(),
            target: image.dims(),
        });
    }
    rect.check(image.dims())?;
    let mut out = image.clone();
    for y in rect.y..rect.y + rect.height {
        for x in rect.x..rect.x + rect.width {
            out.set_pixel(x, y, donor.pixel(x, y));
        }
    }
    Ok(out)
}

/// Round trip through baseline JPEG at the given quality.
pub fn recompress(image: &ImagePlanes, quality: u8) -> Result<ImagePlanes> {
    if !(1..=100).contains(&quality) {
        return Err(Error::InvalidAttack(format!("jpeg quality {quality} not in 1..=100")));
    }
    let (w, h) = image.dims();
    let mut buf = Vec::new();
    JpegEncoder::new_with_quality(&mut buf, quality)
        .encode(image.to_rgb_image().as_raw(), w as u32, h as u32, ExtendedColorType::Rgb8)
        .map_err(Error::Encode)?;
    let decoded = image::load(Cursor::new(buf), ImageFormat::Jpeg).map_err(|source| Error::Decode {
        path: PathBuf::from("<jpeg buffer>"),
        source,
    })?;
    split_rgb(&decoded.to_rgb8())
}

pub fn load_campaign(path: &Path) -> Result<Vec<AttackSpec>> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidAttack(e.to_string()))
}

/// Result of one attack in a campaign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignOutcome {
    pub index: usize,
    pub kind: &'static str,
    pub seed: u64,
    pub changed_samples: usize,
    pub tampered_blocks: usize,
    pub tampered_fraction: f64,
    pub detected: bool,
}

/// Applies each spec to `protected` and verifies the result. Outcomes come
/// back in spec order.
pub fn run_campaign(
    protected: &ImagePlanes,
    id: &CameraId,
    plane: BitPlane,
    specs: &[AttackSpec],
) -> Result<Vec<CampaignOutcome>> {
    specs
        .par_iter()
        .enumerate()
        .map(|(index, spec)| {
            let attacked = apply_attack(protected, spec)?;
            let report = match &spec.attack {
                Attack::WrongKey { camera_id } => {
                    verify(&attacked, &CameraId::from_text(camera_id)?, plane)?
                }
                _ => verify(&attacked, id, plane)?,
            };
            Ok(CampaignOutcome {
                index,
                kind: spec.attack.name(),
                seed: spec.seed,
                changed_samples: changed_samples(protected, &attacked),
                tampered_blocks: report.total_tampered(),
                tampered_fraction: report.tampered_fraction(),
                detected: !report.is_clean(),
            })
        })
        .collect()
}

/// Number of differing bytes across all three planes.
pub fn changed_samples(a: &ImagePlanes, b: &ImagePlanes) -> usize {
    Channel::ALL
        .iter()
        .map(|&c| {
            a.plane(c)
                .as_slice()
                .iter()
                .zip(b.plane(c).as_slice())
                .filter(|(p, q)| p != q)
                .count()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockcipher::BlockGrid;
    use crate::protection::protect;

    fn textured(seed: u64, w: usize, h: usize) -> ImagePlanes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ImagePlanes::from_fn(w, h, |x, y| {
            let base = ((x * 3 + y * 2) % 200) as u8;
            [
                base.wrapping_add(rng.random_range(0..40)),
                base.wrapping_add(rng.random_range(0..40)),
                (255 - base).wrapping_sub(rng.random_range(0..40)),
            ]
        })
        .unwrap()
    }

    fn abc() -> CameraId {
        CameraId::from_text("abc").unwrap()
    }

    fn protected_fixture() -> ImagePlanes {
        protect(&textured(1, 64, 64), &abc(), BitPlane::LSB).unwrap().planes
    }

    #[test]
    fn one_pixel_at_origin_green() {
        let p = protected_fixture();
        let spec = AttackSpec::new(
            Attack::OnePixel {
                x: Some(0),
                y: Some(0),
                channel: Some(Channel::Green),
            },
            0,
        );
        let attacked = apply_attack(&p, &spec).unwrap();
        assert_eq!(changed_samples(&p, &attacked), 1);
        assert_eq!(
            p.green().get(0, 0).abs_diff(attacked.green().get(0, 0)),
            1
        );
        let report = verify(&attacked, &abc(), BitPlane::LSB).unwrap();
        assert_eq!(
            report.tampered_blocks().map(|(bx, by, _)| (bx, by)).collect::<Vec<_>>(),
            vec![(0, 0)]
        );
    }

    #[test]
    fn one_pixel_clamps_by_reversing() {
        let white = ImagePlanes::from_fn(2, 2, |_, _| [255, 255, 255]).unwrap();
        let black = ImagePlanes::from_fn(2, 2, |_, _| [0, 0, 0]).unwrap();
        for seed in 0..32 {
            let w = one_pixel(&white, None, None, None, seed).unwrap();
            assert_eq!(changed_samples(&white, &w), 1);
            assert!(Channel::ALL.iter().all(|&c| w.plane(c).as_slice().iter().all(|&v| v >= 254)));
            let b = one_pixel(&black, None, None, None, seed).unwrap();
            assert!(Channel::ALL.iter().all(|&c| b.plane(c).as_slice().iter().all(|&v| v <= 1)));
        }
    }

    #[test]
    fn one_pixel_out_of_bounds() {
        let p = textured(2, 8, 8);
        assert!(matches!(
            one_pixel(&p, Some(8), Some(0), None, 0),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn same_seed_same_output() {
        let p = protected_fixture();
        for seed in [0, 1, 99] {
            let a = apply_attack(&p, &AttackSpec::one_pixel(seed)).unwrap();
            let b = apply_attack(&p, &AttackSpec::one_pixel(seed)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn copy_move_flags_destination_blocks() {
        let p = protected_fixture();
        let tiles = BlockGrid::for_dims(64, 64);
        // source off the block lattice; aligned 8x8 destination covers exactly
        // 4 blocks, unaligned up to 9
        for (dx, dy) in [(40, 40), (42, 37)] {
            let spec = AttackSpec::new(
                Attack::CopyMove {
                    source: Rect::new(5, 3, 8, 8),
                    dest_x: dx,
                    dest_y: dy,
                },
                0,
            );
            let report = verify(&apply_attack(&p, &spec).unwrap(), &abc(), BitPlane::LSB).unwrap();
            let n = report.total_tampered();
            assert!((4..=9).contains(&n), "{n} blocks at ({dx}, {dy})");
            for (bx, by, _) in report.tampered_blocks() {
                let (x0, y0, x1, y1) = tiles.pixel_rect(bx, by);
                assert!(x1 > dx && x0 < dx + 8 && y1 > dy && y0 < dy + 8);
            }
        }
    }

    #[test]
    fn lattice_aligned_copy_move_is_a_blind_spot() {
        // Whole protected blocks moved to other block positions carry their
        // own valid code; tiles are not bound to their location.
        let p = protected_fixture();
        let spec = AttackSpec::new(
            Attack::CopyMove {
                source: Rect::new(4, 4, 8, 8),
                dest_x: 40,
                dest_y: 40,
            },
            0,
        );
        let attacked = apply_attack(&p, &spec).unwrap();
        assert!(changed_samples(&p, &attacked) > 0);
        assert!(verify(&attacked, &abc(), BitPlane::LSB).unwrap().is_clean());
    }

    #[test]
    fn copy_move_bounds() {
        let p = textured(3, 16, 16);
        assert!(copy_move(&p, Rect::new(10, 10, 8, 8), 0, 0).is_err());
        assert!(copy_move(&p, Rect::new(0, 0, 8, 8), 9, 0).is_err());
        assert!(copy_move(&p, Rect::new(0, 0, 0, 8), 0, 0).is_err());
        assert!(copy_move(&p, Rect::new(0, 0, 8, 8), 8, 8).is_ok());
    }

    #[test]
    fn splice_copies_donor_rectangle() {
        let p = textured(4, 12, 10);
        let donor = textured(5, 12, 10);
        let r = Rect::new(2, 3, 5, 4);
        let out = splice(&p, &donor, r).unwrap();
        for y in 0..10 {
            for x in 0..12 {
                let inside = (2..7).contains(&x) && (3..7).contains(&y);
                let want = if inside { donor.pixel(x, y) } else { p.pixel(x, y) };
                assert_eq!(out.pixel(x, y), want);
            }
        }
        assert!(matches!(
            splice(&p, &textured(5, 10, 10), r),
            Err(Error::DonorSizeMismatch { .. })
        ));
    }

    #[test]
    fn recompress_breaks_the_mark() {
        let p = protected_fixture();
        let attacked = apply_attack(&p, &AttackSpec::new(Attack::Recompress { quality: 90 }, 0)).unwrap();
        let report = verify(&attacked, &abc(), BitPlane::LSB).unwrap();
        assert!(report.tampered_fraction() >= 0.99, "{}", report.tampered_fraction());
        assert!(recompress(&p, 0).is_err());
    }

    #[test]
    fn wrong_key_is_identity_on_pixels() {
        let p = protected_fixture();
        let spec = AttackSpec::new(
            Attack::WrongKey {
                camera_id: "other".into(),
            },
            0,
        );
        assert_eq!(apply_attack(&p, &spec).unwrap(), p);
        let out = run_campaign(&p, &abc(), BitPlane::LSB, &[spec]).unwrap();
        assert!(out[0].detected);
        assert_eq!(out[0].changed_samples, 0);
    }

    #[test]
    fn campaign_json_parses() {
        let text = r#"[
            {"kind": "one_pixel", "seed": 7},
            {"kind": "one_pixel", "x": 1, "y": 2, "channel": "blue", "seed": 8},
            {"kind": "copy_move", "source": {"x": 0, "y": 0, "width": 8, "height": 8}, "dest_x": 16, "dest_y": 16},
            {"kind": "splice", "rect": {"x": 0, "y": 0, "width": 4, "height": 4}, "donor": "d.png"},
            {"kind": "wrong_key", "camera_id": "nope"},
            {"kind": "recompress", "quality": 75}
        ]"#;
        let specs: Vec<AttackSpec> = serde_json::from_str(text).unwrap();
        assert_eq!(specs.len(), 6);
        assert_eq!(specs[0], AttackSpec::one_pixel(7));
        assert_eq!(specs[2].seed, 0);
        assert_eq!(
            specs[1].attack,
            Attack::OnePixel {
                x: Some(1),
                y: Some(2),
                channel: Some(Channel::Blue)
            }
        );
        let names: Vec<_> = specs.iter().map(|s| s.attack.name()).collect();
        assert_eq!(
            names,
            ["one_pixel", "one_pixel", "copy_move", "splice", "wrong_key", "recompress"]
        );
        assert!(serde_json::from_str::<Vec<AttackSpec>>(r#"[{"kind": "rotate"}]"#).is_err());
    }
}
