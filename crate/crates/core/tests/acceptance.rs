//! Acceptance criteria. Runs as a plain binary (no libtest harness) and
//! prints one PASS/FAIL line per criterion; exits non-zero if any fail.
//!
//!     cargo test -p pixelseal --test acceptance

use pixelseal::attacks::{one_pixel, AttackSpec};
use pixelseal::blockcipher::{aes_encrypt_block, BlockGrid};
use pixelseal::cli::bench::{run_bench, write_csv, BASELINES};
use pixelseal::fixtures::{corpus, natural_scene};
use pixelseal::keying::{derive_soi, CameraId};
use pixelseal::metrics::{mae, mse, psnr, quality_report, ssim, ssim_with_constants, uiqi};
use pixelseal::{apply_attack, protect, verify, BitPlane, Channel, ImagePlanes};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn random_image(rng: &mut impl RngCore, w: usize, h: usize) -> ImagePlanes {
    ImagePlanes::from_fn(w, h, |_, _| {
        let mut px = [0u8; 3];
        rng.fill_bytes(&mut px);
        px
    })
    .unwrap()
}

/// Four 800x532 scenes and one 737x492.
fn bench_corpus() -> Vec<(String, ImagePlanes)> {
    let mut images = corpus(4, 800, 532, 2019);
    images.push(("scene-04".into(), natural_scene(737, 492, 4242)));
    images
}

fn camera() -> CameraId {
    CameraId::from_text("MCC-F220/cam-01").unwrap()
}

fn analytic_mse(p: u8) -> f64 {
    f64::from(1u32 << (2 * p)) / 6.0
}

fn c1_plane_mse_psnr() -> Outcome {
    let images = bench_corpus();
    let planes = [0u8, 1, 2, 3, 7].map(|p| BitPlane::new(p).unwrap());
    let result = run_bench(&images, &planes, &camera()).map_err(|e| e.to_string())?;
    let mut detail = Vec::new();
    // reference PSNR per plane
    for (p, ref_psnr) in [(0u8, 55.91), (1, 49.90), (2, 43.87)] {
        let avg = result.average(BitPlane::new(p).unwrap()).unwrap();
        let target = analytic_mse(p);
        let rel = (avg.quality.mse - target).abs() / target;
        check(rel <= 0.03, format!("plane {p}: avg mse {} vs {target} ({:.2}%)", avg.quality.mse, rel * 100.0))?;
        check(
            (avg.quality.psnr_db - ref_psnr).abs() <= 0.1,
            format!("plane {p}: avg psnr {} vs {ref_psnr}", avg.quality.psnr_db),
        )?;
        detail.push(format!("p{p} mse={:.4} psnr={:.3}", avg.quality.mse, avg.quality.psnr_db));
    }
    // planes 3 and 7 must stay far from the plane 1 and 2 reference MSEs
    for (p, ref_mse) in [(3u8, 0.6646), (7, 2.676)] {
        let avg = result.average(BitPlane::new(p).unwrap()).unwrap();
        let target = analytic_mse(p);
        check(
            (avg.quality.mse - target).abs() / target <= 0.03,
            format!("plane {p}: avg mse {} vs {target}", avg.quality.mse),
        )?;
        check(avg.quality.mse > 10.0 * ref_mse, format!("plane {p} unexpectedly near {ref_mse}"))?;
        detail.push(format!("p{p} mse={:.2}", avg.quality.mse));
    }
    Ok(detail.join(", "))
}

fn c2_baseline_cross_check() -> Outcome {
    let db = psnr(0.166577359).map_err(|e| e.to_string())?;
    check((db - 55.91465).abs() <= 0.0005, format!("psnr(0.166577359) = {db}"))?;

    let images = bench_corpus();
    let result = run_bench(&images, &[BitPlane::LSB], &camera()).map_err(|e| e.to_string())?;
    let ours = result.averages[0].quality.psnr_db;
    let [sgvc, mw] = BASELINES;
    check(
        ours > sgvc.psnr_db && sgvc.psnr_db > mw.psnr_db,
        format!("ordering {ours} > {} > {}", sgvc.psnr_db, mw.psnr_db),
    )?;
    let mut csv = Vec::new();
    write_csv(&mut csv, &result, true).map_err(|e| e.to_string())?;
    let csv = String::from_utf8(csv).unwrap();
    check(csv.contains("SGVC,,,,,0.57906,52.16478,0.95148,,"), "SGVC row missing")?;
    check(csv.contains("MW,,,,,0.97638,42.34178,0.92584,,"), "MW row missing")?;
    Ok(format!("psnr(avg mse)={db:.5} dB; ours {ours:.3} > SGVC {} > MW {}", sgvc.psnr_db, mw.psnr_db))
}

fn c3_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut clean = 0;
    for trial in 0..100 {
        let (w, h) = (rng.random_range(1..=96), rng.random_range(1..=96));
        let image = if trial % 2 == 0 {
            random_image(&mut rng, w, h)
        } else {
            natural_scene(w, h, rng.random())
        };
        let mut id = vec![0u8; rng.random_range(1..=32)];
        rng.fill_bytes(&mut id);
        let id = CameraId::new(id).unwrap();
        let plane = BitPlane::new(rng.random_range(0..8)).unwrap();
        let sealed = protect(&image, &id, plane).map_err(|e| e.to_string())?;
        let report = verify(&sealed.planes, &id, plane).map_err(|e| e.to_string())?;
        if report.total_tampered() == 0 {
            clean += 1;
        }
    }
    check(clean == 100, format!("{clean}/100 clean"))?;
    Ok("100/100 clean".into())
}

fn c4_localization() -> Outcome {
    let fixtures: Vec<(ImagePlanes, BitPlane)> = [(0u8, 64, 64), (1, 96, 64), (2, 64, 128), (5, 80, 80)]
        .iter()
        .enumerate()
        .map(|(i, &(p, w, h))| {
            let plane = BitPlane::new(p).unwrap();
            (protect(&natural_scene(w, h, 40 + i as u64), &camera(), plane).unwrap().planes, plane)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut gb_detected, mut red_detected, mut blind_detected) = (0, 0, 0);
    for trial in 0..1000u64 {
        let (image, plane) = &fixtures[trial as usize % fixtures.len()];
        let tiles = BlockGrid::for_dims(image.width(), image.height());
        let channel = if trial % 2 == 0 { Channel::Green } else { Channel::Blue };

        // seeded +-1 on green or blue
        let attacked = one_pixel(image, None, None, Some(channel), trial).map_err(|e| e.to_string())?;
        let (x, y) = changed_pixel(image, &attacked, channel);
        let flagged = flagged_blocks(&attacked, *plane)?;
        if !flagged.is_empty() {
            gb_detected += 1;
            check(flagged == [tiles.block_of(x, y)], format!("trial {trial}: flagged {flagged:?}, tamper at ({x}, {y})"))?;
        }

        let (x, y) = (rng.random_range(0..image.width()), rng.random_range(0..image.height()));
        let mut direct = image.clone();
        let r = direct.red().get(x, y);
        direct.plane_mut(Channel::Red).set(x, y, r ^ plane.mask());
        let flagged = flagged_blocks(&direct, *plane)?;
        if !flagged.is_empty() {
            red_detected += 1;
            check(flagged == [tiles.block_of(x, y)], format!("red flip at ({x}, {y}) flagged {flagged:?}"))?;
        }

        let other_bit = (plane.index() + rng.random_range(1..8)) % 8;
        let mut blind = image.clone();
        blind.plane_mut(Channel::Red).set(x, y, r ^ (1 << other_bit));
        if !flagged_blocks(&blind, *plane)?.is_empty() {
            blind_detected += 1;
        }
    }
    check(gb_detected >= 999, format!("green/blue detections {gb_detected}/1000"))?;
    check(red_detected == 1000, format!("red bit-p detections {red_detected}/1000"))?;
    check(blind_detected == 0, format!("blind-spot detections {blind_detected}/1000"))?;
    Ok(format!(
        "G/B {gb_detected}/1000 (all localized), red bit p {red_detected}/1000, other red bits {blind_detected}/1000"
    ))
}

fn changed_pixel(a: &ImagePlanes, b: &ImagePlanes, channel: Channel) -> (usize, usize) {
    let i = a
        .plane(channel)
        .as_slice()
        .iter()
        .zip(b.plane(channel).as_slice())
        .position(|(p, q)| p != q)
        .expect("one sample changed");
    (i % a.width(), i / a.width())
}

fn flagged_blocks(image: &ImagePlanes, plane: BitPlane) -> Result<Vec<(usize, usize)>, String> {
    Ok(verify(image, &camera(), plane)
        .map_err(|e| e.to_string())?
        .tampered_blocks()
        .map(|(bx, by, _)| (bx, by))
        .collect())
}

fn c5_wrong_key() -> Outcome {
    let sealed = protect(&natural_scene(256, 256, 5), &camera(), BitPlane::LSB).unwrap();
    let report = verify(&sealed.planes, &CameraId::from_text("MCC-F220/cam-02").unwrap(), BitPlane::LSB)
        .map_err(|e| e.to_string())?;
    let f = report.tampered_fraction();
    check(f >= 0.999, format!("tampered_fraction {f}"))?;
    // attack-spec route agrees
    let spec: AttackSpec = serde_json::from_str(r#"{"kind": "wrong_key", "camera_id": "x"}"#).unwrap();
    check(apply_attack(&sealed.planes, &spec).unwrap() == sealed.planes, "wrong_key altered pixels")?;
    Ok(format!("tampered_fraction {f:.5} ({} of {} blocks)", report.total_tampered(), report.mismatches.len()))
}

fn c6_vectors() -> Outcome {
    let key = hex::decode("000102030405060708090a0b0c0d0e0f").unwrap();
    let pt = hex::decode("00112233445566778899aabbccddeeff").unwrap();
    let ct = hex::encode(aes_encrypt_block(&key, &pt).map_err(|e| e.to_string())?);
    check(ct == "69c4e0d86a7b0430d8cdb78070b4c55a", format!("AES {ct}"))?;

    let sha1 = |msg: &[u8]| derive_soi(&CameraId::new(msg.to_vec()).unwrap()).to_hex();
    for (msg, want) in [
        (b"abc".to_vec(), "a9993e364706816aba3e25717850c26c9cd0d89d"),
        (
            b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq".to_vec(),
            "84983e441c3bd26ebaae4aa1f95129e5e54670f1",
        ),
        (vec![b'a'; 1_000_000], "34aa973cd4c4daa4f61eeb2bdbad27316534016f"),
    ] {
        let got = sha1(&msg);
        check(got == want, format!("SHA-1 of {}-byte message: {got}", msg.len()))?;
    }
    Ok("FIPS-197 C.1 and 3 SHA-1 vectors byte-exact".into())
}

fn c7_metric_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let (w, h) = (rng.random_range(2..48), rng.random_range(2..48));
        let x = if i % 2 == 0 { random_image(&mut rng, w, h) } else { natural_scene(w, h, i) };
        check(mae(&x, &x).unwrap() == 0.0 && mse(&x, &x).unwrap() == 0.0, format!("image {i}: self error non-zero"))?;
        check(ssim(&x, &x).unwrap() == 1.0, format!("image {i}: ssim(x,x) != 1"))?;

        let v = if i % 3 == 0 {
            random_image(&mut rng, w, h)
        } else {
            let p = BitPlane::new(rng.random_range(0..8)).unwrap();
            protect(&x, &camera(), p).unwrap().planes
        };
        let q = quality_report(&x, &v).map_err(|e| format!("image {i}: {e}"))?;
        check(q.mae * q.mae <= q.mse + 1e-12, format!("image {i}: mae^2 {} > mse {}", q.mae * q.mae, q.mse))?;
        let db = psnr(q.mse).unwrap();
        check(
            (db.is_infinite() && q.psnr_db.is_infinite()) || (db - q.psnr_db).abs() <= 1e-9,
            format!("image {i}: psnr inconsistency"),
        )?;
        let zero_const = ssim_with_constants(&x, &v, 0.0, 0.0).unwrap();
        let u = uiqi(&x, &v).map_err(|e| format!("image {i}: {e}"))?;
        check((u - zero_const).abs() <= 1e-9, format!("image {i}: uiqi {u} vs {zero_const}"))?;
        check(u == q.uiqi, format!("image {i}: report uiqi differs"))?;
    }

    let mut trend = Vec::new();
    for (name, image) in bench_corpus() {
        let s: Vec<f64> = BitPlane::TABLE_PLANES
            .iter()
            .map(|&p| ssim(&image, &protect(&image, &camera(), p).unwrap().planes).unwrap())
            .collect();
        check(s[0] > s[1] && s[1] > s[2], format!("{name}: ssim not decreasing {s:?}"))?;
        trend.push(format!("{:.5}>{:.5}>{:.5}", s[0], s[1], s[2]));
    }
    Ok(format!("100 random images; ssim by plane 0>1>2: {}", trend.join(" ")))
}

fn c8_mae_oracle() -> Outcome {
    // MAE is held to its analytic value 2^p/6.
    let images = bench_corpus();
    let result = run_bench(&images, &BitPlane::TABLE_PLANES, &camera()).map_err(|e| e.to_string())?;
    let mut detail = Vec::new();
    for avg in &result.averages {
        let target = f64::from(1u32 << avg.plane.index()) / 6.0;
        let rel = (avg.quality.mae - target).abs() / target;
        check(rel <= 0.03, format!("plane {}: mae {} vs {target}", avg.plane, avg.quality.mae))?;
        detail.push(format!("p{} mae={:.4}", avg.plane, avg.quality.mae));
    }
    Ok(format!("{} (analytic 2^p/6)", detail.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 per-plane MSE/PSNR at planes 0/1/2, plus 3/7", c1_plane_mse_psnr),
        ("2 reference PSNR and baseline ordering", c2_baseline_cross_check),
        ("3 soundness over 100 random triples", c3_soundness),
        ("4 single-pixel tamper localization and blind spot", c4_localization),
        ("5 wrong-key rejection", c5_wrong_key),
        ("6 AES-128 and SHA-1 reference vectors", c6_vectors),
        ("7 metric properties and SSIM trend", c7_metric_properties),
        ("8 MAE against its analytic value", c8_mae_oracle),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} [{secs:.1}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name} [{secs:.1}s]: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
