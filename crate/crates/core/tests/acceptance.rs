//! Exit criteria. Each test prints a single PASS/FAIL line; run with
//! `cargo test -p uwsynth-core --test acceptance -- --nocapture --test-threads 1`
//! to see them.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::*;
use uwsynth_core::color::{srgb_pixel_to_lab, srgb_to_lab};
use uwsynth_core::dataset::{
    seeded_shuffle, Assembler, DatasetManifest,
};
use uwsynth_core::degrade::{apply_degradation, DegradationSpec, DegradationType};
use uwsynth_core::eval::{self, fixtures, EvalOptions};
use uwsynth_core::metrics::{self, chroma_std, chroma_std_streaming, luminance_contrast};
use uwsynth_core::{DirectoryBackend, ImageRgb8, ParametricBackend};

// Scalar sRGB -> Lab oracle with the textbook D65 white.
fn lab_oracle(rgb: [u8; 3]) -> [f64; 3] {
    let lin = |c: u8| {
        let c = c as f64 / 255.0;
        if c <= 0.04045 {
            c / 12.92
        } else {
            ((c + 0.055) / 1.055).powf(2.4)
        }
    };
    let (r, g, b) = (lin(rgb[0]), lin(rgb[1]), lin(rgb[2]));
    let x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    let y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    let z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    let f = |t: f64| {
        if t > (6.0f64 / 29.0).powi(3) {
            t.powf(1.0 / 3.0)
        } else {
            t / (3.0 * (6.0f64 / 29.0).powi(2)) + 4.0 / 29.0
        }
    };
    let (fx, fy, fz) = (f(x / 0.95047), f(y / 1.0), f(z / 1.08883));
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

// Full-sort percentile with linear interpolation between closest ranks.
fn sorted_percentile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = p * (v.len() - 1) as f64;
    let i = h.floor() as usize;
    if i + 1 >= v.len() {
        return v[i];
    }
    v[i] + (h - i as f64) * (v[i + 1] - v[i])
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("{:.1} ms (limit {} ms)", elapsed.as_secs_f64() * 1e3, limit.as_millis())
}

#[test]
fn ac1_table_consistency() {
    let start = Instant::now();
    let rebuilt = eval::reconstruct_totals(&fixtures::components()).unwrap();
    let published = fixtures::totals();
    let bad = eval::total_discrepancies(&rebuilt, &published, fixtures::RECONSTRUCTION_TOLERANCE);
    let worst = rebuilt
        .cells()
        .iter()
        .map(|c| {
            let p = published.get(&c.model, &c.training_set, &c.test_set).unwrap();
            (c.total.unwrap() - p.total.unwrap()).abs()
        })
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(1);
    verdict(
        "AC1",
        "component recombination matches totals",
        rebuilt.cells().len() == 90 && bad.is_empty() && elapsed < limit,
        &format!(
            "90 triples, {} outside 5e-4, worst {worst:.2e}, {}",
            bad.len(),
            within(elapsed, limit)
        ),
    );
}

#[test]
fn ac2_win_count() {
    let start = Instant::now();
    let winners = eval::winners_per_group(&fixtures::totals()).unwrap();
    let wins = eval::count_wins(&winners, &fixtures::SYNTHETIC_TRAINING_SETS);
    let ties = winners.iter().filter(|w| w.tie).count();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(1);
    verdict(
        "AC2",
        "synthetic training sets win 14 of 18 groups",
        winners.len() == 18 && wins == fixtures::SYNTHETIC_WINS && ties == 0 && elapsed < limit,
        &format!("{wins}/{} groups, {ties} ties, {}", winners.len(), within(elapsed, limit)),
    );
}

#[test]
fn ac3_metric_ground_truths() {
    let mut failures = Vec::new();
    let mut r = rng(3);
    // Constant images have no chroma spread and no luminance spread; only
    // achromatic ones also have zero saturation and hence a zero total.
    for _ in 0..50 {
        let color: [u8; 3] = rand::Rng::random(&mut r);
        let s = metrics::uciqe(&ImageRgb8::filled(32, 24, color).unwrap());
        if s.sigma_c.abs() >= 1e-9 || s.conl != 0.0 {
            failures.push(format!("constant {color:?} spread {} {}", s.sigma_c, s.conl));
        }
    }
    for v in 0..=255u8 {
        let s = metrics::uciqe(&ImageRgb8::filled(32, 24, [v, v, v]).unwrap());
        if s.total.abs() >= 1e-9 {
            failures.push(format!("gray {v} total {}", s.total));
        }
    }
    let gray = ImageRgb8::from_fn(40, 40, |x, y| {
        let v = ((x * 7 + y * 3) % 256) as u8;
        [v, v, v]
    })
    .unwrap();
    if metrics::uciqe(&gray).mu_s != 0.0 {
        failures.push("grayscale mu_s".into());
    }
    let primaries = ImageRgb8::from_fn(30, 30, |x, _| [[255, 0, 0], [0, 255, 0], [0, 0, 255]][x % 3]).unwrap();
    if metrics::uciqe(&primaries).mu_s != 1.0 {
        failures.push("primary mu_s".into());
    }
    let lab = srgb_pixel_to_lab([255, 0, 0]);
    let oracle = lab_oracle([255, 0, 0]);
    let expected = [53.24, 80.09, 67.20];
    for c in 0..3 {
        if (lab[c] - expected[c]).abs() > 0.05 || (oracle[c] - expected[c]).abs() > 0.05 {
            failures.push(format!("red Lab {lab:?} oracle {oracle:?}"));
        }
    }
    let a = ImageRgb8::filled(16, 16, [90, 120, 30]).unwrap();
    let b = ImageRgb8::filled(16, 16, [106, 136, 46]).unwrap();
    let p = metrics::psnr(&a, &b).unwrap();
    // MSE is exactly 16^2
    let p_oracle = 10.0 * (255.0f64 * 255.0 / 256.0).log10();
    if (p - 24.05).abs() > 0.01 || (p - p_oracle).abs() > 1e-12 {
        failures.push(format!("psnr {p} oracle {p_oracle}"));
    }
    let x = scene_image(64, 48, 9);
    let s = metrics::ssim(&x, &x).unwrap();
    if (s - 1.0).abs() > 1e-9 {
        failures.push(format!("ssim {s}"));
    }
    verdict(
        "AC3",
        "metric ground truths",
        failures.is_empty(),
        &format!("red Lab = ({:.4}, {:.4}, {:.4}), PSNR = {p:.4} dB, SSIM(x,x) = {s}; {failures:?}", lab[0], lab[1], lab[2]),
    );
}

#[test]
fn ac4_oracle_equivalence() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let (mut worst_conl, mut worst_sigma) = (0.0f64, 0.0f64);
    for i in 0..1000u64 {
        let img = noise_image(64, 64, 10_000 + i);
        let lab = srgb_to_lab(&img);
        let oracle = (sorted_percentile(&lab.l, 0.99) - sorted_percentile(&lab.l, 0.01)) / 100.0;
        worst_conl = worst_conl.max((luminance_contrast(&lab) - oracle).abs());
        worst_sigma = worst_sigma.max((chroma_std(&lab) - chroma_std_streaming(&lab)).abs());
        img.save_png(dir.path().join(format!("img{i:04}.png"))).unwrap();
    }
    let serial = eval::evaluate_directory(
        dir.path(),
        None,
        &EvalOptions { resize: None, parallel: false },
    )
    .unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let parallel = pool
        .install(|| eval::evaluate_directory(dir.path(), None, &EvalOptions::default()))
        .unwrap();
    let bitwise = serial == parallel
        && serial.mean.total.to_bits() == parallel.mean.total.to_bits()
        && serial.n_images() == 1000;
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(30);
    verdict(
        "AC4",
        "oracle equivalence on 1000 random 64x64 images",
        worst_conl <= 1e-12 && worst_sigma <= 1e-9 && bitwise && elapsed < limit,
        &format!(
            "conl max |diff| {worst_conl:.1e}, sigma_c max |diff| {worst_sigma:.1e}, serial == parallel: {bitwise}, {}",
            within(elapsed, limit)
        ),
    );
}

#[test]
fn ac5_invariance() {
    let mut broken = Vec::new();
    for i in 0..100u64 {
        let img = if i % 2 == 0 { noise_image(48, 32, i) } else { scene_image(48, 32, i) };
        let base = metrics::uciqe(&img);
        let mut pixels = img.pixels().to_vec();
        seeded_shuffle(&mut pixels, 77 + i);
        let shuffled = ImageRgb8::new(48, 32, pixels).unwrap();
        for (name, variant) in [
            ("permutation", shuffled),
            ("rotation", img.rotate90()),
            ("mirror", img.mirror_horizontal()),
        ] {
            if metrics::uciqe(&variant) != base {
                broken.push(format!("image {i} {name}"));
            }
        }
    }
    verdict(
        "AC5",
        "UCIQE components invariant under permutation, rotation, mirroring",
        broken.is_empty(),
        &format!("100 images x 3 transforms, {} mismatches {broken:?}", broken.len()),
    );
}

#[test]
fn ac6_degradation_properties() {
    let mut problems = Vec::new();

    let mut identity = DegradationSpec::identity(DegradationType::Blue);
    identity.depth = 3.7;
    for i in 0..20 {
        let img = noise_image(33, 21, 600 + i);
        if apply_degradation(&img, &identity).unwrap() != img {
            problems.push(format!("identity changed image {i}"));
        }
    }

    let white = ImageRgb8::filled(4, 4, [255, 255, 255]).unwrap();
    let blue = DegradationSpec {
        beta: [0.9, 0.3, 0.05],
        depth: 1.0,
        background: [10, 60, 120],
        ..DegradationSpec::identity(DegradationType::Blue)
    };
    let red = apply_degradation(&white, &blue).unwrap().get(0, 0)[0];
    let t = (-0.9f64).exp();
    let red_oracle = (255.0 * t + 10.0 * (1.0 - t)).round() as u8;
    if red != 110 || red != red_oracle {
        problems.push(format!("white pixel red channel {red}, oracle {red_oracle}"));
    }

    let mut worst_shift = 0.0f64;
    let mut sources: Vec<ImageRgb8> = (0..10).map(|i| noise_image(40, 30, 700 + i)).collect();
    sources.extend((0..10).map(|i| scene_image(40, 30, 800 + i)));
    sources.push(ImageRgb8::from_fn(32, 32, |x, y| if (x / 4 + y / 4) % 2 == 0 { [0; 3] } else { [255; 3] }).unwrap());
    sources.push(ImageRgb8::from_fn(31, 31, |x, y| if (x, y) == (15, 15) { [255; 3] } else { [0; 3] }).unwrap());
    for sigma in [1.0, 2.5, 4.0] {
        let spec = DegradationSpec {
            blur_sigma: sigma,
            ..DegradationSpec::identity(DegradationType::Blurry)
        };
        for (i, img) in sources.iter().enumerate() {
            let out = apply_degradation(img, &spec).unwrap();
            let (before, after) = (channel_means(img), channel_means(&out));
            for c in 0..3 {
                worst_shift = worst_shift.max((before[c] - after[c]).abs() / 255.0);
            }
            if laplacian_variance(&out) >= laplacian_variance(img) {
                problems.push(format!("sigma {sigma} image {i}: Laplacian variance not reduced"));
            }
        }
    }
    if worst_shift > 0.5 / 255.0 {
        problems.push(format!("mean shift {worst_shift}"));
    }

    let root = tempfile::tempdir().unwrap();
    let backend = ParametricBackend::builtin();
    let names: Vec<String> = (0..4).map(|i| format!("src{i}.png")).collect();
    let images: Vec<ImageRgb8> = (0..4).map(|i| scene_image(36, 28, 900 + i)).collect();
    for (name, img) in names.iter().zip(&images) {
        for t in DegradationType::ALL {
            let out = apply_degradation(img, backend.presets().spec(t)).unwrap();
            out.save_png(root.path().join(t.slug()).join(name)).unwrap();
        }
    }
    let dir_backend = DirectoryBackend::new(root.path());
    for (name, img) in names.iter().zip(&images) {
        for t in DegradationType::ALL {
            use uwsynth_core::DegradationBackend;
            let ingested = dir_backend.degrade(name, img, t).unwrap().image;
            let direct = apply_degradation(img, backend.presets().spec(t)).unwrap();
            if ingested != direct {
                problems.push(format!("ingest mismatch {name} {t}"));
            }
        }
    }

    verdict(
        "AC6",
        "degradation properties",
        problems.is_empty(),
        &format!(
            "identity no-op, white->red {red}, worst blur mean shift {:.3}/255, 24 ingest round trips; {problems:?}",
            worst_shift * 255.0
        ),
    );
}

#[test]
fn ac7_assembly_properties() {
    let src_dir = tempfile::tempdir().unwrap();
    let sources: Vec<PathBuf> = (0..600)
        .map(|i| {
            let p = src_dir.path().join(format!("s{i:03}.png"));
            scene_image(12, 12, 5000 + i).save_png(&p).unwrap();
            p
        })
        .collect();
    let backend = ParametricBackend::builtin();
    let mut problems = Vec::new();

    let out_a = tempfile::tempdir().unwrap();
    let mixed = Assembler::new(&backend, out_a.path()).name("mixed").seed(2024).balanced(&sources, 600).unwrap();
    let counts: Vec<usize> = mixed.per_type_counts.values().copied().collect();
    if counts != vec![100; 6] || mixed.records.len() != 600 {
        problems.push(format!("counts {counts:?}"));
    }
    let report = uwsynth_core::dataset::validate_manifest(&mixed, out_a.path());
    if !report.is_ok() {
        problems.push(format!("validation: {report}"));
    }

    let out_x = tempfile::tempdir().unwrap();
    match Assembler::new(&backend, out_x.path()).balanced(&sources, 10) {
        Err(uwsynth_core::Error::NotDivisible(10)) => {}
        other => problems.push(format!("n_total=10 gave {other:?}")),
    }

    let out_s = tempfile::tempdir().unwrap();
    let single = Assembler::new(&backend, out_s.path())
        .name("deep-blue-only")
        .seed(2024)
        .single_type(&sources, DegradationType::DeepBlue, 600)
        .unwrap();
    if single.reference_multiset() != mixed.reference_multiset() {
        problems.push("reference multisets differ".into());
    }

    let text = std::fs::read_to_string(out_a.path().join("manifest.jsonl")).unwrap();
    let reread = DatasetManifest::parse(&text, "manifest").unwrap();
    if reread.to_text() != text {
        problems.push("manifest round trip not byte-identical".into());
    }

    let out_b = tempfile::tempdir().unwrap();
    Assembler::new(&backend, out_b.path()).name("mixed").seed(2024).balanced(&sources, 600).unwrap();
    let text_b = std::fs::read_to_string(out_b.path().join("manifest.jsonl")).unwrap();
    if text_b != text {
        problems.push("repeat run manifest differs".into());
    }
    for r in mixed.records.iter().step_by(37) {
        let a = std::fs::read(out_a.path().join(&r.degraded_path)).unwrap();
        let b = std::fs::read(out_b.path().join(&r.degraded_path)).unwrap();
        if a != b {
            problems.push(format!("repeat run image {} differs", r.degraded_path));
        }
    }

    verdict(
        "AC7",
        "assembly properties",
        problems.is_empty(),
        &format!("per-type counts {counts:?}; {problems:?}"),
    );
}

#[test]
fn ac8_throughput() {
    let img = scene_image(256, 256, 42);
    let mut best = Duration::MAX;
    for _ in 0..20 {
        let t = Instant::now();
        std::hint::black_box(metrics::uciqe(std::hint::black_box(&img)));
        best = best.min(t.elapsed());
    }

    let dir = tempfile::tempdir().unwrap();
    for i in 0..1000u64 {
        scene_image(256, 256, 20_000 + i).save_png(dir.path().join(format!("{i:04}.png"))).unwrap();
    }
    let t = Instant::now();
    let ev = eval::evaluate_directory(dir.path(), None, &EvalOptions::default()).unwrap();
    let batch = t.elapsed();

    let single_limit = Duration::from_millis(10);
    let batch_limit = Duration::from_secs(5);
    verdict(
        "AC8",
        "throughput",
        best < single_limit && batch < batch_limit && ev.n_images() == 1000,
        &format!(
            "one 256x256 image {}, 1000 images {} on {} worker thread(s)",
            within(best, single_limit),
            within(batch, batch_limit),
            rayon::current_num_threads()
        ),
    );
}
