//! Acceptance criteria, run end to end through the `nullfield` binary. Each
//! test prints one `criterion N ...: PASS|FAIL` line with the measured values.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use nullfield::flow::{write_curve_csv, Curve};
use serde_json::Value;

struct Run {
    code: i32,
    report: Value,
    elapsed: Duration,
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nullfield"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nullfield-acceptance-{}-{tag}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Runs the binary in `dir` and parses the JSON report it prints.
fn run_in(dir: &Path, args: &[&str]) -> Run {
    let start = Instant::now();
    let out = bin().current_dir(dir).args(args).output().expect("binary runs");
    let elapsed = start.elapsed();
    let report = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: no JSON report ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr)));
    Run { code: out.status.code().unwrap_or(-1), report, elapsed }
}

fn run(args: &[&str]) -> Run {
    run_in(&std::env::temp_dir(), args)
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

fn verdict(n: u32, name: &str, checks: &[(&str, bool)], detail: String) {
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(label, _)| *label).collect();
    let status = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} {name}: {status} ({detail})");
    assert!(failed.is_empty(), "criterion {n} failed on: {}", failed.join(", "));
}

/// Cases of a `verify` report as `(label, max, pass)`.
fn cases(r: &Run) -> Vec<(String, f64, bool)> {
    r.report["cases"]
        .as_array()
        .expect("cases")
        .iter()
        .map(|c| (c["case"].as_str().unwrap().to_string(), num(c, "max"), c["pass"].as_bool().unwrap()))
        .collect()
}

fn worst(cs: &[(String, f64, bool)]) -> f64 {
    cs.iter().map(|c| c.1).fold(0.0, f64::max)
}

#[test]
fn criterion_01_bateman_pde() {
    let r = run(&["verify", "--suite", "bateman-pde", "--seed", "7", "--n", "1000"]);
    let cs = cases(&r);
    let labels: Vec<&str> = cs.iter().map(|c| c.0.as_str()).collect();
    verdict(
        1,
        "Bateman PDE residual",
        &[
            ("both variants", labels == ["hopf", "tilde"]),
            ("residual <= 1e-10", cs.iter().all(|c| c.1 <= 1e-10)),
            ("exit 0", r.code == 0),
            ("runtime < 1 s", r.elapsed.as_secs_f64() < 1.0),
        ],
        format!("max {:.2e}, {:.2} s", worst(&cs), r.elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_02_sphere_constraint() {
    let r = run(&["verify", "--suite", "sphere", "--seed", "7", "--n", "1000"]);
    let cs = cases(&r);
    verdict(
        2,
        "sphere constraint",
        &[
            ("two variants", cs.len() == 2),
            ("defect <= 1e-12", cs.iter().all(|c| c.1 <= 1e-12)),
            ("exit 0", r.code == 0),
        ],
        format!("max {:.2e}", worst(&cs)),
    );
}

#[test]
fn criterion_03_nullness() {
    let r = run(&["verify", "--suite", "null", "--seed", "7", "--n", "1000", "--times", "0,0.5,1"]);
    let cs = cases(&r);
    let has = |g: &str| cs.iter().filter(|c| c.0.starts_with(&format!("{g} "))).count() == 3;
    let battery = ["1", "z1", "6*z1*z2^2", "exp(z1*z2)", "zb1*zb2"].iter().all(|g| has(g));
    let anti = cs.iter().any(|c| c.0.starts_with("zb1*zb2") && c.0.contains("antiholomorphic"));
    verdict(
        3,
        "nullness",
        &[
            ("battery at three times", battery && anti),
            ("relative defect <= 1e-9", cs.iter().all(|c| c.1 <= 1e-9)),
            ("exit 0", r.code == 0),
            ("runtime < 5 s", r.elapsed.as_secs_f64() < 5.0),
        ],
        format!("{} cases, max {:.2e}, {:.2} s", cs.len(), worst(&cs), r.elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_04_maxwell() {
    let r = run(&["verify", "--suite", "maxwell", "--seed", "7", "--n", "100", "--fd-step", "1e-3"]);
    let cs = cases(&r);
    verdict(
        4,
        "Maxwell residuals",
        &[
            ("five generators", cs.len() == 5),
            ("residual <= 1e-6 (1+|F|)", cs.iter().all(|c| c.1 <= 1e-6)),
            ("exit 0", r.code == 0),
            ("runtime < 10 s", r.elapsed.as_secs_f64() < 10.0),
        ],
        format!("max {:.2e}, {:.2} s", worst(&cs), r.elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_05_divergence() {
    let r = run(&["verify", "--suite", "divergence", "--seed", "7", "--n", "200"]);
    let cs = cases(&r);
    let labels: Vec<&str> = cs.iter().map(|c| c.0.as_str()).collect();
    verdict(
        5,
        "divergence identities",
        &[
            ("holomorphic battery and zb1", labels == ["1", "z1", "6*z1*z2^2", "exp(z1*z2)", "zb1"]),
            ("defect <= 1e-12", cs.iter().all(|c| c.1 <= 1e-12)),
            ("exit 0", r.code == 0),
        ],
        format!("max {:.2e}", worst(&cs)),
    );
}

#[test]
fn criterion_06_round_trip() {
    let r = run(&["verify", "--suite", "round-trip", "--seed", "7", "--n", "1000"]);
    let cs = cases(&r);
    verdict(
        6,
        "stereographic round trip",
        &[("defect <= 1e-12", cs.iter().all(|c| c.1 <= 1e-12)), ("exit 0", r.code == 0)],
        format!("max {:.2e}", worst(&cs)),
    );
}

#[test]
fn criterion_07_torus_orbit() {
    let dir = scratch("torus");
    let r = run_in(
        &dir,
        &[
            "trace",
            "--field",
            "torus",
            "--start-a",
            "0.4",
            "--tau",
            "32",
            "--closure",
            "--windings",
            "--rotation",
            "--out",
            "torus.csv",
        ],
    );
    let v = &r.report;
    let period = num(v, "period");
    let drift = num(&v["drift"], "abs2_z1").max(num(&v["drift"], "abs2_z2"));
    let windings: Vec<i64> = v["windings"].as_array().unwrap().iter().map(|w| w.as_i64().unwrap()).collect();
    let rotation = v["rotation_number"].as_i64().unwrap();
    verdict(
        7,
        "torus field (2,3) orbit",
        &[
            ("period 10π ± 1e-7", (period - 10.0 * PI).abs() <= 1e-7),
            ("|z|² drift <= 1e-9", drift <= 1e-9),
            ("windings (-2, 3)", windings == [-2, 3]),
            ("rotation number 0", rotation == 0),
            ("runtime < 5 s", r.elapsed.as_secs_f64() < 5.0),
        ],
        format!(
            "period error {:.2e}, drift {drift:.2e}, windings {windings:?}, rotation number {rotation}, {:.2} s",
            (period - 10.0 * PI).abs(),
            r.elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_08_first_integrals() {
    let dir = scratch("integrals");
    let start = "0.5,0.3,0.6,-0.2";
    let base = [
        "trace",
        "--field",
        "legendrian",
        "--generator",
        "6*z1*z2^2",
        "--start",
        start,
        "--tau",
        "20",
        "--potential",
        "knot:2,3",
    ];
    let drift = |pol: &str, out: &str| {
        let mut args = base.to_vec();
        args.extend(["--polarity", pol, "--out", out]);
        let r = run_in(&dir, &args);
        assert_eq!(r.code, 0);
        let d = &r.report["potential_drift"];
        (num(d, "re"), num(d, "im"))
    };
    let (_, im_e) = drift("e", "e.csv");
    let (re_b, _) = drift("b", "b.csv");
    verdict(
        8,
        "first integrals of the (2,3) field",
        &[("Im drift on E-lines <= 1e-8", im_e <= 1e-8), ("Re drift on B-lines <= 1e-8", re_b <= 1e-8)],
        format!("Im on E {im_e:.2e}, Re on B {re_b:.2e}"),
    );
}

#[test]
fn criterion_09_seifert() {
    let dir = scratch("seifert");
    let r = run_in(&dir, &["seifert", "--seed", "7", "--n", "100", "--out", "seifert.csv"]);
    let cs = cases(&r);
    let form = cs.iter().filter(|c| c.0.starts_with("alpha")).map(|c| c.1).fold(0.0, f64::max);
    let vol = cs.iter().filter(|c| c.0.starts_with("volume")).map(|c| c.1).fold(0.0, f64::max);
    let pairs = ["(1,1)", "(2,3)", "(3,5)"].iter().all(|p| cs.iter().filter(|c| c.0.ends_with(p)).count() == 2);
    verdict(
        9,
        "Seifert contact forms",
        &[
            ("three (p,q) pairs", pairs),
            ("α(X) <= 1e-12", form <= 1e-12),
            ("volume ratio within 1e-6", vol <= 1e-6),
            ("exit 0", r.code == 0),
        ],
        format!("α(X) {form:.2e}, ratio {vol:.2e}"),
    );
}

#[test]
fn criterion_10_rotation_numbers() {
    let mut got = Vec::new();
    for k in -2..=2 {
        let r = run(&["rotation", "--synthetic", &k.to_string()]);
        got.push((k, r.report["rotation_number"].as_i64().unwrap()));
    }
    let dir = scratch("rotation");
    let s = FRAC_1_SQRT_2;
    let unknot = Curve::<f64, 4>::sample_periodic(
        TAU,
        256,
        |t: f64| [s * t.cos(), s * t.sin(), s * t.cos(), -s * t.sin()],
        None::<fn(f64) -> [f64; 4]>,
    )
    .unwrap();
    write_curve_csv(fs::File::create(dir.join("unknot.csv")).unwrap(), &unknot).unwrap();
    let r = run_in(&dir, &["rotation", "--from-curve", "unknot.csv"]);
    let tt = r.report["rotation_number"].as_i64().unwrap();
    verdict(
        10,
        "rotation numbers",
        &[("winding-k loops give k", got.iter().all(|(k, r)| k == r)), ("tt-unknot gives 0", tt == 0)],
        format!("synthetic {got:?}, tt-unknot {tt}"),
    );
}

#[test]
fn criterion_11_linking() {
    let start = Instant::now();
    let link = |preset: &str| {
        let r = run(&["link", "--preset", preset]);
        (num(&r.report, "integral"), r.report["number"].as_i64().unwrap())
    };
    let (hi, hn) = link("hopf-pair");
    let (fi, f_n) = link("hopf-fibers");
    let (si, sn) = link("split");
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        11,
        "linking numbers",
        &[
            ("Hopf pair ±1", hn.abs() == 1 && (hi - hn as f64).abs() <= 1e-3),
            ("Hopf fibers |lk| = 1", f_n.abs() == 1 && (fi - f_n as f64).abs() <= 1e-3),
            ("split pair 0", sn == 0 && si.abs() <= 1e-3),
            ("runtime < 5 s", elapsed < 5.0),
        ],
        format!("Hopf pair {hi:.6}, fibers {fi:.6}, split {si:.1e}, {elapsed:.2} s"),
    );
}

#[test]
fn criterion_12_floquet() {
    let mut dev = 0f64;
    let mut det = 0f64;
    for w in ["0.5", "1", "1.3", "2", "3.7"] {
        let r = run(&["monodromy", "--omega", w]);
        dev = dev.max(num(&r.report, "deviation"));
        det = det.max((num(&r.report, "det") - 1.0).abs());
    }
    let hopf = run(&["monodromy", "--field", "legendrian", "--generator", "1", "--start", "0.6,0,0.8,0"]);
    let m = &hopf.report["matrix"];
    let id_dev = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (m[i][j].as_f64().unwrap() - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let torus = run(&["monodromy", "--field", "torus", "--start-a", "0.4", "--tau", "34"]);
    let mult_dev = torus.report["multipliers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| (z[0].as_f64().unwrap() - 1.0).abs().max(z[1].as_f64().unwrap().abs()))
        .fold(0.0, f64::max);
    verdict(
        12,
        "monodromy",
        &[
            ("closed form within 1e-9", dev <= 1e-9),
            ("det within 1e-9", det <= 1e-9),
            ("Hopf orbit identity within 1e-6", id_dev <= 1e-6),
            ("torus multipliers (1,1) within 1e-6", mult_dev <= 1e-6),
        ],
        format!("closed form {dev:.2e}, det {det:.2e}, Hopf {id_dev:.2e}, torus {mult_dev:.2e}"),
    );
}

#[test]
fn criterion_13_diophantine() {
    let check = |w: &str| {
        let r = run(&["diophantine", "--w", w, "--gamma", "0.2", "--tau", "2.5", "--q-max", "10000"]);
        (r.code, r.report["verdict"].clone(), r.elapsed.as_secs_f64())
    };
    let (gc, g, gt) = check("golden");
    let (sc, s, st) = check("silver");
    let (fc, f, ft) = check("3/7");
    let fail_q = f["first_failure"][1].as_u64();
    verdict(
        13,
        "Diophantine check",
        &[
            ("golden mean passes", gc == 0 && g["pass"] == true),
            ("√2-1 passes", sc == 0 && s["pass"] == true),
            ("3/7 fails at q = 7", fc == 1 && f["pass"] == false && fail_q == Some(7)),
            ("runtime < 1 s", gt.max(st).max(ft) < 1.0),
        ],
        format!(
            "margins {:.3} and {:.3}, 3/7 first failure {}",
            num(&g, "worst_ratio"),
            num(&s, "worst_ratio"),
            f["first_failure"]
        ),
    );
}

#[test]
fn criterion_14_topology_stability() {
    for preset in ["hopfion", "torus-knot"] {
        let r = run(&["transport-check", "--preset", preset, "--t1", "0.5"]);
        let v = &r.report;
        let tangency = v["tangency"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).fold(0.0, f64::max);
        let closure = v["closure_gap"]
            .as_array()
            .unwrap()
            .iter()
            .chain(v["e_line_return"].as_array().unwrap())
            .map(|x| x.as_f64().unwrap())
            .fold(0.0, f64::max);
        let (before, after) = (v["linking_before"].as_i64().unwrap(), v["linking_after"].as_i64().unwrap());
        verdict(
            14,
            &format!("{preset} transport"),
            &[
                ("tangency <= 1e-3", tangency <= 1e-3),
                ("closed within 1e-6", closure <= 1e-6),
                ("linking preserved", before == after && before != 0),
                ("exit 0", r.code == 0),
                ("runtime < 60 s", r.elapsed.as_secs_f64() < 60.0),
            ],
            format!(
                "tangency {tangency:.2e}, closure {closure:.2e}, linking {before} -> {after}, {:.2} s",
                r.elapsed.as_secs_f64()
            ),
        );
    }
}

#[test]
fn criterion_15_tt_link() {
    let r = run(&["verify", "--suite", "tt-link"]);
    let cs = cases(&r);
    verdict(
        15,
        "tt-link defects",
        &[("(1,1) and (2,3)", cs.len() == 4), ("defect <= 1e-8", cs.iter().all(|c| c.1 <= 1e-8))],
        format!("max {:.2e}", worst(&cs)),
    );
}

#[test]
fn criterion_16_determinism() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["verify", "--suite", "null"],
        vec!["verify", "--suite", "maxwell"],
        vec!["verify", "--suite", "bateman-pde"],
        vec!["verify", "--suite", "sphere"],
        vec!["verify", "--suite", "divergence"],
        vec!["verify", "--suite", "seifert"],
        vec!["verify", "--suite", "sphere-pushforward"],
        vec!["verify", "--suite", "round-trip"],
        vec!["verify", "--suite", "tt-link"],
        vec!["seifert"],
        vec!["trace", "--field", "torus", "--start-a", "0.4", "--tau", "32", "--closure"],
        vec!["transport-check", "--preset", "hopfion"],
    ];
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    let mut differing = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let out = format!("run{i}.csv");
        let mut full = args.clone();
        full.extend(["--seed", "11", "--out", &out]);
        let (ra, rb) = (run_in(&a, &full), run_in(&b, &full));
        let same = |name: &str| fs::read(a.join(name)).unwrap() == fs::read(b.join(name)).unwrap();
        if !(ra.report == rb.report && same(&out) && same(&format!("{out}.json"))) {
            differing.push(args.join(" "));
        }
    }
    verdict(
        16,
        "determinism",
        &[("byte-identical CSV and JSON", differing.is_empty())],
        format!("{} runs compared, differing: {differing:?}", runs.len()),
    );
}
