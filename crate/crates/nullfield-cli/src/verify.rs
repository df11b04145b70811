//! Residual suites behind `verify` and `seifert`.

use nullfield::bateman::{
    bateman_pde_residual, em_sample, maxwell_residual, null_defect, sphere_pushforward_check, variables, BatemanField,
    Mode, Variant,
};
use nullfield::funcspace::Generator;
use nullfield::geom::{hopf_coords, stereo_lift, stereo_project, R3Point, S3Point};
use nullfield::legendrian::{
    contact_volume_expected, contact_volume_ratio, divergence_identities, seifert_field, seifert_form,
    torus_knot_curve, torus_knot_potential, tt_link_defect, SeifertSpec,
};
use nullfield::rng::SplitMix64;
use nullfield::vector::dot;
use serde_json::{json, Value};

use crate::args::{SeifertArgs, VerifyArgs};
use crate::io::{config_err, emit_report, emit_table, report, Cell, CliResult};

pub const DEFAULT_SEED: u64 = 7;

/// Defects of one suite case against its threshold.
pub struct Case {
    pub label: String,
    pub tol: f64,
    pub defects: Vec<f64>,
}

impl Case {
    fn new(label: impl Into<String>, tol: f64) -> Self {
        Self { label: label.into(), tol, defects: Vec::new() }
    }

    fn max(&self) -> f64 {
        self.defects.iter().fold(0.0, |a, &d| if d.is_nan() { f64::NAN } else { a.max(d) })
    }

    fn pass(&self) -> bool {
        let m = self.max();
        !self.defects.is_empty() && m.is_finite() && m <= self.tol
    }

    fn summary(&self) -> Value {
        let n = self.defects.len();
        let mean = if n == 0 { 0.0 } else { self.defects.iter().sum::<f64>() / n as f64 };
        json!({
            "case": self.label,
            "samples": n,
            "tol": self.tol,
            "max": self.max(),
            "mean": mean,
            "pass": self.pass(),
        })
    }
}

fn battery(args: &VerifyArgs, default: &[(&str, Mode)]) -> CliResult<Vec<(String, Mode)>> {
    let mode = match &args.mode {
        Some(m) => Some(m.parse::<Mode>()?),
        None => None,
    };
    Ok(match &args.generator {
        Some(gs) => gs.iter().map(|g| (g.clone(), mode.unwrap_or(Mode::Direct))).collect(),
        None => default.iter().map(|(g, m)| (g.to_string(), mode.unwrap_or(*m))).collect(),
    })
}

fn variants(args: &VerifyArgs, default_both: bool) -> CliResult<Vec<Variant>> {
    match args.variant.as_deref() {
        None if default_both => Ok(vec![Variant::Hopf, Variant::Tilde]),
        None => Ok(vec![Variant::Hopf]),
        Some("both") => Ok(vec![Variant::Hopf, Variant::Tilde]),
        Some(v) => Ok(vec![v.parse()?]),
    }
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Hopf => "hopf",
        Variant::Tilde => "tilde",
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Direct => "direct",
        Mode::Antiholomorphic => "antiholomorphic",
    }
}

const FIELD_BATTERY: [(&str, Mode); 5] = [
    ("1", Mode::Direct),
    ("z1", Mode::Direct),
    ("6*z1*z2^2", Mode::Direct),
    ("exp(z1*z2)", Mode::Direct),
    ("zb1*zb2", Mode::Antiholomorphic),
];

fn fields(args: &VerifyArgs) -> CliResult<Vec<(String, BatemanField<f64>)>> {
    let vs = variants(args, false)?;
    let mut out = Vec::new();
    for (g, m) in &battery(args, &FIELD_BATTERY)? {
        for &v in &vs {
            let f = BatemanField::new(Generator::parse(g)?, v, *m)?;
            out.push((format!("{g} {} {}", variant_name(v), mode_name(*m)), f));
        }
    }
    Ok(out)
}

pub fn run_verify(args: &VerifyArgs) -> CliResult<bool> {
    let Some(suite) = args.suite.clone() else {
        return config_err("verify needs --suite");
    };
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let mut rng = SplitMix64::new(seed);
    let times = args.times.clone().unwrap_or_else(|| vec![0.0, 0.5, 1.0]);
    let mut cases = Vec::new();
    match suite.as_str() {
        "null" => {
            let n = args.n.unwrap_or(1000);
            let tol = args.tol.unwrap_or(1e-9);
            for (label, f) in fields(args)? {
                for &t in &times {
                    let mut c = Case::new(format!("{label} t={t}"), tol);
                    for _ in 0..n {
                        let x: [f64; 3] = std::array::from_fn(|_| rng.uniform(-2.0, 2.0));
                        let fv = f.eval_at(&x, t);
                        let w2 = 2.0 * em_sample(&fv).w;
                        let (eb, diff) = null_defect(&fv);
                        c.defects.push(if w2 > 0.0 { eb.abs().max(diff.abs()) / w2 } else { 0.0 });
                    }
                    cases.push(c);
                }
            }
        }
        "maxwell" => {
            let n = args.n.unwrap_or(100);
            let tol = args.tol.unwrap_or(1e-6);
            let h = args.fd_step.unwrap_or(1e-3);
            for (label, f) in fields(args)? {
                let mut c = Case::new(label, tol);
                for _ in 0..n {
                    let p = rng.spacetime_point(2.0, -1.0, 1.0);
                    let r = maxwell_residual(&f, &p, h)?;
                    c.defects.push(r.max_norm() / (1.0 + f.eval(&p).norm()));
                }
                cases.push(c);
            }
        }
        "bateman-pde" | "sphere" => {
            let n = args.n.unwrap_or(1000);
            let pde = suite == "bateman-pde";
            let tol = args.tol.unwrap_or(if pde { 1e-10 } else { 1e-12 });
            for v in variants(args, true)? {
                let mut c = Case::new(variant_name(v), tol);
                for _ in 0..n {
                    let p = rng.spacetime_point(2.0, -1.0, 1.0);
                    c.defects.push(if pde {
                        bateman_pde_residual(&p, v).iter().map(|z| z.norm()).fold(0.0, f64::max)
                    } else {
                        let j = variables(&p, v);
                        (j.alpha.norm_sqr() + j.beta.norm_sqr() - 1.0).abs()
                    });
                }
                cases.push(c);
            }
        }
        "divergence" => {
            let n = args.n.unwrap_or(200);
            let tol = args.tol.unwrap_or(1e-12);
            let gens = args.generator.clone().unwrap_or_else(|| {
                ["1", "z1", "6*z1*z2^2", "exp(z1*z2)", "zb1"].iter().map(|s| s.to_string()).collect()
            });
            for g in gens {
                let theta = Generator::parse(&g)?;
                let mut c = Case::new(g, tol);
                for _ in 0..n {
                    let p: S3Point<f64> = rng.s3_point();
                    let d = divergence_identities(&theta, &p);
                    c.defects.push((d.div_e - d.lbar_re2).abs().max((d.div_b - d.lbar_im2).abs()));
                }
                cases.push(c);
            }
        }
        "seifert" => {
            let specs = seifert_specs(args.p, args.q)?;
            let n = args.n.unwrap_or(100);
            for s in specs {
                let (form, volume, _) = seifert_cases(&s, n, args.fd_step.unwrap_or(1e-5), &mut rng, args.tol)?;
                cases.push(form);
                cases.push(volume);
            }
        }
        "sphere-pushforward" => {
            let n = args.n.unwrap_or(200);
            let tol = args.tol.unwrap_or(1e-6);
            let gens = args
                .generator
                .clone()
                .unwrap_or_else(|| ["1", "z1", "6*z1*z2^2"].iter().map(|s| s.to_string()).collect());
            for g in gens {
                let h = Generator::parse(&g)?;
                for &t in &times {
                    let mut c = Case::new(format!("{g} t={t}"), tol);
                    while c.defects.len() < n {
                        let s: S3Point<f64> = rng.s3_point();
                        if s.coords()[0] > 0.95 || h.eval(s.z1(), s.z2()).norm() < 1e-3 {
                            continue;
                        }
                        c.defects.push(sphere_pushforward_check(&h, t, &s).unwrap_or(f64::INFINITY));
                    }
                    cases.push(c);
                }
            }
        }
        "round-trip" => {
            let n = args.n.unwrap_or(1000);
            let mut c = Case::new("stereo_project(stereo_lift(q))", args.tol.unwrap_or(1e-12));
            for _ in 0..n {
                let q: [f64; 3] = rng.ball_point(10.0);
                let back = stereo_project(&stereo_lift(&R3Point::Finite(q))).finite();
                c.defects.push(match back {
                    Some(b) => (0..3).map(|k| (b[k] - q[k]).abs()).fold(0.0, f64::max),
                    None => f64::INFINITY,
                });
            }
            cases.push(c);
        }
        "tt-link" => {
            let pairs = match (args.p, args.q) {
                (Some(p), Some(q)) => vec![(p, q)],
                (None, None) => vec![(1, 1), (2, 3)],
                _ => return config_err("give both --p and --q, or neither"),
            };
            let n = args.n.unwrap_or(400);
            for (p, q) in pairs {
                let g = torus_knot_potential::<f64>(p, q);
                let (value, gradient) = tt_link_defect(&g, &torus_knot_curve(p, q, 0.0, n)?)?;
                let tol = args.tol.unwrap_or(1e-8);
                for (label, d) in [("|G|", value), ("contact part of grad Re G", gradient)] {
                    let mut c = Case::new(format!("{label} ({p},{q})"), tol);
                    c.defects.push(d);
                    cases.push(c);
                }
            }
        }
        other => return config_err(format!("unknown suite '{other}'")),
    }
    finish("verify", args, &cases, args.out.as_deref())
}

fn seifert_specs(p: Option<u32>, q: Option<u32>) -> CliResult<Vec<SeifertSpec>> {
    match (p, q) {
        (Some(p), Some(q)) => Ok(vec![SeifertSpec::new(p, q)?]),
        (None, None) => Ok(vec![SeifertSpec::new(1, 1)?, SeifertSpec::new(2, 3)?, SeifertSpec::new(3, 5)?]),
        _ => config_err("give both --p and --q, or neither"),
    }
}

/// `α(X)` and volume-ratio cases, with rows `(p, q, s, φ1, φ2, α(X), ratio, expected)`.
fn seifert_cases(
    s: &SeifertSpec,
    n: usize,
    fd_step: f64,
    rng: &mut SplitMix64,
    tol: Option<f64>,
) -> CliResult<(Case, Case, Vec<Vec<Cell>>)> {
    let label = format!("({},{})", s.p(), s.q());
    let mut form = Case::new(format!("alpha(X) {label}"), tol.unwrap_or(1e-12));
    let mut volume = Case::new(format!("volume ratio {label}"), tol.map(|t| t.max(1e-6)).unwrap_or(1e-6));
    let mut rows = Vec::new();
    for _ in 0..n {
        let p: S3Point<f64> = rng.s3_point();
        form.defects.push(dot(&seifert_form(s, &p), &seifert_field(s, &p.coords())).abs());
        let b: S3Point<f64> = rng.s3_point_in_band(0.05, std::f64::consts::FRAC_PI_2 - 0.05);
        let h = hopf_coords(&b);
        let ratio = contact_volume_ratio(s, &b, fd_step)?;
        let expected = contact_volume_expected(s, h.s);
        volume.defects.push((ratio - expected).abs());
        rows.push(vec![
            Cell::Int(s.p() as i64),
            Cell::Int(s.q() as i64),
            Cell::Num(h.s),
            Cell::Num(h.phi1),
            Cell::Num(h.phi2),
            Cell::Num(*form.defects.last().unwrap()),
            Cell::Num(ratio),
            Cell::Num(expected),
        ]);
    }
    Ok((form, volume, rows))
}

pub fn run_seifert(args: &SeifertArgs) -> CliResult<bool> {
    let specs = seifert_specs(args.p, args.q)?;
    let mut rng = SplitMix64::new(args.seed.unwrap_or(DEFAULT_SEED));
    let n = args.n.unwrap_or(100);
    let mut cases = Vec::new();
    let mut rows = Vec::new();
    for s in specs {
        let (form, volume, r) = seifert_cases(&s, n, args.fd_step.unwrap_or(1e-5), &mut rng, None)?;
        cases.push(form);
        cases.push(volume);
        rows.extend(r);
    }
    if let Some(out) = &args.out {
        emit_table(out, &["p", "q", "s", "phi1", "phi2", "alpha_x", "ratio", "expected"], &rows)?;
    }
    let pass = cases.iter().all(Case::pass);
    let body = json!({ "cases": cases.iter().map(Case::summary).collect::<Vec<_>>(), "pass": pass });
    emit_report(args.out.as_deref(), &report("seifert", args, body)?)?;
    Ok(pass)
}

fn finish(command: &str, args: &VerifyArgs, cases: &[Case], out: Option<&std::path::Path>) -> CliResult<bool> {
    if let Some(out) = out {
        let mut rows = Vec::new();
        for c in cases {
            for (i, d) in c.defects.iter().enumerate() {
                rows.push(vec![Cell::Text(c.label.clone()), Cell::Int(i as i64), Cell::Num(*d)]);
            }
        }
        emit_table(out, &["case", "index", "defect"], &rows)?;
    }
    let pass = cases.iter().all(Case::pass);
    let body = json!({
        "suite": args.suite,
        "seed": args.seed.unwrap_or(DEFAULT_SEED),
        "cases": cases.iter().map(Case::summary).collect::<Vec<_>>(),
        "pass": pass,
    });
    emit_report(out, &report(command, args, body)?)?;
    Ok(pass)
}
