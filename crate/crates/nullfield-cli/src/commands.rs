//! `trace`, `rotation`, `link`, `monodromy`, `diophantine` and
//! `transport-check`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};
use std::path::Path;

use nullfield::bateman::{BatemanField, Mode, Variant};
use nullfield::evolve::{
    e_line_return, hopfion_e_line, project_curve, tangency_at_time, torus_knot_e_line, transport_curve, TransportSpec,
};
use nullfield::floquet::{analytic_monodromy, diophantine_check, monodromy, orbit_monodromy, MonodromyReport, NveSpec};
use nullfield::flow::{
    closed_orbit_curve, detect_closure, integral_drift, linking_integral, linking_number, phase_windings,
    read_curve_csv, trace, Curve, CurveCsv, SpaceField, SpaceKind, SphereField, TraceSpec, Trajectory, VectorField,
};
use nullfield::funcspace::{Generator, MixedPoly};
use nullfield::geom::{frame_at, S3Point};
use nullfield::legendrian::{rotation_number, torus_knot_potential, LegendrianField, Polarity, SeifertSpec};
use nullfield::ode::OdeOptions;
use num_complex::Complex;
use serde_json::{json, Map, Value};

use crate::args::{DiophantineArgs, LinkArgs, MonodromyArgs, RotationArgs, TraceArgs, TransportCheckArgs};
use crate::io::{config_err, emit_curve, emit_report, emit_table, read_text, report, Cell, CliError, CliResult};

const CLOSURE_TOL: f64 = 1e-6;
const TRACE_TOL: f64 = 1e-12;
const ORBIT_SAMPLES: usize = 256;

fn generator(g: &Option<String>) -> CliResult<Generator<f64>> {
    Ok(Generator::parse(g.as_deref().unwrap_or("1"))?)
}

fn sphere_field(
    kind: &str,
    gen: &Option<String>,
    polarity: &Option<String>,
    p: Option<u32>,
    q: Option<u32>,
) -> CliResult<SphereField<f64>> {
    match kind {
        "legendrian" => {
            let pol: Polarity = polarity.as_deref().unwrap_or("e").parse()?;
            Ok(SphereField::Legendrian(LegendrianField::new(generator(gen)?, pol)))
        }
        "torus" => Ok(SphereField::Torus),
        "seifert" => Ok(SphereField::Seifert(SeifertSpec::new(p.unwrap_or(1), q.unwrap_or(1))?)),
        other => config_err(format!("'{other}' is not a field on S³")),
    }
}

fn s3_start(start: &Option<Vec<f64>>, start_a: Option<f64>) -> CliResult<[f64; 4]> {
    match (start, start_a) {
        (Some(_), Some(_)) => config_err("give --start or --start-a, not both"),
        (Some(v), None) if v.len() == 4 => Ok(S3Point::new([v[0], v[1], v[2], v[3]])?.coords()),
        (Some(v), None) => config_err(format!("S³ start needs four coordinates, got {}", v.len())),
        (None, Some(a)) if (0.0..=1.0).contains(&a) => Ok([(1.0 - a).sqrt(), 0.0, a.sqrt(), 0.0]),
        (None, Some(a)) => config_err(format!("--start-a {a} must lie in [0, 1]")),
        (None, None) => Ok([1.0, 0.0, 0.0, 0.0]),
    }
}

fn trace_spec<F, const D: usize>(field: F, start: [f64; D], tau: f64, tol: Option<f64>) -> TraceSpec<f64, F, D> {
    let mut spec = TraceSpec::new(field, start, tau);
    spec.options = OdeOptions::with_tol(tol.unwrap_or(TRACE_TOL));
    spec
}

fn closed_orbit<F: VectorField<f64, D>, const D: usize>(
    traj: &Trajectory<f64, D>,
    field: &F,
    ctol: f64,
    samples: usize,
) -> CliResult<Curve<f64, D>> {
    let period = detect_closure(traj, ctol)
        .ok_or_else(|| CliError::Run(format!("no return within {ctol:e} over the traced span")))?;
    Ok(closed_orbit_curve(traj, field, period, samples)?)
}

fn potential(spec: &str) -> CliResult<MixedPoly<f64>> {
    if let Some(pq) = spec.strip_prefix("knot:") {
        let v: Vec<u32> = pq
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Config(format!("{spec}: {e}")))?;
        return match v[..] {
            [p, q] if p > 0 && q > 0 => Ok(torus_knot_potential(p, q)),
            _ => config_err(format!("{spec}: expected knot:p,q")),
        };
    }
    match Generator::<f64>::parse(spec)?.as_poly() {
        Some(p) => Ok(p.clone()),
        None => config_err(format!("potential '{spec}' must be a polynomial")),
    }
}

fn read_r3(path: &Path) -> CliResult<Curve<f64, 3>> {
    match read_curve_csv(read_text(path)?, 1e-9)? {
        CurveCsv::R3(c) if c.closed => Ok(c),
        CurveCsv::R3(_) => config_err(format!("{}: curve is not closed", path.display())),
        CurveCsv::S3(_) => config_err(format!("{}: expected an R³ curve", path.display())),
    }
}

fn read_s3(path: &Path) -> CliResult<Curve<f64, 4>> {
    match read_curve_csv(read_text(path)?, 1e-9)? {
        CurveCsv::S3(c) if c.closed => Ok(c),
        CurveCsv::S3(_) => config_err(format!("{}: curve is not closed", path.display())),
        CurveCsv::R3(_) => config_err(format!("{}: expected an S³ curve", path.display())),
    }
}

pub fn run_trace(args: &TraceArgs) -> CliResult<bool> {
    if let Some(path) = &args.from_curve {
        return run_transport(args, path);
    }
    let kind = args.field.clone().unwrap_or_else(|| "legendrian".into());
    let tau = args.tau.unwrap_or(TAU);
    let ctol = args.closure_tol.unwrap_or(CLOSURE_TOL);
    let samples = args.samples.unwrap_or(ORBIT_SAMPLES);
    let mut body = Map::new();
    match kind.as_str() {
        "legendrian" | "torus" | "seifert" => {
            let field = sphere_field(&kind, &args.generator, &args.polarity, args.p, args.q)?;
            let start = s3_start(&args.start, args.start_a)?;
            let traj = trace(&trace_spec(field.clone(), start, tau, args.tol))?;
            let raw = traj.curve();
            body.insert("start".into(), json!(start));
            body.insert("steps".into(), json!(raw.len()));
            body.insert("renormalization".into(), json!(traj.renormalization));
            let abs2 = |x: &[f64; 4], k: usize| x[2 * k] * x[2 * k] + x[2 * k + 1] * x[2 * k + 1];
            body.insert(
                "drift".into(),
                json!({
                    "abs2_z1": integral_drift(&raw, |x| abs2(x, 0)),
                    "abs2_z2": integral_drift(&raw, |x| abs2(x, 1)),
                }),
            );
            if let Some(spec) = &args.potential {
                let g = potential(spec)?;
                let val = |x: &[f64; 4]| g.eval(Complex::new(x[0], x[1]), Complex::new(x[2], x[3]));
                body.insert(
                    "potential_drift".into(),
                    json!({ "re": integral_drift(&raw, |x| val(x).re), "im": integral_drift(&raw, |x| val(x).im) }),
                );
            }
            if !(args.closure || args.windings || args.rotation || args.link_with.is_some()) {
                emit_curve(args.out.as_deref(), &raw)?;
                return finish_trace(args, body);
            }
            let orbit = closed_orbit(&traj, &field, ctol, samples)?;
            body.insert("period".into(), json!(orbit.period()));
            if args.windings {
                let (a, b) = phase_windings(&orbit)?;
                body.insert("windings".into(), json!([a, b]));
            }
            if args.rotation {
                body.insert("rotation_number".into(), json!(rotation_number(&orbit)?));
            }
            if let Some(path) = &args.link_with {
                let other = read_r3(path)?;
                let mine = project_curve(&orbit)?;
                body.insert("linking".into(), link_json(&mine, &other)?);
            }
            emit_curve(args.out.as_deref(), &orbit)?;
        }
        "electric" | "magnetic" | "poynting" => {
            let variant: Variant = args.variant.as_deref().unwrap_or("hopf").parse()?;
            let mode: Mode = args.mode.as_deref().unwrap_or("direct").parse()?;
            let bf = BatemanField::new(generator(&args.generator)?, variant, mode)?;
            let space_kind = match kind.as_str() {
                "electric" => SpaceKind::Electric,
                "magnetic" => SpaceKind::Magnetic,
                _ => SpaceKind::Poynting,
            };
            let field = SpaceField { field: bf, t: args.t.unwrap_or(0.0), kind: space_kind };
            let start = match &args.start {
                Some(v) if v.len() == 3 => [v[0], v[1], v[2]],
                Some(v) => return config_err(format!("R³ start needs three coordinates, got {}", v.len())),
                None => return config_err("R³ fields need --start x,y,z"),
            };
            let mut spec = trace_spec(field.clone(), start, tau, args.tol);
            spec.bound = Some(args.bound.unwrap_or(1e3));
            let traj = trace(&spec)?;
            body.insert("start".into(), json!(start));
            body.insert("steps".into(), json!(traj.solution.t.len()));
            if !(args.closure || args.link_with.is_some()) {
                emit_curve(args.out.as_deref(), &traj.curve())?;
                return finish_trace(args, body);
            }
            let orbit = closed_orbit(&traj, &field, ctol, samples)?;
            body.insert("period".into(), json!(orbit.period()));
            if let Some(path) = &args.link_with {
                body.insert("linking".into(), link_json(&orbit, &read_r3(path)?)?);
            }
            emit_curve(args.out.as_deref(), &orbit)?;
        }
        other => return config_err(format!("unknown field '{other}'")),
    }
    finish_trace(args, body)
}

fn finish_trace(args: &TraceArgs, body: Map<String, Value>) -> CliResult<bool> {
    let v = report("trace", args, Value::Object(body))?;
    // the CSV may occupy stdout
    match &args.out {
        Some(_) => emit_report(args.out.as_deref(), &v)?,
        None => eprint!("{}", crate::io::json_text(&v)),
    }
    Ok(true)
}

fn run_transport(args: &TraceArgs, path: &Path) -> CliResult<bool> {
    let Some(t1) = args.transport_to else {
        return config_err("--from-curve needs --transport-to");
    };
    let variant: Variant = args.variant.as_deref().unwrap_or("hopf").parse()?;
    let mode: Mode = args.mode.as_deref().unwrap_or("direct").parse()?;
    let field = BatemanField::new(generator(&args.generator)?, variant, mode)?;
    let t0 = args.t.unwrap_or(0.0);
    let curve = read_r3(path)?.with_fd_tangents()?;
    let mut spec = TransportSpec::new(field.clone(), t0, t1);
    if let Some(tol) = args.tol {
        spec.options = OdeOptions { max_step: 0.05, ..OdeOptions::with_tol(tol) };
    }
    let moved = transport_curve(&spec, &curve)?;
    let mut body = Map::new();
    body.insert("t0".into(), json!(t0));
    body.insert("t1".into(), json!(t1));
    body.insert("tangency_before".into(), json!(tangency_at_time(&field, &curve, t0)?));
    body.insert("tangency_after".into(), json!(tangency_at_time(&field, &moved, t1)?));
    body.insert("closure_gap".into(), json!(moved.closure_gap()));
    body.insert("e_line_return".into(), json!(e_line_return(&field, &moved, t1)?));
    emit_curve(args.out.as_deref(), &moved)?;
    finish_trace(args, body)
}

fn link_json(a: &Curve<f64, 3>, b: &Curve<f64, 3>) -> CliResult<Value> {
    Ok(json!({ "integral": linking_integral(a, b)?, "number": linking_number(a, b)? }))
}

/// Tangents turning `k` times against `(v1, v2)` over the tt-unknot.
fn synthetic_loop(k: i64, n: usize) -> CliResult<Curve<f64, 4>> {
    let s = FRAC_1_SQRT_2;
    let point = move |t: f64| [s * t.cos(), s * t.sin(), s * t.cos(), -s * t.sin()];
    Ok(Curve::sample_periodic(
        TAU,
        n,
        point,
        Some(move |t: f64| {
            let f = frame_at(&point(t));
            let a = k as f64 * t;
            std::array::from_fn(|i| a.cos() * f.v1[i] + a.sin() * f.v2[i])
        }),
    )?)
}

pub fn run_rotation(args: &RotationArgs) -> CliResult<bool> {
    let samples = args.samples.unwrap_or(ORBIT_SAMPLES);
    let (source, curve) = match (&args.from_curve, args.synthetic, &args.field) {
        (Some(p), None, None) => ("file", read_s3(p)?.with_fd_tangents()?),
        (None, Some(k), None) => ("synthetic", synthetic_loop(k, samples)?),
        (None, None, Some(kind)) => {
            let field = sphere_field(kind, &args.generator, &args.polarity, None, None)?;
            let start = s3_start(&args.start, args.start_a)?;
            let traj = trace(&trace_spec(field.clone(), start, args.tau.unwrap_or(TAU * 1.1), args.tol))?;
            ("orbit", closed_orbit(&traj, &field, CLOSURE_TOL, samples)?)
        }
        _ => return config_err("give exactly one of --from-curve, --synthetic or --field"),
    };
    let r = rotation_number(&curve)?;
    if let Some(out) = &args.out {
        emit_curve(Some(out), &curve)?;
    }
    let body = json!({ "source": source, "samples": curve.cyclic_samples().len(), "rotation_number": r });
    emit_report(args.out.as_deref(), &report("rotation", args, body)?)?;
    Ok(true)
}

fn circle(n: usize, f: impl Fn(f64) -> [f64; 3]) -> CliResult<Curve<f64, 3>> {
    Ok(Curve::sample_periodic(TAU, n, f, None::<fn(f64) -> [f64; 3]>)?)
}

fn hopf_fiber(p: [f64; 4], n: usize) -> CliResult<Curve<f64, 3>> {
    let s3 = Curve::sample_periodic(
        TAU,
        n,
        move |t: f64| {
            let (c, s) = (t.cos(), t.sin());
            [c * p[0] - s * p[1], s * p[0] + c * p[1], c * p[2] - s * p[3], s * p[2] + c * p[3]]
        },
        Some(move |t: f64| {
            let (c, s) = (t.cos(), t.sin());
            [-s * p[0] - c * p[1], c * p[0] - s * p[1], -s * p[2] - c * p[3], c * p[2] - s * p[3]]
        }),
    )?;
    Ok(project_curve(&s3)?)
}

/// Two closed curves for a named example.
pub fn preset_pair(name: &str, n: usize) -> CliResult<(Curve<f64, 3>, Curve<f64, 3>)> {
    match name {
        "hopf-pair" => Ok((circle(n, |t| [t.cos(), t.sin(), 0.0])?, circle(n, |t| [1.0 + t.cos(), 0.0, t.sin()])?)),
        "split" => Ok((circle(n, |t| [t.cos(), t.sin(), 0.0])?, circle(n, |t| [5.0 + t.cos(), 0.0, t.sin()])?)),
        "hopf-fibers" => Ok((hopf_fiber([0.6, 0.0, 0.8, 0.0], n)?, hopf_fiber([0.0, 0.8, 0.6, 0.0], n)?)),
        "hopfion" => Ok((
            hopfion_e_line(&S3Point::new([0.0, 0.6, 0.0, 0.8])?, n)?,
            hopfion_e_line(&S3Point::new([0.5, 0.5, 0.5, 0.5])?, n)?,
        )),
        "torus-knot" => Ok((torus_knot_e_line(FRAC_PI_2, n)?, torus_knot_e_line(-FRAC_PI_2, n)?)),
        other => config_err(format!("unknown preset '{other}'")),
    }
}

fn pair_rows(a: &Curve<f64, 3>, b: &Curve<f64, 3>) -> Vec<Vec<Cell>> {
    let mut rows = Vec::new();
    for (name, c) in [("a", a), ("b", b)] {
        for (p, x) in c.params.iter().zip(&c.samples) {
            rows.push(vec![Cell::Text(name.into()), Cell::Num(*p), Cell::Num(x[0]), Cell::Num(x[1]), Cell::Num(x[2])]);
        }
    }
    rows
}

pub fn run_link(args: &LinkArgs) -> CliResult<bool> {
    let n = args.samples.unwrap_or(200);
    let (a, b) = match (&args.preset, &args.curve_a, &args.curve_b) {
        (Some(p), None, None) => preset_pair(p, n)?,
        (None, Some(a), Some(b)) => (read_r3(a)?, read_r3(b)?),
        _ => return config_err("give --preset, or both --curve-a and --curve-b"),
    };
    if let Some(out) = &args.out {
        emit_table(out, &["curve", "param", "x", "y", "z"], &pair_rows(&a, &b))?;
    }
    emit_report(args.out.as_deref(), &report("link", args, link_json(&a, &b)?)?)?;
    Ok(true)
}

pub fn run_monodromy(args: &MonodromyArgs) -> CliResult<bool> {
    let tol = args.tol.unwrap_or(1e-13);
    let mut extra = Map::new();
    let rep: MonodromyReport<f64> = match (args.omega, args.g0, &args.field) {
        (Some(w), None, None) => {
            let r = monodromy(&NveSpec::for_omega(w), tol)?;
            let a = analytic_monodromy(w)?;
            let dev = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| (r.matrix[i][j] - a[i][j]).abs())
                .fold(0.0, f64::max);
            extra.insert("analytic".into(), json!(a));
            extra.insert("deviation".into(), json!(dev));
            r
        }
        (None, Some(g0), None) => {
            let spec = NveSpec::new(
                g0,
                args.cos.clone().unwrap_or_default(),
                args.sin.clone().unwrap_or_default(),
                args.period.unwrap_or(1.0),
            )?;
            monodromy(&spec, tol)?
        }
        (None, None, Some(kind)) => {
            let field = sphere_field(kind, &args.generator, &args.polarity, None, None)?;
            let start = s3_start(&args.start, args.start_a)?;
            let traj = trace(&trace_spec(field.clone(), start, args.tau.unwrap_or(TAU * 1.1), Some(tol.max(1e-12))))?;
            let orbit = closed_orbit(&traj, &field, CLOSURE_TOL, ORBIT_SAMPLES)?;
            extra.insert("period".into(), json!(orbit.period()));
            orbit_monodromy(&field, &orbit, tol.max(1e-12))?
        }
        _ => return config_err("give exactly one of --omega, --g0 or --field"),
    };
    let rep = match args.gamma {
        Some(g) => rep.with_diophantine(g, args.exponent.unwrap_or(2.5), args.q_max.unwrap_or(10_000))?,
        None => rep,
    };
    let mut body = match serde_json::to_value(&rep) {
        Ok(Value::Object(m)) => m,
        _ => return Err(CliError::Run("report did not serialize".into())),
    };
    body.insert("det".into(), json!(rep.det()));
    body.extend(extra);
    emit_report(args.out.as_deref(), &report("monodromy", args, Value::Object(body))?)?;
    Ok(true)
}

fn parse_w(s: &str) -> CliResult<f64> {
    match s {
        "golden" => return Ok((5f64.sqrt() - 1.0) / 2.0),
        "silver" => return Ok(2f64.sqrt() - 1.0),
        _ => {}
    }
    let bad = |_| CliError::Config(format!("cannot read w = '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
            if b == 0.0 {
                return config_err("zero denominator");
            }
            Ok(a / b)
        }
        None => s.trim().parse().map_err(bad),
    }
}

pub fn run_diophantine(args: &DiophantineArgs) -> CliResult<bool> {
    let Some(w) = &args.w else {
        return config_err("diophantine needs --w");
    };
    let v = diophantine_check(
        parse_w(w)?,
        args.gamma.unwrap_or(0.2),
        args.tau.unwrap_or(2.5),
        args.q_max.unwrap_or(10_000),
    )?;
    if let Some(out) = &args.out {
        let row = vec![
            Cell::Num(v.w),
            Cell::Int(if v.pass { 1 } else { 0 }),
            Cell::Int(v.worst_p),
            Cell::Int(v.worst_q as i64),
            Cell::Num(v.worst_ratio),
        ];
        emit_table(out, &["w", "pass", "worst_p", "worst_q", "worst_ratio"], &[row])?;
    }
    let body = json!({ "verdict": v, "bounded_by_q_max": v.q_max });
    emit_report(args.out.as_deref(), &report("diophantine", args, body)?)?;
    Ok(v.pass)
}

pub const TANGENCY_TOL: f64 = 1e-3;
pub const CLOSURE_GAP_TOL: f64 = 1e-6;

pub fn run_transport_check(args: &TransportCheckArgs) -> CliResult<bool> {
    let preset = args.preset.clone().unwrap_or_else(|| "hopfion".into());
    let h = match preset.as_str() {
        "hopfion" => "1",
        "torus-knot" => "6*z1*z2^2",
        other => return config_err(format!("unknown preset '{other}' (hopfion or torus-knot)")),
    };
    let n = args.samples.unwrap_or(if preset == "hopfion" { 160 } else { 300 });
    let t1 = args.t1.unwrap_or(0.5);
    let field = BatemanField::hopf(Generator::parse(h)?)?;
    let (a, b) = preset_pair(&preset, n)?;
    let lk0 = linking_number(&a, &b)?;
    let mut spec = TransportSpec::new(field.clone(), 0.0, t1);
    if let Some(tol) = args.tol {
        spec.options = OdeOptions { max_step: 0.05, ..OdeOptions::with_tol(tol) };
    }
    let (ta, tb) = (transport_curve(&spec, &a)?, transport_curve(&spec, &b)?);
    let lk1 = linking_number(&ta, &tb)?;
    let tangency = [tangency_at_time(&field, &ta, t1)?, tangency_at_time(&field, &tb, t1)?];
    // a sampled loop, and a closed line of E(·, t1)
    let closure =
        [ta.closure_gap(), tb.closure_gap(), e_line_return(&field, &ta, t1)?, e_line_return(&field, &tb, t1)?];
    let pass =
        tangency.iter().all(|&d| d <= TANGENCY_TOL) && closure.iter().all(|&d| d <= CLOSURE_GAP_TOL) && lk0 == lk1;
    if let Some(out) = &args.out {
        emit_table(out, &["curve", "param", "x", "y", "z"], &pair_rows(&ta, &tb))?;
    }
    let body = json!({
        "generator": h,
        "t1": t1,
        "samples": n,
        "tangency": tangency,
        "closure_gap": &closure[..2],
        "e_line_return": &closure[2..],
        "linking_before": lk0,
        "linking_after": lk1,
        "pass": pass,
    });
    emit_report(args.out.as_deref(), &report("transport-check", args, body)?)?;
    Ok(pass)
}
