//! Subcommand execution: resolve flags against the optional config file,
//! enforce the desk-scale caps, run the core routines, and shape the result
//! into a RunRecord.

use crate::args::*;
use crate::config::ConfigFile;
use crate::record::{Cell, RunRecord};
use num_complex::Complex64;
use std::path::PathBuf;
use zetalab_core::bounds::{curran_rhs, fit_exponent, main_rhs, prop24_rhs, EnvelopeParams};
use zetalab_core::dirichlet::{zsum_batch, zsum_direct, zsum_direct_extended, Grid, SumRequest};
use zetalab_core::moments::{
    dt_rule_sum, dt_rule_zeta, integrate_moment, shifted_moment, window_moment, MomentSpec,
    MomentVariant, QuadParams, ShiftConfig, WindowSign, T_MIN,
};
use zetalab_core::perron::{
    contour_decomposition, perron_residual, truncated_vertical, PerronConfig,
};
use zetalab_core::smoothing::{
    build_cutoff, decay_envelope_check, eval_cutoff_derivative, mellin_transform,
};
use zetalab_core::verify::{check_gauge_continuity, run_suite, Suite};
use zetalab_core::zeta::{eval_zeta_with, hardy_z, rs_theta, PrecisionMode, ZetaPoint};
use zetalab_core::LabError;

/// Desk-scale caps; anything larger needs --unsafe-scale.
const DESK_T: f64 = 1.0e5;
const DESK_Y: f64 = 1.0e4;
const DESK_GRID: f64 = 1.0e7;

pub enum Failure {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) | Failure::Io(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

fn usage(m: String) -> Failure {
    Failure::Usage(m)
}

fn core_err(e: LabError) -> Failure {
    match e {
        LabError::InvalidParameter(_)
        | LabError::Domain(_)
        | LabError::UnsupportedOrder(_)
        | LabError::Capacity(_) => Failure::Usage(e.to_string()),
        LabError::Numerical(_) | LabError::NonConvergence { .. } | LabError::Fit(_) => {
            Failure::Numerical(e.to_string())
        }
    }
}

/// Common flags after the config file has been folded in. Worker count and
/// output destination never enter the record: determinism is promised across
/// thread counts, and the artifact itself shows where it went.
pub struct Resolved {
    pub tol: Option<f64>,
    pub precision: Precision,
    pub deterministic: bool,
    pub format: OutFormat,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub unsafe_scale: bool,
}

pub struct Completed {
    pub record: RunRecord,
    /// Exit code and message to report after the record has been written.
    pub verdict: Option<(i32, String)>,
}

/// Fully validated work order; all parallelism happens after this is built.
pub enum Job {
    Zeta { t: f64, sigma: f64, count: usize, dt: f64, hardy: bool },
    Zsum { t: f64, y: f64, count: usize, dt: f64 },
    Moment { m: f64, t: f64, y: f64, dt: Option<f64>, smooth: Option<(f64, f64)> },
    Shifted { t: f64, a: Vec<f64>, b: Vec<f64>, dt: Option<f64> },
    Window { m: f64, t: f64, e: f64, sign: WindowSign, dt: Option<f64> },
    Perron { y: f64, t: f64 },
    Smooth { u: f64, c_exp: f64 },
    Scaling { m: f64, t_list: Vec<f64>, y_rule: String },
    Verify { suite: SuiteArg, inject: Option<String> },
}

fn load_config(common: &CommonArgs) -> Result<ConfigFile, Failure> {
    match &common.config {
        Some(path) => ConfigFile::load(path).map_err(usage),
        None => Ok(ConfigFile::empty()),
    }
}

fn resolve_common(common: &CommonArgs, cf: &mut ConfigFile) -> Result<Resolved, Failure> {
    let tol = match common.tol {
        Some(v) => Some(v),
        None => cf.take_f64("tol").map_err(usage)?,
    };
    if let Some(v) = tol {
        if !(v.is_finite() && v > 0.0) {
            return Err(usage(format!("tol must be positive and finite, got {v}")));
        }
    }
    let precision = match common.precision {
        Some(p) => p,
        None => cf.take::<Precision>("precision").map_err(usage)?.unwrap_or(Precision::Double),
    };
    let deterministic =
        common.deterministic || cf.take_bool("deterministic").map_err(usage)?.unwrap_or(false);
    let unsafe_scale =
        common.unsafe_scale || cf.take_bool("unsafe-scale").map_err(usage)?.unwrap_or(false);
    let format = match common.format {
        Some(f) => f,
        None => cf.take::<OutFormat>("format").map_err(usage)?.unwrap_or(OutFormat::Csv),
    };
    let out = common.out.clone().or_else(|| cf.take_string("out").map(PathBuf::from));
    let threads = match common.threads {
        Some(n) => Some(n),
        None => cf.take_usize("threads").map_err(usage)?,
    };
    if threads == Some(0) {
        return Err(usage("threads must be at least 1".to_string()));
    }
    Ok(Resolved { tol, precision, deterministic, format, out, threads, unsafe_scale })
}

/// Flag wins; the file value is still consumed (and parse-checked) so the
/// unknown-key sweep stays accurate.
fn merge<T>(flag: Option<T>, file: Result<Option<T>, String>) -> Result<Option<T>, Failure> {
    let from_file = file.map_err(usage)?;
    Ok(flag.or(from_file))
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("missing required parameter --{flag} (flag or config file)")))
}

fn cap(name: &str, value: f64, limit: f64, unsafe_scale: bool) -> Result<(), Failure> {
    if !unsafe_scale && !(value <= limit) {
        return Err(usage(format!(
            "{name} = {value} exceeds the desk-scale cap {limit:e}; pass --unsafe-scale to run anyway"
        )));
    }
    Ok(())
}

fn grid_budget(evals: f64, unsafe_scale: bool) -> Result<(), Failure> {
    if !unsafe_scale && !(evals <= DESK_GRID) {
        return Err(usage(format!(
            "estimated grid size {evals:.2e} exceeds {DESK_GRID:e} evaluations; pass --unsafe-scale to run anyway"
        )));
    }
    Ok(())
}

fn reject_extended(res: &Resolved, command: &str) -> Result<(), Failure> {
    if res.precision == Precision::Extended {
        return Err(usage(format!(
            "extended precision applies to zeta and zsum point evaluations, not {command}"
        )));
    }
    Ok(())
}

fn reject_tol(res: &Resolved, command: &str) -> Result<(), Failure> {
    if res.tol.is_some() {
        return Err(usage(format!("{command} has no tolerance knob; drop --tol")));
    }
    Ok(())
}

fn resolve_grid(count: usize, dt: Option<f64>) -> Result<f64, Failure> {
    if count == 0 {
        return Err(usage("count must be at least 1".to_string()));
    }
    if count == 1 {
        return Ok(0.0);
    }
    match dt {
        Some(d) if d.is_finite() && d > 0.0 => Ok(d),
        Some(d) => Err(usage(format!("dt must be positive and finite, got {d}"))),
        None => Err(usage("a grid needs --dt when --count > 1".to_string())),
    }
}

fn y_from_rule(rule: &str, t: f64) -> Result<f64, Failure> {
    match rule {
        "sqrt(T)" => Ok(t.sqrt()),
        "cbrt(T)" => Ok(t.cbrt()),
        other => other.parse::<f64>().map_err(|_| {
            usage(format!("Y-rule must be sqrt(T), cbrt(T), or a number, got {other:?}"))
        }),
    }
}

fn join_list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn prepare(cmd: Command) -> Result<(Job, Resolved), Failure> {
    match cmd {
        Command::Zeta(a) => {
            let mut cf = load_config(&a.common)?;
            let res = resolve_common(&a.common, &mut cf)?;
            let t = require(merge(a.t, cf.take_f64("T"))?, "T")?;
            let sigma = merge(a.sigma, cf.take_f64("sigma"))?.unwrap_or(0.5);
            let count = merge(a.count, cf.take_usize("count"))?.unwrap_or(1);
            let dt = merge(a.dt, cf.take_f64("dt"))?;
            let hardy = a.hardy || cf.take_bool("hardy").map_err(usage)?.unwrap_or(false);
            cf.finish().map_err(usage)?;
            let dt = resolve_grid(count, dt)?;
            if hardy && sigma != 0.5 {
                return Err(usage("Hardy Z lives on the critical line; drop --sigma".to_string()));
            }
            if hardy {
                reject_extended(&res, "--hardy")?;
            }
            let t_end = t + (count - 1) as f64 * dt;
            cap("T", t.abs().max(t_end.abs()), DESK_T, res.unsafe_scale)?;
            grid_budget(count as f64, res.unsafe_scale)?;
            Ok((Job::Zeta { t, sigma, count, dt, hardy }, res))
        }
        Command::Zsum(a) => {
            let mut cf = load_config(&a.common)?;
            let res = resolve_common(&a.common, &mut cf)?;
            let t = require(merge(a.t, cf.take_f64("T"))?, "T")?;
            let y = require(merge(a.y, cf.take_f64("Y"))?, "Y")?;
            let count = merge(a.count, cf.take_usize("count"))?.unwrap_or(1);
            let dt = merge(a.dt, cf.take_f64("dt"))?;
            cf.finish().map_err(usage)?;
            reject_tol(&res, "zsum")?;
            let dt = resolve_grid(count, dt)?;
            let t_end = t + (count - 1) as f64 * dt;
            cap("T", t.abs().max(t_end.abs()), DESK_T, res.unsafe_scale)?;
            cap("Y", y, DESK_Y, res.unsafe_scale)?;
            grid_budget(count as f64, res.unsafe_scale)?;
            Ok((Job::Zsum { t, y, count, dt }, res))
        }
        Command::Moment(a) => {
            let mut cf = load_config(&a.common)?;
            let res = resolve_common(&a.common, &mut cf)?;
            let m = require(merge(a.m, cf.take_f64("m"))?, "m")?;
            let t = require(merge(a.t, cf.take_f64("T"))?, "T")?;
            let y = require(merge(a.y, cf.take_f64("Y"))?, "Y")?;
            let dt = merge(a.dt, cf.take_f64("dt"))?;
            let u = merge(a.u, cf.take_f64("U"))?;
            let c_exp = merge(a.c_exp, cf.take_f64("C-exp"))?;
            cf.finish().map_err(usage)?;
            reject_extended(&res, "moment")?;
            if c_exp.is_some() && u.is_none() {
                return Err(usage("--C-exp describes the cutoff; it needs --U".to_string()));
            }
            let smooth = u.map(|u| (u, c_exp.unwrap_or(1.0)));
            cap("T", t, DESK_T, res.unsafe_scale)?;
            cap("Y", y, DESK_Y, res.unsafe_scale)?;
            let step = dt.filter(|d| *d > 0.0).unwrap_or_else(|| dt_rule_sum(y.max(1.0)));
            grid_budget(3.0 * t / step, res.unsafe_scale)?;
            Ok((Job::Moment { m, t, y, dt, smooth }, res))
        }
        Command::Shifted(a) => {
            let mut cf = load_config(&a.common)?;
            let res = resolve_common(&a.common, &mut cf)?;
            let t = require(merge(a.t, cf.take_f64("T"))?, "T")?;
            let shifts_a = require(merge(a.a, cf.take_list("a"))?, "a")?;
            let shifts_b = require(merge(a.b, cf.take_list("b"))?, "b")?;
            let dt = merge(a.dt, cf.take_f64("dt"))?;
            cf.finish().map_err(usage)?;
            reject_extended(&res, "shifted")?;
            cap("T", t, DESK_T, res.unsafe_scale)?;
            let step = dt.filter(|d| *d > 0.0).unwrap_or_else(|| dt_rule_zeta(2.0 * t.max(T_MIN)));
            grid_budget(3.0 * t / step, res.unsafe_scale)?;
            Ok((Job::Shifted { t, a: shifts_a, b: shifts_b, dt }, res))
        }
        Command::Window(a) => {
            let mut cf = load_config(&a.common)?;
            let res = resolve_common(&a.common, &mut cf)?;
            let m = require(merge(a.m, cf.take_f64("m"))?, "m")?;
            let t = require(merge(a.t, cf.take_f64("T"))?, "T")?;
            let e = require(merge(a.e, cf.take_f64("E"))?, "E")?;
            let sign = merge(a.sign, cf.take::<SignArg>("sign"))?.unwrap_or(SignArg::Plus);
            let dt = merge(a.dt, cf.take_f64("dt"))?;
            cf.finish().map_err(usage)?;
            reject_extended(&res, "window")?;
            cap("T", t, DESK_T, res.unsafe_scale)?;
            let step = dt.filter(|d| *d > 0.0).unwrap_or_else(|| dt_rule_zeta(2.0 * t.max(T_MIN)));
            let inner = (e.max(10.0) / 0.1).ceil();
            grid_budget(3.0 * t / step * inner, res.unsafe_scale)?;
            let sign = match sign {
                SignArg::Plus => WindowSign::Plus,
                SignArg::Minus => WindowSign::Minus,
            };
            Ok((Job::Window { m, t, e, sign, dt }, res))
        }
        Command::Perron(a) => {
            let mut cf = load_config(&a.common)?;
            let res = resolve_common(&a.common, &mut cf)?;
            let y = require(merge(a.y, cf.take_f64("Y"))?, "Y")?;
            let t = merge(a.t, cf.take_f64("T"))?.unwrap_or(0.0);
            cf.finish().map_err(usage)?;
            reject_extended(&res, "perron")?;
            reject_tol(&res, "perron")?;
            cap("Y", y, DESK_Y, res.unsafe_scale)?;
            cap("T", t.abs(), DESK_T, res.unsafe_scale)?;
            let rule = (1.0 / (4.0 * y.max(10.0).ln())).min(0.05);
            grid_budget(2.0 * (2.0 * y / rule) + 130.0, res.unsafe_scale)?;
            Ok((Job::Perron { y, t }, res))
        }
        Command::Smooth(a) => {
            let mut cf = load_config(&a.common)?;
            let res = resolve_common(&a.common, &mut cf)?;
            let u = require(merge(a.u, cf.take_f64("U"))?, "U")?;
            let c_exp = merge(a.c_exp, cf.take_f64("C-exp"))?.unwrap_or(1.0);
            cf.finish().map_err(usage)?;
            reject_extended(&res, "smooth")?;
            reject_tol(&res, "smooth")?;
            Ok((Job::Smooth { u, c_exp }, res))
        }
        Command::Scaling(a) => {
            let mut cf = load_config(&a.common)?;
            let res = resolve_common(&a.common, &mut cf)?;
            let m = require(merge(a.m, cf.take_f64("m"))?, "m")?;
            let t_list = require(merge(a.t_list, cf.take_list("T-list"))?, "T-list")?;
            let y_rule = require(merge(a.y_rule, Ok(cf.take_string("Y-rule")))?, "Y-rule")?;
            cf.finish().map_err(usage)?;
            reject_extended(&res, "scaling")?;
            if !(m > 2.0) {
                return Err(usage(format!("the scaling study needs m > 2, got {m}")));
            }
            if t_list.is_empty() {
                return Err(usage("T-list must name at least one window start".to_string()));
            }
            let mut budget = 0.0;
            for &t in &t_list {
                if !(t.is_finite() && t >= T_MIN) {
                    return Err(usage(format!("every T must be at least {T_MIN}, got {t}")));
                }
                cap("T", t, DESK_T, res.unsafe_scale)?;
                let y = y_from_rule(&y_rule, t)?;
                if !(y.is_finite() && y >= 1.0) {
                    return Err(usage(format!("Y-rule gives Y = {y} at T = {t}; need Y >= 1")));
                }
                if y > 0.95 * t {
                    return Err(usage(format!(
                        "Y-rule gives Y = {y} at T = {t}; the study needs Y well below T"
                    )));
                }
                cap("Y", y, DESK_Y, res.unsafe_scale)?;
                budget += 3.0 * t / dt_rule_sum(y);
            }
            grid_budget(budget, res.unsafe_scale)?;
            Ok((Job::Scaling { m, t_list, y_rule }, res))
        }
        Command::Verify(a) => {
            let mut cf = load_config(&a.common)?;
            let res = resolve_common(&a.common, &mut cf)?;
            let suite = merge(a.suite, cf.take::<SuiteArg>("suite"))?.unwrap_or(SuiteArg::Fast);
            cf.finish().map_err(usage)?;
            reject_extended(&res, "verify")?;
            reject_tol(&res, "verify")?;
            if let Some(name) = &a.inject_fault {
                if name != "g-continuity" {
                    return Err(usage(format!("unknown fault target {name:?}")));
                }
            }
            Ok((Job::Verify { suite, inject: a.inject_fault }, res))
        }
    }
}

pub fn execute(job: Job, res: &Resolved) -> Result<Completed, Failure> {
    match job {
        Job::Zeta { t, sigma, count, dt, hardy } => exec_zeta(t, sigma, count, dt, hardy, res),
        Job::Zsum { t, y, count, dt } => exec_zsum(t, y, count, dt, res),
        Job::Moment { m, t, y, dt, smooth } => exec_moment(m, t, y, dt, smooth, res),
        Job::Shifted { t, a, b, dt } => exec_shifted(t, a, b, dt, res),
        Job::Window { m, t, e, sign, dt } => exec_window(m, t, e, sign, dt, res),
        Job::Perron { y, t } => exec_perron(y, t),
        Job::Smooth { u, c_exp } => exec_smooth(u, c_exp),
        Job::Scaling { m, t_list, y_rule } => exec_scaling(m, t_list, y_rule, res),
        Job::Verify { suite, inject } => exec_verify(suite, inject),
    }
}

fn quad_params(dt: Option<f64>, res: &Resolved) -> QuadParams {
    QuadParams { dt, rel_check: res.tol.unwrap_or(0.05), ..QuadParams::default() }
}

fn exec_zeta(
    t: f64,
    sigma: f64,
    count: usize,
    dt: f64,
    hardy: bool,
    res: &Resolved,
) -> Result<Completed, Failure> {
    let tol = res.tol.unwrap_or(1e-9);
    let mode = match res.precision {
        Precision::Double => PrecisionMode::Double,
        Precision::Extended => PrecisionMode::Extended,
    };
    let mut record = RunRecord::new("zeta");
    record.config_entry("T", t);
    record.config_entry("sigma", sigma);
    record.config_entry("count", count);
    if count > 1 {
        record.config_entry("dt", dt);
    }
    if hardy {
        record.config_entry("hardy", true);
    }
    record.config_entry("tol", tol);
    record.columns = if hardy {
        vec!["t", "Z", "theta", "err"]
    } else {
        vec!["t", "re", "im", "abs", "err"]
    };
    for k in 0..count {
        let tk = t + k as f64 * dt;
        if hardy {
            let r = hardy_z(tk, tol).map_err(core_err)?;
            record.rows.push(vec![
                Cell::Num(tk),
                Cell::Num(r.value.re),
                Cell::Num(rs_theta(tk)),
                Cell::Num(r.err),
            ]);
        } else {
            let p = ZetaPoint::new(sigma, tk).map_err(core_err)?;
            let r = eval_zeta_with(p, tol, mode).map_err(core_err)?;
            record.rows.push(vec![
                Cell::Num(tk),
                Cell::Num(r.value.re),
                Cell::Num(r.value.im),
                Cell::Num(r.value.norm()),
                Cell::Num(r.err),
            ]);
        }
    }
    Ok(Completed { record, verdict: None })
}

fn exec_zsum(t: f64, y: f64, count: usize, dt: f64, res: &Resolved) -> Result<Completed, Failure> {
    let mut record = RunRecord::new("zsum");
    record.config_entry("T", t);
    record.config_entry("Y", y);
    record.config_entry("count", count);
    if count > 1 {
        record.config_entry("dt", dt);
    }
    record.columns = vec!["t", "re", "im", "abs"];
    let push = |tk: f64, v: Complex64, record: &mut RunRecord| {
        record.rows.push(vec![
            Cell::Num(tk),
            Cell::Num(v.re),
            Cell::Num(v.im),
            Cell::Num(v.norm()),
        ]);
    };
    match res.precision {
        Precision::Extended => {
            for k in 0..count {
                let tk = t + k as f64 * dt;
                let req = SumRequest::new(y, tk).map_err(core_err)?;
                let v = zsum_direct_extended(req).map_err(core_err)?;
                push(tk, v, &mut record);
            }
        }
        Precision::Double if count == 1 => {
            let req = SumRequest::new(y, t).map_err(core_err)?;
            push(t, zsum_direct(req), &mut record);
        }
        Precision::Double => {
            let grid = Grid::new(t, dt, count).map_err(core_err)?;
            let values = zsum_batch(y, &grid).map_err(core_err)?;
            for (k, v) in values.into_iter().enumerate() {
                push(grid.ordinate(k), v, &mut record);
            }
        }
    }
    Ok(Completed { record, verdict: None })
}

fn exec_moment(
    m: f64,
    t: f64,
    y: f64,
    dt: Option<f64>,
    smooth: Option<(f64, f64)>,
    res: &Resolved,
) -> Result<Completed, Failure> {
    let mut record = RunRecord::new("moment");
    record.config_entry("m", m);
    record.config_entry("T", t);
    record.config_entry("Y", y);
    if let Some(d) = dt {
        record.config_entry("dt", d);
    }
    let variant = match smooth {
        Some((u, c_exp)) => {
            record.config_entry("U", u);
            record.config_entry("C-exp", c_exp);
            MomentVariant::Smoothed { u, c_exponent: c_exp }
        }
        None => MomentVariant::Sharp,
    };
    let spec = MomentSpec::new(m, t, y, variant).map_err(core_err)?;
    let r = integrate_moment(&spec, &quad_params(dt, res)).map_err(core_err)?;
    let rhs = main_rhs(m, t, y);
    record.columns = vec!["T", "Y", "m", "S_m", "S_m_err", "rhs", "ratio", "dt", "panels"];
    record.rows.push(vec![
        Cell::Num(t),
        Cell::Num(y),
        Cell::Num(m),
        Cell::Num(r.value),
        Cell::Num(r.err),
        Cell::Num(rhs),
        Cell::Num(r.value / rhs),
        Cell::Num(t / r.panels as f64),
        Cell::Int(r.panels as u64),
    ]);
    Ok(Completed { record, verdict: None })
}

fn exec_shifted(
    t: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    dt: Option<f64>,
    res: &Resolved,
) -> Result<Completed, Failure> {
    let mut record = RunRecord::new("shifted");
    record.config_entry("T", t);
    record.config_entry("a", join_list(&a));
    record.config_entry("b", join_list(&b));
    if let Some(d) = dt {
        record.config_entry("dt", d);
    }
    let cfg = ShiftConfig::new(a.clone(), b.clone()).map_err(core_err)?;
    let r = shifted_moment(&cfg, t, &quad_params(dt, res)).map_err(core_err)?;
    let env = EnvelopeParams::new(t).map_err(core_err)?;
    let rhs = curran_rhs(&a, &b, &env).map_err(core_err)?;
    record.columns = vec!["T", "value", "err", "rhs", "ratio", "panels"];
    record.rows.push(vec![
        Cell::Num(t),
        Cell::Num(r.value),
        Cell::Num(r.err),
        Cell::Num(rhs),
        Cell::Num(r.value / rhs),
        Cell::Int(r.panels as u64),
    ]);
    Ok(Completed { record, verdict: None })
}

fn exec_window(
    m: f64,
    t: f64,
    e: f64,
    sign: WindowSign,
    dt: Option<f64>,
    res: &Resolved,
) -> Result<Completed, Failure> {
    let mut record = RunRecord::new("window");
    record.config_entry("m", m);
    record.config_entry("T", t);
    record.config_entry("E", e);
    record.config_entry("sign", match sign {
        WindowSign::Plus => "plus",
        WindowSign::Minus => "minus",
    });
    if let Some(d) = dt {
        record.config_entry("dt", d);
    }
    let r = window_moment(m, t, e, sign, &quad_params(dt, res)).map_err(core_err)?;
    let rhs = prop24_rhs(m, t, e);
    record.columns = vec!["T", "E", "m", "W", "W_err", "rhs", "ratio", "panels"];
    record.rows.push(vec![
        Cell::Num(t),
        Cell::Num(e),
        Cell::Num(m),
        Cell::Num(r.value),
        Cell::Num(r.err),
        Cell::Num(rhs),
        Cell::Num(r.value / rhs),
        Cell::Int(r.panels as u64),
    ]);
    Ok(Completed { record, verdict: None })
}

fn exec_perron(y: f64, t: f64) -> Result<Completed, Failure> {
    let mut record = RunRecord::new("perron");
    record.config_entry("Y", y);
    record.config_entry("T", t);
    let cfg = PerronConfig::new(y, t).map_err(core_err)?;
    let v = truncated_vertical(&cfg).map_err(core_err)?;
    let pieces = contour_decomposition(&cfg).map_err(core_err)?;
    let rep = perron_residual(&cfg).map_err(core_err)?;
    let gap = (v.value - pieces.legs_total()).norm();
    record.columns = vec![
        "Y", "t", "V_re", "V_im", "V_err", "legs_gap", "residue_re", "residue_im", "r1", "r2",
        "residual", "residual_ratio",
    ];
    record.rows.push(vec![
        Cell::Num(y),
        Cell::Num(t),
        Cell::Num(v.value.re),
        Cell::Num(v.value.im),
        Cell::Num(v.err),
        Cell::Num(gap),
        Cell::Num(pieces.residue.re),
        Cell::Num(pieces.residue.im),
        Cell::Num(pieces.r1),
        Cell::Num(pieces.r2),
        Cell::Num(rep.lhs),
        Cell::Num(rep.ratio),
    ]);
    Ok(Completed { record, verdict: None })
}

fn exec_smooth(u: f64, c_exp: f64) -> Result<Completed, Failure> {
    let mut record = RunRecord::new("smooth");
    record.config_entry("U", u);
    record.config_entry("C-exp", c_exp);
    let cutoff = build_cutoff(u, c_exp).map_err(core_err)?;
    let samples: Vec<Complex64> =
        [10.0, 30.0, 100.0, 300.0].iter().map(|&tau| Complex64::new(0.5, tau)).collect();
    record.columns = vec!["i", "sup", "envelope", "K"];
    for i in 1..=3 {
        let rep = decay_envelope_check(&cutoff, i, &samples).map_err(core_err)?;
        record.rows.push(vec![
            Cell::Int(i as u64),
            Cell::Num(rep.lhs),
            Cell::Num(rep.rhs),
            Cell::Num(rep.ratio),
        ]);
    }
    let m1 = mellin_transform(&cutoff, Complex64::new(1.0, 0.0)).map_err(core_err)?;
    let m2 = mellin_transform(&cutoff, Complex64::new(2.0, 0.0)).map_err(core_err)?;
    let slope = eval_cutoff_derivative(&cutoff, 0.5 / u, 1).map_err(core_err)?;
    record.meta("mellin-at-1", Cell::Num(m1.value.re));
    record.meta("mellin-at-2", Cell::Num(m2.value.re));
    record.meta("slope-peak-over-U", Cell::Num(slope.abs() / u));
    Ok(Completed { record, verdict: None })
}

fn exec_scaling(
    m: f64,
    t_list: Vec<f64>,
    y_rule: String,
    res: &Resolved,
) -> Result<Completed, Failure> {
    let mut record = RunRecord::new("scaling");
    record.config_entry("m", m);
    record.config_entry("T-list", join_list(&t_list));
    record.config_entry("Y-rule", &y_rule);
    record.columns = vec!["T", "Y", "m", "S_m", "S_m_err", "rhs", "ratio", "dt"];
    let params = quad_params(None, res);
    let mut verdict = None;
    let mut fit_points = Vec::new();
    for &t in &t_list {
        let y = y_from_rule(&y_rule, t)?;
        let spec = MomentSpec::new(m, t, y, MomentVariant::Sharp).map_err(core_err)?;
        match integrate_moment(&spec, &params) {
            Ok(r) => {
                let rhs = main_rhs(m, t, y);
                record.rows.push(vec![
                    Cell::Num(t),
                    Cell::Num(y),
                    Cell::Num(m),
                    Cell::Num(r.value),
                    Cell::Num(r.err),
                    Cell::Num(rhs),
                    Cell::Num(r.value / rhs),
                    Cell::Num(t / r.panels as f64),
                ]);
                fit_points.push((t.ln().ln(), (r.value / (t * y.powf(m))).ln()));
            }
            Err(e) => {
                let f = core_err(e);
                record.meta("partial", Cell::Flag(true));
                record.meta("aborted-at-T", Cell::Num(t));
                verdict = Some((f.code(), format!("scaling aborted at T = {t}: {}", f.message())));
                break;
            }
        }
    }
    if verdict.is_none() {
        if fit_points.len() >= 3 {
            match fit_exponent(&fit_points) {
                Ok(fit) => {
                    record.meta("fitted-exponent", Cell::Num(fit.slope));
                    record.meta("fit-intercept", Cell::Num(fit.intercept));
                    record.meta("fit-residual", Cell::Num(fit.residual));
                }
                Err(e) => record.meta("fit", Cell::Text(format!("failed: {e}"))),
            }
        } else {
            record.meta("fit", Cell::Text("skipped: needs at least 3 points".to_string()));
        }
    }
    Ok(Completed { record, verdict })
}

/// Deliberately wrong branch order, used to demonstrate that a corrupted
/// gauge is caught and named.
fn corrupted_gauge(x: f64, log_t: f64) -> f64 {
    if x <= 10.0 {
        1.0 / x
    } else if x <= 1.0 / log_t {
        log_t
    } else if x.ln() <= log_t.exp() {
        x.ln().ln()
    } else {
        log_t
    }
}

fn exec_verify(suite: SuiteArg, inject: Option<String>) -> Result<Completed, Failure> {
    let mut record = RunRecord::new("verify");
    let (suite_name, core_suite) = match suite {
        SuiteArg::Fast => ("fast", Suite::Fast),
        SuiteArg::Full => ("full", Suite::Full),
    };
    record.config_entry("suite", suite_name);
    let mut outcomes = run_suite(core_suite);
    if inject.is_some() {
        let fault = check_gauge_continuity(corrupted_gauge);
        for o in &mut outcomes {
            if o.name == fault.name {
                *o = fault.clone();
            }
        }
        record.config_entry("inject-fault", "g-continuity");
    }
    record.columns = vec!["check", "passed", "detail"];
    let failures: Vec<(String, String)> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| (o.name.clone(), o.detail.clone()))
        .collect();
    record.meta("checks", Cell::Int(outcomes.len() as u64));
    record.meta("failures", Cell::Int(failures.len() as u64));
    for o in outcomes {
        record.rows.push(vec![
            Cell::Text(o.name),
            Cell::Flag(o.passed),
            Cell::Text(o.detail),
        ]);
    }
    let verdict = failures
        .first()
        .map(|(name, detail)| (3, format!("invariant violated: {name} ({detail})")));
    Ok(Completed { record, verdict })
}
