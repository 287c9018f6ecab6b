// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

//! `classify`, `region-scan` and `witness`.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use ksdiv::dynamics::{
    accumulate_rates, divisibility_scan, divisibility_scan_map, positivity_margin, uniform_grid,
    AmplitudeDampingSpec, DivisibilityScanReport, FirstViolations, ScanConfig,
};
use ksdiv::generators::{dissipativity_numeric, pauli_generator, RateFunctions, RATE_TOL};
use ksdiv::maps::{classify_ks, ks_witness_search, KsMode, PSD_TOL};
use ksdiv::pauli::min_eig_hermitian;
use ksdiv::search::SearchConfig;
use ksdiv::{Error, KsReport, KsVerdict, QubitMap};
use num_complex::Complex64;

use crate::config::{Model, RegionOutput, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{flag, float, opt_float, CsvOut};
use crate::region::region_scan;
use crate::svg::render_slice_svg;

/// Resolution of reported first-violation times.
const CLI_BISECTION_TOL: f64 = 1e-9;

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub summary: String,
    pub files: Vec<PathBuf>,
}

fn need_model(cfg: &RunConfig) -> CliResult<&Model> {
    cfg.model
        .as_ref()
        .ok_or_else(|| CliError::Config("this command needs a `[model]` section".into()))
}

fn search(cfg: &RunConfig) -> SearchConfig {
    SearchConfig::with_seed(cfg.seed, cfg.budget)
}

fn scan_config(cfg: &RunConfig) -> ScanConfig {
    let mut sc = ScanConfig::default();
    sc.search.seed = cfg.seed;
    sc.search.budget = cfg.scan_budget;
    sc.band = cfg.band;
    sc.bisection_tol = CLI_BISECTION_TOL;
    sc
}

fn fmt_t(t: f64) -> String {
    if t < 1e-6 {
        "t = 0⁺".to_string()
    } else {
        format!("t ≈ {t:.6}")
    }
}

fn headline(first: &FirstViolations, t_max: f64) -> String {
    match (first.p, first.ks, first.cp) {
        (_, _, None) => format!("CP-divisible on [0,{t_max}]"),
        (_, None, Some(c)) => format!("KS-divisible on [0,{t_max}]; CP-divisibility lost at {}", fmt_t(c)),
        (None, Some(k), _) => format!("P-divisible on [0,{t_max}]; KS-divisibility lost at {}", fmt_t(k)),
        (Some(p), _, _) => format!("P-divisibility lost at {}", fmt_t(p)),
    }
}

fn lost(t: Option<f64>) -> String {
    t.map_or_else(|| "never".to_string(), fmt_t)
}

fn check_hierarchy(scan: &DivisibilityScanReport) -> CliResult<()> {
    if scan.hierarchy_breaches == 0 {
        return Ok(());
    }
    let bad: Vec<String> = scan
        .pairs
        .iter()
        .filter(|p| !p.hierarchy_ok())
        .take(5)
        .map(|p| {
            format!(
                "(s={}, t={}: P={} KS={} KS-refuted={} CP={})",
                p.s, p.t, p.positive, p.ks_certified, p.ks_refuted, p.cp
            )
        })
        .collect();
    Err(CliError::Invariant(format!(
        "{} propagator(s) break cp ⇒ ks ⇒ positive, e.g. {}",
        scan.hierarchy_breaches,
        bad.join(", ")
    )))
}

fn write_propagators(path: &Path, scan: &DivisibilityScanReport) -> CliResult<()> {
    let mut w = CsvOut::create(
        path,
        &[
            "s",
            "t",
            "positive",
            "ks_certified",
            "ks_refuted",
            "cp",
            "p_margin",
            "ks_closed_margin",
            "ks_search_margin",
            "cp_margin",
        ],
    )?;
    for p in &scan.pairs {
        w.row(&[
            float(p.s),
            float(p.t),
            flag(p.positive),
            flag(p.ks_certified),
            flag(p.ks_refuted),
            flag(p.cp),
            float(p.p_margin),
            opt_float(p.ks_closed_margin),
            opt_float(p.ks_search_margin),
            float(p.cp_margin),
        ])?;
    }
    w.finish()
}

fn scan_lines(out: &mut String, scan: &DivisibilityScanReport, points: usize) {
    let n = scan.pairs.len();
    let count = |f: &dyn Fn(&ksdiv::dynamics::PairVerdict) -> bool| scan.pairs.iter().filter(|p| f(p)).count();
    writeln!(
        out,
        "propagators: {n} pairs on a {points}-point grid; positive {}, KS certified {}, KS refuted {}, CP {}, KS unresolved {}, untestable {}",
        count(&|p| p.positive),
        count(&|p| p.ks_certified),
        count(&|p| p.ks_refuted),
        count(&|p| p.cp),
        scan.unresolved_ks,
        scan.untestable.len()
    )
    .unwrap();
    let pf = &scan.propagator_first_violation;
    writeln!(
        out,
        "propagator level: first t with a failing pair: P {}, KS {}, CP {}",
        pf.p.map_or("never".into(), |t| format!("{t}")),
        pf.ks.map_or("never".into(), |t| format!("{t}")),
        pf.cp.map_or("never".into(), |t| format!("{t}")),
    )
    .unwrap();
}

fn classify_pauli(cfg: &RunConfig, r: &RateFunctions, out: &Path) -> CliResult<Outcome> {
    let grid = uniform_grid(r.t_max(), cfg.grid_points)?;
    let traj = accumulate_rates(r, &grid)?;
    let scan = divisibility_scan(&traj, &scan_config(cfg))?;
    check_hierarchy(&scan)?;

    let class_path = out.join("classification.csv");
    let mut w = CsvOut::create(
        &class_path,
        &[
            "t", "gamma1", "gamma2", "gamma3", "lambda1", "lambda2", "lambda3", "p0", "p1", "p2",
            "p3", "cptp", "p_divisible", "ks_divisible", "cp_divisible", "p_margin", "ks_margin",
            "cp_margin", "table_edge",
        ],
    )?;
    for (n, g) in scan.generator.iter().enumerate() {
        let v = &g.verdict;
        let p = traj.p()[n];
        let mut row = vec![float(g.t)];
        row.extend(g.gamma.iter().map(|x| float(*x)));
        row.extend(traj.lambda()[n].iter().map(|x| float(*x)));
        row.extend(p.iter().map(|x| float(*x)));
        row.push(flag(p.iter().all(|&x| x >= -PSD_TOL)));
        row.push(flag(v.p_divisible_now));
        row.push(flag(v.ks_divisible_now));
        row.push(flag(v.cp_divisible_now));
        row.push(float(v.min_p_margin()));
        row.push(float(v.min_ks_margin()));
        row.push(float(v.min_cp_margin()));
        row.push(flag(traj.table_edge()[n]));
        w.row(&row)?;
    }
    w.finish()?;
    let prop_path = out.join("propagators.csv");
    write_propagators(&prop_path, &scan)?;

    let first = &scan.generator_first_violation;
    let mut s = String::new();
    writeln!(s, "{}", headline(first, r.t_max())).unwrap();
    writeln!(
        s,
        "generator level: P lost {}, KS lost {}, CP lost {}",
        lost(first.p),
        lost(first.ks),
        lost(first.cp)
    )
    .unwrap();
    scan_lines(&mut s, &scan, cfg.grid_points);
    if let Some(c) = scan.consistency {
        writeln!(
            s,
            "generator/propagator consistency: checked {}, theorem mismatches {}, short-window mismatches {}, limit-sensitive {}",
            c.checked, c.theorem_mismatches, c.short_window_mismatches, c.limit_sensitive
        )
        .unwrap();
    }
    if traj.table_edge().iter().any(|&b| b) {
        writeln!(s, "note: some grid points lie within one step of a rate table's end").unwrap();
    }
    Ok(Outcome {
        summary: s,
        files: vec![class_path, prop_path],
    })
}

fn is_singular(e: &Error) -> bool {
    matches!(e, Error::NonInvertible { .. } | Error::NonInvertibleDynamics { .. })
}

/// First grid time where `bad` holds, refined by bisection.
fn first_bad<F>(grid: &[f64], bad: F, tol: f64) -> CliResult<Option<f64>>
where
    F: Fn(f64) -> CliResult<Option<bool>>,
{
    let mut prev: Option<f64> = None;
    for &t in grid {
        match bad(t)? {
            Some(true) => {
                let Some(mut lo) = prev else { return Ok(Some(t)) };
                let mut hi = t;
                while hi - lo > tol {
                    let mid = 0.5 * (lo + hi);
                    match bad(mid)? {
                        Some(true) | None => hi = mid,
                        Some(false) => lo = mid,
                    }
                }
                return Ok(Some(0.5 * (lo + hi)));
            }
            Some(false) => prev = Some(t),
            None => prev = None,
        }
    }
    Ok(None)
}

fn classify_amplitude(cfg: &RunConfig, spec: &AmplitudeDampingSpec, out: &Path) -> CliResult<Outcome> {
    let grid = uniform_grid(spec.t_max(), cfg.grid_points)?;
    let scan = divisibility_scan_map(spec, &grid, &scan_config(cfg))?;
    check_hierarchy(&scan)?;

    let class_path = out.join("classification.csv");
    let mut w = CsvOut::create(
        &class_path,
        &[
            "t", "g_re", "g_im", "abs_g", "gamma", "omega", "cptp", "p_divisible", "ks_divisible",
            "cp_divisible", "margin",
        ],
    )?;
    let mut singular = 0usize;
    for &t in &grid {
        let g: Complex64 = spec.g(t);
        let mut row = vec![float(t), float(g.re), float(g.im), float(g.norm())];
        match spec.rates(t) {
            Ok((gamma, omega)) => {
                let ok = gamma >= -RATE_TOL;
                row.extend([float(gamma), float(omega)]);
                row.push(flag(spec.is_cptp_at(t)?));
                row.extend([flag(ok), flag(ok), flag(ok), float(gamma)]);
            }
            Err(e) if is_singular(&e) => {
                singular += 1;
                row.extend(std::iter::repeat_n(String::new(), 7));
            }
            Err(e) => return Err(e.into()),
        }
        w.row(&row)?;
    }
    w.finish()?;
    let prop_path = out.join("propagators.csv");
    write_propagators(&prop_path, &scan)?;

    // for amplitude damping P, KS and CP divisibility all mean γ(t) ≥ 0
    let lost_at = first_bad(
        &grid,
        |t| match spec.rates(t) {
            Ok((g, _)) => Ok(Some(g < -RATE_TOL)),
            Err(e) if is_singular(&e) => Ok(None),
            Err(e) => Err(e.into()),
        },
        CLI_BISECTION_TOL,
    )?;
    let first = FirstViolations {
        p: lost_at,
        ks: lost_at,
        cp: lost_at,
    };
    let mut s = String::new();
    writeln!(s, "{}", headline(&first, spec.t_max())).unwrap();
    writeln!(s, "generator level: γ(t) ≥ 0 lost {}", lost(lost_at)).unwrap();
    scan_lines(&mut s, &scan, cfg.grid_points);
    if singular > 0 {
        writeln!(s, "note: G(t) vanishes at {singular} grid point(s); those rows are left blank").unwrap();
    }
    Ok(Outcome {
        summary: s,
        files: vec![class_path, prop_path],
    })
}

fn classify_map(cfg: &RunConfig, map: &QubitMap, out: &Path) -> CliResult<Outcome> {
    let p_margin = positivity_margin(map);
    let cp_margin = min_eig_hermitian(&map.choi_matrix())?;
    let positive = p_margin >= -PSD_TOL;
    let cp = cp_margin >= -PSD_TOL;
    let report = map_ks(map, cfg)?;
    let ks_certified = report.verdict == KsVerdict::Certified || cp;
    let ks_refuted = report.verdict == KsVerdict::Violation;
    if (cp && !ks_certified) || (ks_certified && !positive) || (ks_certified && ks_refuted) {
        return Err(CliError::Invariant(format!(
            "cp ⇒ ks ⇒ positive violated: P={positive} KS={ks_certified} KS-refuted={ks_refuted} CP={cp}"
        )));
    }
    let path = out.join("classification.csv");
    let mut w = CsvOut::create(
        &path,
        &["positive", "ks_certified", "ks_refuted", "cp", "p_margin", "ks_margin", "cp_margin"],
    )?;
    w.row(&[
        flag(positive),
        flag(ks_certified),
        flag(ks_refuted),
        flag(cp),
        float(p_margin),
        float(report.margin),
        float(cp_margin),
    ])?;
    w.finish()?;
    let ks_word = if ks_certified {
        "KS certified"
    } else if ks_refuted {
        "not KS (witness found)"
    } else {
        "KS undecided"
    };
    let summary = format!(
        "map is {}; {ks_word}; {}\n",
        if positive { "positive" } else { "not positive" },
        if cp { "CP" } else { "not CP" }
    );
    Ok(Outcome {
        summary,
        files: vec![path],
    })
}

fn map_ks(map: &QubitMap, cfg: &RunConfig) -> CliResult<KsReport> {
    if map.is_unital(1e-12) {
        Ok(classify_ks(map, &search(cfg))?)
    } else {
        match ks_witness_search(map, KsMode::Generalized, &search(cfg)) {
            Ok(r) => Ok(r),
            Err(Error::InvalidInput(m)) => Ok(KsReport {
                verdict: KsVerdict::Violation,
                witness: None,
                margin: f64::NEG_INFINITY,
            })
            .inspect(|_| eprintln!("note: {m}")),
            Err(e) => Err(e.into()),
        }
    }
}

pub fn cmd_classify(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    std::fs::create_dir_all(out)?;
    let outcome = match need_model(cfg)? {
        Model::PauliRates(r) => classify_pauli(cfg, r, out)?,
        Model::AmplitudeDamping(spec) => classify_amplitude(cfg, spec, out)?,
        Model::CustomTransfer(map) => classify_map(cfg, map, out)?,
    };
    let path = out.join("summary.txt");
    std::fs::write(&path, &outcome.summary)?;
    let mut files = outcome.files;
    files.push(path);
    Ok(Outcome {
        summary: outcome.summary,
        files,
    })
}

pub fn cmd_region_scan(cfg: &RunConfig, out: &Path) -> CliResult<Outcome> {
    std::fs::create_dir_all(out)?;
    let points = region_scan(&cfg.region)?;
    let mut files = Vec::new();
    if cfg.region.outputs.contains(&RegionOutput::Csv) {
        let path = out.join("region.csv");
        let mut w = CsvOut::create(&path, &["p1", "p2", "p3", "positive", "ks_ppp", "ks_q38", "cp"])?;
        for p in &points {
            w.row(&[
                float(p.p[0]),
                float(p.p[1]),
                float(p.p[2]),
                flag(p.positive),
                flag(p.ks_ppp),
                flag(p.ks_q38),
                flag(p.cp),
            ])?;
        }
        w.finish()?;
        files.push(path);
    }
    if cfg.region.outputs.contains(&RegionOutput::Svg) {
        let path = out.join("region.svg");
        std::fs::write(&path, render_slice_svg(cfg.region.resolution))?;
        files.push(path);
    }
    let count = |f: &dyn Fn(&crate::region::RegionPoint) -> bool| points.iter().filter(|p| f(p)).count();
    let summary = format!(
        "{} points ({}); positive {}, KS (cubic) {}, KS (pairwise) {}, CP {}\n",
        points.len(),
        if cfg.region.slice { "slice p1+p2+p3=1" } else { "cube [-1,1]^3" },
        count(&|p| p.positive),
        count(&|p| p.ks_ppp),
        count(&|p| p.ks_q38),
        count(&|p| p.cp),
    );
    Ok(Outcome { summary, files })
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.11e} {} {:.11e}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
}

pub fn format_report(target: &str, r: &KsReport) -> String {
    let mut s = String::new();
    writeln!(s, "target: {target}").unwrap();
    writeln!(s, "verdict: {}", r.verdict.as_str()).unwrap();
    writeln!(s, "margin: {:.11e}", r.margin).unwrap();
    if let Some(w) = r.witness {
        writeln!(s, "w0: {}", fmt_c(w.w0)).unwrap();
        for (k, z) in w.w.iter().enumerate() {
            writeln!(s, "w{}: {}", k + 1, fmt_c(*z)).unwrap();
        }
    }
    s
}

pub fn cmd_witness(cfg: &RunConfig, out: Option<&Path>) -> CliResult<Outcome> {
    let sc = search(cfg);
    let witness_t = || {
        cfg.witness_t
            .ok_or_else(|| CliError::Config("witness.t is required for dynamical models".into()))
    };
    let (target, report) = match need_model(cfg)? {
        Model::CustomTransfer(map) => {
            let mode = if map.is_unital(1e-12) {
                KsMode::Unital
            } else {
                KsMode::Generalized
            };
            ("map".to_string(), ks_witness_search(map, mode, &sc)?)
        }
        Model::PauliRates(r) => {
            let t = witness_t()?;
            // self-dual, so this is also the Heisenberg-picture generator
            let l = pauli_generator(r.eval(t)?)?;
            (format!("generator at t = {t}"), dissipativity_numeric(&l, &sc)?)
        }
        Model::AmplitudeDamping(spec) => {
            let t = witness_t()?;
            let l = spec.generator_at(t)?.dual();
            (format!("generator at t = {t}"), dissipativity_numeric(&l, &sc)?)
        }
    };
    let summary = format_report(&target, &report);
    let mut files = Vec::new();
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("witness.txt");
        std::fs::write(&path, &summary)?;
        files.push(path);
    }
    Ok(Outcome { summary, files })
}
