use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use srint::carnot::{lookup, parse_algebra_file, verify_realization, CarnotError, SRSystem};
use srint::dynamics::{
    integrate as run_integrate, poincare_many, write_section_csv, write_trajectory_csv, Failure,
    Flow, RunMetadata, Section, SectionSpec, State,
};
use srint::integrals::{claims_for, verify_claims};
use srint::obstruct::{decide_with, num_cols, Mode, ObstructError, Verdict};
use srint::reduce::{reduce_and_normalize, Params, QKind, ReduceError, ReducedSystem};

use crate::args::{IntegrateArgs, ObstructArgs, ReduceArgs, SectionArgs, SystemArgs, VerifyArgs};
use crate::parse;
use crate::report::{
    create, sidecar, suffixed, tool_version, write_json, CliError, CliResult, Exit, RunReport,
};
use crate::svg::Plot;

/// Prolonged systems with more unknowns than this need `--allow-long`.
pub const LONG_UNKNOWNS: u64 = 15_000;

fn carnot_error(e: CarnotError) -> CliError {
    match e {
        CarnotError::UnknownSystem(_) => CliError::new(Exit::UnknownSystem, e.to_string()),
        _ => CliError::input(e.to_string()),
    }
}

/// A catalog entry, or an algebra file when the name is an existing path.
pub fn load_system(a: &SystemArgs) -> Result<SRSystem, CliError> {
    let path = Path::new(&a.system);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let file = parse_algebra_file(&name, &text).map_err(carnot_error)?;
        return file.into_system().map_err(carnot_error);
    }
    lookup(
        &a.system,
        parse::catalog_params(a.params.as_deref())?.as_ref(),
    )
    .map_err(carnot_error)
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

pub fn verify(a: &VerifyArgs, echo: &[String]) -> CliResult {
    let start = Instant::now();
    let sys = load_system(&a.sys)?;
    let mut checks = Vec::new();
    let report = sys.algebra.validate();
    for c in &report.checks {
        checks.push(Check {
            name: format!("algebra: {}", c.check),
            passed: c.passed,
            detail: c.detail.clone(),
        });
    }
    if sys.realization.is_some() {
        checks.push(match verify_realization(&sys) {
            Ok(r) => Check {
                name: "realization".into(),
                passed: true,
                detail: format!(
                    "sign {}, {} bracket relations, {} theta relations",
                    r.sign, r.checked_pairs, r.theta_checks
                ),
            },
            Err(e) => Check {
                name: "realization".into(),
                passed: false,
                detail: e.to_string(),
            },
        });
    }
    let is_catalog = !Path::new(&a.sys.system).is_file();
    if is_catalog {
        match claims_for(&sys)
            .map_err(|e| e.to_string())
            .and_then(|c| verify_claims(&c).map_err(|e| e.to_string()))
        {
            Ok(rep) => {
                for s in &rep.sets {
                    checks.push(Check {
                        name: format!("integrals: {}", s.label),
                        passed: s.passed(),
                        detail: format!(
                            "jacobian rank {} of {} claimed; non-commuting with H: {:?}; non-involutive pairs: {:?}",
                            s.jacobian_rank, s.claimed_independent_count, s.not_commuting_with_h, s.non_involutive_pairs
                        ),
                    });
                }
                for i in &rep.identities {
                    checks.push(Check {
                        name: format!("identity: {}", i.name),
                        passed: i.holds,
                        detail: String::new(),
                    });
                }
            }
            Err(e) => checks.push(Check {
                name: "integrals".into(),
                passed: false,
                detail: e,
            }),
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {}{}",
            c.name,
            if c.detail.is_empty() {
                String::new()
            } else {
                format!(": {}", c.detail)
            }
        );
    }
    let code = if passed {
        Exit::Ok
    } else {
        Exit::VerificationFailed
    };
    println!(
        "{}: {}",
        sys.name,
        if passed {
            "all checks passed"
        } else {
            "verification failed"
        }
    );
    if let Some(out) = &a.out {
        #[derive(Serialize)]
        struct Outputs<'a> {
            passed: bool,
            growth_vector: &'a [usize],
            checks: &'a [Check],
        }
        write_json(
            out,
            &RunReport {
                command: echo.to_vec(),
                system: sys.name.clone(),
                inputs: serde_json::json!({ "system": a.sys.system, "params": a.sys.params }),
                outputs: Outputs {
                    passed,
                    growth_vector: &report.growth_vector,
                    checks: &checks,
                },
                elapsed_s: start.elapsed().as_secs_f64(),
                tool_version: tool_version(),
                exit_status: code as i32,
            },
        )?;
    }
    Ok(code)
}

fn long_allowed(flag: bool) -> bool {
    flag || std::env::var("SRINT_ALLOW_LONG").is_ok_and(|v| !v.is_empty() && v != "0")
}

pub fn obstruct(a: &ObstructArgs) -> CliResult {
    let sys = load_system(&a.sys)?;
    if !sys.obstruct_ready() {
        return Err(CliError::input(format!(
            "{} is not obstruct-ready: its Hamiltonian depends on base coordinates other than x1, x2, \
             so the Noether reduction behind the test does not apply",
            sys.name
        )));
    }
    if a.degree == 0 {
        return Err(CliError::input("degree must be at least 1"));
    }
    let k = a.prolong.unwrap_or(a.degree + 1);
    let mode = match (a.modulus, a.auto_primes) {
        (Some(p), _) => Mode::ModP(p),
        (None, true) => Mode::AutoPrimes,
        (None, false) => Mode::Exact,
    };
    let unknowns = num_cols(sys.dim(), a.degree, k);
    if unknowns > LONG_UNKNOWNS && !long_allowed(a.allow_long) {
        return Err(CliError::input(format!(
            "long run ({unknowns} unknowns); pass --allow-long or set SRINT_ALLOW_LONG=1"
        )));
    }
    let rep = decide_with(&sys, a.degree, k, mode).map_err(|e| match e {
        ObstructError::NotObstructReady(_)
        | ObstructError::NotQuadratic(_)
        | ObstructError::Rank(_) => CliError::input(e.to_string()),
        _ => CliError::new(Exit::VerificationFailed, e.to_string()),
    })?;
    let arith = rep
        .modulus
        .map_or("exact".to_string(), |p| format!("mod {p}"));
    println!(
        "{} D={} d={} k={}: {}x{} unknowns, delta={} lambda0={} ({arith}, {:.2} s) -> {}",
        rep.system,
        rep.dim,
        rep.degree,
        rep.prolongations,
        rep.num_equations,
        rep.num_unknowns,
        rep.delta,
        rep.lambda0,
        rep.elapsed_s,
        rep.verdict
    );
    if let Some(out) = &a.out {
        write_json(out, &rep)?;
    }
    Ok(match rep.verdict {
        Verdict::NoFinalIntegral(_) => Exit::Ok,
        Verdict::Inconclusive => Exit::Inconclusive,
    })
}

pub fn reduce(a: &ReduceArgs, echo: &[String]) -> CliResult {
    let start = Instant::now();
    let sys = load_system(&a.sys)?;
    let consts = parse::constants(a.constants.as_deref(), sys.dim())?;
    let r = reduce_and_normalize(&sys, &consts).map_err(|e| match e {
        ReduceError::NotObstructReady(_)
        | ReduceError::ConstantCount { .. }
        | ReduceError::Structure(..) => CliError::input(e.to_string()),
        _ => CliError::new(Exit::VerificationFailed, e.to_string()),
    })?;
    println!("{r}");
    if let Some(out) = &a.out {
        let params: Vec<String> = match &r.params {
            Params::Exact(v) => v.iter().map(ToString::to_string).collect(),
            Params::Numeric(v) => v.iter().map(|x| format!("{x:e}")).collect(),
        };
        write_json(
            out,
            &RunReport {
                command: echo.to_vec(),
                system: sys.name.clone(),
                inputs: serde_json::json!({
                    "constants": consts.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
                outputs: serde_json::json!({
                    "text": r.to_string(),
                    "q": r.q.to_string(),
                    "kind": r.kind.to_string(),
                    "params": params,
                    "exact": matches!(r.params, Params::Exact(_)),
                    "flags": r.flags,
                }),
                elapsed_s: start.elapsed().as_secs_f64(),
                tool_version: tool_version(),
                exit_status: 0,
            },
        )?;
    }
    Ok(Exit::Ok)
}

fn q_label(sys: &ReducedSystem) -> String {
    let p: Vec<String> = sys.params.as_f64().iter().map(|v| v.to_string()).collect();
    let kind = if sys.kind == QKind::Constant {
        "C".to_string()
    } else {
        sys.kind.to_string()
    };
    format!("{kind}:{}", p.join(","))
}

fn metadata(
    sys: &ReducedSystem,
    ics: Vec<State>,
    t_end: Option<f64>,
    section: Option<SectionSpec>,
    cfg: srint::dynamics::IntegratorConfig,
) -> RunMetadata {
    RunMetadata {
        system: q_label(sys),
        kind: sys.kind.to_string(),
        params: sys.params.as_f64(),
        initial_conditions: ics,
        t_end,
        section,
        config: cfg,
        counts: Vec::new(),
        flags: Vec::new(),
        notes: vec!["states are in normal-form coordinates; z is an angle and sections on z are taken modulo 2 pi".into()],
    }
}

fn report<O: Serialize>(
    echo: &[String],
    system: String,
    inputs: serde_json::Value,
    outputs: O,
    start: Instant,
    code: Exit,
) -> RunReport<serde_json::Value, O> {
    RunReport {
        command: echo.to_vec(),
        system,
        inputs,
        outputs,
        elapsed_s: start.elapsed().as_secs_f64(),
        tool_version: tool_version(),
        exit_status: code as i32,
    }
}

/// Trajectory data, optional time window and `(z, z')` portrait.
pub fn write_trajectory(
    states: &[State],
    flow: &Flow,
    out: Option<&Path>,
    window: Option<(f64, f64)>,
    svg: Option<&Path>,
) -> Result<(), CliError> {
    let win: Vec<State> = window
        .map(|(a, b)| {
            states
                .iter()
                .filter(|s| s.t >= a && s.t <= b)
                .copied()
                .collect()
        })
        .unwrap_or_default();
    match out {
        Some(p) => {
            write_trajectory_csv(create(p)?, states).map_err(|e| CliError::io(p, e))?;
            if window.is_some() {
                let wp = suffixed(p, ".window");
                write_trajectory_csv(create(&wp)?, &win).map_err(|e| CliError::io(&wp, e))?;
            }
        }
        None => {
            let stdout = std::io::stdout();
            write_trajectory_csv(stdout.lock(), states)
                .map_err(|e| CliError::input(e.to_string()))?;
        }
    }
    if let Some(p) = svg {
        let zq = |s: &State| [s.z, flow.q(s.x, s.y)];
        Plot::new("z", "z'")
            .points_colored(states.iter().map(zq).collect(), "#000000")
            .points_colored(win.iter().map(zq).collect(), "#d62728")
            .save(p)?;
    }
    Ok(())
}

pub fn integrate(a: &IntegrateArgs, echo: &[String]) -> CliResult {
    let start = Instant::now();
    let sys = parse::q_spec(&a.q)?;
    let ic = parse::initial_state(&a.ic)?;
    let cfg = parse::config(&a.num)?;
    let window = a.window.as_deref().map(parse::window).transpose()?;
    if !a.tmax.is_finite() {
        return Err(CliError::input("--tmax must be finite"));
    }
    let flow = Flow::from_reduced(&sys);
    let (states, failure) = match run_integrate(&flow, &ic, a.tmax, &cfg) {
        Ok(tr) => (tr.states, None),
        Err(Failure {
            error: srint::dynamics::DynamicsError::Precondition(m),
            ..
        }) => return Err(CliError::input(m)),
        Err(Failure { error, partial }) => (partial, Some(error)),
    };
    write_trajectory(&states, &flow, a.out.as_deref(), window, a.svg.as_deref())?;
    let code = if failure.is_some() {
        Exit::Numeric
    } else {
        Exit::Ok
    };
    if let Some(e) = &failure {
        eprintln!("integration failed: {e}; {} states written", states.len());
    }
    if let Some(out) = &a.out {
        let mut meta = metadata(&sys, vec![ic], Some(a.tmax), None, cfg);
        meta.counts = vec![states.len()];
        if let Some(e) = failure {
            meta.flags.push(e.to_string());
        }
        if let Some((t0, t1)) = window {
            meta.notes
                .push(format!("window {t0} <= t <= {t1} written separately"));
        }
        let inputs =
            serde_json::json!({ "Q": a.q, "ic": a.ic, "tmax": a.tmax, "window": a.window });
        write_json(
            &sidecar(out),
            &report(echo, q_label(&sys), inputs, meta, start, code),
        )?;
    }
    Ok(code)
}

/// Writes one section per orbit and a joint portrait; returns whether any
/// orbit hit an integrator failure.
pub fn write_sections(
    sections: &[Section],
    out: Option<&Path>,
    svg: Option<&Path>,
    overlay: Option<(Vec<[f64; 2]>, &'static str)>,
) -> Result<(), CliError> {
    for (i, sec) in sections.iter().enumerate() {
        match out {
            Some(p) => {
                let path = if sections.len() == 1 {
                    p.to_path_buf()
                } else {
                    suffixed(p, &format!("_{i}"))
                };
                write_section_csv(create(&path)?, sec).map_err(|e| CliError::io(&path, e))?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                if sections.len() > 1 {
                    let _ = writeln!(lock, "# orbit {i}");
                }
                write_section_csv(lock, sec).map_err(|e| CliError::input(e.to_string()))?;
            }
        }
    }
    if let (Some(p), Some(first)) = (svg, sections.first()) {
        let [u, v] = first.spec.axes();
        let mut plot = Plot::new(u, v);
        for sec in sections {
            plot = plot.points(sec.points.iter().map(|s| sec.spec.project(s)).collect());
        }
        if let Some((curve, color)) = overlay {
            plot = plot.curve(curve, color);
        }
        plot.save(p)?;
    }
    Ok(())
}

pub fn run_sections(
    sys: &ReducedSystem,
    ics: &[State],
    spec: &SectionSpec,
    cfg: &srint::dynamics::IntegratorConfig,
) -> Result<Vec<Section>, CliError> {
    let flow = Flow::from_reduced(sys);
    poincare_many(&flow, ics, spec, cfg)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::input(e.to_string()))
}

pub fn section(a: &SectionArgs, echo: &[String]) -> CliResult {
    let start = Instant::now();
    let sys = parse::q_spec(&a.q)?;
    let ics =
        a.ic.iter()
            .map(|s| parse::initial_state(s))
            .collect::<Result<Vec<_>, _>>()?;
    let (coord, level, dir) = parse::surface(&a.surface)?;
    let spec = SectionSpec::new(coord, level, dir, a.count);
    let cfg = parse::config(&a.num)?;
    let sections = run_sections(&sys, &ics, &spec, &cfg)?;
    write_sections(&sections, a.out.as_deref(), a.svg.as_deref(), None)?;
    let failed = sections.iter().any(|s| s.failure.is_some());
    let code = if failed { Exit::Numeric } else { Exit::Ok };
    for (i, s) in sections.iter().enumerate() {
        if !s.flags.is_empty() {
            eprintln!("orbit {i}: {}", s.flags.join("; "));
        }
    }
    if let Some(out) = &a.out {
        let mut meta = metadata(&sys, ics, None, Some(spec), cfg);
        meta.counts = sections.iter().map(|s| s.points.len()).collect();
        meta.flags = sections
            .iter()
            .flat_map(|s| s.flags.iter().cloned())
            .collect();
        let inputs =
            serde_json::json!({ "Q": a.q, "ic": a.ic, "surface": a.surface, "count": a.count });
        write_json(
            &sidecar(out),
            &report(echo, q_label(&sys), inputs, meta, start, code),
        )?;
    }
    Ok(code)
}
