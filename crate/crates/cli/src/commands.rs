//! The five subcommands. Each returns rendered output plus the process exit
//! code: 0 success/pass, 1 constraint-or-verification failure, 2 invalid
//! input or no solution.

use anharm_core::analytic::{
    check_constraints, eta_form_constraint_residual, excited_coefficients_unchecked,
    excited_constraint_residual_same, ground_constraint_residual, kappa_and_energy, solve_cross_l,
    solve_same_qn, AnsatzSolution, ConstraintReport,
};
use anharm_core::oracle::{
    integration_window, log_spaced, normalize, ode_residual, verify, RadialGrid, ToleranceTier,
    VerificationReport, DEFAULT_GRID_N, WINDOW_LOG_DROP,
};
use anharm_core::{CoreError, PotentialParams, ProblemSpec, Result, StateLabel};
use serde_json::{json, Value};

use crate::render::{dec, error_record, num, object, opt_u32, to_json_line};

pub struct CommandOutput {
    pub text: String,
    pub exit: i32,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        Self { text, exit: 0 }
    }

    fn failed(text: String) -> Self {
        Self { text, exit: 1 }
    }

    pub fn invalid(err: &CoreError) -> Self {
        Self {
            text: to_json_line(&error_record(err)),
            exit: 2,
        }
    }
}

/// Tolerance for constraint flags on user-supplied couplings, which may
/// carry 4-5 significant digits of rounding.
const CHECK_TOL: f64 = 1e-4;
/// Tolerance for constraint validation of solver-produced couplings.
const EXACT_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-10;

fn solve_family(a: f64, spec: &ProblemSpec) -> Result<PotentialParams> {
    match spec.ell_prime() {
        None => solve_same_qn(a, spec),
        Some(lp) => solve_cross_l(a, spec.ell(), lp),
    }
}

fn residuals_value(params: &PotentialParams, spec: &ProblemSpec) -> Result<Value> {
    let report = check_constraints(params, spec, EXACT_TOL)?;
    let mut entries = vec![
        ("excited", num(report.excited_residual)),
        ("ground", num(report.ground_residual)),
    ];
    if let Some(r) = report.eta_form_residual {
        entries.push(("eta_form", num(r)));
    }
    entries.sort_by_key(|(k, _)| *k);
    Ok(object(entries))
}

/// The full exact-solution record for one coupling family.
fn solution_record(params: &PotentialParams, spec: &ProblemSpec) -> Result<Value> {
    let ground = AnsatzSolution::ground(*params, *spec, EXACT_TOL)?;
    let excited = AnsatzSolution::first_excited(*params, *spec, EXACT_TOL)?;
    Ok(object(vec![
        ("E0", num(ground.energy)),
        ("E1", num(excited.energy)),
        ("a", num(params.a())),
        ("alpha", num(excited.alpha)),
        ("b", num(params.b())),
        ("beta", num(excited.beta)),
        ("c", num(params.c())),
        ("dimension", Value::from(spec.dimension().as_u32())),
        ("ell", Value::from(spec.ell())),
        ("ell_prime", opt_u32(spec.ell_prime())),
        ("gamma", num(excited.gamma)),
        ("kappa0", num(ground.kappa)),
        ("kappa1", num(excited.kappa)),
        ("residuals", residuals_value(params, spec)?),
    ]))
}

pub fn cmd_solve(a: f64, spec: &ProblemSpec) -> CommandOutput {
    let record = solve_family(a, spec).and_then(|params| solution_record(&params, spec));
    match record {
        Ok(v) => CommandOutput::ok(to_json_line(&v)),
        Err(e) => CommandOutput::invalid(&e),
    }
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn check_text(params: &PotentialParams, spec: &ProblemSpec, report: &ConstraintReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "constraint check: a = {}, b = {}, c = {}, dimension = {}, ell = {}",
        dec(params.a()),
        dec(params.b()),
        dec(params.c()),
        spec.dimension().as_u32(),
        spec.ell()
    ));
    if let Some(lp) = spec.ell_prime() {
        s.push_str(&format!(", ell_prime = {lp}"));
    }
    s.push('\n');
    s.push_str(&format!("tolerance: {}\n", dec(report.tolerance)));
    s.push_str(&format!(
        "ground    residual = {:<18} {}\n",
        dec(report.ground_residual),
        flag(report.ground_ok)
    ));
    s.push_str(&format!(
        "excited   residual = {:<18} {}\n",
        dec(report.excited_residual),
        flag(report.excited_ok)
    ));
    if let Some(r) = report.eta_form_residual {
        match report.eta_form_ok {
            Some(ok) => s.push_str(&format!(
                "eta-form  residual = {:<18} {}\n",
                dec(r),
                flag(ok)
            )),
            None => s.push_str(&format!(
                "eta-form  residual = {:<18} n/a (distinct quantum numbers)\n",
                dec(r)
            )),
        }
    }
    s.push_str(&format!(
        "overall: {}\n",
        if report.satisfied() { "pass" } else { "FAIL" }
    ));
    s
}

fn check_value(params: &PotentialParams, spec: &ProblemSpec, report: &ConstraintReport) -> Value {
    let mut residuals = vec![
        (
            "excited",
            json!({ "residual": num(report.excited_residual), "satisfied": report.excited_ok }),
        ),
        (
            "ground",
            json!({ "residual": num(report.ground_residual), "satisfied": report.ground_ok }),
        ),
    ];
    if let Some(r) = report.eta_form_residual {
        residuals.push((
            "eta_form",
            object(vec![
                ("residual", num(r)),
                (
                    "satisfied",
                    report.eta_form_ok.map(Value::from).unwrap_or(Value::Null),
                ),
            ]),
        ));
    }
    residuals.sort_by_key(|(k, _)| *k);
    object(vec![
        ("a", num(params.a())),
        ("b", num(params.b())),
        ("c", num(params.c())),
        ("dimension", Value::from(spec.dimension().as_u32())),
        ("ell", Value::from(spec.ell())),
        ("ell_prime", opt_u32(spec.ell_prime())),
        ("residuals", object(residuals)),
        ("satisfied", Value::from(report.satisfied())),
        ("tolerance", num(report.tolerance)),
    ])
}

pub fn cmd_check(a: f64, b: f64, c: f64, spec: &ProblemSpec, as_json: bool) -> CommandOutput {
    let params = match PotentialParams::new(a, b, c) {
        Ok(p) => p,
        Err(e) => return CommandOutput::invalid(&e),
    };
    let report = match check_constraints(&params, spec, CHECK_TOL) {
        Ok(r) => r,
        Err(e) => return CommandOutput::invalid(&e),
    };
    let text = if as_json {
        to_json_line(&check_value(&params, spec, &report))
    } else {
        check_text(&params, spec, &report)
    };
    if report.satisfied() {
        CommandOutput::ok(text)
    } else {
        CommandOutput::failed(text)
    }
}

/// Build the state's solution, falling back to an unvalidated candidate when
/// the couplings sit off the constraint manifold, so verification reports
/// the failure instead of refusing to run.
fn solution_or_candidate(
    params: &PotentialParams,
    spec: &ProblemSpec,
    state: StateLabel,
    tol: f64,
) -> Result<AnsatzSolution> {
    let built = match state {
        StateLabel::Ground => AnsatzSolution::ground(*params, *spec, tol),
        StateLabel::FirstExcited => AnsatzSolution::first_excited(*params, *spec, tol),
    };
    match built {
        Ok(sol) => Ok(sol),
        Err(CoreError::ConstraintViolated(_)) => {
            let (kappa, energy) = kappa_and_energy(params, state);
            let (alpha, beta, gamma) = match state {
                StateLabel::Ground => (1.0, 0.0, 0.0),
                StateLabel::FirstExcited => excited_coefficients_unchecked(params, spec)?,
            };
            Ok(AnsatzSolution::candidate(
                state, kappa, energy, alpha, beta, gamma, *params, *spec,
            ))
        }
        Err(e) => Err(e),
    }
}

fn report_value(state: StateLabel, rep: &VerificationReport) -> Value {
    let normalization = match &rep.normalization {
        Some(n) => object(vec![
            ("error_estimate", num(n.error_estimate)),
            ("factor", num(n.factor)),
            ("integral", num(n.integral)),
        ]),
        None => Value::Null,
    };
    object(vec![
        ("energy_delta", num(rep.energy_delta)),
        (
            "failures",
            Value::from(rep.failures.iter().map(|s| Value::from(s.as_str())).collect::<Vec<_>>()),
        ),
        ("node_check", Value::from(rep.node_check)),
        ("normalization", normalization),
        ("pass", Value::from(rep.verdict())),
        ("residual_max", num(rep.residual_max)),
        ("state", Value::from(state.name())),
    ])
}

pub struct VerifyOptions {
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub grid_n: Option<usize>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
}

pub fn cmd_verify(a: f64, spec: &ProblemSpec, opts: &VerifyOptions) -> CommandOutput {
    let (params, tier) = match (opts.b, opts.c) {
        (Some(b), Some(c)) => match PotentialParams::new(a, b, c) {
            Ok(p) => (p, ToleranceTier::Rounded),
            Err(e) => return CommandOutput::invalid(&e),
        },
        (None, None) => match solve_family(a, spec) {
            Ok(p) => (p, ToleranceTier::Exact),
            Err(e) => return CommandOutput::invalid(&e),
        },
        _ => {
            return CommandOutput::invalid(&CoreError::InvalidInput(
                "supply both --b and --c, or neither".into(),
            ))
        }
    };

    let n = opts.grid_n.unwrap_or(DEFAULT_GRID_N);
    let grid = match (opts.r_min, opts.r_max) {
        (None, None) => RadialGrid::for_params(&params, n),
        (lo, hi) => {
            let default = RadialGrid::for_params(&params, n);
            let lo = lo.or(default.as_ref().ok().map(|g| g.r_min()));
            let hi = hi.or(default.as_ref().ok().map(|g| g.r_max()));
            match (lo, hi) {
                (Some(lo), Some(hi)) => RadialGrid::new(lo, hi, n),
                _ => default,
            }
        }
    };
    let grid = match grid {
        Ok(g) => g,
        Err(e) => return CommandOutput::invalid(&e),
    };

    let mut reports = Vec::new();
    let mut all_pass = true;
    for state in [StateLabel::Ground, StateLabel::FirstExcited] {
        let sol = match solution_or_candidate(&params, spec, state, tier.constraint_tol()) {
            Ok(s) => s,
            Err(e) => return CommandOutput::invalid(&e),
        };
        let rep = verify(&sol, &grid, tier);
        all_pass &= rep.verdict();
        reports.push(report_value(state, &rep));
    }

    let value = object(vec![
        ("a", num(params.a())),
        ("b", num(params.b())),
        ("c", num(params.c())),
        ("dimension", Value::from(spec.dimension().as_u32())),
        ("ell", Value::from(spec.ell())),
        ("ell_prime", opt_u32(spec.ell_prime())),
        (
            "grid",
            object(vec![
                ("n", Value::from(grid.n())),
                ("r_max", num(grid.r_max())),
                ("r_min", num(grid.r_min())),
            ]),
        ),
        ("pass", Value::from(all_pass)),
        ("reports", Value::from(reports)),
        ("tier", Value::from(tier.name())),
    ]);
    let text = to_json_line(&value);
    if all_pass {
        CommandOutput::ok(text)
    } else {
        CommandOutput::failed(text)
    }
}

pub fn cmd_radial(
    a: f64,
    spec: &ProblemSpec,
    state: StateLabel,
    normalized: bool,
    samples: usize,
) -> CommandOutput {
    if samples < 2 {
        return CommandOutput::invalid(&CoreError::InvalidInput(
            "require at least 2 samples".into(),
        ));
    }
    let params = match solve_family(a, spec) {
        Ok(p) => p,
        Err(e) => return CommandOutput::invalid(&e),
    };
    let built = match state {
        StateLabel::Ground => AnsatzSolution::ground(params, *spec, EXACT_TOL),
        StateLabel::FirstExcited => AnsatzSolution::first_excited(params, *spec, EXACT_TOL),
    };
    let mut sol = match built {
        Ok(s) => s,
        Err(e) => return CommandOutput::invalid(&e),
    };
    if normalized {
        match normalize(&sol, NORM_TOL) {
            Ok(n) => sol = sol.with_norm(n),
            Err(e) => return CommandOutput::invalid(&e),
        }
    }
    let report = match check_constraints(&params, spec, CHECK_TOL) {
        Ok(r) => r,
        Err(e) => return CommandOutput::invalid(&e),
    };

    let (r_lo, r_hi) = integration_window(&sol, WINDOW_LOG_DROP);
    let radii = log_spaced(r_lo, r_hi, samples);

    let mut out = String::new();
    out.push_str("# radial-table\n");
    out.push_str(&format!("# a = {}\n", dec(params.a())));
    out.push_str(&format!("# b = {}\n", dec(params.b())));
    out.push_str(&format!("# c = {}\n", dec(params.c())));
    out.push_str(&format!("# dimension = {}\n", spec.dimension().as_u32()));
    out.push_str(&format!("# ell = {}\n", spec.ell()));
    if let Some(lp) = spec.ell_prime() {
        out.push_str(&format!("# ell_prime = {lp}\n"));
    }
    out.push_str(&format!("# state = {}\n", state.name()));
    out.push_str(&format!("# kappa = {}\n", dec(sol.kappa)));
    out.push_str(&format!("# E = {}\n", dec(sol.energy)));
    out.push_str(&format!("# alpha = {}\n", dec(sol.alpha)));
    out.push_str(&format!("# beta = {}\n", dec(sol.beta)));
    out.push_str(&format!("# gamma = {}\n", dec(sol.gamma)));
    out.push_str(&format!("# normalized = {normalized}\n"));
    out.push_str(&format!("# N = {}\n", dec(sol.norm.unwrap_or(1.0))));
    out.push_str(&format!("# samples = {samples}\n"));
    out.push_str(&format!("# r_lo = {}\n", dec(r_lo)));
    out.push_str(&format!("# r_hi = {}\n", dec(r_hi)));
    out.push_str(&format!("# check_tolerance = {}\n", dec(report.tolerance)));
    out.push_str(&format!("# ground_constraint_ok = {}\n", report.ground_ok));
    out.push_str(&format!("# excited_constraint_ok = {}\n", report.excited_ok));
    if let Some(ok) = report.eta_form_ok {
        out.push_str(&format!("# eta_form_constraint_ok = {ok}\n"));
    }
    out.push_str("r,R\n");
    for r in radii {
        let value = match sol.eval(r) {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                return CommandOutput::invalid(&CoreError::NonIntegrable(format!(
                    "non-finite sample R({r}) = {v}"
                )))
            }
            Err(e) => return CommandOutput::invalid(&e),
        };
        out.push_str(&format!("{},{}\n", dec(r), dec(value)));
    }
    CommandOutput::ok(out)
}

/// Built-in reference couplings re-examined by `critique`, together with the
/// published first-excited candidate for them.
mod reference {
    pub const A: f64 = 1.0;
    pub const B: f64 = 0.04082;
    pub const C: f64 = 0.18;
    pub const ELL: u32 = 0;
    pub const CAND_ALPHA: f64 = 1.0;
    pub const CAND_BETA: f64 = -0.1787;
    pub const CAND_GAMMA: f64 = 0.8485;
    pub const CAND_E1: f64 = 12.09621;
}

pub fn cmd_critique(as_json: bool) -> CommandOutput {
    let spec = ProblemSpec::three_d(reference::ELL);
    let params = PotentialParams::new(reference::A, reference::B, reference::C)
        .expect("reference couplings are valid");

    let ground_residual = ground_constraint_residual(&params, &spec);
    let (kappa0, e0) = kappa_and_energy(&params, StateLabel::Ground);
    let excited_residual = excited_constraint_residual_same(&params);
    let eta_residual = eta_form_constraint_residual(&params, reference::ELL);

    let s = params.sqrt_c();
    let kappa1 = (params.b() + 7.0 * s) / (2.0 * s);
    let candidate = AnsatzSolution::candidate(
        StateLabel::FirstExcited,
        kappa1,
        reference::CAND_E1,
        reference::CAND_ALPHA,
        reference::CAND_BETA,
        reference::CAND_GAMMA,
        params,
        spec,
    );
    let match_residuals = candidate.coefficient_match_residuals();
    let max_match = match_residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let ode_at_1 = ode_residual(&candidate, 1.0).expect("r = 1 is in the domain");

    let corrected_params =
        solve_same_qn(reference::A, &spec).expect("the corrected family exists at ell = 0");
    let corrected =
        solution_record(&corrected_params, &spec).expect("corrected record renders");

    if as_json {
        let value = object(vec![
            (
                "candidate",
                object(vec![
                    ("E1", num(reference::CAND_E1)),
                    ("alpha", num(reference::CAND_ALPHA)),
                    ("beta", num(reference::CAND_BETA)),
                    (
                        "coefficient_match_residuals",
                        Value::from(match_residuals.iter().map(|r| num(*r)).collect::<Vec<_>>()),
                    ),
                    ("gamma", num(reference::CAND_GAMMA)),
                    ("kappa1", num(kappa1)),
                    ("max_coefficient_residual", num(max_match)),
                    ("ode_relative_residual_at_r1", num(ode_at_1.relative)),
                    ("solves_equation", Value::from(false)),
                ]),
            ),
            ("corrected_family", corrected),
            (
                "reference_couplings",
                object(vec![
                    ("E0", num(e0)),
                    ("a", num(params.a())),
                    ("b", num(params.b())),
                    ("c", num(params.c())),
                    ("ell", Value::from(reference::ELL)),
                    ("eta_form_residual", num(eta_residual)),
                    ("excited_residual", num(excited_residual)),
                    ("ground_ok", Value::from(ground_residual.abs() <= CHECK_TOL)),
                    ("ground_residual", num(ground_residual)),
                    ("kappa0", num(kappa0)),
                ]),
            ),
        ]);
        return CommandOutput::ok(to_json_line(&value));
    }

    let mut t = String::new();
    t.push_str(&format!(
        "reference-coupling critique: a = {}, b = {}, c = {}, dimension = 3, ell = {}\n\n",
        dec(params.a()),
        dec(params.b()),
        dec(params.c()),
        reference::ELL
    ));
    t.push_str("ground state:\n");
    t.push_str(&format!(
        "  ground constraint residual = {}  ({})\n",
        dec(ground_residual),
        flag(ground_residual.abs() <= CHECK_TOL)
    ));
    t.push_str(&format!("  kappa0 = {}\n", dec(kappa0)));
    t.push_str(&format!("  E0     = {}\n\n", dec(e0)));
    t.push_str("excited-state constraints for the same quantum number:\n");
    t.push_str(&format!(
        "  b + 6 sqrt(c) residual = {}  (violated)\n",
        dec(excited_residual)
    ));
    t.push_str(&format!(
        "  eta-form residual      = {}  (violated)\n\n",
        dec(eta_residual)
    ));
    t.push_str(&format!(
        "published excited-state candidate (alpha = {}, beta = {}, gamma = {}, E1 = {}):\n",
        dec(reference::CAND_ALPHA),
        dec(reference::CAND_BETA),
        dec(reference::CAND_GAMMA),
        dec(reference::CAND_E1)
    ));
    t.push_str(&format!(
        "  max coefficient-matching residual    = {}\n",
        dec(max_match)
    ));
    t.push_str(&format!(
        "  relative equation residual at r = 1  = {}\n",
        dec(ode_at_1.relative)
    ));
    t.push_str("  -> the candidate does not solve the radial equation\n\n");
    t.push_str("corrected same-quantum-number family:\n");
    let (ck0, ce0) = kappa_and_energy(&corrected_params, StateLabel::Ground);
    let (ck1, ce1) = kappa_and_energy(&corrected_params, StateLabel::FirstExcited);
    t.push_str(&format!(
        "  b = {}, c = {} (sqrt(c) = {})\n",
        dec(corrected_params.b()),
        dec(corrected_params.c()),
        dec(corrected_params.sqrt_c())
    ));
    t.push_str(&format!("  kappa0 = {}, E0 = {}\n", dec(ck0), dec(ce0)));
    t.push_str(&format!("  kappa1 = {}, E1 = {}\n", dec(ck1), dec(ce1)));
    t.push_str(&format!(
        "  gamma/beta = {}\n",
        dec(-corrected_params.sqrt_c() / corrected_params.sqrt_a())
    ));
    CommandOutput::ok(t)
}
