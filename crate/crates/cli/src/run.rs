//! Subcommand dispatch. Each handler produces a serializable report and
//! an exit code; writing happens once, at the end, so an `--out` file is
//! either complete or absent.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::sync::Mutex;

use clap::Parser;
use serde::Serialize;

use delsarte_core::certificate::{
    build_certificate, build_certificate_with, closed_form_c, minimize_g0, worst_sample_k,
    ActiveCase, Certificate,
};
use delsarte_core::delsarte::{
    brute_force_max, delsarte_bound, optimal_witness, verify_witness, DelsarteError,
    DelsarteWitness,
};
use delsarte_core::group::{FiniteAbelianGroup, ForbiddenSet, GroupFunction};
use delsarte_core::improved::{
    corollary_check, improved_bound, synthesize_second_witness, verify_second_witness,
    CorollaryOutcome, ImprovedError, SecondWitness, Side,
};
use delsarte_core::mub::{fourier_family, FourierFamilyParams};

use crate::args::{Cli, Command, InstanceArgs, MubCommand, OracleCommand, OutputFormat};
use crate::io::{self, FunctionFile, MatrixFile, ToleranceSet};
use crate::render;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

/// Parses and runs; returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not usage errors
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn inconclusive(message: impl Into<String>) -> Self {
        Self { code: EXIT_INCONCLUSIVE, message: message.into() }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Self { code: EXIT_INFEASIBLE, message: message.into() }
    }
}

impl From<io::IoFailure> for Failure {
    fn from(e: io::IoFailure) -> Self {
        Failure::usage(e.message)
    }
}

fn dispatch(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Bound { instance } => cmd_bound(cli, instance),
        Command::VerifyWitness { instance, witness } => cmd_verify(cli, instance, witness),
        Command::Improve { instance, witness, second_witness, prescribed } => {
            cmd_improve(cli, instance, witness.as_deref(), second_witness.as_deref(), prescribed)
        }
        Command::Corollary { instance, pinned, witness, second_witness, m } => {
            cmd_corollary(cli, instance, pinned, witness.as_deref(), second_witness, *m)
        }
        Command::Mub(mub) => match mub {
            MubCommand::CertifyFab { a_phase, b_phase, samples, matrix_out } => {
                cmd_certify(cli, *a_phase, *b_phase, *samples, matrix_out.as_deref())
            }
            MubCommand::Sweep { grid, samples } => cmd_sweep(cli, *grid, *samples),
            MubCommand::OptimizeC => cmd_optimize_c(cli),
        },
        Command::Oracle(OracleCommand::MaxB { instance }) => cmd_maxb(cli, instance),
    }
}

fn load_instance(
    instance: &InstanceArgs,
) -> Result<(FiniteAbelianGroup, Vec<delsarte_core::group::GroupElement>), Failure> {
    let group = match (&instance.group, &instance.group_file) {
        (Some(text), None) => io::parse_group(text)?,
        (None, Some(path)) => io::read_group(path)?,
        _ => return Err(Failure::usage("provide exactly one of --group / --group-file")),
    };
    let members = match (&instance.forbidden, &instance.forbidden_file) {
        (Some(text), None) => io::parse_elements(&group, text)?,
        (None, Some(path)) => io::read_forbidden_members(&group, path)?,
        _ => return Err(Failure::usage("provide exactly one of --forbidden / --forbidden-file")),
    };
    Ok((group, members))
}

fn forbidden_or_fail(
    group: &FiniteAbelianGroup,
    members: Vec<delsarte_core::group::GroupElement>,
) -> Result<ForbiddenSet, Failure> {
    io::build_forbidden(group, members).map_err(Failure::inconclusive)
}

fn optimal_or_fail(
    group: &FiniteAbelianGroup,
    a: &ForbiddenSet,
    tol: f64,
) -> Result<(DelsarteWitness, f64), Failure> {
    optimal_witness(group, a, tol).map_err(|e| match e {
        DelsarteError::Lp(_) => Failure::infeasible(e.to_string()),
        _ => Failure::inconclusive(e.to_string()),
    })
}

fn write_output(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| if body.ends_with('\n') { Ok(()) } else { stdout.write_all(b"\n") })
                .map_err(|e| Failure::usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, report: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
    let format = cli.format.unwrap_or(OutputFormat::Json);
    let body = match format {
        OutputFormat::Json => serde_json::to_string_pretty(report)
            .map_err(|e| Failure::usage(format!("serialization failed: {e}")))?,
        OutputFormat::Text => text(),
        OutputFormat::Csv => return Err(Failure::usage("csv output only applies to `mub sweep`")),
    };
    write_output(cli, &body)
}

#[derive(Serialize)]
pub struct GroupJson {
    pub cyclic_orders: Vec<u32>,
}

impl GroupJson {
    fn new(group: &FiniteAbelianGroup) -> Self {
        Self { cyclic_orders: group.cyclic_orders().to_vec() }
    }
}

#[derive(Serialize)]
pub struct BoundReportJson {
    pub tolerances: ToleranceSet,
    pub group: GroupJson,
    pub forbidden_members: Vec<Vec<u32>>,
    pub bound: f64,
    /// Dual values of the optimal witness, canonical character order.
    pub hhat: Vec<f64>,
    pub null_characters: Vec<Vec<u32>>,
    pub h: FunctionFile,
}

fn cmd_bound(cli: &Cli, instance: &InstanceArgs) -> Result<u8, Failure> {
    let (group, members) = load_instance(instance)?;
    let a = forbidden_or_fail(&group, members)?;
    let (witness, bound) = optimal_or_fail(&group, &a, cli.tol)?;
    let report = BoundReportJson {
        tolerances: ToleranceSet::new(cli.tol),
        group: GroupJson::new(&group),
        forbidden_members: io::forbidden_members_json(&a),
        bound,
        hhat: witness.hhat.clone(),
        null_characters: witness
            .null_set
            .iter()
            .map(|&gamma| group.character_at(gamma).coords().to_vec())
            .collect(),
        h: FunctionFile::from_function(&witness.h),
    };
    emit(cli, &report, || render::text_bound(&report))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
pub struct VerifyReportJson {
    pub tolerances: ToleranceSet,
    pub group: GroupJson,
    pub forbidden_members: Vec<Vec<u32>>,
    pub valid: bool,
    /// `h(0)/ĥ(1)` when defined and valid.
    pub bound: Option<f64>,
    pub bound_defined: bool,
    pub violations: Option<String>,
}

fn cmd_verify(
    cli: &Cli,
    instance: &InstanceArgs,
    witness_path: &std::path::Path,
) -> Result<u8, Failure> {
    let (group, members) = load_instance(instance)?;
    let a = forbidden_or_fail(&group, members)?;
    let h = io::read_function(&group, witness_path)?;
    let tolerances = ToleranceSet::new(cli.tol);
    let base = VerifyReportJson {
        tolerances,
        group: GroupJson::new(&group),
        forbidden_members: io::forbidden_members_json(&a),
        valid: false,
        bound: None,
        bound_defined: false,
        violations: None,
    };
    let (report, code) = match verify_witness(&a, &h, cli.tol) {
        Ok(witness) => {
            let bound_defined = witness.bound_defined();
            let bound = delsarte_bound(&witness).ok();
            (VerifyReportJson { valid: true, bound, bound_defined, ..base }, EXIT_OK)
        }
        Err(e) => (VerifyReportJson { violations: Some(e.to_string()), ..base }, EXIT_INCONCLUSIVE),
    };
    emit(cli, &report, || render::text_verify(&report))?;
    Ok(code)
}

#[derive(Serialize)]
pub struct ImproveReportJson {
    pub tolerances: ToleranceSet,
    pub group: GroupJson,
    pub forbidden_members: Vec<Vec<u32>>,
    pub classical_bound: f64,
    pub prescribed_members: Vec<Vec<u32>>,
    pub quality: f64,
    pub improved_bound: f64,
    pub improvement_applied: bool,
    pub second_witness: FunctionFile,
}

fn cmd_improve(
    cli: &Cli,
    instance: &InstanceArgs,
    witness_path: Option<&std::path::Path>,
    second_path: Option<&std::path::Path>,
    prescribed: &Option<String>,
) -> Result<u8, Failure> {
    let (group, members) = load_instance(instance)?;
    let a = forbidden_or_fail(&group, members)?;

    let (witness, classical_bound) = match witness_path {
        Some(path) => {
            let h = io::read_function(&group, path)?;
            let witness = verify_witness(&a, &h, cli.tol)
                .map_err(|e| Failure::inconclusive(e.to_string()))?;
            let bound =
                delsarte_bound(&witness).map_err(|e| Failure::inconclusive(e.to_string()))?;
            (witness, bound)
        }
        None => optimal_or_fail(&group, &a, cli.tol)?,
    };

    let c_indices: std::collections::BTreeSet<usize> = match prescribed {
        Some(text) => io::parse_elements(&group, text)?.iter().map(|e| group.index_of(e)).collect(),
        None => Default::default(),
    };

    let second: SecondWitness = match second_path {
        Some(path) => {
            let k = io::read_function(&group, path)?;
            verify_second_witness(&witness, &k, &c_indices, cli.tol)
                .map_err(|e| Failure::inconclusive(e.to_string()))?
        }
        None => {
            if c_indices.is_empty() {
                return Err(Failure::usage(
                    "synthesis needs --prescribed; or supply --second-witness",
                ));
            }
            synthesize_second_witness(&witness, &c_indices, cli.tol).map_err(|e| match e {
                ImprovedError::Infeasible { .. } => Failure::infeasible(e.to_string()),
                _ => Failure::inconclusive(e.to_string()),
            })?
        }
    };

    let improved = improved_bound(&witness, &second, cli.tol)
        .map_err(|e| Failure::inconclusive(e.to_string()))?;
    let report = ImproveReportJson {
        tolerances: ToleranceSet::new(cli.tol),
        group: GroupJson::new(&group),
        forbidden_members: io::forbidden_members_json(&a),
        classical_bound,
        prescribed_members: c_indices
            .iter()
            .map(|&i| group.element_at(i).coords().to_vec())
            .collect(),
        quality: second.quality,
        improved_bound: improved.value,
        improvement_applied: improved.improvement_applied,
        second_witness: FunctionFile::from_function(&second.k),
    };
    emit(cli, &report, || render::text_improve(&report))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
pub struct CorollaryReportJson {
    pub tolerances: ToleranceSet,
    pub group: GroupJson,
    pub forbidden_members: Vec<Vec<u32>>,
    pub pinned_members: Vec<Vec<u32>>,
    pub m: usize,
    pub threshold: f64,
    pub d_members: Vec<Vec<u32>>,
    pub excluded: bool,
    /// Distance to the threshold; absent when `D` is empty (vacuous) or
    /// the verdict is inconclusive.
    pub margin: Option<f64>,
    pub side: Option<String>,
    pub reason: Option<String>,
}

fn cmd_corollary(
    cli: &Cli,
    instance: &InstanceArgs,
    pinned_text: &str,
    witness_path: Option<&std::path::Path>,
    second_path: &std::path::Path,
    m_arg: Option<usize>,
) -> Result<u8, Failure> {
    let (group, members) = load_instance(instance)?;
    let a = forbidden_or_fail(&group, members)?;
    let (witness, bound) = match witness_path {
        Some(path) => {
            let h = io::read_function(&group, path)?;
            let witness = verify_witness(&a, &h, cli.tol)
                .map_err(|e| Failure::inconclusive(e.to_string()))?;
            let bound =
                delsarte_bound(&witness).map_err(|e| Failure::inconclusive(e.to_string()))?;
            (witness, bound)
        }
        None => optimal_or_fail(&group, &a, cli.tol)?,
    };
    let m = m_arg.unwrap_or_else(|| bound.round() as usize);
    let pinned: Vec<usize> =
        io::parse_elements(&group, pinned_text)?.iter().map(|e| group.index_of(e)).collect();
    let k = io::read_function(&group, second_path)?;

    let verdict = corollary_check(&witness, &pinned, &k, m, cli.tol)
        .map_err(|e| Failure::inconclusive(e.to_string()))?;

    let (excluded, margin, side, reason) = match &verdict.outcome {
        CorollaryOutcome::Excluded { margin, side } => (
            true,
            margin.is_finite().then_some(*margin),
            side.map(|s| match s {
                Side::Above => "above".to_string(),
                Side::Below => "below".to_string(),
            }),
            None,
        ),
        CorollaryOutcome::Inconclusive { reason } => (false, None, None, Some(reason.to_string())),
    };
    let report = CorollaryReportJson {
        tolerances: ToleranceSet::new(cli.tol),
        group: GroupJson::new(&group),
        forbidden_members: io::forbidden_members_json(&a),
        pinned_members: pinned.iter().map(|&i| group.element_at(i).coords().to_vec()).collect(),
        m,
        threshold: verdict.threshold,
        d_members: verdict.d_set.iter().map(|&i| group.element_at(i).coords().to_vec()).collect(),
        excluded,
        margin,
        side,
        reason,
    };
    emit(cli, &report, || render::text_corollary(&report))?;
    Ok(if excluded { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

#[derive(Serialize)]
pub struct SampleCheckJson {
    pub seed: u64,
    pub found: bool,
    pub search_residual: f64,
    pub phases: Vec<f64>,
    pub k_re: Option<f64>,
    pub k_im: Option<f64>,
    pub below_k_cap: bool,
    pub below_threshold: bool,
}

#[derive(Serialize)]
pub struct ChainJson {
    pub c_above_0843: f64,
    pub cap_below_37: f64,
    pub k_cap_below_17_over_486: f64,
    pub seventeen_486_vs_one_30: f64,
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub tolerances: ToleranceSet,
    pub a_phase: f64,
    pub b_phase: f64,
    pub c_closed_form: f64,
    pub c_numeric: f64,
    pub c_agreement: f64,
    pub active_case: String,
    pub lagrange_residual_at_optimum: f64,
    pub s_square_cap: f64,
    pub k_cap: f64,
    pub threshold: f64,
    pub margin: f64,
    pub chain: ChainJson,
    pub ab_independent: bool,
    pub samples: Vec<SampleCheckJson>,
    pub samples_complete: bool,
    pub verdict: bool,
}

fn active_case_name(case: ActiveCase) -> String {
    match case {
        ActiveCase::Interior => "interior".to_string(),
        ActiveCase::OneActive(c) => format!("one-active-{c:?}").to_lowercase(),
        ActiveCase::BothActive => "both-active".to_string(),
    }
}

pub fn certificate_json(tol: f64, certificate: &Certificate) -> CertificateJson {
    CertificateJson {
        tolerances: ToleranceSet::new(tol),
        a_phase: certificate.a_phase,
        b_phase: certificate.b_phase,
        c_closed_form: certificate.c_closed_form,
        c_numeric: certificate.c_numeric,
        c_agreement: certificate.c_agreement,
        active_case: active_case_name(certificate.active_case),
        lagrange_residual_at_optimum: certificate.lagrange_residual_at_optimum,
        s_square_cap: certificate.s_square_cap,
        k_cap: certificate.k_cap,
        threshold: certificate.threshold,
        margin: certificate.margin,
        chain: ChainJson {
            c_above_0843: certificate.chain.c_above_0843,
            cap_below_37: certificate.chain.cap_below_37,
            k_cap_below_17_over_486: certificate.chain.k_cap_below_17_over_486,
            seventeen_486_vs_one_30: certificate.chain.seventeen_486_vs_one_30,
        },
        ab_independent: certificate.ab_independent,
        samples: certificate
            .samples
            .iter()
            .map(|s| SampleCheckJson {
                seed: s.seed,
                found: s.found,
                search_residual: s.search_residual,
                phases: s.phases.clone(),
                k_re: s.found.then_some(s.k_re),
                k_im: s.found.then_some(s.k_im),
                below_k_cap: s.below_k_cap,
                below_threshold: s.below_threshold,
            })
            .collect(),
        samples_complete: certificate.samples_complete,
        verdict: certificate.verdict,
    }
}

fn cmd_certify(
    cli: &Cli,
    a_phase: f64,
    b_phase: f64,
    samples: usize,
    matrix_out: Option<&std::path::Path>,
) -> Result<u8, Failure> {
    let params = FourierFamilyParams::from_phases(a_phase, b_phase);
    if let Some(path) = matrix_out {
        let matrix = MatrixFile::from_matrix(&fourier_family(&params));
        let body = serde_json::to_string_pretty(&matrix)
            .map_err(|e| Failure::usage(format!("serialization failed: {e}")))?;
        fs::write(path, body)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let certificate = build_certificate(&params, samples, cli.seed);
    let report = certificate_json(cli.tol, &certificate);
    emit(cli, &report, || render::text_certificate(&report))?;
    Ok(if certificate.verdict { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

#[derive(Serialize)]
pub struct SweepRowJson {
    pub a_phase: f64,
    pub b_phase: f64,
    pub verdict: bool,
    pub margin: f64,
    pub n_samples: usize,
    pub worst_sample_k: Option<f64>,
}

fn cmd_sweep(cli: &Cli, grid: usize, samples: usize) -> Result<u8, Failure> {
    if grid == 0 {
        return Err(Failure::usage("grid must be positive"));
    }
    let total = grid * grid;
    let jobs = cli.jobs.max(1).min(total);
    let rows: Mutex<Vec<Option<SweepRowJson>>> = Mutex::new((0..total).map(|_| None).collect());
    let next: Mutex<usize> = Mutex::new(0);
    // The constrained minimization never references (a, b); compute it
    // once for the whole sweep.
    let minimum = minimize_g0();

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let index = {
                    let mut guard = next.lock().expect("queue lock");
                    if *guard >= total {
                        break;
                    }
                    let i = *guard;
                    *guard += 1;
                    i
                };
                let (i, j) = (index / grid, index % grid);
                let a_phase = 2.0 * std::f64::consts::PI * i as f64 / grid as f64;
                let b_phase = 2.0 * std::f64::consts::PI * j as f64 / grid as f64;
                let params = FourierFamilyParams::from_phases(a_phase, b_phase);
                let seed = cli.seed.wrapping_add(index as u64).wrapping_mul(0x9e3779b9);
                let certificate = build_certificate_with(&minimum, &params, samples, seed);
                let row = SweepRowJson {
                    a_phase,
                    b_phase,
                    verdict: certificate.verdict,
                    margin: certificate.margin,
                    n_samples: certificate.samples.iter().filter(|s| s.found).count(),
                    worst_sample_k: worst_sample_k(&certificate),
                };
                rows.lock().expect("rows lock")[index] = Some(row);
            });
        }
    });

    let rows: Vec<SweepRowJson> =
        rows.into_inner().expect("rows lock").into_iter().map(|r| r.expect("filled")).collect();
    let all_true = rows.iter().all(|r| r.verdict);

    let format = cli.format.unwrap_or(OutputFormat::Csv);
    let body = match format {
        OutputFormat::Csv => {
            let mut out = String::from("a_phase,b_phase,verdict,margin,n_samples,worst_sample_K\n");
            for r in &rows {
                let worst = r.worst_sample_k.map(|v| v.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.a_phase, r.b_phase, r.verdict, r.margin, r.n_samples, worst
                ));
            }
            out
        }
        OutputFormat::Json => serde_json::to_string_pretty(&rows)
            .map_err(|e| Failure::usage(format!("serialization failed: {e}")))?,
        OutputFormat::Text => {
            return Err(Failure::usage("sweep emits csv or json; use --format csv"))
        }
    };
    write_output(cli, &body)?;
    Ok(if all_true { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

#[derive(Serialize)]
pub struct OptimizeCReportJson {
    pub tolerances: ToleranceSet,
    pub c_numeric: f64,
    pub c_closed_form: f64,
    pub agreement: f64,
    pub active_case: String,
    pub argmin_alpha: f64,
    pub argmin_beta: f64,
    pub lagrange_residuals: [f64; 4],
    pub refined: bool,
}

fn cmd_optimize_c(cli: &Cli) -> Result<u8, Failure> {
    let minimum = minimize_g0();
    let closed = closed_form_c();
    let report = OptimizeCReportJson {
        tolerances: ToleranceSet::new(cli.tol),
        c_numeric: minimum.value,
        c_closed_form: closed,
        agreement: (minimum.value - closed).abs(),
        active_case: active_case_name(minimum.case),
        argmin_alpha: minimum.point.alpha,
        argmin_beta: minimum.point.beta,
        lagrange_residuals: minimum.residuals,
        refined: minimum.refined,
    };
    let ok = report.refined && report.agreement < 1e-6;
    emit(cli, &report, || render::text_optimize_c(&report))?;
    Ok(if ok { EXIT_OK } else { EXIT_INFEASIBLE })
}

#[derive(Serialize)]
pub struct MaxBReportJson {
    pub tolerances: ToleranceSet,
    pub group: GroupJson,
    pub forbidden_members: Vec<Vec<u32>>,
    pub max_cardinality: usize,
    /// Lexicographically least maximizer.
    pub example: Vec<Vec<u32>>,
}

fn cmd_maxb(cli: &Cli, instance: &InstanceArgs) -> Result<u8, Failure> {
    let (group, members) = load_instance(instance)?;
    let a = forbidden_or_fail(&group, members)?;
    let result = brute_force_max(&group, &a).map_err(|e| match e {
        DelsarteError::GroupTooLarge { .. } => Failure::usage(e.to_string()),
        _ => Failure::inconclusive(e.to_string()),
    })?;
    let report = MaxBReportJson {
        tolerances: ToleranceSet::new(cli.tol),
        group: GroupJson::new(&group),
        forbidden_members: io::forbidden_members_json(&a),
        max_cardinality: result.cardinality,
        example: result.example.iter().map(|&i| group.element_at(i).coords().to_vec()).collect(),
    };
    emit(cli, &report, || render::text_maxb(&report))?;
    Ok(EXIT_OK)
}

/// Re-exported for integration tests: a witness for the given instance.
pub fn witness_for(
    group: &FiniteAbelianGroup,
    a: &ForbiddenSet,
    tol: f64,
) -> Result<(DelsarteWitness, f64), String> {
    optimal_witness(group, a, tol).map_err(|e| e.to_string())
}

/// Re-exported for integration tests: function file for an arbitrary
/// group function.
pub fn function_file(f: &GroupFunction) -> FunctionFile {
    FunctionFile::from_function(f)
}
