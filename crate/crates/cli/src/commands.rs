use std::fs;
use std::path::Path;

use lpsas_core::exact::{Rational, Tensor};
use lpsas_core::fixture::{self, audit_printed_example};
use lpsas_core::frame::{
    connection_report, curvature, koszul_levi_civita, metricity, torsion, validate_manifold, Connection, CurvatureData,
    FrameManifold, GeometryError,
};
use lpsas_core::paracontact::{
    audit_closed_forms, audit_point, general_connection, lp_identity_suite, parameter_grid, preset_connection,
    verify_almost_paracontact, verify_lp_sasakian, ConnectionParams, ParacontactStructure,
};
use lpsas_core::report::{AuditReport, Check, Parameters};
use lpsas_core::soliton::{
    conformal_killing_check, eta_einstein_decompose, ricci_semisymmetric_check, solve_with, theorem1_check,
    theorem2_check, theorem4_check, BarredData, SolitonCoefficients, SolitonSolution,
};
use lpsas_core::spec_file::{emit_paper_example, load_spec, to_json, SpecError};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, ParamArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// The input is well formed but lacks the structure a command needs.
    Precondition(String),
    Spec(SpecError),
    Io(String),
    Geometry(GeometryError),
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Spec(e)
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Geometry(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Spec(e) if !e.is_parse() => 1,
            CliError::Geometry(_) | CliError::Precondition(_) => 1,
            CliError::Spec(_) | CliError::Io(_) => 3,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Precondition(m) | CliError::Io(m) => m.clone(),
            CliError::Spec(e) => e.to_string(),
            CliError::Geometry(e) => e.to_string(),
        }
    }
}

/// What a command produced: a data document and the report that decides
/// the exit code. `raw` output bypasses formatting.
#[allow(clippy::large_enum_variant)] // built once per process
pub enum Outcome {
    Document { data: Value, report: AuditReport },
    Raw(String),
    Written,
}

#[derive(Serialize)]
struct Component {
    index: Vec<usize>,
    value: Rational,
}

/// Nonzero components, 1-based.
fn components(t: &Tensor) -> Vec<Component> {
    t.entries()
        .filter(|(_, v)| !v.is_zero())
        .map(|(ix, v)| Component {
            index: ix.iter().map(|i| i + 1).collect(),
            value: v.clone(),
        })
        .collect()
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report data always serializes")
}

fn point(params: &ConnectionParams) -> Parameters {
    Parameters::Point {
        a: params.a.clone(),
        b: params.b.clone(),
    }
}

struct Loaded {
    m: FrameManifold,
    p: ParacontactStructure,
    lc: Connection,
    /// The structure passed the LP-Sasakian checks, so the closed forms and
    /// theorem checkers apply.
    lp: bool,
}

fn load(file: &Path) -> Result<Loaded, CliError> {
    let (m, p) = load_spec(file)?;
    let lc = koszul_levi_civita(&m)?;
    let lp = verify_almost_paracontact(&m, &p).is_consistent() && verify_lp_sasakian(&m, &p, &lc).is_consistent();
    Ok(Loaded { m, p, lc, lp })
}

fn connection_for(l: &Loaded, args: &ParamArgs) -> Connection {
    match (args.preset, args.params()) {
        (Some(preset), _) => preset_connection(&l.m, &l.p, &l.lc, preset),
        (None, Some(params)) => general_connection(&l.m, &l.p, &l.lc, &params),
        (None, None) => l.lc.clone(),
    }
}

fn not_lp(name: &str) -> Check {
    Check::skipped(name, "structure is not LP-Sasakian")
}

fn parse_x(spec: &str, p: &ParacontactStructure) -> Result<Vec<Rational>, CliError> {
    if spec.trim() == "xi" {
        return Ok(p.xi().to_vec());
    }
    let x = spec
        .split(',')
        .map(|s| s.parse::<Rational>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(format!("--x: {e}")))?;
    if x.len() != p.dim() {
        return Err(CliError::Usage(format!(
            "--x: expected {} components, found {}",
            p.dim(),
            x.len()
        )));
    }
    Ok(x)
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Verify { file } => verify(file),
        Command::Connection { file, params } => connection(file, params),
        Command::Curvature { file, params } => curvature_cmd(file, params, Quantity::Curvature),
        Command::Ricci { file, params } => curvature_cmd(file, params, Quantity::Ricci),
        Command::Scalar { file, params } => curvature_cmd(file, params, Quantity::Scalar),
        Command::Soliton { file, x, params } => soliton(file, x, params),
        Command::Crosscheck {
            file,
            grid,
            include_presets,
            jobs,
        } => crosscheck(file, *grid as usize, *include_presets, jobs.map(usize::from)),
        Command::Theorems { file, params } => theorems(file, params),
        Command::PaperExample { out } => {
            let text = to_json(&emit_paper_example());
            match out {
                Some(path) => {
                    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    Ok(Outcome::Written)
                }
                None => Ok(Outcome::Raw(text)),
            }
        }
    }
}

fn verify(file: &Path) -> Result<Outcome, CliError> {
    let l = load(file)?;
    let mut report = AuditReport::new("verify");
    report.absorb("frame:", validate_manifold(&l.m));
    report.absorb("levi-civita:", connection_report(&l.m, &l.lc));
    report.absorb("lp-sasakian:", verify_lp_sasakian(&l.m, &l.p, &l.lc));
    if l.lp {
        let curv = curvature(&l.m, &l.lc)?;
        report.absorb("identities:", lp_identity_suite(&l.m, &l.p, &curv)?);
    } else {
        report.push(not_lp("identities"));
    }
    let data = json!({
        "dim": l.m.dim(),
        "lambda": l.p.lambda(),
        "lp_sasakian": l.lp,
    });
    Ok(Outcome::Document {
        data,
        report: report.finalize(),
    })
}

fn connection(file: &Path, args: &ParamArgs) -> Result<Outcome, CliError> {
    let l = load(file)?;
    if args.params().is_some() && !l.lp {
        return Err(CliError::Precondition(
            "the general connection needs an LP-Sasakian structure; run `verify`".into(),
        ));
    }
    let conn = connection_for(&l, args);
    let mut report = connection_report(&l.m, &conn);
    if let Some(params) = args.params() {
        report = report.with_parameters(point(&params));
    }
    let data = json!({
        "provenance": to_value(&conn.provenance),
        "layout": "index [k, i, j]: e_k component of nabla_{e_i} e_j",
        "coefficients": to_value(&components(conn.coefficients())),
        "torsion": to_value(&components(&torsion(&l.m, &conn))),
        "metricity": to_value(&components(&metricity(&l.m, &conn))),
    });
    Ok(Outcome::Document {
        data,
        report: report.finalize(),
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Curvature,
    Ricci,
    Scalar,
}

impl Quantity {
    fn keyword(self) -> &'static str {
        match self {
            Quantity::Curvature => "curvature",
            Quantity::Ricci => "ricci",
            Quantity::Scalar => "scalar",
        }
    }
}

fn quantity_data(q: Quantity, conn: &Connection, c: &CurvatureData) -> Value {
    match q {
        Quantity::Curvature => json!({
            "connection": to_value(&conn.provenance),
            "layout": "index [l, i, j, k]: e_l component of R(e_i, e_j) e_k",
            "curvature": to_value(&components(&c.riemann)),
        }),
        Quantity::Ricci => json!({
            "connection": to_value(&conn.provenance),
            "layout": "ricci [j, k]: S(e_j, e_k); ricci_operator [j, k]: e_j component of Q e_k",
            "ricci": to_value(&components(&c.ricci)),
            "ricci_operator": to_value(&components(&c.ricci_op)),
        }),
        Quantity::Scalar => json!({
            "connection": to_value(&conn.provenance),
            "scalar": c.scalar,
        }),
    }
}

fn curvature_cmd(file: &Path, args: &ParamArgs, q: Quantity) -> Result<Outcome, CliError> {
    let l = load(file)?;
    let params = args.params();
    if params.is_some() && !l.lp {
        return Err(CliError::Precondition(
            "the general connection needs an LP-Sasakian structure; run `verify`".into(),
        ));
    }
    let conn = connection_for(&l, args);
    let curv = curvature(&l.m, &conn)?;
    let curv_lc = curvature(&l.m, &l.lc)?;
    let mut report = AuditReport::new(q.keyword());
    match &params {
        Some(params) => {
            let full = audit_point(&l.m, &l.p, &l.lc, &curv_lc, params)?;
            for check in full.checks {
                if check.name.contains(q.keyword()) {
                    report.push(check);
                }
            }
            report = report.with_parameters(point(params));
        }
        None if l.lp => {
            let suite = lp_identity_suite(&l.m, &l.p, &curv_lc)?;
            let keep = |name: &str| match q {
                Quantity::Curvature => name.starts_with("R(") || name.starts_with("eta(R"),
                Quantity::Ricci => name.starts_with('S') || name.starts_with('Q'),
                Quantity::Scalar => false,
            };
            for check in suite.checks {
                if keep(&check.name) {
                    report.push(check);
                }
            }
        }
        None => report.push(not_lp("identities")),
    }
    Ok(Outcome::Document {
        data: quantity_data(q, &conn, &curv),
        report: report.finalize(),
    })
}

fn solution_report(solution: &SolitonSolution) -> AuditReport {
    let mut report = AuditReport::new("soliton").with_parameters(point(&solution.params));
    let mut residual = Check::pass("every basis tuple has zero residual");
    if !solution.residual_check {
        residual.status = lpsas_core::report::Status::Fail;
    }
    report.push(residual);
    report.finalize()
}

fn soliton(file: &Path, x: &str, args: &ParamArgs) -> Result<Outcome, CliError> {
    let l = load(file)?;
    if !l.lp {
        return Err(CliError::Precondition(
            "the soliton equation needs an LP-Sasakian structure; run `verify`".into(),
        ));
    }
    let x = parse_x(x, &l.p)?;
    let params = args.params_or_zero();
    let data = BarredData::compute(&l.m, &l.p, &params)?;
    let solution = solve_with(&l.m, &l.p, &data, &x);
    let dependent = solution.dependent_map().map(|[delta, epsilon]| {
        json!({
            "delta": to_value(&delta),
            "epsilon": to_value(&epsilon),
        })
    });
    let doc = json!({
        "params": to_value(&params),
        "x": to_value(&x),
        "dimension": solution.dimension(),
        "basis": to_value(&solution.basis),
        "classification": to_value(&solution.classification),
        "admissible_exists": solution.admissible_exists,
        "cases": to_value(&solution.cases),
        "dependent_on_alpha_beta_gamma": dependent,
    });
    Ok(Outcome::Document {
        data: doc,
        report: solution_report(&solution),
    })
}

fn crosscheck(file: &Path, size: usize, include_presets: bool, jobs: Option<usize>) -> Result<Outcome, CliError> {
    let l = load(file)?;
    if !l.lp {
        return Err(CliError::Precondition(
            "the closed forms need an LP-Sasakian structure; run `verify`".into(),
        ));
    }
    let grid = parameter_grid(size, include_presets);
    let builtin = {
        let (m0, p0) = fixture::example_manifold();
        l.m.metric() == m0.metric() && l.m.structure() == m0.structure() && l.p == p0
    };
    let work = || -> Result<AuditReport, CliError> {
        let mut report = audit_closed_forms(&l.m, &l.p, &grid)?;
        if builtin {
            use rayon::prelude::*;
            let printed: Vec<_> = grid.par_iter().map(audit_printed_example).collect();
            for (params, r) in grid.iter().zip(printed) {
                report.absorb(&format!("[{}] printed example:", params.label()), r?);
            }
            report = report.finalize();
        }
        Ok(report)
    };
    let report = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let data = json!({
        "points": grid.len(),
        "builtin_example": builtin,
        "reference_discrepancies": report.failures().count(),
    });
    Ok(Outcome::Document { data, report })
}

fn theorems(file: &Path, args: &ParamArgs) -> Result<Outcome, CliError> {
    let l = load(file)?;
    if !l.lp {
        return Err(CliError::Precondition(
            "the theorem checkers need an LP-Sasakian structure; run `verify`".into(),
        ));
    }
    let (m, p) = (&l.m, &l.p);
    let params = args.params_or_zero();
    let data = BarredData::compute(m, p, &params)?;
    let xi = p.xi().to_vec();
    let solution = solve_with(m, p, &data, &xi);
    let one = Rational::one();
    let zero = Rational::zero();
    // A soliton with alpha = 1 when one exists, otherwise the first basis tuple.
    let coeffs = match solution.dependent_map() {
        Some([d, e]) => SolitonCoefficients::new(one.clone(), zero.clone(), zero.clone(), d[0].clone(), e[0].clone()),
        None => solution.basis.first().cloned().unwrap_or_else(SolitonCoefficients::zero),
    };

    let mut report = AuditReport::new("theorems").with_parameters(point(&params));
    report.absorb("soliton along f xi (f = 1):", theorem1_check(m, p, &params, &one, &coeffs)?);

    let decomposition = eta_einstein_decompose(m, p, data.ricci());
    let pqr = if decomposition.residual_norm_zero {
        [decomposition.f1.clone(), decomposition.f2.clone(), decomposition.f3.clone()]
    } else {
        [one.clone(), one.clone(), one.clone()]
    };
    let samples = [(1, 0), (1, 1), (2, -3)].map(|(a, g)| (Rational::integer(a), Rational::integer(g)));
    report.absorb(
        "synthetic eta-Einstein:",
        theorem2_check(m, p, &params, [&pqr[0], &pqr[1], &pqr[2]], &samples)?,
    );
    report.absorb(
        "ricci semisymmetry:",
        ricci_semisymmetric_check(m, p, &params, &data.curvature, data.ricci())?,
    );
    let (h, conformal) = conformal_killing_check(m, p, &params, &xi, &coeffs)?;
    report.absorb("conformal Killing X = xi:", conformal);
    let (torse, t4) = theorem4_check(m, p, &params, &xi, &coeffs)?;
    report.absorb("torse-forming X = xi:", t4);

    let doc = json!({
        "params": to_value(&params),
        "soliton_coefficients": to_value(&coeffs),
        "eta_einstein": to_value(&decomposition),
        "conformal_factor": h,
        "torse_forming": to_value(&torse),
    });
    Ok(Outcome::Document {
        data: doc,
        report: report.finalize(),
    })
}
