//! Acceptance criteria, one line per criterion. Every comparison is exact.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use lpsas_core::exact::{q, Rational};
use lpsas_core::fixture::{audit_printed_example, example_manifold, printed};
use lpsas_core::frame::{curvature, koszul_levi_civita, metricity, torsion, FrameManifold};
use lpsas_core::paracontact::{
    closed_form_ricci_operator_bar, closed_form_scalar_bar, general_connection, parameter_grid, verify_almost_paracontact,
    verify_lp_sasakian, ConnectionParams, ParacontactStructure, Preset,
};
use lpsas_core::report::{CheckKind, Status};
use lpsas_core::soliton::{
    lie_derivative, lie_derivative_c1_form, soliton_residual, soliton_solve, theorem2_check, theorem4_check,
    torse_forming, BarredData, SolitonCoefficients,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn random_params(rng: &mut ChaCha8Rng, count: usize) -> Vec<ConnectionParams> {
    (0..count)
        .map(|_| ConnectionParams::new(rational(rng), rational(rng)))
        .collect()
}

/// The 5 × 5 grid together with the four presets.
fn grid_with_presets() -> Vec<ConnectionParams> {
    let mut g = parameter_grid(5, false);
    for p in Preset::ALL {
        if !g.contains(&p.params()) {
            g.push(p.params());
        }
    }
    g
}

fn fixture() -> (FrameManifold, ParacontactStructure) {
    example_manifold()
}

fn c1_axioms() -> Outcome {
    let start = Instant::now();
    let (m, p) = fixture();
    let lc = koszul_levi_civita(&m).map_err(|e| e.to_string())?;
    let almost = verify_almost_paracontact(&m, &p);
    let lp = verify_lp_sasakian(&m, &p, &lc);
    let elapsed = start.elapsed();
    ensure(almost.all_pass(), || format!("almost paracontact failures: {:?}", names(&almost)))?;
    ensure(lp.all_pass(), || format!("LP-Sasakian failures: {:?}", names(&lp)))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{} checks pass in {elapsed:?}", almost.checks.len() + lp.checks.len()))
}

fn names(r: &lpsas_core::report::AuditReport) -> Vec<String> {
    r.failures().map(|c| c.name.clone()).collect()
}

fn c2_levi_civita() -> Outcome {
    let (m, _) = fixture();
    let lc = koszul_levi_civita(&m).map_err(|e| e.to_string())?;
    ensure(torsion(&m, &lc).is_zero(), || "torsion nonzero".into())?;
    ensure(metricity(&m, &lc).is_zero(), || "metricity nonzero".into())?;
    let table = printed::levi_civita();
    for i in 0..4 {
        for k in 0..4 {
            ensure(lc.gamma(k, i, 3) == table.gamma(k, i, 3), || {
                format!("nabla_e{} e4 differs at e{}", i + 1, k + 1)
            })?;
        }
    }
    let report = audit_printed_example(&ConnectionParams::zero()).map_err(|e| e.to_string())?;
    let diag = report.check("levi-civita: printed vs koszul").ok_or("diagonal check missing")?;
    ensure(diag.status == Status::Fail && diag.kind == CheckKind::Reference, || {
        "diagonal deviation not flagged".into()
    })?;
    ensure(report.is_consistent(), || "printed audit has a consistency failure".into())?;
    let w = &diag.witnesses[0];
    Ok(format!(
        "column e4 matches; diagonal flagged: printed {} vs Koszul {} at {:?}",
        w.expected, w.actual, w.index
    ))
}

fn c3_curvature() -> Outcome {
    let (m, p) = fixture();
    let lc = koszul_levi_civita(&m).map_err(|e| e.to_string())?;
    let grid = grid_with_presets();
    for params in &grid {
        let conn = general_connection(&m, &p, &lc, params);
        let r = curvature(&m, &conn).map_err(|e| e.to_string())?;
        let e1 = [q(1), q(0), q(0), q(0)];
        let e4 = [q(0), q(0), q(0), q(1)];
        let got = r.apply(&e1, &e4, &e1);
        let c = -(&params.a + &params.a * &params.b + &params.b + q(1));
        let expected = vec![q(0), q(0), q(0), c];
        ensure(got == expected, || format!("at {params}: {got:?}"))?;
    }
    Ok(format!("R(e1,e4)e1 = -(a+ab+b+1)e4 at {} points incl. presets", grid.len()))
}

fn c4_ricci_xi() -> Outcome {
    let (m, p) = fixture();
    let grid = grid_with_presets();
    for params in &grid {
        let data = BarredData::compute(&m, &p, params).map_err(|e| e.to_string())?;
        let s44 = data.ricci().get(&[3, 3]).clone();
        let (a, b) = (&params.a, &params.b);
        let printed_form = q(-3) * (a - b - a * b + q(1));
        let factored = -(q(3) * (a + q(1)) * (q(1) - b));
        ensure(printed_form == factored, || format!("identity fails at {params}"))?;
        ensure(s44 == printed_form, || format!("at {params}: S(e4,e4) = {s44}"))?;
    }
    Ok(format!("S(e4,e4) = -3(a-b-ab+1) at {} points", grid.len()))
}

fn c5_scalar() -> Outcome {
    let (m, p) = fixture();
    let lc = koszul_levi_civita(&m).map_err(|e| e.to_string())?;
    let r = curvature(&m, &lc).map_err(|e| e.to_string())?.scalar;
    let g_inv = m.inverse_metric().map_err(|e| e.to_string())?.clone();
    let grid = grid_with_presets();
    for params in &grid {
        let data = BarredData::compute(&m, &p, params).map_err(|e| e.to_string())?;
        let s = data.ricci();
        let trace: Rational = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| &g_inv[(i, j)] * s.get(&[i, j]))
            .sum();
        let a = &params.a;
        let expected = &r - q(3) * a.square() + a * (a + q(2)) * q(9);
        ensure(trace == expected, || format!("at {params}: trace {trace}, expected {expected}"))?;
        let display = closed_form_scalar_bar(&r, 4, p.lambda(), params);
        ensure(display == expected, || format!("display at {params}: {display}"))?;
    }
    Ok(format!("r = {r}; trace S = r - 3a^2 + 9a(a+2) at {} points", grid.len()))
}

fn c6_c1_form(rng: &mut ChaCha8Rng) -> Outcome {
    let (m, p) = fixture();
    let lc = koszul_levi_civita(&m).map_err(|e| e.to_string())?;
    let params = random_params(rng, 5);
    let mut count = 0;
    for params in &params {
        let conn = general_connection(&m, &p, &lc, params);
        for _ in 0..20 {
            let x: Vec<Rational> = (0..4).map(|_| rational(rng)).collect();
            let direct = lie_derivative(&m, &conn, &x);
            let closed = lie_derivative_c1_form(&m, &p, &lc, params, &x);
            ensure(direct == closed, || format!("at {params}, X = {x:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (X, a, b) samples agree"))
}

fn c7_soliton(rng: &mut ChaCha8Rng) -> Outcome {
    let (m, p) = fixture();
    let xi = p.xi().to_vec();
    for params in random_params(rng, 5) {
        let data = BarredData::compute(&m, &p, &params).map_err(|e| e.to_string())?;
        let sol = soliton_solve(&m, &p, &params, &xi).map_err(|e| e.to_string())?;
        ensure(sol.dimension() == 3, || format!("at {params}: kernel dimension {}", sol.dimension()))?;
        ensure(sol.residual_check, || format!("at {params}: residual check false"))?;
        let l = data.lie(&m, &xi);
        for c in &sol.basis {
            let r = soliton_residual(&m, &p, data.ricci(), &l, &xi, c);
            ensure(r.is_zero(), || format!("at {params}: nonzero residual for {c:?}"))?;
        }
        let [d, e] = sol.dependent_map().ok_or_else(|| format!("at {params}: no affine map"))?;
        for c in &sol.basis {
            let abc = [&c.alpha, &c.beta, &c.gamma];
            let delta: Rational = d.iter().zip(abc).map(|(k, v)| k * v).sum();
            let eps: Rational = e.iter().zip(abc).map(|(k, v)| k * v).sum();
            ensure(delta == c.delta && eps == c.epsilon, || format!("at {params}: basis not affine"))?;
        }
        // Interpolate at a fresh point of (alpha, beta, gamma).
        let (al, be, ga) = (rational(rng), rational(rng), rational(rng));
        let delta = &d[0] * &al + &d[1] * &be + &d[2] * &ga;
        let eps = &e[0] * &al + &e[1] * &be + &e[2] * &ga;
        let c = SolitonCoefficients::new(al, be, ga, delta, eps);
        ensure(soliton_residual(&m, &p, data.ricci(), &l, &xi, &c).is_zero(), || {
            format!("at {params}: interpolated tuple fails")
        })?;
    }
    Ok("kernel dimension 3, zero residuals, delta and epsilon affine in (alpha, beta, gamma) at 5 points".into())
}

fn c8_reduction(rng: &mut ChaCha8Rng) -> Outcome {
    let (m, p) = fixture();
    let lc = koszul_levi_civita(&m).map_err(|e| e.to_string())?;
    let curv = curvature(&m, &lc).map_err(|e| e.to_string())?;
    let zero = ConnectionParams::zero();
    let data = BarredData::compute(&m, &p, &zero).map_err(|e| e.to_string())?;
    let c = &data.curvature;
    ensure(data.connection.coefficients() == lc.coefficients(), || "connection".into())?;
    ensure(c.riemann == curv.riemann, || "curvature".into())?;
    ensure(c.ricci == curv.ricci, || "ricci".into())?;
    ensure(c.ricci_op == curv.ricci_op, || "ricci operator".into())?;
    ensure(c.scalar == curv.scalar, || "scalar".into())?;
    let q_closed = closed_form_ricci_operator_bar(&m, &p, &curv.ricci_op, &zero).map_err(|e| e.to_string())?;
    ensure(q_closed == curv.ricci_op, || "closed-form ricci operator".into())?;
    for _ in 0..10 {
        let x: Vec<Rational> = (0..4).map(|_| rational(rng)).collect();
        ensure(data.lie(&m, &x) == lie_derivative(&m, &lc, &x), || format!("lie derivative at {x:?}"))?;
    }
    Ok("connection, R, S, Q, r and L_X g coincide at (0,0)".into())
}

fn c9_synthetic_eta_einstein(rng: &mut ChaCha8Rng) -> Outcome {
    let (m, p) = fixture();
    let points: Vec<ConnectionParams> = parameter_grid(5, false)
        .into_iter()
        .filter(|x| x.a != q(-1))
        .take(5)
        .collect();
    let triples: Vec<[Rational; 3]> = (0..3).map(|_| [rational(rng), rational(rng), rational(rng)]).collect();
    let samples: Vec<(Rational, Rational)> = (0..3)
        .map(|_| {
            let mut alpha = rational(rng);
            if alpha.is_zero() {
                alpha = q(1);
            }
            (alpha, rational(rng))
        })
        .collect();
    for params in &points {
        for [pp, qq, rr] in &triples {
            let report = theorem2_check(&m, &p, params, [pp, qq, rr], &samples).map_err(|e| e.to_string())?;
            ensure(report.all_pass(), || format!("at {params}: {:?}", names(&report)))?;
            ensure(report.checks.iter().filter(|c| c.name.starts_with("sample")).count() == 3, || {
                "missing samples".into()
            })?;
        }
    }
    let guard_params = ConnectionParams::new(q(-1), q(1));
    let guard = theorem2_check(&m, &p, &guard_params, [&q(1), &q(1), &q(1)], &samples).map_err(|e| e.to_string())?;
    let g = guard.check("guard a != -1").ok_or("guard missing")?;
    ensure(g.status == Status::Skipped, || "guard did not trigger".into())?;
    Ok(format!("{} residuals vanish; guard triggers at a = -1", points.len() * 9))
}

fn binary() -> String {
    env!("CARGO_BIN_EXE_lpsas").to_string()
}

fn c10_crosscheck() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = dir.path().join("example.json");
    let status = Command::new(binary())
        .args(["paper-example", "--out"])
        .arg(&spec)
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || "paper-example failed".into())?;
    let run = |jobs: Option<&str>| -> Result<Vec<u8>, String> {
        let mut cmd = Command::new(binary());
        cmd.arg("crosscheck").arg(&spec).args(["--grid", "5"]);
        if let Some(j) = jobs {
            cmd.args(["--jobs", j]);
        }
        let out = cmd.output().map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || {
            format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        Ok(out.stdout)
    };
    let a = run(None)?;
    let b = run(None)?;
    let c = run(Some("1"))?;
    let d = run(Some("3"))?;
    ensure(a == b, || "differs across runs".into())?;
    ensure(a == c && a == d, || "differs across --jobs".into())?;
    let doc: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
    ensure(doc["data"]["points"] == 25, || "expected 25 points".into())?;
    let checks = doc["report"]["checks"].as_array().ok_or("no checks")?;
    let adjudicated = checks
        .iter()
        .filter(|c| {
            let name = c["name"].as_str().unwrap_or("");
            name.ends_with("] ricci: closed form vs direct")
                && (c["status"] == "pass" || !c["witnesses"].as_array().is_none_or(Vec::is_empty))
        })
        .count();
    ensure(adjudicated == 25, || format!("ricci adjudicated at {adjudicated} points"))?;
    let consistency_failures = checks
        .iter()
        .filter(|c| c["status"] == "fail" && c["kind"] == "consistency")
        .count();
    ensure(consistency_failures == 0, || format!("{consistency_failures} consistency failures"))?;
    let agree = checks
        .iter()
        .filter(|c| {
            c["name"].as_str().unwrap_or("").ends_with("] ricci: closed form vs direct") && c["status"] == "pass"
        })
        .count();
    Ok(format!(
        "{} bytes, identical across runs and --jobs 1/3/all; closed-form ricci agrees at {agree}/25 points",
        a.len()
    ))
}

fn c11_torse_forming(rng: &mut ChaCha8Rng) -> Outcome {
    let (m, p) = fixture();
    let lc = koszul_levi_civita(&m).map_err(|e| e.to_string())?;
    let xi = p.xi().to_vec();
    let grid = grid_with_presets();
    for params in &grid {
        let conn = general_connection(&m, &p, &lc, params);
        let t = torse_forming(&conn, &xi).ok_or_else(|| format!("no decomposition at {params}"))?;
        let k = -(&params.a + q(1));
        let omega: Vec<Rational> = p.eta().iter().map(|e| e * &k).collect();
        ensure(t.f == k && t.omega == omega, || {
            format!("at {params}: f = {}, omega = {:?}", t.f, t.omega)
        })?;
        let coeffs = SolitonCoefficients::new(rational(rng), rational(rng), rational(rng), rational(rng), rational(rng));
        let (_, report) = theorem4_check(&m, &p, params, &xi, &coeffs).map_err(|e| e.to_string())?;
        let trace = report
            .check("trace of residual vanishes with epsilon from the trace formula")
            .ok_or("trace check missing")?;
        ensure(trace.status == Status::Pass, || format!("at {params}: {:?}", trace.witnesses))?;
        ensure(report.is_consistent(), || format!("at {params}: {:?}", names(&report)))?;
    }
    Ok(format!("f = -(1+a), omega = -(1+a) eta and the epsilon formula hold at {} points", grid.len()))
}

fn main() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let criteria: Vec<Criterion> = vec![
        ("axiom suite on the builtin fixture", Box::new(|_| c1_axioms())),
        ("Levi-Civita correctness and printed-table flag", Box::new(|_| c2_levi_civita())),
        ("barred curvature R(e1,e4)e1", Box::new(|_| c3_curvature())),
        ("barred Ricci at xi", Box::new(|_| c4_ricci_xi())),
        ("scalar curvature formula", Box::new(|_| c5_scalar())),
        ("expanded barred Lie derivative", Box::new(c6_c1_form)),
        ("soliton solver", Box::new(c7_soliton)),
        ("reduction at (0,0)", Box::new(c8_reduction)),
        ("synthetic eta-Einstein soliton", Box::new(c9_synthetic_eta_einstein)),
        ("crosscheck audit report", Box::new(|_| c10_crosscheck())),
        ("torse-forming fixture", Box::new(c11_torse_forming)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| f(&mut rng))).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({ms} ms): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    let total = start.elapsed();
    println!("acceptance: {} of 11 criteria pass in {total:?}", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
