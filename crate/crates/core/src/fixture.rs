//! The builtin four-dimensional example and its printed tables.
//!
//! The frame is `e_i = exp(x_i + x_4) ∂_i` (i = 1, 2, 3), `e_4 = ∂_4` with
//! `g = diag(1, 1, 1, −1)`, `ξ = e_4` and `φ = −I` on `span(e_1, e_2, e_3)`.
//! Expanding the coordinate expressions gives `[e_i, e_4] = −e_i` and all
//! other brackets zero.
//!
//! The functions in [`printed`] reproduce the tables as published, with the
//! symbolic `λ` kept as an argument. They are reference data under audit,
//! never inputs to the engine.

use crate::exact::{Matrix, Rational, Tensor, Variance};
use crate::frame::{basis_vector, koszul_levi_civita, Connection, FrameManifold, GeometryError, Provenance};
use crate::paracontact::{
    closed_form_curvature_bar, closed_form_ricci_bar, g_phi, verify_lp_sasakian, ConnectionParams,
    ParacontactStructure,
};
use crate::report::{AuditReport, Check, CheckKind, Parameters, Status};
use crate::soliton::{soliton_residual, BarredData, SolitonCoefficients};

use Variance::{Lower, Upper};

pub const DIM: usize = 4;

/// `(i, j, k, value)` 0-based, `i < j`.
pub fn example_brackets() -> Vec<(usize, usize, usize, Rational)> {
    (0..3).map(|i| (i, 3, i, Rational::integer(-1))).collect()
}

pub fn example_metric() -> Matrix {
    Matrix::diagonal(&[1, 1, 1, -1].map(Rational::integer))
}

pub fn example_phi() -> Matrix {
    Matrix::diagonal(&[-1, -1, -1, 0].map(Rational::integer))
}

pub fn example_xi() -> Vec<Rational> {
    basis_vector(DIM, 3)
}

pub fn example_manifold() -> (FrameManifold, ParacontactStructure) {
    let m = FrameManifold::from_brackets(example_metric(), &example_brackets()).expect("example metric is invertible");
    let p = ParacontactStructure::from_metric(&m, example_phi(), example_xi()).expect("dimensions agree");
    (m, p)
}

/// Published tables, as printed.
pub mod printed {
    use super::*;

    fn e(k: usize, c: Rational) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); DIM];
        v[k] = c;
        v
    }

    /// `∇_{e_i}e_i = d e_4`, `∇_{e_i}e_4 = s e_i` for `i ≤ 3`; all else zero.
    fn table(diagonal: Rational, column: Rational) -> Vec<Vec<Vec<Rational>>> {
        (0..DIM)
            .map(|i| {
                (0..DIM)
                    .map(|j| {
                        if i == 3 {
                            vec![Rational::zero(); DIM]
                        } else if j == i {
                            e(3, diagonal.clone())
                        } else if j == 3 {
                            e(i, column.clone())
                        } else {
                            vec![Rational::zero(); DIM]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn levi_civita() -> Connection {
        Connection::from_table(
            &table(Rational::integer(-2), Rational::integer(-1)),
            Provenance::Table {
                label: "printed Levi-Civita table".into(),
            },
        )
        .expect("table has the right shape")
    }

    /// `∇̄_{e_i}e_i = −(a+2)e_4`, `∇̄_{e_i}e_4 = −(a+1)e_i`, row 4 zero.
    pub fn general(params: &ConnectionParams) -> Connection {
        let a = &params.a;
        Connection::from_table(
            &table(-(a + Rational::integer(2)), -(a + Rational::one())),
            Provenance::Table {
                label: format!("printed general table at {}", params.label()),
            },
        )
        .expect("table has the right shape")
    }

    /// Coefficient of `e_4` in `R̄(e_i, e_4)e_i`: `−(a+ab+b+1)`.
    pub fn curvature_coefficient(params: &ConnectionParams) -> Rational {
        -(params.c_eta_xi() + Rational::one())
    }

    /// `R̄^l_{ijk}` with only `R̄(e_i,e_4)e_i` and its antisymmetric partner
    /// nonzero, as stated.
    pub fn curvature(params: &ConnectionParams) -> Tensor {
        let c = curvature_coefficient(params);
        let mut t = Tensor::zeros(&[Upper, Lower, Lower, Lower], DIM);
        for i in 0..3 {
            t.set(&[3, i, 3, i], c.clone());
            t.set(&[3, 3, i, i], -&c);
        }
        t
    }

    /// `3 + ab + b − a² − a − a²λ − 2aλ`
    pub fn ricci_spatial(params: &ConnectionParams, lambda: &Rational) -> Rational {
        let (a, b) = (&params.a, &params.b);
        Rational::integer(3) + a * b + b - a.square() - a - a.square() * lambda - Rational::integer(2) * a * lambda
    }

    /// `−3(a − b − ab + 1)`
    pub fn ricci_time(params: &ConnectionParams) -> Rational {
        let (a, b) = (&params.a, &params.b);
        Rational::integer(-3) * (a - b - a * b + Rational::one())
    }

    pub fn ricci(params: &ConnectionParams, lambda: &Rational) -> Tensor {
        let spatial = ricci_spatial(params, lambda);
        let time = ricci_time(params);
        Tensor::from_fn(&[Lower, Lower], DIM, |ix| match (ix[0], ix[1]) {
            (3, 3) => time.clone(),
            (i, j) if i == j => spatial.clone(),
            _ => Rational::zero(),
        })
    }

    /// `−4a + 4b + 4ab − a² − a²λ − 2aλ`, the `η⊗η` coefficient.
    pub fn ricci_eta_coefficient(params: &ConnectionParams, lambda: &Rational) -> Rational {
        let (a, b) = (&params.a, &params.b);
        Rational::integer(-4) * a + Rational::integer(4) * b + Rational::integer(4) * a * b
            - a.square()
            - a.square() * lambda
            - Rational::integer(2) * a * lambda
    }

    /// The stated decomposition `S̄ = (spatial) g + (eta coefficient) η⊗η`.
    pub fn ricci_decomposed(
        m: &FrameManifold,
        p: &ParacontactStructure,
        params: &ConnectionParams,
        lambda: &Rational,
    ) -> Tensor {
        m.metric_tensor()
            .scale(&ricci_spatial(params, lambda))
            .add_scaled(&ricci_eta_coefficient(params, lambda), &p.eta_eta())
            .expect("same shape")
    }

    /// `L̄_ξ g = −2(a+1)(g − η⊗η)`
    pub fn lie_xi(m: &FrameManifold, p: &ParacontactStructure, params: &ConnectionParams) -> Tensor {
        let g_minus = m.metric_tensor().sub(&p.eta_eta()).expect("same shape");
        g_minus.scale(&(Rational::integer(-2) * (&params.a + Rational::one())))
    }

    /// `δ = −γ − β(a+1) − α·(eta coefficient)`, `ε = β(a+1) − α·(spatial)`.
    pub fn soliton_family(
        params: &ConnectionParams,
        lambda: &Rational,
        alpha: &Rational,
        beta: &Rational,
        gamma: &Rational,
    ) -> SolitonCoefficients {
        let a1 = &params.a + Rational::one();
        let delta = -gamma - beta * &a1 - alpha * ricci_eta_coefficient(params, lambda);
        let epsilon = beta * &a1 - alpha * ricci_spatial(params, lambda);
        SolitonCoefficients::new(alpha.clone(), beta.clone(), gamma.clone(), delta, epsilon)
    }
}

fn as_reference(mut report: AuditReport) -> AuditReport {
    for check in &mut report.checks {
        check.kind = CheckKind::Reference;
    }
    report
}

/// Three-way comparison of the printed example against the closed forms and
/// direct computation at one parameter point. Every check here compares
/// against published data, so all are reference checks.
pub fn audit_printed_example(params: &ConnectionParams) -> Result<AuditReport, GeometryError> {
    let (m, p) = example_manifold();
    let lambda = p.lambda().clone();
    let data = BarredData::compute(&m, &p, params)?;
    let lc = koszul_levi_civita(&m)?;
    let curv_lc = crate::frame::curvature(&m, &lc)?;
    let mut report = AuditReport::new("printed example").with_parameters(Parameters::Point {
        a: params.a.clone(),
        b: params.b.clone(),
    });
    let reference = |name: &str, expected: &Tensor, actual: &Tensor| {
        Check::compare_tensors(name, CheckKind::Reference, expected, actual)
    };

    let printed_lc = printed::levi_civita();
    report.push(reference(
        "levi-civita: printed vs koszul",
        printed_lc.coefficients(),
        lc.coefficients(),
    ));
    let column = Tensor::from_fn(&[Upper, Lower, Lower], DIM, |ix| {
        if ix[2] == 3 {
            lc.gamma(ix[0], ix[1], 3).clone()
        } else {
            Rational::zero()
        }
    });
    let printed_column = Tensor::from_fn(&[Upper, Lower, Lower], DIM, |ix| {
        if ix[2] == 3 {
            printed_lc.gamma(ix[0], ix[1], 3).clone()
        } else {
            Rational::zero()
        }
    });
    report.push(reference("levi-civita: printed vs koszul, column e4", &printed_column, &column));
    report.absorb(
        "levi-civita: printed table through",
        as_reference(verify_lp_sasakian(&m, &p, &printed_lc)),
    );

    report.push(reference(
        "general connection: printed vs direct",
        printed::general(params).coefficients(),
        data.connection.coefficients(),
    ));

    let closed_r = closed_form_curvature_bar(&m, &p, &curv_lc, params)?;
    let printed_r = printed::curvature(params);
    report.push(reference("curvature: printed vs direct", &printed_r, &data.curvature.riemann));
    report.push(reference("curvature: printed vs closed form", &printed_r, &closed_r.riemann));
    report.push(reference(
        "curvature: closed form vs direct",
        &closed_r.riemann,
        &data.curvature.riemann,
    ));
    report.push(Check::compare_scalars(
        "curvature R(e1,e4)e1 coefficient of e4: printed vs direct",
        CheckKind::Reference,
        &printed::curvature_coefficient(params),
        data.curvature.riemann.get(&[3, 0, 3, 0]),
    ));

    let closed_s = closed_form_ricci_bar(&m, &p, &curv_lc.ricci, params)?;
    let printed_s = printed::ricci(params, &lambda);
    report.push(reference("ricci: printed vs direct", &printed_s, data.ricci()));
    report.push(reference("ricci: printed vs closed form", &printed_s, &closed_s));
    report.push(reference("ricci: closed form vs direct", &closed_s, data.ricci()));
    report.push(reference(
        "ricci: printed decomposition vs printed components",
        &printed_s,
        &printed::ricci_decomposed(&m, &p, params, &lambda),
    ));

    let xi = p.xi().to_vec();
    let direct_l = data.lie(&m, &xi);
    let gphi_form = g_phi(&m, &p).scale(&(Rational::integer(2) * (&params.a + Rational::one())));
    let printed_l = printed::lie_xi(&m, &p, params);
    report.push(reference("lie derivative along xi: printed vs direct", &printed_l, &direct_l));
    report.push(reference("lie derivative along xi: 2(a+1) g(phi., .) vs direct", &gphi_form, &direct_l));

    let units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)].map(|(x, y, z)| {
        (Rational::integer(x), Rational::integer(y), Rational::integer(z))
    });
    let mut direct_w = Vec::new();
    let mut printed_w = Vec::new();
    let zero = Tensor::zeros(&[Lower, Lower], DIM);
    for (k, (al, be, ga)) in units.iter().enumerate() {
        let coeffs = printed::soliton_family(params, &lambda, al, be, ga);
        let r = soliton_residual(&m, &p, data.ricci(), &direct_l, &xi, &coeffs);
        direct_w.extend(
            Check::compare_tensors("", CheckKind::Reference, &zero, &r)
                .witnesses
                .into_iter()
                .map(|mut w| {
                    w.index.insert(0, k + 1);
                    w
                }),
        );
        let printed_res = soliton_residual(&m, &p, &printed_s, &printed_l, &xi, &coeffs);
        printed_w.extend(
            Check::compare_tensors("", CheckKind::Reference, &zero, &printed_res)
                .witnesses
                .into_iter()
                .map(|mut w| {
                    w.index.insert(0, k + 1);
                    w
                }),
        );
    }
    report.push(
        Check::from_witnesses("soliton family: residual with direct data", CheckKind::Reference, direct_w)
            .with_note("witness index: (alpha,beta,gamma) unit direction, then component"),
    );
    report.push(
        Check::from_witnesses("soliton family: residual with printed data", CheckKind::Reference, printed_w)
            .with_note("witness index: (alpha,beta,gamma) unit direction, then component"),
    );
    Ok(report.finalize())
}

/// Names of the failed checks of a printed-example audit.
pub fn discrepancies(report: &AuditReport) -> Vec<&str> {
    report
        .checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| c.name.as_str())
        .collect()
}
