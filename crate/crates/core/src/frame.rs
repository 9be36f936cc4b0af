//! Frame-presented pseudo-Riemannian manifolds with constant structure
//! coefficients, and the covariant calculus of constant-coefficient
//! connections on them.
//!
//! A frame `e_1 .. e_n` has constant metric components `g_{ij} = g(e_i, e_j)`
//! and constant brackets `[e_i, e_j] = c^k_{ij} e_k`. Every tensor considered
//! here has constant frame components, so all directional derivatives of
//! components vanish and the calculus reduces to polynomial algebra in the
//! connection coefficients.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactError, Matrix, Rational, Tensor, Variance};
use crate::paracontact::Preset;
use crate::report::{AuditReport, Check, CheckKind, Status, Witness};

use Variance::{Lower, Upper};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameManifold {
    metric: Matrix,
    inverse: Option<Matrix>,
    /// `c^k_{ij}`, slots `(k, i, j)`.
    structure: Tensor,
}

impl FrameManifold {
    /// Shapes are checked here; the geometric invariants are checked by
    /// [`validate_manifold`].
    pub fn new(metric: Matrix, structure: Tensor) -> Result<Self, GeometryError> {
        let n = metric.rows();
        if n < 2 {
            return Err(GeometryError::Dimension(n));
        }
        if !metric.is_square() {
            return Err(ExactError::DimensionMismatch("metric must be square".into()).into());
        }
        if structure.variance() != [Upper, Lower, Lower] || structure.dim() != n {
            return Err(ExactError::DimensionMismatch(format!(
                "structure coefficients must be a dim-{n} tensor c^k_ij"
            ))
            .into());
        }
        let inverse = metric.inverse().ok();
        Ok(FrameManifold {
            metric,
            inverse,
            structure,
        })
    }

    /// Build from a list of brackets `[e_i, e_j] = Σ_k value e_k` given for
    /// `i < j` (0-based); the `(j, i)` entries are filled antisymmetrically.
    pub fn from_brackets(
        metric: Matrix,
        brackets: &[(usize, usize, usize, Rational)],
    ) -> Result<Self, GeometryError> {
        let n = metric.rows();
        let mut c = Tensor::zeros(&[Upper, Lower, Lower], n);
        for (i, j, k, value) in brackets {
            c.set(&[*k, *i, *j], value.clone());
            c.set(&[*k, *j, *i], -value);
        }
        FrameManifold::new(metric, c)
    }

    pub fn dim(&self) -> usize {
        self.metric.rows()
    }

    pub fn metric(&self) -> &Matrix {
        &self.metric
    }

    pub fn metric_tensor(&self) -> Tensor {
        Tensor::covariant2(&self.metric)
    }

    pub fn inverse_metric(&self) -> Result<&Matrix, GeometryError> {
        self.inverse.as_ref().ok_or_else(|| {
            GeometryError::Exact(ExactError::Singular {
                rank: self.metric.rank(),
                dim: self.dim(),
            })
        })
    }

    pub fn structure(&self) -> &Tensor {
        &self.structure
    }

    /// `c^k_{ij}`
    pub fn c(&self, k: usize, i: usize, j: usize) -> &Rational {
        self.structure.get(&[k, i, j])
    }

    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let n = self.dim();
        let mut total = Rational::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !v[j].is_zero() {
                    total += &u[i] * &self.metric[(i, j)] * &v[j];
                }
            }
        }
        total
    }

    /// Metric lowering `X ↦ g(X, ·)`.
    pub fn flat(&self, x: &[Rational]) -> Vec<Rational> {
        self.metric.mul_vec(x).expect("vector length matches dimension")
    }

    /// Metric raising of a covector.
    pub fn sharp(&self, w: &[Rational]) -> Result<Vec<Rational>, GeometryError> {
        Ok(self.inverse_metric()?.mul_vec(w)?)
    }

    /// `[U, V]` for constant-component vector fields.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut s = Rational::zero();
                for i in 0..n {
                    for j in 0..n {
                        if !u[i].is_zero() && !v[j].is_zero() {
                            s += &u[i] * &v[j] * self.c(k, i, j);
                        }
                    }
                }
                s
            })
            .collect()
    }

    /// The same manifold in the frame `e'_a = Σ_i A[i][a] e_i`.
    pub fn transformed(&self, a: &Matrix) -> Result<FrameManifold, GeometryError> {
        let n = self.dim();
        let a_inv = a.inverse()?;
        let metric = a.transpose().mul(&self.metric)?.mul(a)?;
        let structure = Tensor::from_fn(&[Upper, Lower, Lower], n, |ix| {
            let (d, x, y) = (ix[0], ix[1], ix[2]);
            let mut s = Rational::zero();
            for k in 0..n {
                if a_inv[(d, k)].is_zero() {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        let c = self.c(k, i, j);
                        if !c.is_zero() {
                            s += &a_inv[(d, k)] * &a[(i, x)] * &a[(j, y)] * c;
                        }
                    }
                }
            }
            s
        });
        FrameManifold::new(metric, structure)
    }
}

pub fn basis_vector(n: usize, i: usize) -> Vec<Rational> {
    (0..n)
        .map(|k| if k == i { Rational::one() } else { Rational::zero() })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    LeviCivita,
    General { a: Rational, b: Rational },
    Preset { name: Preset, a: Rational, b: Rational },
    /// Coefficients supplied directly, e.g. a printed table under audit.
    Table { label: String },
}

/// Constant-coefficient linear connection: `∇_{e_i} e_j = Γ^k_{ij} e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    /// Slots `(k, i, j)`.
    gamma: Tensor,
    pub provenance: Provenance,
}

impl Connection {
    pub fn new(gamma: Tensor, provenance: Provenance) -> Result<Self, GeometryError> {
        if gamma.variance() != [Upper, Lower, Lower] {
            return Err(ExactError::VarianceMismatch("connection coefficients must be Γ^k_ij".into()).into());
        }
        Ok(Connection { gamma, provenance })
    }

    /// Build from the vectors `∇_{e_i} e_j` given as `table[i][j]`.
    pub fn from_table(table: &[Vec<Vec<Rational>>], provenance: Provenance) -> Result<Self, GeometryError> {
        let n = table.len();
        let gamma = Tensor::from_fn(&[Upper, Lower, Lower], n, |ix| table[ix[1]][ix[2]][ix[0]].clone());
        Connection::new(gamma, provenance)
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    pub fn coefficients(&self) -> &Tensor {
        &self.gamma
    }

    /// `Γ^k_{ij}`
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &Rational {
        self.gamma.get(&[k, i, j])
    }

    /// `∇_{e_i} e_j` as a component vector.
    pub fn nabla_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim()).map(|k| self.gamma(k, i, j).clone()).collect()
    }

    /// `∇_U V` for constant-component fields.
    pub fn nabla(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let uv = &u[i] * &v[j];
                for (k, slot) in out.iter_mut().enumerate() {
                    let g = self.gamma(k, i, j);
                    if !g.is_zero() {
                        *slot += &uv * g;
                    }
                }
            }
        }
        out
    }

    /// `∇_{e_i} X` for every `i`, as rows of a matrix: row `i` is the vector.
    pub fn nabla_of(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        let n = self.dim();
        (0..n).map(|i| self.nabla(&basis_vector(n, i), x)).collect()
    }
}

/// Curvature of a connection: `R(e_i, e_j) e_k = R^l_{ijk} e_l`, Ricci
/// `S_{jk} = R^i_{ijk}`, Ricci operator `Q^j_k = g^{jm} S_{mk}` and scalar
/// curvature `r = g^{jk} S_{jk}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureData {
    /// Slots `(l, i, j, k)`.
    pub riemann: Tensor,
    pub ricci: Tensor,
    pub ricci_op: Tensor,
    pub scalar: Rational,
}

impl CurvatureData {
    /// Derive Ricci data from a curvature tensor by the fixed contraction.
    pub fn from_riemann(m: &FrameManifold, riemann: Tensor) -> Result<Self, GeometryError> {
        let ricci = riemann.contract(0, 1)?;
        let ricci_op = ricci.raise_lower(0, m.metric(), m.inverse_metric()?)?;
        let scalar = ricci_op.contract(0, 1)?.value().clone();
        Ok(CurvatureData {
            riemann,
            ricci,
            ricci_op,
            scalar,
        })
    }

    /// `R(U, V) W` for constant-component fields.
    pub fn apply(&self, u: &[Rational], v: &[Rational], w: &[Rational]) -> Vec<Rational> {
        let n = self.riemann.dim();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                for k in 0..n {
                    if w[k].is_zero() {
                        continue;
                    }
                    let coeff = &u[i] * &v[j] * &w[k];
                    for (l, slot) in out.iter_mut().enumerate() {
                        let r = self.riemann.get(&[l, i, j, k]);
                        if !r.is_zero() {
                            *slot += &coeff * r;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Check symmetric invertible metric, antisymmetric brackets and the Jacobi
/// identity. Witness indices for bracket checks are `(i, j, k)` for
/// `c^k_{ij}` and `(i, j, k, l)` for the Jacobi sum's `e_l` component.
pub fn validate_manifold(m: &FrameManifold) -> AuditReport {
    let n = m.dim();
    let mut report = AuditReport::new("frame manifold");
    let g = m.metric();

    let mut sym = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if g[(i, j)] != g[(j, i)] {
                sym.push(Witness::at(&[i, j], &g[(j, i)], &g[(i, j)]));
            }
        }
    }
    report.push(Check::from_witnesses("metric symmetric", CheckKind::Consistency, sym));

    let rank = g.rank();
    report.push(if rank == n {
        Check::pass("metric invertible")
    } else {
        Check::from_witnesses(
            "metric invertible",
            CheckKind::Consistency,
            vec![Witness::message(&[], format!("rank {n}"), format!("rank {rank}"))],
        )
    });

    let mut antisym = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let cij = m.c(k, i, j);
                let expected = -m.c(k, j, i);
                if *cij != expected {
                    antisym.push(Witness::at(&[i, j, k], &expected, cij));
                }
            }
        }
    }
    report.push(Check::from_witnesses("brackets antisymmetric", CheckKind::Consistency, antisym));

    let mut jacobi = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let s: Rational = (0..n)
                        .map(|mm| {
                            m.c(mm, i, j) * m.c(l, mm, k)
                                + m.c(mm, j, k) * m.c(l, mm, i)
                                + m.c(mm, k, i) * m.c(l, mm, j)
                        })
                        .sum();
                    if !s.is_zero() {
                        jacobi.push(Witness::at(&[i, j, k, l], &Rational::zero(), &s));
                    }
                }
            }
        }
    }
    report.push(Check::from_witnesses("jacobi identity", CheckKind::Consistency, jacobi));
    report.finalize()
}

/// Levi-Civita connection by the Koszul formula with constant metric:
/// `2 g(∇_{e_i} e_j, e_k) = g([e_i,e_j],e_k) − g([e_i,e_k],e_j) − g([e_j,e_k],e_i)`.
pub fn koszul_levi_civita(m: &FrameManifold) -> Result<Connection, GeometryError> {
    let n = m.dim();
    let g = m.metric();
    let g_inv = m.inverse_metric()?;
    // c_{ijk} = g([e_i, e_j], e_k)
    let lowered = Tensor::from_fn(&[Lower, Lower, Lower], n, |ix| {
        (0..n).map(|mm| m.c(mm, ix[0], ix[1]) * &g[(mm, ix[2])]).sum()
    });
    let half = Rational::new(1, 2);
    let koszul = Tensor::from_fn(&[Lower, Lower, Lower], n, |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        (lowered.get(&[i, j, k]) - lowered.get(&[i, k, j]) - lowered.get(&[j, k, i])) * &half
    });
    let gamma = Tensor::from_fn(&[Upper, Lower, Lower], n, |ix| {
        let (l, i, j) = (ix[0], ix[1], ix[2]);
        (0..n).map(|k| &g_inv[(l, k)] * koszul.get(&[i, j, k])).sum()
    });
    Connection::new(gamma, Provenance::LeviCivita)
}

/// `T^k_{ij} = Γ^k_{ij} − Γ^k_{ji} − c^k_{ij}`.
pub fn torsion(m: &FrameManifold, conn: &Connection) -> Tensor {
    Tensor::from_fn(&[Upper, Lower, Lower], m.dim(), |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        conn.gamma(k, i, j) - conn.gamma(k, j, i) - m.c(k, i, j)
    })
}

/// `(∇_{e_i} g)(e_j, e_k) = −Γ^m_{ij} g_{mk} − Γ^m_{ik} g_{jm}`, slots `(i, j, k)`.
pub fn metricity(m: &FrameManifold, conn: &Connection) -> Tensor {
    let n = m.dim();
    let g = m.metric();
    Tensor::from_fn(&[Lower, Lower, Lower], n, |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        -(0..n)
            .map(|mm| conn.gamma(mm, i, j) * &g[(mm, k)] + conn.gamma(mm, i, k) * &g[(j, mm)])
            .sum::<Rational>()
    })
}

/// `R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_{[X,Y]} Z` on the frame:
/// `R^l_{ijk} = Γ^m_{jk} Γ^l_{im} − Γ^m_{ik} Γ^l_{jm} − c^m_{ij} Γ^l_{mk}`.
pub fn curvature(m: &FrameManifold, conn: &Connection) -> Result<CurvatureData, GeometryError> {
    let n = m.dim();
    let riemann = Tensor::from_fn(&[Upper, Lower, Lower, Lower], n, |ix| {
        let (l, i, j, k) = (ix[0], ix[1], ix[2], ix[3]);
        (0..n)
            .map(|mm| {
                conn.gamma(mm, j, k) * conn.gamma(l, i, mm)
                    - conn.gamma(mm, i, k) * conn.gamma(l, j, mm)
                    - m.c(mm, i, j) * conn.gamma(l, mm, k)
            })
            .sum()
    });
    CurvatureData::from_riemann(m, riemann)
}

/// Torsion-free and metric-compatible, as a report.
pub fn connection_report(m: &FrameManifold, conn: &Connection) -> AuditReport {
    let n = m.dim();
    let zero3 = Tensor::zeros(&[Upper, Lower, Lower], n);
    let mut report = AuditReport::new("connection");
    let mut torsion_check = Check::compare_tensors("torsion vanishes", CheckKind::Consistency, &zero3, &torsion(m, conn));
    let mut metric_check = Check::compare_tensors(
        "metricity vanishes",
        CheckKind::Consistency,
        &Tensor::zeros(&[Lower, Lower, Lower], n),
        &metricity(m, conn),
    );
    // Torsion and non-metricity are properties here, not errors.
    if !matches!(conn.provenance, Provenance::LeviCivita) {
        torsion_check = informational(torsion_check);
        metric_check = informational(metric_check);
    }
    report.push(torsion_check);
    report.push(metric_check);
    report.finalize()
}

fn informational(mut check: Check) -> Check {
    if check.status == Status::Fail {
        check.status = Status::Conditional;
        check.note = Some("nonzero; reported as data".into());
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    pub(crate) fn example_frame() -> FrameManifold {
        let g = Matrix::diagonal(&[q(1), q(1), q(1), q(-1)]);
        FrameManifold::from_brackets(g, &[(0, 3, 0, q(-1)), (1, 3, 1, q(-1)), (2, 3, 2, q(-1))]).unwrap()
    }

    fn flat_frame(n: usize) -> FrameManifold {
        FrameManifold::new(Matrix::identity(n), Tensor::zeros(&[Upper, Lower, Lower], n)).unwrap()
    }

    #[test]
    fn example_and_flat_validate() {
        assert!(validate_manifold(&example_frame()).all_pass());
        assert!(validate_manifold(&flat_frame(3)).all_pass());
    }

    #[test]
    fn symmetric_bracket_fails_antisymmetry() {
        let mut c = Tensor::zeros(&[Upper, Lower, Lower], 2);
        c.set(&[0, 0, 1], q(1));
        c.set(&[0, 1, 0], q(1));
        let m = FrameManifold::new(Matrix::identity(2), c).unwrap();
        let report = validate_manifold(&m);
        let check = report.check("brackets antisymmetric").unwrap();
        assert_eq!(check.status, Status::Fail);
        assert_eq!(check.witnesses[0].index, vec![1, 2, 1]);
    }

    #[test]
    fn non_jacobi_brackets_fail() {
        // [e1,e2] = e3, [e2,e3] = e2, [e3,e1] = 0 breaks Jacobi.
        let m = FrameManifold::from_brackets(
            Matrix::identity(3),
            &[(0, 1, 2, q(1)), (1, 2, 1, q(1))],
        )
        .unwrap();
        let report = validate_manifold(&m);
        assert_eq!(report.check("jacobi identity").unwrap().status, Status::Fail);
    }

    #[test]
    fn flat_levi_civita_is_zero() {
        let lc = koszul_levi_civita(&flat_frame(4)).unwrap();
        assert!(lc.coefficients().is_zero());
        let curv = curvature(&flat_frame(4), &lc).unwrap();
        assert!(curv.riemann.is_zero() && curv.ricci.is_zero() && curv.scalar.is_zero());
    }

    #[test]
    fn example_levi_civita_entries() {
        let m = example_frame();
        let lc = koszul_levi_civita(&m).unwrap();
        assert_eq!(lc.nabla_basis(0, 3), vec![q(-1), q(0), q(0), q(0)]);
        // Koszul gives -e_4 on the diagonal.
        assert_eq!(lc.nabla_basis(0, 0), vec![q(0), q(0), q(0), q(-1)]);
        assert!(lc.nabla_basis(3, 0).iter().all(Rational::is_zero));
        assert!(torsion(&m, &lc).is_zero());
        assert!(metricity(&m, &lc).is_zero());
    }

    #[test]
    fn example_levi_civita_curvature() {
        let m = example_frame();
        let curv = curvature(&m, &koszul_levi_civita(&m).unwrap()).unwrap();
        assert_eq!(curv.ricci.get(&[3, 3]), &q(-3));
        assert_eq!(curv.scalar, q(12));
        assert_eq!(curv.ricci, m.metric_tensor().scale(&q(3)));
    }

    #[test]
    fn singular_metric_is_an_error() {
        let m = FrameManifold::new(
            Matrix::diagonal(&[q(1), q(0)]),
            Tensor::zeros(&[Upper, Lower, Lower], 2),
        )
        .unwrap();
        assert!(koszul_levi_civita(&m).is_err());
        assert_eq!(validate_manifold(&m).check("metric invertible").unwrap().status, Status::Fail);
    }
}
