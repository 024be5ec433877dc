//! Lie algebras presented by structure constants, their representations,
//! morphisms, and derivation spaces.
//!
//! The bracket table stores [e_i, e_j] = sum_k c[i][j][k] e_k densely for
//! all (i, j). Validation is alternating (c[i][i] = 0 together with
//! c[i][j] = -c[j][i]) so characteristic 2 is sound.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{kernel, vadd, vscale, vzero, LinearMap, Matrix, Subspace};
use crate::report::Report;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra {
    name: String,
    field: Field,
    dim: usize,
    // bracket[i][j] = coordinates of [e_i, e_j]
    bracket: Vec<Vec<Vec<Scalar>>>,
}

impl LieAlgebra {
    /// Wrap a dense table. Only the shape is validated here; run
    /// `check_lie` for the algebraic laws.
    pub fn from_table(
        name: &str,
        field: Field,
        dim: usize,
        bracket: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<LieAlgebra> {
        if bracket.len() != dim
            || bracket.iter().any(|row| row.len() != dim)
            || bracket
                .iter()
                .flatten()
                .any(|v| v.len() != dim || v.iter().any(|s| s.field() != field))
        {
            return Err(Error::DimensionMismatch(format!(
                "structure constant table for '{name}' is not dim^3 over {field}"
            )));
        }
        Ok(LieAlgebra {
            name: name.to_string(),
            field,
            dim,
            bracket,
        })
    }

    /// Build from sparse triples (i, j, k, c) with i < j (0-based); the
    /// alternating closure c[j][i][k] = -c and c[i][i] = 0 is applied.
    pub fn from_sparse(
        name: &str,
        field: Field,
        dim: usize,
        triples: &[(usize, usize, usize, Scalar)],
    ) -> Result<LieAlgebra> {
        let mut table = vec![vec![vzero(field, dim); dim]; dim];
        for (i, j, k, c) in triples {
            if *i >= *j {
                return Err(Error::Invalid(format!(
                    "sparse bracket entry must have i < j, got ({i}, {j})"
                )));
            }
            if *j >= dim || *k >= dim {
                return Err(Error::DimensionMismatch(format!(
                    "bracket index out of range in '{name}': ({i}, {j}, {k})"
                )));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(format!(
                    "bracket constant in '{name}'"
                )));
            }
            table[*i][*j][*k] = &table[*i][*j][*k] + c;
            table[*j][*i][*k] = -&table[*i][*j][*k];
        }
        LieAlgebra::from_table(name, field, dim, table)
    }

    pub fn abelian(name: &str, field: Field, dim: usize) -> LieAlgebra {
        LieAlgebra::from_sparse(name, field, dim, &[]).expect("empty table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.bracket[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.bracket[i][j][k]
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().flatten().flatten().all(Scalar::is_zero)
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "bracket arguments must have length {}",
                self.dim
            )));
        }
        let mut out = vzero(self.field, self.dim);
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let coeff = &x[i] * &y[j];
                out = vadd(&out, &vscale(&coeff, &self.bracket[i][j]));
            }
        }
        Ok(out)
    }

    /// Matrix of ad(x) = [x, -].
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let cols = (0..self.dim)
            .map(|j| {
                let ej: Vec<Scalar> = crate::linalg::vunit(self.field, self.dim, j);
                self.bracket(x, &ej).expect("basis bracket")
            })
            .collect();
        Matrix::from_cols(self.field, self.dim, cols).expect("ad columns")
    }
}

/// Every violated antisymmetry or Jacobi instance, by basis indices.
pub fn check_lie(l: &LieAlgebra) -> Report {
    let mut report = Report::new(&format!("lie algebra '{}'", l.name));
    let n = l.dim;
    for i in 0..n {
        report.check(
            "alternating [e_i, e_i] = 0",
            &[i],
            l.bracket[i][i].clone(),
            vzero(l.field, n),
        );
        for j in (i + 1)..n {
            report.check(
                "antisymmetry [e_i, e_j] = -[e_j, e_i]",
                &[i, j],
                l.bracket[i][j].clone(),
                vneg_vec(&l.bracket[j][i]),
            );
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let t1 = l.bracket(&l.bracket[i][j], &unit(l, k)).expect("dims");
                let t2 = l.bracket(&l.bracket[j][k], &unit(l, i)).expect("dims");
                let t3 = l.bracket(&l.bracket[k][i], &unit(l, j)).expect("dims");
                report.check(
                    "Jacobi identity",
                    &[i, j, k],
                    vadd(&vadd(&t1, &t2), &t3),
                    vzero(l.field, n),
                );
            }
        }
    }
    report
}

fn unit(l: &LieAlgebra, i: usize) -> Vec<Scalar> {
    crate::linalg::vunit(l.field, l.dim, i)
}

fn vneg_vec(v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|s| -s).collect()
}

/// A finite-dimensional module presented by one matrix per basis element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Representation {
    algebra: LieAlgebra,
    dim_v: usize,
    rho: Vec<Matrix>,
}

impl Representation {
    pub fn new(algebra: LieAlgebra, dim_v: usize, rho: Vec<Matrix>) -> Result<Representation> {
        if rho.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(
                "need one action matrix per basis element".into(),
            ));
        }
        for m in &rho {
            if m.rows() != dim_v || m.cols() != dim_v {
                return Err(Error::DimensionMismatch(
                    "action matrix must be dim_V square".into(),
                ));
            }
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch("action matrix field".into()));
            }
        }
        Ok(Representation {
            algebra,
            dim_v,
            rho,
        })
    }

    pub fn trivial(algebra: LieAlgebra, dim_v: usize) -> Representation {
        let f = algebra.field();
        let n = algebra.dim();
        Representation::new(algebra, dim_v, vec![Matrix::zero(f, dim_v, dim_v); n])
            .expect("zero matrices are square")
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn rho_basis(&self, i: usize) -> &Matrix {
        &self.rho[i]
    }

    /// rho(x) for an arbitrary vector x.
    pub fn rho(&self, x: &[Scalar]) -> Matrix {
        assert_eq!(x.len(), self.algebra.dim(), "rho argument length");
        let mut m = Matrix::zero(self.field(), self.dim_v, self.dim_v);
        for (i, coeff) in x.iter().enumerate() {
            if !coeff.is_zero() {
                m = m.add(&self.rho[i].scale(coeff));
            }
        }
        m
    }
}

/// Violating basis pairs of rho([e_i, e_j]) = [rho(e_i), rho(e_j)].
pub fn check_representation(r: &Representation) -> Report {
    let mut report = Report::new(&format!("representation of '{}'", r.algebra.name()));
    let n = r.algebra.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = r.rho(r.algebra.bracket_basis(i, j));
            let rhs = r.rho[i].mul(&r.rho[j]).sub(&r.rho[j].mul(&r.rho[i]));
            report.check(
                "rho([x,y]) = [rho(x), rho(y)]",
                &[i, j],
                lhs.flatten(),
                rhs.flatten(),
            );
        }
    }
    report
}

/// rho(e_i) = ad(e_i); a representation exactly because Jacobi holds.
pub fn adjoint_rep(l: &LieAlgebra) -> Result<Representation> {
    check_lie(l).into_result(Error::NotALieAlgebra)?;
    let rho = (0..l.dim()).map(|i| l.ad(&unit(l, i))).collect();
    Representation::new(l.clone(), l.dim(), rho)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraMorphism {
    pub source: LieAlgebra,
    pub target: LieAlgebra,
    pub map: LinearMap,
}

/// Report on the homomorphism law, plus a bijectivity flag.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MorphismReport {
    pub report: Report,
    pub bijective: bool,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

pub fn check_morphism(m: &AlgebraMorphism) -> Result<MorphismReport> {
    if m.map.cols() != m.source.dim() || m.map.rows() != m.target.dim() {
        return Err(Error::DimensionMismatch("morphism matrix shape".into()));
    }
    if m.source.field() != m.target.field() || m.map.field() != m.source.field() {
        return Err(Error::FieldMismatch("morphism fields".into()));
    }
    let mut report = Report::new(&format!(
        "morphism '{}' -> '{}'",
        m.source.name(),
        m.target.name()
    ));
    let n = m.source.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = m.map.mul_vec(m.source.bracket_basis(i, j));
            let rhs = m
                .target
                .bracket(&m.map.col(i), &m.map.col(j))
                .expect("target bracket dims");
            report.check("phi([x,y]) = [phi(x), phi(y)]", &[i, j], lhs, rhs);
        }
    }
    let bijective = m.map.rows() == m.map.cols() && m.map.inverse().is_some();
    Ok(MorphismReport { report, bijective })
}

/// Linear constraints the Leibniz rule puts on an endomorphism D of L,
/// flattened row-major (entry (r, c) at index r * dim + c).
pub(crate) fn leibniz_constraint_rows(l: &LieAlgebra) -> Vec<Vec<Scalar>> {
    let n = l.dim();
    let f = l.field();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for m in 0..n {
                let mut row = vzero(f, n * n);
                for k in 0..n {
                    // D([e_i,e_j]) component m picks up c[i][j][k] * D[m][k]
                    row[m * n + k] = &row[m * n + k] + l.structure_constant(i, j, k);
                }
                for a in 0..n {
                    // -[D e_i, e_j] component m: coefficient of D[a][i]
                    row[a * n + i] = &row[a * n + i] - l.structure_constant(a, j, m);
                    // -[e_i, D e_j] component m: coefficient of D[a][j]
                    row[a * n + j] = &row[a * n + j] - l.structure_constant(i, a, m);
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// All D with D([x,y]) = [D x, y] + [x, D y], as a subspace of End(L)
/// under row-major flattening (entry (r, c) at index r * dim + c).
pub fn derivation_space(l: &LieAlgebra) -> Result<Subspace> {
    check_lie(l).into_result(Error::NotALieAlgebra)?;
    let rows = leibniz_constraint_rows(l);
    if rows.is_empty() {
        return Ok(Subspace::full(l.field(), l.dim() * l.dim()));
    }
    let system = Matrix::from_rows(l.field(), rows)?;
    Ok(kernel(&system))
}

/// Evaluate the derivation identity for one endomorphism; used by checks
/// that want a yes/no answer rather than a subspace.
pub fn is_derivation(l: &LieAlgebra, d: &Matrix) -> bool {
    let n = l.dim();
    if d.rows() != n || d.cols() != n {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = d.mul_vec(l.bracket_basis(i, j));
            let rhs = vadd(
                &l.bracket(&d.col(i), &unit(l, j)).expect("dims"),
                &l.bracket(&unit(l, i), &d.col(j)).expect("dims"),
            );
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// aff(1): [e_1, e_2] = e_2.
pub fn aff1(field: Field) -> LieAlgebra {
    LieAlgebra::from_sparse("aff1", field, 2, &[(0, 1, 1, field.one())])
        .expect("valid sparse table")
}

/// Heisenberg: [e_1, e_2] = e_3.
pub fn heisenberg(field: Field) -> LieAlgebra {
    LieAlgebra::from_sparse("heisenberg", field, 3, &[(0, 1, 2, field.one())])
        .expect("valid sparse table")
}

/// sl2 with basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
pub fn sl2(field: Field) -> LieAlgebra {
    LieAlgebra::from_sparse(
        "sl2",
        field,
        3,
        &[
            (0, 1, 1, Scalar::from_integer(field, 2)),
            (0, 2, 2, Scalar::from_integer(field, -2)),
            (1, 2, 0, field.one()),
        ],
    )
    .expect("valid sparse table")
}
