//! Nijenhuis operators and their representation theory: the defining
//! identity, deformed brackets, semidirect products, derivation spaces,
//! and the catalog of standard constructions.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::lie::{
    adjoint_rep, check_lie, check_morphism, check_representation, AlgebraMorphism, LieAlgebra,
    Representation,
};
use crate::linalg::{kernel, vadd, vscale, vsub, vunit, vzero, LinearMap, Matrix, Subspace};
use crate::report::Report;

/// A Lie algebra with a validated Nijenhuis operator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NijenhuisLieAlgebra {
    algebra: LieAlgebra,
    n: LinearMap,
}

impl NijenhuisLieAlgebra {
    pub fn new(algebra: LieAlgebra, n: LinearMap) -> Result<NijenhuisLieAlgebra> {
        check_lie(&algebra).into_result(Error::NotALieAlgebra)?;
        check_nijenhuis(&algebra, &n)?.into_result(Error::NotNijenhuis)?;
        Ok(NijenhuisLieAlgebra { algebra, n })
    }

    pub fn with_identity(algebra: LieAlgebra) -> Result<NijenhuisLieAlgebra> {
        let id = Matrix::identity(algebra.field(), algebra.dim());
        NijenhuisLieAlgebra::new(algebra, id)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn operator(&self) -> &LinearMap {
        &self.n
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }
}

/// Violations of [N x, N y] = N([N x, y] + [x, N y] - N[x,y]) on basis
/// pairs; bilinear and alternating, so pairs i < j decide the identity.
pub fn check_nijenhuis(l: &LieAlgebra, n: &LinearMap) -> Result<Report> {
    let dim = l.dim();
    if n.rows() != dim || n.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "operator must be {dim}x{dim} on '{}'",
            l.name()
        )));
    }
    if n.field() != l.field() {
        return Err(Error::FieldMismatch("operator field".into()));
    }
    let mut report = Report::new(&format!("Nijenhuis operator on '{}'", l.name()));
    for i in 0..dim {
        for j in (i + 1)..dim {
            let ei = vunit(l.field(), dim, i);
            let ej = vunit(l.field(), dim, j);
            let nei = n.col(i);
            let nej = n.col(j);
            let lhs = l.bracket(&nei, &nej)?;
            let inner = vsub(
                &vadd(&l.bracket(&nei, &ej)?, &l.bracket(&ei, &nej)?),
                &n.mul_vec(l.bracket_basis(i, j)),
            );
            report.check("Nijenhuis identity", &[i, j], lhs, n.mul_vec(&inner));
        }
    }
    Ok(report)
}

/// The deformed bracket [x,y]_N = [N x, y] + [x, N y] - N[x,y]. The
/// result is checked to be a Lie algebra with N a morphism from it back
/// to the original bracket.
pub fn deformed_algebra(g: &NijenhuisLieAlgebra) -> Result<LieAlgebra> {
    let l = g.algebra();
    let n = g.operator();
    check_nijenhuis(l, n)?.into_result(Error::NotNijenhuis)?;
    let dim = l.dim();
    let f = l.field();
    let mut table = vec![vec![vzero(f, dim); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let ei = vunit(f, dim, i);
            let ej = vunit(f, dim, j);
            table[i][j] = vsub(
                &vadd(&l.bracket(&n.col(i), &ej)?, &l.bracket(&ei, &n.col(j))?),
                &n.mul_vec(l.bracket_basis(i, j)),
            );
        }
    }
    let deformed = LieAlgebra::from_table(&format!("{}_deformed", l.name()), f, dim, table)?;
    check_lie(&deformed)
        .into_result(|d| Error::Internal(format!("deformed bracket is not Lie: {d}")))?;
    let morphism = AlgebraMorphism {
        source: deformed.clone(),
        target: l.clone(),
        map: n.clone(),
    };
    let mr = check_morphism(&morphism)?;
    mr.report
        .into_result(|d| Error::Internal(format!("N fails to intertwine the brackets: {d}")))?;
    Ok(deformed)
}

/// A representation together with an operator satisfying the
/// representation-level Nijenhuis identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NijenhuisRepresentation {
    base: NijenhuisLieAlgebra,
    rep: Representation,
    s: LinearMap,
}

impl NijenhuisRepresentation {
    pub fn new(
        base: NijenhuisLieAlgebra,
        rep: Representation,
        s: LinearMap,
    ) -> Result<NijenhuisRepresentation> {
        if rep.algebra() != base.algebra() {
            return Err(Error::Invalid(
                "representation and Nijenhuis structure live on different algebras".into(),
            ));
        }
        if s.rows() != rep.dim_v() || s.cols() != rep.dim_v() {
            return Err(Error::DimensionMismatch(
                "module operator must be dim_V square".into(),
            ));
        }
        if s.field() != base.field() {
            return Err(Error::FieldMismatch("module operator field".into()));
        }
        check_representation(&rep).into_result(Error::NotARepresentation)?;
        check_nij_representation(&base, &rep, &s)
            .into_result(Error::NotANijenhuisRepresentation)?;
        Ok(NijenhuisRepresentation { base, rep, s })
    }

    pub fn base(&self) -> &NijenhuisLieAlgebra {
        &self.base
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn operator(&self) -> &LinearMap {
        &self.s
    }

    pub fn dim_v(&self) -> usize {
        self.rep.dim_v()
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }
}

/// Violations of rho(N x) S v = S(rho(N x) v + rho(x) S v - S rho(x) v)
/// on (basis x, basis v) pairs.
pub fn check_nij_representation(
    base: &NijenhuisLieAlgebra,
    rep: &Representation,
    s: &LinearMap,
) -> Report {
    let n = base.operator();
    let mut report = Report::new(&format!(
        "Nijenhuis representation of '{}'",
        base.algebra().name()
    ));
    for i in 0..base.dim() {
        let rho_nei = rep.rho(&n.col(i));
        let rho_ei = rep.rho_basis(i);
        // Matrix identity in v; compare matrices column by column via flatten.
        let lhs = rho_nei.mul(s);
        let inner = rho_nei.add(&rho_ei.mul(s)).sub(&s.mul(rho_ei));
        let rhs = s.mul(&inner);
        report.check(
            "module Nijenhuis identity",
            &[i],
            lhs.flatten(),
            rhs.flatten(),
        );
    }
    report
}

/// Underlying Lie algebra of the semidirect product g x| V.
pub fn semidirect_lie(rep: &Representation) -> Result<LieAlgebra> {
    let g = rep.algebra();
    let n = g.dim();
    let m = rep.dim_v();
    let f = g.field();
    let total = n + m;
    let mut table = vec![vec![vzero(f, total); total]; total];
    for i in 0..n {
        for j in 0..n {
            for (k, c) in g.bracket_basis(i, j).iter().enumerate() {
                table[i][j][k] = c.clone();
            }
        }
        for b in 0..m {
            // [(e_i, 0), (0, f_b)] = (0, rho(e_i) f_b)
            let col = rep.rho_basis(i).col(b);
            for (w, c) in col.iter().enumerate() {
                table[i][n + b][n + w] = c.clone();
                table[n + b][i][n + w] = -c;
            }
        }
    }
    let name = format!("{}_semidirect", g.name());
    let l = LieAlgebra::from_table(&name, f, total, table)?;
    check_lie(&l).into_result(Error::NotARepresentation)?;
    Ok(l)
}

/// Fill `dst` with `src` starting at the given block offset.
pub fn embed_block(dst: &mut Matrix, row_off: usize, col_off: usize, src: &Matrix) {
    for r in 0..src.rows() {
        for c in 0..src.cols() {
            dst.set(row_off + r, col_off + c, src.get(r, c).clone());
        }
    }
}

pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zero(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    embed_block(&mut m, 0, 0, a);
    embed_block(&mut m, a.rows(), a.cols(), b);
    m
}

/// Semidirect product (g (+) V, [.,.]_|x, N (+) S) of a Nijenhuis
/// representation; the result is re-validated.
pub fn semidirect(r: &NijenhuisRepresentation) -> Result<NijenhuisLieAlgebra> {
    let algebra = semidirect_lie(r.rep())?;
    let op = block_diag(r.base().operator(), r.operator());
    NijenhuisLieAlgebra::new(algebra, op)
}

/// The adjoint triple (g, ad, N) as a Nijenhuis representation of (g, N).
pub fn adjoint_nij_representation(g: &NijenhuisLieAlgebra) -> Result<NijenhuisRepresentation> {
    let rep = adjoint_rep(g.algebra())?;
    NijenhuisRepresentation::new(g.clone(), rep, g.operator().clone())
}

fn hypothesis(name: &str, detail: String) -> Error {
    Error::HypothesisViolation {
        name: name.to_string(),
        detail,
    }
}

// ---- catalog constructors ----

/// p(N) = sum coeffs[k] N^k; polynomials in a Nijenhuis operator are
/// again Nijenhuis operators, and the output is re-validated.
pub fn polynomial_of_n(g: &NijenhuisLieAlgebra, coeffs: &[Scalar]) -> Result<NijenhuisLieAlgebra> {
    let f = g.field();
    if coeffs.iter().any(|c| c.field() != f) {
        return Err(Error::FieldMismatch("polynomial coefficients".into()));
    }
    let dim = g.dim();
    let mut acc = Matrix::zero(f, dim, dim);
    let mut power = Matrix::identity(f, dim);
    for c in coeffs {
        if !c.is_zero() {
            acc = acc.add(&power.scale(c));
        }
        power = power.mul(g.operator());
    }
    NijenhuisLieAlgebra::new(g.algebra().clone(), acc)
}

/// Projections p_1, p_2 attached to a decomposition g = g_1 (+) g_2 into
/// two subalgebras; both are Nijenhuis operators.
pub fn projections_from_decomposition(
    l: &LieAlgebra,
    basis1: &[Vec<Scalar>],
    basis2: &[Vec<Scalar>],
) -> Result<(NijenhuisLieAlgebra, NijenhuisLieAlgebra)> {
    check_lie(l).into_result(Error::NotALieAlgebra)?;
    let dim = l.dim();
    let f = l.field();
    if basis1.len() + basis2.len() != dim {
        return Err(hypothesis(
            "direct sum decomposition",
            format!(
                "{} + {} basis vectors for dimension {dim}",
                basis1.len(),
                basis2.len()
            ),
        ));
    }
    let mut cols: Vec<Vec<Scalar>> = basis1.to_vec();
    cols.extend(basis2.to_vec());
    let p = Matrix::from_cols(f, dim, cols)?;
    let Some(p_inv) = p.inverse() else {
        return Err(hypothesis(
            "direct sum decomposition",
            "combined basis vectors are linearly dependent".into(),
        ));
    };
    for (name, basis) in [
        ("g1 is a subalgebra", basis1),
        ("g2 is a subalgebra", basis2),
    ] {
        let span = Subspace::from_spanning(f, dim, basis.to_vec());
        for (a, va) in basis.iter().enumerate() {
            for vb in basis.iter().skip(a + 1) {
                let br = l.bracket(va, vb)?;
                if !span.contains(&br) {
                    return Err(hypothesis(name, "bracket leaves the subspace".into()));
                }
            }
        }
    }
    let mut d1 = Matrix::zero(f, dim, dim);
    for i in 0..basis1.len() {
        d1.set(i, i, f.one());
    }
    let p1 = p.mul(&d1).mul(&p_inv);
    let p2 = Matrix::identity(f, dim).sub(&p1);
    Ok((
        NijenhuisLieAlgebra::new(l.clone(), p1)?,
        NijenhuisLieAlgebra::new(l.clone(), p2)?,
    ))
}

/// Verify that j is a complex structure (j^2 = -Id with bi-invariance)
/// and wrap it as a Nijenhuis operator.
pub fn complex_structure_check(l: &LieAlgebra, j: &LinearMap) -> Result<NijenhuisLieAlgebra> {
    check_lie(l).into_result(Error::NotALieAlgebra)?;
    let dim = l.dim();
    let f = l.field();
    if j.rows() != dim || j.cols() != dim {
        return Err(Error::DimensionMismatch(
            "complex structure must be dim square".into(),
        ));
    }
    if !j.mul(j).add(&Matrix::identity(f, dim)).is_zero() {
        return Err(hypothesis(
            "j^2 = -Id",
            "square of j is not minus the identity".into(),
        ));
    }
    for a in 0..dim {
        for b in 0..dim {
            let ea = vunit(f, dim, a);
            let eb = vunit(f, dim, b);
            let jbr = j.mul_vec(l.bracket_basis(a, b));
            if l.bracket(&j.col(a), &eb)? != jbr {
                return Err(hypothesis(
                    "bi-invariance",
                    format!(
                        "[j e_{}, e_{}] != j[e_{}, e_{}]",
                        a + 1,
                        b + 1,
                        a + 1,
                        b + 1
                    ),
                ));
            }
            if l.bracket(&ea, &j.col(b))? != jbr {
                return Err(hypothesis(
                    "bi-invariance",
                    format!(
                        "[e_{}, j e_{}] != j[e_{}, e_{}]",
                        a + 1,
                        b + 1,
                        a + 1,
                        b + 1
                    ),
                ));
            }
        }
    }
    NijenhuisLieAlgebra::new(l.clone(), j.clone())
}

/// Violations of the relative Rota-Baxter identity
/// [r u, r v] = r(rho(r u) v - rho(r v) u) on basis pairs of V.
pub fn check_relative_rota_baxter(rep: &Representation, r: &LinearMap) -> Result<Report> {
    let g = rep.algebra();
    if r.rows() != g.dim() || r.cols() != rep.dim_v() {
        return Err(Error::DimensionMismatch(
            "Rota-Baxter operator must map V to g".into(),
        ));
    }
    let mut report = Report::new("relative Rota-Baxter identity");
    let m = rep.dim_v();
    for u in 0..m {
        for v in (u + 1)..m {
            let lhs = g.bracket(&r.col(u), &r.col(v))?;
            let fu = vunit(rep.field(), m, u);
            let fv = vunit(rep.field(), m, v);
            let inner = vsub(
                &rep.rho(&r.col(u)).mul_vec(&fv),
                &rep.rho(&r.col(v)).mul_vec(&fu),
            );
            report.check("Rota-Baxter identity", &[u, v], lhs, r.mul_vec(&inner));
        }
    }
    Ok(report)
}

/// Lift a relative Rota-Baxter operator r: V -> g to the Nijenhuis
/// operator (x, u) |-> (r u, 0) on the semidirect product.
pub fn rb_lift(rep: &Representation, r: &LinearMap) -> Result<NijenhuisLieAlgebra> {
    check_relative_rota_baxter(rep, r)?
        .into_result(|d| hypothesis("relative Rota-Baxter identity", d))?;
    let algebra = semidirect_lie(rep)?;
    let n = rep.algebra().dim();
    let m = rep.dim_v();
    let mut lift = Matrix::zero(rep.field(), n + m, n + m);
    embed_block(&mut lift, 0, n, r);
    NijenhuisLieAlgebra::new(algebra, lift)
}

/// For compatible relative Rota-Baxter operators r1, r2 with r2
/// invertible, r1 r2^{-1} is a Nijenhuis operator on g.
pub fn rb_quotient_operator(
    rep: &Representation,
    r1: &LinearMap,
    r2: &LinearMap,
) -> Result<NijenhuisLieAlgebra> {
    check_relative_rota_baxter(rep, r1)?
        .into_result(|d| hypothesis("r1 is relative Rota-Baxter", d))?;
    check_relative_rota_baxter(rep, r2)?
        .into_result(|d| hypothesis("r2 is relative Rota-Baxter", d))?;
    check_relative_rota_baxter(rep, &r1.add(r2))?
        .into_result(|d| hypothesis("r1 and r2 are compatible", d))?;
    let Some(r2_inv) = r2.inverse() else {
        return Err(hypothesis(
            "r2 is invertible",
            "matrix has no inverse".into(),
        ));
    };
    NijenhuisLieAlgebra::new(rep.algebra().clone(), r1.mul(&r2_inv))
}

/// Commutator Lie algebra of an associative algebra whose
/// associative-Nijenhuis operator is then a Lie-Nijenhuis operator.
/// `mult[i][j]` holds the coordinates of e_i * e_j.
pub fn nijenhuis_from_associative(
    name: &str,
    field: Field,
    dim: usize,
    mult: &[Vec<Vec<Scalar>>],
    n: &LinearMap,
) -> Result<NijenhuisLieAlgebra> {
    if mult.len() != dim
        || mult.iter().any(|r| r.len() != dim)
        || mult.iter().flatten().any(|v| v.len() != dim)
    {
        return Err(Error::DimensionMismatch(
            "multiplication table must be dim^3".into(),
        ));
    }
    let prod = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = vzero(field, dim);
        for i in 0..dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                out = vadd(&out, &vscale(&c, &mult[i][j]));
            }
        }
        out
    };
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let ec = vunit(field, dim, c);
                let ea = vunit(field, dim, a);
                if prod(&mult[a][b], &ec) != prod(&ea, &mult[b][c]) {
                    return Err(hypothesis(
                        "associativity",
                        format!(
                            "(e_{} e_{}) e_{} != e_{} (e_{} e_{})",
                            a + 1,
                            b + 1,
                            c + 1,
                            a + 1,
                            b + 1,
                            c + 1
                        ),
                    ));
                }
            }
        }
    }
    for a in 0..dim {
        for b in 0..dim {
            let lhs = prod(&n.col(a), &n.col(b));
            let ea = vunit(field, dim, a);
            let eb = vunit(field, dim, b);
            let inner = vsub(
                &vadd(&prod(&n.col(a), &eb), &prod(&ea, &n.col(b))),
                &n.mul_vec(&mult[a][b]),
            );
            if lhs != n.mul_vec(&inner) {
                return Err(hypothesis(
                    "associative Nijenhuis identity",
                    format!("fails at (e_{}, e_{})", a + 1, b + 1),
                ));
            }
        }
    }
    let mut table = vec![vec![vzero(field, dim); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            table[i][j] = vsub(&mult[i][j], &mult[j][i]);
        }
    }
    let commutator = LieAlgebra::from_table(name, field, dim, table)?;
    NijenhuisLieAlgebra::new(commutator, n.clone())
}

/// The representation induced by a homomorphism Phi: (g, N) -> (h, S),
/// acting on h by rho_x = [Phi(x), -]_h with operator S.
pub fn induced_rep_from_morphism(
    src: &NijenhuisLieAlgebra,
    tgt: &NijenhuisLieAlgebra,
    phi: &LinearMap,
) -> Result<NijenhuisRepresentation> {
    let morphism = AlgebraMorphism {
        source: src.algebra().clone(),
        target: tgt.algebra().clone(),
        map: phi.clone(),
    };
    check_morphism(&morphism)?
        .report
        .into_result(|d| hypothesis("Lie algebra homomorphism", d))?;
    if tgt.operator().mul(phi) != phi.mul(src.operator()) {
        return Err(hypothesis(
            "operator intertwining",
            "S o Phi differs from Phi o N".into(),
        ));
    }
    let rho = (0..src.dim())
        .map(|i| tgt.algebra().ad(&phi.col(i)))
        .collect();
    let rep = Representation::new(src.algebra().clone(), tgt.dim(), rho)?;
    NijenhuisRepresentation::new(src.clone(), rep, tgt.operator().clone())
}

/// Tensor product of two Nijenhuis representations of the same base when
/// both module operators are projections; the operator is S (x) N_W.
pub fn tensor_projection_rep(
    r1: &NijenhuisRepresentation,
    r2: &NijenhuisRepresentation,
) -> Result<NijenhuisRepresentation> {
    if r1.base() != r2.base() {
        return Err(Error::Invalid(
            "tensor factors must share the base structure".into(),
        ));
    }
    let s = r1.operator();
    let nw = r2.operator();
    if s.mul(s) != *s {
        return Err(hypothesis("S is idempotent", "S^2 differs from S".into()));
    }
    if nw.mul(nw) != *nw {
        return Err(hypothesis(
            "N_W is idempotent",
            "N_W^2 differs from N_W".into(),
        ));
    }
    let (mv, mw) = (r1.dim_v(), r2.dim_v());
    let f = r1.field();
    let idv = Matrix::identity(f, mv);
    let idw = Matrix::identity(f, mw);
    let rho = (0..r1.base().dim())
        .map(|i| {
            r1.rep()
                .rho_basis(i)
                .kron(&idw)
                .add(&idv.kron(r2.rep().rho_basis(i)))
        })
        .collect();
    let rep = Representation::new(r1.base().algebra().clone(), mv * mw, rho)?;
    NijenhuisRepresentation::new(r1.base().clone(), rep, s.kron(nw))
}

/// Dual representation attached to an admissible zeta: the module is V*,
/// the action is minus the transpose, and the operator is the transpose
/// of zeta. For the adjoint representation this is the coadjoint triple.
pub fn coadjoint_from_admissible(
    g: &NijenhuisLieAlgebra,
    rep: &Representation,
    zeta: &LinearMap,
) -> Result<NijenhuisRepresentation> {
    if rep.algebra() != g.algebra() {
        return Err(Error::Invalid(
            "representation is over a different algebra".into(),
        ));
    }
    let m = rep.dim_v();
    if zeta.rows() != m || zeta.cols() != m {
        return Err(Error::DimensionMismatch("zeta must be dim_V square".into()));
    }
    check_representation(rep).into_result(Error::NotARepresentation)?;
    let n = g.operator();
    for i in 0..g.dim() {
        let rho_ni = rep.rho(&n.col(i));
        let rho_i = rep.rho_basis(i);
        // zeta(rho_{Nx} v) + rho_x zeta^2 v = rho_{Nx} zeta v + zeta(rho_x zeta v)
        let lhs = zeta.mul(&rho_ni).add(&rho_i.mul(&zeta.mul(zeta)));
        let rhs = rho_ni.mul(zeta).add(&zeta.mul(&rho_i.mul(zeta)));
        if lhs != rhs {
            return Err(hypothesis(
                "admissibility of zeta",
                format!("identity fails at basis element e_{}", i + 1),
            ));
        }
    }
    let dual_rho = (0..g.dim())
        .map(|i| rep.rho_basis(i).transpose().neg())
        .collect();
    let dual = Representation::new(g.algebra().clone(), m, dual_rho)?;
    NijenhuisRepresentation::new(g.clone(), dual, zeta.transpose())
}

/// Data of a representation of a relative Rota-Baxter Lie algebra:
/// two auxiliary modules, a pairing mu: h -> Hom(V, W), and s: W -> h.
pub struct RbRepresentationData<'a> {
    pub rep: &'a Representation,
    pub r: &'a LinearMap,
    pub h_rep: &'a Representation,
    pub w_rep: &'a Representation,
    /// mu[c] is the V -> W matrix attached to the c-th basis vector of h.
    pub mu: &'a [Matrix],
    pub s: &'a LinearMap,
}

/// Lift a representation of a relative Rota-Baxter Lie algebra to a
/// Nijenhuis representation of (g (+) V, [.,.]_|x, r-lift) on h (+) W.
pub fn rb_representation_lift(data: &RbRepresentationData) -> Result<NijenhuisRepresentation> {
    let RbRepresentationData {
        rep,
        r,
        h_rep,
        w_rep,
        mu,
        s,
    } = *data;
    let g = rep.algebra();
    if h_rep.algebra() != g || w_rep.algebra() != g {
        return Err(Error::Invalid(
            "auxiliary modules must be over the same algebra".into(),
        ));
    }
    let (dim_g, dim_v) = (g.dim(), rep.dim_v());
    let (dim_h, dim_w) = (h_rep.dim_v(), w_rep.dim_v());
    if mu.len() != dim_h || mu.iter().any(|m| m.rows() != dim_w || m.cols() != dim_v) {
        return Err(Error::DimensionMismatch(
            "mu must be one W x V matrix per h basis".into(),
        ));
    }
    if s.rows() != dim_h || s.cols() != dim_w {
        return Err(Error::DimensionMismatch("s must map W to h".into()));
    }
    check_representation(h_rep).into_result(Error::NotARepresentation)?;
    check_representation(w_rep).into_result(Error::NotARepresentation)?;

    let mu_at = |h: &[Scalar]| -> Matrix {
        let mut acc = Matrix::zero(g.field(), dim_w, dim_v);
        for (k, coeff) in h.iter().enumerate() {
            if !coeff.is_zero() {
                acc = acc.add(&mu[k].scale(coeff));
            }
        }
        acc
    };

    // mu_{rho_h(x) h} = rho_W(x) mu_h - mu_h rho(x), as V -> W matrices.
    for i in 0..dim_g {
        for c in 0..dim_h {
            let lhs = mu_at(&h_rep.rho_basis(i).col(c));
            let rhs = w_rep
                .rho_basis(i)
                .mul(&mu[c])
                .sub(&mu[c].mul(rep.rho_basis(i)));
            if lhs != rhs {
                return Err(hypothesis(
                    "mu equivariance",
                    format!("fails at (e_{}, h_{})", i + 1, c + 1),
                ));
            }
        }
    }
    // rho_h(r v) s(w) = s(rho_W(r v) w - mu_{s(w)} v)
    for b in 0..dim_v {
        let x = r.col(b);
        for d in 0..dim_w {
            let lhs = h_rep.rho(&x).mul_vec(&s.col(d));
            let fb = vunit(g.field(), dim_v, b);
            let inner = vsub(&w_rep.rho(&x).col(d), &mu_at(&s.col(d)).mul_vec(&fb));
            if lhs != s.mul_vec(&inner) {
                return Err(hypothesis(
                    "s compatibility",
                    format!("fails at (v_{}, w_{})", b + 1, d + 1),
                ));
            }
        }
    }

    let base = rb_lift(rep, r)?;
    let total_mod = dim_h + dim_w;
    let f = g.field();
    let mut sigma = Vec::with_capacity(dim_g + dim_v);
    for i in 0..dim_g {
        sigma.push(block_diag(h_rep.rho_basis(i), w_rep.rho_basis(i)));
    }
    for b in 0..dim_v {
        // sigma_{(0, f_b)} (h, w) = (0, -mu_h f_b)
        let mut m = Matrix::zero(f, total_mod, total_mod);
        for c in 0..dim_h {
            let fb = vunit(f, dim_v, b);
            let col = mu[c].mul_vec(&fb);
            for (w_idx, entry) in col.iter().enumerate() {
                m.set(dim_h + w_idx, c, -entry);
            }
        }
        sigma.push(m);
    }
    let module = Representation::new(base.algebra().clone(), total_mod, sigma)?;
    let mut s_tilde = Matrix::zero(f, total_mod, total_mod);
    embed_block(&mut s_tilde, 0, dim_h, s);
    NijenhuisRepresentation::new(base, module, s_tilde)
}

// ---- derivation spaces ----

pub(crate) fn commuting_constraint_rows(n: &Matrix) -> Vec<Vec<Scalar>> {
    // N D - D N = 0 as linear constraints on D (row-major flattening).
    let dim = n.rows();
    let f = n.field();
    let mut rows = Vec::new();
    for r in 0..dim {
        for c in 0..dim {
            let mut row = vzero(f, dim * dim);
            for k in 0..dim {
                row[k * dim + c] = &row[k * dim + c] + n.get(r, k);
                row[r * dim + k] = &row[r * dim + k] - n.get(k, c);
            }
            rows.push(row);
        }
    }
    rows
}

/// Der(g, N): derivations commuting with N, as a subspace of End(g).
/// Closure under the commutator bracket is verified before returning.
pub fn nij_derivation_space(g: &NijenhuisLieAlgebra) -> Result<Subspace> {
    let l = g.algebra();
    let n = l.dim();
    let f = l.field();
    let mut rows = crate::lie::leibniz_constraint_rows(l);
    rows.extend(commuting_constraint_rows(g.operator()));
    let space = if rows.is_empty() {
        Subspace::full(f, n * n)
    } else {
        kernel(&Matrix::from_rows(f, rows)?)
    };
    let mats: Vec<Matrix> = space
        .basis()
        .iter()
        .map(|b| Matrix::from_flat(f, n, n, b.clone()))
        .collect();
    for a in &mats {
        for b in &mats {
            let comm = a.mul(b).sub(&b.mul(a));
            if !space.contains(&comm.flatten()) {
                return Err(Error::Internal(
                    "derivation space is not closed under commutator".into(),
                ));
            }
        }
    }
    Ok(space)
}

/// Der((g, N); (V, S)): linear maps d: g -> V with S d = d N and
/// d[x,y] = rho_x d(y) - rho_y d(x), flattened row-major (dim_V x dim_g).
pub fn nij_derivation_space_valued(
    g: &NijenhuisLieAlgebra,
    r: &NijenhuisRepresentation,
) -> Result<Subspace> {
    if r.base() != g {
        return Err(Error::Invalid(
            "representation is over a different base".into(),
        ));
    }
    let l = g.algebra();
    let n = l.dim();
    let m = r.dim_v();
    let f = l.field();
    let s = r.operator();
    let nop = g.operator();
    let mut rows = Vec::new();
    // S d = d N
    for a in 0..m {
        for c in 0..n {
            let mut row = vzero(f, m * n);
            for k in 0..m {
                row[k * n + c] = &row[k * n + c] + s.get(a, k);
            }
            for k in 0..n {
                row[a * n + k] = &row[a * n + k] - nop.get(k, c);
            }
            rows.push(row);
        }
    }
    // d([e_i, e_j]) = rho_i d(e_j) - rho_j d(e_i)
    for i in 0..n {
        for j in (i + 1)..n {
            for w in 0..m {
                let mut row = vzero(f, m * n);
                for (k, c) in l.bracket_basis(i, j).iter().enumerate() {
                    row[w * n + k] = &row[w * n + k] + c;
                }
                for u in 0..m {
                    row[u * n + j] = &row[u * n + j] - r.rep().rho_basis(i).get(w, u);
                    row[u * n + i] = &row[u * n + i] + r.rep().rho_basis(j).get(w, u);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok(Subspace::full(f, m * n));
    }
    Ok(kernel(&Matrix::from_rows(f, rows)?))
}
