//! Two-cocycles of Nijenhuis Lie algebras: the non-abelian identities,
//! equivalence of cocycles, the abelian specialization with a computable
//! second cohomology group, and the pushforward to deformed algebras.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::lie::LieAlgebra;
use crate::linalg::{
    kernel, solve, vadd, vneg, vscale, vsub, vunit, vzero, AffineSolution, Matrix, Subspace,
};
use crate::nijenhuis::{deformed_algebra, NijenhuisLieAlgebra, NijenhuisRepresentation};
use crate::report::Report;

/// Build an alternating tensor chi[i][j] in V coordinates from entries
/// given on pairs i < j only (0-based); the rest follows by antisymmetry.
pub fn alternating_tensor(
    field: Field,
    n: usize,
    m: usize,
    entries: &[(usize, usize, Vec<Scalar>)],
) -> Result<Vec<Vec<Vec<Scalar>>>> {
    let mut chi = vec![vec![vzero(field, m); n]; n];
    for (i, j, v) in entries {
        if *i >= *j || *j >= n {
            return Err(Error::Invalid(format!(
                "alternating entries need i < j < dim, got ({i}, {j})"
            )));
        }
        if v.len() != m {
            return Err(Error::DimensionMismatch("tensor entry length".into()));
        }
        chi[*i][*j] = v.clone();
        chi[*j][*i] = vneg(v);
    }
    Ok(chi)
}

fn validate_alternating(chi: &[Vec<Vec<Scalar>>], n: usize, m: usize) -> Result<()> {
    if chi.len() != n || chi.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("chi must be dim_g x dim_g".into()));
    }
    if chi.iter().flatten().any(|v| v.len() != m) {
        return Err(Error::DimensionMismatch(
            "chi values must live in the target".into(),
        ));
    }
    for i in 0..n {
        if chi[i][i].iter().any(|c| !c.is_zero()) {
            return Err(Error::Invalid(format!(
                "chi(e_{}, e_{}) must vanish",
                i + 1,
                i + 1
            )));
        }
        for j in (i + 1)..n {
            if chi[j][i] != vneg(&chi[i][j]) {
                return Err(Error::Invalid(format!(
                    "chi(e_{}, e_{}) must equal -chi(e_{}, e_{})",
                    j + 1,
                    i + 1,
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn bilinear_eval(
    chi: &[Vec<Vec<Scalar>>],
    field: Field,
    m: usize,
    x: &[Scalar],
    y: &[Scalar],
) -> Vec<Scalar> {
    let mut out = vzero(field, m);
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        for (b, yb) in y.iter().enumerate() {
            if yb.is_zero() {
                continue;
            }
            let c = xa * yb;
            out = vadd(&out, &vscale(&c, &chi[a][b]));
        }
    }
    out
}

/// A triple (chi, psi, F) against a pair of Nijenhuis Lie algebras; the
/// cocycle identities are verified by `check_nonabelian_cocycle`, not by
/// construction, so that failing candidates can be inspected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NonAbelianTwoCocycle {
    source: NijenhuisLieAlgebra,
    target: NijenhuisLieAlgebra,
    chi: Vec<Vec<Vec<Scalar>>>,
    psi: Vec<Matrix>,
    f: Matrix,
}

impl NonAbelianTwoCocycle {
    pub fn new(
        source: NijenhuisLieAlgebra,
        target: NijenhuisLieAlgebra,
        chi: Vec<Vec<Vec<Scalar>>>,
        psi: Vec<Matrix>,
        f: Matrix,
    ) -> Result<NonAbelianTwoCocycle> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch("cocycle source/target fields".into()));
        }
        let n = source.dim();
        let m = target.dim();
        validate_alternating(&chi, n, m)?;
        if psi.len() != n || psi.iter().any(|p| p.rows() != m || p.cols() != m) {
            return Err(Error::DimensionMismatch(
                "psi must be one End(target) per source basis".into(),
            ));
        }
        if f.rows() != m || f.cols() != n {
            return Err(Error::DimensionMismatch(
                "F must map source to target".into(),
            ));
        }
        Ok(NonAbelianTwoCocycle {
            source,
            target,
            chi,
            psi,
            f,
        })
    }

    pub fn zero(
        source: NijenhuisLieAlgebra,
        target: NijenhuisLieAlgebra,
    ) -> Result<NonAbelianTwoCocycle> {
        let f = source.field();
        let (n, m) = (source.dim(), target.dim());
        NonAbelianTwoCocycle::new(
            source,
            target.clone(),
            vec![vec![vzero(f, m); n]; n],
            vec![Matrix::zero(f, m, m); n],
            Matrix::zero(f, m, n),
        )
    }

    pub fn source(&self) -> &NijenhuisLieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &NijenhuisLieAlgebra {
        &self.target
    }

    pub fn chi_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.chi[i][j]
    }

    pub fn chi_eval(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        bilinear_eval(&self.chi, self.source.field(), self.target.dim(), x, y)
    }

    pub fn psi_basis(&self, i: usize) -> &Matrix {
        &self.psi[i]
    }

    pub fn psi(&self, x: &[Scalar]) -> Matrix {
        let m = self.target.dim();
        let mut acc = Matrix::zero(self.source.field(), m, m);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.psi[i].scale(c));
            }
        }
        acc
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }
}

/// Violations of the four defining identities on basis tuples, plus the
/// requirement that each psi(e_i) is a derivation of the target bracket.
pub fn check_nonabelian_cocycle(c: &NonAbelianTwoCocycle) -> Result<Report> {
    let g = c.source.algebra();
    let h = c.target.algebra();
    let n = g.dim();
    let m = h.dim();
    let field = g.field();
    let nop = c.source.operator();
    let s = c.target.operator();
    let mut report = Report::new("non-abelian 2-cocycle");

    for i in 0..n {
        for a in 0..m {
            for b in (a + 1)..m {
                let lhs = c.psi[i].mul_vec(h.bracket_basis(a, b));
                let rhs = vadd(
                    &h.bracket(&c.psi[i].col(a), &vunit(field, m, b))?,
                    &h.bracket(&vunit(field, m, a), &c.psi[i].col(b))?,
                );
                report.check(
                    "psi maps into derivations of the kernel",
                    &[i, a, b],
                    lhs,
                    rhs,
                );
            }
        }
    }

    // psi_x psi_y - psi_y psi_x - psi_[x,y] = [chi(x,y), -]
    for i in 0..n {
        for j in (i + 1)..n {
            let comm = c.psi[i].mul(&c.psi[j]).sub(&c.psi[j].mul(&c.psi[i]));
            let psi_br = c.psi(g.bracket_basis(i, j));
            for a in 0..m {
                let lhs = vsub(&comm.col(a), &psi_br.col(a));
                let rhs = h.bracket(&c.chi[i][j], &vunit(field, m, a))?;
                report.check("commutator identity", &[i, j, a], lhs, rhs);
            }
        }
    }

    // cyclic chi identity
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let ei = vunit(field, n, i);
                let ej = vunit(field, n, j);
                let ek = vunit(field, n, k);
                let mut lhs = c.psi[i].mul_vec(&c.chi[j][k]);
                lhs = vadd(&lhs, &c.psi[j].mul_vec(&c.chi[k][i]));
                lhs = vadd(&lhs, &c.psi[k].mul_vec(&c.chi[i][j]));
                lhs = vsub(&lhs, &c.chi_eval(g.bracket_basis(i, j), &ek));
                lhs = vsub(&lhs, &c.chi_eval(g.bracket_basis(j, k), &ei));
                lhs = vsub(&lhs, &c.chi_eval(g.bracket_basis(k, i), &ej));
                report.check("cyclic identity", &[i, j, k], lhs, vzero(field, m));
            }
        }
    }

    // psi_{Nx} S h = S(psi_{Nx} h + psi_x S h - S psi_x h) + S[F x, h] - [F x, S h]
    for i in 0..n {
        let psi_ni = c.psi(&nop.col(i));
        let ad_fi = h.ad(&c.f.col(i));
        for a in 0..m {
            let lhs = psi_ni.mul_vec(&s.col(a));
            let inner = vsub(
                &vadd(&psi_ni.col(a), &c.psi[i].mul_vec(&s.col(a))),
                &s.mul_vec(&c.psi[i].col(a)),
            );
            let rhs = vsub(
                &vadd(&s.mul_vec(&inner), &s.mul_vec(&ad_fi.col(a))),
                &ad_fi.mul_vec(&s.col(a)),
            );
            report.check("operator compatibility", &[i, a], lhs, rhs);
        }
    }

    // the F identity on pairs
    for i in 0..n {
        for j in (i + 1)..n {
            let ei = vunit(field, n, i);
            let ej = vunit(field, n, j);
            let ni = nop.col(i);
            let nj = nop.col(j);
            let mut acc = c.chi_eval(&ni, &nj);
            let inner = vsub(
                &vadd(&c.chi_eval(&ni, &ej), &c.chi_eval(&ei, &nj)),
                &s.mul_vec(&c.chi[i][j]),
            );
            acc = vsub(&acc, &s.mul_vec(&inner));
            let deformed = vsub(
                &vadd(&g.bracket(&ni, &ej)?, &g.bracket(&ei, &nj)?),
                &nop.mul_vec(g.bracket_basis(i, j)),
            );
            acc = vsub(&acc, &c.f.mul_vec(&deformed));
            acc = vadd(&acc, &c.psi(&ni).mul_vec(&c.f.col(j)));
            acc = vsub(&acc, &c.psi(&nj).mul_vec(&c.f.col(i)));
            let inner_f = vsub(
                &vsub(
                    &c.psi[i].mul_vec(&c.f.col(j)),
                    &c.psi[j].mul_vec(&c.f.col(i)),
                ),
                &c.f.mul_vec(g.bracket_basis(i, j)),
            );
            acc = vsub(&acc, &s.mul_vec(&inner_f));
            acc = vadd(&acc, &h.bracket(&c.f.col(i), &c.f.col(j))?);
            report.check("operator cocycle identity", &[i, j], acc, vzero(field, m));
        }
    }

    Ok(report)
}

/// A linear map phi: source -> target (or -> V) certifying that two
/// cocycles are equivalent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivalenceWitness {
    pub phi: Matrix,
}

/// Violations of the three equivalence identities relating c and c'
/// (differences taken as first minus second) through the witness.
pub fn check_equivalence_witness(
    c: &NonAbelianTwoCocycle,
    cp: &NonAbelianTwoCocycle,
    w: &EquivalenceWitness,
) -> Result<Report> {
    if c.source != cp.source || c.target != cp.target {
        return Err(Error::Invalid(
            "cocycles must share source and target".into(),
        ));
    }
    let g = c.source.algebra();
    let h = c.target.algebra();
    let (n, m) = (g.dim(), h.dim());
    if w.phi.rows() != m || w.phi.cols() != n {
        return Err(Error::DimensionMismatch(
            "witness must map source to target".into(),
        ));
    }
    let phi = &w.phi;
    let s = c.target.operator();
    let nop = c.source.operator();
    let mut report = Report::new("cocycle equivalence witness");
    for i in 0..n {
        let ad_phi_i = h.ad(&phi.col(i));
        for a in 0..m {
            let lhs = vsub(&c.psi[i].col(a), &cp.psi[i].col(a));
            report.check("psi difference", &[i, a], lhs, ad_phi_i.col(a));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = vsub(&c.chi[i][j], &cp.chi[i][j]);
            let mut rhs = vsub(
                &cp.psi[i].mul_vec(&phi.col(j)),
                &cp.psi[j].mul_vec(&phi.col(i)),
            );
            rhs = vsub(&rhs, &phi.mul_vec(g.bracket_basis(i, j)));
            rhs = vadd(&rhs, &h.bracket(&phi.col(i), &phi.col(j))?);
            report.check("chi difference", &[i, j], lhs, rhs);
        }
    }
    for i in 0..n {
        let lhs = vsub(&c.f.col(i), &cp.f.col(i));
        let rhs = vsub(&s.mul_vec(&phi.col(i)), &phi.mul_vec(&nop.col(i)));
        report.check("F difference", &[i], lhs, rhs);
    }
    Ok(report)
}

/// Decide equivalence of two cocycles. With an abelian target the
/// identities are linear in phi and solved exactly over any field; a
/// non-abelian target is searched exhaustively over a prime field, with
/// candidates capped by `budget`. `None` is a certified non-equivalence.
pub fn search_equivalence(
    c: &NonAbelianTwoCocycle,
    cp: &NonAbelianTwoCocycle,
    budget: u64,
) -> Result<Option<EquivalenceWitness>> {
    if c.source != cp.source || c.target != cp.target {
        return Err(Error::Invalid(
            "cocycles must share source and target".into(),
        ));
    }
    let g = c.source.algebra();
    let h = c.target.algebra();
    let (n, m) = (g.dim(), h.dim());
    let field = g.field();

    if h.is_abelian() {
        // The bracket terms vanish: psi must agree outright, and the chi
        // and F differences are inhomogeneous linear systems in phi
        // (unknowns phi[u][c] flattened row-major).
        if (0..n).any(|i| c.psi[i] != cp.psi[i]) {
            return Ok(None);
        }
        let unknowns = m * n;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for w_idx in 0..m {
                    let mut row = vzero(field, unknowns);
                    for u in 0..m {
                        row[u * n + j] = &row[u * n + j] + cp.psi[i].get(w_idx, u);
                        row[u * n + i] = &row[u * n + i] - cp.psi[j].get(w_idx, u);
                    }
                    for (k, br) in g.bracket_basis(i, j).iter().enumerate() {
                        row[w_idx * n + k] = &row[w_idx * n + k] - br;
                    }
                    rows.push(row);
                    rhs.push(&c.chi[i][j][w_idx] - &cp.chi[i][j][w_idx]);
                }
            }
        }
        let s = c.target.operator();
        let nop = c.source.operator();
        for i in 0..n {
            for w_idx in 0..m {
                let mut row = vzero(field, unknowns);
                for u in 0..m {
                    row[u * n + i] = &row[u * n + i] + s.get(w_idx, u);
                }
                for k in 0..n {
                    row[w_idx * n + k] = &row[w_idx * n + k] - nop.get(k, i);
                }
                rows.push(row);
                rhs.push(c.f.get(w_idx, i) - cp.f.get(w_idx, i));
            }
        }
        if rows.is_empty() {
            return Ok(Some(EquivalenceWitness {
                phi: Matrix::zero(field, m, n),
            }));
        }
        let a = Matrix::from_rows(field, rows)?;
        return match solve(&a, &rhs)? {
            AffineSolution::Empty => Ok(None),
            AffineSolution::Solutions { particular, .. } => Ok(Some(EquivalenceWitness {
                phi: Matrix::from_flat(field, m, n, particular),
            })),
        };
    }

    let Some(p) = field.order() else {
        return Err(Error::EnumerationNeedsPrimeField(
            "exhaustive witness search over a non-abelian target".into(),
        ));
    };
    let entries = (m * n) as u32;
    let required = (p as u128).checked_pow(entries).unwrap_or(u128::MAX);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    for phi in all_matrices(field, p, m, n) {
        let w = EquivalenceWitness { phi };
        if check_equivalence_witness(c, cp, &w)?.passed() {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// All rows x cols matrices over F_p in lexicographic order of their
/// row-major entry list (entries ordered 0, 1, ..., p-1).
pub(crate) fn all_matrices(
    field: Field,
    p: u64,
    rows: usize,
    cols: usize,
) -> impl Iterator<Item = Matrix> {
    let len = rows * cols;
    let mut digits = vec![0u64; len];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let entries: Vec<Scalar> = digits
            .iter()
            .map(|&d| field.element(d).expect("digit below p"))
            .collect();
        let mat = Matrix::from_flat(field, rows, cols, entries);
        // Advance the odometer from the last entry so earlier entries
        // are the most significant digits.
        let mut idx = len;
        loop {
            if idx == 0 {
                done = true;
                break;
            }
            idx -= 1;
            digits[idx] += 1;
            if digits[idx] < p {
                break;
            }
            digits[idx] = 0;
        }
        if len == 0 {
            done = true;
        }
        Some(mat)
    })
}

/// A pair (chi, F) against a Nijenhuis representation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianTwoCocycle {
    context: NijenhuisRepresentation,
    chi: Vec<Vec<Vec<Scalar>>>,
    f: Matrix,
}

impl AbelianTwoCocycle {
    pub fn new(
        context: NijenhuisRepresentation,
        chi: Vec<Vec<Vec<Scalar>>>,
        f: Matrix,
    ) -> Result<AbelianTwoCocycle> {
        let n = context.base().dim();
        let m = context.dim_v();
        validate_alternating(&chi, n, m)?;
        if f.rows() != m || f.cols() != n {
            return Err(Error::DimensionMismatch(
                "F must map the base into the module".into(),
            ));
        }
        if f.field() != context.field() {
            return Err(Error::FieldMismatch("cocycle field".into()));
        }
        Ok(AbelianTwoCocycle { context, chi, f })
    }

    pub fn zero(context: NijenhuisRepresentation) -> AbelianTwoCocycle {
        let field = context.field();
        let (n, m) = (context.base().dim(), context.dim_v());
        AbelianTwoCocycle {
            context,
            chi: vec![vec![vzero(field, m); n]; n],
            f: Matrix::zero(field, m, n),
        }
    }

    pub fn context(&self) -> &NijenhuisRepresentation {
        &self.context
    }

    pub fn chi_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.chi[i][j]
    }

    pub fn chi_eval(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        bilinear_eval(&self.chi, self.context.field(), self.context.dim_v(), x, y)
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    /// View the pair as a non-abelian cocycle into the module with its
    /// zero bracket, psi being the action.
    pub fn as_nonabelian(&self) -> Result<NonAbelianTwoCocycle> {
        let m = self.context.dim_v();
        let field = self.context.field();
        let target = NijenhuisLieAlgebra::new(
            LieAlgebra::abelian("module", field, m),
            self.context.operator().clone(),
        )?;
        let psi = (0..self.context.base().dim())
            .map(|i| self.context.rep().rho_basis(i).clone())
            .collect();
        NonAbelianTwoCocycle::new(
            self.context.base().clone(),
            target,
            self.chi.clone(),
            psi,
            self.f.clone(),
        )
    }
}

/// Violations of the two abelian cocycle identities on basis tuples.
pub fn check_abelian_cocycle(c: &AbelianTwoCocycle) -> Result<Report> {
    let g = c.context.base().algebra();
    let rep = c.context.rep();
    let n = g.dim();
    let m = c.context.dim_v();
    let field = g.field();
    let nop = c.context.base().operator();
    let s = c.context.operator();
    let mut report = Report::new("abelian 2-cocycle");
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let ei = vunit(field, n, i);
                let ej = vunit(field, n, j);
                let ek = vunit(field, n, k);
                let mut acc = rep.rho_basis(i).mul_vec(&c.chi[j][k]);
                acc = vadd(&acc, &rep.rho_basis(j).mul_vec(&c.chi[k][i]));
                acc = vadd(&acc, &rep.rho_basis(k).mul_vec(&c.chi[i][j]));
                acc = vsub(&acc, &c.chi_eval(g.bracket_basis(i, j), &ek));
                acc = vsub(&acc, &c.chi_eval(g.bracket_basis(j, k), &ei));
                acc = vsub(&acc, &c.chi_eval(g.bracket_basis(k, i), &ej));
                report.check("cyclic identity", &[i, j, k], acc, vzero(field, m));
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let ei = vunit(field, n, i);
            let ej = vunit(field, n, j);
            let ni = nop.col(i);
            let nj = nop.col(j);
            let mut acc = c.chi_eval(&ni, &nj);
            let inner = vsub(
                &vadd(&c.chi_eval(&ni, &ej), &c.chi_eval(&ei, &nj)),
                &s.mul_vec(&c.chi[i][j]),
            );
            acc = vsub(&acc, &s.mul_vec(&inner));
            let deformed = vsub(
                &vadd(&g.bracket(&ni, &ej)?, &g.bracket(&ei, &nj)?),
                &nop.mul_vec(g.bracket_basis(i, j)),
            );
            acc = vsub(&acc, &c.f.mul_vec(&deformed));
            acc = vadd(&acc, &rep.rho(&ni).mul_vec(&c.f.col(j)));
            acc = vsub(&acc, &rep.rho(&nj).mul_vec(&c.f.col(i)));
            let inner_f = vsub(
                &vsub(
                    &rep.rho_basis(i).mul_vec(&c.f.col(j)),
                    &rep.rho_basis(j).mul_vec(&c.f.col(i)),
                ),
                &c.f.mul_vec(g.bracket_basis(i, j)),
            );
            acc = vsub(&acc, &s.mul_vec(&inner_f));
            report.check("operator cocycle identity", &[i, j], acc, vzero(field, m));
        }
    }
    Ok(report)
}

/// The coboundary of phi: chi = delta(phi), F = S phi - phi N.
pub fn abelian_coboundary(
    context: &NijenhuisRepresentation,
    phi: &Matrix,
) -> Result<AbelianTwoCocycle> {
    let g = context.base().algebra();
    let n = g.dim();
    let m = context.dim_v();
    if phi.rows() != m || phi.cols() != n {
        return Err(Error::DimensionMismatch(
            "phi must map the base into the module".into(),
        ));
    }
    let field = g.field();
    let mut chi = vec![vec![vzero(field, m); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = vsub(
                &context.rep().rho_basis(i).mul_vec(&phi.col(j)),
                &context.rep().rho_basis(j).mul_vec(&phi.col(i)),
            );
            v = vsub(&v, &phi.mul_vec(g.bracket_basis(i, j)));
            chi[j][i] = vneg(&v);
            chi[i][j] = v;
        }
    }
    let f = context
        .operator()
        .mul(phi)
        .sub(&phi.mul(context.base().operator()));
    AbelianTwoCocycle::new(context.clone(), chi, f)
}

/// Coordinate layout for the space of (chi, F) pairs: chi entries on
/// lexicographic pairs i < j (each a module vector), then F row-major.
#[derive(Clone, Debug)]
struct CochainLayout {
    n: usize,
    m: usize,
    pairs: Vec<(usize, usize)>,
}

impl CochainLayout {
    fn new(n: usize, m: usize) -> CochainLayout {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i, j));
            }
        }
        CochainLayout { n, m, pairs }
    }

    fn total(&self) -> usize {
        self.pairs.len() * self.m + self.m * self.n
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        self.pairs
            .iter()
            .position(|&p| p == (i, j))
            .expect("valid pair")
    }

    fn chi_slot(&self, i: usize, j: usize, w: usize) -> usize {
        self.pair_index(i, j) * self.m + w
    }

    fn f_slot(&self, w: usize, c: usize) -> usize {
        self.pairs.len() * self.m + w * self.n + c
    }

    /// Expression matrices map cochain coordinates to module vectors;
    /// composing with rho or S is matrix multiplication.
    fn chi_expr(&self, field: Field, a: usize, b: usize) -> Matrix {
        let mut e = Matrix::zero(field, self.m, self.total());
        if a == b {
            return e;
        }
        let one = field.one();
        for w in 0..self.m {
            if a < b {
                e.set(w, self.chi_slot(a, b, w), one.clone());
            } else {
                e.set(w, self.chi_slot(b, a, w), -&one);
            }
        }
        e
    }

    fn chi_expr_vec(&self, field: Field, x: &[Scalar], y: &[Scalar]) -> Matrix {
        let mut e = Matrix::zero(field, self.m, self.total());
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() || a == b {
                    continue;
                }
                let c = xa * yb;
                e = e.add(&self.chi_expr(field, a, b).scale(&c));
            }
        }
        e
    }

    fn f_expr(&self, field: Field, v: &[Scalar]) -> Matrix {
        let mut e = Matrix::zero(field, self.m, self.total());
        for w in 0..self.m {
            for (c, vc) in v.iter().enumerate() {
                if !vc.is_zero() {
                    e.set(w, self.f_slot(w, c), vc.clone());
                }
            }
        }
        e
    }

    fn flatten(&self, c: &AbelianTwoCocycle) -> Vec<Scalar> {
        let field = c.context().field();
        let mut out = vzero(field, self.total());
        for (idx, &(i, j)) in self.pairs.iter().enumerate() {
            for w in 0..self.m {
                out[idx * self.m + w] = c.chi[i][j][w].clone();
            }
        }
        for w in 0..self.m {
            for col in 0..self.n {
                out[self.f_slot(w, col)] = c.f.get(w, col).clone();
            }
        }
        out
    }

    fn unflatten(&self, context: &NijenhuisRepresentation, coords: &[Scalar]) -> AbelianTwoCocycle {
        let field = context.field();
        let mut chi = vec![vec![vzero(field, self.m); self.n]; self.n];
        for (idx, &(i, j)) in self.pairs.iter().enumerate() {
            for w in 0..self.m {
                chi[i][j][w] = coords[idx * self.m + w].clone();
            }
            chi[j][i] = vneg(&chi[i][j]);
        }
        let mut f = Matrix::zero(field, self.m, self.n);
        for w in 0..self.m {
            for col in 0..self.n {
                f.set(w, col, coords[self.f_slot(w, col)].clone());
            }
        }
        AbelianTwoCocycle {
            context: context.clone(),
            chi,
            f,
        }
    }
}

/// One cohomology class: a representative cocycle together with its
/// coordinates in the canonical quotient basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CohomologyClass {
    pub representative: AbelianTwoCocycle,
    pub basis_coordinates: Vec<Scalar>,
}

/// The computed second cohomology of a Nijenhuis representation:
/// cocycles modulo coboundaries with a fixed quotient basis.
#[derive(Clone, Debug)]
pub struct H2 {
    context: NijenhuisRepresentation,
    layout: CochainLayout,
    cocycles: Subspace,
    coboundaries: Subspace,
    coboundary_map: Matrix,
    rep_coords: Vec<Vec<Scalar>>,
}

impl H2 {
    pub fn dim(&self) -> usize {
        self.rep_coords.len()
    }

    pub fn context(&self) -> &NijenhuisRepresentation {
        &self.context
    }

    pub fn cocycle_dim(&self) -> usize {
        self.cocycles.dim()
    }

    pub fn coboundary_dim(&self) -> usize {
        self.coboundaries.dim()
    }

    pub fn representatives(&self) -> Vec<AbelianTwoCocycle> {
        self.rep_coords
            .iter()
            .map(|v| self.layout.unflatten(&self.context, v))
            .collect()
    }

    pub fn classes(&self) -> Vec<CohomologyClass> {
        let field = self.context.field();
        self.rep_coords
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let mut coords = vzero(field, self.rep_coords.len());
                coords[k] = field.one();
                CohomologyClass {
                    representative: self.layout.unflatten(&self.context, v),
                    basis_coordinates: coords,
                }
            })
            .collect()
    }

    /// Coordinates of a cocycle's class in the quotient basis; the zero
    /// vector exactly when the cocycle is a coboundary.
    pub fn class_coordinates(&self, c: &AbelianTwoCocycle) -> Result<Vec<Scalar>> {
        if c.context != self.context {
            return Err(Error::Invalid(
                "cocycle belongs to a different context".into(),
            ));
        }
        let v = self.layout.flatten(c);
        if !self.cocycles.contains(&v) {
            return Err(Error::NotACocycle(
                "the pair fails the cocycle identities, so it has no class".into(),
            ));
        }
        let field = self.context.field();
        if self.rep_coords.is_empty() {
            return Ok(Vec::new());
        }
        // Solve [reps | coboundary basis] x = v; the representative part
        // of x is unique because representatives are independent modulo
        // coboundaries.
        let mut cols: Vec<Vec<Scalar>> = self.rep_coords.clone();
        cols.extend(self.coboundaries.basis().to_vec());
        let a = Matrix::from_cols(field, self.layout.total(), cols)?;
        match solve(&a, &v)? {
            AffineSolution::Empty => Err(Error::Internal(
                "cocycle escaped the span of representatives and coboundaries".into(),
            )),
            AffineSolution::Solutions { particular, .. } => {
                Ok(particular[..self.rep_coords.len()].to_vec())
            }
        }
    }

    /// A phi whose coboundary equals the given cocycle, when one exists.
    pub fn coboundary_witness(&self, c: &AbelianTwoCocycle) -> Result<Option<Matrix>> {
        if c.context != self.context {
            return Err(Error::Invalid(
                "cocycle belongs to a different context".into(),
            ));
        }
        let v = self.layout.flatten(c);
        match solve(&self.coboundary_map, &v)? {
            AffineSolution::Empty => Ok(None),
            AffineSolution::Solutions { particular, .. } => Ok(Some(Matrix::from_flat(
                self.context.field(),
                self.context.dim_v(),
                self.context.base().dim(),
                particular,
            ))),
        }
    }
}

/// Cocycles as the kernel of the identity constraints, coboundaries as
/// the image of phi |-> (delta phi, S phi - phi N), quotient by the
/// canonical-form construction.
pub fn compute_h2(context: &NijenhuisRepresentation) -> Result<H2> {
    let g = context.base().algebra();
    let rep = context.rep();
    let n = g.dim();
    let m = context.dim_v();
    let field = g.field();
    let layout = CochainLayout::new(n, m);
    let total = layout.total();
    let nop = context.base().operator();
    let s = context.operator();

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let ei = vunit(field, n, i);
                let ej = vunit(field, n, j);
                let ek = vunit(field, n, k);
                let mut e = rep.rho_basis(i).mul(&layout.chi_expr(field, j, k));
                e = e.add(&rep.rho_basis(j).mul(&layout.chi_expr(field, k, i)));
                e = e.add(&rep.rho_basis(k).mul(&layout.chi_expr(field, i, j)));
                e = e.sub(&layout.chi_expr_vec(field, g.bracket_basis(i, j), &ek));
                e = e.sub(&layout.chi_expr_vec(field, g.bracket_basis(j, k), &ei));
                e = e.sub(&layout.chi_expr_vec(field, g.bracket_basis(k, i), &ej));
                for w in 0..m {
                    rows.push(e.row(w));
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let ei = vunit(field, n, i);
            let ej = vunit(field, n, j);
            let ni = nop.col(i);
            let nj = nop.col(j);
            let mut e = layout.chi_expr_vec(field, &ni, &nj);
            let inner = layout
                .chi_expr_vec(field, &ni, &ej)
                .add(&layout.chi_expr_vec(field, &ei, &nj))
                .sub(&s.mul(&layout.chi_expr(field, i, j)));
            e = e.sub(&s.mul(&inner));
            let deformed = vsub(
                &vadd(&g.bracket(&ni, &ej)?, &g.bracket(&ei, &nj)?),
                &nop.mul_vec(g.bracket_basis(i, j)),
            );
            e = e.sub(&layout.f_expr(field, &deformed));
            e = e.add(&rep.rho(&ni).mul(&layout.f_expr(field, &ej)));
            e = e.sub(&rep.rho(&nj).mul(&layout.f_expr(field, &ei)));
            let inner_f = rep
                .rho_basis(i)
                .mul(&layout.f_expr(field, &ej))
                .sub(&rep.rho_basis(j).mul(&layout.f_expr(field, &ei)))
                .sub(&layout.f_expr(field, g.bracket_basis(i, j)));
            e = e.sub(&s.mul(&inner_f));
            for w in 0..m {
                rows.push(e.row(w));
            }
        }
    }
    let cocycles = if rows.is_empty() {
        Subspace::full(field, total)
    } else {
        kernel(&Matrix::from_rows(field, rows)?)
    };

    let unknowns = m * n;
    let mut cob = Matrix::zero(field, total, unknowns);
    for i in 0..n {
        for j in (i + 1)..n {
            for w in 0..m {
                let slot = layout.chi_slot(i, j, w);
                for u in 0..m {
                    let cur = cob.get(slot, u * n + j).clone();
                    cob.set(slot, u * n + j, &cur + rep.rho_basis(i).get(w, u));
                    let cur = cob.get(slot, u * n + i).clone();
                    cob.set(slot, u * n + i, &cur - rep.rho_basis(j).get(w, u));
                }
                for (k, br) in g.bracket_basis(i, j).iter().enumerate() {
                    let cur = cob.get(slot, w * n + k).clone();
                    cob.set(slot, w * n + k, &cur - br);
                }
            }
        }
    }
    for w in 0..m {
        for col in 0..n {
            let slot = layout.f_slot(w, col);
            for u in 0..m {
                let cur = cob.get(slot, u * n + col).clone();
                cob.set(slot, u * n + col, &cur + s.get(w, u));
            }
            for k in 0..n {
                let cur = cob.get(slot, w * n + k).clone();
                cob.set(slot, w * n + k, &cur - nop.get(k, col));
            }
        }
    }
    let coboundaries = Subspace::from_image(&cob);
    let (_, rep_coords) = crate::linalg::quotient_dim(&cocycles, &coboundaries)?;
    Ok(H2 {
        context: context.clone(),
        layout,
        cocycles,
        coboundaries,
        coboundary_map: cob,
        rep_coords,
    })
}

/// A non-abelian cocycle of the deformed source algebra with values in
/// the deformed target algebra: the image of the pushforward.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeformedCocycle {
    source: LieAlgebra,
    target: LieAlgebra,
    chi: Vec<Vec<Vec<Scalar>>>,
    psi: Vec<Matrix>,
}

impl DeformedCocycle {
    pub fn source(&self) -> &LieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &LieAlgebra {
        &self.target
    }

    pub fn chi_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.chi[i][j]
    }

    pub fn psi_basis(&self, i: usize) -> &Matrix {
        &self.psi[i]
    }
}

/// Push a cocycle forward to the deformed brackets:
/// chi_bar(x,y) = chi(Nx,y) + chi(x,Ny) - S chi(x,y) + psi_x F y - psi_y F x - F[x,y],
/// psi_bar_x = psi_{Nx} + psi_x S - S psi_x + [F x, -].
pub fn pushforward_to_deformed(c: &NonAbelianTwoCocycle) -> Result<DeformedCocycle> {
    check_nonabelian_cocycle(c)?.into_result(Error::NotACocycle)?;
    let g = c.source.algebra();
    let h = c.target.algebra();
    let (n, m) = (g.dim(), h.dim());
    let field = g.field();
    let nop = c.source.operator();
    let s = c.target.operator();
    let source = deformed_algebra(&c.source)?;
    let target = deformed_algebra(&c.target)?;
    let mut chi = vec![vec![vzero(field, m); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let ei = vunit(field, n, i);
            let ej = vunit(field, n, j);
            let mut v = vadd(&c.chi_eval(&nop.col(i), &ej), &c.chi_eval(&ei, &nop.col(j)));
            v = vsub(&v, &s.mul_vec(&c.chi[i][j]));
            v = vadd(&v, &c.psi[i].mul_vec(&c.f.col(j)));
            v = vsub(&v, &c.psi[j].mul_vec(&c.f.col(i)));
            v = vsub(&v, &c.f.mul_vec(g.bracket_basis(i, j)));
            chi[j][i] = vneg(&v);
            chi[i][j] = v;
        }
    }
    let psi = (0..n)
        .map(|i| {
            c.psi(&nop.col(i))
                .add(&c.psi[i].mul(s))
                .sub(&s.mul(&c.psi[i]))
                .add(&h.ad(&c.f.col(i)))
        })
        .collect();
    Ok(DeformedCocycle {
        source,
        target,
        chi,
        psi,
    })
}

/// The plain Lie-algebra cocycle identities for a deformed cocycle:
/// psi into derivations of the deformed target, the commutator identity,
/// and the cyclic identity, all over the deformed brackets.
pub fn check_deformed_cocycle(d: &DeformedCocycle) -> Result<Report> {
    let n = d.source.dim();
    let m = d.target.dim();
    let field = d.source.field();
    let mut report = Report::new("deformed-algebra 2-cocycle");
    for i in 0..n {
        for a in 0..m {
            for b in (a + 1)..m {
                let lhs = d.psi[i].mul_vec(d.target.bracket_basis(a, b));
                let rhs = vadd(
                    &d.target.bracket(&d.psi[i].col(a), &vunit(field, m, b))?,
                    &d.target.bracket(&vunit(field, m, a), &d.psi[i].col(b))?,
                );
                report.check(
                    "psi maps into derivations of the deformed kernel",
                    &[i, a, b],
                    lhs,
                    rhs,
                );
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let comm = d.psi[i].mul(&d.psi[j]).sub(&d.psi[j].mul(&d.psi[i]));
            let mut psi_br = Matrix::zero(field, m, m);
            for (k, ck) in d.source.bracket_basis(i, j).iter().enumerate() {
                if !ck.is_zero() {
                    psi_br = psi_br.add(&d.psi[k].scale(ck));
                }
            }
            for a in 0..m {
                let lhs = vsub(&comm.col(a), &psi_br.col(a));
                let rhs = d.target.bracket(&d.chi[i][j], &vunit(field, m, a))?;
                report.check("commutator identity", &[i, j, a], lhs, rhs);
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut acc = d.psi[i].mul_vec(&d.chi[j][k]);
                acc = vadd(&acc, &d.psi[j].mul_vec(&d.chi[k][i]));
                acc = vadd(&acc, &d.psi[k].mul_vec(&d.chi[i][j]));
                acc = vsub(
                    &acc,
                    &bilinear_eval(
                        &d.chi,
                        field,
                        m,
                        d.source.bracket_basis(i, j),
                        &vunit(field, n, k),
                    ),
                );
                acc = vsub(
                    &acc,
                    &bilinear_eval(
                        &d.chi,
                        field,
                        m,
                        d.source.bracket_basis(j, k),
                        &vunit(field, n, i),
                    ),
                );
                acc = vsub(
                    &acc,
                    &bilinear_eval(
                        &d.chi,
                        field,
                        m,
                        d.source.bracket_basis(k, i),
                        &vunit(field, n, j),
                    ),
                );
                report.check("cyclic identity", &[i, j, k], acc, vzero(field, m));
            }
        }
    }
    Ok(report)
}

/// A witness phi relating two cocycles also relates their pushforwards
/// over the deformed brackets; this checks that directly.
pub fn check_deformed_equivalence(
    d: &DeformedCocycle,
    dp: &DeformedCocycle,
    w: &EquivalenceWitness,
) -> Result<Report> {
    if d.source != dp.source || d.target != dp.target {
        return Err(Error::Invalid(
            "deformed cocycles must share source and target".into(),
        ));
    }
    let n = d.source.dim();
    let m = d.target.dim();
    if w.phi.rows() != m || w.phi.cols() != n {
        return Err(Error::DimensionMismatch(
            "witness must map source to target".into(),
        ));
    }
    let phi = &w.phi;
    let mut report = Report::new("deformed equivalence witness");
    for i in 0..n {
        let ad_phi_i = d.target.ad(&phi.col(i));
        for a in 0..m {
            let lhs = vsub(&d.psi[i].col(a), &dp.psi[i].col(a));
            report.check("psi difference", &[i, a], lhs, ad_phi_i.col(a));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = vsub(&d.chi[i][j], &dp.chi[i][j]);
            let mut rhs = vsub(
                &dp.psi[i].mul_vec(&phi.col(j)),
                &dp.psi[j].mul_vec(&phi.col(i)),
            );
            rhs = vsub(&rhs, &phi.mul_vec(d.source.bracket_basis(i, j)));
            rhs = vadd(&rhs, &d.target.bracket(&phi.col(i), &phi.col(j))?);
            report.check("chi difference", &[i, j], lhs, rhs);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{aff1, Representation};

    fn q() -> Field {
        Field::Rational
    }

    fn qs(v: i64) -> Scalar {
        Scalar::from_integer(Field::Rational, v)
    }

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn aff1_diag23() -> NijenhuisLieAlgebra {
        NijenhuisLieAlgebra::new(aff1(q()), Matrix::from_i64(q(), &[&[2, 0], &[0, 3]])).unwrap()
    }

    fn line_context() -> NijenhuisRepresentation {
        // One-dimensional abelian base with N = 0, trivial module.
        let g =
            NijenhuisLieAlgebra::new(LieAlgebra::abelian("a1", q(), 1), Matrix::zero(q(), 1, 1))
                .unwrap();
        let rep = Representation::trivial(g.algebra().clone(), 1);
        NijenhuisRepresentation::new(g, rep, Matrix::zero(q(), 1, 1)).unwrap()
    }

    #[test]
    fn zero_cocycle_passes_with_abelian_target() {
        let src = NijenhuisLieAlgebra::new(aff1(q()), Matrix::zero(q(), 2, 2)).unwrap();
        let tgt = NijenhuisLieAlgebra::new(
            LieAlgebra::abelian("t", q(), 2),
            Matrix::from_i64(q(), &[&[1, 5], &[0, 2]]),
        )
        .unwrap();
        let c = NonAbelianTwoCocycle::zero(src, tgt).unwrap();
        assert!(check_nonabelian_cocycle(&c).unwrap().passed());
    }

    #[test]
    fn noncommuting_f_image_fails_the_operator_cocycle_identity() {
        // With chi = 0, psi = 0, N = 0, S = 0 the last identity reduces
        // to [F x, F y] = 0; pick F with a non-abelian image.
        let src =
            NijenhuisLieAlgebra::new(LieAlgebra::abelian("s", q(), 2), Matrix::zero(q(), 2, 2))
                .unwrap();
        let tgt = NijenhuisLieAlgebra::new(aff1(q()), Matrix::zero(q(), 2, 2)).unwrap();
        let c = NonAbelianTwoCocycle::new(
            src.clone(),
            tgt.clone(),
            vec![vec![vzero(q(), 2); 2]; 2],
            vec![Matrix::zero(q(), 2, 2); 2],
            Matrix::identity(q(), 2),
        )
        .unwrap();
        let report = check_nonabelian_cocycle(&c).unwrap();
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .all(|v| v.identity == "operator cocycle identity"));
    }

    #[test]
    fn witness_reflexivity() {
        let src = aff1_diag23();
        let tgt = NijenhuisLieAlgebra::with_identity(aff1(q())).unwrap();
        let c = NonAbelianTwoCocycle::zero(src, tgt).unwrap();
        let w = EquivalenceWitness {
            phi: Matrix::zero(q(), 2, 2),
        };
        assert!(check_equivalence_witness(&c, &c, &w).unwrap().passed());
    }

    #[test]
    fn psi_shift_by_non_inner_derivation_fails_with_zero_witness() {
        // Abelian target: every inner derivation vanishes, so psi != psi'
        // cannot be certified by any witness; phi = 0 must fail on nce1.
        let src =
            NijenhuisLieAlgebra::new(LieAlgebra::abelian("s", q(), 1), Matrix::zero(q(), 1, 1))
                .unwrap();
        let tgt =
            NijenhuisLieAlgebra::new(LieAlgebra::abelian("t", q(), 1), Matrix::zero(q(), 1, 1))
                .unwrap();
        let c = NonAbelianTwoCocycle::zero(src.clone(), tgt.clone()).unwrap();
        let cp = NonAbelianTwoCocycle::new(
            src,
            tgt,
            vec![vec![vzero(q(), 1)]],
            vec![Matrix::identity(q(), 1)],
            Matrix::zero(q(), 1, 1),
        )
        .unwrap();
        let w = EquivalenceWitness {
            phi: Matrix::zero(q(), 1, 1),
        };
        let report = check_equivalence_witness(&c, &cp, &w).unwrap();
        assert!(!report.passed());
        assert_eq!(report.violations[0].identity, "psi difference");
    }

    #[test]
    fn search_finds_zero_witness_on_equal_cocycles() {
        let src = aff1_diag23();
        let tgt = NijenhuisLieAlgebra::with_identity(aff1(q())).unwrap();
        let c = NonAbelianTwoCocycle::zero(src, tgt).unwrap();
        // Non-abelian target over the rationals is not enumerable, but
        // equal cocycles with an abelian target give phi = 0 directly.
        let src2 = NijenhuisLieAlgebra::new(aff1(q()), Matrix::zero(q(), 2, 2)).unwrap();
        let tgt2 =
            NijenhuisLieAlgebra::new(LieAlgebra::abelian("t", q(), 1), Matrix::zero(q(), 1, 1))
                .unwrap();
        let ab = NonAbelianTwoCocycle::zero(src2, tgt2).unwrap();
        let w = search_equivalence(&ab, &ab, 1 << 20).unwrap().unwrap();
        assert!(w.phi.is_zero());
        // And the non-abelian rational case errors out cleanly.
        assert!(matches!(
            search_equivalence(&c, &c, 1 << 20),
            Err(Error::EnumerationNeedsPrimeField(_))
        ));
    }

    #[test]
    fn abelian_search_round_trips_a_coboundary_shift() {
        let g = aff1_diag23();
        let rep = crate::lie::adjoint_rep(g.algebra()).unwrap();
        let context =
            NijenhuisRepresentation::new(g, rep, Matrix::from_i64(q(), &[&[2, 0], &[0, 3]]))
                .unwrap();
        let phi0 = Matrix::from_i64(q(), &[&[1, 2], &[3, 4]]);
        let shift = abelian_coboundary(&context, &phi0).unwrap();
        let c = AbelianTwoCocycle::zero(context.clone())
            .as_nonabelian()
            .unwrap();
        let cp = shift.as_nonabelian().unwrap();
        // c - cp = -coboundary(phi0) = coboundary(-phi0): a witness must exist.
        let w = search_equivalence(&c, &cp, 1 << 20)
            .unwrap()
            .expect("witness");
        assert!(check_equivalence_witness(&c, &cp, &w).unwrap().passed());
    }

    #[test]
    fn exhaustive_search_certifies_not_found_over_f2() {
        // Source: one-dimensional abelian with N = 0. Target: aff(1)
        // over F2 with S = Id. Cocycles with distinct F but equal psi
        // are inequivalent because the center of aff(1) is zero.
        let field = f2();
        let src = NijenhuisLieAlgebra::new(
            LieAlgebra::abelian("s", field, 1),
            Matrix::zero(field, 1, 1),
        )
        .unwrap();
        let tgt = NijenhuisLieAlgebra::with_identity(aff1(field)).unwrap();
        let c = NonAbelianTwoCocycle::zero(src.clone(), tgt.clone()).unwrap();
        let mut f = Matrix::zero(field, 2, 1);
        f.set(0, 0, field.one());
        let cp = NonAbelianTwoCocycle::new(
            src.clone(),
            tgt.clone(),
            vec![vec![vzero(field, 2)]],
            vec![Matrix::zero(field, 2, 2)],
            f,
        )
        .unwrap();
        assert!(check_nonabelian_cocycle(&c).unwrap().passed());
        assert!(check_nonabelian_cocycle(&cp).unwrap().passed());
        assert!(search_equivalence(&c, &cp, 1 << 20).unwrap().is_none());

        // An equivalent pair: psi = ad(e_2)-shift with matching F.
        let ad_e2 = tgt.algebra().ad(&[field.zero(), field.one()]);
        let mut f2m = Matrix::zero(field, 2, 1);
        f2m.set(1, 0, field.one());
        let ce = NonAbelianTwoCocycle::new(src, tgt, vec![vec![vzero(field, 2)]], vec![ad_e2], f2m)
            .unwrap();
        assert!(check_nonabelian_cocycle(&ce).unwrap().passed());
        let w = search_equivalence(&ce, &c, 1 << 20)
            .unwrap()
            .expect("witness");
        assert!(check_equivalence_witness(&ce, &c, &w).unwrap().passed());
        // Budget accounting: 2^(2*1) = 4 candidates required.
        assert!(matches!(
            search_equivalence(&ce, &c, 3),
            Err(Error::BudgetExceeded {
                required: 4,
                budget: 3
            })
        ));
    }

    fn heisenberg_line_context() -> NijenhuisRepresentation {
        // Heisenberg acting on a line through its first generator only:
        // rho(e_1) = 1, rho(e_2) = rho(e_3) = 0, with N = S = 0.
        let g =
            NijenhuisLieAlgebra::new(crate::lie::heisenberg(q()), Matrix::zero(q(), 3, 3)).unwrap();
        let rep = Representation::new(
            g.algebra().clone(),
            1,
            vec![
                Matrix::from_i64(q(), &[&[1]]),
                Matrix::zero(q(), 1, 1),
                Matrix::zero(q(), 1, 1),
            ],
        )
        .unwrap();
        NijenhuisRepresentation::new(g, rep, Matrix::zero(q(), 1, 1)).unwrap()
    }

    #[test]
    fn abelian_cocycle_checks() {
        // Zero passes; a coboundary passes; over the Heisenberg line
        // context the cyclic identity reduces to rho(e_1) chi(e_2, e_3) = 0,
        // so chi supported on (e_2, e_3) fails it.
        let ctx = line_context();
        assert!(check_abelian_cocycle(&AbelianTwoCocycle::zero(ctx.clone()))
            .unwrap()
            .passed());

        let g = aff1_diag23();
        let rep = crate::lie::adjoint_rep(g.algebra()).unwrap();
        let context =
            NijenhuisRepresentation::new(g, rep, Matrix::from_i64(q(), &[&[2, 0], &[0, 3]]))
                .unwrap();
        let cob =
            abelian_coboundary(&context, &Matrix::from_i64(q(), &[&[5, -1], &[2, 7]])).unwrap();
        assert!(check_abelian_cocycle(&cob).unwrap().passed());

        let ctx3 = heisenberg_line_context();
        let chi = alternating_tensor(q(), 3, 1, &[(1, 2, vec![qs(1)])]).unwrap();
        let bad = AbelianTwoCocycle::new(ctx3, chi, Matrix::zero(q(), 1, 3)).unwrap();
        let report = check_abelian_cocycle(&bad).unwrap();
        assert!(!report.passed());
        assert_eq!(report.violations[0].identity, "cyclic identity");
        assert_eq!(report.violations[0].tuple, vec![1, 2, 3]);
    }

    #[test]
    fn h2_of_the_line_context_is_one_dimensional() {
        let h2 = compute_h2(&line_context()).unwrap();
        assert_eq!(h2.dim(), 1);
        assert_eq!(h2.cocycle_dim(), 1);
        assert_eq!(h2.coboundary_dim(), 0);
        for class in h2.classes() {
            assert!(check_abelian_cocycle(&class.representative)
                .unwrap()
                .passed());
        }
    }

    #[test]
    fn h2_of_an_empty_module_is_zero() {
        let g = aff1_diag23();
        let rep = Representation::trivial(g.algebra().clone(), 0);
        let ctx = NijenhuisRepresentation::new(g, rep, Matrix::zero(q(), 0, 0)).unwrap();
        assert_eq!(compute_h2(&ctx).unwrap().dim(), 0);
    }

    #[test]
    fn coboundaries_have_zero_class_coordinates() {
        let g = aff1_diag23();
        let rep = crate::lie::adjoint_rep(g.algebra()).unwrap();
        let ctx = NijenhuisRepresentation::new(g, rep, Matrix::from_i64(q(), &[&[2, 0], &[0, 3]]))
            .unwrap();
        let h2 = compute_h2(&ctx).unwrap();
        let cob = abelian_coboundary(&ctx, &Matrix::from_i64(q(), &[&[1, 1], &[0, 2]])).unwrap();
        let coords = h2.class_coordinates(&cob).unwrap();
        assert!(coords.iter().all(|c| c.is_zero()));
        let phi = h2.coboundary_witness(&cob).unwrap().expect("witness");
        assert_eq!(abelian_coboundary(&ctx, &phi).unwrap(), cob);
    }

    #[test]
    fn class_coordinates_reject_non_cocycles() {
        let ctx = heisenberg_line_context();
        let h2 = compute_h2(&ctx).unwrap();
        let chi = alternating_tensor(q(), 3, 1, &[(1, 2, vec![qs(1)])]).unwrap();
        let bad = AbelianTwoCocycle::new(ctx, chi, Matrix::zero(q(), 1, 3)).unwrap();
        assert!(matches!(
            h2.class_coordinates(&bad),
            Err(Error::NotACocycle(_))
        ));
    }

    #[test]
    fn representative_coordinates_are_unit_vectors() {
        let h2 = compute_h2(&line_context()).unwrap();
        for (k, class) in h2.classes().iter().enumerate() {
            let coords = h2.class_coordinates(&class.representative).unwrap();
            assert_eq!(coords, class.basis_coordinates);
            assert!(coords[k].is_one());
        }
    }

    #[test]
    fn abelian_pair_is_cocycle_iff_nonabelian_triple_is() {
        // Spot-check the correspondence on a valid and an invalid pair.
        let g = aff1_diag23();
        let rep = crate::lie::adjoint_rep(g.algebra()).unwrap();
        let ctx = NijenhuisRepresentation::new(g, rep, Matrix::from_i64(q(), &[&[2, 0], &[0, 3]]))
            .unwrap();
        let good = abelian_coboundary(&ctx, &Matrix::from_i64(q(), &[&[1, 0], &[4, 2]])).unwrap();
        assert!(check_abelian_cocycle(&good).unwrap().passed());
        assert!(check_nonabelian_cocycle(&good.as_nonabelian().unwrap())
            .unwrap()
            .passed());

        let chi = alternating_tensor(q(), 2, 2, &[(0, 1, vec![qs(1), qs(0)])]).unwrap();
        let cand = AbelianTwoCocycle::new(ctx, chi, Matrix::zero(q(), 2, 2)).unwrap();
        let ab = check_abelian_cocycle(&cand).unwrap().passed();
        let nab = check_nonabelian_cocycle(&cand.as_nonabelian().unwrap())
            .unwrap()
            .passed();
        assert_eq!(ab, nab);
    }

    #[test]
    fn pushforward_of_zero_is_zero() {
        let src = aff1_diag23();
        let tgt = NijenhuisLieAlgebra::with_identity(aff1(q())).unwrap();
        let c = NonAbelianTwoCocycle::zero(src, tgt).unwrap();
        let d = pushforward_to_deformed(&c).unwrap();
        assert!(d.chi_basis(0, 1).iter().all(|v| v.is_zero()));
        assert!(d.psi_basis(0).is_zero());
        assert!(check_deformed_cocycle(&d).unwrap().passed());
    }

    #[test]
    fn pushforward_with_identity_operators_matches_the_reduced_formula() {
        // N = Id, S = Id: chi_bar(x,y) = chi(x,y) + psi_x F y - psi_y F x - F[x,y]
        // and psi_bar_x = psi_x + [F x, -].
        let field = f2();
        let src = NijenhuisLieAlgebra::with_identity(aff1(field)).unwrap();
        let tgt = NijenhuisLieAlgebra::with_identity(aff1(field)).unwrap();
        // A valid cocycle with S = Id, N = Id: psi_x = ad(phi x) type data
        // extracted from the direct product; simplest nontrivial choice is
        // psi_i = ad(e_i) with chi(x,y) = -[x,y]... instead take the zero
        // cocycle shifted by a witness phi, which stays a cocycle.
        let zero = NonAbelianTwoCocycle::zero(src.clone(), tgt.clone()).unwrap();
        let phi = Matrix::from_i64(field, &[&[1, 0], &[1, 1]]);
        // Build the shifted cocycle via the equivalence identities with
        // c' = zero: psi = [phi x, -], chi = psi'_x phi y - ... + [phi x, phi y],
        // F = phi - phi = S phi - phi N = 0.
        let h = tgt.algebra().clone();
        let psi: Vec<Matrix> = (0..2).map(|i| h.ad(&phi.col(i))).collect();
        let mut chi = vec![vec![vzero(field, 2); 2]; 2];
        let mut v = vsub(
            &vzero(field, 2),
            &phi.mul_vec(src.algebra().bracket_basis(0, 1)),
        );
        v = vadd(&v, &h.bracket(&phi.col(0), &phi.col(1)).unwrap());
        chi[0][1] = v.clone();
        chi[1][0] = vneg(&v);
        let c = NonAbelianTwoCocycle::new(src, tgt, chi, psi, Matrix::zero(field, 2, 2)).unwrap();
        assert!(check_nonabelian_cocycle(&c).unwrap().passed());
        let w = EquivalenceWitness { phi };
        assert!(check_equivalence_witness(&c, &zero, &w).unwrap().passed());

        let d = pushforward_to_deformed(&c).unwrap();
        // Reduced formulas (F = 0 here): chi_bar = 2chi - chi = chi over
        // any field once expanded with N = S = Id; check term by term.
        for i in 0..2 {
            let expected = c
                .psi(&Matrix::identity(field, 2).col(i))
                .add(c.psi_basis(i))
                .sub(c.psi_basis(i))
                .add(&c.target().algebra().ad(&c.f().col(i)));
            assert_eq!(*d.psi_basis(i), expected);
        }
        assert!(check_deformed_cocycle(&d).unwrap().passed());
        // Equivalence is preserved along the pushforward with the same witness.
        let dz = pushforward_to_deformed(&zero).unwrap();
        assert!(check_deformed_equivalence(&d, &dz, &w).unwrap().passed());
    }

    #[test]
    fn pushforward_rejects_non_cocycles() {
        let src =
            NijenhuisLieAlgebra::new(LieAlgebra::abelian("s", q(), 2), Matrix::zero(q(), 2, 2))
                .unwrap();
        let tgt = NijenhuisLieAlgebra::new(aff1(q()), Matrix::zero(q(), 2, 2)).unwrap();
        let bad = NonAbelianTwoCocycle::new(
            src,
            tgt,
            vec![vec![vzero(q(), 2); 2]; 2],
            vec![Matrix::zero(q(), 2, 2); 2],
            Matrix::identity(q(), 2),
        )
        .unwrap();
        assert!(matches!(
            pushforward_to_deformed(&bad),
            Err(Error::NotACocycle(_))
        ));
    }

    #[test]
    fn h2_dimension_survives_basis_permutation() {
        // Conjugating the whole context by a basis swap of g must not
        // change the cohomology dimension.
        let g = aff1_diag23();
        let rep = crate::lie::adjoint_rep(g.algebra()).unwrap();
        let ctx = NijenhuisRepresentation::new(
            g.clone(),
            rep,
            Matrix::from_i64(q(), &[&[2, 0], &[0, 3]]),
        )
        .unwrap();
        let d1 = compute_h2(&ctx).unwrap().dim();

        // Swap basis of g: bracket [e_1, e_2] = -e_1 with N = diag(3, 2).
        let swapped =
            LieAlgebra::from_sparse("aff1_swapped", q(), 2, &[(0, 1, 0, qs(-1))]).unwrap();
        let gs =
            NijenhuisLieAlgebra::new(swapped, Matrix::from_i64(q(), &[&[3, 0], &[0, 2]])).unwrap();
        let reps = crate::lie::adjoint_rep(gs.algebra()).unwrap();
        let ctxs = NijenhuisRepresentation::new(gs.clone(), reps, gs.operator().clone()).unwrap();
        assert_eq!(compute_h2(&ctxs).unwrap().dim(), d1);
    }
}
