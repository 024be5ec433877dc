//! Inducibility of automorphism and derivation pairs along extensions.
//!
//! An automorphism of the total space of an extension that preserves the
//! kernel restricts to a pair: an automorphism of the kernel and one of
//! the base. Conversely, a candidate pair lifts exactly when its Wells
//! obstruction class vanishes. This module computes the restriction
//! maps, decides inducibility (by exact linear algebra over an abelian
//! kernel, by bounded exhaustive search otherwise), assembles verified
//! lifts, and checks the resulting four-term exact sequences pointwise
//! on materialized automorphism groups and derivation spaces.

use crate::cohomology::{
    all_matrices, check_abelian_cocycle, check_nonabelian_cocycle, compute_h2, search_equivalence,
    AbelianTwoCocycle, NonAbelianTwoCocycle, H2,
};
use crate::error::{Error, Result};
use crate::extensions::{
    canonical_section, check_extension, extract_abelian_cocycle, extract_cocycle,
    induced_representation, is_split, kernel_projection, Extension, Section, StructureReport,
};
use crate::field::{Field, Scalar};
use crate::lie::{check_morphism, is_derivation, leibniz_constraint_rows, AlgebraMorphism};
use crate::linalg::{kernel, vadd, vneg, vsub, vunit, vzero, Matrix, Subspace};
use crate::nijenhuis::{
    commuting_constraint_rows, nij_derivation_space_valued, NijenhuisLieAlgebra,
    NijenhuisRepresentation,
};
use crate::report::Report;

/// A pair of structure-preserving automorphisms: one of the kernel
/// (commuting with its operator) and one of the base (commuting with
/// its operator).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutPair {
    beta: Matrix,
    alpha: Matrix,
}

impl AutPair {
    pub fn new(
        kernel_alg: &NijenhuisLieAlgebra,
        base: &NijenhuisLieAlgebra,
        beta: Matrix,
        alpha: Matrix,
    ) -> Result<AutPair> {
        check_operator_automorphism(kernel_alg, &beta, "kernel")?;
        check_operator_automorphism(base, &alpha, "base")?;
        Ok(AutPair { beta, alpha })
    }

    pub fn beta(&self) -> &Matrix {
        &self.beta
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }
}

fn check_operator_automorphism(l: &NijenhuisLieAlgebra, m: &Matrix, what: &str) -> Result<()> {
    if m.rows() != l.dim() || m.cols() != l.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{what} automorphism shape"
        )));
    }
    if m.field() != l.field() {
        return Err(Error::FieldMismatch(format!("{what} automorphism field")));
    }
    let morph = check_morphism(&AlgebraMorphism {
        source: l.algebra().clone(),
        target: l.algebra().clone(),
        map: m.clone(),
    })?;
    if !morph.bijective {
        return Err(Error::NotAutomorphism(format!(
            "{what} map is not bijective"
        )));
    }
    if !morph.report.passed() {
        return Err(Error::NotAutomorphism(format!(
            "{what} map does not preserve the bracket: {}",
            morph.report.summary()
        )));
    }
    if m.mul(l.operator()) != l.operator().mul(m) {
        return Err(Error::NotAutomorphism(format!(
            "{what} map does not commute with the operator"
        )));
    }
    Ok(())
}

/// A second section differing from `sec` by a kernel-valued shift; used
/// to confirm that restriction maps do not depend on the section.
fn shifted_section(ext: &Extension, sec: &Section) -> Result<Section> {
    let f = ext.total().field();
    let (m, n) = (ext.kernel().dim(), ext.base().dim());
    let mut shift = Matrix::zero(f, m, n);
    for r in 0..m {
        for c in 0..n {
            shift.set(r, c, f.one());
        }
    }
    Section::new(ext, sec.matrix().add(&ext.embedding().mul(&shift)))
}

/// Restrict a kernel-preserving automorphism of the total space to the
/// pair it induces on the kernel and the base. The base component is
/// independent of the section; this is re-verified against a shifted
/// section rather than assumed.
pub fn tau(ext: &Extension, gamma: &Matrix) -> Result<AutPair> {
    let e = ext.total();
    let de = e.dim();
    if gamma.rows() != de || gamma.cols() != de {
        return Err(Error::DimensionMismatch("total-space map shape".into()));
    }
    if gamma.field() != e.field() {
        return Err(Error::FieldMismatch("total-space map field".into()));
    }
    let morph = check_morphism(&AlgebraMorphism {
        source: e.algebra().clone(),
        target: e.algebra().clone(),
        map: gamma.clone(),
    })?;
    if !morph.bijective {
        return Err(Error::NotAutomorphism(
            "total-space map is not bijective".into(),
        ));
    }
    if !morph.report.passed() {
        return Err(Error::NotAutomorphism(format!(
            "total-space map does not preserve the bracket: {}",
            morph.report.summary()
        )));
    }
    if gamma.mul(e.operator()) != e.operator().mul(gamma) {
        return Err(Error::NotAutomorphism(
            "total-space map does not commute with the operator".into(),
        ));
    }
    let image = Subspace::from_image(ext.embedding());
    for a in 0..ext.kernel().dim() {
        if !image.contains(&gamma.mul_vec(&ext.embedding().col(a))) {
            return Err(Error::NotInvariant(format!(
                "image of kernel basis vector {} leaves the kernel",
                a + 1
            )));
        }
    }
    let sec = canonical_section(ext)?;
    let kappa = kernel_projection(ext, &sec)?;
    let beta = kappa.mul(gamma).mul(ext.embedding());
    let alpha = ext.projection().mul(gamma).mul(sec.matrix());
    let shifted = shifted_section(ext, &sec)?;
    if ext.projection().mul(gamma).mul(shifted.matrix()) != alpha {
        return Err(Error::Internal(
            "restriction to the base depends on the section".into(),
        ));
    }
    AutPair::new(ext.kernel(), ext.base(), beta, alpha)
}

/// The three transport identities a candidate kernel-valued map lambda
/// must satisfy, relative to the cocycle extracted at `sec`, for the
/// pair to lift with correction term lambda.
pub fn check_lambda(
    ext: &Extension,
    sec: &Section,
    pair: &AutPair,
    lambda: &Matrix,
) -> Result<Report> {
    let c = extract_cocycle(ext, sec)?;
    let g = ext.base().algebra();
    let h = ext.kernel().algebra();
    let (n, m) = (g.dim(), h.dim());
    if lambda.rows() != m || lambda.cols() != n {
        return Err(Error::DimensionMismatch(
            "lambda must map base to kernel".into(),
        ));
    }
    if pair.beta.rows() != m || pair.alpha.rows() != n {
        return Err(Error::DimensionMismatch(
            "pair does not match the extension".into(),
        ));
    }
    let s_op = ext.kernel().operator();
    let n_op = ext.base().operator();
    let mut report = Report::new("lift transport identities");
    for i in 0..n {
        let psi_alpha_i = c.psi(&pair.alpha.col(i));
        for a in 0..m {
            let lhs = vsub(
                &pair.beta.mul_vec(&c.psi_basis(i).col(a)),
                &psi_alpha_i.mul_vec(&pair.beta.col(a)),
            );
            let rhs = h.bracket(&lambda.col(i), &pair.beta.col(a))?;
            report.check("action transport", &[i, a], lhs, rhs);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = vsub(
                &pair.beta.mul_vec(c.chi_basis(i, j)),
                &c.chi_eval(&pair.alpha.col(i), &pair.alpha.col(j)),
            );
            let mut rhs = c.psi(&pair.alpha.col(i)).mul_vec(&lambda.col(j));
            rhs = vsub(&rhs, &c.psi(&pair.alpha.col(j)).mul_vec(&lambda.col(i)));
            rhs = vsub(&rhs, &lambda.mul_vec(g.bracket_basis(i, j)));
            rhs = vadd(&rhs, &h.bracket(&lambda.col(i), &lambda.col(j))?);
            report.check("cocycle transport", &[i, j], lhs, rhs);
        }
    }
    for i in 0..n {
        let lhs = vsub(
            &pair.beta.mul_vec(&c.f().col(i)),
            &c.f().mul_vec(&pair.alpha.col(i)),
        );
        let rhs = vsub(&s_op.mul_vec(&lambda.col(i)), &lambda.mul_vec(&n_op.col(i)));
        report.check("operator transport", &[i], lhs, rhs);
    }
    Ok(report)
}

/// Assemble the lift sending s(x) + h to s(alpha x) + beta(h) + lambda(x)
/// and verify that it is an operator automorphism restricting back to
/// the pair.
pub fn lift_automorphism(
    ext: &Extension,
    sec: &Section,
    pair: &AutPair,
    lambda: &Matrix,
) -> Result<Matrix> {
    let transport = check_lambda(ext, sec, pair, lambda)?;
    if !transport.passed() {
        return Err(Error::LambdaInvalid(transport.summary()));
    }
    let kappa = kernel_projection(ext, sec)?;
    let i = ext.embedding();
    let p = ext.projection();
    let gamma = sec
        .matrix()
        .mul(&pair.alpha)
        .mul(p)
        .add(&i.mul(&pair.beta).mul(&kappa))
        .add(&i.mul(lambda).mul(p));
    let back = tau(ext, &gamma)
        .map_err(|e| Error::Internal(format!("assembled lift fails to restrict: {e}")))?;
    if back != *pair {
        return Err(Error::Internal(
            "assembled lift does not restrict to the given pair".into(),
        ));
    }
    Ok(gamma)
}

/// The action of a pair on non-abelian cocycles: conjugate the kernel
/// data by beta and precompose base arguments with the inverse of alpha.
pub fn transformed_cocycle_aut(
    c: &NonAbelianTwoCocycle,
    pair: &AutPair,
) -> Result<NonAbelianTwoCocycle> {
    check_nonabelian_cocycle(c)?.into_result(Error::NotACocycle)?;
    let g = c.source().algebra();
    let h = c.target().algebra();
    let (n, m) = (g.dim(), h.dim());
    let f = g.field();
    if pair.alpha.rows() != n || pair.beta.rows() != m {
        return Err(Error::DimensionMismatch(
            "pair does not match the cocycle".into(),
        ));
    }
    let alpha_inv = pair
        .alpha
        .inverse()
        .ok_or_else(|| Error::NotAutomorphism("base map is not invertible".into()))?;
    let beta_inv = pair
        .beta
        .inverse()
        .ok_or_else(|| Error::NotAutomorphism("kernel map is not invertible".into()))?;
    let mut chi = vec![vec![vzero(f, m); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = pair
                .beta
                .mul_vec(&c.chi_eval(&alpha_inv.col(i), &alpha_inv.col(j)));
            chi[j][i] = vneg(&v);
            chi[i][j] = v;
        }
    }
    let psi: Vec<Matrix> = (0..n)
        .map(|i| pair.beta.mul(&c.psi(&alpha_inv.col(i))).mul(&beta_inv))
        .collect();
    let f_t = pair.beta.mul(c.f()).mul(&alpha_inv);
    let out = NonAbelianTwoCocycle::new(c.source().clone(), c.target().clone(), chi, psi, f_t)?;
    check_nonabelian_cocycle(&out)?.into_result(|d| {
        Error::Internal(format!("transformed data failed the cocycle laws: {d}"))
    })?;
    Ok(out)
}

/// Why a pair fails to lift, when it does.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Obstruction {
    /// Coordinates of the obstruction class in the cohomology basis.
    ClassCoordinates(Vec<Scalar>),
    /// Exhaustive search over this many candidates found no witness.
    SearchExhausted(u128),
}

impl Obstruction {
    /// True when the obstruction certifies inducibility.
    pub fn vanishes(&self) -> bool {
        match self {
            Obstruction::ClassCoordinates(v) => v.iter().all(Scalar::is_zero),
            Obstruction::SearchExhausted(_) => false,
        }
    }
}

/// Outcome of one Wells-map evaluation.
#[derive(Clone, Debug)]
pub struct WellsReport {
    /// Whether the pair is compatible with the induced kernel action
    /// (vacuously true when the kernel is non-abelian, where no
    /// separate compatibility condition exists).
    pub compatible: bool,
    pub obstruction: Option<Obstruction>,
    /// The correction term certifying inducibility: lambda for an
    /// automorphism pair, phi for a derivation pair.
    pub witness: Option<Matrix>,
    /// Verified lift on the total space, present whenever a witness is.
    pub lift: Option<Matrix>,
    /// Which procedure decided the question.
    pub decided_by: &'static str,
}

impl WellsReport {
    pub fn inducible(&self) -> bool {
        self.witness.is_some()
    }
}

fn abelian_action_compatible(context: &NijenhuisRepresentation, pair: &AutPair) -> bool {
    let n = context.base().dim();
    (0..n).all(|i| {
        pair.beta.mul(context.rep().rho_basis(i))
            == context.rep().rho(&pair.alpha.col(i)).mul(&pair.beta)
    })
}

fn transform_abelian_aut(c: &AbelianTwoCocycle, pair: &AutPair) -> Result<AbelianTwoCocycle> {
    let context = c.context().clone();
    let n = context.base().dim();
    let m = context.dim_v();
    let f = context.field();
    let alpha_inv = pair
        .alpha
        .inverse()
        .ok_or_else(|| Error::NotAutomorphism("base map is not invertible".into()))?;
    let mut chi = vec![vec![vzero(f, m); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = pair
                .beta
                .mul_vec(&c.chi_eval(&alpha_inv.col(i), &alpha_inv.col(j)));
            chi[j][i] = vneg(&v);
            chi[i][j] = v;
        }
    }
    AbelianTwoCocycle::new(context, chi, pair.beta.mul(c.f()).mul(&alpha_inv))
}

fn abelian_difference(a: &AbelianTwoCocycle, b: &AbelianTwoCocycle) -> Result<AbelianTwoCocycle> {
    let context = a.context().clone();
    let n = context.base().dim();
    let m = context.dim_v();
    let f = context.field();
    let mut chi = vec![vec![vzero(f, m); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = vsub(a.chi_basis(i, j), b.chi_basis(i, j));
            chi[j][i] = vneg(&v);
            chi[i][j] = v;
        }
    }
    AbelianTwoCocycle::new(context, chi, a.f().sub(b.f()))
}

/// Decide whether the pair lifts to an automorphism of the total space.
///
/// Over an abelian kernel the question is settled exactly: the pair must
/// intertwine the induced action (otherwise the transformed data leaves
/// the cochain complex and the pair is rejected as incompatible), and
/// the difference between the transformed and extracted cocycles must be
/// a coboundary. Over a non-abelian kernel the correction term enters
/// the transport identities quadratically, so the witness is found by
/// exhaustive search over a prime field, bounded by `budget` candidates.
pub fn wells_aut(ext: &Extension, pair: &AutPair, budget: u64) -> Result<WellsReport> {
    check_extension(ext)?.into_result(Error::NotAnExtension)?;
    let (m, n) = (ext.kernel().dim(), ext.base().dim());
    if pair.beta.rows() != m || pair.alpha.rows() != n {
        return Err(Error::DimensionMismatch(
            "pair does not match the extension".into(),
        ));
    }
    if pair.beta.field() != ext.total().field() {
        return Err(Error::FieldMismatch("pair field".into()));
    }
    let sec = canonical_section(ext)?;
    if ext.kernel().algebra().is_abelian() {
        let context = induced_representation(ext, &sec)?;
        if !abelian_action_compatible(&context, pair) {
            return Err(Error::IncompatiblePair(
                "conjugating the induced action by the pair does not recover the action of the image"
                    .into(),
            ));
        }
        let c = extract_abelian_cocycle(ext, &sec)?;
        let transformed = transform_abelian_aut(&c, pair)?;
        let difference = abelian_difference(&transformed, &c)?;
        let h2 = compute_h2(&context)?;
        let coords = h2.class_coordinates(&difference)?;
        if coords.iter().any(|x| !x.is_zero()) {
            return Ok(WellsReport {
                compatible: true,
                obstruction: Some(Obstruction::ClassCoordinates(coords)),
                witness: None,
                lift: None,
                decided_by: "exact linear algebra",
            });
        }
        let phi = h2.coboundary_witness(&difference)?.ok_or_else(|| {
            Error::Internal("vanishing class without a coboundary witness".into())
        })?;
        let lambda = phi.mul(&pair.alpha);
        let lift = lift_automorphism(ext, &sec, pair, &lambda)
            .map_err(|e| Error::Internal(format!("derived correction term rejected: {e}")))?;
        Ok(WellsReport {
            compatible: true,
            obstruction: Some(Obstruction::ClassCoordinates(coords)),
            witness: Some(lambda),
            lift: Some(lift),
            decided_by: "exact linear algebra",
        })
    } else {
        let c = extract_cocycle(ext, &sec)?;
        let transformed = transformed_cocycle_aut(&c, pair)?;
        match search_equivalence(&transformed, &c, budget)? {
            Some(w) => {
                let lambda = w.phi.mul(&pair.alpha);
                let lift = lift_automorphism(ext, &sec, pair, &lambda)
                    .map_err(|e| Error::Internal(format!("searched witness rejected: {e}")))?;
                Ok(WellsReport {
                    compatible: true,
                    obstruction: None,
                    witness: Some(lambda),
                    lift: Some(lift),
                    decided_by: "exhaustive search",
                })
            }
            None => {
                let p = ext.total().field().order().ok_or_else(|| {
                    Error::Internal("exhaustive search ran over a non-enumerable field".into())
                })?;
                let required = (p as u128).checked_pow((m * n) as u32).unwrap_or(u128::MAX);
                Ok(WellsReport {
                    compatible: true,
                    obstruction: Some(Obstruction::SearchExhausted(required)),
                    witness: None,
                    lift: None,
                    decided_by: "exhaustive search",
                })
            }
        }
    }
}

// ---- materialized automorphism groups ----

fn require_prime(field: Field) -> Result<u64> {
    field.order().ok_or_else(|| {
        Error::EnumerationNeedsPrimeField(
            "automorphism groups are materialized exhaustively".into(),
        )
    })
}

fn enumeration_within_budget(p: u64, dim: usize, budget: u64) -> Result<()> {
    let required = (p as u128)
        .checked_pow((dim * dim) as u32)
        .unwrap_or(u128::MAX);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

fn preserves_bracket(l: &NijenhuisLieAlgebra, m: &Matrix) -> bool {
    let d = l.dim();
    (0..d).all(|i| {
        ((i + 1)..d).all(|j| {
            l.algebra()
                .bracket(&m.col(i), &m.col(j))
                .expect("basis-sized vectors")
                == m.mul_vec(l.algebra().bracket_basis(i, j))
        })
    })
}

/// Every automorphism of the algebra commuting with its operator,
/// by filtering all matrices over the prime field.
fn operator_automorphism_group(l: &NijenhuisLieAlgebra, p: u64) -> Vec<Matrix> {
    let d = l.dim();
    all_matrices(l.field(), p, d, d)
        .filter(|m| {
            m.inverse().is_some()
                && preserves_bracket(l, m)
                && m.mul(l.operator()) == l.operator().mul(m)
        })
        .collect()
}

/// Every automorphism of the total space commuting with its operator
/// and preserving the embedded kernel.
fn invariant_automorphism_group(ext: &Extension, p: u64) -> Vec<Matrix> {
    let e = ext.total();
    let d = e.dim();
    let image = Subspace::from_image(ext.embedding());
    let m = ext.kernel().dim();
    all_matrices(e.field(), p, d, d)
        .filter(|g| {
            (0..m).all(|a| image.contains(&g.mul_vec(&ext.embedding().col(a))))
                && g.inverse().is_some()
                && preserves_bracket(e, g)
                && g.mul(e.operator()) == e.operator().mul(g)
        })
        .collect()
}

/// Counts gathered while checking the automorphism exact sequence.
#[derive(Clone, Debug)]
pub struct AutSequenceStats {
    pub report: StructureReport,
    /// Order of the kernel automorphism group commuting with its operator.
    pub aut_kernel: usize,
    /// Order of the base automorphism group commuting with its operator.
    pub aut_base: usize,
    /// Order of the kernel-preserving total-space automorphism group.
    pub aut_total_invariant: usize,
    /// Order of the subgroup acting as the identity on kernel and base.
    pub aut_fixing_both: usize,
    /// Number of candidate pairs examined by the Wells map.
    pub pairs_considered: usize,
    pub image_of_tau: usize,
    pub inducible_pairs: usize,
}

/// Check, pointwise over a prime field, that restriction is a group
/// homomorphism whose kernel is the subgroup fixing kernel and base,
/// and that a pair lifts exactly when it is a restriction: the four-term
/// sequence of automorphism groups is exact.
pub fn wells_sequence_aut_check(ext: &Extension, budget: u64) -> Result<AutSequenceStats> {
    check_extension(ext)?.into_result(Error::NotAnExtension)?;
    let f = ext.total().field();
    let p = require_prime(f)?;
    let (m, n, de) = (ext.kernel().dim(), ext.base().dim(), ext.total().dim());
    for dim in [m, n, de] {
        enumeration_within_budget(p, dim, budget)?;
    }
    let kernel_auts = operator_automorphism_group(ext.kernel(), p);
    let base_auts = operator_automorphism_group(ext.base(), p);
    let total_auts = invariant_automorphism_group(ext, p);
    let i_mat = ext.embedding();
    let p_mat = ext.projection();

    let mut report = StructureReport::new("automorphism sequence exactness");
    let taus: Vec<AutPair> = total_auts
        .iter()
        .map(|g| tau(ext, g))
        .collect::<Result<_>>()?;

    // Restriction is a homomorphism onto composable pairs.
    for (a, ga) in total_auts.iter().enumerate() {
        for (b, gb) in total_auts.iter().enumerate() {
            let prod = ga.mul(gb);
            match total_auts.iter().position(|g| *g == prod) {
                None => report.fail(
                    "group closure",
                    format!("product of elements {} and {} left the group", a + 1, b + 1),
                ),
                Some(idx) => {
                    if taus[idx].beta != taus[a].beta.mul(&taus[b].beta)
                        || taus[idx].alpha != taus[a].alpha.mul(&taus[b].alpha)
                    {
                        report.fail(
                            "restriction is a homomorphism",
                            format!("elements {} and {}", a + 1, b + 1),
                        );
                    }
                }
            }
        }
    }

    // The kernel of restriction is the subgroup fixing kernel and base.
    let mut aut_fixing_both = 0;
    for (idx, g) in total_auts.iter().enumerate() {
        let in_kernel = taus[idx].beta.is_identity() && taus[idx].alpha.is_identity();
        let fixes = g.mul(i_mat) == *i_mat && p_mat.mul(g) == *p_mat;
        if fixes {
            aut_fixing_both += 1;
        }
        if in_kernel != fixes {
            report.fail(
                "kernel of the restriction",
                format!(
                    "element {} fixes kernel and base iff it restricts trivially",
                    idx + 1
                ),
            );
        }
    }

    // Candidate pairs: compatible ones over an abelian kernel, all of
    // them otherwise.
    let kernel_abelian = ext.kernel().algebra().is_abelian();
    let sec = canonical_section(ext)?;
    let context = if kernel_abelian {
        Some(induced_representation(ext, &sec)?)
    } else {
        None
    };
    let mut pair_list: Vec<AutPair> = Vec::new();
    for beta in &kernel_auts {
        for alpha in &base_auts {
            let candidate = AutPair {
                beta: beta.clone(),
                alpha: alpha.clone(),
            };
            if let Some(ctx) = &context {
                if !abelian_action_compatible(ctx, &candidate) {
                    continue;
                }
            }
            pair_list.push(candidate);
        }
    }

    let mut image: Vec<AutPair> = Vec::new();
    for t in &taus {
        if !image.contains(t) {
            image.push(t.clone());
        }
    }
    for (idx, t) in image.iter().enumerate() {
        if !pair_list.contains(t) {
            report.fail(
                "restriction lands in the candidate pairs",
                format!("restricted pair {}", idx + 1),
            );
        }
    }

    // Exactness at the pairs: a pair lifts iff it is a restriction.
    let mut inducible_pairs = 0;
    for (idx, pair) in pair_list.iter().enumerate() {
        let wells = wells_aut(ext, pair, budget)?;
        if wells.inducible() {
            inducible_pairs += 1;
        }
        if wells.inducible() != image.contains(pair) {
            report.fail(
                "kernel of the Wells map equals the image of the restriction",
                format!("pair {}", idx + 1),
            );
        }
    }

    Ok(AutSequenceStats {
        report,
        aut_kernel: kernel_auts.len(),
        aut_base: base_auts.len(),
        aut_total_invariant: total_auts.len(),
        aut_fixing_both,
        pairs_considered: pair_list.len(),
        image_of_tau: image.len(),
        inducible_pairs,
    })
}

/// Counts gathered while checking the split-extension decomposition.
#[derive(Clone, Debug)]
pub struct SplitAutStats {
    pub report: StructureReport,
    /// Order of the compatible-pair group.
    pub compatible_pairs: usize,
    /// Order of the kernel-preserving total-space automorphism group.
    pub aut_total_invariant: usize,
    /// Order of the subgroup acting as the identity on kernel and base.
    pub aut_fixing_both: usize,
}

/// For a split extension with abelian kernel, verify that restriction
/// admits a group-homomorphism section over the compatible pairs, that
/// every compatible pair lifts, and that the invariant automorphism
/// group factors as |pairs| * |subgroup fixing kernel and base|.
pub fn split_aut_decomposition(ext: &Extension, budget: u64) -> Result<SplitAutStats> {
    check_extension(ext)?.into_result(Error::NotAnExtension)?;
    let split = is_split(ext)?;
    let Some(sec) = split.section else {
        return Err(Error::NotSplit(
            "the extension class does not vanish".into(),
        ));
    };
    let f = ext.total().field();
    let p = require_prime(f)?;
    let (m, n, de) = (ext.kernel().dim(), ext.base().dim(), ext.total().dim());
    for dim in [m, n, de] {
        enumeration_within_budget(p, dim, budget)?;
    }
    let kernel_auts = operator_automorphism_group(ext.kernel(), p);
    let base_auts = operator_automorphism_group(ext.base(), p);
    let total_auts = invariant_automorphism_group(ext, p);
    let context = induced_representation(ext, &sec)?;
    let mut pairs: Vec<AutPair> = Vec::new();
    for beta in &kernel_auts {
        for alpha in &base_auts {
            let candidate = AutPair {
                beta: beta.clone(),
                alpha: alpha.clone(),
            };
            if abelian_action_compatible(&context, &candidate) {
                pairs.push(candidate);
            }
        }
    }
    let i_mat = ext.embedding();
    let p_mat = ext.projection();
    let kappa = kernel_projection(ext, &sec)?;
    let section_of = |pair: &AutPair| -> Matrix {
        sec.matrix()
            .mul(&pair.alpha)
            .mul(p_mat)
            .add(&i_mat.mul(&pair.beta).mul(&kappa))
    };

    let mut report = StructureReport::new("split automorphism decomposition");
    for (idx, pair) in pairs.iter().enumerate() {
        let lifted = section_of(pair);
        match tau(ext, &lifted) {
            Ok(back) if back == *pair => {}
            Ok(_) => report.fail(
                "section of the restriction",
                format!("pair {} does not restrict back to itself", idx + 1),
            ),
            Err(e) => report.fail(
                "section of the restriction",
                format!("pair {} does not lift to an automorphism: {e}", idx + 1),
            ),
        }
        if !total_auts.contains(&lifted) {
            report.fail(
                "section lands in the invariant group",
                format!("pair {}", idx + 1),
            );
        }
        let wells = wells_aut(ext, pair, budget)?;
        if !wells.inducible() {
            report.fail(
                "Wells map vanishes on a split extension",
                format!("pair {}", idx + 1),
            );
        }
    }
    for (a, pa) in pairs.iter().enumerate() {
        for (b, pb) in pairs.iter().enumerate() {
            let composed = AutPair {
                beta: pa.beta.mul(&pb.beta),
                alpha: pa.alpha.mul(&pb.alpha),
            };
            if section_of(&composed) != section_of(pa).mul(&section_of(pb)) {
                report.fail(
                    "section is a homomorphism",
                    format!("pairs {} and {}", a + 1, b + 1),
                );
            }
        }
    }
    let aut_fixing_both = total_auts
        .iter()
        .filter(|g| g.mul(i_mat) == *i_mat && p_mat.mul(g) == *p_mat)
        .count();
    if total_auts.len() != pairs.len() * aut_fixing_both {
        report.fail(
            "order factorization",
            format!(
                "{} automorphisms vs {} pairs * {} fixing both",
                total_auts.len(),
                pairs.len(),
                aut_fixing_both
            ),
        );
    }
    Ok(SplitAutStats {
        report,
        compatible_pairs: pairs.len(),
        aut_total_invariant: total_auts.len(),
        aut_fixing_both,
    })
}

// ---- derivation pairs ----

/// A pair of compatible derivations: a module map commuting with the
/// module operator, and a derivation of the base commuting with the
/// base operator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerPair {
    d_v: Matrix,
    d_g: Matrix,
}

impl DerPair {
    pub fn new(context: &NijenhuisRepresentation, d_v: Matrix, d_g: Matrix) -> Result<DerPair> {
        let m = context.dim_v();
        let n = context.base().dim();
        if d_v.rows() != m || d_v.cols() != m || d_g.rows() != n || d_g.cols() != n {
            return Err(Error::DimensionMismatch("derivation pair shapes".into()));
        }
        if d_v.field() != context.field() || d_g.field() != context.field() {
            return Err(Error::FieldMismatch("derivation pair fields".into()));
        }
        if d_v.mul(context.operator()) != context.operator().mul(&d_v) {
            return Err(Error::NotDerivation(
                "module map does not commute with the module operator".into(),
            ));
        }
        if !is_derivation(context.base().algebra(), &d_g) {
            return Err(Error::NotDerivation(
                "base map does not satisfy the Leibniz rule".into(),
            ));
        }
        if d_g.mul(context.base().operator()) != context.base().operator().mul(&d_g) {
            return Err(Error::NotDerivation(
                "base map does not commute with the base operator".into(),
            ));
        }
        Ok(DerPair { d_v, d_g })
    }

    pub fn d_v(&self) -> &Matrix {
        &self.d_v
    }

    pub fn d_g(&self) -> &Matrix {
        &self.d_g
    }
}

/// The action-compatibility identity: applying the module component
/// after the action equals acting by the derived base vector plus
/// acting then applying the module component.
pub fn compatible_der_check(context: &NijenhuisRepresentation, pair: &DerPair) -> Result<bool> {
    let n = context.base().dim();
    if pair.d_v.rows() != context.dim_v() || pair.d_g.rows() != n {
        return Err(Error::DimensionMismatch(
            "pair does not match the context".into(),
        ));
    }
    Ok((0..n).all(|i| {
        let rho_i = context.rep().rho_basis(i);
        pair.d_v.mul(rho_i)
            == context
                .rep()
                .rho(&pair.d_g.col(i))
                .add(&rho_i.mul(&pair.d_v))
    }))
}

/// The space of compatible derivation pairs, flattened as the module
/// component (row-major) followed by the base component (row-major).
pub fn compatible_pairs_space(context: &NijenhuisRepresentation) -> Result<Subspace> {
    let m = context.dim_v();
    let n = context.base().dim();
    let f = context.field();
    let total = m * m + n * n;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for row in commuting_constraint_rows(context.operator()) {
        let mut padded = row;
        padded.extend(vzero(f, n * n));
        rows.push(padded);
    }
    let mut base_rows = leibniz_constraint_rows(context.base().algebra());
    base_rows.extend(commuting_constraint_rows(context.base().operator()));
    for row in base_rows {
        let mut padded = vzero(f, m * m);
        padded.extend(row);
        rows.push(padded);
    }
    for i in 0..n {
        let rho_i = context.rep().rho_basis(i);
        for a in 0..m {
            for b in 0..m {
                let mut row = vzero(f, total);
                for u in 0..m {
                    row[a * m + u] = &row[a * m + u] + rho_i.get(u, b);
                    row[u * m + b] = &row[u * m + b] - rho_i.get(a, u);
                }
                for k in 0..n {
                    let idx = m * m + k * n + i;
                    row[idx] = &row[idx] - context.rep().rho_basis(k).get(a, b);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Ok(Subspace::full(f, total));
    }
    Ok(kernel(&Matrix::from_rows(f, rows)?))
}

fn unflatten_pair(context: &NijenhuisRepresentation, v: &[Scalar]) -> Result<DerPair> {
    let m = context.dim_v();
    let n = context.base().dim();
    let f = context.field();
    let d_v = Matrix::from_flat(f, m, m, v[..m * m].to_vec());
    let d_g = Matrix::from_flat(f, n, n, v[m * m..].to_vec());
    DerPair::new(context, d_v, d_g)
}

/// Restrict a kernel-preserving derivation of the total space to the
/// pair it induces on the module and the base. The base component is
/// independent of the section; this is re-verified against a shifted
/// section rather than assumed.
pub fn eta(ext: &Extension, d: &Matrix) -> Result<DerPair> {
    let e = ext.total();
    let de = e.dim();
    if d.rows() != de || d.cols() != de {
        return Err(Error::DimensionMismatch("total-space map shape".into()));
    }
    if d.field() != e.field() {
        return Err(Error::FieldMismatch("total-space map field".into()));
    }
    if !is_derivation(e.algebra(), d) {
        return Err(Error::NotDerivation(
            "total-space map does not satisfy the Leibniz rule".into(),
        ));
    }
    if d.mul(e.operator()) != e.operator().mul(d) {
        return Err(Error::NotDerivation(
            "total-space map does not commute with the operator".into(),
        ));
    }
    let image = Subspace::from_image(ext.embedding());
    for a in 0..ext.kernel().dim() {
        if !image.contains(&d.mul_vec(&ext.embedding().col(a))) {
            return Err(Error::NotInvariant(format!(
                "image of kernel basis vector {} leaves the kernel",
                a + 1
            )));
        }
    }
    let sec = canonical_section(ext)?;
    let kappa = kernel_projection(ext, &sec)?;
    let d_v = kappa.mul(d).mul(ext.embedding());
    let d_g = ext.projection().mul(d).mul(sec.matrix());
    let shifted = shifted_section(ext, &sec)?;
    if ext.projection().mul(d).mul(shifted.matrix()) != d_g {
        return Err(Error::Internal(
            "restriction to the base depends on the section".into(),
        ));
    }
    let context = induced_representation(ext, &sec)?;
    let pair = DerPair::new(&context, d_v, d_g)?;
    if !compatible_der_check(&context, &pair)? {
        return Err(Error::Internal(
            "restricted pair violates the action compatibility identity".into(),
        ));
    }
    Ok(pair)
}

/// The action of a compatible pair on abelian cocycles, by the Leibniz
/// rule: apply the module component to values and subtract the cocycle
/// evaluated on derived arguments.
pub fn transformed_cocycle_der(c: &AbelianTwoCocycle, pair: &DerPair) -> Result<AbelianTwoCocycle> {
    let context = c.context();
    if !compatible_der_check(context, pair)? {
        return Err(Error::IncompatiblePair(
            "the pair violates the action compatibility identity".into(),
        ));
    }
    check_abelian_cocycle(c)?.into_result(Error::NotACocycle)?;
    let n = context.base().dim();
    let m = context.dim_v();
    let f = context.field();
    let mut chi = vec![vec![vzero(f, m); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = pair.d_v.mul_vec(c.chi_basis(i, j));
            v = vsub(&v, &c.chi_eval(&pair.d_g.col(i), &vunit(f, n, j)));
            v = vsub(&v, &c.chi_eval(&vunit(f, n, i), &pair.d_g.col(j)));
            chi[j][i] = vneg(&v);
            chi[i][j] = v;
        }
    }
    let f_t = pair.d_v.mul(c.f()).sub(&c.f().mul(&pair.d_g));
    let out = AbelianTwoCocycle::new(context.clone(), chi, f_t)?;
    check_abelian_cocycle(&out)?.into_result(|d| {
        Error::Internal(format!("transformed data failed the cocycle laws: {d}"))
    })?;
    Ok(out)
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

fn theta_matrix(h2: &H2, reps: &[AbelianTwoCocycle], pair: &DerPair) -> Result<Matrix> {
    let f = h2.context().field();
    let mut cols = Vec::new();
    for r in reps {
        let t = transformed_cocycle_der(r, pair)?;
        cols.push(h2.class_coordinates(&t)?);
    }
    Matrix::from_cols(f, h2.dim(), cols)
}

/// Verify on a basis of the compatible-pairs space that the induced
/// action on cohomology classes sends commutators of pairs to
/// commutators of the induced operators, and that the space is closed
/// under the componentwise commutator.
pub fn theta_action_check(context: &NijenhuisRepresentation) -> Result<Report> {
    let h2 = compute_h2(context)?;
    let space = compatible_pairs_space(context)?;
    let pairs: Vec<DerPair> = space
        .basis()
        .iter()
        .map(|v| unflatten_pair(context, v))
        .collect::<Result<_>>()?;
    let reps = h2.representatives();
    let thetas: Vec<Matrix> = pairs
        .iter()
        .map(|p| theta_matrix(&h2, &reps, p))
        .collect::<Result<_>>()?;
    let mut report = Report::new("cohomology action");
    for a in 0..pairs.len() {
        for b in (a + 1)..pairs.len() {
            let bracket = DerPair::new(
                context,
                commutator(&pairs[a].d_v, &pairs[b].d_v),
                commutator(&pairs[a].d_g, &pairs[b].d_g),
            )?;
            if !compatible_der_check(context, &bracket)? {
                return Err(Error::Internal(
                    "commutator of compatible pairs is not compatible".into(),
                ));
            }
            let lhs = theta_matrix(&h2, &reps, &bracket)?;
            let rhs = commutator(&thetas[a], &thetas[b]);
            report.check(
                "action bracket identity",
                &[a, b],
                lhs.flatten(),
                rhs.flatten(),
            );
        }
    }
    Ok(report)
}

/// Decide whether the pair lifts to a derivation of the total space.
///
/// Incompatibility with the induced action is a reported outcome, not
/// an error. For compatible pairs the transformed cocycle's class is
/// the obstruction, and a coboundary preimage provides the correction
/// term phi of the verified lift sending s(x) + u to
/// s(d_g x) + d_v(u) + phi(x).
pub fn wells_der(ext: &Extension, pair: &DerPair) -> Result<WellsReport> {
    check_extension(ext)?.into_result(Error::NotAnExtension)?;
    let sec = canonical_section(ext)?;
    let context = induced_representation(ext, &sec)?;
    if pair.d_v.rows() != context.dim_v() || pair.d_g.rows() != context.base().dim() {
        return Err(Error::DimensionMismatch(
            "pair does not match the extension".into(),
        ));
    }
    if !compatible_der_check(&context, pair)? {
        return Ok(WellsReport {
            compatible: false,
            obstruction: None,
            witness: None,
            lift: None,
            decided_by: "compatibility check",
        });
    }
    let c = extract_abelian_cocycle(ext, &sec)?;
    let transformed = transformed_cocycle_der(&c, pair)?;
    let h2 = compute_h2(&context)?;
    let coords = h2.class_coordinates(&transformed)?;
    if coords.iter().any(|x| !x.is_zero()) {
        return Ok(WellsReport {
            compatible: true,
            obstruction: Some(Obstruction::ClassCoordinates(coords)),
            witness: None,
            lift: None,
            decided_by: "exact linear algebra",
        });
    }
    let phi = h2
        .coboundary_witness(&transformed)?
        .ok_or_else(|| Error::Internal("vanishing class without a coboundary witness".into()))?;
    let kappa = kernel_projection(ext, &sec)?;
    let i_mat = ext.embedding();
    let p_mat = ext.projection();
    let lift = sec
        .matrix()
        .mul(&pair.d_g)
        .mul(p_mat)
        .add(&i_mat.mul(&pair.d_v).mul(&kappa))
        .add(&i_mat.mul(&phi).mul(p_mat));
    let back = eta(ext, &lift)
        .map_err(|e| Error::Internal(format!("assembled lift fails to restrict: {e}")))?;
    if back != *pair {
        return Err(Error::Internal(
            "assembled lift does not restrict to the given pair".into(),
        ));
    }
    Ok(WellsReport {
        compatible: true,
        obstruction: Some(Obstruction::ClassCoordinates(coords)),
        witness: Some(phi),
        lift: Some(lift),
        decided_by: "exact linear algebra",
    })
}

/// Dimensions gathered while checking the derivation exact sequence.
#[derive(Clone, Debug)]
pub struct DerSequenceStats {
    pub report: StructureReport,
    /// Dimension of the module-valued derivations of the base.
    pub dim_valued_derivations: usize,
    /// Dimension of the kernel-preserving derivations of the total space.
    pub dim_invariant_derivations: usize,
    /// Dimension of the compatible-pairs space.
    pub dim_compatible_pairs: usize,
    pub dim_h2: usize,
    pub split: bool,
}

fn span_through_basis(
    f: Field,
    ambient: usize,
    basis: &[Vec<Scalar>],
    coeffs: &Subspace,
) -> Subspace {
    let vectors = coeffs
        .basis()
        .iter()
        .map(|cv| {
            let mut acc = vzero(f, ambient);
            for (k, c) in cv.iter().enumerate() {
                acc = vadd(&acc, &crate::linalg::vscale(c, &basis[k]));
            }
            acc
        })
        .collect();
    Subspace::from_spanning(f, ambient, vectors)
}

/// The kernel of a linear map given by its images on `basis`, returned
/// as a subspace of the basis's ambient space.
fn kernel_through_images(
    f: Field,
    ambient: usize,
    basis: &[Vec<Scalar>],
    images: Vec<Vec<Scalar>>,
    image_dim: usize,
) -> Result<Subspace> {
    if basis.is_empty() {
        return Ok(Subspace::zero(f, ambient));
    }
    if image_dim == 0 {
        return Ok(span_through_basis(
            f,
            ambient,
            basis,
            &Subspace::full(f, basis.len()),
        ));
    }
    let m = Matrix::from_cols(f, image_dim, images)?;
    let coeffs = kernel(&m);
    Ok(span_through_basis(f, ambient, basis, &coeffs))
}

/// The kernel-preserving derivations of the total space commuting with
/// its operator, as a subspace of flattened endomorphisms.
fn invariant_derivation_space(ext: &Extension) -> Result<Subspace> {
    let e = ext.total();
    let de = e.dim();
    let f = e.field();
    let i_mat = ext.embedding();
    let mut rows = leibniz_constraint_rows(e.algebra());
    rows.extend(commuting_constraint_rows(e.operator()));
    // Invariance: every annihilator of the embedded kernel kills the
    // image of every embedded basis vector.
    let annihilator = kernel(&i_mat.transpose());
    for j in 0..ext.kernel().dim() {
        for a in annihilator.basis() {
            let mut row = vzero(f, de * de);
            for r in 0..de {
                for c in 0..de {
                    row[r * de + c] = &row[r * de + c] + &(&a[r] * i_mat.get(c, j));
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(Subspace::full(f, de * de));
    }
    Ok(kernel(&Matrix::from_rows(f, rows)?))
}

/// Check the derivation exact sequence by pure linear algebra: the
/// module-valued derivations of the base embed into the invariant
/// derivations of the total space, the kernel of restriction equals
/// that embedded image, and the kernel of the Wells map equals the
/// image of restriction. For split extensions, additionally verify the
/// bracket-preserving section of restriction and the dimension
/// decomposition it induces.
pub fn wells_sequence_der_check(ext: &Extension) -> Result<DerSequenceStats> {
    check_extension(ext)?.into_result(Error::NotAnExtension)?;
    let sec = canonical_section(ext)?;
    let context = induced_representation(ext, &sec)?;
    let f = ext.total().field();
    let (m, n, de) = (ext.kernel().dim(), ext.base().dim(), ext.total().dim());
    let i_mat = ext.embedding();
    let p_mat = ext.projection();
    let kappa = kernel_projection(ext, &sec)?;

    let valued = nij_derivation_space_valued(ext.base(), &context)?;
    let invariant = invariant_derivation_space(ext)?;
    let pairs_space = compatible_pairs_space(&context)?;

    let mut report = StructureReport::new("derivation sequence exactness");

    // The embedding d -> i d p of module-valued derivations.
    let iota_images: Vec<Vec<Scalar>> = valued
        .basis()
        .iter()
        .map(|v| {
            let d = Matrix::from_flat(f, m, n, v.clone());
            i_mat.mul(&d).mul(p_mat).flatten()
        })
        .collect();
    let image_iota = Subspace::from_spanning(f, de * de, iota_images);
    if image_iota.dim() != valued.dim() {
        report.fail(
            "embedding injective",
            format!("rank {} of {}", image_iota.dim(), valued.dim()),
        );
    }
    if !image_iota.is_subspace_of(&invariant) {
        report.fail(
            "embedding lands in the invariant derivations",
            "an embedded derivation is not invariant".into(),
        );
    }

    // Restriction as a linear map on the invariant derivations.
    let eta_of = |flat: &[Scalar]| -> Vec<Scalar> {
        let d = Matrix::from_flat(f, de, de, flat.to_vec());
        let mut out = kappa.mul(&d).mul(i_mat).flatten();
        out.extend(p_mat.mul(&d).mul(sec.matrix()).flatten());
        out
    };
    let eta_images: Vec<Vec<Scalar>> = invariant.basis().iter().map(|v| eta_of(v)).collect();
    let image_eta = Subspace::from_spanning(f, m * m + n * n, eta_images.clone());
    if !image_eta.is_subspace_of(&pairs_space) {
        report.fail(
            "restriction lands in the compatible pairs",
            "a restricted pair is not compatible".into(),
        );
    }
    let ker_eta = kernel_through_images(f, de * de, invariant.basis(), eta_images, m * m + n * n)?;
    if ker_eta != image_iota {
        report.fail(
            "kernel of the restriction equals the embedded derivations",
            format!("dimensions {} vs {}", ker_eta.dim(), image_iota.dim()),
        );
    }

    // The Wells map on the compatible pairs.
    let h2 = compute_h2(&context)?;
    let c = extract_abelian_cocycle(ext, &sec)?;
    let mut wells_images: Vec<Vec<Scalar>> = Vec::new();
    for v in pairs_space.basis() {
        let pair = unflatten_pair(&context, v)?;
        let t = transformed_cocycle_der(&c, &pair)?;
        wells_images.push(h2.class_coordinates(&t)?);
    }
    let ker_wells = kernel_through_images(
        f,
        m * m + n * n,
        pairs_space.basis(),
        wells_images.clone(),
        h2.dim(),
    )?;
    if ker_wells != image_eta {
        report.fail(
            "kernel of the Wells map equals the image of the restriction",
            format!("dimensions {} vs {}", ker_wells.dim(), image_eta.dim()),
        );
    }

    let split = is_split(ext)?;
    if split.split {
        for (k, img) in wells_images.iter().enumerate() {
            if img.iter().any(|x| !x.is_zero()) {
                report.fail(
                    "Wells map vanishes on a split extension",
                    format!("basis pair {}", k + 1),
                );
            }
        }
        let ssec = split
            .section
            .as_ref()
            .expect("split reports carry a section");
        let kappa_split = kernel_projection(ext, ssec)?;
        let section_of = |pair: &DerPair| -> Matrix {
            ssec.matrix()
                .mul(&pair.d_g)
                .mul(p_mat)
                .add(&i_mat.mul(&pair.d_v).mul(&kappa_split))
        };
        let basis_pairs: Vec<DerPair> = pairs_space
            .basis()
            .iter()
            .map(|v| unflatten_pair(&context, v))
            .collect::<Result<_>>()?;
        for (k, pair) in basis_pairs.iter().enumerate() {
            let lifted = section_of(pair);
            if !invariant.contains(&lifted.flatten()) {
                report.fail(
                    "section lands in the invariant derivations",
                    format!("basis pair {}", k + 1),
                );
            }
            match eta(ext, &lifted) {
                Ok(back) if back == *pair => {}
                Ok(_) => report.fail(
                    "section of the restriction",
                    format!("basis pair {} does not restrict back to itself", k + 1),
                ),
                Err(e) => report.fail(
                    "section of the restriction",
                    format!("basis pair {} does not lift to a derivation: {e}", k + 1),
                ),
            }
        }
        for a in 0..basis_pairs.len() {
            for b in (a + 1)..basis_pairs.len() {
                let bracket = DerPair::new(
                    &context,
                    commutator(&basis_pairs[a].d_v, &basis_pairs[b].d_v),
                    commutator(&basis_pairs[a].d_g, &basis_pairs[b].d_g),
                )?;
                let lhs = section_of(&bracket);
                let rhs = commutator(&section_of(&basis_pairs[a]), &section_of(&basis_pairs[b]));
                if lhs != rhs {
                    report.fail(
                        "section preserves brackets",
                        format!("basis pairs {} and {}", a + 1, b + 1),
                    );
                }
            }
        }
        if invariant.dim() != pairs_space.dim() + valued.dim() {
            report.fail(
                "dimension decomposition",
                format!(
                    "{} invariant vs {} pairs + {} embedded",
                    invariant.dim(),
                    pairs_space.dim(),
                    valued.dim()
                ),
            );
        }
    }

    Ok(DerSequenceStats {
        report,
        dim_valued_derivations: valued.dim(),
        dim_invariant_derivations: invariant.dim(),
        dim_compatible_pairs: pairs_space.dim(),
        dim_h2: h2.dim(),
        split: split.split,
    })
}
