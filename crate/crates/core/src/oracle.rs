//! Brute-force enumeration over small prime fields.
//!
//! Everything in this module re-evaluates the defining identities
//! directly on plain nested `Vec<Scalar>` data, with its own matrix
//! arithmetic and its own Gaussian elimination, sharing only scalar
//! arithmetic with the structured modules. When an enumeration here and
//! the corresponding structured computation agree, the agreement is
//! evidence for both rather than a tautology.
//!
//! Every sweep is deterministic (candidates are generated in a fixed
//! lexicographic order, last coordinate varying fastest), duplicate-free
//! and guarded by an [`EnumerationBudget`]: a sweep whose candidate
//! count would exceed the budget aborts with `Error::BudgetExceeded`
//! before any work is done.

use crate::error::{Error, Result};
use crate::extensions::{is_split, Extension};
use crate::field::{Field, Scalar};
use crate::inducibility::{wells_aut, wells_der, AutPair, DerPair};
use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::nijenhuis::{NijenhuisLieAlgebra, NijenhuisRepresentation};

/// Cap on the number of candidates any single enumeration may visit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EnumerationBudget {
    pub max_candidates: u64,
}

impl Default for EnumerationBudget {
    fn default() -> EnumerationBudget {
        EnumerationBudget {
            max_candidates: 1 << 20,
        }
    }
}

impl EnumerationBudget {
    pub fn new(max_candidates: u64) -> EnumerationBudget {
        EnumerationBudget { max_candidates }
    }

    pub fn admits(&self, required: u128) -> bool {
        required <= u128::from(self.max_candidates)
    }

    fn admit(&self, required: u128) -> Result<()> {
        if self.admits(required) {
            Ok(())
        } else {
            Err(Error::BudgetExceeded {
                required,
                budget: self.max_candidates,
            })
        }
    }

    /// Largest dimension d for which a full sweep of d-by-d matrices
    /// over F_p stays within the budget.
    pub fn max_dimension(&self, p: u64) -> usize {
        let mut d = 0;
        while self.admits(pow_candidates(p, (d + 1) * (d + 1))) {
            d += 1;
        }
        d
    }
}

/// p^k, saturating instead of overflowing.
fn pow_candidates(p: u64, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(u128::from(p));
    }
    acc
}

fn prime_order(field: Field) -> Result<u64> {
    field
        .order()
        .ok_or_else(|| Error::EnumerationNeedsPrimeField(field.to_string()))
}

// ---------------------------------------------------------------------------
// Raw linear algebra on nested vectors.
// ---------------------------------------------------------------------------

type Raw = Vec<Vec<Scalar>>;

fn rvzero(field: Field, len: usize) -> Vec<Scalar> {
    vec![field.zero(); len]
}

fn runit(field: Field, len: usize, k: usize) -> Vec<Scalar> {
    let mut v = rvzero(field, len);
    v[k] = field.one();
    v
}

fn rvadd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn rvsub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn rvneg(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x).collect()
}

fn rv_is_zero(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

fn rcol(a: &Raw, j: usize) -> Vec<Scalar> {
    a.iter().map(|row| row[j].clone()).collect()
}

/// Matrix times column vector.
fn rapply(field: Field, a: &Raw, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            let mut acc = field.zero();
            for (c, vc) in row.iter().zip(v) {
                if !c.is_zero() && !vc.is_zero() {
                    acc = &acc + &(c * vc);
                }
            }
            acc
        })
        .collect()
}

fn rmul(field: Field, a: &Raw, b: &Raw) -> Raw {
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    (0..a.len())
        .map(|r| {
            (0..cols)
                .map(|c| {
                    let mut acc = field.zero();
                    for (k, bk) in b.iter().enumerate() {
                        acc = &acc + &(&a[r][k] * &bk[c]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Square-matrix invertibility by this module's own elimination.
fn rinvertible(a: &Raw) -> bool {
    let n = a.len();
    let mut work = a.clone();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !work[r][col].is_zero()) {
            Some(r) => r,
            None => return false,
        };
        work.swap(col, pivot);
        let inv = work[col][col].inverse().expect("pivot is nonzero");
        for r in (col + 1)..n {
            if work[r][col].is_zero() {
                continue;
            }
            let factor = &work[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &work[col][c];
                work[r][c] = &work[r][c] - &delta;
            }
        }
    }
    true
}

fn raw_from_matrix(m: &Matrix) -> Raw {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).clone()).collect())
        .collect()
}

fn raw_from_tuple(t: &[Scalar], rows: usize, cols: usize) -> Raw {
    (0..rows)
        .map(|r| t[r * cols..(r + 1) * cols].to_vec())
        .collect()
}

// ---------------------------------------------------------------------------
// Candidate sweeps.
// ---------------------------------------------------------------------------

/// All length-`len` tuples over F_p in lexicographic order (the last
/// coordinate varies fastest). A zero-length sweep yields exactly one
/// empty tuple.
struct TupleSweep {
    field: Field,
    p: u64,
    digits: Vec<u64>,
    done: bool,
}

fn scalar_tuples(field: Field, p: u64, len: usize) -> TupleSweep {
    TupleSweep {
        field,
        p,
        digits: vec![0; len],
        done: false,
    }
}

impl Iterator for TupleSweep {
    type Item = Vec<Scalar>;

    fn next(&mut self) -> Option<Vec<Scalar>> {
        if self.done {
            return None;
        }
        let out = self
            .digits
            .iter()
            .map(|d| Scalar::from_integer(self.field, *d as i64))
            .collect();
        let mut place = self.digits.len();
        loop {
            if place == 0 {
                self.done = true;
                break;
            }
            place -= 1;
            self.digits[place] += 1;
            if self.digits[place] < self.p {
                break;
            }
            self.digits[place] = 0;
        }
        Some(out)
    }
}

/// Greedy partition into classes of a reflexive, symmetric, transitive
/// relation; each class lists item indices in sweep order.
fn partition_by(count: usize, mut related: impl FnMut(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'items: for item in 0..count {
        for class in classes.iter_mut() {
            if related(class[0], item) {
                class.push(item);
                continue 'items;
            }
        }
        classes.push(vec![item]);
    }
    classes
}

// ---------------------------------------------------------------------------
// Raw brackets and the operator predicate.
// ---------------------------------------------------------------------------

/// A bracket table copied out of a `LieAlgebra` (or assembled directly),
/// evaluated here by plain bilinear expansion.
struct RawAlgebra {
    field: Field,
    dim: usize,
    table: Vec<Vec<Vec<Scalar>>>,
}

impl RawAlgebra {
    fn from_algebra(l: &LieAlgebra) -> RawAlgebra {
        let dim = l.dim();
        let table = (0..dim)
            .map(|i| (0..dim).map(|j| l.bracket_basis(i, j).to_vec()).collect())
            .collect();
        RawAlgebra {
            field: l.field(),
            dim,
            table,
        }
    }

    fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut acc = rvzero(self.field, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        acc[k] = &acc[k] + &(&c * t);
                    }
                }
            }
        }
        acc
    }

    fn jacobi_holds(&self) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let ei = runit(self.field, self.dim, i);
                    let ej = runit(self.field, self.dim, j);
                    let ek = runit(self.field, self.dim, k);
                    let mut acc = self.bracket(&self.table[i][j], &ek);
                    acc = rvadd(&acc, &self.bracket(&self.table[j][k], &ei));
                    acc = rvadd(&acc, &self.bracket(&self.table[k][i], &ej));
                    if !rv_is_zero(&acc) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The defining identity of the deformation operator, on basis pairs.
fn operator_identity_holds(alg: &RawAlgebra, op: &Raw) -> bool {
    let d = alg.dim;
    for i in 0..d {
        for j in (i + 1)..d {
            let ni = rcol(op, i);
            let nj = rcol(op, j);
            let lhs = alg.bracket(&ni, &nj);
            let mut inner = rvadd(
                &alg.bracket(&ni, &runit(alg.field, d, j)),
                &alg.bracket(&runit(alg.field, d, i), &nj),
            );
            inner = rvsub(&inner, &rapply(alg.field, op, &alg.table[i][j]));
            if lhs != rapply(alg.field, op, &inner) {
                return false;
            }
        }
    }
    true
}

/// Every square matrix over F_p that satisfies the deformation identity
/// on `l`, in sweep order.
pub fn enumerate_nijenhuis(l: &LieAlgebra, budget: &EnumerationBudget) -> Result<Vec<Matrix>> {
    let p = prime_order(l.field())?;
    let d = l.dim();
    budget.admit(pow_candidates(p, d * d))?;
    let alg = RawAlgebra::from_algebra(l);
    let mut found = Vec::new();
    for t in scalar_tuples(l.field(), p, d * d) {
        let op = raw_from_tuple(&t, d, d);
        if operator_identity_holds(&alg, &op) {
            found.push(Matrix::from_rows(l.field(), op)?);
        }
    }
    Ok(found)
}

// ---------------------------------------------------------------------------
// Module-valued cocycles: enumeration and class partition.
// ---------------------------------------------------------------------------

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Full antisymmetric tensor from the packed coordinates (pairs i < j in
/// lexicographic order, `m` components each).
fn decode_alternating(
    field: Field,
    n: usize,
    m: usize,
    coords: &[Scalar],
) -> Vec<Vec<Vec<Scalar>>> {
    let mut chi = vec![vec![rvzero(field, m); n]; n];
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let block = coords[idx * m..(idx + 1) * m].to_vec();
            chi[j][i] = rvneg(&block);
            chi[i][j] = block;
            idx += 1;
        }
    }
    chi
}

fn chi_eval_raw(
    field: Field,
    m: usize,
    chi: &[Vec<Vec<Scalar>>],
    x: &[Scalar],
    y: &[Scalar],
) -> Vec<Scalar> {
    let mut acc = rvzero(field, m);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() || i == j {
                continue;
            }
            let c = xi * yj;
            for (w, t) in chi[i][j].iter().enumerate() {
                if !t.is_zero() {
                    acc[w] = &acc[w] + &(&c * t);
                }
            }
        }
    }
    acc
}

/// The structured context copied into raw form at the boundary.
struct RawContext {
    field: Field,
    n: usize,
    m: usize,
    base: RawAlgebra,
    nop: Raw,
    rho: Vec<Raw>,
    s: Raw,
}

impl RawContext {
    fn from_context(context: &NijenhuisRepresentation) -> RawContext {
        let g = context.base().algebra();
        RawContext {
            field: context.field(),
            n: g.dim(),
            m: context.dim_v(),
            base: RawAlgebra::from_algebra(g),
            nop: raw_from_matrix(context.base().operator()),
            rho: (0..g.dim())
                .map(|i| raw_from_matrix(context.rep().rho_basis(i)))
                .collect(),
            s: raw_from_matrix(context.operator()),
        }
    }

    /// Action of an arbitrary base vector, expanded through the basis.
    fn act(&self, x: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut acc = rvzero(self.field, self.m);
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            let w = rapply(self.field, &self.rho[k], v);
            for (a, wa) in w.iter().enumerate() {
                acc[a] = &acc[a] + &(xk * wa);
            }
        }
        acc
    }

    fn coordinate_len(&self) -> usize {
        pair_count(self.n) * self.m + self.m * self.n
    }

    fn decode(&self, coords: &[Scalar]) -> (Vec<Vec<Vec<Scalar>>>, Raw) {
        let split = pair_count(self.n) * self.m;
        let chi = decode_alternating(self.field, self.n, self.m, &coords[..split]);
        let f = raw_from_tuple(&coords[split..], self.m, self.n);
        (chi, f)
    }
}

fn module_cocycle_holds(rc: &RawContext, chi: &[Vec<Vec<Scalar>>], f: &Raw) -> bool {
    let (n, m, field) = (rc.n, rc.m, rc.field);
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut acc = rapply(rc.field, &rc.rho[i], &chi[j][k]);
                acc = rvadd(&acc, &rapply(rc.field, &rc.rho[j], &chi[k][i]));
                acc = rvadd(&acc, &rapply(rc.field, &rc.rho[k], &chi[i][j]));
                acc = rvsub(
                    &acc,
                    &chi_eval_raw(field, m, chi, &rc.base.table[i][j], &runit(field, n, k)),
                );
                acc = rvsub(
                    &acc,
                    &chi_eval_raw(field, m, chi, &rc.base.table[j][k], &runit(field, n, i)),
                );
                acc = rvsub(
                    &acc,
                    &chi_eval_raw(field, m, chi, &rc.base.table[k][i], &runit(field, n, j)),
                );
                if !rv_is_zero(&acc) {
                    return false;
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let ei = runit(field, n, i);
            let ej = runit(field, n, j);
            let ni = rcol(&rc.nop, i);
            let nj = rcol(&rc.nop, j);
            let fi = rcol(f, i);
            let fj = rcol(f, j);
            let mut acc = chi_eval_raw(field, m, chi, &ni, &nj);
            let mut inner = rvadd(
                &chi_eval_raw(field, m, chi, &ni, &ej),
                &chi_eval_raw(field, m, chi, &ei, &nj),
            );
            inner = rvsub(&inner, &rapply(rc.field, &rc.s, &chi[i][j]));
            acc = rvsub(&acc, &rapply(rc.field, &rc.s, &inner));
            let mut deformed = rvadd(&rc.base.bracket(&ni, &ej), &rc.base.bracket(&ei, &nj));
            deformed = rvsub(&deformed, &rapply(rc.field, &rc.nop, &rc.base.table[i][j]));
            acc = rvsub(&acc, &rapply(rc.field, f, &deformed));
            acc = rvadd(&acc, &rc.act(&ni, &fj));
            acc = rvsub(&acc, &rc.act(&nj, &fi));
            let mut inner_f = rvsub(
                &rapply(rc.field, &rc.rho[i], &fj),
                &rapply(rc.field, &rc.rho[j], &fi),
            );
            inner_f = rvsub(&inner_f, &rapply(rc.field, f, &rc.base.table[i][j]));
            acc = rvsub(&acc, &rapply(rc.field, &rc.s, &inner_f));
            if !rv_is_zero(&acc) {
                return false;
            }
        }
    }
    true
}

fn module_equivalence_with(
    rc: &RawContext,
    a: &(Vec<Vec<Vec<Scalar>>>, Raw),
    b: &(Vec<Vec<Vec<Scalar>>>, Raw),
    phi: &Raw,
) -> bool {
    let n = rc.n;
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = rvsub(&a.0[i][j], &b.0[i][j]);
            let mut rhs = rvsub(
                &rapply(rc.field, &rc.rho[i], &rcol(phi, j)),
                &rapply(rc.field, &rc.rho[j], &rcol(phi, i)),
            );
            rhs = rvsub(&rhs, &rapply(rc.field, phi, &rc.base.table[i][j]));
            if lhs != rhs {
                return false;
            }
        }
    }
    for i in 0..n {
        let lhs = rvsub(&rcol(&a.1, i), &rcol(&b.1, i));
        let rhs = rvsub(
            &rapply(rc.field, &rc.s, &rcol(phi, i)),
            &rapply(rc.field, phi, &rcol(&rc.nop, i)),
        );
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// All module-valued cocycle coordinate vectors over F_p, in sweep
/// order. Coordinates list the alternating part on basis pairs (i < j
/// lexicographic, `dim V` components each) followed by the operator
/// part row-major — the same flattening the cohomology solver uses.
pub fn enumerate_cocycles(
    context: &NijenhuisRepresentation,
    budget: &EnumerationBudget,
) -> Result<Vec<Vec<Scalar>>> {
    let p = prime_order(context.field())?;
    let rc = RawContext::from_context(context);
    let len = rc.coordinate_len();
    budget.admit(pow_candidates(p, len))?;
    let mut found = Vec::new();
    for coords in scalar_tuples(rc.field, p, len) {
        let (chi, f) = rc.decode(&coords);
        if module_cocycle_holds(&rc, &chi, &f) {
            found.push(coords);
        }
    }
    Ok(found)
}

/// Partition cocycle coordinate vectors into equivalence classes by
/// exhausting witness candidates for every pair.
pub fn class_partition(
    context: &NijenhuisRepresentation,
    cocycles: &[Vec<Scalar>],
    budget: &EnumerationBudget,
) -> Result<Vec<Vec<usize>>> {
    let p = prime_order(context.field())?;
    let rc = RawContext::from_context(context);
    let len = rc.coordinate_len();
    if cocycles.iter().any(|c| c.len() != len) {
        return Err(Error::Invalid(
            "cocycle coordinates have the wrong length".into(),
        ));
    }
    let witnesses = pow_candidates(p, rc.m * rc.n);
    let items = cocycles.len() as u128;
    budget.admit(items.saturating_mul(items).saturating_mul(witnesses))?;
    let decoded: Vec<_> = cocycles.iter().map(|c| rc.decode(c)).collect();
    Ok(partition_by(decoded.len(), |r, c| {
        scalar_tuples(rc.field, p, rc.m * rc.n)
            .map(|t| raw_from_tuple(&t, rc.m, rc.n))
            .any(|phi| module_equivalence_with(&rc, &decoded[r], &decoded[c], &phi))
    }))
}

// ---------------------------------------------------------------------------
// Cocycles valued in a non-abelian kernel.
// ---------------------------------------------------------------------------

/// Source and target data for kernel-valued cocycles, in raw form.
struct RawPair {
    field: Field,
    n: usize,
    m: usize,
    src: RawAlgebra,
    nop: Raw,
    tgt: RawAlgebra,
    sop: Raw,
}

struct RawCocycle {
    chi: Vec<Vec<Vec<Scalar>>>,
    psi: Vec<Raw>,
    f: Raw,
}

impl RawPair {
    fn from_parts(source: &NijenhuisLieAlgebra, target: &NijenhuisLieAlgebra) -> Result<RawPair> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch("cocycle source and target".into()));
        }
        Ok(RawPair {
            field: source.field(),
            n: source.dim(),
            m: target.dim(),
            src: RawAlgebra::from_algebra(source.algebra()),
            nop: raw_from_matrix(source.operator()),
            tgt: RawAlgebra::from_algebra(target.algebra()),
            sop: raw_from_matrix(target.operator()),
        })
    }

    fn coordinate_len(&self) -> usize {
        pair_count(self.n) * self.m + self.n * self.m * self.m + self.m * self.n
    }

    fn decode(&self, coords: &[Scalar]) -> RawCocycle {
        let (n, m) = (self.n, self.m);
        let chi_len = pair_count(n) * m;
        let chi = decode_alternating(self.field, n, m, &coords[..chi_len]);
        let psi = (0..n)
            .map(|i| {
                raw_from_tuple(
                    &coords[chi_len + i * m * m..chi_len + (i + 1) * m * m],
                    m,
                    m,
                )
            })
            .collect();
        let f = raw_from_tuple(&coords[chi_len + n * m * m..], m, n);
        RawCocycle { chi, psi, f }
    }

    /// psi of an arbitrary source vector, expanded through the basis.
    fn psi_act(&self, psi: &[Raw], x: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut acc = rvzero(self.field, self.m);
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            let w = rapply(self.field, &psi[k], v);
            for (a, wa) in w.iter().enumerate() {
                acc[a] = &acc[a] + &(xk * wa);
            }
        }
        acc
    }
}

fn kernel_cocycle_holds(rp: &RawPair, c: &RawCocycle) -> bool {
    let (n, m, field) = (rp.n, rp.m, rp.field);
    // each psi_x acts by derivations of the kernel bracket
    for i in 0..n {
        for a in 0..m {
            for b in (a + 1)..m {
                let lhs = rapply(rp.field, &c.psi[i], &rp.tgt.table[a][b]);
                let rhs = rvadd(
                    &rp.tgt.bracket(&rcol(&c.psi[i], a), &runit(field, m, b)),
                    &rp.tgt.bracket(&runit(field, m, a), &rcol(&c.psi[i], b)),
                );
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    // commutators of psi deviate from the bracket action by ad(chi)
    for i in 0..n {
        for j in (i + 1)..n {
            for a in 0..m {
                let ea = runit(field, m, a);
                let mut lhs = rvsub(
                    &rapply(rp.field, &c.psi[i], &rapply(rp.field, &c.psi[j], &ea)),
                    &rapply(rp.field, &c.psi[j], &rapply(rp.field, &c.psi[i], &ea)),
                );
                lhs = rvsub(&lhs, &rp.psi_act(&c.psi, &rp.src.table[i][j], &ea));
                if lhs != rp.tgt.bracket(&c.chi[i][j], &ea) {
                    return false;
                }
            }
        }
    }
    // cyclic identity
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut acc = rapply(rp.field, &c.psi[i], &c.chi[j][k]);
                acc = rvadd(&acc, &rapply(rp.field, &c.psi[j], &c.chi[k][i]));
                acc = rvadd(&acc, &rapply(rp.field, &c.psi[k], &c.chi[i][j]));
                acc = rvsub(
                    &acc,
                    &chi_eval_raw(field, m, &c.chi, &rp.src.table[i][j], &runit(field, n, k)),
                );
                acc = rvsub(
                    &acc,
                    &chi_eval_raw(field, m, &c.chi, &rp.src.table[j][k], &runit(field, n, i)),
                );
                acc = rvsub(
                    &acc,
                    &chi_eval_raw(field, m, &c.chi, &rp.src.table[k][i], &runit(field, n, j)),
                );
                if !rv_is_zero(&acc) {
                    return false;
                }
            }
        }
    }
    // compatibility of psi with the two operators through F
    for i in 0..n {
        let ni = rcol(&rp.nop, i);
        let fi = rcol(&c.f, i);
        for a in 0..m {
            let ea = runit(field, m, a);
            let sa = rcol(&rp.sop, a);
            let lhs = rp.psi_act(&c.psi, &ni, &sa);
            let mut inner = rvadd(
                &rp.psi_act(&c.psi, &ni, &ea),
                &rapply(rp.field, &c.psi[i], &sa),
            );
            inner = rvsub(&inner, &rapply(rp.field, &rp.sop, &rcol(&c.psi[i], a)));
            let mut rhs = rapply(rp.field, &rp.sop, &inner);
            rhs = rvadd(&rhs, &rapply(rp.field, &rp.sop, &rp.tgt.bracket(&fi, &ea)));
            rhs = rvsub(&rhs, &rp.tgt.bracket(&fi, &sa));
            if lhs != rhs {
                return false;
            }
        }
    }
    // the F identity on pairs
    for i in 0..n {
        for j in (i + 1)..n {
            let ei = runit(field, n, i);
            let ej = runit(field, n, j);
            let ni = rcol(&rp.nop, i);
            let nj = rcol(&rp.nop, j);
            let fi = rcol(&c.f, i);
            let fj = rcol(&c.f, j);
            let mut acc = chi_eval_raw(field, m, &c.chi, &ni, &nj);
            let mut inner = rvadd(
                &chi_eval_raw(field, m, &c.chi, &ni, &ej),
                &chi_eval_raw(field, m, &c.chi, &ei, &nj),
            );
            inner = rvsub(&inner, &rapply(rp.field, &rp.sop, &c.chi[i][j]));
            acc = rvsub(&acc, &rapply(rp.field, &rp.sop, &inner));
            let mut deformed = rvadd(&rp.src.bracket(&ni, &ej), &rp.src.bracket(&ei, &nj));
            deformed = rvsub(&deformed, &rapply(rp.field, &rp.nop, &rp.src.table[i][j]));
            acc = rvsub(&acc, &rapply(rp.field, &c.f, &deformed));
            acc = rvadd(&acc, &rp.psi_act(&c.psi, &ni, &fj));
            acc = rvsub(&acc, &rp.psi_act(&c.psi, &nj, &fi));
            let mut inner_f = rvsub(
                &rapply(rp.field, &c.psi[i], &fj),
                &rapply(rp.field, &c.psi[j], &fi),
            );
            inner_f = rvsub(&inner_f, &rapply(rp.field, &c.f, &rp.src.table[i][j]));
            acc = rvsub(&acc, &rapply(rp.field, &rp.sop, &inner_f));
            acc = rvadd(&acc, &rp.tgt.bracket(&fi, &fj));
            if !rv_is_zero(&acc) {
                return false;
            }
        }
    }
    true
}

/// The three witness identities, differences taken first minus second.
fn kernel_equivalence_with(rp: &RawPair, a: &RawCocycle, b: &RawCocycle, phi: &Raw) -> bool {
    let (n, m, field) = (rp.n, rp.m, rp.field);
    for i in 0..n {
        let phi_i = rcol(phi, i);
        for col in 0..m {
            let lhs = rvsub(&rcol(&a.psi[i], col), &rcol(&b.psi[i], col));
            if lhs != rp.tgt.bracket(&phi_i, &runit(field, m, col)) {
                return false;
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let phi_i = rcol(phi, i);
            let phi_j = rcol(phi, j);
            let lhs = rvsub(&a.chi[i][j], &b.chi[i][j]);
            let mut rhs = rvsub(
                &rapply(rp.field, &b.psi[i], &phi_j),
                &rapply(rp.field, &b.psi[j], &phi_i),
            );
            rhs = rvsub(&rhs, &rapply(rp.field, phi, &rp.src.table[i][j]));
            rhs = rvadd(&rhs, &rp.tgt.bracket(&phi_i, &phi_j));
            if lhs != rhs {
                return false;
            }
        }
    }
    for i in 0..n {
        let lhs = rvsub(&rcol(&a.f, i), &rcol(&b.f, i));
        let rhs = rvsub(
            &rapply(rp.field, &rp.sop, &rcol(phi, i)),
            &rapply(rp.field, phi, &rcol(&rp.nop, i)),
        );
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// All kernel-valued cocycle coordinate vectors over F_p, in sweep
/// order: alternating part on basis pairs, then one action matrix per
/// source basis vector (row-major), then the operator part row-major.
pub fn enumerate_nonabelian_cocycles(
    source: &NijenhuisLieAlgebra,
    target: &NijenhuisLieAlgebra,
    budget: &EnumerationBudget,
) -> Result<Vec<Vec<Scalar>>> {
    let rp = RawPair::from_parts(source, target)?;
    let p = prime_order(rp.field)?;
    let len = rp.coordinate_len();
    budget.admit(pow_candidates(p, len))?;
    let mut found = Vec::new();
    for coords in scalar_tuples(rp.field, p, len) {
        if kernel_cocycle_holds(&rp, &rp.decode(&coords)) {
            found.push(coords);
        }
    }
    Ok(found)
}

/// Partition kernel-valued cocycles into equivalence classes by
/// exhausting witness candidates for every pair.
pub fn nonabelian_class_partition(
    source: &NijenhuisLieAlgebra,
    target: &NijenhuisLieAlgebra,
    cocycles: &[Vec<Scalar>],
    budget: &EnumerationBudget,
) -> Result<Vec<Vec<usize>>> {
    let rp = RawPair::from_parts(source, target)?;
    let p = prime_order(rp.field)?;
    let len = rp.coordinate_len();
    if cocycles.iter().any(|c| c.len() != len) {
        return Err(Error::Invalid(
            "cocycle coordinates have the wrong length".into(),
        ));
    }
    let witnesses = pow_candidates(p, rp.m * rp.n);
    let items = cocycles.len() as u128;
    budget.admit(items.saturating_mul(items).saturating_mul(witnesses))?;
    let decoded: Vec<_> = cocycles.iter().map(|c| rp.decode(c)).collect();
    Ok(partition_by(decoded.len(), |r, c| {
        scalar_tuples(rp.field, p, rp.m * rp.n)
            .map(|t| raw_from_tuple(&t, rp.m, rp.n))
            .any(|phi| kernel_equivalence_with(&rp, &decoded[r], &decoded[c], &phi))
    }))
}

// ---------------------------------------------------------------------------
// The extension <-> cocycle correspondence, checked from both ends.
// ---------------------------------------------------------------------------

/// Outcome of sweeping one coordinate space with two independent
/// admissibility predicates (cocycle identities vs. direct structure
/// checks on the assembled extension) and two independent equivalence
/// relations (witness identities vs. enumerated isomorphisms).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CorrespondenceReport {
    /// Coordinate vectors admitted by both predicates.
    pub admissible: usize,
    /// Candidates where exactly one predicate admitted.
    pub membership_disagreements: usize,
    /// Admitted pairs where equivalence and isomorphism disagree.
    pub relation_disagreements: usize,
    pub cocycle_classes: usize,
    pub extension_classes: usize,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.membership_disagreements == 0
            && self.relation_disagreements == 0
            && self.cocycle_classes == self.extension_classes
    }
}

/// Bracket table of the total space built on fixed coordinates (base
/// block first, kernel block second) from decoded cocycle data.
fn assemble_total(rp: &RawPair, c: &RawCocycle) -> RawAlgebra {
    let (n, m, field) = (rp.n, rp.m, rp.field);
    let d = n + m;
    let mut table = vec![vec![rvzero(field, d); d]; d];
    let place = |g_part: &[Scalar], h_part: &[Scalar]| -> Vec<Scalar> {
        let mut v = g_part.to_vec();
        v.extend_from_slice(h_part);
        v
    };
    for i in 0..n {
        for j in 0..n {
            table[i][j] = place(&rp.src.table[i][j], &c.chi[i][j]);
        }
    }
    for i in 0..n {
        for a in 0..m {
            let v = place(&rvzero(field, n), &rcol(&c.psi[i], a));
            table[n + a][i] = rvneg(&v);
            table[i][n + a] = v;
        }
    }
    for a in 0..m {
        for b in 0..m {
            table[n + a][n + b] = place(&rvzero(field, n), &rp.tgt.table[a][b]);
        }
    }
    RawAlgebra {
        field,
        dim: d,
        table,
    }
}

fn assemble_operator(rp: &RawPair, f: &Raw) -> Raw {
    let (n, m, field) = (rp.n, rp.m, rp.field);
    let d = n + m;
    let mut u = vec![rvzero(field, d); d];
    for r in 0..n {
        for c in 0..n {
            u[r][c] = rp.nop[r][c].clone();
        }
    }
    for r in 0..m {
        for c in 0..n {
            u[n + r][c] = f[r][c].clone();
        }
        for c in 0..m {
            u[n + r][n + c] = rp.sop[r][c].clone();
        }
    }
    u
}

fn extension_structure_holds(total: &RawAlgebra, u: &Raw) -> bool {
    total.jacobi_holds() && operator_identity_holds(total, u)
}

/// The isomorphisms compatible with fixed coordinates differ from the
/// identity only in the kernel-past-base block phi.
fn isomorphic_with(rp: &RawPair, a: &(RawAlgebra, Raw), b: &(RawAlgebra, Raw), phi: &Raw) -> bool {
    let (n, m, field) = (rp.n, rp.m, rp.field);
    let d = n + m;
    let mut map = vec![rvzero(field, d); d];
    for k in 0..d {
        map[k][k] = field.one();
    }
    for r in 0..m {
        for c in 0..n {
            map[n + r][c] = phi[r][c].clone();
        }
    }
    for x in 0..d {
        for y in (x + 1)..d {
            let lhs = rapply(rp.field, &map, &a.0.table[x][y]);
            let rhs = b.0.bracket(&rcol(&map, x), &rcol(&map, y));
            if lhs != rhs {
                return false;
            }
        }
    }
    rmul(rp.field, &map, &a.1) == rmul(rp.field, &b.1, &map)
}

/// Sweep the full coordinate space for a source/target pair, admit each
/// candidate through both descriptions, and compare the resulting class
/// partitions pair by pair.
pub fn extension_correspondence_check(
    source: &NijenhuisLieAlgebra,
    target: &NijenhuisLieAlgebra,
    budget: &EnumerationBudget,
) -> Result<CorrespondenceReport> {
    let rp = RawPair::from_parts(source, target)?;
    let p = prime_order(rp.field)?;
    let len = rp.coordinate_len();
    budget.admit(pow_candidates(p, len))?;

    let mut admitted: Vec<RawCocycle> = Vec::new();
    let mut assembled: Vec<(RawAlgebra, Raw)> = Vec::new();
    let mut membership_disagreements = 0;
    for coords in scalar_tuples(rp.field, p, len) {
        let c = rp.decode(&coords);
        let total = assemble_total(&rp, &c);
        let u = assemble_operator(&rp, &c.f);
        let as_cocycle = kernel_cocycle_holds(&rp, &c);
        let as_extension = extension_structure_holds(&total, &u);
        if as_cocycle != as_extension {
            membership_disagreements += 1;
            continue;
        }
        if as_cocycle {
            admitted.push(c);
            assembled.push((total, u));
        }
    }

    let witnesses = pow_candidates(p, rp.m * rp.n);
    let items = admitted.len() as u128;
    budget.admit(
        items
            .saturating_mul(items)
            .saturating_mul(witnesses)
            .saturating_mul(2),
    )?;

    let k = admitted.len();
    let mut equivalent = vec![vec![false; k]; k];
    let mut isomorphic = vec![vec![false; k]; k];
    let mut relation_disagreements = 0;
    for r in 0..k {
        for s in r..k {
            let mut eq = false;
            let mut iso = false;
            for t in scalar_tuples(rp.field, p, rp.m * rp.n) {
                let phi = raw_from_tuple(&t, rp.m, rp.n);
                if !eq && kernel_equivalence_with(&rp, &admitted[r], &admitted[s], &phi) {
                    eq = true;
                }
                if !iso && isomorphic_with(&rp, &assembled[r], &assembled[s], &phi) {
                    iso = true;
                }
                if eq && iso {
                    break;
                }
            }
            if eq != iso {
                relation_disagreements += 1;
            }
            equivalent[r][s] = eq;
            equivalent[s][r] = eq;
            isomorphic[r][s] = iso;
            isomorphic[s][r] = iso;
        }
    }

    Ok(CorrespondenceReport {
        admissible: k,
        membership_disagreements,
        relation_disagreements,
        cocycle_classes: partition_by(k, |r, c| equivalent[r][c]).len(),
        extension_classes: partition_by(k, |r, c| isomorphic[r][c]).len(),
    })
}

// ---------------------------------------------------------------------------
// Exhaustive cross-checks against the structured solvers.
// ---------------------------------------------------------------------------

/// One exhaustive existence sweep next to the structured verdict it is
/// checking.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CrosscheckReport {
    /// Objects found by enumeration (lifts or splitting sections).
    pub oracle_count: usize,
    /// What the structured computation claims.
    pub solver_positive: bool,
}

impl CrosscheckReport {
    pub fn agree(&self) -> bool {
        (self.oracle_count > 0) == self.solver_positive
    }
}

/// Extension data copied into raw form. Only the canonical block layout
/// (base coordinates first, kernel coordinates second, embedding and
/// projection the corresponding inclusion and truncation) is supported,
/// which is the layout `build_extension` produces.
struct RawExtension {
    field: Field,
    n: usize,
    m: usize,
    d: usize,
    total: RawAlgebra,
    u: Raw,
    base: RawAlgebra,
    nop: Raw,
}

impl RawExtension {
    fn from_extension(ext: &Extension) -> Result<RawExtension> {
        let n = ext.base().dim();
        let m = ext.kernel().dim();
        let d = ext.total().dim();
        let field = ext.total().field();
        let canonical = d == n + m
            && (0..d).all(|r| {
                (0..m).all(|a| {
                    let expected = if r == n + a {
                        field.one()
                    } else {
                        field.zero()
                    };
                    *ext.embedding().get(r, a) == expected
                })
            })
            && (0..n).all(|r| {
                (0..d).all(|c| {
                    let expected = if r == c { field.one() } else { field.zero() };
                    *ext.projection().get(r, c) == expected
                })
            });
        if !canonical {
            return Err(Error::Invalid(
                "exhaustive cross-checks need the canonical block embedding and projection".into(),
            ));
        }
        Ok(RawExtension {
            field,
            n,
            m,
            d,
            total: RawAlgebra::from_algebra(ext.total().algebra()),
            u: raw_from_matrix(ext.total().operator()),
            base: RawAlgebra::from_algebra(ext.base().algebra()),
            nop: raw_from_matrix(ext.base().operator()),
        })
    }

    /// Does the candidate total-space map restrict to the given blocks?
    /// Kernel columns must stay in the kernel and match `on_kernel`;
    /// base columns must project to `on_base`. The kernel-past-base
    /// block is unconstrained.
    fn restricts_to(&self, map: &Raw, on_kernel: &Raw, on_base: &Raw) -> bool {
        for a in 0..self.m {
            for r in 0..self.n {
                if !map[r][self.n + a].is_zero() {
                    return false;
                }
            }
            for r in 0..self.m {
                if map[self.n + r][self.n + a] != on_kernel[r][a] {
                    return false;
                }
            }
        }
        for j in 0..self.n {
            for r in 0..self.n {
                if map[r][j] != on_base[r][j] {
                    return false;
                }
            }
        }
        true
    }

    fn preserves_bracket(&self, map: &Raw) -> bool {
        for x in 0..self.d {
            for y in (x + 1)..self.d {
                if rapply(self.field, map, &self.total.table[x][y])
                    != self.total.bracket(&rcol(map, x), &rcol(map, y))
                {
                    return false;
                }
            }
        }
        true
    }

    fn is_leibniz(&self, map: &Raw) -> bool {
        for x in 0..self.d {
            for y in (x + 1)..self.d {
                let rhs = rvadd(
                    &self
                        .total
                        .bracket(&rcol(map, x), &runit(self.field, self.d, y)),
                    &self
                        .total
                        .bracket(&runit(self.field, self.d, x), &rcol(map, y)),
                );
                if rapply(self.field, map, &self.total.table[x][y]) != rhs {
                    return false;
                }
            }
        }
        true
    }

    fn commutes_with_operator(&self, map: &Raw) -> bool {
        rmul(self.field, map, &self.u) == rmul(self.field, &self.u, map)
    }
}

/// Sweep every square matrix on the total space, keep the operator
/// automorphisms restricting to the pair, and compare existence with
/// the structured verdict. An incompatible pair counts as a negative
/// verdict rather than an error, so the two sides stay comparable.
pub fn automorphism_lift_crosscheck(
    ext: &Extension,
    pair: &AutPair,
    budget: &EnumerationBudget,
) -> Result<CrosscheckReport> {
    let raw = RawExtension::from_extension(ext)?;
    let p = prime_order(raw.field)?;
    budget.admit(pow_candidates(p, raw.d * raw.d))?;
    let beta = raw_from_matrix(pair.beta());
    let alpha = raw_from_matrix(pair.alpha());
    let mut oracle_count = 0;
    for t in scalar_tuples(raw.field, p, raw.d * raw.d) {
        let gamma = raw_from_tuple(&t, raw.d, raw.d);
        if raw.restricts_to(&gamma, &beta, &alpha)
            && raw.commutes_with_operator(&gamma)
            && raw.preserves_bracket(&gamma)
            && rinvertible(&gamma)
        {
            oracle_count += 1;
        }
    }
    let solver_positive = match wells_aut(ext, pair, budget.max_candidates) {
        Ok(report) => report.inducible(),
        Err(Error::IncompatiblePair(_)) => false,
        Err(e) => return Err(e),
    };
    Ok(CrosscheckReport {
        oracle_count,
        solver_positive,
    })
}

/// Sweep every square matrix on the total space, keep the operator
/// derivations restricting to the pair, and compare existence with the
/// structured verdict.
pub fn derivation_lift_crosscheck(
    ext: &Extension,
    pair: &DerPair,
    budget: &EnumerationBudget,
) -> Result<CrosscheckReport> {
    let raw = RawExtension::from_extension(ext)?;
    let p = prime_order(raw.field)?;
    budget.admit(pow_candidates(p, raw.d * raw.d))?;
    let d_v = raw_from_matrix(pair.d_v());
    let d_g = raw_from_matrix(pair.d_g());
    let mut oracle_count = 0;
    for t in scalar_tuples(raw.field, p, raw.d * raw.d) {
        let cand = raw_from_tuple(&t, raw.d, raw.d);
        if raw.restricts_to(&cand, &d_v, &d_g)
            && raw.commutes_with_operator(&cand)
            && raw.is_leibniz(&cand)
        {
            oracle_count += 1;
        }
    }
    let solver_positive = wells_der(ext, pair)?.inducible();
    Ok(CrosscheckReport {
        oracle_count,
        solver_positive,
    })
}

/// Sweep every section of the canonical projection and count the ones
/// that are morphisms of both the bracket and the operator; compare
/// existence with the structured splitting decision.
pub fn split_section_crosscheck(
    ext: &Extension,
    budget: &EnumerationBudget,
) -> Result<CrosscheckReport> {
    let raw = RawExtension::from_extension(ext)?;
    let p = prime_order(raw.field)?;
    budget.admit(pow_candidates(p, raw.m * raw.n))?;
    let mut oracle_count = 0;
    for t in scalar_tuples(raw.field, p, raw.m * raw.n) {
        let sigma = raw_from_tuple(&t, raw.m, raw.n);
        let mut sec = vec![rvzero(raw.field, raw.n); raw.d];
        for j in 0..raw.n {
            sec[j][j] = raw.field.one();
        }
        for r in 0..raw.m {
            for c in 0..raw.n {
                sec[raw.n + r][c] = sigma[r][c].clone();
            }
        }
        let mut good = rmul(raw.field, &raw.u, &sec) == rmul(raw.field, &sec, &raw.nop);
        if good {
            'pairs: for i in 0..raw.n {
                for j in (i + 1)..raw.n {
                    let lhs = raw.total.bracket(&rcol(&sec, i), &rcol(&sec, j));
                    if lhs != rapply(raw.field, &sec, &raw.base.table[i][j]) {
                        good = false;
                        break 'pairs;
                    }
                }
            }
        }
        if good {
            oracle_count += 1;
        }
    }
    let solver_positive = is_split(ext)?.split;
    Ok(CrosscheckReport {
        oracle_count,
        solver_positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{
        check_nonabelian_cocycle, compute_h2, AbelianTwoCocycle, NonAbelianTwoCocycle,
    };
    use crate::extensions::build_extension;
    use crate::lie::{aff1, heisenberg, LieAlgebra, Representation};
    use crate::nijenhuis::check_nijenhuis;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn line_nla(field: Field) -> NijenhuisLieAlgebra {
        NijenhuisLieAlgebra::new(
            LieAlgebra::abelian("line", field, 1),
            Matrix::zero(field, 1, 1),
        )
        .unwrap()
    }

    /// Trivial one-dimensional module over a one-dimensional base.
    fn line_context(field: Field) -> NijenhuisRepresentation {
        let base = line_nla(field);
        let rep = Representation::new(base.algebra().clone(), 1, vec![Matrix::zero(field, 1, 1)])
            .unwrap();
        NijenhuisRepresentation::new(base, rep, Matrix::zero(field, 1, 1)).unwrap()
    }

    /// Extension of the line by the line with operator part `f_val`;
    /// nonzero `f_val` makes it non-split.
    fn line_ext(field: Field, f_val: i64) -> Extension {
        let context = line_context(field);
        let chi = vec![vec![rvzero(field, 1); 1]; 1];
        let f = Matrix::from_i64(field, &[&[f_val]]);
        let c = AbelianTwoCocycle::new(context, chi, f).unwrap();
        build_extension(&c.as_nonabelian().unwrap()).unwrap()
    }

    #[test]
    fn every_operator_on_a_one_dimensional_algebra_qualifies() {
        let l = LieAlgebra::abelian("a1", f2(), 1);
        let ops = enumerate_nijenhuis(&l, &EnumerationBudget::default()).unwrap();
        assert_eq!(ops.len(), 2);
    }

    #[test]
    fn abelian_plane_admits_all_sixteen_operators() {
        let l = LieAlgebra::abelian("a2", f2(), 2);
        let ops = enumerate_nijenhuis(&l, &EnumerationBudget::default()).unwrap();
        assert_eq!(ops.len(), 16);
    }

    #[test]
    fn affine_line_admits_all_sixteen_operators() {
        // Frozen enumeration count: in dimension two the defining
        // identity reduces to an expression that cancels identically,
        // so every candidate passes.
        let ops = enumerate_nijenhuis(&aff1(f2()), &EnumerationBudget::default()).unwrap();
        assert_eq!(ops.len(), 16);
        for op in &ops {
            assert!(check_nijenhuis(&aff1(f2()), op).unwrap().passed());
        }
    }

    #[test]
    fn heisenberg_enumeration_matches_the_structured_predicate() {
        let l = heisenberg(f2());
        let ops = enumerate_nijenhuis(&l, &EnumerationBudget::default()).unwrap();
        // Frozen enumeration count over F_2.
        assert_eq!(ops.len(), 80);
        let mut solver_count = 0;
        for t in scalar_tuples(f2(), 2, 9) {
            let m = Matrix::from_flat(f2(), 3, 3, t);
            if check_nijenhuis(&l, &m).unwrap().passed() {
                solver_count += 1;
            }
        }
        assert_eq!(solver_count, ops.len());
        for op in &ops {
            assert!(check_nijenhuis(&l, op).unwrap().passed());
        }
    }

    #[test]
    fn enumeration_stops_at_the_budget() {
        let err = enumerate_nijenhuis(&heisenberg(f2()), &EnumerationBudget::new(100));
        match err {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(required, 512);
                assert_eq!(budget, 100);
            }
            other => panic!("expected a budget error, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_requires_a_prime_field() {
        let err = enumerate_nijenhuis(&aff1(Field::Rational), &EnumerationBudget::default());
        assert!(matches!(err, Err(Error::EnumerationNeedsPrimeField(_))));
    }

    #[test]
    fn budget_dimension_cap_matches_the_candidate_count() {
        let b = EnumerationBudget::default();
        assert_eq!(b.max_dimension(2), 4); // 2^16 fits, 2^25 does not
        assert_eq!(b.max_dimension(3), 3); // 3^9 fits, 3^16 does not
    }

    #[test]
    fn line_module_cocycles_fall_into_two_classes() {
        let context = line_context(f2());
        let budget = EnumerationBudget::default();
        let cocycles = enumerate_cocycles(&context, &budget).unwrap();
        assert_eq!(cocycles.len(), 2);
        let classes = class_partition(&context, &cocycles, &budget).unwrap();
        assert_eq!(classes.len(), 2);
        let h2 = compute_h2(&context).unwrap();
        assert_eq!(classes.len(), 2usize.pow(h2.dim() as u32));
    }

    #[test]
    fn zero_module_has_a_single_empty_cocycle() {
        let base = line_nla(f2());
        let rep =
            Representation::new(base.algebra().clone(), 0, vec![Matrix::zero(f2(), 0, 0)]).unwrap();
        let context = NijenhuisRepresentation::new(base, rep, Matrix::zero(f2(), 0, 0)).unwrap();
        let budget = EnumerationBudget::default();
        let cocycles = enumerate_cocycles(&context, &budget).unwrap();
        assert_eq!(cocycles, vec![Vec::<Scalar>::new()]);
        let classes = class_partition(&context, &cocycles, &budget).unwrap();
        assert_eq!(classes, vec![vec![0]]);
    }

    #[test]
    fn partition_rejects_vectors_of_the_wrong_length() {
        let context = line_context(f2());
        let bad = vec![vec![f2().one(), f2().zero()]];
        let err = class_partition(&context, &bad, &EnumerationBudget::default());
        assert!(matches!(err, Err(Error::Invalid(_))));
    }

    #[test]
    fn kernel_valued_enumeration_agrees_with_the_structured_checker() {
        // One-dimensional base acting into the affine kernel: small
        // enough to sweep, non-abelian enough to exercise every
        // identity family.
        let source = line_nla(f2());
        let target = NijenhuisLieAlgebra::new(aff1(f2()), Matrix::zero(f2(), 2, 2)).unwrap();
        let budget = EnumerationBudget::default();
        let found = enumerate_nonabelian_cocycles(&source, &target, &budget).unwrap();
        assert!(!found.is_empty());
        let mut solver_count = 0;
        let rp = RawPair::from_parts(&source, &target).unwrap();
        for coords in scalar_tuples(f2(), 2, rp.coordinate_len()) {
            let c = rp.decode(&coords);
            let psi: Vec<Matrix> = c
                .psi
                .iter()
                .map(|m| Matrix::from_rows(f2(), m.clone()).unwrap())
                .collect();
            let f = Matrix::from_rows(f2(), c.f.clone()).unwrap();
            let structured =
                NonAbelianTwoCocycle::new(source.clone(), target.clone(), c.chi, psi, f).unwrap();
            if check_nonabelian_cocycle(&structured).unwrap().passed() {
                solver_count += 1;
            }
        }
        assert_eq!(solver_count, found.len());
        let classes = nonabelian_class_partition(&source, &target, &found, &budget).unwrap();
        let total: usize = classes.iter().map(Vec::len).sum();
        assert_eq!(total, found.len());
        assert!(classes.len() <= found.len());
    }

    #[test]
    fn micro_correspondence_matches_class_counts() {
        let source = line_nla(f2());
        let target = line_nla(f2());
        let report =
            extension_correspondence_check(&source, &target, &EnumerationBudget::default())
                .unwrap();
        assert_eq!(report.admissible, 4);
        assert_eq!(report.membership_disagreements, 0);
        assert_eq!(report.relation_disagreements, 0);
        assert_eq!(report.cocycle_classes, 4);
        assert_eq!(report.extension_classes, 4);
        assert!(report.passed());
    }

    #[test]
    fn correspondence_stops_at_the_budget() {
        let source = NijenhuisLieAlgebra::new(heisenberg(f2()), Matrix::zero(f2(), 3, 3)).unwrap();
        let target = line_nla(f2());
        let err = extension_correspondence_check(&source, &target, &EnumerationBudget::new(10));
        assert!(matches!(
            err,
            Err(Error::BudgetExceeded {
                required: 512,
                budget: 10
            })
        ));
    }

    #[test]
    fn automorphism_crosscheck_agrees_on_both_verdicts() {
        let ext = line_ext(f3(), 1);
        let budget = EnumerationBudget::default();
        let kernel_alg = ext.kernel().clone();
        let base_alg = ext.base().clone();
        let two = Matrix::from_i64(f3(), &[&[2]]);
        let one = Matrix::identity(f3(), 1);

        let obstructed = AutPair::new(&kernel_alg, &base_alg, two.clone(), one).unwrap();
        let report = automorphism_lift_crosscheck(&ext, &obstructed, &budget).unwrap();
        assert_eq!(report.oracle_count, 0);
        assert!(!report.solver_positive);
        assert!(report.agree());

        let inducible = AutPair::new(&kernel_alg, &base_alg, two.clone(), two).unwrap();
        let report = automorphism_lift_crosscheck(&ext, &inducible, &budget).unwrap();
        assert_eq!(report.oracle_count, 3);
        assert!(report.solver_positive);
        assert!(report.agree());
    }

    #[test]
    fn derivation_crosscheck_agrees_on_both_verdicts() {
        let ext = line_ext(f3(), 1);
        let budget = EnumerationBudget::default();
        let sec = crate::extensions::canonical_section(&ext).unwrap();
        let context = crate::extensions::induced_representation(&ext, &sec).unwrap();
        let two = Matrix::from_i64(f3(), &[&[2]]);
        let zero = Matrix::zero(f3(), 1, 1);
        let one = Matrix::identity(f3(), 1);

        let obstructed = DerPair::new(&context, two, zero).unwrap();
        let report = derivation_lift_crosscheck(&ext, &obstructed, &budget).unwrap();
        assert_eq!(report.oracle_count, 0);
        assert!(!report.solver_positive);
        assert!(report.agree());

        let inducible = DerPair::new(&context, one.clone(), one).unwrap();
        let report = derivation_lift_crosscheck(&ext, &inducible, &budget).unwrap();
        assert_eq!(report.oracle_count, 3);
        assert!(report.solver_positive);
        assert!(report.agree());
    }

    #[test]
    fn split_crosscheck_agrees_on_both_verdicts() {
        let budget = EnumerationBudget::default();
        let split = split_section_crosscheck(&line_ext(f2(), 0), &budget).unwrap();
        assert_eq!(split.oracle_count, 2);
        assert!(split.solver_positive);
        assert!(split.agree());

        let non_split = split_section_crosscheck(&line_ext(f2(), 1), &budget).unwrap();
        assert_eq!(non_split.oracle_count, 0);
        assert!(!non_split.solver_positive);
        assert!(non_split.agree());
    }

    #[test]
    fn crosschecks_require_the_canonical_layout() {
        // Same ingredients as a canonical extension, but with the
        // kernel embedded first and the base projected from the second
        // coordinate.
        let field = f2();
        let total = NijenhuisLieAlgebra::new(
            LieAlgebra::abelian("t", field, 2),
            Matrix::zero(field, 2, 2),
        )
        .unwrap();
        let embedding = Matrix::from_i64(field, &[&[1], &[0]]);
        let projection = Matrix::from_i64(field, &[&[0, 1]]);
        let ext = Extension::new(
            total,
            line_nla(field),
            line_nla(field),
            embedding,
            projection,
        )
        .unwrap();
        let err = split_section_crosscheck(&ext, &EnumerationBudget::default());
        assert!(matches!(err, Err(Error::Invalid(_))));
    }
}
