//! Dense exact linear algebra over `Scalar`.
//!
//! Matrices are row-major. A matrix used as a linear map sends the j-th
//! basis vector of the domain to its j-th column, so `rows` is the
//! codomain dimension and `cols` the domain dimension.
//!
//! Subspaces are stored in a reduced echelon form keyed on each basis
//! vector's *last* nonzero coordinate (its pivot): pivots are 1, strictly
//! increasing across the basis, and zero in every other basis vector.
//! This is the reduced row-echelon form under coordinate reversal, hence
//! unique per subspace; kernels computed by back-substitution land in it
//! without further work, e.g. kernel [[1,2],[2,4]] over Q has canonical
//! basis {(-2, 1)}.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Dense matrix with a field tag (meaningful even when empty).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

/// A matrix in map position: column j is the image of basis vector j.
pub type LinearMap = Matrix;

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::FieldMismatch(format!(
                        "entry in {} inside a {} matrix",
                        s.field(),
                        field
                    )));
                }
                entries.push(s.clone());
            }
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            field,
            entries,
        })
    }

    pub fn from_cols(field: Field, ambient_rows: usize, cols: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let c = cols.len();
        let mut m = Matrix::zero(field, ambient_rows, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != ambient_rows {
                return Err(Error::DimensionMismatch("column of wrong height".into()));
            }
            for (i, s) in col.iter().enumerate() {
                if s.field() != field {
                    return Err(Error::FieldMismatch("column entry field".into()));
                }
                m.set(i, j, s.clone());
            }
        }
        Ok(m)
    }

    /// Integer literal convenience, mostly for tests and catalog data.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&n| Scalar::from_integer(field, n)).collect())
            .collect();
        Matrix::from_rows(field, data).expect("literal rows are rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for i in 0..self.entries.len() {
            m.entries[i] = &self.entries[i] + &other.entries[i];
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = -&*e;
        }
        m
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = &*e * s;
        }
        m
    }

    /// Matrix product; as maps, `a.mul(b)` is "apply b, then a".
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut m = Matrix::zero(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = a * other.get(k, c);
                    m.set(r, c, &add + m.get(r, c));
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let mut out = vzero(self.field, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if !a.is_zero() {
                    out[r] = &out[r] + &(a * &v[c]);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert_eq!(self.rows, self.cols, "power of a square matrix");
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Kronecker product; tensor index (i, j) flattens to i * other_dim + j.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zero(self.field, self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let v = a * other.get(i2, j2);
                        m.set(i1 * other.rows + i2, j1 * other.cols + j2, v);
                    }
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.field, self.rows)
    }

    pub fn rank(&self) -> usize {
        let (_, pivots) = rref_rows(self.to_row_vecs());
        pivots.len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        // Gauss-Jordan on [self | I].
        let mut aug: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row = self.row(r);
                for c in 0..n {
                    row.push(if r == c {
                        self.field.one()
                    } else {
                        self.field.zero()
                    });
                }
                row
            })
            .collect();
        let (reduced, pivots) = rref_rows(std::mem::take(&mut aug));
        if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let inv_rows: Vec<Vec<Scalar>> = reduced.iter().take(n).map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_rows(self.field, inv_rows).expect("square inverse rows"))
    }

    /// Row-major flattening; entry (r, c) lands at index r * cols + c.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    pub fn from_flat(field: Field, rows: usize, cols: usize, flat: Vec<Scalar>) -> Matrix {
        assert_eq!(flat.len(), rows * cols, "flat data length");
        Matrix {
            rows,
            cols,
            field,
            entries: flat,
        }
    }

    fn to_row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// ---- vector helpers ----

pub fn vzero(field: Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn vadd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vneg(a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| -x).collect()
}

pub fn vscale(s: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| s * x).collect()
}

pub fn v_is_zero(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

/// Standard basis vector e_i (0-indexed).
pub fn vunit(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vzero(field, n);
    v[i] = field.one();
    v
}

// ---- row reduction ----

/// Reduced row-echelon form with leftmost pivots. Returns the reduced
/// rows and the pivot column of each nonzero row, in order.
fn rref_rows(mut rows: Vec<Vec<Scalar>>) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = rows[rank][col].inverse().expect("pivot nonzero");
        for c in col..ncols {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let sub = &factor * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &sub;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    (rows, pivots)
}

// ---- subspaces ----

/// A linear subspace held in canonical reduced echelon form (see module
/// docs). Canonicalization is idempotent, so equality of subspaces is
/// equality of their basis data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    field: Field,
    // Each basis vector's pivot (last nonzero coordinate) is 1; pivot
    // positions strictly increase and are zero in the other vectors.
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            field,
            basis: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Subspace {
        Subspace::from_spanning(
            field,
            ambient_dim,
            (0..ambient_dim)
                .map(|i| vunit(field, ambient_dim, i))
                .collect(),
        )
    }

    pub fn from_spanning(field: Field, ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Subspace {
        let mut sub = Subspace::zero(field, ambient_dim);
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "spanning vector length");
            sub.insert(v);
        }
        sub
    }

    /// Columns of `m` span the subspace.
    pub fn from_image(m: &Matrix) -> Subspace {
        Subspace::from_spanning(
            m.field(),
            m.rows(),
            (0..m.cols()).map(|j| m.col(j)).collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Basis vectors as the columns of an ambient x dim matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_cols(self.field, self.ambient_dim, self.basis.clone())
            .expect("canonical basis columns")
    }

    fn pivot(v: &[Scalar]) -> Option<usize> {
        (0..v.len()).rev().find(|&i| !v[i].is_zero())
    }

    /// Reduce `v` modulo the current basis; the residual is zero exactly
    /// when v lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for b in &self.basis {
            let p = Self::pivot(b).expect("basis vectors are nonzero");
            if !v[p].is_zero() {
                let coeff = v[p].clone();
                v = vsub(&v, &vscale(&coeff, b));
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient_dim && v_is_zero(&self.reduce(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.contains(b))
    }

    /// Insert one vector, keeping the canonical form. Returns true when
    /// the dimension grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut v = self.reduce(&v);
        let Some(p) = Self::pivot(&v) else {
            return false;
        };
        let inv = v[p].inverse().expect("pivot nonzero");
        v = vscale(&inv, &v);
        for b in &mut self.basis {
            if !b[p].is_zero() {
                let coeff = b[p].clone();
                *b = vsub(b, &vscale(&coeff, &v));
            }
        }
        let at = self
            .basis
            .iter()
            .position(|b| Self::pivot(b).expect("nonzero") > p)
            .unwrap_or(self.basis.len());
        self.basis.insert(at, v);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut s = self.clone();
        for b in &other.basis {
            s.insert(b.clone());
        }
        s
    }

    /// Vectors lying in both subspaces, via the kernel of the stacked
    /// coordinate equations (Zassenhaus would also do; dims are small).
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        // Solve a*x = b*y: kernel of [A | -B], read off the A-part.
        let a = self.basis_matrix();
        let b = other.basis_matrix();
        let mut rows = Vec::with_capacity(self.ambient_dim);
        for r in 0..self.ambient_dim {
            let mut row = a.row(r);
            row.extend(vneg(&b.row(r)));
            rows.push(row);
        }
        let stacked = Matrix::from_rows(self.field, rows).expect("stacked rows");
        let ker = kernel(&stacked);
        let vectors = ker
            .basis()
            .iter()
            .map(|t| a.mul_vec(&t[..self.dim()]))
            .collect();
        Subspace::from_spanning(self.field, self.ambient_dim, vectors)
    }
}

// ---- solving ----

/// Solution set of a linear system A x = b.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AffineSolution {
    Empty,
    Solutions {
        /// The echelon solution with every free variable set to zero.
        particular: Vec<Scalar>,
        kernel: Subspace,
    },
}

impl AffineSolution {
    pub fn is_empty(&self) -> bool {
        matches!(self, AffineSolution::Empty)
    }

    pub fn particular(&self) -> Option<&Vec<Scalar>> {
        match self {
            AffineSolution::Empty => None,
            AffineSolution::Solutions { particular, .. } => Some(particular),
        }
    }
}

/// Solve A x = b exactly. The kernel comes out in canonical form.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<AffineSolution> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has {}",
            a.rows(),
            b.len()
        )));
    }
    if b.iter().any(|s| s.field() != a.field()) {
        return Err(Error::FieldMismatch("right-hand side field".into()));
    }
    let n = a.cols();
    let mut aug: Vec<Vec<Scalar>> = (0..a.rows())
        .map(|r| {
            let mut row = a.row(r);
            row.push(b[r].clone());
            row
        })
        .collect();
    let (reduced, pivots) = rref_rows(std::mem::take(&mut aug));
    if pivots.contains(&n) {
        return Ok(AffineSolution::Empty);
    }
    let mut particular = vzero(a.field(), n);
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = reduced[row][n].clone();
    }
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; n];
        for &p in &pivots {
            s[p] = true;
        }
        s
    };
    let mut kernel_basis = Vec::new();
    for f in (0..n).filter(|&c| !pivot_set[c]) {
        let mut v = vzero(a.field(), n);
        v[f] = a.field().one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -&reduced[row][f];
        }
        kernel_basis.push(v);
    }
    Ok(AffineSolution::Solutions {
        particular,
        kernel: Subspace::from_spanning(a.field(), n, kernel_basis),
    })
}

/// Kernel of A as a canonical subspace of the domain.
pub fn kernel(a: &Matrix) -> Subspace {
    match solve(a, &vzero(a.field(), a.rows())).expect("homogeneous shape") {
        AffineSolution::Solutions { kernel, .. } => kernel,
        AffineSolution::Empty => unreachable!("homogeneous systems are consistent"),
    }
}

/// Unique solution of A x = v when one exists and A is injective.
pub fn solve_unique(a: &Matrix, v: &[Scalar]) -> Result<Vec<Scalar>> {
    match solve(a, v)? {
        AffineSolution::Empty => Err(Error::Invalid("inconsistent system".into())),
        AffineSolution::Solutions { particular, kernel } => {
            if kernel.dim() != 0 {
                return Err(Error::Invalid("system is underdetermined".into()));
            }
            Ok(particular)
        }
    }
}

/// Dimension of z/b together with a deterministic list of coset
/// representatives: the residuals of z's canonical basis that are
/// independent modulo b, each in canonical reduced form.
pub fn quotient_dim(z: &Subspace, b: &Subspace) -> Result<(usize, Vec<Vec<Scalar>>)> {
    if z.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch(
            "quotient ambient dims differ".into(),
        ));
    }
    if z.field() != b.field() {
        return Err(Error::FieldMismatch("quotient fields differ".into()));
    }
    if !b.is_subspace_of(z) {
        return Err(Error::Invalid(
            "denominator is not a subspace of numerator".into(),
        ));
    }
    let mut acc = b.clone();
    let mut reps = Vec::new();
    for v in z.basis() {
        let r = acc.reduce(v);
        if let Some(p) = (0..r.len()).rev().find(|&i| !r[i].is_zero()) {
            let inv = r[p].inverse().expect("pivot nonzero");
            let rn = vscale(&inv, &r);
            reps.push(rn.clone());
            acc.insert(rn);
        }
    }
    debug_assert_eq!(acc.dim(), z.dim(), "representatives complete the basis");
    Ok((z.dim() - b.dim(), reps))
}
