//! Dense complex linear algebra with the block conventions used for the
//! coupling, Itô and scattering matrices.
//!
//! Everything here is small and dense. The only heavy routine is the SVD,
//! which is delegated to `nalgebra`; inversion is a plain partially pivoted
//! Gauss-Jordan so that singularity can be reported against an explicit
//! relative threshold.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Default tolerance for hermiticity checks, relative to the largest entry.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Default singular-value cut for null spaces, relative to `σ_max`.
pub const NULL_SPACE_TOL: f64 = 1e-9;
/// Relative pivot threshold below which an inversion is declared singular.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: max |A - A†| = {defect:e} exceeds {tol:e}")]
    NonHermitianInput { defect: f64, tol: f64 },
    #[error("ambient dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected a {expected}x{expected} matrix for m = {m}, n = {n}, got {rows}x{cols}")]
    SizeMismatch {
        expected: usize,
        m: usize,
        n: usize,
        rows: usize,
        cols: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular at pivot {pivot} (|pivot| = {magnitude:e})")]
    Singular { pivot: usize, magnitude: f64 },
    #[error("principal angles need two nonempty subspaces")]
    EmptySubspace,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim, dim);
        for k in 0..dim {
            out[(k, k)] = ONE;
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut out = Self::zeros(entries.len(), entries.len());
        for (k, &z) in entries.iter().enumerate() {
            out[(k, k)] = z;
        }
        out
    }

    pub fn scalar(z: C64) -> Self {
        Self::diag(&[z])
    }

    pub fn column(entries: &[C64]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col_vec(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * z).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |A - A†|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Fails with [`LinalgError::NonHermitianInput`] when `max |A - A†|`
    /// exceeds `tol` times the largest entry.
    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(LinalgError::Shape(format!(
                "hermiticity needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let defect = self.hermiticity_defect();
        let bound = tol * self.max_abs();
        if defect > bound {
            return Err(LinalgError::NonHermitianInput { defect, tol: bound });
        }
        Ok(())
    }

    /// Largest entrywise distance to `other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance to the identity.
    pub fn identity_defect(&self) -> f64 {
        assert!(self.is_square());
        self.max_diff(&Self::identity(self.rows))
    }

    /// Unitarity defect `max(|U†U - 1|, |UU† - 1|)`.
    pub fn unitarity_defect(&self) -> f64 {
        let a = self.adjoint();
        (&a * self)
            .identity_defect()
            .max((self * &a).identity_defect())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)];
            }
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[Self]) -> Result<Self> {
        let cols = parts.first().map_or(0, |p| p.cols);
        if parts.iter().any(|p| p.cols != cols) {
            return Err(LinalgError::Shape("vstack with unequal column counts".into()));
        }
        let rows = parts.iter().map(|p| p.rows).sum();
        let data = parts.iter().flat_map(|p| p.data.iter().copied()).collect();
        Ok(Self { rows, cols, data })
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// A pivot smaller than `rel_tol * max|A|` is reported as
    /// [`LinalgError::Singular`] instead of being divided through.
    pub fn inverse_with_tol(&self, rel_tol: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(LinalgError::Shape(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let threshold = rel_tol * self.max_abs();
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let (pivot_row, magnitude) = (col..n)
                .map(|r| (r, a[(r, col)].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if magnitude <= threshold || magnitude == 0.0 {
                return Err(LinalgError::Singular {
                    pivot: col,
                    magnitude,
                });
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let p = a[(col, col)].inv();
            for c in 0..n {
                a[(col, c)] *= p;
                inv[(col, c)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)];
                if factor == ZERO {
                    continue;
                }
                for c in 0..n {
                    let (ac, ic) = (a[(col, c)], inv[(col, c)]);
                    a[(r, c)] -= factor * ac;
                    inv[(r, c)] -= factor * ic;
                }
            }
        }
        Ok(inv)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_tol(PIVOT_TOL)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

/// Cayley transform `(1 - i·scale·A)(1 + i·scale·A)^{-1}` of a Hermitian `A`.
///
/// With `scale = 1/2` this is the boundary phase of a point interaction of
/// strength `A`.
pub fn cayley(a: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    cayley_with_tol(a, scale, HERMITICITY_TOL)
}

pub fn cayley_with_tol(a: &ComplexMatrix, scale: f64, herm_tol: f64) -> Result<ComplexMatrix> {
    a.check_hermitian(herm_tol)?;
    let one = ComplexMatrix::identity(a.rows());
    let isa = a.scale(C64::new(0.0, scale));
    let denominator = (&one + &isa).inverse()?;
    Ok(&(&one - &isa) * &denominator)
}

/// Orthonormal basis of a subspace of `C^ambient`, stored as the columns
/// of an `ambient x dim` matrix.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    basis: ComplexMatrix,
    tol: f64,
}

impl SubspaceBasis {
    pub fn empty(ambient: usize, tol: f64) -> Self {
        Self {
            basis: ComplexMatrix::zeros(ambient, 0),
            tol,
        }
    }

    /// Orthonormal basis of the column span of `vectors`, dropping
    /// directions with singular value below `tol·σ_max`.
    pub fn span(vectors: &ComplexMatrix, tol: f64) -> Self {
        let ambient = vectors.rows();
        if vectors.cols() == 0 || ambient == 0 {
            return Self::empty(ambient, tol);
        }
        let svd = vectors.to_nalgebra().svd(true, false);
        let u = svd.u.expect("requested U");
        let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
        if sigma_max == 0.0 {
            return Self::empty(ambient, tol);
        }
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&k| svd.singular_values[k] > tol * sigma_max)
            .collect();
        let basis = ComplexMatrix::from_fn(ambient, keep.len(), |r, c| u[(r, keep[c])]);
        Self { basis, tol }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.basis.col_vec(k)
    }

    /// `basis · coefficients`.
    pub fn combine(&self, coefficients: &[C64]) -> Vec<C64> {
        self.basis.mul_vec(coefficients)
    }

    /// `max |B†B - 1|`.
    pub fn orthonormality_defect(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        (&self.basis.adjoint() * &self.basis).identity_defect()
    }
}

/// Orthonormal basis of `{v : ‖Mv‖ ≤ tol·‖M‖·‖v‖}` by singular-value
/// thresholding. An empty basis is a valid answer.
///
/// Zero rows and zero columns are split off before the SVD: they change
/// neither `σ_max` nor the nonzero singular values, and a zero column `c`
/// contributes the unit vector `e_c` to the kernel exactly.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> SubspaceBasis {
    let cols = m.cols();
    if cols == 0 {
        return SubspaceBasis::empty(0, tol);
    }
    let live_rows: Vec<usize> = (0..m.rows())
        .filter(|&r| m.row(r).iter().any(|z| *z != ZERO))
        .collect();
    let live_cols: Vec<usize> = (0..cols)
        .filter(|&c| live_rows.iter().any(|&r| m[(r, c)] != ZERO))
        .collect();
    let dead_cols: Vec<usize> = (0..cols)
        .filter(|c| live_cols.binary_search(c).is_err())
        .collect();

    let mut vectors: Vec<Vec<C64>> = Vec::new();
    if !live_cols.is_empty() {
        let k = live_cols.len();
        // The SVD only returns a full right factor for tall input.
        let mut padded = ComplexMatrix::zeros(live_rows.len().max(k), k);
        for (i, &r) in live_rows.iter().enumerate() {
            for (j, &c) in live_cols.iter().enumerate() {
                padded[(i, j)] = m[(r, c)];
            }
        }
        let svd = padded.to_nalgebra().svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let sigma = &svd.singular_values;
        let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
        for idx in (0..sigma.len()).filter(|&i| sigma[i] <= tol * sigma_max) {
            let mut v = vec![ZERO; cols];
            for (j, &c) in live_cols.iter().enumerate() {
                v[c] = v_t[(idx, j)].conj();
            }
            vectors.push(v);
        }
    }
    for &c in &dead_cols {
        let mut v = vec![ZERO; cols];
        v[c] = ONE;
        vectors.push(v);
    }
    let basis = ComplexMatrix::from_fn(cols, vectors.len(), |r, c| vectors[c][r]);
    SubspaceBasis { basis, tol }
}

fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    m.to_nalgebra().singular_values().iter().copied().collect()
}

/// Principal angles between two subspaces, ascending, in `[0, π/2]`.
///
/// Cosines come from the singular values of `U†W`, sines from those of
/// `(1 - UU†)W`; each angle is taken from whichever is better conditioned,
/// so nearly equal subspaces resolve angles well below `sqrt(ε)`.
pub fn principal_angles(u: &SubspaceBasis, w: &SubspaceBasis) -> Result<Vec<f64>> {
    if u.ambient_dim() != w.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            left: u.ambient_dim(),
            right: w.ambient_dim(),
        });
    }
    if u.is_empty() || w.is_empty() {
        return Err(LinalgError::EmptySubspace);
    }
    let (big, small) = if u.dim() >= w.dim() { (u, w) } else { (w, u) };
    let overlap = &big.matrix().adjoint() * small.matrix();
    let residual = small.matrix() - &(big.matrix() * &overlap);

    let mut cosines = singular_values(&overlap);
    cosines.sort_by(|a, b| b.total_cmp(a));
    let mut sines = singular_values(&residual);
    sines.sort_by(f64::total_cmp);

    let k = small.dim();
    let mut angles: Vec<f64> = (0..k)
        .map(|i| {
            let c = cosines.get(i).copied().unwrap_or(0.0).min(1.0);
            let s = sines.get(i).copied().unwrap_or(0.0).min(1.0);
            if c * c >= 0.5 {
                s.asin()
            } else {
                c.acos()
            }
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Largest principal angle, or `π/2` when the dimensions differ (the
/// larger subspace then has a direction orthogonal to the smaller one).
/// Two empty subspaces are at distance zero.
pub fn subspace_gap(u: &SubspaceBasis, w: &SubspaceBasis) -> Result<f64> {
    if u.ambient_dim() != w.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            left: u.ambient_dim(),
            right: w.ambient_dim(),
        });
    }
    if u.dim() != w.dim() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    if u.is_empty() {
        return Ok(0.0);
    }
    Ok(principal_angles(u, w)?.into_iter().fold(0.0, f64::max))
}

/// Square matrix on `(C ⊕ K) ⊗ h` with `dim h = m`, `dim K = n`, split into
/// the system block `X₀₀` (m×m), the row `X₀ℓ` (m×nm), the column `Xℓ₀`
/// (nm×m) and the channel block `Xℓℓ` (nm×nm).
///
/// Indices run as `α·m + i` with `α = 0..=n` the channel label (0 for the
/// system row) and `i` the system index.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperatorMatrix {
    m: usize,
    n: usize,
    full: ComplexMatrix,
}

impl BlockOperatorMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> &ComplexMatrix {
        &self.full
    }

    pub fn into_full(self) -> ComplexMatrix {
        self.full
    }

    pub fn dim(&self) -> usize {
        (1 + self.n) * self.m
    }

    pub fn x00(&self) -> ComplexMatrix {
        self.full.block(0, 0, self.m, self.m)
    }

    pub fn x0l(&self) -> ComplexMatrix {
        self.full.block(0, self.m, self.m, self.n * self.m)
    }

    pub fn xl0(&self) -> ComplexMatrix {
        self.full.block(self.m, 0, self.n * self.m, self.m)
    }

    pub fn xll(&self) -> ComplexMatrix {
        let nm = self.n * self.m;
        self.full.block(self.m, self.m, nm, nm)
    }

    /// The `m×m` operator `X_{αβ}` for channel labels `α, β ∈ 0..=n`.
    pub fn entry(&self, alpha: usize, beta: usize) -> ComplexMatrix {
        self.full
            .block(alpha * self.m, beta * self.m, self.m, self.m)
    }

    pub fn from_blocks(
        x00: &ComplexMatrix,
        x0l: &ComplexMatrix,
        xl0: &ComplexMatrix,
        xll: &ComplexMatrix,
    ) -> Result<Self> {
        let m = x00.rows();
        if m == 0 || !x00.is_square() || xll.rows() % m != 0 {
            return Err(LinalgError::Shape("inconsistent block sizes".into()));
        }
        let nm = xll.rows();
        let shapes_ok = xll.cols() == nm
            && (x0l.rows(), x0l.cols()) == (m, nm)
            && (xl0.rows(), xl0.cols()) == (nm, m);
        if !shapes_ok {
            return Err(LinalgError::Shape("inconsistent block sizes".into()));
        }
        let mut full = ComplexMatrix::zeros(m + nm, m + nm);
        full.set_block(0, 0, x00);
        full.set_block(0, m, x0l);
        full.set_block(m, 0, xl0);
        full.set_block(m, m, xll);
        Ok(Self {
            m,
            n: nm / m,
            full,
        })
    }

    /// Identity on `(C ⊕ K) ⊗ h`.
    pub fn identity(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            full: ComplexMatrix::identity((1 + n) * m),
        }
    }

    /// The projector `Π` onto `K ⊗ h`; its entries are the Evans-Hudson delta.
    pub fn channel_projector(m: usize, n: usize) -> Self {
        let dim = (1 + n) * m;
        Self {
            m,
            n,
            full: ComplexMatrix::from_fn(dim, dim, |r, c| {
                if r == c && r >= m {
                    ONE
                } else {
                    ZERO
                }
            }),
        }
    }

    /// Embeds an `nm×nm` channel-block matrix with zero system row/column.
    pub fn channel_embedding(m: usize, xll: &ComplexMatrix) -> Result<Self> {
        let nm = xll.rows();
        Self::from_blocks(
            &ComplexMatrix::zeros(m, m),
            &ComplexMatrix::zeros(m, nm),
            &ComplexMatrix::zeros(nm, m),
            xll,
        )
    }
}

/// Splits a `(1+n)m` square matrix into its blocks.
pub fn partition(full: &ComplexMatrix, m: usize, n: usize) -> Result<BlockOperatorMatrix> {
    let expected = (1 + n) * m;
    if m == 0 || full.rows() != expected || full.cols() != expected {
        return Err(LinalgError::SizeMismatch {
            expected,
            m,
            n,
            rows: full.rows(),
            cols: full.cols(),
        });
    }
    Ok(BlockOperatorMatrix {
        m,
        n,
        full: full.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn e(k: usize, dim: usize) -> Vec<C64> {
        (0..dim).map(|j| if j == k { ONE } else { ZERO }).collect()
    }

    fn span_of(vs: &[Vec<C64>]) -> SubspaceBasis {
        let m = ComplexMatrix::from_fn(vs[0].len(), vs.len(), |r, c| vs[c][r]);
        SubspaceBasis::span(&m, NULL_SPACE_TOL)
    }

    #[test]
    fn cayley_of_zero_is_identity() {
        for dim in [1, 3, 7] {
            let u = cayley(&ComplexMatrix::zeros(dim, dim), 0.5).unwrap();
            assert_eq!(u, ComplexMatrix::identity(dim));
        }
    }

    #[test]
    fn cayley_of_two_is_minus_i() {
        // (1 - i)/(1 + i) = (1 - i)^2 / 2 = -i
        let oracle = c(1.0, -1.0) / c(1.0, 1.0);
        assert_eq!(oracle, c(0.0, -1.0));
        let u = cayley(&ComplexMatrix::scalar(c(2.0, 0.0)), 0.5).unwrap();
        assert!((u[(0, 0)] - oracle).norm() < 1e-15);
    }

    #[test]
    fn cayley_of_pi_has_closed_form_argument() {
        let u = cayley(&ComplexMatrix::scalar(c(PI, 0.0)), 0.5).unwrap()[(0, 0)];
        assert!((u.norm() - 1.0).abs() < 1e-15);
        // arg = -2 atan(pi/2) = -2.0078... lies below -pi/2, still inside (-pi, pi]
        let expected = -2.0 * (PI / 2.0).atan();
        assert!((u.arg() - expected).abs() < 1e-14);
    }

    #[test]
    fn cayley_rejects_non_hermitian() {
        let a = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(
            cayley(&a, 0.5),
            Err(LinalgError::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn null_space_of_identity_is_empty() {
        assert!(null_space(&ComplexMatrix::identity(4), NULL_SPACE_TOL).is_empty());
    }

    #[test]
    fn null_space_of_zero_is_everything() {
        let ns = null_space(&ComplexMatrix::zeros(3, 3), NULL_SPACE_TOL);
        assert_eq!(ns.dim(), 3);
        assert!(ns.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn null_space_of_diagonal_picks_zero_entry() {
        let m = ComplexMatrix::diag(&[ONE, ZERO, c(2.0, 0.0)]);
        let ns = null_space(&m, NULL_SPACE_TOL);
        assert_eq!(ns.dim(), 1);
        let v = ns.vector(0);
        assert!((v[1].norm() - 1.0).abs() < 1e-14);
        assert!(v[0].norm() < 1e-14 && v[2].norm() < 1e-14);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        // one equation, three unknowns
        let m = ComplexMatrix::from_rows(&[vec![ONE, I, ZERO]]).unwrap();
        let ns = null_space(&m, NULL_SPACE_TOL);
        assert_eq!(ns.dim(), 2);
        for k in 0..2 {
            assert!(m.mul_vec(&ns.vector(k))[0].norm() < 1e-14);
        }
    }

    #[test]
    fn principal_angles_examples() {
        let u = span_of(&[e(0, 2)]);
        assert!(principal_angles(&u, &u).unwrap()[0] <= 1e-15);
        let w = span_of(&[e(1, 2)]);
        assert!((principal_angles(&u, &w).unwrap()[0] - FRAC_PI_2).abs() < 1e-15);
        let s = 1.0 / 2f64.sqrt();
        let diag = span_of(&[vec![c(s, 0.0), c(s, 0.0)]]);
        // cos θ = 1/√2
        assert!((principal_angles(&u, &diag).unwrap()[0] - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn principal_angles_resolve_tiny_rotations() {
        let t: f64 = 1e-11;
        let u = span_of(&[e(0, 3)]);
        let w = span_of(&[vec![c(t.cos(), 0.0), c(t.sin(), 0.0), ZERO]]);
        let angle = principal_angles(&u, &w).unwrap()[0];
        assert!((angle - t).abs() < 1e-15, "angle = {angle:e}");
    }

    #[test]
    fn principal_angles_errors() {
        let u = span_of(&[e(0, 2)]);
        let w = span_of(&[e(0, 3)]);
        assert!(matches!(
            principal_angles(&u, &w),
            Err(LinalgError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            principal_angles(&u, &SubspaceBasis::empty(2, 1e-9)),
            Err(LinalgError::EmptySubspace)
        ));
    }

    #[test]
    fn partition_examples() {
        let id = partition(&ComplexMatrix::identity(2), 1, 1).unwrap();
        assert_eq!(id.x00(), ComplexMatrix::scalar(ONE));
        assert_eq!(id.x0l(), ComplexMatrix::scalar(ZERO));
        assert_eq!(id.xl0(), ComplexMatrix::scalar(ZERO));
        assert_eq!(id.xll(), ComplexMatrix::scalar(ONE));

        let pi = BlockOperatorMatrix::channel_projector(1, 2);
        assert_eq!(pi.x00(), ComplexMatrix::zeros(1, 1));
        assert_eq!(pi.xll(), ComplexMatrix::identity(2));
        assert_eq!(pi.x0l(), ComplexMatrix::zeros(1, 2));
        assert_eq!(pi.xl0(), ComplexMatrix::zeros(2, 1));

        let ones = ComplexMatrix::from_fn(3, 3, |_, _| ONE);
        let p = partition(&ones, 1, 2).unwrap();
        assert_eq!(p.xll(), ComplexMatrix::from_fn(2, 2, |_, _| ONE));

        assert!(matches!(
            partition(&ones, 2, 1),
            Err(LinalgError::SizeMismatch { expected: 4, .. })
        ));
    }

    #[test]
    fn projector_is_idempotent_and_hermitian() {
        let pi = BlockOperatorMatrix::channel_projector(2, 3).into_full();
        assert_eq!(&pi * &pi, pi);
        assert_eq!(pi.adjoint(), pi);
    }

    #[test]
    fn inverse_reports_singular_matrix() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(m.inverse(), Err(LinalgError::Singular { .. })));
    }

    #[test]
    fn kron_with_identity_places_blocks() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let k = ComplexMatrix::identity(2).kron(&a);
        assert_eq!(k.block(2, 2, 2, 2), a);
        assert_eq!(k.block(0, 2, 2, 2), ComplexMatrix::zeros(2, 2));
    }
}
