//! Dense complex matrices and the spectral primitives the measures rest on.
//!
//! Bipartite index convention: the S factor is always the left tensor
//! factor, so the joint basis index of `|i>_S |j>_A` is `i * n + j` where
//! `n` is the dimension of A. [`joint_index`] is the only place that
//! arithmetic lives.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{DiscordError, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Joint index of `|i_s>_S ⊗ |j_a>_A` when A has dimension `n`.
#[inline]
pub fn joint_index(i_s: usize, j_a: usize, n: usize) -> usize {
    i_s * n + j_a
}

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "({:+.6}{:+.6}i) ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-square lengths
    /// and non-finite values.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(DiscordError::Shape {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(DiscordError::NonFinite {
                row: pos / dim,
                col: pos % dim,
            });
        }
        Ok(Self { dim, data })
    }

    /// Real-valued convenience constructor, row-major.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// `|v><v|` for a (not necessarily normalized) vector.
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = v[r] * v[c].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M - M†|` entrywise.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// Max-abs distance to another matrix of the same dimension.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_same_dim(self, other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "apply: vector length mismatch");
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// `<v|M|v>`, real part only (exact for Hermitian M).
    pub fn expectation(&self, v: &[C64]) -> f64 {
        let n = self.dim;
        let mut acc = ZERO;
        for r in 0..n {
            let mut row = ZERO;
            for c in 0..n {
                row += self.data[r * n + c] * v[c];
            }
            acc += v[r].conj() * row;
        }
        acc.re
    }

    /// Symmetrized copy `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let mut out = self.clone();
        for r in 0..self.dim {
            for c in r..self.dim {
                let z = (self[(r, c)] + self[(c, r)].conj()) * 0.5;
                out[(r, c)] = z;
                out[(c, r)] = z.conj();
            }
        }
        out
    }
}

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(DiscordError::Dimension {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix add on mismatched dims");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sub on mismatched dims");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product on mismatched dims")
    }
}

/// Kronecker product `a ⊗ b` with `a` as the left (S) factor.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(m * n);
    for i in 0..m {
        for j in 0..m {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    out[(joint_index(i, k, n), joint_index(j, l, n))] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors, S factor on the left.
pub fn tensor_vector(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

fn check_split(rho: &ComplexMatrix, m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 || m * n != rho.dim {
        return Err(DiscordError::BadSplit { m, n, dim: rho.dim });
    }
    Ok(())
}

/// Traces out A (the right factor), leaving the `m x m` state of S.
pub fn partial_trace_a(rho: &ComplexMatrix, m: usize, n: usize) -> Result<ComplexMatrix> {
    check_split(rho, m, n)?;
    let mut out = ComplexMatrix::zeros(m);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = (0..n)
                .map(|k| rho[(joint_index(i, k, n), joint_index(j, k, n))])
                .sum();
        }
    }
    Ok(out)
}

/// Traces out S (the left factor), leaving the `n x n` state of A.
pub fn partial_trace_s(rho: &ComplexMatrix, m: usize, n: usize) -> Result<ComplexMatrix> {
    check_split(rho, m, n)?;
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..n {
        for l in 0..n {
            out[(k, l)] = (0..m)
                .map(|i| rho[(joint_index(i, k, n), joint_index(i, l, n))])
                .sum();
        }
    }
    Ok(out)
}

/// Partial transpose on the A factor.
pub fn partial_transpose_a(rho: &ComplexMatrix, m: usize, n: usize) -> Result<ComplexMatrix> {
    check_split(rho, m, n)?;
    let mut out = ComplexMatrix::zeros(m * n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    out[(joint_index(i, k, n), joint_index(j, l, n))] =
                        rho[(joint_index(i, l, n), joint_index(j, k, n))];
                }
            }
        }
    }
    Ok(out)
}

/// Reorders an `m x n` bipartite operator into the `n x m` operator with the
/// factors exchanged.
pub fn swap_subsystems(rho: &ComplexMatrix, m: usize, n: usize) -> Result<ComplexMatrix> {
    check_split(rho, m, n)?;
    let mut out = ComplexMatrix::zeros(m * n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    out[(joint_index(k, i, m), joint_index(l, j, m))] =
                        rho[(joint_index(i, k, n), joint_index(j, l, n))];
                }
            }
        }
    }
    Ok(out)
}

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    Ok(&ab - &ba)
}

/// Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-9;
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) with orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<C64>>,
}

impl SpectralDecomposition {
    /// `Σ λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(dim);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for r in 0..dim {
                for c in 0..dim {
                    out[(r, c)] += v[r] * v[c].conj() * *lambda;
                }
            }
        }
        out
    }

    /// Max-abs deviation of `V†V` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let dim = self.eigenvalues.len();
        let mut err: f64 = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                let ip: C64 = (0..dim)
                    .map(|r| self.eigenvectors[a][r].conj() * self.eigenvectors[b][r])
                    .sum();
                let target = if a == b { ONE } else { ZERO };
                err = err.max((ip - target).norm());
            }
        }
        err
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back in descending order. Each eigenvector's phase is
/// fixed so that its first component with modulus above 1e-12 is real and
/// positive, which makes the output a deterministic function of the input.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(DiscordError::NotHermitian { deviation });
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<C64> = (0..n).map(|r| v[(r, k)]).collect();
            fix_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    // Stable sort keeps the sweep order for exact ties.
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, descending. Closed form for dimensions 1 and 2.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    match m.dim {
        1 => Ok(vec![m[(0, 0)].re]),
        2 => {
            let deviation = m.hermitian_deviation();
            if deviation > HERMITIAN_TOL {
                return Err(DiscordError::NotHermitian { deviation });
            }
            Ok(eigenvalues_2x2(m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]).to_vec())
        }
        _ => Ok(hermitian_eigendecomposition(m)?.eigenvalues),
    }
}

#[inline]
pub(crate) fn eigenvalues_2x2(a: f64, d: f64, b: C64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = (half * half + b.norm_sqr()).sqrt();
    [mean + r, mean - r]
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += a[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.dim;
    // A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A <- J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    // V <- V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Rotates a vector's global phase so its first non-negligible component is
/// real and positive.
pub(crate) fn fix_phase(v: &mut [C64]) {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-12) {
        let rot = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
}
