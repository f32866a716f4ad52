//! Small helpers over `nalgebra` for dense complex matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C = Complex64;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Largest absolute entry of `a - b`; `f64::INFINITY` on shape mismatch.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_identity(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &identity(m.nrows())) <= tol
}

pub fn is_unitary(m: &CMat, tol: f64) -> bool {
    m.is_square() && is_identity(&(m.adjoint() * m), tol)
}

/// Block-diagonal sum of two matrices.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn direct_sum_vec(u: &CVec, v: &CVec) -> CVec {
    CVec::from_iterator(u.len() + v.len(), u.iter().chain(v.iter()).copied())
}

pub fn kron_vec(u: &CVec, v: &CVec) -> CVec {
    CVec::from_iterator(
        u.len() * v.len(),
        u.iter().flat_map(|a| v.iter().map(move |b| a * b)),
    )
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub fn eig_hermitian(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<CVec> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    (vals, CMat::from_columns(&cols))
}

/// Orthonormal basis of the null space of `a`, computed from the Gram
/// matrix `a* a`. Relations that hold exactly up to rounding sit many
/// orders below the smallest genuine singular value, so the squared
/// spectrum separates cleanly.
pub fn null_space(a: &CMat) -> Vec<CVec> {
    let gram = a.adjoint() * a;
    let (vals, vecs) = eig_hermitian(&gram);
    let max = vals.last().copied().unwrap_or(0.0).max(1.0);
    let cut = 1e-12 * max;
    vals.iter()
        .enumerate()
        .filter(|(_, &v)| v < cut)
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect()
}

/// Rank of `a` under the same Gram-spectrum cut as [`null_space`].
pub fn rank(a: &CMat) -> usize {
    a.ncols() - null_space(a).len()
}

pub fn is_invertible(a: &CMat) -> bool {
    a.is_square() && rank(a) == a.ncols()
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C::new(re, im)
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| random_complex(rng))
}

pub fn random_real_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| C::new(rng.sample(StandardNormal), 0.0))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Haar-ish random unitary: QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let qr = random_matrix(rng, n, n).qr();
    qr.q()
}
