//! Ascending Laplacian eigenpairs.
//!
//! Closed forms cover path graphs and three-dimensional grids; everything else
//! goes through [`partial_eigensolve`], a Lanczos iteration with full
//! reorthogonalization that can be restarted against an already-computed
//! prefix ([`extend_basis`]). Every eigenvector is normalized so that its first
//! entry with magnitude above [`SIGN_THRESHOLD`] is positive.

use std::f64::consts::PI;
use std::io::{Read, Write};

use faer::linalg::matmul::matmul;
use faer::{Accum, ColMut, ColRef, Mat, MatRef, Par, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::SparseSymMatrix;
use crate::matrix::{axpy, dot, norm};

pub const SIGN_THRESHOLD: f64 = 1e-10;

/// Where a basis came from. Closed-form bases extend by re-evaluating the
/// formula; the others extend with deflated Lanczos.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSource {
    PathClosedForm,
    GridClosedForm { nx: usize, ny: usize, nt: usize },
    Iterative,
    Dense,
}

/// The `m` smallest eigenpairs of an `n`-vertex Laplacian, eigenvalues
/// ascending, eigenvectors stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    n: usize,
    eigenvalues: Vec<f64>,
    vectors: Vec<f64>,
    source: BasisSource,
}

impl SpectralBasis {
    pub fn from_parts(
        n: usize,
        eigenvalues: Vec<f64>,
        vectors: Vec<f64>,
        source: BasisSource,
    ) -> Result<Self> {
        if vectors.len() != n * eigenvalues.len() {
            return Err(Error::invalid(format!(
                "{} vector entries for n = {n}, m = {}",
                vectors.len(),
                eigenvalues.len()
            )));
        }
        if eigenvalues.len() > n {
            return Err(Error::invalid("more eigenpairs than dimensions"));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("eigenvalues must be ascending"));
        }
        Ok(SpectralBasis {
            n,
            eigenvalues,
            vectors,
            source,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored eigenpairs.
    #[inline]
    pub fn m(&self) -> usize {
        self.eigenvalues.len()
    }

    #[inline]
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    #[inline]
    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    #[inline]
    pub fn eigenvector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }

    pub fn source(&self) -> BasisSource {
        self.source
    }

    /// The first `m` pairs.
    pub fn prefix(&self, m: usize) -> Result<SpectralBasis> {
        if m > self.m() {
            return Err(Error::BasisExhausted {
                requested: m,
                available: self.m(),
            });
        }
        Ok(SpectralBasis {
            n: self.n,
            eigenvalues: self.eigenvalues[..m].to_vec(),
            vectors: self.vectors[..m * self.n].to_vec(),
            source: self.source,
        })
    }

    /// Coefficients `z . u_i` for `i < k`.
    pub fn project(&self, z: &[f64], k: usize) -> Vec<f64> {
        assert_eq!(z.len(), self.n);
        assert!(k <= self.m());
        let mut out = vec![0.0; k];
        if k > 0 {
            let u = MatRef::from_column_major_slice(&self.vectors[..k * self.n], self.n, k);
            matmul(
                ColMut::from_slice_mut(&mut out).as_mat_mut(),
                Accum::Replace,
                u.transpose(),
                ColRef::from_slice(z).as_mat(),
                1.0,
                Par::Seq,
            );
        }
        out
    }

    /// `f = sum_i g_i u_i` over the first `g.len()` eigenvectors.
    pub fn synthesize(&self, g: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; self.n];
        self.synthesize_into(g, &mut f);
        f
    }

    pub fn synthesize_into(&self, g: &[f64], f: &mut [f64]) {
        assert!(g.len() <= self.m());
        assert_eq!(f.len(), self.n);
        let k = g.len();
        if k == 0 {
            f.iter_mut().for_each(|x| *x = 0.0);
            return;
        }
        let u = MatRef::from_column_major_slice(&self.vectors[..k * self.n], self.n, k);
        matmul(
            ColMut::from_slice_mut(f).as_mat_mut(),
            Accum::Replace,
            u,
            ColRef::from_slice(g).as_mat(),
            1.0,
            Par::Seq,
        );
    }
}

/// `i`-th (0-based) eigenvalue of the `n`-vertex path Laplacian.
#[inline]
pub fn path_eigenvalue(n: usize, i: usize) -> f64 {
    let s = (PI * i as f64 / (2.0 * n as f64)).sin();
    4.0 * s * s
}

/// Entry `v` (0-based) of the `i`-th (0-based) unit path eigenvector,
/// `sqrt(2/n) cos(pi (v + 1/2) i / n)`, constant `1/sqrt(n)` for `i = 0`.
#[inline]
pub fn path_eigenvector_entry(n: usize, i: usize, v: usize) -> f64 {
    let nf = n as f64;
    if i == 0 {
        1.0 / nf.sqrt()
    } else {
        (2.0 / nf).sqrt() * (PI * (v as f64 + 0.5) * i as f64 / nf).cos()
    }
}

fn path_vector(n: usize, i: usize) -> Vec<f64> {
    (0..n).map(|v| path_eigenvector_entry(n, i, v)).collect()
}

/// First `m` eigenpairs of the `n`-vertex path in closed form.
pub fn path_eigenpairs(n: usize, m: usize) -> Result<SpectralBasis> {
    if n == 0 || m == 0 || m > n {
        return Err(Error::invalid(format!(
            "path eigenpairs need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let eigenvalues = (0..m).map(|i| path_eigenvalue(n, i)).collect();
    let mut vectors = Vec::with_capacity(n * m);
    for i in 0..m {
        vectors.extend(path_vector(n, i));
    }
    Ok(SpectralBasis {
        n,
        eigenvalues,
        vectors,
        source: BasisSource::PathClosedForm,
    })
}

/// First `m` eigenpairs of the `nx` x `ny` x `nt` grid (vertex order of
/// [`crate::graph::grid_index`]). Eigenvalues are sums of path eigenvalues
/// along each axis, eigenvectors the corresponding tensor products. Equal
/// sums are ordered by the axis indices `(i, j, k)` lexicographically.
pub fn grid3d_eigenpairs(nx: usize, ny: usize, nt: usize, m: usize) -> Result<SpectralBasis> {
    let n = nx * ny * nt;
    if n == 0 || m == 0 || m > n {
        return Err(Error::invalid(format!(
            "grid eigenpairs need positive dims and 1 <= m <= {n}, got m = {m}"
        )));
    }
    let lx: Vec<f64> = (0..nx).map(|i| path_eigenvalue(nx, i)).collect();
    let ly: Vec<f64> = (0..ny).map(|j| path_eigenvalue(ny, j)).collect();
    let lt: Vec<f64> = (0..nt).map(|k| path_eigenvalue(nt, k)).collect();
    let mut triples = Vec::with_capacity(n);
    for (i, a) in lx.iter().enumerate() {
        for (j, b) in ly.iter().enumerate() {
            for (k, c) in lt.iter().enumerate() {
                triples.push((a + b + c, i, j, k));
            }
        }
    }
    triples.sort_unstable_by(|p, q| {
        p.0.total_cmp(&q.0)
            .then(p.1.cmp(&q.1))
            .then(p.2.cmp(&q.2))
            .then(p.3.cmp(&q.3))
    });
    triples.truncate(m);

    let mut eigenvalues = Vec::with_capacity(m);
    let mut vectors = Vec::with_capacity(n * m);
    for &(val, i, j, k) in &triples {
        eigenvalues.push(val);
        let u = path_vector(nx, i);
        let v = path_vector(ny, j);
        let w = path_vector(nt, k);
        for wt in &w {
            for vr in &v {
                let s = wt * vr;
                vectors.extend(u.iter().map(|uc| s * uc));
            }
        }
    }
    Ok(SpectralBasis {
        n,
        eigenvalues,
        vectors,
        source: BasisSource::GridClosedForm { nx, ny, nt },
    })
}

/// Lower bound on the step cap, so tiny requests still reach convergence.
const MIN_STEPS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Bound on the Lanczos residual estimate `|beta_p s_{p,i}|` for every
    /// requested Ritz pair.
    pub tol: f64,
    /// Iteration cap is `max_iter_factor * m` Lanczos steps, at least 500 and
    /// never more than the free dimension, where the decomposition is exact.
    pub max_iter_factor: usize,
    /// Seed for the start vectors.
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-10,
            max_iter_factor: 100,
            seed: 0x1a9c_2f7e,
        }
    }
}

/// The `m` smallest eigenpairs of a symmetric positive semi-definite matrix.
pub fn partial_eigensolve(
    l: &SparseSymMatrix,
    m: usize,
    opts: &EigenOptions,
) -> Result<SpectralBasis> {
    let n = l.dim();
    if m == 0 || m > n {
        return Err(Error::invalid(format!(
            "partial eigensolve needs 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let empty = SpectralBasis {
        n,
        eigenvalues: Vec::new(),
        vectors: Vec::new(),
        source: BasisSource::Iterative,
    };
    extend_with_lanczos(&empty, l, m, opts)
}

/// Basis with `extra` more pairs. The existing pairs are copied bit-for-bit;
/// closed-form sources re-evaluate their formula, others run Lanczos on the
/// orthogonal complement of the existing eigenvectors.
pub fn extend_basis(
    basis: &SpectralBasis,
    l: &SparseSymMatrix,
    extra: usize,
    opts: &EigenOptions,
) -> Result<SpectralBasis> {
    if l.dim() != basis.n {
        return Err(Error::invalid(format!(
            "basis dimension {} does not match matrix dimension {}",
            basis.n,
            l.dim()
        )));
    }
    let target = basis.m() + extra;
    if target > basis.n {
        return Err(Error::invalid(format!(
            "cannot extend to {target} pairs in dimension {}",
            basis.n
        )));
    }
    if extra == 0 {
        return Ok(basis.clone());
    }
    let extended = match basis.source {
        BasisSource::PathClosedForm => path_eigenpairs(basis.n, target)?,
        BasisSource::GridClosedForm { nx, ny, nt } => grid3d_eigenpairs(nx, ny, nt, target)?,
        BasisSource::Iterative | BasisSource::Dense => {
            return extend_with_lanczos(basis, l, extra, opts)
        }
    };
    // Existing pairs are kept bit-for-bit; only the new tail is appended.
    let mut out = basis.clone();
    out.eigenvalues
        .extend_from_slice(&extended.eigenvalues[basis.m()..]);
    out.vectors
        .extend_from_slice(&extended.vectors[basis.m() * basis.n..]);
    Ok(out)
}

fn extend_with_lanczos(
    basis: &SpectralBasis,
    l: &SparseSymMatrix,
    want: usize,
    opts: &EigenOptions,
) -> Result<SpectralBasis> {
    let (vals, vecs) = lanczos_smallest(l, &basis.vectors, want, opts)?;
    let mut out = basis.clone();
    if out.source != BasisSource::Dense {
        out.source = BasisSource::Iterative;
    }
    for (val, vec) in vals.into_iter().zip(vecs) {
        // Rounding can put a new Ritz value a hair below the last locked one.
        let val = out.eigenvalues.last().map_or(val, |&last| val.max(last));
        out.eigenvalues.push(val);
        out.vectors.extend(vec);
    }
    Ok(out)
}

/// `w -= Q Q^T w` for the orthonormal columns of `q` (column-major, `n` rows);
/// returns `Q^T w`.
fn project_out(q: &[f64], n: usize, w: &mut [f64]) -> Mat<f64> {
    let cols = q.len() / n;
    let mut h = Mat::<f64>::zeros(cols, 1);
    if cols == 0 {
        return h;
    }
    let qm = MatRef::from_column_major_slice(q, n, cols);
    matmul(
        h.as_mut(),
        Accum::Replace,
        qm.transpose(),
        ColRef::from_slice(w).as_mat(),
        1.0,
        Par::Seq,
    );
    matmul(
        ColMut::from_slice_mut(w).as_mat_mut(),
        Accum::Add,
        qm,
        h.as_ref(),
        -1.0,
        Par::Seq,
    );
    h
}

/// Two passes of classical Gram–Schmidt against `locked` and `basis`.
/// Returns the total coefficient removed along basis column `focus`.
fn reorthogonalize(
    w: &mut [f64],
    n: usize,
    locked: &[f64],
    basis: &[f64],
    focus: Option<usize>,
) -> f64 {
    let mut focus_coef = 0.0;
    for _ in 0..2 {
        project_out(locked, n, w);
        let h = project_out(basis, n, w);
        if let Some(j) = focus {
            focus_coef += h[(j, 0)];
        }
    }
    focus_coef
}

fn random_unit_vector(
    n: usize,
    rng: &mut ChaCha8Rng,
    locked: &[f64],
    basis: &[f64],
) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        reorthogonalize(&mut w, n, locked, basis, None);
        let nw = norm(&w);
        if nw > 1e-8 {
            w.iter_mut().for_each(|x| *x /= nw);
            return Some(w);
        }
    }
    None
}

fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> Result<(Vec<f64>, Mat<f64>)> {
    let p = alpha.len();
    let t = Mat::<f64>::from_fn(p, p, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let evd = t
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::invalid(format!("tridiagonal eigensolve failed: {e:?}")))?;
    let vals = (0..p).map(|i| evd.S()[i]).collect();
    Ok((vals, evd.U().to_owned()))
}

/// Lanczos with full reorthogonalization for the `want` smallest eigenpairs of
/// `l` restricted to the orthogonal complement of `locked`.
fn lanczos_smallest(
    l: &SparseSymMatrix,
    locked: &[f64],
    want: usize,
    opts: &EigenOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = l.dim();
    let n_locked = locked.len() / n;
    let free = n - n_locked;
    if want > free {
        return Err(Error::invalid(format!(
            "requested {want} pairs but only {free} dimensions remain"
        )));
    }
    let max_steps = free.min(opts.max_iter_factor.saturating_mul(want).max(MIN_STEPS));
    let breakdown = 1e-12 * l.gershgorin_bound().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (n_locked as u64).rotate_left(17));

    // Lanczos vectors, column-major.
    let mut basis: Vec<f64> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut next_check = free.min((want + 20).max(2 * want));
    let mut w = vec![0.0; n];

    let first = random_unit_vector(n, &mut rng, locked, &basis)
        .ok_or_else(|| Error::invalid("could not draw a start vector in the free subspace"))?;
    basis.extend(first);

    loop {
        let p = basis.len() / n;
        let j = p - 1;
        let vj = &basis[j * n..p * n];
        l.matvec(vj, &mut w);
        let mut a = dot(vj, &w);
        axpy(-a, vj, &mut w);
        if j > 0 && beta[j - 1] != 0.0 {
            axpy(-beta[j - 1], &basis[(j - 1) * n..j * n], &mut w);
        }
        a += reorthogonalize(&mut w, n, locked, &basis, Some(j));
        alpha.push(a);
        let b = norm(&w);

        let exhausted = p == free;
        let invariant = b <= breakdown;
        beta.push(if invariant || exhausted { 0.0 } else { b });

        // An invariant Krylov space holds exact pairs, but possibly not the
        // smallest ones (repeated eigenvalues), so keep going in that case.
        if (p >= next_check || p >= max_steps) && !invariant || exhausted {
            let (theta, s) = tridiagonal_eigen(&alpha, &beta[..p - 1])?;
            let coupling = beta[p - 1];
            let resid: Vec<f64> = (0..want)
                .map(|i| (coupling * s[(p - 1, i)]).abs())
                .collect();
            let converged = resid.iter().take_while(|&&r| r <= opts.tol).count();
            if converged == want || exhausted {
                log::debug!("lanczos: {want} pairs after {p} steps");
                let v = MatRef::from_column_major_slice(&basis, n, p);
                let y = v * s.get(.., ..want);
                let vecs = (0..want)
                    .map(|i| {
                        let mut y: Vec<f64> = y.col(i).iter().copied().collect();
                        let ny = norm(&y);
                        y.iter_mut().for_each(|x| *x /= ny);
                        fix_sign(&mut y);
                        y
                    })
                    .collect();
                return Ok((theta[..want].to_vec(), vecs));
            }
            if p >= max_steps {
                return Err(Error::ConvergenceFailure {
                    requested: want,
                    converged,
                    iterations: p,
                    worst_residual: resid.iter().copied().fold(0.0, f64::max),
                });
            }
            next_check = free.min(p + (p / 4).max(10));
        }

        if invariant {
            // Krylov space is invariant: continue in a fresh direction.
            let fresh = random_unit_vector(n, &mut rng, locked, &basis)
                .ok_or_else(|| Error::invalid("free subspace exhausted before convergence"))?;
            basis.extend(fresh);
        } else {
            basis.extend(w.iter().map(|x| x / b));
        }
    }
}

/// All `n` eigenpairs from a dense symmetric eigensolver.
pub fn full_eigensolve(l: &SparseSymMatrix) -> Result<SpectralBasis> {
    let n = l.dim();
    let mut a = Mat::<f64>::zeros(n, n);
    for (i, &d) in l.diagonal().iter().enumerate() {
        a[(i, i)] = d;
    }
    for &(i, j, v) in l.off_diagonal() {
        a[(i, j)] = v;
        a[(j, i)] = v;
    }
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::invalid(format!("dense eigensolve failed: {e:?}")))?;
    let eigenvalues = (0..n).map(|i| evd.S()[i]).collect();
    let u = evd.U();
    let mut vectors = Vec::with_capacity(n * n);
    for j in 0..n {
        let mut col: Vec<f64> = (0..n).map(|i| u[(i, j)]).collect();
        fix_sign(&mut col);
        vectors.extend(col);
    }
    Ok(SpectralBasis {
        n,
        eigenvalues,
        vectors,
        source: BasisSource::Dense,
    })
}

/// Flips `v` so its first entry above [`SIGN_THRESHOLD`] in magnitude is positive.
pub fn fix_sign(v: &mut [f64]) {
    if let Some(&x) = v.iter().find(|x| x.abs() > SIGN_THRESHOLD) {
        if x < 0.0 {
            v.iter_mut().for_each(|y| *y = -*y);
        }
    }
}

/// `max_i || L u_i - lambda_i u_i ||_2`.
pub fn residual_check(basis: &SpectralBasis, l: &SparseSymMatrix) -> Result<f64> {
    if l.dim() != basis.n {
        return Err(Error::invalid(format!(
            "basis dimension {} does not match matrix dimension {}",
            basis.n,
            l.dim()
        )));
    }
    let mut lu = vec![0.0; basis.n];
    let mut worst: f64 = 0.0;
    for i in 0..basis.m() {
        let u = basis.eigenvector(i);
        l.matvec(u, &mut lu);
        axpy(-basis.eigenvalues[i], u, &mut lu);
        worst = worst.max(norm(&lu));
    }
    Ok(worst)
}

/// `max |U^T U - I|` over all entries.
pub fn orthonormality_error(basis: &SpectralBasis) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..basis.m() {
        for j in i..basis.m() {
            let d = dot(basis.eigenvector(i), basis.eigenvector(j));
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((d - target).abs());
        }
    }
    worst
}

const TAG_PATH: u8 = 0;
const TAG_GRID: u8 = 1;
const TAG_ITERATIVE: u8 = 2;
const TAG_DENSE: u8 = 3;

/// Binary cache layout, little-endian: `n: u64`, `m: u64`, source tag `u8`
/// (0 path, 1 grid, 2 iterative, 3 dense); grid bases follow the tag with
/// `nx, ny, nt: u64`. Then `m` eigenvalues as `f64` and the eigenvectors
/// column-major as `f64`.
pub fn write_basis<W: Write>(basis: &SpectralBasis, mut out: W) -> Result<()> {
    out.write_all(&(basis.n as u64).to_le_bytes())?;
    out.write_all(&(basis.m() as u64).to_le_bytes())?;
    match basis.source {
        BasisSource::PathClosedForm => out.write_all(&[TAG_PATH])?,
        BasisSource::GridClosedForm { nx, ny, nt } => {
            out.write_all(&[TAG_GRID])?;
            for d in [nx, ny, nt] {
                out.write_all(&(d as u64).to_le_bytes())?;
            }
        }
        BasisSource::Iterative => out.write_all(&[TAG_ITERATIVE])?,
        BasisSource::Dense => out.write_all(&[TAG_DENSE])?,
    }
    let mut buf = Vec::with_capacity(8 * (basis.m() + basis.vectors.len()));
    for x in basis.eigenvalues.iter().chain(&basis.vectors) {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

struct CountingReader<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> CountingReader<R> {
    fn read_array<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let mut b = [0u8; N];
        self.inner
            .read_exact(&mut b)
            .map_err(|_| Error::format(self.offset, format!("truncated while reading {what}")))?;
        self.offset += N as u64;
        Ok(b)
    }

    fn read_u64(&mut self, what: &str) -> Result<u64> {
        self.read_array::<8>(what).map(u64::from_le_bytes)
    }
}

pub fn read_basis<R: Read>(input: R) -> Result<SpectralBasis> {
    let mut r = CountingReader {
        inner: input,
        offset: 0,
    };
    let n = r.read_u64("dimension")? as usize;
    let m = r.read_u64("pair count")? as usize;
    if m > n {
        return Err(Error::format(
            8,
            format!("pair count {m} exceeds dimension {n}"),
        ));
    }
    let tag_offset = r.offset;
    let source = match r.read_array::<1>("source tag")?[0] {
        TAG_PATH => BasisSource::PathClosedForm,
        TAG_GRID => {
            let nx = r.read_u64("grid nx")? as usize;
            let ny = r.read_u64("grid ny")? as usize;
            let nt = r.read_u64("grid nt")? as usize;
            if nx.checked_mul(ny).and_then(|x| x.checked_mul(nt)) != Some(n) {
                return Err(Error::format(tag_offset, "grid dimensions do not match n"));
            }
            BasisSource::GridClosedForm { nx, ny, nt }
        }
        TAG_ITERATIVE => BasisSource::Iterative,
        TAG_DENSE => BasisSource::Dense,
        t => return Err(Error::format(tag_offset, format!("unknown source tag {t}"))),
    };
    let total = m
        .checked_add(
            n.checked_mul(m)
                .ok_or_else(|| Error::format(0, "size overflow"))?,
        )
        .ok_or_else(|| Error::format(0, "size overflow"))?;
    let mut bytes = Vec::new();
    r.inner.read_to_end(&mut bytes)?;
    if bytes.len() != 8 * total {
        return Err(Error::format(
            r.offset + bytes.len().min(8 * total) as u64,
            format!(
                "expected {} payload bytes, found {}",
                8 * total,
                bytes.len()
            ),
        ));
    }
    let mut values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")));
    let eigenvalues: Vec<f64> = values.by_ref().take(m).collect();
    let vectors: Vec<f64> = values.collect();
    SpectralBasis::from_parts(n, eigenvalues, vectors, source)
}
