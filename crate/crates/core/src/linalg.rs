//! Dense complex linear algebra on top of LAPACK.
//!
//! Matrices are `ndarray` arrays in row-major order; the wrappers copy into
//! column-major buffers for LAPACK and copy results back.

use lapack_sys as lp;
use ndarray::{s, Array1, Array2, ArrayView2, Axis, ShapeBuilder};
use num_complex::Complex64;
use std::os::raw::{c_char, c_int};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

fn to_fortran<T: Clone>(a: &ArrayView2<T>) -> Vec<T> {
    a.t().iter().cloned().collect()
}

fn from_fortran<T: Clone>(rows: usize, cols: usize, buf: Vec<T>) -> Array2<T> {
    Array2::from_shape_vec((rows, cols).f(), buf)
        .expect("buffer length matches shape")
        .as_standard_layout()
        .into_owned()
}

fn check(routine: &'static str, info: c_int) -> Result<()> {
    if info == 0 {
        Ok(())
    } else {
        Err(Error::Lapack { routine, info })
    }
}

fn square(a: &ArrayView2<impl Sized>, what: &str) -> Result<usize> {
    let (r, c) = a.dim();
    if r != c {
        return Err(Error::Dimension(format!("{what}: expected square matrix, got {r}x{c}")));
    }
    Ok(r)
}

/// Conjugate transpose.
pub fn dagger(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

pub fn identity(n: usize) -> Array2<C64> {
    Array2::eye(n)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let x = a[[i, j]];
            if x == ZERO {
                continue;
            }
            out.slice_mut(s![i * br..(i + 1) * br, j * bc..(j + 1) * bc])
                .zip_mut_with(b, |o, &y| *o = x * y);
        }
    }
    out
}

/// `a† m a` for a square `m`.
pub fn sandwich(a: &Array2<C64>, m: &Array2<C64>) -> Array2<C64> {
    dagger(a).dot(&m.dot(a))
}

/// Largest absolute entry.
pub fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `max |a - a†|`.
pub fn hermiticity_residual(a: &Array2<C64>) -> f64 {
    let (n, _) = a.dim();
    let mut r = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            r = r.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    r
}

/// `max |v† v - 1|` over the columns of `v`.
pub fn orthonormality_residual(v: &Array2<C64>) -> f64 {
    let g = dagger(v).dot(v);
    let n = g.nrows();
    max_abs(&(g - identity(n)))
}

/// Hermitian part `(a + a†)/2`.
pub fn hermitize(a: &Array2<C64>) -> Array2<C64> {
    (a + &dagger(a)) * C64::new(0.5, 0.0)
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
pub fn eigh(a: &Array2<C64>) -> Result<(Array1<f64>, Array2<C64>)> {
    let n = square(&a.view(), "eigh")?;
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    let mut buf = to_fortran(&a.view());
    let mut w = vec![0.0f64; n];
    let ni = n as c_int;
    let mut info: c_int = 0;
    let (mut wq, mut rq, mut iq) = (ZERO, 0.0f64, 0 as c_int);
    unsafe {
        lp::zheevd_(
            &(b'V' as c_char),
            &(b'L' as c_char),
            &ni,
            buf.as_mut_ptr().cast(),
            &ni,
            w.as_mut_ptr(),
            (&mut wq as *mut C64).cast(),
            &-1,
            &mut rq,
            &-1,
            &mut iq,
            &-1,
            &mut info,
        );
    }
    check("zheevd(query)", info)?;
    let lwork = wq.re as c_int;
    let lrwork = rq as c_int;
    let liwork = iq;
    let mut work = vec![ZERO; lwork.max(1) as usize];
    let mut rwork = vec![0.0f64; lrwork.max(1) as usize];
    let mut iwork = vec![0 as c_int; liwork.max(1) as usize];
    unsafe {
        lp::zheevd_(
            &(b'V' as c_char),
            &(b'L' as c_char),
            &ni,
            buf.as_mut_ptr().cast(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr().cast(),
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check("zheevd", info)?;
    Ok((Array1::from(w), from_fortran(n, n, buf)))
}

/// Eigen-decomposition of a real symmetric matrix; eigenvalues ascending.
pub fn eigh_real(a: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = square(&a.view(), "eigh_real")?;
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    let mut buf = to_fortran(&a.view());
    let mut w = vec![0.0f64; n];
    let ni = n as c_int;
    let mut info: c_int = 0;
    let (mut wq, mut iq) = (0.0f64, 0 as c_int);
    unsafe {
        lp::dsyevd_(
            &(b'V' as c_char),
            &(b'L' as c_char),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            &mut wq,
            &-1,
            &mut iq,
            &-1,
            &mut info,
        );
    }
    check("dsyevd(query)", info)?;
    let lwork = wq as c_int;
    let liwork = iq;
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork = vec![0 as c_int; liwork.max(1) as usize];
    unsafe {
        lp::dsyevd_(
            &(b'V' as c_char),
            &(b'L' as c_char),
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check("dsyevd", info)?;
    Ok((Array1::from(w), from_fortran(n, n, buf)))
}

/// Lowest `count` eigenpairs of a Hermitian band matrix.
///
/// `upper[d][j]` holds the entry `A[j, j + d]` for `d = 0..=kd`; row `d` has
/// length `n - d`. Eigenvalues come from `zhbevx` without eigenvectors, which
/// avoids the dense `n x n` reduction matrix; eigenvectors follow from inverse
/// iteration on the banded LU factorization.
pub fn eigh_banded_lowest(upper: &[Vec<C64>], count: usize) -> Result<(Array1<f64>, Array2<C64>)> {
    if upper.is_empty() {
        return Err(Error::Dimension("eigh_banded_lowest: no diagonals".into()));
    }
    let n = upper[0].len();
    let kd = upper.len() - 1;
    for (d, row) in upper.iter().enumerate() {
        if row.len() + d != n {
            return Err(Error::Dimension(format!("band row {d} has length {}", row.len())));
        }
    }
    let count = count.min(n);
    let ldab = kd + 1;
    // Upper storage: AB[kd + i - j, j] = A[i, j] for j - kd <= i <= j.
    let mut ab = vec![ZERO; ldab * n];
    for (d, row) in upper.iter().enumerate() {
        for (i, &x) in row.iter().enumerate() {
            let j = i + d;
            ab[j * ldab + (kd - d)] = x;
        }
    }
    let ni = n as c_int;
    let kdi = kd as c_int;
    let ldabi = ldab as c_int;
    let mut q = vec![ZERO; 1];
    let mut m: c_int = 0;
    let mut w = vec![0.0f64; n];
    let mut z = vec![ZERO; 1];
    let mut work = vec![ZERO; n];
    let mut rwork = vec![0.0f64; 7 * n];
    let mut iwork = vec![0 as c_int; 5 * n];
    let mut ifail = vec![0 as c_int; n];
    let mut info: c_int = 0;
    unsafe {
        lp::zhbevx_(
            &(b'N' as c_char),
            &(b'I' as c_char),
            &(b'U' as c_char),
            &ni,
            &kdi,
            ab.as_mut_ptr().cast(),
            &ldabi,
            q.as_mut_ptr().cast(),
            &1,
            &0.0,
            &0.0,
            &1,
            &(count as c_int),
            &0.0,
            &mut m,
            w.as_mut_ptr(),
            z.as_mut_ptr().cast(),
            &1,
            work.as_mut_ptr().cast(),
            rwork.as_mut_ptr(),
            iwork.as_mut_ptr(),
            ifail.as_mut_ptr(),
            &mut info,
        );
    }
    check("zhbevx", info)?;
    w.truncate(m as usize);
    let vecs = band_inverse_iteration(upper, &w)?;
    Ok((Array1::from(w), vecs))
}

/// Eigenvectors of the Hermitian band matrix `upper` for the ascending eigenvalues `w`.
fn band_inverse_iteration(upper: &[Vec<C64>], w: &[f64]) -> Result<Array2<C64>> {
    let n = upper[0].len();
    let kd = upper.len() - 1;
    let norm = (0..n)
        .map(|i| (0..=kd).map(|d| upper[d].get(i).map_or(0.0, |x| x.norm()) + i.checked_sub(d).map_or(0.0, |j| upper[d][j].norm())).sum::<f64>())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let shift = 64.0 * f64::EPSILON * norm;
    let cluster = 1e-9 * norm;
    // General band storage for zgbtrf: A[i, j] at row 2 kd + i - j of column j.
    let ld = 3 * kd + 1;
    let mut out = Array2::<C64>::zeros((n, w.len()));
    let mut ipiv = vec![0 as c_int; n];
    for (mu, &lambda) in w.iter().enumerate() {
        let mut gb = vec![ZERO; ld * n];
        for (d, row) in upper.iter().enumerate() {
            for (i, &x) in row.iter().enumerate() {
                let j = i + d;
                let x = if d == 0 { x - (lambda - shift) } else { x };
                gb[j * ld + 2 * kd + i - j] = x;
                if d > 0 {
                    gb[i * ld + 2 * kd + j - i] = x.conj();
                }
            }
        }
        let mut info: c_int = 0;
        let (ni, kdi, ldi) = (n as c_int, kd as c_int, ld as c_int);
        unsafe {
            lp::zgbtrf_(&ni, &ni, &kdi, &kdi, gb.as_mut_ptr().cast(), &ldi, ipiv.as_mut_ptr(), &mut info);
        }
        check("zgbtrf", info)?;
        let mut x: Vec<C64> = (0..n).map(|j| C64::new(1.0 + (0.37 * j as f64 + mu as f64).sin(), 0.0)).collect();
        for _ in 0..3 {
            unsafe {
                lp::zgbtrs_(
                    &(b'N' as c_char),
                    &ni,
                    &kdi,
                    &kdi,
                    &1,
                    gb.as_ptr().cast(),
                    &ldi,
                    ipiv.as_ptr(),
                    x.as_mut_ptr().cast(),
                    &ni,
                    &mut info,
                );
            }
            check("zgbtrs", info)?;
            for nu in (0..mu).rev().take_while(|&nu| lambda - w[nu] < cluster) {
                let c: C64 = (0..n).map(|j| out[[j, nu]].conj() * x[j]).sum();
                for j in 0..n {
                    x[j] -= c * out[[j, nu]];
                }
            }
            let s = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::NotConverged { what: "band inverse iteration", detail: format!("eigenvalue {mu}") });
            }
            x.iter_mut().for_each(|z| *z /= s);
        }
        out.column_mut(mu).assign(&Array1::from(x));
    }
    Ok(out)
}

/// Complex Schur decomposition `a = z t z†`; returns the diagonal of `t` and `z`.
///
/// For a normal matrix `t` is diagonal and the columns of `z` are orthonormal
/// eigenvectors.
pub fn schur(a: &Array2<C64>) -> Result<(Array1<C64>, Array2<C64>)> {
    let n = square(&a.view(), "schur")?;
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    let mut buf = to_fortran(&a.view());
    let ni = n as c_int;
    let mut sdim: c_int = 0;
    let mut w = vec![ZERO; n];
    let mut vs = vec![ZERO; n * n];
    let mut rwork = vec![0.0f64; n];
    let mut bwork = vec![0 as c_int; n];
    let mut info: c_int = 0;
    let mut wq = ZERO;
    unsafe {
        lp::zgees_(
            &(b'V' as c_char),
            &(b'N' as c_char),
            None,
            &ni,
            buf.as_mut_ptr().cast(),
            &ni,
            &mut sdim,
            w.as_mut_ptr().cast(),
            vs.as_mut_ptr().cast(),
            &ni,
            (&mut wq as *mut C64).cast(),
            &-1,
            rwork.as_mut_ptr(),
            bwork.as_mut_ptr(),
            &mut info,
        );
    }
    check("zgees(query)", info)?;
    let lwork = (wq.re as c_int).max(1);
    let mut work = vec![ZERO; lwork as usize];
    unsafe {
        lp::zgees_(
            &(b'V' as c_char),
            &(b'N' as c_char),
            None,
            &ni,
            buf.as_mut_ptr().cast(),
            &ni,
            &mut sdim,
            w.as_mut_ptr().cast(),
            vs.as_mut_ptr().cast(),
            &ni,
            work.as_mut_ptr().cast(),
            &lwork,
            rwork.as_mut_ptr(),
            bwork.as_mut_ptr(),
            &mut info,
        );
    }
    check("zgees", info)?;
    Ok((Array1::from(w), from_fortran(n, n, vs)))
}

/// General eigenvalues, optionally with right eigenvectors.
pub fn eig(a: &Array2<C64>, vectors: bool) -> Result<(Array1<C64>, Option<Array2<C64>>)> {
    let n = square(&a.view(), "eig")?;
    if n == 0 {
        return Ok((Array1::zeros(0), vectors.then(|| Array2::zeros((0, 0)))));
    }
    let mut buf = to_fortran(&a.view());
    let ni = n as c_int;
    let jobvr = if vectors { b'V' } else { b'N' } as c_char;
    let mut w = vec![ZERO; n];
    let mut vl = vec![ZERO; 1];
    let mut vr = vec![ZERO; if vectors { n * n } else { 1 }];
    let ldvr = if vectors { ni } else { 1 };
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info: c_int = 0;
    let mut wq = ZERO;
    unsafe {
        lp::zgeev_(
            &(b'N' as c_char),
            &jobvr,
            &ni,
            buf.as_mut_ptr().cast(),
            &ni,
            w.as_mut_ptr().cast(),
            vl.as_mut_ptr().cast(),
            &1,
            vr.as_mut_ptr().cast(),
            &ldvr,
            (&mut wq as *mut C64).cast(),
            &-1,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check("zgeev(query)", info)?;
    let lwork = (wq.re as c_int).max(1);
    let mut work = vec![ZERO; lwork as usize];
    unsafe {
        lp::zgeev_(
            &(b'N' as c_char),
            &jobvr,
            &ni,
            buf.as_mut_ptr().cast(),
            &ni,
            w.as_mut_ptr().cast(),
            vl.as_mut_ptr().cast(),
            &1,
            vr.as_mut_ptr().cast(),
            &ldvr,
            work.as_mut_ptr().cast(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check("zgeev", info)?;
    let vecs = vectors.then(|| from_fortran(n, n, vr));
    Ok((Array1::from(w), vecs))
}

/// Solves `a x = b` for square `a`.
pub fn solve(a: &Array2<C64>, b: &Array2<C64>) -> Result<Array2<C64>> {
    let n = square(&a.view(), "solve")?;
    if b.nrows() != n {
        return Err(Error::Dimension(format!("solve: rhs has {} rows, expected {n}", b.nrows())));
    }
    let nrhs = b.ncols();
    let mut abuf = to_fortran(&a.view());
    let mut bbuf = to_fortran(&b.view());
    let ni = n as c_int;
    let mut ipiv = vec![0 as c_int; n];
    let mut info: c_int = 0;
    unsafe {
        lp::zgesv_(
            &ni,
            &(nrhs as c_int),
            abuf.as_mut_ptr().cast(),
            &ni,
            ipiv.as_mut_ptr(),
            bbuf.as_mut_ptr().cast(),
            &ni,
            &mut info,
        );
    }
    if info > 0 {
        return Err(Error::Singular("solve"));
    }
    check("zgesv", info)?;
    Ok(from_fortran(n, nrhs, bbuf))
}

pub fn inverse(a: &Array2<C64>) -> Result<Array2<C64>> {
    solve(a, &identity(a.nrows()))
}

/// Real symmetric or general real inverse via the complex solver.
pub fn inverse_real(a: &Array2<f64>) -> Result<Array2<f64>> {
    let ac = a.mapv(|x| C64::new(x, 0.0));
    Ok(inverse(&ac)?.mapv(|z| z.re))
}

fn one_norm(a: &Array2<C64>) -> f64 {
    a.axis_iter(Axis(1))
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé approximant.
pub fn expm(a: &Array2<C64>) -> Result<Array2<C64>> {
    expm_with(a, &mut |_| {})
}

/// [`expm`] with `fix` applied after the Padé step and after every squaring,
/// for restoring an invariant of the exact propagator at rounding level.
pub fn expm_with(a: &Array2<C64>, fix: &mut dyn FnMut(&mut Array2<C64>)) -> Result<Array2<C64>> {
    let n = square(&a.view(), "expm")?;
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA13: f64 = 5.371920351148152;
    let norm = one_norm(a);
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a * C64::new(0.5f64.powi(s), 0.0);
    let id = identity(n);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let c = |k: usize| C64::new(B[k], 0.0);
    let u_inner = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let u = a.dot(&(a6.dot(&u_inner) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &id * c(1)));
    let v_inner = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = a6.dot(&v_inner) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &id * c(0);
    let mut r = solve(&(&v - &u), &(&v + &u))?;
    fix(&mut r);
    for _ in 0..s {
        r = r.dot(&r);
        fix(&mut r);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, seed: u64) -> Array2<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_fn((n, n), |_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn eigh_reconstructs() {
        let a = hermitize(&random_matrix(12, 1));
        let (w, v) = eigh(&a).unwrap();
        assert!(orthonormality_residual(&v) < 1e-12);
        let d = Array2::from_diag(&w.mapv(|x| C64::new(x, 0.0)));
        let r = v.dot(&d).dot(&dagger(&v)) - &a;
        assert!(max_abs(&r) < 1e-12);
        assert!(w.windows(2).into_iter().all(|p| p[0] <= p[1]));
    }

    #[test]
    fn eigh_real_reconstructs() {
        let a = random_matrix(9, 2).mapv(|z| z.re);
        let a = &a + &a.t();
        let (w, v) = eigh_real(&a).unwrap();
        let r = v.dot(&Array2::from_diag(&w)).dot(&v.t()) - &a;
        assert!(r.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn banded_matches_dense() {
        let n = 40;
        let kd = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut dense = Array2::<C64>::zeros((n, n));
        let mut upper = vec![];
        for d in 0..=kd {
            let mut row = vec![];
            for i in 0..n - d {
                let x = if d == 0 {
                    C64::new(rng.gen_range(-2.0..2.0), 0.0)
                } else {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                };
                dense[[i, i + d]] = x;
                dense[[i + d, i]] = x.conj();
                row.push(x);
            }
            upper.push(row);
        }
        let (wd, vd) = eigh(&dense).unwrap();
        let (wb, vb) = eigh_banded_lowest(&upper, 7).unwrap();
        assert_eq!(wb.len(), 7);
        for k in 0..7 {
            assert!((wd[k] - wb[k]).abs() < 1e-12);
            let ov: C64 = vd.column(k).iter().zip(vb.column(k)).map(|(a, b)| a.conj() * b).sum();
            assert!((ov.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn schur_of_unitary_is_diagonalizing() {
        let h = hermitize(&random_matrix(10, 4));
        let u = expm(&(h * C64::new(0.0, -1.0))).unwrap();
        assert!(orthonormality_residual(&u) < 1e-12);
        let (w, z) = schur(&u).unwrap();
        assert!(orthonormality_residual(&z) < 1e-12);
        let d = Array2::from_diag(&w);
        assert!(max_abs(&(z.dot(&d).dot(&dagger(&z)) - &u)) < 1e-12);
    }

    #[test]
    fn eig_and_solve() {
        let a = random_matrix(8, 5);
        let (w, v) = eig(&a, true).unwrap();
        let v = v.unwrap();
        let av = a.dot(&v);
        for k in 0..8 {
            for i in 0..8 {
                assert!((av[[i, k]] - w[k] * v[[i, k]]).norm() < 1e-11);
            }
        }
        let inv = inverse(&a).unwrap();
        assert!(max_abs(&(a.dot(&inv) - identity(8))) < 1e-12);
    }

    #[test]
    fn expm_matches_diagonal_and_series() {
        let d = Array1::from(vec![C64::new(-3.0, 1.0), C64::new(0.5, -20.0), C64::new(0.0, 0.0)]);
        let e = expm(&Array2::from_diag(&d)).unwrap();
        for k in 0..3 {
            assert!((e[[k, k]] - d[k].exp()).norm() < 1e-12 * d[k].exp().norm().max(1.0));
        }
        let a = random_matrix(6, 6) * C64::new(0.01, 0.0);
        let mut series = identity(6);
        let mut term = identity(6);
        for k in 1..12 {
            term = term.dot(&a) / C64::new(k as f64, 0.0);
            series = series + &term;
        }
        assert!(max_abs(&(expm(&a).unwrap() - series)) < 1e-14);
    }

    #[test]
    fn kron_shapes_and_values() {
        let a = random_matrix(2, 7);
        let b = random_matrix(3, 8);
        let k = kron(&a, &b);
        assert_eq!(k.dim(), (6, 6));
        assert_eq!(k[[4, 5]], a[[1, 1]] * b[[1, 2]]);
    }
}
