//! Eigenvalues of dense real matrices: balancing, Householder reduction to
//! upper Hessenberg form, and the Francis double-shift QR iteration. The
//! leading eigenvector is recovered afterwards from the original matrix.

use num_complex::Complex64;

use super::matrix::Matrix;
use super::LinalgError;

/// Relative tolerance used when comparing moduli of eigenvalues.
pub const TOL_EIG: f64 = 1e-12;

/// All eigenvalues of a matrix plus the position of the leading one.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub leading_index: usize,
}

impl Spectrum {
    pub fn leading(&self) -> Complex64 {
        self.eigenvalues[self.leading_index]
    }

    pub fn radius(&self) -> f64 {
        self.leading().norm()
    }

    pub fn abscissa(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Computes all eigenvalues of `m`.
///
/// The leading eigenvalue has maximal modulus. Ties (moduli equal up to
/// [`TOL_EIG`]) go to the largest real part, then the lowest index.
pub fn eig_full(m: &Matrix) -> Result<Spectrum, LinalgError> {
    if !m.is_finite() {
        return Err(LinalgError::NonFinite { row: 0, col: 0 });
    }
    let n = m.dim();
    let mut a: Vec<Vec<f64>> = m.to_rows();
    balance(&mut a);
    hessenberg(&mut a);
    let eigenvalues = hqr(&mut a, 100 * n.max(1))?;
    let leading_index = select_leading(&eigenvalues);
    Ok(Spectrum {
        eigenvalues,
        leading_index,
    })
}

fn select_leading(eigs: &[Complex64]) -> usize {
    let rmax = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = TOL_EIG * rmax.max(f64::MIN_POSITIVE);
    let mut best = 0;
    let mut found = false;
    for (i, z) in eigs.iter().enumerate() {
        if z.norm() < rmax - tol {
            continue;
        }
        if !found || z.re > eigs[best].re + tol {
            best = i;
            found = true;
        }
    }
    best
}

pub fn spectral_radius(m: &Matrix) -> Result<f64, LinalgError> {
    Ok(eig_full(m)?.radius())
}

pub fn spectral_abscissa(m: &Matrix) -> Result<f64, LinalgError> {
    Ok(eig_full(m)?.abscissa())
}

/// Real vector attached to the leading eigenvalue.
///
/// For a real leading eigenvalue this is the eigenvector itself; for a complex
/// one it is the real part of the eigenvector after rotating its phase so
/// that the largest component is real. The result has unit Euclidean norm and
/// its largest-magnitude component is positive.
pub fn real_leading_vector(m: &Matrix) -> Result<Vec<f64>, LinalgError> {
    let spec = eig_full(m)?;
    let lambda = spec.leading();
    let v = eigenvector(m, lambda)?;
    Ok(realify(&v))
}

fn realify(v: &[Complex64]) -> Vec<f64> {
    let k = argmax_by_tol(v.iter().map(|z| z.norm()));
    let phase = if v[k].norm() > 0.0 {
        v[k].conj() / v[k].norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut out: Vec<f64> = v.iter().map(|z| (z * phase).re).collect();
    let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        out.iter_mut().for_each(|x| *x /= norm);
    }
    let k = argmax_by_tol(out.iter().map(|x| x.abs()));
    if out[k] < 0.0 {
        out.iter_mut().for_each(|x| *x = -*x);
    }
    out
}

/// Index of the maximum, ties (relative 1e-10) resolved to the lowest index.
fn argmax_by_tol(values: impl Iterator<Item = f64>) -> usize {
    let values: Vec<f64> = values.collect();
    let max = values.iter().cloned().fold(0.0, f64::max);
    values
        .iter()
        .position(|&x| x >= max * (1.0 - 1e-10))
        .unwrap_or(0)
}

/// Eigenvector of `m` for the (approximate) eigenvalue `lambda`.
///
/// A null vector of `m − λI` is found by Gaussian elimination with a rank
/// threshold (the first free column is set to one, which picks `e₁` for the
/// identity), then polished by two steps of inverse iteration.
pub fn eigenvector(m: &Matrix, lambda: Complex64) -> Result<Vec<Complex64>, LinalgError> {
    let n = m.dim();
    let scale = m.norm_frobenius().max(lambda.norm()).max(f64::MIN_POSITIVE);
    let shifted = complex_shifted(m, lambda);
    let mut v = null_vector(shifted.clone(), n, 1e-9 * scale);
    normalize_c(&mut v);
    for _ in 0..2 {
        let mut y = solve_c(shifted.clone(), n, &v, 1e-15 * scale);
        if !y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            break;
        }
        normalize_c(&mut y);
        if y.iter().any(|z| z.norm() > 0.0) {
            v = y;
        }
    }
    let resid = residual(m, lambda, &v);
    if !(resid <= 1e-6 * scale) {
        return Err(LinalgError::EigenvectorFailed { residual: resid });
    }
    Ok(v)
}

fn complex_shifted(m: &Matrix, lambda: Complex64) -> Vec<Complex64> {
    let n = m.dim();
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = Complex64::new(m[(i, j)], 0.0);
        }
        a[i * n + i] -= lambda;
    }
    a
}

fn residual(m: &Matrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    let n = m.dim();
    let mut r = 0.0;
    for i in 0..n {
        let mut s = -lambda * v[i];
        for j in 0..n {
            s += m[(i, j)] * v[j];
        }
        r += s.norm_sqr();
    }
    r.sqrt()
}

fn normalize_c(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
}

fn null_vector(mut a: Vec<Complex64>, n: usize, tol: f64) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut free_col = None;
    let mut row = 0;
    for col in 0..n {
        if row == n {
            free_col.get_or_insert(col);
            break;
        }
        let p = first_max(row..n, |i| a[i * n + col].norm());
        if a[p * n + col].norm() <= tol {
            free_col.get_or_insert(col);
            continue;
        }
        for j in 0..n {
            a.swap(row * n + j, p * n + j);
        }
        let piv = a[row * n + col];
        for j in 0..n {
            a[row * n + j] /= piv;
        }
        for i in 0..n {
            if i != row {
                let f = a[i * n + col];
                if f != zero {
                    for j in 0..n {
                        let t = a[row * n + j];
                        a[i * n + j] -= f * t;
                    }
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let mut x = vec![zero; n];
    // Full rank within tolerance: fall back to the last column; inverse
    // iteration below repairs the direction.
    let free = free_col.unwrap_or(n - 1);
    x[free] = Complex64::new(1.0, 0.0);
    for (r, &c) in pivot_cols.iter().enumerate() {
        if c == free {
            x[free] = Complex64::new(1.0, 0.0);
            continue;
        }
        x[c] = -a[r * n + free];
    }
    x
}

/// First index attaining the maximum key.
fn first_max(range: std::ops::Range<usize>, key: impl Fn(usize) -> f64) -> usize {
    let mut best = range.start;
    let mut best_key = key(best);
    for i in range {
        let k = key(i);
        if k > best_key {
            best = i;
            best_key = k;
        }
    }
    best
}

fn solve_c(mut a: Vec<Complex64>, n: usize, b: &[Complex64], tiny: f64) -> Vec<Complex64> {
    let mut x = b.to_vec();
    for k in 0..n {
        let p = first_max(k..n, |i| a[i * n + k].norm());
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        if a[k * n + k].norm() < tiny {
            a[k * n + k] = Complex64::new(tiny, 0.0);
        }
        let piv = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            for j in k..n {
                let t = a[k * n + j];
                a[i * n + j] -= f * t;
            }
            let t = x[k];
            x[i] -= f * t;
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in k + 1..n {
            s -= a[k * n + j] * x[j];
        }
        x[k] = s / a[k * n + k];
    }
    x
}

fn balance(a: &mut [Vec<f64>]) {
    const RADIX: f64 = 2.0;
    let n = a.len();
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= g;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

fn hessenberg(h: &mut [Vec<f64>]) {
    let n = h.len();
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0; n];
    for m in 1..n - 1 {
        let scale: f64 = (m..n).map(|i| h[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..n).rev() {
            ort[i] = h[i][m - 1] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;
        for j in m..n {
            let f: f64 = (m..n).map(|i| ort[i] * h[i][j]).sum::<f64>() / hh;
            for i in m..n {
                h[i][j] -= f * ort[i];
            }
        }
        for row in h.iter_mut() {
            let f: f64 = (m..n).map(|j| ort[j] * row[j]).sum::<f64>() / hh;
            for j in m..n {
                row[j] -= f * ort[j];
            }
        }
        h[m][m - 1] = scale * g;
        for row in h.iter_mut().skip(m + 1) {
            row[m - 1] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
fn hqr(a: &mut [Vec<f64>], max_iters: usize) -> Result<Vec<Complex64>, LinalgError> {
    let n = a.len();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut total_iters = 0usize;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 1 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = x + z;
                    if z != 0.0 {
                        wr[nu] = x - w / z;
                    }
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                nn -= 2;
                break;
            }
            if total_iters >= max_iters {
                return Err(LinalgError::NoConvergence {
                    iterations: total_iters,
                });
            }
            if its == 10 || its == 20 {
                t += x;
                for i in 0..=nu {
                    a[i][i] -= x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total_iters += 1;

            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = 0.0;
                    if k + 1 != nu {
                        r = a[k + 2][k - 1];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k + 1 != nu {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a[i][k] + y * a[i][k + 1];
                        if k + 1 != nu {
                            pp += z * a[i][k + 2];
                            a[i][k + 2] -= pp * r;
                        }
                        a[i][k + 1] -= pp * q;
                        a[i][k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v.into_iter().map(|z| z.re).collect()
    }

    #[test]
    fn identity_spectrum() {
        let s = eig_full(&Matrix::identity(3)).unwrap();
        for z in &s.eigenvalues {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn triangular_spectrum_and_leading() {
        let m = Matrix::from_rows(&[[2.0, 4.0], [0.0, 8.0]]).unwrap();
        let s = eig_full(&m).unwrap();
        let re = sorted_re(s.eigenvalues.clone());
        assert!((re[0] - 2.0).abs() < 1e-13 && (re[1] - 8.0).abs() < 1e-13);
        assert!((s.leading().re - 8.0).abs() < 1e-13);
    }

    #[test]
    fn rotation_generator_spectrum() {
        let m = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let s = eig_full(&m).unwrap();
        let mut ims: Vec<f64> = s.eigenvalues.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
        assert!(s.eigenvalues.iter().all(|z| z.re.abs() < 1e-14));
    }

    #[test]
    fn leading_vector_triangular() {
        let m = Matrix::from_rows(&[[2.0, 4.0], [0.0, 8.0]]).unwrap();
        let v = real_leading_vector(&m).unwrap();
        let n = 13f64.sqrt();
        assert!((v[0] - 2.0 / n).abs() < 1e-12 && (v[1] - 3.0 / n).abs() < 1e-12);
    }

    #[test]
    fn leading_vector_identity_is_e1() {
        let v = real_leading_vector(&Matrix::identity(3)).unwrap();
        assert_eq!(v, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn leading_vector_rotation() {
        // Eigenvector of i is (1, i)/√2; phase already aligns the first
        // (tied, lowest-index) component, so 2·Re(v) normalizes to e₁.
        let m = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let v = real_leading_vector(&m).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12 && v[1].abs() < 1e-12);
    }

    #[test]
    fn companion_matrix_roots() {
        // x^4 - 10x^3 + 35x^2 - 50x + 24 = (x-1)(x-2)(x-3)(x-4)
        let m = Matrix::from_rows(&[
            [10.0, -35.0, 50.0, -24.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let re = sorted_re(eig_full(&m).unwrap().eigenvalues);
        for (k, r) in re.iter().enumerate() {
            assert!((r - (k + 1) as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn complex_leading_eigenvector_residual() {
        let m = Matrix::from_rows(&[
            [0.5, -2.0, 0.1, 0.0, 0.3],
            [2.0, 0.4, 0.0, 0.2, 0.0],
            [0.1, 0.0, -1.0, 0.5, 0.0],
            [0.0, 0.3, 0.2, 0.1, 0.7],
            [0.4, 0.0, 0.0, -0.6, -0.2],
        ])
        .unwrap();
        let s = eig_full(&m).unwrap();
        let lambda = s.leading();
        let v = eigenvector(&m, lambda).unwrap();
        assert!(residual(&m, lambda, &v) <= 1e-10 * m.norm_frobenius());
    }
}
