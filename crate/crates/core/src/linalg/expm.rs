//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (degrees 3, 5, 7, 9, 13 selected from the 1-norm).

use super::matrix::{solve, Matrix};
use super::LinalgError;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
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

/// Returns `e^{t·a}`.
pub fn mat_exp(a: &Matrix, t: f64) -> Result<Matrix, LinalgError> {
    if !t.is_finite() {
        return Err(LinalgError::NonFiniteScalar(t));
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite { row: 0, col: 0 });
    }
    let ta = a.scale(t);
    let n = ta.dim();
    let norm = ta.norm_one();
    if norm == 0.0 {
        return Ok(Matrix::identity(n));
    }

    for &(m, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let out = pade_low(&ta, coeffs)?;
            return check(out);
        }
    }

    let s = ((norm / THETA_13).log2().ceil()).max(0.0) as i32;
    let scaled = ta.scale(2f64.powi(-s));
    let mut x = pade13(&scaled)?;
    for _ in 0..s {
        x = x.matmul(&x);
        if !x.is_finite() {
            return Err(LinalgError::Overflow);
        }
    }
    check(x)
}

fn check(m: Matrix) -> Result<Matrix, LinalgError> {
    if m.is_finite() {
        Ok(m)
    } else {
        Err(LinalgError::Overflow)
    }
}

fn pade_low(a: &Matrix, b: &[f64]) -> Result<Matrix, LinalgError> {
    let n = a.dim();
    let ident = Matrix::identity(n);
    let a2 = a.matmul(a);
    // powers[k] = A^{2k}
    let mut powers = vec![ident.clone(), a2.clone()];
    while powers.len() * 2 < b.len() {
        let next = powers.last().unwrap().matmul(&a2);
        powers.push(next);
    }
    let mut u = Matrix::zeros(n);
    let mut v = Matrix::zeros(n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k + 1 < b.len() {
            u = u.add(&p.scale(b[2 * k + 1]));
        }
        if 2 * k < b.len() {
            v = v.add(&p.scale(b[2 * k]));
        }
    }
    let u = a.matmul(&u);
    solve(&v.sub(&u), &v.add(&u))
}

fn pade13(a: &Matrix) -> Result<Matrix, LinalgError> {
    let b = &B13;
    let n = a.dim();
    let ident = Matrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let inner_u = a6
        .scale(b[13])
        .add(&a4.scale(b[11]))
        .add(&a2.scale(b[9]));
    let u = a6
        .matmul(&inner_u)
        .add(&a6.scale(b[7]))
        .add(&a4.scale(b[5]))
        .add(&a2.scale(b[3]))
        .add(&ident.scale(b[1]));
    let u = a.matmul(&u);

    let inner_v = a6
        .scale(b[12])
        .add(&a4.scale(b[10]))
        .add(&a2.scale(b[8]));
    let v = a6
        .matmul(&inner_v)
        .add(&a6.scale(b[6]))
        .add(&a4.scale(b[4]))
        .add(&a2.scale(b[2]))
        .add(&ident.scale(b[0]));

    solve(&v.sub(&u), &v.add(&u))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Truncated Taylor series with explicit squaring, used only as a reference.
    fn taylor_exp(a: &Matrix, t: f64) -> Matrix {
        let ta = a.scale(t);
        let s = (ta.norm_one().max(1.0).log2().ceil() as i32) + 4;
        let x = ta.scale(2f64.powi(-s));
        let n = a.dim();
        let mut term = Matrix::identity(n);
        let mut sum = Matrix::identity(n);
        for k in 1..40 {
            term = term.matmul(&x).scale(1.0 / k as f64);
            sum = sum.add(&term);
        }
        for _ in 0..s {
            sum = sum.matmul(&sum);
        }
        sum
    }

    fn rel_err(a: &Matrix, b: &Matrix) -> f64 {
        a.sub(b).norm_frobenius() / b.norm_frobenius()
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let e = mat_exp(&Matrix::zeros(3), 1.0).unwrap();
        assert_eq!(e, Matrix::identity(3));
    }

    #[test]
    fn nilpotent_series_terminates() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        let e = mat_exp(&a, 1.0).unwrap();
        let want = Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(e.sub(&want).max_abs() < 1e-15);
    }

    #[test]
    fn rotation_generator() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        for &t in &[0.01, 0.7, 3.0, 20.0] {
            let e = mat_exp(&a, t).unwrap();
            let want = Matrix::from_rows(&[[t.cos(), t.sin()], [-t.sin(), t.cos()]]).unwrap();
            assert!(e.sub(&want).max_abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn agrees_with_taylor_reference() {
        let a = Matrix::from_rows(&[
            [-1.2, 0.4, 2.0, 0.0],
            [0.3, 0.1, -0.7, 1.5],
            [0.0, 2.2, -3.0, 0.4],
            [1.0, 0.0, 0.5, 0.9],
        ])
        .unwrap();
        for &t in &[0.001, 0.1, 1.0, 4.0] {
            let e = mat_exp(&a, t).unwrap();
            let r = taylor_exp(&a, t);
            assert!(rel_err(&e, &r) < 1e-12, "t = {t}: {}", rel_err(&e, &r));
        }
    }

    #[test]
    fn overflow_is_reported() {
        let a = Matrix::diag(&[1.0, 2.0]);
        assert!(matches!(mat_exp(&a, 1000.0), Err(LinalgError::Overflow)));
    }
}
