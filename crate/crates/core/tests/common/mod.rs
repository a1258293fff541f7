//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use lyapoly::family::MatrixFamily;
use lyapoly::linalg::Matrix;
use num_complex::Complex64;

pub fn family(ms: &[&[&[f64]]]) -> MatrixFamily {
    let rows: Vec<Vec<Vec<f64>>> = ms.iter().map(|m| m.iter().map(|r| r.to_vec()).collect()).collect();
    MatrixFamily::from_rows(&rows).unwrap()
}

/// Planar pair: a growing rotation and a scaled center.
pub fn general_2d() -> MatrixFamily {
    let pi = std::f64::consts::PI;
    let l2 = 0.5 * 2f64.ln();
    let c = (pi / 3.0) / (3f64.sqrt() / 2.0);
    family(&[
        &[&[l2, pi / 4.0], &[-pi / 4.0, l2]],
        &[&[0.5 * c, c], &[-c, -0.5 * c]],
    ])
}

/// Matrix logarithms of the triangular pair [[7,0],[2,3]] and [[2,4],[0,8]].
pub fn positive_2d() -> MatrixFamily {
    let lo = |a: f64, b: f64| (a.ln() - b.ln()) / (a - b);
    family(&[
        &[&[7f64.ln(), 0.0], &[2.0 * lo(7.0, 3.0), 3f64.ln()]],
        &[&[2f64.ln(), 4.0 * lo(2.0, 8.0)], &[0.0, 8f64.ln()]],
    ])
}

pub fn metzler_3d_a() -> MatrixFamily {
    family(&[
        &[&[-2.0, 0.0, 0.0], &[10.0, -2.0, 0.0], &[0.0, 0.0, -11.0]],
        &[&[-11.0, 0.0, 10.0], &[0.0, -11.0, 0.0], &[0.0, 10.0, -2.0]],
    ])
}

pub fn metzler_3d_b() -> MatrixFamily {
    family(&[
        &[&[-1.0, 0.1, 0.1], &[0.1, -1.0, 0.1], &[1.0 / 6.0, 1.0 / 6.0, -1.0 / 3.0]],
        &[&[-0.5, 0.1, 9.0 / 8.0], &[1.0 / 6.0, -1.0 / 3.0, 7.0 / 8.0], &[0.1, 0.1, -1.0]],
    ])
}

pub fn metzler_8d() -> MatrixFamily {
    family(&[
        &[
            &[-15., 1., 1., 0., 3., 2., 0., 0.],
            &[2., -9., 3., 2., 3., 1., 2., 1.],
            &[1., 3., -13., 2., 1., 1., 0., 3.],
            &[2., 0., 1., -7., 1., 0., 0., 1.],
            &[1., 0., 1., 1., -8., 0., 1., 0.],
            &[1., 3., 1., 2., 3., -11., 2., 2.],
            &[1., 3., 1., 3., 1., 1., -10., 1.],
            &[2., 1., 3., 2., 3., 2., 3., -11.],
        ],
        &[
            &[-10., 2., 2., 0., 1., 3., 2., 0.],
            &[0., -16., 2., 1., 2., 3., 1., 2.],
            &[2., 2., -14., 3., 1., 2., 3., 1.],
            &[0., 3., 3., -13., 3., 2., 0., 0.],
            &[3., 2., 1., 2., -9., 0., 1., 3.],
            &[1., 3., 0., 0., 1., -7., 0., 0.],
            &[0., 2., 3., 2., 2., 3., -17., 2.],
            &[2., 2., 2., 2., 2., 3., 2., -17.],
        ],
    ])
}

pub fn nilpotent_pair() -> MatrixFamily {
    family(&[&[&[0.0, 1.0], &[0.0, 0.0]], &[&[0.0, 0.0], &[1.0, 0.0]]])
}

/// Closed form `β(τ)` of the nilpotent pair.
pub fn nilpotent_beta(t: f64) -> f64 {
    (((t * t + (t * t + 4.0).sqrt() * t + 2.0) / 2.0).sqrt()).ln() / t
}

/// Word from a run-length list, e.g. `[(0, 8), (1, 5)]`.
pub fn runs(r: &[(usize, usize)]) -> Vec<usize> {
    r.iter().flat_map(|&(l, n)| std::iter::repeat_n(l, n)).collect()
}

/// True when `b` is a cyclic rotation of `a`.
pub fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len().max(1)).any(|k| a.iter().cycle().skip(k).take(a.len()).eq(b.iter()))
}

/// Spectral radius of a 2×2 matrix from its characteristic polynomial.
pub fn rho_2x2(m: &Matrix) -> f64 {
    let s = m.as_slice();
    let tr = s[0] + s[3];
    let det = s[0] * s[3] - s[1] * s[2];
    let disc = Complex64::new(tr * tr - 4.0 * det, 0.0).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    l1.norm().max(l2.norm())
}

/// Extreme `ρ(Π)^{1/n}` over every word of length `1..=l`, by direct
/// multiplication (no pruning, no dedup).
pub fn brute_force_2x2(family: &[Matrix], l: usize, maximize: bool) -> f64 {
    let k = family.len();
    let mut best = if maximize { f64::NEG_INFINITY } else { f64::INFINITY };
    for n in 1..=l {
        let total = k.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut p = Matrix::identity(2);
            for _ in 0..n {
                p = p.matmul(&family[c % k]);
                c /= k;
            }
            let r = rho_2x2(&p).powf(1.0 / n as f64);
            best = if maximize { best.max(r) } else { best.min(r) };
        }
    }
    best
}

/// Whether `z ≤ Σ tᵢvᵢ` for some `t` on the grid `{Σt ≤ 1, t ∈ (1/steps)ℕ³}`
/// over three vertices.
pub fn monotone_grid_member(z: &[f64], v: &[Vec<f64>], steps: usize) -> bool {
    let h = 1.0 / steps as f64;
    for a in 0..=steps {
        for b in 0..=steps - a {
            for c in 0..=steps - a - b {
                let t = [a as f64 * h, b as f64 * h, c as f64 * h];
                let ok = (0..z.len()).all(|r| z[r] <= t[0] * v[0][r] + t[1] * v[1][r] + t[2] * v[2][r] + 1e-12);
                if ok {
                    return true;
                }
            }
        }
    }
    false
}
