//! Dense matrix exponential by scaling and squaring with a [13/13] Padé
//! approximant (Higham 2005).

use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::operators::C64;

const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
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

fn one_norm(a: &Mat<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled_identity(n: usize, s: f64) -> Mat<C64> {
    Mat::from_fn(n, n, |i, j| if i == j { C64::new(s, 0.0) } else { C64::new(0.0, 0.0) })
}

fn axpy(acc: &mut Mat<C64>, s: f64, b: &Mat<C64>) {
    let s = C64::new(s, 0.0);
    for j in 0..acc.ncols() {
        for i in 0..acc.nrows() {
            acc[(i, j)] += s * b[(i, j)];
        }
    }
}

/// `exp(a)` for a square matrix.
pub fn expm(a: &Mat<C64>) -> Mat<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scale = C64::new(0.5f64.powi(s), 0.0);
    let a = Mat::from_fn(n, n, |i, j| a[(i, j)] * scale);

    let b = &PADE_13;
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let mut inner_u = scaled_identity(n, 0.0);
    axpy(&mut inner_u, b[13], &a6);
    axpy(&mut inner_u, b[11], &a4);
    axpy(&mut inner_u, b[9], &a2);
    let mut u = &a6 * &inner_u;
    axpy(&mut u, b[7], &a6);
    axpy(&mut u, b[5], &a4);
    axpy(&mut u, b[3], &a2);
    axpy(&mut u, b[1], &scaled_identity(n, 1.0));
    let u = &a * &u;

    let mut inner_v = scaled_identity(n, 0.0);
    axpy(&mut inner_v, b[12], &a6);
    axpy(&mut inner_v, b[10], &a4);
    axpy(&mut inner_v, b[8], &a2);
    let mut v = &a6 * &inner_v;
    axpy(&mut v, b[6], &a6);
    axpy(&mut v, b[4], &a4);
    axpy(&mut v, b[2], &a2);
    axpy(&mut v, b[0], &scaled_identity(n, 1.0));

    let mut p = v.clone();
    axpy(&mut p, 1.0, &u);
    let mut q = v;
    axpy(&mut q, -1.0, &u);
    let mut r = q.partial_piv_lu().solve(&p);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal() {
        let a = Mat::from_fn(3, 3, |i, j| if i == j { c(-(i as f64), 0.5 * i as f64) } else { c(0.0, 0.0) });
        let e = expm(&a);
        for i in 0..3 {
            let expected = a[(i, i)].exp();
            assert!((e[(i, i)] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn nilpotent_jordan_block() {
        let a = Mat::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { c(3.0, 0.0) } else { c(0.0, 0.0) });
        let e = expm(&a);
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((e[(0, 1)] - c(3.0, 0.0)).norm() < 1e-14);
        assert!(e[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn rotation_with_large_norm() {
        // exp(θ [[0, -1], [1, 0]]) is a rotation; θ = 40 forces squaring.
        let t = 40.0;
        let a = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c(-t, 0.0),
            (1, 0) => c(t, 0.0),
            _ => c(0.0, 0.0),
        });
        let e = expm(&a);
        assert!((e[(0, 0)] - c(t.cos(), 0.0)).norm() < 1e-12);
        assert!((e[(1, 0)] - c(t.sin(), 0.0)).norm() < 1e-12);
    }
}
