//! Dense complex matrix exponential by scaling and squaring with Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005).

use faer::linalg::solvers::Solve;
use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::fmath::{cabs, ceil, log2};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152e0;

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

/// Induced 1-norm (max column sum).
pub fn norm1(a: MatRef<'_, c64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| cabs(a[(i, j)])).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `Σ_k coeffs[k] * mats[k]`, plus `id_coeff * I`.
fn lincomb(n: usize, id_coeff: f64, terms: &[(f64, &Mat<c64>)]) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| {
        let mut z = if i == j {
            c64::new(id_coeff, 0.0)
        } else {
            c64::new(0.0, 0.0)
        };
        for (c, m) in terms {
            z += m[(i, j)] * *c;
        }
        z
    })
}

fn pade_low(a: &Mat<c64>, b: &[f64]) -> (Mat<c64>, Mat<c64>) {
    let n = a.nrows();
    let a2 = a * a;
    let mut powers = alloc::vec![a2.clone()];
    while powers.len() < (b.len() - 2) / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    // powers[k] = A^{2(k+1)}
    let odd: alloc::vec::Vec<(f64, &Mat<c64>)> = powers
        .iter()
        .enumerate()
        .map(|(k, p)| (b[2 * k + 3], p))
        .collect();
    let even: alloc::vec::Vec<(f64, &Mat<c64>)> = powers
        .iter()
        .enumerate()
        .map(|(k, p)| (b[2 * k + 2], p))
        .collect();
    let u = a * lincomb(n, b[1], &odd);
    let v = lincomb(n, b[0], &even);
    (u, v)
}

fn pade13(a: &Mat<c64>) -> (Mat<c64>, Mat<c64>) {
    let n = a.nrows();
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = lincomb(n, 0.0, &[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let u = a * (&a6 * &inner_u + lincomb(n, b[1], &[(b[7], &a6), (b[5], &a4), (b[3], &a2)]));
    let inner_v = lincomb(n, 0.0, &[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let v = &a6 * &inner_v + lincomb(n, b[0], &[(b[6], &a6), (b[4], &a4), (b[2], &a2)]);
    (u, v)
}

/// `exp(a)`.
pub fn expm(a: MatRef<'_, c64>) -> Result<Mat<c64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let norm = norm1(a);
    if !norm.is_finite() {
        return Err(Error::ExpOverflow);
    }
    let a = a.to_owned();

    let mut squarings = 0u32;
    let (u, v) = if let Some(&(m, _)) = THETA.iter().find(|(_, theta)| norm <= *theta) {
        let b: &[f64] = match m {
            3 => &B3,
            5 => &B5,
            7 => &B7,
            _ => &B9,
        };
        pade_low(&a, b)
    } else {
        let s = ceil(log2(norm / THETA_13)).max(0.0);
        squarings = s as u32;
        let scale = (0..squarings).fold(1.0, |acc, _| acc * 0.5);
        let scaled = Mat::from_fn(n, n, |i, j| a[(i, j)] * scale);
        pade13(&scaled)
    };

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.partial_piv_lu().solve(&p);
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.as_ref().is_all_finite() {
        return Err(Error::ExpOverflow);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> c64 {
        c64::new(re, im)
    }

    #[test]
    fn zero_gives_identity() {
        let e = expm(Mat::<c64>::zeros(3, 3).as_ref()).unwrap();
        assert_eq!(e, Mat::<c64>::identity(3, 3));
    }

    #[test]
    fn diagonal_and_rotation() {
        for t in [1e-3, 0.1, 1.0, 3.0, 40.0] {
            let a = Mat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 0) => c(-t, 0.0),
                (1, 1) => c(0.0, t),
                _ => c(0.0, 0.0),
            });
            let e = expm(a.as_ref()).unwrap();
            assert!((e[(0, 0)] - c((-t).exp(), 0.0)).norm_sqr().sqrt() < 1e-13 * (1.0 + (-t).exp()));
            assert!((e[(1, 1)] - c(t.cos(), t.sin())).norm_sqr().sqrt() < 1e-12);

            // exp(t [[0,-1],[1,0]]) is a rotation
            let r = Mat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => c(-t, 0.0),
                (1, 0) => c(t, 0.0),
                _ => c(0.0, 0.0),
            });
            let e = expm(r.as_ref()).unwrap();
            assert!((e[(0, 0)] - c(t.cos(), 0.0)).norm_sqr().sqrt() < 1e-12);
            assert!((e[(1, 0)] - c(t.sin(), 0.0)).norm_sqr().sqrt() < 1e-12);
        }
    }

    #[test]
    fn nilpotent_jordan_block() {
        let a = Mat::from_fn(3, 3, |i, j| if j == i + 1 { c(2.0, 0.0) } else { c(0.0, 0.0) });
        let e = expm(a.as_ref()).unwrap();
        // I + A + A²/2
        assert!(crate::fmath::cabs(e[(0, 1)] - c(2.0, 0.0)) < 1e-14);
        assert!(crate::fmath::cabs(e[(0, 2)] - c(2.0, 0.0)) < 1e-14);
        assert!(crate::fmath::cabs(e[(1, 2)] - c(2.0, 0.0)) < 1e-14);
    }

    #[test]
    fn taylor_agreement_on_dense_matrix() {
        // Compare against a long Taylor series with scaling on a mildly sized matrix.
        let a = Mat::from_fn(4, 4, |i, j| c(((i * 7 + j * 3) % 5) as f64 * 0.3 - 0.6, (i as f64 - j as f64) * 0.2));
        let e = expm(a.as_ref()).unwrap();
        let s = 8;
        let scaled = Mat::from_fn(4, 4, |i, j| a[(i, j)] / (1u32 << s) as f64);
        let mut term = Mat::<c64>::identity(4, 4);
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &scaled;
            term = Mat::from_fn(4, 4, |i, j| term[(i, j)] / k as f64);
            sum = &sum + &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        assert!((&e - &sum).norm_max() < 1e-11);
    }
}
