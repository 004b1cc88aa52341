//! Random operators, states and Lindblad systems for testing.

use alloc::vec::Vec;

use faer::c64;
use rand::Rng;

use crate::error::Result;
use crate::fmath::{cabs, cos, ln, sin, sqrt};
use crate::liouvillian::LindbladSystem;
use crate::operator::{DensityMatrix, HilbertDim, Operator};

/// Standard complex Gaussian (unit variance per component) by Box–Muller.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = sqrt(-2.0 * ln(u1));
    let phi = core::f64::consts::TAU * u2;
    c64::new(r * cos(phi), r * sin(phi))
}

/// `n × n` matrix of i.i.d. complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Operator {
    ginibre_rect(rng, n, n, n)
}

fn ginibre_rect<R: Rng + ?Sized>(rng: &mut R, n: usize, rows: usize, cols: usize) -> Operator {
    let vals: Vec<c64> = (0..rows * cols).map(|_| gaussian(rng)).collect();
    Operator::from_fn(HilbertDim::new(n).expect("n > 0"), |i, j| {
        if i < rows && j < cols {
            vals[i * cols + j]
        } else {
            c64::new(0.0, 0.0)
        }
    })
    .expect("finite")
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Operator {
    ginibre(rng, n).hermitian_part()
}

/// Random density matrix of rank at most `rank`: `GG†/tr(GG†)` with `G`
/// an `n × rank` Ginibre matrix.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> DensityMatrix {
    let rank = rank.clamp(1, n);
    let g = ginibre_rect(rng, n, n, rank);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new_unchecked(w.scale(c64::new(1.0 / tr, 0.0)).hermitian_part())
}

/// Random full-rank density matrix.
pub fn full_rank_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    density_matrix(rng, n, n)
}

/// Random pure state.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let psi: Vec<c64> = (0..n).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(&psi).expect("nonzero with probability one")
}

/// Random system with Hermitian `H` and `k` Ginibre couplings scaled by
/// `coupling`. Generic instances have a unique steady state.
pub fn system<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, coupling: f64) -> LindbladSystem {
    let h = hermitian(rng, n);
    let ls = (0..k)
        .map(|_| ginibre(rng, n).scale(c64::new(coupling, 0.0)))
        .collect();
    LindbladSystem::new(h, ls, 0.0).expect("hermitian by construction")
}

fn direct_sum(a: &Operator, b: &Operator) -> Operator {
    let (na, nb) = (a.n(), b.n());
    Operator::from_fn(HilbertDim::new(na + nb).expect("positive"), |i, j| {
        if i < na && j < na {
            a.get(i, j)
        } else if i >= na && j >= na {
            b.get(i - na, j - na)
        } else {
            c64::new(0.0, 0.0)
        }
    })
    .expect("finite")
}

/// Block-diagonal system `⊕_b (H_b, L_{b,k})`: every block carries its own
/// steady state, so the kernel has dimension at least `blocks.len()`.
pub fn block_system<R: Rng + ?Sized>(rng: &mut R, blocks: &[usize], k: usize, coupling: f64) -> LindbladSystem {
    assert!(!blocks.is_empty(), "need at least one block");
    let parts: Vec<LindbladSystem> = blocks.iter().map(|&n| system(rng, n, k, coupling)).collect();
    let mut h = parts[0].hamiltonian().clone();
    let mut ls: Vec<Operator> = parts[0].couplings().to_vec();
    for p in &parts[1..] {
        h = direct_sum(&h, p.hamiltonian());
        ls = ls
            .iter()
            .zip(p.couplings())
            .map(|(a, b)| direct_sum(a, b))
            .collect();
    }
    LindbladSystem::new(h, ls, 0.0).expect("hermitian by construction")
}

/// Block system whose two blocks share the same `H` shifted by `shift`: the
/// off-diagonal coherences between the blocks oscillate at frequency
/// `shift` instead of decaying.
pub fn oscillating_system<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, coupling: f64, shift: f64) -> LindbladSystem {
    let base = system(rng, n, k, coupling);
    let shifted = &base.hamiltonian().clone() + &Operator::identity(HilbertDim::new(n).expect("positive")).scale(c64::new(shift, 0.0));
    let h = direct_sum(base.hamiltonian(), &shifted);
    let ls = base.couplings().iter().map(|l| direct_sum(l, l)).collect();
    LindbladSystem::new(h, ls, 0.0).expect("hermitian by construction")
}

/// Haar-ish random unitary: Q factor of a Ginibre matrix (phases fixed).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Operator> {
    let g = ginibre(rng, n);
    let qr = g.mat().qr();
    let q = qr.compute_Q();
    let r = qr.R();
    Operator::from_fn(HilbertDim::new(n)?, |i, j| {
        let d = r[(j, j)];
        let m = cabs(d);
        let ph = if m > 0.0 { d / m } else { c64::new(1.0, 0.0) };
        q[(i, j)] * ph
    })
}
