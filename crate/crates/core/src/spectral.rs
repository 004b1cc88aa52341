//! Peripheral spectrum of a Lindblad generator.
//!
//! An eigenvalue is *peripheral* when its real part vanishes (to a scaled
//! threshold). Peripheral eigenvalues are grouped into clusters; for each
//! cluster the right eigenspace of `L` and the left eigenspace (eigenspace of
//! `L†` at the conjugate eigenvalue) are taken as numerical null spaces via
//! SVD and then paired by solving the cluster Gram system, so that
//! `tr(ω_i† σ_j) = δ_ij` over the whole peripheral block. Eigenvectors of
//! distinct clusters are bi-orthogonal automatically.
//!
//! Jordan chains of decaying modes are never formed; nothing downstream
//! needs them.

use alloc::vec::Vec;
use core::cmp::Ordering;

use faer::linalg::solvers::Solve;
use faer::{c64, Col, Mat, MatRef};

use crate::error::{Error, Result};
use crate::fmath::{abs, cabs, sqrt};
use crate::liouvillian::{SuperKind, Superoperator};
use crate::operator::{devectorize_as, hs_inner, hs_norm, vectorize, DensityMatrix, HilbertDim, Operator};
use crate::tolerance::ToleranceSet;

/// Eigenvalues closer than this (times `max(1, spectral radius)`) are
/// treated as one degenerate cluster.
pub const CLUSTER_RADIUS: f64 = 1e-8;

/// Drop tolerance for pruning Hermitianized candidates.
pub const PRUNE_TOL: f64 = 1e-8;

/// Largest tolerated `|tr(ω_i†σ_j) - δ_ij|` on the peripheral block.
pub const BIORTH_TOL: f64 = 1e-8;

/// One bi-orthogonal pair of peripheral eigen-operators.
#[derive(Debug, Clone, PartialEq)]
pub struct PeripheralMode {
    /// Eigenvalue of `L` (cluster center; exactly zero for stationary modes).
    pub eigenvalue: c64,
    /// Right eigen-operator `σ` with `L(σ) = λσ`.
    pub right: Operator,
    /// Dual left eigen-operator `ω` with `L†(ω) = conj(λ)ω`.
    pub left: Operator,
}

/// A peripheral cluster whose geometric multiplicity falls short.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defect {
    pub eigenvalue: c64,
    pub algebraic: usize,
    pub geometric: usize,
}

#[derive(Debug, Clone)]
pub struct SpectralData {
    generator: Superoperator,
    /// All `N²` eigenvalues sorted by `(Re, Im)`.
    pub eigenvalues: Vec<c64>,
    /// Eigensolver right eigenvectors, column `k` for `eigenvalues[k]`.
    pub eigenvectors: Mat<c64>,
    /// Indices into `eigenvalues` with `|Re λ| <= tol_perif`.
    pub peripheral_idx: Vec<usize>,
    /// Subset of `peripheral_idx` with `|λ| <= tol_perif`.
    pub zero_idx: Vec<usize>,
    /// `J` bi-orthogonal pairs: the `J0` stationary modes first, then the
    /// oscillating ones ordered by frequency.
    pub modes: Vec<PeripheralMode>,
    pub j: usize,
    pub j0: usize,
    pub defect_flag: bool,
    pub defects: Vec<Defect>,
    /// `max |tr(ω_i†σ_j) - δ_ij|` over the peripheral block.
    pub biorth_error: f64,
    /// Absolute peripheral threshold actually used.
    pub tol_perif: f64,
    /// Smallest `|Re λ|` among decaying modes; `None` if nothing decays.
    pub gap: Option<f64>,
}

impl SpectralData {
    pub fn generator(&self) -> &Superoperator {
        &self.generator
    }

    pub fn dim(&self) -> &HilbertDim {
        self.generator.dim()
    }

    pub fn zero_modes(&self) -> &[PeripheralMode] {
        &self.modes[..self.j0]
    }

    pub fn oscillating_modes(&self) -> &[PeripheralMode] {
        &self.modes[self.j0..]
    }

    pub fn right_ops(&self) -> impl Iterator<Item = &Operator> {
        self.modes.iter().map(|m| &m.right)
    }

    pub fn left_ops(&self) -> impl Iterator<Item = &Operator> {
        self.modes.iter().map(|m| &m.left)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|&z| cabs(z)).fold(0.0, f64::max)
    }

    /// Coefficients `tr(ω_i† x)` over all peripheral modes.
    pub fn peripheral_coefficients(&self, x: &Operator) -> Result<Vec<c64>> {
        self.modes.iter().map(|m| hs_inner(&m.left, x)).collect()
    }

    pub(crate) fn require_regular(&self) -> Result<()> {
        match self.defects.first() {
            Some(d) => Err(Error::DefectivePeripheral {
                eigenvalue: d.eigenvalue,
                algebraic: d.algebraic,
                geometric: d.geometric,
            }),
            None => Ok(()),
        }
    }
}

fn cmp_eigen(a: &(c64, usize), b: &(c64, usize)) -> Ordering {
    a.0.re
        .total_cmp(&b.0.re)
        .then(a.0.im.total_cmp(&b.0.im))
        .then(a.1.cmp(&b.1))
}

/// `m` right-singular vectors for the smallest singular values of
/// `mat - shift·I`, and how many of those fall below `cut`.
fn near_null_space(mat: MatRef<'_, c64>, shift: c64, m: usize, cut: f64) -> Result<(Mat<c64>, usize)> {
    let n = mat.nrows();
    let shifted = Mat::from_fn(n, n, |i, j| if i == j { mat[(i, j)] - shift } else { mat[(i, j)] });
    let svd = shifted.svd().map_err(|_| Error::Decomposition("singular value"))?;
    let s = svd.S().column_vector();
    let v = svd.V();
    let start = n - m;
    let basis = Mat::from_fn(n, m, |i, k| v[(i, start + k)]);
    let geometric = (0..n).filter(|&k| s[k].re <= cut).count();
    Ok((basis, geometric))
}

/// Group sorted peripheral indices into clusters of nearby eigenvalues.
fn cluster(eigs: &[c64], idx: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = idx.to_vec();
    order.sort_by(|&a, &b| eigs[a].im.total_cmp(&eigs[b].im).then(a.cmp(&b)));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in order {
        match clusters.last_mut() {
            Some(c) if c.iter().any(|&p| cabs(eigs[p] - eigs[k]) <= radius) => c.push(k),
            _ => clusters.push(alloc::vec![k]),
        }
    }
    clusters
}

/// Complete eigen-analysis of a generator.
///
/// Defective peripheral clusters do not fail this call; they set
/// `defect_flag` and are listed in `defects` so callers can refuse to build
/// conserved quantities from them.
pub fn full_spectrum(g: &Superoperator, tol: &ToleranceSet) -> Result<SpectralData> {
    if g.kind() != SuperKind::Generator {
        return Err(Error::WrongKind);
    }
    let dim = g.dim().clone();
    let mat = g.matrix();
    let n2 = mat.nrows();

    let eig = mat.eigen().map_err(|_| Error::Decomposition("eigen"))?;
    let s = eig.S().column_vector();
    let u = eig.U();
    let mut pairs: Vec<(c64, usize)> = (0..n2).map(|k| (s[k], k)).collect();
    pairs.sort_by(cmp_eigen);
    let eigenvalues: Vec<c64> = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = Mat::from_fn(n2, n2, |i, k| u[(i, pairs[k].1)]);

    let radius = eigenvalues.iter().map(|&z| cabs(z)).fold(0.0, f64::max);
    let scale = radius.max(1.0);
    let tol_perif = tol.perif * scale;

    let max_real = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if max_real > tol_perif {
        return Err(Error::UnstableSpectrum { max_real });
    }

    let peripheral_idx: Vec<usize> = (0..n2).filter(|&k| abs(eigenvalues[k].re) <= tol_perif).collect();
    let zero_idx: Vec<usize> = peripheral_idx
        .iter()
        .copied()
        .filter(|&k| cabs(eigenvalues[k]) <= tol_perif)
        .collect();
    let gap = (0..n2)
        .filter(|k| !peripheral_idx.contains(k))
        .map(|k| abs(eigenvalues[k].re))
        .reduce(f64::min);

    let svals = mat.singular_values().map_err(|_| Error::Decomposition("singular value"))?;
    let smax = svals.first().copied().unwrap_or(0.0);
    let cut = tol.rank * smax;
    let adjoint = mat.adjoint().to_owned();

    let mut clusters: Vec<(c64, usize)> = Vec::new();
    if !zero_idx.is_empty() {
        clusters.push((c64::new(0.0, 0.0), zero_idx.len()));
    }
    let rest: Vec<usize> = peripheral_idx
        .iter()
        .copied()
        .filter(|k| !zero_idx.contains(k))
        .collect();
    for c in cluster(&eigenvalues, &rest, (CLUSTER_RADIUS * scale).max(tol_perif)) {
        let m = c.len();
        let im = c.iter().map(|&k| eigenvalues[k].im).sum::<f64>() / m as f64;
        clusters.push((c64::new(0.0, im), m));
    }

    let mut modes = Vec::with_capacity(peripheral_idx.len());
    let mut defects = Vec::new();
    for &(center, m) in &clusters {
        let (right, geo_r) = near_null_space(mat, center, m, cut)?;
        let (left, geo_l) = near_null_space(adjoint.as_ref(), center.conj(), m, cut)?;
        let geometric = geo_r.min(geo_l).min(m);
        let defective = geometric < m;
        if defective {
            defects.push(Defect {
                eigenvalue: center,
                algebraic: m,
                geometric,
            });
        }
        let dual = if defective {
            left
        } else {
            // ω ← W · M^{-†} with M = W† R gives W'† R = I.
            let gram = left.adjoint() * &right;
            let inv_adj = gram.adjoint().to_owned().partial_piv_lu().solve(Mat::<c64>::identity(m, m));
            if !inv_adj.as_ref().is_all_finite() {
                return Err(Error::Biorthogonality { error: f64::INFINITY });
            }
            &left * &inv_adj
        };
        for k in 0..m {
            modes.push(PeripheralMode {
                eigenvalue: center,
                right: devectorize_as(right.col(k), &dim)?,
                left: devectorize_as(dual.col(k), &dim)?,
            });
        }
    }

    let mut biorth_error = 0.0f64;
    for (i, wi) in modes.iter().enumerate() {
        for (jx, sj) in modes.iter().enumerate() {
            let target = if i == jx { 1.0 } else { 0.0 };
            let v = hs_inner(&wi.left, &sj.right)?;
            biorth_error = biorth_error.max(cabs(v - c64::new(target, 0.0)));
        }
    }
    if defects.is_empty() && biorth_error > BIORTH_TOL {
        return Err(Error::Biorthogonality { error: biorth_error });
    }

    Ok(SpectralData {
        generator: g.clone(),
        j: peripheral_idx.len(),
        j0: zero_idx.len(),
        eigenvalues,
        eigenvectors,
        peripheral_idx,
        zero_idx,
        modes,
        defect_flag: !defects.is_empty(),
        defects,
        biorth_error,
        tol_perif,
        gap,
    })
}

/// A Hermitian pair `(X, Y)` that rotates at angular frequency `β` under
/// the Heisenberg evolution: `L†X = βY`, `L†Y = -βX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatingPair {
    pub frequency: f64,
    pub cos_idx: usize,
    pub sin_idx: usize,
}

/// Hermitian, real-linearly independent non-decaying observables.
#[derive(Debug, Clone)]
pub struct ConservedSet {
    /// `J` observables: the `j0` conserved quantities first, then the
    /// oscillating pairs.
    pub hermitian_obs: Vec<Operator>,
    /// Per observable: `0` for conserved quantities, `β` for oscillating ones.
    pub frequencies: Vec<f64>,
    pub oscillating_pairs: Vec<OscillatingPair>,
    pub j0: usize,
}

impl ConservedSet {
    pub fn len(&self) -> usize {
        self.hermitian_obs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hermitian_obs.is_empty()
    }

    pub fn conserved(&self) -> &[Operator] {
        &self.hermitian_obs[..self.j0]
    }

    /// HS-orthonormal basis (real inner product) of the real span.
    pub fn orthonormal_basis(&self) -> Vec<Operator> {
        let (basis, _) = prune_hermitian(&self.hermitian_obs, PRUNE_TOL, true);
        basis
    }

    /// Distance from `op` to the real span of the observables.
    pub fn span_residual(&self, op: &Operator) -> Result<f64> {
        let mut r = op.clone();
        for e in self.orthonormal_basis() {
            let c = hs_inner(&e, &r)?.re;
            r = r - &e.scale(c64::new(c, 0.0));
        }
        Ok(hs_norm(&r))
    }

    /// Real coefficients `c` with `op ≈ Σ c_k hermitian_obs[k]` (least squares).
    pub fn coordinates(&self, op: &Operator) -> Result<Vec<f64>> {
        let j = self.len();
        let mut gram = Mat::<f64>::zeros(j, j);
        let mut rhs = Col::<f64>::zeros(j);
        for (a, oa) in self.hermitian_obs.iter().enumerate() {
            for (b, ob) in self.hermitian_obs.iter().enumerate() {
                gram[(a, b)] = hs_inner(oa, ob)?.re;
            }
            rhs[a] = hs_inner(oa, op)?.re;
        }
        let sol = gram.partial_piv_lu().solve(&rhs);
        Ok(sol.iter().copied().collect())
    }
}

/// Pivoted modified Gram–Schmidt on Hermitian operators under the real HS
/// inner product. Returns the orthonormal survivors and the indices of the
/// candidates that produced them.
///
/// With `normalize` every candidate is first scaled to unit norm; without
/// it the caller's scaling is kept, so that roundoff-sized candidates stay
/// below `drop_tol`.
fn prune_hermitian(candidates: &[Operator], drop_tol: f64, normalize: bool) -> (Vec<Operator>, Vec<usize>) {
    let mut work: Vec<Operator> = candidates
        .iter()
        .map(|c| {
            let n = hs_norm(c);
            if normalize && n > 0.0 {
                c.scale(c64::new(1.0 / n, 0.0))
            } else {
                c.clone()
            }
        })
        .collect();
    let mut alive: Vec<bool> = alloc::vec![true; work.len()];
    let mut basis = Vec::new();
    let mut picked = Vec::new();
    loop {
        let best = (0..work.len())
            .filter(|&k| alive[k])
            .map(|k| (k, hs_norm(&work[k])))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        let Some((k, norm)) = best else { break };
        if norm <= drop_tol {
            break;
        }
        alive[k] = false;
        let e = work[k].scale(c64::new(1.0 / norm, 0.0));
        for (idx, w) in work.iter_mut().enumerate() {
            if alive[idx] {
                let c = hs_inner(&e, w).map(|z| z.re).unwrap_or(0.0);
                *w = &*w - &e.scale(c64::new(c, 0.0));
            }
        }
        basis.push(e);
        picked.push(k);
    }
    (basis, picked)
}

fn hermitian_pair(omega: &Operator) -> (Operator, Operator) {
    let dag = omega.adjoint();
    let x = (omega + &dag).scale(c64::new(0.5, 0.0));
    // (ω - ω†) / (2i)
    let y = (omega - &dag).scale(c64::new(0.0, -0.5));
    (x, y)
}

/// Hermitian non-decaying observables spanning the peripheral left space.
pub fn peripheral_observables(sd: &SpectralData) -> Result<ConservedSet> {
    sd.require_regular()?;

    // Hermitian parts of orthonormal ω have norm at most 1; a part that is
    // pure roundoff must not be rescaled into a spurious direction.
    let lefts: Vec<Operator> = sd.zero_modes().iter().map(|m| m.left.clone()).collect();
    let candidates: Vec<Operator> = orthonormalize_complex(&lefts)
        .iter()
        .flat_map(|w| {
            let (x, y) = hermitian_pair(w);
            [x, y]
        })
        .collect();
    let (conserved, _) = prune_hermitian(&candidates, PRUNE_TOL, false);
    if conserved.len() != sd.j0 {
        return Err(Error::RankDeficient {
            expected: sd.j0,
            found: conserved.len(),
        });
    }

    let mut hermitian_obs = conserved;
    let mut frequencies = alloc::vec![0.0; sd.j0];
    let mut oscillating_pairs = Vec::new();

    // Clusters with β > 0 carry the Hermitian pairs; their mirror clusters
    // at -β hold the adjoint operators and add nothing new.
    let osc = sd.oscillating_modes();
    let mut start = 0;
    let mut positive = 0usize;
    let mut negative = 0usize;
    while start < osc.len() {
        let center = osc[start].eigenvalue;
        let end = start + osc[start..].iter().take_while(|m| m.eigenvalue == center).count();
        if center.im > 0.0 {
            positive += end - start;
            let beta = center.im;
            let lefts: Vec<Operator> = osc[start..end].iter().map(|m| m.left.clone()).collect();
            for omega in orthonormalize_complex(&lefts) {
                let (x, y) = hermitian_pair(&omega);
                let cos_idx = hermitian_obs.len();
                hermitian_obs.push(x);
                hermitian_obs.push(y);
                frequencies.push(beta);
                frequencies.push(beta);
                oscillating_pairs.push(OscillatingPair {
                    frequency: beta,
                    cos_idx,
                    sin_idx: cos_idx + 1,
                });
            }
        } else {
            negative += end - start;
        }
        start = end;
    }
    if positive != negative {
        return Err(Error::RankDeficient {
            expected: sd.j,
            found: sd.j0 + 2 * positive,
        });
    }

    let (_, picked) = prune_hermitian(&hermitian_obs, PRUNE_TOL, true);
    if picked.len() != sd.j {
        return Err(Error::RankDeficient {
            expected: sd.j,
            found: picked.len(),
        });
    }

    Ok(ConservedSet {
        hermitian_obs,
        frequencies,
        oscillating_pairs,
        j0: sd.j0,
    })
}

fn orthonormalize_complex(ops: &[Operator]) -> Vec<Operator> {
    let mut out: Vec<Operator> = Vec::with_capacity(ops.len());
    for op in ops {
        let mut r = op.clone();
        for e in &out {
            let c = hs_inner(e, &r).unwrap_or(c64::new(0.0, 0.0));
            r = r - &e.scale(c);
        }
        let n = hs_norm(&r);
        out.push(r.scale(c64::new(1.0 / n, 0.0)));
    }
    out
}

/// `tr(ω̃_k ρ)` for every observable, in the set's order.
pub fn identification_vector(cs: &ConservedSet, rho: &DensityMatrix) -> Result<Vec<f64>> {
    cs.hermitian_obs
        .iter()
        .map(|w| hs_inner(w, rho.op()).map(|z| z.re))
        .collect()
}

/// Relative residual of the least-squares expansion of `x` in the
/// eigenvector basis (checks completeness of the eigenbasis).
pub fn reconstruction_residual(sd: &SpectralData, x: &Operator) -> Result<f64> {
    use faer::linalg::solvers::SolveLstsq;
    let v = vectorize(x);
    let qr = sd.eigenvectors.qr();
    let coeffs = qr.solve_lstsq(v.as_mat());
    let back = &sd.eigenvectors * &coeffs;
    let mut diff = 0.0;
    let mut norm = 0.0;
    for i in 0..v.nrows() {
        diff += (back[(i, 0)] - v[i]).norm_sqr();
        norm += v[i].norm_sqr();
    }
    Ok(sqrt(diff) / sqrt(norm).max(f64::MIN_POSITIVE))
}
