//! Qubit-chain builders: Pauli strings and the boundary-driven XXZ chain.
//!
//! Single-qubit basis: `|1⟩ = (1, 0)ᵀ`, `|0⟩ = (0, 1)ᵀ`, so
//! `σ⁻ = |1⟩⟨0|`, `σ⁺ = |0⟩⟨1|`, `σᶻ = |1⟩⟨1| - |0⟩⟨0|`,
//! `σˣ = σ⁺ + σ⁻` and `σʸ = i(σ⁺ - σ⁻)`. Multi-qubit kets are written with
//! site 1 as the leftmost tensor factor, e.g. `|0110⟩`.

use alloc::vec::Vec;

use faer::c64;

use crate::attraction::{asymptotic_state, AsymptoticOutcome};
use crate::error::{Error, Result};
use crate::liouvillian::{build_generator, LindbladSystem};
use crate::operator::{embed_site, hs_inner, DensityMatrix, HilbertDim, Operator};
use crate::spectral::{full_spectrum, SpectralData};
use crate::tolerance::ToleranceSet;

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
const ONE: c64 = c64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliSymbol {
    I,
    X,
    Y,
    Z,
    /// `σ⁺ = |0⟩⟨1|`
    Plus,
    /// `σ⁻ = |1⟩⟨0|`
    Minus,
}

impl PauliSymbol {
    pub fn from_char(c: char) -> Option<Self> {
        Some(match c {
            'I' => Self::I,
            'X' => Self::X,
            'Y' => Self::Y,
            'Z' => Self::Z,
            '+' => Self::Plus,
            '-' | '−' => Self::Minus,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
            Self::Plus => '+',
            Self::Minus => '-',
        }
    }

    /// The 2×2 matrix in the `(|1⟩, |0⟩)` basis.
    pub fn matrix(self) -> Operator {
        let i = c64::new(0.0, 1.0);
        let rows: [[c64; 2]; 2] = match self {
            Self::I => [[ONE, ZERO], [ZERO, ONE]],
            Self::X => [[ZERO, ONE], [ONE, ZERO]],
            Self::Y => [[ZERO, -i], [i, ZERO]],
            Self::Z => [[ONE, ZERO], [ZERO, -ONE]],
            Self::Plus => [[ZERO, ZERO], [ONE, ZERO]],
            Self::Minus => [[ZERO, ONE], [ZERO, ZERO]],
        };
        Operator::from_rows(&[&rows[0], &rows[1]]).expect("2x2 literal")
    }
}

/// `coefficient · P₁ ⊗ P₂ ⊗ … ⊗ P_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: c64,
    pub string: Vec<PauliSymbol>,
}

impl PauliTerm {
    pub fn parse(coefficient: c64, s: &str) -> Result<Self> {
        let string = s
            .chars()
            .map(|c| PauliSymbol::from_char(c).ok_or(Error::InvalidPauli("unknown symbol")))
            .collect::<Result<Vec<_>>>()?;
        if string.is_empty() {
            return Err(Error::InvalidPauli("empty string"));
        }
        Ok(Self { coefficient, string })
    }

    pub fn sites(&self) -> usize {
        self.string.len()
    }

    pub fn label(&self) -> alloc::string::String {
        self.string.iter().map(|s| s.as_char()).collect()
    }

    pub fn to_operator(&self) -> Operator {
        let chain = HilbertDim::qubits(self.sites()).expect("nonempty string");
        let mut op = Operator::identity(chain.clone()).scale(self.coefficient);
        for (site, sym) in self.string.iter().enumerate() {
            if *sym != PauliSymbol::I {
                let e = embed_site(&sym.matrix(), site, &chain).expect("site in range");
                op = &op * &e;
            }
        }
        op
    }
}

/// Sum of Pauli terms; all strings must have the same length.
pub fn pauli_sum(terms: &[PauliTerm]) -> Result<Operator> {
    let first = terms.first().ok_or(Error::InvalidPauli("no terms"))?;
    let sites = first.sites();
    let mut acc = Operator::zeros(HilbertDim::qubits(sites)?);
    for t in terms {
        if t.sites() != sites {
            return Err(Error::InvalidPauli("strings of different length"));
        }
        acc = acc + &t.to_operator();
    }
    Ok(acc)
}

/// Computational-basis index of a ket such as `"0110"`.
pub fn basis_index(bits: &str) -> Result<usize> {
    if bits.is_empty() {
        return Err(Error::InvalidPauli("empty ket"));
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        '1' => Ok(acc << 1),
        '0' => Ok((acc << 1) | 1),
        _ => Err(Error::InvalidPauli("ket digits must be 0 or 1")),
    })
}

/// Basis vector for a ket such as `"0110"`.
pub fn ket(bits: &str) -> Result<Vec<c64>> {
    let idx = basis_index(bits)?;
    let mut v = alloc::vec![ZERO; 1 << bits.chars().count()];
    v[idx] = ONE;
    Ok(v)
}

/// Boundary-driven XXZ chain parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XxzSpec {
    pub n_sites: usize,
    /// Prefactor of `σ₁⁻ σ_N⁺`.
    pub g_minus: f64,
    /// Prefactor of `σ₁⁺ σ_N⁻`.
    pub g_plus: f64,
}

impl XxzSpec {
    pub fn new(n_sites: usize) -> Self {
        Self {
            n_sites,
            g_minus: 2.0,
            g_plus: 1.0,
        }
    }
}

impl Default for XxzSpec {
    fn default() -> Self {
        Self::new(4)
    }
}

fn site_op(sym: PauliSymbol, site: usize, chain: &HilbertDim) -> Operator {
    embed_site(&sym.matrix(), site, chain).expect("site in range")
}

/// `H = Σ_j 2(σ_j⁻σ_{j+1}⁺ + σ_j⁺σ_{j+1}⁻) + σ_jᶻσ_{j+1}ᶻ` with couplings
/// `L₁ = g₋ σ₁⁻σ_N⁺`, `L₂ = g₊ σ₁⁺σ_N⁻`.
pub fn build_xxz(spec: &XxzSpec) -> Result<LindbladSystem> {
    use PauliSymbol::{Minus, Plus, Z};
    let n = spec.n_sites;
    if n < 2 {
        return Err(Error::InvalidDimension("XXZ chain needs at least 2 sites"));
    }
    let chain = HilbertDim::qubits(n)?;
    let mut h = Operator::zeros(chain.clone());
    for j in 0..n - 1 {
        let hop = &(&site_op(Minus, j, &chain) * &site_op(Plus, j + 1, &chain))
            + &(&site_op(Plus, j, &chain) * &site_op(Minus, j + 1, &chain));
        let zz = &site_op(Z, j, &chain) * &site_op(Z, j + 1, &chain);
        h = h + &hop.scale(c64::new(2.0, 0.0)) + &zz;
    }
    let l1 = (&site_op(Minus, 0, &chain) * &site_op(Plus, n - 1, &chain)).scale(c64::new(spec.g_minus, 0.0));
    let l2 = (&site_op(Plus, 0, &chain) * &site_op(Minus, n - 1, &chain)).scale(c64::new(spec.g_plus, 0.0));
    LindbladSystem::new(h, alloc::vec![l1, l2], 0.0)
}

/// `J_i = σ_iˣσ_{i+1}ʸ - σ_iʸσ_{i+1}ˣ` for 1-based `2 <= i <= n_sites - 1`.
pub fn spin_current_op(n_sites: usize, i: usize) -> Result<Operator> {
    use PauliSymbol::{X, Y};
    if n_sites < 3 || i < 2 || i > n_sites - 1 {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: 2,
            hi: n_sites.saturating_sub(1),
        });
    }
    let chain = HilbertDim::qubits(n_sites)?;
    let (a, b) = (i - 1, i);
    let xy = &site_op(X, a, &chain) * &site_op(Y, b, &chain);
    let yx = &site_op(Y, a, &chain) * &site_op(X, b, &chain);
    Ok(xy - &yx)
}

/// Projector onto a fixed total-`σᶻ` subspace.
#[derive(Debug, Clone)]
pub struct SectorProjector {
    /// Eigenvalue of `Σ_j σ_jᶻ` on the subspace.
    pub magnetization: i32,
    pub projector: Operator,
}

/// Magnetization-sector projectors, from `+n_sites` down to `-n_sites`.
pub fn sector_projectors(n_sites: usize) -> Result<Vec<SectorProjector>> {
    let chain = HilbertDim::qubits(n_sites)?;
    let dim = chain.n();
    let magnetization = |idx: usize| -> i32 {
        // bit set ⇔ that site is |0⟩
        let downs = idx.count_ones() as i32;
        n_sites as i32 - 2 * downs
    };
    (0..=n_sites)
        .map(|downs| {
            let m = n_sites as i32 - 2 * downs as i32;
            let projector = Operator::from_fn(chain.clone(), |a, b| {
                if a == b && magnetization(a) == m {
                    ONE
                } else {
                    ZERO
                }
            })?;
            Ok(SectorProjector {
                magnetization: m,
                projector,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| {
            debug_assert_eq!(v.iter().map(|p| p.projector.trace().re as usize).sum::<usize>(), dim);
            v
        })
}

/// `(|0110⟩ - |1001⟩)/√2`: the dark state of the four-site chain.
pub fn dark_state_vector() -> Vec<c64> {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let a = ket("0110").expect("literal");
    let b = ket("1001").expect("literal");
    a.iter().zip(&b).map(|(x, y)| (*x - *y) * s).collect()
}

/// The one-magnetization-flip basis `e₁..e₄ = |0111⟩, |1011⟩, |1101⟩, |1110⟩`.
pub const S2_BASIS: [&str; 4] = ["0111", "1011", "1101", "1110"];

/// Published five-digit values of the current-carrying steady state:
/// `(i, j, ⟨e_i|ρ|e_j⟩)` for `i >= j`, 1-based indices into [`S2_BASIS`].
pub const PUBLISHED_RHO_SS2: [(usize, usize, f64, f64); 10] = [
    (4, 4, 0.3401, 0.0),
    (3, 3, 0.2770, 0.0),
    (2, 2, 0.2308, 0.0),
    (1, 1, 0.1521, 0.0),
    (4, 3, 0.0833, 0.0671),
    (4, 2, 0.0370, 0.0463),
    (4, 1, 0.0, 0.0370),
    (3, 2, 0.0347, 0.0671),
    (3, 1, -0.0093, 0.0463),
    (2, 1, -0.0208, 0.0671),
];

/// Published spin current of the current-carrying steady state.
pub const PUBLISHED_SPIN_CURRENT: f64 = 0.2684;

/// `⟨e_i|ρ|e_j⟩` with 1-based indices into [`S2_BASIS`].
pub fn s2_element(rho: &Operator, i: usize, j: usize) -> c64 {
    let a = basis_index(S2_BASIS[i - 1]).expect("literal");
    let b = basis_index(S2_BASIS[j - 1]).expect("literal");
    rho.get(a, b)
}

/// The two steady states of the four-site chain analysed in the case study.
#[derive(Debug, Clone)]
pub struct ReferenceStates {
    /// Dark state `|Ψ⟩⟨Ψ|`, `|Ψ⟩ = (|0110⟩ - |1001⟩)/√2`.
    pub insulating: DensityMatrix,
    /// Limit of the uniform mixture on the one-flip sector; carries current.
    pub conducting: DensityMatrix,
}

/// Uniform mixture over the one-flip sector `S₂`.
pub fn s2_uniform_mixture() -> DensityMatrix {
    let chain = HilbertDim::qubits(4).expect("4 sites");
    let idx: Vec<usize> = S2_BASIS.iter().map(|k| basis_index(k).expect("literal")).collect();
    let op = Operator::from_fn(chain, |a, b| {
        if a == b && idx.contains(&a) {
            c64::new(0.25, 0.0)
        } else {
            ZERO
        }
    })
    .expect("finite");
    DensityMatrix::new_unchecked(op)
}

/// The three initial states in `D(S₂)` used for the relaxation curves.
pub fn s2_initial_states() -> [DensityMatrix; 3] {
    let chain = HilbertDim::qubits(4).expect("4 sites");
    let with_chain = |rho: DensityMatrix| {
        DensityMatrix::new_unchecked(rho.into_op().with_factors(chain.clone()).expect("16"))
    };
    let first = DensityMatrix::pure(&ket("1101").expect("literal")).expect("nonzero");
    let sup: Vec<c64> = ket("1110")
        .expect("literal")
        .iter()
        .zip(ket("1011").expect("literal"))
        .map(|(a, b)| *a + b)
        .collect();
    let second = DensityMatrix::pure(&sup).expect("nonzero");
    let weights = [("0111", 0.5), ("1011", 1.0 / 3.0), ("1110", 1.0 / 6.0)];
    let third = Operator::from_fn(chain.clone(), |a, b| {
        weights
            .iter()
            .find(|(k, _)| a == b && basis_index(k).expect("literal") == a)
            .map_or(ZERO, |(_, w)| c64::new(*w, 0.0))
    })
    .expect("finite");
    [
        with_chain(first),
        with_chain(second),
        DensityMatrix::new_unchecked(third),
    ]
}

/// Reference states computed from the spectral data of the default
/// four-site chain, cross-checked against the published digits.
pub fn reference_states_with(sd: &SpectralData, tol: &ToleranceSet) -> Result<ReferenceStates> {
    let chain = HilbertDim::qubits(4)?;
    let insulating = DensityMatrix::pure(&dark_state_vector())?;
    let insulating = DensityMatrix::new_unchecked(insulating.into_op().with_factors(chain)?);

    let conducting = match asymptotic_state(sd, &s2_uniform_mixture(), tol)? {
        AsymptoticOutcome::Limit(rho) => rho,
        AsymptoticOutcome::Oscillatory(_) => {
            return Err(Error::ReferenceMismatch("uniform S2 mixture does not converge"))
        }
    };
    check_published(conducting.op())?;
    Ok(ReferenceStates {
        insulating,
        conducting,
    })
}

/// Build the default chain, analyse it, and derive the reference states.
pub fn reference_states(tol: &ToleranceSet) -> Result<ReferenceStates> {
    let sys = build_xxz(&XxzSpec::default())?;
    let sd = full_spectrum(&build_generator(&sys), tol)?;
    reference_states_with(&sd, tol)
}

fn check_published(rho: &Operator) -> Result<()> {
    for &(i, j, re, im) in PUBLISHED_RHO_SS2.iter().take(5) {
        let got = s2_element(rho, i, j);
        if (got - c64::new(re, im)).norm_sqr() > 5e-4 * 5e-4 {
            return Err(Error::ReferenceMismatch("steady state differs from published digits"));
        }
    }
    for site in [2, 3] {
        let current = hs_inner(&spin_current_op(4, site)?, rho)?.re;
        if (current - PUBLISHED_SPIN_CURRENT).abs() > 1e-3 {
            return Err(Error::ReferenceMismatch("spin current differs from published value"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_match_raising_lowering_convention() {
        let plus = PauliSymbol::Plus.matrix();
        let minus = PauliSymbol::Minus.matrix();
        let x = &plus + &minus;
        let y = (&plus - &minus).scale(c64::new(0.0, 1.0));
        assert_eq!(x, PauliSymbol::X.matrix());
        assert_eq!(y, PauliSymbol::Y.matrix());
        // σ⁻|0⟩ = |1⟩
        assert_eq!(minus.get(0, 1), ONE);
    }

    #[test]
    fn parse_and_reject() {
        let t = PauliTerm::parse(ONE, "Z+-I").unwrap();
        assert_eq!(t.label(), "Z+-I");
        assert!(PauliTerm::parse(ONE, "ZQ").is_err());
        assert!(PauliTerm::parse(ONE, "").is_err());
        assert!(pauli_sum(&[t.clone(), PauliTerm::parse(ONE, "ZZ").unwrap()]).is_err());
    }

    #[test]
    fn basis_indices() {
        assert_eq!(basis_index("1111").unwrap(), 0);
        assert_eq!(basis_index("0000").unwrap(), 15);
        assert_eq!(basis_index("0110").unwrap(), 0b1001);
        assert!(basis_index("012").is_err());
    }

    #[test]
    fn two_site_chain_is_hermitian() {
        let sys = build_xxz(&XxzSpec::new(2)).unwrap();
        assert_eq!(sys.hamiltonian().hermitian_deviation(), 0.0);
        assert_eq!(sys.n(), 4);
        let expected = pauli_sum(&[
            PauliTerm::parse(c64::new(2.0, 0.0), "-+").unwrap(),
            PauliTerm::parse(c64::new(2.0, 0.0), "+-").unwrap(),
            PauliTerm::parse(ONE, "ZZ").unwrap(),
        ])
        .unwrap();
        assert_eq!(sys.hamiltonian().mat(), expected.mat());
        assert!(build_xxz(&XxzSpec::new(1)).is_err());
    }

    #[test]
    fn spin_current_range() {
        assert!(spin_current_op(4, 1).is_err());
        assert!(spin_current_op(4, 4).is_err());
        for i in [2, 3] {
            let j = spin_current_op(4, i).unwrap();
            assert_eq!(j.hermitian_deviation(), 0.0);
            assert_eq!(j.trace(), ZERO);
        }
    }

    #[test]
    fn sector_ranks_and_completeness() {
        let sectors = sector_projectors(4).unwrap();
        let ranks: Vec<i64> = sectors.iter().map(|p| p.projector.trace().re as i64).collect();
        assert_eq!(ranks, [1, 4, 6, 4, 1]);
        let mags: Vec<i32> = sectors.iter().map(|p| p.magnetization).collect();
        assert_eq!(mags, [4, 2, 0, -2, -4]);
        let mut sum = Operator::zeros(HilbertDim::qubits(4).unwrap());
        for p in &sectors {
            assert_eq!((&p.projector * &p.projector).mat(), p.projector.mat());
            sum = sum + &p.projector;
        }
        assert_eq!(sum.mat(), Operator::identity(HilbertDim::qubits(4).unwrap()).mat());
        // S₂ contains |1110⟩
        assert_eq!(sectors[1].projector.get(basis_index("1110").unwrap(), basis_index("1110").unwrap()), ONE);
    }

    #[test]
    fn initial_states_are_density_matrices() {
        let tol = ToleranceSet::default();
        for rho in s2_initial_states() {
            crate::operator::validate_density(rho.into_op(), &tol).unwrap();
        }
        crate::operator::validate_density(s2_uniform_mixture().into_op(), &tol).unwrap();
    }
}
