//! Exact charge-basis diagonalization used as an independent check of the
//! analytic model.
//!
//! The regular transmon lives on the Cooper-pair lattice N ∈ ℤ. With
//! Majorana couplings the operators e^{±iφ̂/2} move the island charge by a
//! single electron, so the Majorana transmon lives on the half-integer
//! lattice N = k/2. Within a fixed total parity, integer sites carry one
//! Majorana parity and half-integer sites the other.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::qubit_model::{junction_geometry, QubitParams, SpectrumBranches};
use crate::specfun::ComplexAmplitude;

/// Largest oscillator basis accepted by [`ho_operator_matrix`].
pub const MAX_OSCILLATOR_DIM: usize = 512;

/// Relative change of the low eigenvalues accepted when the cutoff doubles.
pub const CONVERGENCE_TOL: f64 = 1e-8;

/// Number of low eigenvalues checked for cutoff convergence.
pub const CONVERGENCE_LEVELS: usize = 10;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Charge step between neighbouring lattice sites, in Cooper pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    CooperPair,
    SingleElectron,
}

impl Spacing {
    pub fn value(self) -> f64 {
        match self {
            Spacing::CooperPair => 1.0,
            Spacing::SingleElectron => 0.5,
        }
    }

    /// Index distance corresponding to one Cooper pair.
    fn pair_offset(self) -> usize {
        match self {
            Spacing::CooperPair => 1,
            Spacing::SingleElectron => 2,
        }
    }
}

/// Parameters a lattice Hamiltonian was generated from, kept so that the
/// cutoff can be enlarged for convergence checks.
#[derive(Debug, Clone, PartialEq)]
pub enum LatticeModel {
    Transmon { e_c: f64, e_j: f64, n_g: f64 },
    MajoranaTransmon(QubitParams),
    Custom,
}

/// Banded Hermitian Hamiltonian on a charge lattice k ∈ [−K, K].
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeLatticeHamiltonian {
    pub cutoff: usize,
    pub spacing: Spacing,
    pub diagonal: Vec<f64>,
    /// ⟨k+1|H|k⟩; empty on the Cooper-pair lattice.
    pub band1: Vec<Complex64>,
    /// One-Cooper-pair hopping ⟨k+p|H|k⟩ with p = 1/spacing.
    pub band2: Vec<f64>,
    pub model: LatticeModel,
}

impl ChargeLatticeHamiltonian {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Charge (in Cooper pairs) of lattice index `i`.
    pub fn charge(&self, i: usize) -> f64 {
        (i as f64 - self.cutoff as f64) * self.spacing.value()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::from_diagonal_element(n, n, Complex64::new(0.0, 0.0));
        for (i, &d) in self.diagonal.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        for (i, &c) in self.band1.iter().enumerate() {
            m[(i + 1, i)] = c;
            m[(i, i + 1)] = c.conj();
        }
        let p = self.spacing.pair_offset();
        for (i, &t) in self.band2.iter().enumerate() {
            m[(i + p, i)] = Complex64::new(t, 0.0);
            m[(i, i + p)] = Complex64::new(t, 0.0);
        }
        m
    }

    fn to_dense_real(&self) -> DMatrix<f64> {
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal));
        let p = self.spacing.pair_offset();
        for (i, &t) in self.band2.iter().enumerate() {
            m[(i + p, i)] = t;
            m[(i, i + p)] = t;
        }
        m
    }

    /// Largest absolute row sum, an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let dense = self.to_dense();
        dense
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Same model rebuilt with a different cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        match &self.model {
            LatticeModel::Transmon { e_c, e_j, n_g } => build_transmon(*e_c, *e_j, *n_g, cutoff),
            LatticeModel::MajoranaTransmon(p) => build_majorana_transmon(p, cutoff),
            LatticeModel::Custom => Err(domain("custom lattice cannot be rebuilt")),
        }
    }
}

/// Minimal cutoff (in Cooper pairs) for a transmon of the given ratio.
pub fn required_charge_range(e_c: f64, e_j: f64, n_g: f64) -> usize {
    (n_g.abs().ceil() + (5.0 * e_j.max(0.0) / e_c).sqrt().ceil()) as usize
}

/// Default cutoff K: 4E_C(K·spacing − |n_g|)² ≥ 25·E_J + 400·E_C, and at
/// least the minimal range. The E_C term keeps the lowest ten levels away
/// from the edge in the charge regime.
pub fn default_cutoff(e_c: f64, e_j_total: f64, n_g: f64, spacing: Spacing) -> usize {
    let charge = n_g.abs() + ((25.0 * e_j_total.max(0.0) + 400.0 * e_c) / (4.0 * e_c)).sqrt();
    let charge = charge
        .max(required_charge_range(e_c, e_j_total, n_g) as f64)
        .max(1.0);
    (charge / spacing.value()).ceil() as usize
}

fn check_cutoff(e_c: f64, e_j: f64, n_g: f64, cutoff: usize, spacing: Spacing) -> Result<()> {
    let needed = required_charge_range(e_c, e_j, n_g);
    let needed_sites = (needed as f64 / spacing.value()).ceil() as usize;
    if cutoff < needed_sites.max(1) {
        return Err(Error::CutoffTooSmall {
            cutoff,
            required: needed_sites.max(1),
        });
    }
    Ok(())
}

/// 4E_C(N̂ − n_g)² − E_J cos φ̂ on the Cooper-pair lattice.
pub fn build_transmon(
    e_c: f64,
    e_j: f64,
    n_g: f64,
    cutoff: usize,
) -> Result<ChargeLatticeHamiltonian> {
    if !(e_c > 0.0) || !(e_j >= 0.0) || !n_g.is_finite() {
        return Err(domain(format!(
            "need E_C > 0, E_J >= 0, finite n_g; got {e_c}, {e_j}, {n_g}"
        )));
    }
    check_cutoff(e_c, e_j, n_g, cutoff, Spacing::CooperPair)?;
    let dim = 2 * cutoff + 1;
    let diagonal = (0..dim)
        .map(|i| {
            let q = i as f64 - cutoff as f64 - n_g;
            4.0 * e_c * q * q
        })
        .collect();
    Ok(ChargeLatticeHamiltonian {
        cutoff,
        spacing: Spacing::CooperPair,
        diagonal,
        band1: Vec::new(),
        band2: vec![-0.5 * e_j; dim - 1],
        model: LatticeModel::Transmon { e_c, e_j, n_g },
    })
}

/// Single-electron hopping amplitude ⟨k+1|H_M|k⟩ produced by the two
/// Majorana couplings.
pub fn majorana_hopping(p: &QubitParams, theta: f64) -> Complex64 {
    let phase0 = -(PI * p.flux - theta) / 2.0;
    let phase1 = (PI * p.flux + theta) / 2.0;
    0.5 * (Complex64::from_polar(p.e_m0, phase0) + Complex64::from_polar(p.e_m1, phase1))
}

/// Majorana transmon on the half-integer charge lattice.
pub fn build_majorana_transmon(p: &QubitParams, cutoff: usize) -> Result<ChargeLatticeHamiltonian> {
    let geo = junction_geometry(p)?;
    check_cutoff(p.e_c, geo.e_j_eff, p.n_g, cutoff, Spacing::SingleElectron)?;
    let dim = 2 * cutoff + 1;
    let diagonal = (0..dim)
        .map(|i| {
            let q = 0.5 * (i as f64 - cutoff as f64) - p.n_g;
            4.0 * p.e_c * q * q
        })
        .collect();
    let hop = majorana_hopping(p, geo.theta);
    Ok(ChargeLatticeHamiltonian {
        cutoff,
        spacing: Spacing::SingleElectron,
        diagonal,
        band1: vec![hop; dim - 1],
        band2: vec![-0.5 * geo.e_j_eff; dim.saturating_sub(2)],
        model: LatticeModel::MajoranaTransmon(*p),
    })
}

/// Ascending eigenvalues and, optionally, eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<DMatrix<Complex64>>,
    /// Largest change among the low eigenvalues when the cutoff is doubled;
    /// `None` for matrices without a generating model.
    pub convergence_delta: Option<f64>,
}

/// Dense Hermitian eigensolver.
pub fn eigh(
    matrix: &DMatrix<Complex64>,
    vectors: bool,
) -> Result<(Vec<f64>, Option<DMatrix<Complex64>>)> {
    if !matrix.is_square() {
        return Err(domain("matrix must be square"));
    }
    if matrix
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(domain("matrix has non-finite entries"));
    }
    if !vectors {
        let mut values: Vec<f64> = matrix.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        return Ok((values, None));
    }
    let eig = SymmetricEigen::try_new(matrix.clone(), EIG_EPS, EIG_MAX_ITER).ok_or_else(|| {
        Error::NoConvergence(format!(
            "{0}x{0} Hermitian matrix after {EIG_MAX_ITER} sweeps",
            matrix.nrows()
        ))
    })?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = vectors.then(|| {
        DMatrix::from_fn(matrix.nrows(), order.len(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        })
    });
    Ok((values, vecs))
}

fn eigh_real(matrix: DMatrix<f64>) -> Result<Vec<f64>> {
    let n = matrix.nrows();
    let eig = SymmetricEigen::try_new(matrix, EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::NoConvergence(format!("{n}x{n} symmetric matrix")))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn eigenvalues_only(h: &ChargeLatticeHamiltonian) -> Result<Vec<f64>> {
    if h.band1.is_empty() {
        eigh_real(h.to_dense_real())
    } else {
        eigh(&h.to_dense(), false).map(|(v, _)| v)
    }
}

fn energy_scale(h: &ChargeLatticeHamiltonian) -> f64 {
    match &h.model {
        LatticeModel::Transmon { e_c, .. } => *e_c,
        LatticeModel::MajoranaTransmon(p) => p.e_c,
        LatticeModel::Custom => 1.0,
    }
}

/// Diagonalizes `h` and verifies cutoff convergence by doubling K.
pub fn hermitian_eigensolve(h: &ChargeLatticeHamiltonian, vectors: bool) -> Result<EigenResult> {
    let (eigenvalues, eigenvectors) = if vectors {
        eigh(&h.to_dense(), true)?
    } else {
        (eigenvalues_only(h)?, None)
    };
    let convergence_delta = match h.model {
        LatticeModel::Custom => None,
        _ => {
            let bigger = eigenvalues_only(&h.with_cutoff(2 * h.cutoff)?)?;
            let scale = energy_scale(h);
            let mut worst: f64 = 0.0;
            for (a, b) in eigenvalues.iter().zip(&bigger).take(CONVERGENCE_LEVELS) {
                let delta = (a - b).abs();
                if delta > CONVERGENCE_TOL * a.abs().max(scale) {
                    return Err(Error::NoConvergence(format!(
                        "eigenvalue {a} moved by {delta} when cutoff doubled from {}",
                        h.cutoff
                    )));
                }
                worst = worst.max(delta);
            }
            Some(worst)
        }
    };
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        convergence_delta,
    })
}

/// Exact transmon spectrum with the default cutoff.
pub fn transmon_levels(e_c: f64, e_j: f64, n_g: f64) -> Result<Vec<f64>> {
    let cutoff = default_cutoff(e_c, e_j, n_g, Spacing::CooperPair);
    hermitian_eigensolve(&build_transmon(e_c, e_j, n_g, cutoff)?, false).map(|r| r.eigenvalues)
}

/// Odd-sector minus even-sector ground energy; +ε₀ at n_g = 0.
pub fn exact_even_odd_splitting(e_c: f64, e_j: f64, n_g: f64) -> Result<f64> {
    let cutoff = default_cutoff(
        e_c,
        e_j,
        n_g.abs().max((n_g - 0.5).abs()),
        Spacing::CooperPair,
    );
    let even = hermitian_eigensolve(&build_transmon(e_c, e_j, n_g, cutoff)?, false)?;
    let odd = hermitian_eigensolve(&build_transmon(e_c, e_j, n_g - 0.5, cutoff)?, false)?;
    Ok(odd.eigenvalues[0] - even.eigenvalues[0])
}

/// Exact Majorana-transmon spectrum with the default cutoff.
pub fn majorana_levels(p: &QubitParams) -> Result<Vec<f64>> {
    let cutoff = default_cutoff(p.e_c, p.e_j_sum(), p.n_g, Spacing::SingleElectron);
    hermitian_eigensolve(&build_majorana_transmon(p, cutoff)?, false).map(|r| r.eigenvalues)
}

/// Four-branch spectrum read off the lowest two doublets of the exact model.
pub fn exact_spectrum(p: &QubitParams) -> Result<SpectrumBranches> {
    let geo = junction_geometry(p)?;
    geo.require_plasma(p.flux)?;
    let e = majorana_levels(p)?;
    if e.len() < 4 {
        return Err(domain("lattice too small for two doublets"));
    }
    let omega_01 = 0.5 * ((e[2] + e[3]) - (e[0] + e[1]));
    Ok(SpectrumBranches::from_doublets(
        omega_01,
        e[1] - e[0],
        e[3] - e[2],
    ))
}

/// Operators built numerically in a truncated oscillator basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// cos((φ± + φ̂)/2) with e^{iφ̂/2} = D(μ).
    CosHalf,
    /// sin((φ± + φ̂)/2).
    SinHalf,
    /// D(μ) = exp(μa† − μ*a).
    Displacement,
}

#[derive(Debug, Clone)]
pub struct OscillatorOperator {
    pub matrix: DMatrix<Complex64>,
    /// Levels below this index are free of truncation artifacts.
    pub safe_dim: usize,
    /// Set when the ground-state column leaks noticeably into the top 10% of
    /// the basis.
    pub truncation_warning: bool,
}

fn displacement_matrix(mu: ComplexAmplitude, dim: usize) -> Result<DMatrix<Complex64>> {
    // D(μ) = exp(iG) with G = −i(μa† − μ*a) Hermitian.
    let i = Complex64::new(0.0, 1.0);
    let mut g = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for n in 0..dim.saturating_sub(1) {
        let s = ((n + 1) as f64).sqrt();
        g[(n + 1, n)] = -i * mu * s;
        g[(n, n + 1)] = i * mu.conj() * s;
    }
    let (values, vectors) = eigh(&g, true)?;
    let v = vectors.expect("vectors requested");
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        values.iter().map(|&l| Complex64::from_polar(1.0, l)),
    ));
    Ok(&v * phases * v.adjoint())
}

pub fn ho_operator_matrix(
    kind: OperatorKind,
    phase_shift: f64,
    mu: ComplexAmplitude,
    dim: usize,
) -> Result<OscillatorOperator> {
    if dim == 0 || dim > MAX_OSCILLATOR_DIM {
        return Err(domain(format!(
            "oscillator dimension must be in 1..={MAX_OSCILLATOR_DIM}, got {dim}"
        )));
    }
    let plus = displacement_matrix(mu, dim)?;
    let safe_dim = dim - dim.div_ceil(10);
    let leak: f64 = plus
        .column(0)
        .iter()
        .skip(safe_dim)
        .map(|z| z.norm_sqr())
        .sum();
    let e = Complex64::from_polar(1.0, 0.5 * phase_shift);
    let matrix = match kind {
        OperatorKind::Displacement => plus,
        OperatorKind::CosHalf => (&plus * e + plus.adjoint() * e.conj()) * Complex64::new(0.5, 0.0),
        OperatorKind::SinHalf => {
            (&plus * e - plus.adjoint() * e.conj()) * Complex64::new(0.0, -0.5)
        }
    };
    Ok(OscillatorOperator {
        matrix,
        safe_dim,
        truncation_warning: leak > 1e-10,
    })
}
