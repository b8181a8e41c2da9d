use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::GateMatrix;
use crate::report::ExperimentReport;
use crate::seed::{seeded, SeededRng};
use crate::state::{Amplitude, QubitIndex, StateVector, ZERO};
use crate::subroutines::apply_qft;
use crate::circuit::Circuit;

const HERMITIAN_TOL: f64 = 1e-12;

pub(crate) fn to_dmatrix(m: &GateMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.dim(), m.dim(), |r, c| m.get(r, c))
}

pub(crate) fn from_dmatrix(m: &DMatrix<Complex<f64>>) -> GateMatrix {
    let mut out = GateMatrix::zeros(m.nrows());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.set(r, c, m[(r, c)]);
        }
    }
    out
}

/// `A x = b` with Hermitian `A` of dimension `2^k`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    a: GateMatrix,
    b: StateVector,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex<f64>>,
    kappa: f64,
}

impl LinearSystem {
    /// `b` is normalized here.
    pub fn new(a: GateMatrix, b: Vec<Amplitude>) -> Result<Self> {
        if a.n_qubits().is_none() {
            return Err(Error::NotPowerOfTwo(a.dim()));
        }
        if a.dim() > 64 {
            return Err(Error::InvalidParameter(format!("dimension {} exceeds 64", a.dim())));
        }
        let defect = a.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        if b.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.len(),
            });
        }
        let b = StateVector::normalized(b)?;
        let eig = to_dmatrix(&a).symmetric_eigen();
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let abs: Vec<f64> = eigenvalues.iter().map(|l| l.abs()).collect();
        let (lo, hi) = abs
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if lo < 1e-12 {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        Ok(Self {
            a,
            b,
            eigenvalues,
            eigenvectors: eig.eigenvectors,
            kappa: hi / lo,
        })
    }

    /// Embeds a general square `A` as `[[0, A], [A†, 0]]` with `b` padded by
    /// zeros; the solution sits in the lower half.
    pub fn hermitized(a: &GateMatrix, b: Vec<Amplitude>) -> Result<Self> {
        let n = a.dim();
        let mut c = GateMatrix::zeros(2 * n);
        for r in 0..n {
            for col in 0..n {
                c.set(r, n + col, a.get(r, col));
                c.set(n + col, r, a.get(r, col).conj());
            }
        }
        let mut padded = b;
        padded.resize(2 * n, ZERO);
        Self::new(c, padded)
    }

    pub fn matrix(&self) -> &GateMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &StateVector {
        &self.b
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn n_qubits(&self) -> usize {
        self.b.n_qubits()
    }

    /// `e^{iAτ}` from the eigendecomposition.
    pub fn evolution(&self, tau: f64) -> GateMatrix {
        let v = &self.eigenvectors;
        let phases = DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|l| Complex::from_polar(1.0, l * tau)),
        );
        from_dmatrix(&(v * DMatrix::from_diagonal(&phases) * v.adjoint()))
    }

    /// Normalized `A⁻¹b` by LU decomposition.
    pub fn classical_solution(&self) -> Result<StateVector> {
        let rhs = DVector::from_iterator(self.b.dim(), self.b.amplitudes().iter().copied());
        let x = to_dmatrix(&self.a)
            .lu()
            .solve(&rhs)
            .ok_or(Error::IllConditioned(self.kappa))?;
        StateVector::normalized(x.iter().copied().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HhlConfig {
    pub clock_bits: usize,
    pub t0: f64,
    /// Rotation constant; must not exceed the smallest `|λ|`.
    pub c: f64,
    /// Read clock values `y >= 2^{c−1}` as `y − 2^c`.
    pub signed: bool,
}

impl HhlConfig {
    /// `t0 = 2π/2^clock_bits`, so integer eigenvalues land on clock states.
    pub fn exact(clock_bits: usize, c: f64) -> Self {
        Self {
            clock_bits,
            t0: 2.0 * PI / (1u64 << clock_bits) as f64,
            c,
            signed: false,
        }
    }

    pub fn signed(mut self) -> Self {
        self.signed = true;
        self
    }

    fn eigenvalue_of(&self, y: usize) -> f64 {
        let size = 1i64 << self.clock_bits;
        let mut v = y as i64;
        if self.signed && v >= size / 2 {
            v -= size;
        }
        v as f64 * 2.0 * PI / (size as f64 * self.t0)
    }
}

#[derive(Debug, Clone)]
pub struct HhlOutcome {
    pub accepted: bool,
    pub acceptance_probability: f64,
    /// Input register given ancilla 1 and clock 0; present on acceptance.
    pub solution: Option<StateVector>,
}

/// Full register after uncomputation: `[ancilla][clock][input]`.
fn hhl_state(sys: &LinearSystem, cfg: &HhlConfig) -> Result<StateVector> {
    let c = cfg.clock_bits;
    if c == 0 || c > 10 {
        return Err(Error::InvalidParameter(format!("clock bits {c} outside 1..=10")));
    }
    let k = sys.n_qubits();
    let width = 1 + c + k;
    if width > crate::MAX_QUBITS {
        return Err(Error::QubitCount(width));
    }
    let clock: Vec<QubitIndex> = (1..=c).collect();
    let input: Vec<QubitIndex> = (1 + c..width).collect();
    let h = GateMatrix::hadamard();
    let powers: Vec<GateMatrix> = (0..c).map(|p| sys.evolution(cfg.t0 * (1u64 << p) as f64)).collect();

    let mut state = StateVector::zero_state(1 + c)?.tensor(sys.rhs())?;
    for &q in &clock {
        state.apply_matrix(&[q], &h)?;
    }
    for (j, &q) in clock.iter().enumerate() {
        state.apply_controlled(&[q], &input, &powers[c - 1 - j])?;
    }
    apply_qft(&mut state, &clock, true)?;

    let anc = state.mask(0);
    for i in 0..state.dim() {
        if i & anc != 0 {
            continue;
        }
        let y = state.register_value(i, &clock);
        if y == 0 {
            continue;
        }
        let r = cfg.c / cfg.eigenvalue_of(y);
        let weight = state.amplitude(i).norm_sqr();
        if r.abs() > 1.0 + 1e-12 && weight > 1e-20 {
            return Err(Error::InvalidParameter(format!(
                "rotation constant {} exceeds eigenvalue {}",
                cfg.c,
                cfg.eigenvalue_of(y)
            )));
        }
        let r = r.clamp(-1.0, 1.0);
        let s = (1.0 - r * r).sqrt();
        let amps = state.amplitudes_mut();
        let (a0, a1) = (amps[i], amps[i | anc]);
        amps[i] = s * a0 - r * a1;
        amps[i | anc] = r * a0 + s * a1;
    }

    apply_qft(&mut state, &clock, false)?;
    for (j, &q) in clock.iter().enumerate().rev() {
        state.apply_controlled(&[q], &input, &powers[c - 1 - j].adjoint())?;
    }
    for &q in &clock {
        state.apply_matrix(&[q], &h)?;
    }
    Ok(state)
}

/// Deterministic post-selected input state and the acceptance probability.
pub fn hhl_postselected(sys: &LinearSystem, cfg: &HhlConfig) -> Result<(StateVector, f64)> {
    let state = hhl_state(sys, cfg)?;
    let p = state.probability_of_one(0)?;
    if p < 1e-15 {
        return Err(Error::InvalidParameter("ancilla never reads 1".into()));
    }
    let flagged: Vec<QubitIndex> = (0..=cfg.clock_bits).collect();
    let (solution, _) = state.condition_on(&flagged, 1 << cfg.clock_bits)?;
    Ok((solution, p))
}

pub fn hhl_solve(sys: &LinearSystem, cfg: &HhlConfig, rng: &mut SeededRng) -> Result<HhlOutcome> {
    let state = hhl_state(sys, cfg)?;
    let p = state.probability_of_one(0)?;
    let out = state.measure_qubits(&[0], rng)?;
    let accepted = out.value == 1;
    let solution = if accepted {
        let clock: Vec<QubitIndex> = (0..=cfg.clock_bits).collect();
        Some(out.post_state.condition_on(&clock, 1 << cfg.clock_bits)?.0)
    } else {
        None
    };
    Ok(HhlOutcome {
        accepted,
        acceptance_probability: p,
        solution,
    })
}

/// Lower half of a hermitized solution, renormalized.
pub fn hermitized_solution_part(state: &StateVector) -> Result<StateVector> {
    Ok(state.condition_on(&[0], 1)?.0)
}

/// Normal-equations matrix and right-hand side of the four-dimensional
/// regression instance.
pub fn ols_instance() -> (GateMatrix, Vec<Amplitude>) {
    let rows: [[f64; 4]; 4] = [
        [15.0, 9.0, 5.0, -3.0],
        [9.0, 15.0, 3.0, -5.0],
        [5.0, 3.0, 15.0, -9.0],
        [-3.0, -5.0, -9.0, 15.0],
    ];
    let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v / 4.0).collect()).collect();
    let refs: Vec<&[f64]> = scaled.iter().map(|r| r.as_slice()).collect();
    let a = GateMatrix::from_real_rows(&refs).expect("square instance");
    (a, vec![Amplitude::new(0.5, 0.0); 4])
}

pub fn ols_demo(seed: u64) -> Result<ExperimentReport> {
    let (a, rhs) = ols_instance();
    let mut prep = Circuit::new(2)?;
    prep.h(0)?.h(1)?;
    let mut b = StateVector::zero_state(2)?;
    prep.apply_unitary(&mut b)?;
    let sys = LinearSystem::new(a.clone(), b.amplitudes().to_vec())?;
    let cfg = HhlConfig::exact(4, 1.0);
    let (solution, p_accept) = hhl_postselected(&sys, &cfg)?;
    let target = StateVector::normalized(
        [-1.0, 7.0, 11.0, 13.0].iter().map(|&v| Amplitude::new(v, 0.0)).collect(),
    )?;
    let fidelity = solution.fidelity(&target)?;

    let dense = to_dmatrix(&a);
    let beta = dense
        .lu()
        .solve(&DVector::from_vec(rhs.clone()))
        .ok_or(Error::IllConditioned(sys.kappa()))?;
    let beta32: Vec<f64> = beta.iter().map(|v| v.re * 32.0).collect();
    let beta_err = beta32
        .iter()
        .zip([-1.0, 7.0, 11.0, 13.0])
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let mut rng = seeded(seed);
    let sampled = hhl_solve(&sys, &cfg, &mut rng)?;

    let mut eig = sys.eigenvalues().to_vec();
    eig.sort_by(f64::total_cmp);
    let mut report = ExperimentReport::new("algo.ols", seed);
    report
        .param("clock_bits", cfg.clock_bits)
        .param("rotation_constant", cfg.c)
        .param("t0", cfg.t0)
        .result("eigenvalues", eig.clone())
        .result("kappa", sys.kappa())
        .result("acceptance_probability", p_accept)
        .result("fidelity", fidelity)
        .result(
            "solution_amplitudes",
            solution.amplitudes().iter().map(|a| a.re).collect::<Vec<f64>>(),
        )
        .result("classical_beta_times_32", beta32)
        .result("sampled_accepted", sampled.accepted);
    report
        .check_at_least("postselected_fidelity", 1.0 - 1e-6, fidelity)
        .check_close("classical_beta_proportional", 0.0, beta_err, 1e-9)
        .check_at_least("acceptance_positive", f64::MIN_POSITIVE, p_accept)
        .check(
            "spectrum_1_2_4_8",
            vec![1.0, 2.0, 4.0, 8.0],
            eig.clone(),
            eig.iter().zip([1.0, 2.0, 4.0, 8.0]).all(|(x, y)| (x - y).abs() < 1e-9),
        );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::trial_rng;
    use rand::Rng;

    #[test]
    fn regression_instance() {
        let (a, b) = ols_instance();
        let sys = LinearSystem::new(a, b).unwrap();
        let (sol, p) = hhl_postselected(&sys, &HhlConfig::exact(4, 1.0)).unwrap();
        let target = StateVector::normalized(
            [-1.0, 7.0, 11.0, 13.0].iter().map(|&v| Amplitude::new(v, 0.0)).collect(),
        )
        .unwrap();
        assert!(sol.fidelity(&target).unwrap() >= 1.0 - 1e-6);
        assert!(sol.fidelity(&sys.classical_solution().unwrap()).unwrap() >= 1.0 - 1e-9);
        assert!(p > 0.0);
        let report = ols_demo(3).unwrap();
        assert!(report.all_passed(), "{:?}", report.failed_checks());
    }

    #[test]
    fn identity_system() {
        let b = vec![Amplitude::new(0.6, 0.0), Amplitude::new(0.0, 0.8)];
        let sys = LinearSystem::new(GateMatrix::identity(2), b).unwrap();
        let c = 0.5;
        let (sol, p) = hhl_postselected(&sys, &HhlConfig::exact(3, c)).unwrap();
        assert!((sol.fidelity(sys.rhs()).unwrap() - 1.0).abs() < 1e-9);
        assert!((p - c * c).abs() < 1e-9);
    }

    fn random_unitary(dim: usize, rng: &mut SeededRng) -> DMatrix<Complex<f64>> {
        let m = DMatrix::from_fn(dim, dim, |_, _| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        m.qr().q()
    }

    #[test]
    fn random_hermitian_exact_spectrum() {
        for trial in 0..20 {
            let mut rng = trial_rng(11, trial);
            let v = random_unitary(2, &mut rng);
            let l1 = rng.random_range(1..8) as f64;
            let l2 = rng.random_range(1..8) as f64;
            let d = DMatrix::from_diagonal(&DVector::from_vec(vec![Complex::new(l1, 0.0), Complex::new(l2, 0.0)]));
            let a = &v * d * v.adjoint();
            let a = (&a + a.adjoint()) * Complex::new(0.5, 0.0);
            let b = vec![Amplitude::new(rng.random::<f64>() + 0.1, 0.2), Amplitude::new(-0.3, rng.random::<f64>())];
            let sys = LinearSystem::new(from_dmatrix(&a), b).unwrap();
            let (sol, _) = hhl_postselected(&sys, &HhlConfig::exact(3, l1.min(l2))).unwrap();
            let f = sol.fidelity(&sys.classical_solution().unwrap()).unwrap();
            assert!(f >= 1.0 - 1e-6, "trial {trial}: {f}");
        }
    }

    #[test]
    fn hermitized_recovers_solution() {
        // singular values 1 and 2 -> embedded spectrum {-2, -1, 1, 2}
        let (c, s) = (0.6, 0.8);
        let rot = |a: f64, b: f64| DMatrix::from_row_slice(2, 2, &[a, -b, b, a]);
        let a = rot(c, s) * DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]) * rot(0.28, 0.96).transpose();
        let gm = from_dmatrix(&a.map(|v| Complex::new(v, 0.0)));
        let b = vec![Amplitude::new(0.3, 0.0), Amplitude::new(-0.9, 0.0)];
        let sys = LinearSystem::hermitized(&gm, b.clone()).unwrap();
        let (sol, _) = hhl_postselected(&sys, &HhlConfig::exact(3, 1.0).signed()).unwrap();
        let x = hermitized_solution_part(&sol).unwrap();
        let pinv = a.clone().pseudo_inverse(1e-12).unwrap();
        let classical = pinv * DVector::from_vec(b.iter().map(|v| v.re).collect());
        let classical = StateVector::normalized(classical.iter().map(|&v| Amplitude::new(v, 0.0)).collect()).unwrap();
        assert!(x.fidelity(&classical).unwrap() >= 1.0 - 1e-6);
    }

    #[test]
    fn constructor_rejections() {
        let mut m = GateMatrix::identity(2);
        m.set(0, 1, Amplitude::new(0.5, 0.0));
        assert!(matches!(LinearSystem::new(m, vec![Amplitude::new(1.0, 0.0); 2]), Err(Error::NotHermitian(_))));
        assert!(LinearSystem::new(GateMatrix::identity(2), vec![Amplitude::new(1.0, 0.0); 4]).is_err());
        let sys = LinearSystem::new(GateMatrix::identity(2), vec![Amplitude::new(1.0, 0.0); 2]).unwrap();
        assert!(hhl_postselected(&sys, &HhlConfig::exact(3, 2.0)).is_err());
    }
}
