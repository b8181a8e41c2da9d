//! Gate matrices: Paulis, Hadamard, the phase tower `S`, `T`, `R_k`, and
//! controlled / adjoint constructions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::circuit::GateApplication;
use crate::error::{Error, Result};
use crate::state::{Amplitude, ONE, ZERO};
use crate::UNITARY_TOL;

/// Dense square matrix over the complex numbers, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Amplitude>,
}

impl GateMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Amplitude>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diagonal(diag: &[Amplitude]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, *d);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits this matrix acts on, if `dim` is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        self.dim
            .is_power_of_two()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Amplitude {
        self.entries[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Amplitude) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Amplitude] {
        &self.entries[r * self.dim..(r + 1) * self.dim]
    }

    pub fn mul(&self, other: &GateMatrix) -> Result<GateMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.dim;
        let mut out = GateMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Amplitude]) -> Result<Vec<Amplitude>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> GateMatrix {
        let n = self.dim;
        let mut out = GateMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn kron(&self, other: &GateMatrix) -> GateMatrix {
        let (a, b) = (self.dim, other.dim);
        let mut out = GateMatrix::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                for k in 0..b {
                    for l in 0..b {
                        out.set(i * b + k, j * b + l, x * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Amplitude) -> GateMatrix {
        GateMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    /// Entrywise maximum of `|self - other|`.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U†U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .map(|p| p.max_abs_diff(&GateMatrix::identity(self.dim)))
            .unwrap_or(f64::INFINITY)
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() < UNITARY_TOL
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `self^(2^j)` by repeated squaring.
    pub fn pow2(&self, j: u32) -> GateMatrix {
        let mut m = self.clone();
        for _ in 0..j {
            m = m.mul(&m).expect("square matrix");
        }
        m
    }

    pub fn hadamard() -> GateMatrix {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        GateMatrix {
            dim: 2,
            entries: vec![h, h, h, -h],
        }
    }

    /// `R_k = diag(1, e^{2πi / 2^k})`.
    pub fn rk(k: u32) -> GateMatrix {
        let phase = Complex64::from_polar(1.0, 2.0 * PI / f64::powi(2.0, k as i32));
        GateMatrix::diagonal(&[ONE, phase])
    }
}

/// Block-diagonal `[[I, 0], [0, U]]`; the control is the most significant qubit.
pub fn controlled(u: &GateMatrix) -> Result<GateMatrix> {
    let d = u.unitarity_defect();
    if d >= UNITARY_TOL {
        return Err(Error::NonUnitary(d));
    }
    let n = u.dim();
    let mut out = GateMatrix::identity(2 * n);
    for i in 0..n {
        for j in 0..n {
            out.set(n + i, n + j, u.get(i, j));
        }
    }
    Ok(out)
}

pub fn adjoint(u: &GateMatrix) -> GateMatrix {
    u.adjoint()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    /// `R_k`, `k >= 1`.
    Rk(u32),
    Cnot,
    Swap,
    Toffoli,
    CustomUnitary(GateMatrix),
    /// The control is the first target of the application.
    Controlled(Box<Gate>),
    Adjoint(Box<Gate>),
}

impl Gate {
    /// Controlled version of `inner`; `C(X)` is canonicalized to `Cnot` and
    /// `C(Cnot)` to `Toffoli`.
    pub fn controlled(inner: Gate) -> Gate {
        match inner {
            Gate::X => Gate::Cnot,
            Gate::Cnot => Gate::Toffoli,
            g => Gate::Controlled(Box::new(g)),
        }
    }

    pub fn adjoint_of(inner: Gate) -> Gate {
        match inner {
            Gate::I | Gate::X | Gate::Y | Gate::Z | Gate::H | Gate::Cnot | Gate::Swap | Gate::Toffoli => inner,
            Gate::Adjoint(g) => *g,
            Gate::Controlled(g) => Gate::Controlled(Box::new(Gate::adjoint_of(*g))),
            Gate::CustomUnitary(m) => Gate::CustomUnitary(m.adjoint()),
            g => Gate::Adjoint(Box::new(g)),
        }
    }

    /// Number of qubits the gate touches.
    pub fn arity(&self) -> usize {
        match self {
            Gate::I | Gate::X | Gate::Y | Gate::Z | Gate::H | Gate::S | Gate::T | Gate::Rk(_) => 1,
            Gate::Cnot | Gate::Swap => 2,
            Gate::Toffoli => 3,
            Gate::CustomUnitary(m) => m.n_qubits().unwrap_or(0),
            Gate::Controlled(g) => 1 + g.arity(),
            Gate::Adjoint(g) => g.arity(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn depth(g: &Gate) -> usize {
            match g {
                Gate::Controlled(_) => g.peel_controls().0,
                Gate::Adjoint(inner) => depth(inner),
                _ => 0,
            }
        }
        match self {
            Gate::Rk(0) => Err(Error::InvalidParameter("R_k requires k >= 1".into())),
            Gate::CustomUnitary(m) => {
                if m.n_qubits().is_none() {
                    return Err(Error::NotPowerOfTwo(m.dim()));
                }
                let d = m.unitarity_defect();
                if d >= UNITARY_TOL {
                    return Err(Error::NonUnitary(d));
                }
                Ok(())
            }
            Gate::Controlled(inner) | Gate::Adjoint(inner) => {
                if depth(self) > 2 {
                    return Err(Error::InvalidParameter("controlled nesting deeper than 2".into()));
                }
                inner.validate()
            }
            _ => Ok(()),
        }
    }

    /// Splits nested controls off: `(number of controls, innermost gate)`.
    pub fn peel_controls(&self) -> (usize, &Gate) {
        match self {
            Gate::Controlled(inner) => {
                let (n, g) = inner.peel_controls();
                (n + 1, g)
            }
            Gate::Cnot => (1, &Gate::X),
            Gate::Toffoli => (2, &Gate::X),
            g => (0, g),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Gate::Rk(k) => format!("R{k}"),
            Gate::CustomUnitary(m) => format!("U{}", m.dim()),
            Gate::Controlled(g) => format!("C{}", g.name()),
            Gate::Adjoint(g) => format!("{}†", g.name()),
            g => format!("{g:?}").to_uppercase(),
        }
    }
}

pub fn matrix_of(g: &Gate) -> GateMatrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match g {
        Gate::I => GateMatrix::identity(2),
        Gate::X => GateMatrix::from_rows(vec![vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap(),
        Gate::Y => GateMatrix::from_rows(vec![vec![ZERO, c(0.0, -1.0)], vec![c(0.0, 1.0), ZERO]]).unwrap(),
        Gate::Z => GateMatrix::diagonal(&[ONE, -ONE]),
        Gate::H => GateMatrix::hadamard(),
        Gate::S => GateMatrix::diagonal(&[ONE, c(0.0, 1.0)]),
        Gate::T => GateMatrix::diagonal(&[ONE, Complex64::from_polar(1.0, PI / 4.0)]),
        Gate::Rk(k) => GateMatrix::rk(*k),
        Gate::Cnot => controlled(&matrix_of(&Gate::X)).unwrap(),
        Gate::Swap => {
            let mut m = GateMatrix::zeros(4);
            for (r, col) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                m.set(r, col, ONE);
            }
            m
        }
        Gate::Toffoli => controlled(&matrix_of(&Gate::Cnot)).unwrap(),
        Gate::CustomUnitary(m) => m.clone(),
        Gate::Controlled(inner) => {
            let u = matrix_of(inner);
            let n = u.dim();
            let mut out = GateMatrix::identity(2 * n);
            for i in 0..n {
                for j in 0..n {
                    out.set(n + i, n + j, u.get(i, j));
                }
            }
            out
        }
        Gate::Adjoint(inner) => matrix_of(inner).adjoint(),
    }
}

/// Toffoli on qubits (0, 1, 2) from `H`, `T`, `T†` and `CNOT`: six CNOTs,
/// seven T-type gates and two Hadamards.
pub fn toffoli_two_qubit_decomposition() -> Vec<GateApplication> {
    toffoli_decomposition_on(0, 1, 2)
}

pub(crate) fn toffoli_decomposition_on(c1: usize, c2: usize, t: usize) -> Vec<GateApplication> {
    let tdg = || Gate::adjoint_of(Gate::T);
    vec![
        GateApplication::new(Gate::H, vec![t]),
        GateApplication::new(Gate::Cnot, vec![c2, t]),
        GateApplication::new(tdg(), vec![t]),
        GateApplication::new(Gate::Cnot, vec![c1, t]),
        GateApplication::new(Gate::T, vec![t]),
        GateApplication::new(Gate::Cnot, vec![c2, t]),
        GateApplication::new(tdg(), vec![t]),
        GateApplication::new(Gate::Cnot, vec![c1, t]),
        GateApplication::new(Gate::T, vec![c2]),
        GateApplication::new(Gate::T, vec![t]),
        GateApplication::new(Gate::H, vec![t]),
        GateApplication::new(Gate::Cnot, vec![c1, c2]),
        GateApplication::new(Gate::T, vec![c1]),
        GateApplication::new(tdg(), vec![c2]),
        GateApplication::new(Gate::Cnot, vec![c1, c2]),
    ]
}
