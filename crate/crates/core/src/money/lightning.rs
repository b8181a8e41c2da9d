use crate::circuit::Oracle;
use crate::error::{Error, Result};
use crate::gates::GateMatrix;
use crate::seed::SeededRng;
use crate::state::{MeasurementBasis, QubitIndex, StateVector};

/// Toy public-money blueprint over `G = {0, …, 2^k − 1}` with an invariant
/// `f` and `f`-preserving permutation moves.
#[derive(Debug, Clone)]
pub struct LightningScheme {
    k: usize,
    invariant: Vec<usize>,
    moves: Vec<Vec<usize>>,
}

impl LightningScheme {
    /// `f(g) = g mod modulus`, moves: shift by `modulus` and the swap of `0`
    /// with `modulus` (both in class 0).
    pub fn modular(k: usize, modulus: usize) -> Result<Self> {
        if k == 0 || k > 10 {
            return Err(Error::InvalidParameter(format!("k = {k} outside 1..=10")));
        }
        let size = 1usize << k;
        if modulus == 0 || !size.is_multiple_of(modulus) {
            return Err(Error::InvalidParameter(format!("modulus {modulus} must divide {size}")));
        }
        let invariant = (0..size).map(|g| g % modulus).collect();
        let shift = (0..size).map(|g| (g + modulus) % size).collect();
        let mut swap: Vec<usize> = (0..size).collect();
        if modulus < size {
            swap.swap(0, modulus);
        }
        Self::new(k, invariant, vec![shift, swap])
    }

    pub fn new(k: usize, invariant: Vec<usize>, moves: Vec<Vec<usize>>) -> Result<Self> {
        let size = 1usize << k;
        if invariant.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: invariant.len(),
            });
        }
        if moves.is_empty() {
            return Err(Error::InvalidParameter("at least one move is required".into()));
        }
        for (i, mv) in moves.iter().enumerate() {
            let mut seen = vec![false; size];
            if mv.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: mv.len(),
                });
            }
            for (g, &h) in mv.iter().enumerate() {
                if h >= size || seen[h] {
                    return Err(Error::InvalidParameter(format!("move {i} is not a permutation")));
                }
                seen[h] = true;
                if invariant[h] != invariant[g] {
                    return Err(Error::InvalidParameter(format!("move {i} changes the invariant of {g}")));
                }
            }
        }
        Ok(Self { k, invariant, moves })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn invariant(&self, g: usize) -> usize {
        self.invariant[g]
    }

    pub fn moves(&self) -> &[Vec<usize>] {
        &self.moves
    }

    fn invariant_bits(&self) -> usize {
        let max = self.invariant.iter().copied().max().unwrap_or(0);
        (usize::BITS - max.leading_zeros()).max(1) as usize
    }
}

/// Uniform superposition over `G`, invariant computed into a second
/// register, that register measured. Returns the reading and the first
/// register.
pub fn lightning_mint(scheme: &LightningScheme, rng: &mut SeededRng) -> Result<(usize, StateVector)> {
    let k = scheme.k;
    let pb = scheme.invariant_bits();
    let table = scheme.invariant.clone();
    let mut oracle = Oracle::xor(k, pb, move |g| table[g as usize] as u64)?;
    let mut state = StateVector::uniform(k)?.tensor(&StateVector::zero_state(pb)?)?;
    let first: Vec<QubitIndex> = (0..k).collect();
    let second: Vec<QubitIndex> = (k..k + pb).collect();
    oracle.apply(&mut state, &first, &second)?;
    let out = state.measure_qubits(&second, rng)?;
    let (bill, _) = out.post_state.condition_on(&second, out.value)?;
    Ok((out.value, bill))
}

fn controlled_move(state: &StateVector, mv: &[usize]) -> Result<StateVector> {
    let mut joint = StateVector::plus().tensor(state)?;
    let half = state.dim();
    joint.apply_permutation(|i| if i >= half { half + mv[i - half] } else { i });
    Ok(joint)
}

/// `(1 + Re⟨ψ|P_s|ψ⟩)/2` for move `index`.
pub fn lightning_round_probability(scheme: &LightningScheme, state: &StateVector, index: usize) -> Result<f64> {
    let mv = &scheme.moves[index % scheme.moves.len()];
    let joint = controlled_move(state, mv)?;
    let h = GateMatrix::hadamard();
    let mut s = joint;
    s.apply_matrix(&[0], &h)?;
    Ok(1.0 - s.probability_of_one(0)?)
}

/// `rounds` rounds cycling through the moves: ancilla `|+⟩`, controlled
/// permutation, Hadamard-basis readout of the ancilla. Accepts iff every
/// round reads `+`.
pub fn lightning_verify(
    scheme: &LightningScheme,
    state: &StateVector,
    rounds: usize,
    rng: &mut SeededRng,
) -> Result<bool> {
    if state.n_qubits() != scheme.k {
        return Err(Error::DimensionMismatch {
            expected: scheme.k,
            found: state.n_qubits(),
        });
    }
    let mut current = state.clone();
    for r in 0..rounds {
        let mv = &scheme.moves[r % scheme.moves.len()];
        let joint = controlled_move(&current, mv)?;
        let out = joint.measure_qubit(0, MeasurementBasis::Hadamard, rng)?;
        if out.value == 1 {
            return Ok(false);
        }
        // ancilla is back in |+>; drop it
        let mut s = out.post_state;
        s.apply_matrix(&[0], &GateMatrix::hadamard())?;
        current = s.condition_on(&[0], 0)?.0;
    }
    Ok(true)
}
