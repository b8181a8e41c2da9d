use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::state::{QubitIndex, StateVector};

fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > 12 {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

/// Hadamards and controlled-`R_k` in product form, no SWAPs. Qubit `k`
/// finishes holding the phase `0.x_k x_{k-1} … x_0` of the input bits, so the
/// output register is the DFT with reversed significance.
pub fn qft_product_form_circuit(n: usize) -> Result<Circuit> {
    check_width(n)?;
    let mut c = Circuit::new(n)?;
    for k in (0..n).rev() {
        c.h(k)?;
        for i in (0..k).rev() {
            c.push(Gate::controlled(Gate::Rk((k - i + 1) as u32)), vec![i, k])?;
        }
    }
    Ok(c)
}

/// Full QFT: a reversal SWAP network followed by the product form. Its
/// matrix is `ω^{jk}/√2^n` with qubit 0 as the most significant bit.
pub fn qft_circuit(n: usize) -> Result<Circuit> {
    check_width(n)?;
    let mut c = Circuit::new(n)?;
    for i in 0..n / 2 {
        c.push(Gate::Swap, vec![i, n - 1 - i])?;
    }
    c.append(&qft_product_form_circuit(n)?)?;
    Ok(c)
}

pub fn inverse_qft_circuit(n: usize) -> Result<Circuit> {
    Ok(qft_circuit(n)?.adjoint())
}

/// Applies the (inverse) QFT to a register of a larger state.
pub fn apply_qft(state: &mut StateVector, register: &[QubitIndex], inverse: bool) -> Result<()> {
    let c = if inverse {
        inverse_qft_circuit(register.len())?
    } else {
        qft_circuit(register.len())?
    };
    for step in c.steps() {
        let targets: Vec<QubitIndex> = step.targets.iter().map(|&q| register[q]).collect();
        crate::circuit::apply_gate(state, &step.gate, &targets)?;
    }
    Ok(())
}
