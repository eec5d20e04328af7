//! Floquet states of uncoupled qubits as products of single-qubit states.

use crate::error::{FloquetError, Result};
use crate::floquet::{fold_to_zone, FourierStack};
use crate::linalg::c;
use crate::single_qubit::SingleQubitFloquet;

#[derive(Clone, Debug)]
pub struct ProductState {
    /// Sign string (`+`/`−` per qubit) or a symmetrized label such as `S1`.
    pub label: String,
    pub quasi_energy: f64,
    /// Unfolded sum of the factor quasi-energies.
    pub raw_energy: f64,
    pub stack: FourierStack,
}

/// Tensor product of per-qubit stacks, qubit 0 first.
pub fn product_stack(factors: &[&FourierStack]) -> FourierStack {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.tensor(f);
    }
    acc
}

fn factor(q: &SingleQubitFloquet, plus: bool) -> (&FourierStack, f64) {
    if plus {
        (&q.plus, q.eps_plus)
    } else {
        (&q.minus, q.eps_minus)
    }
}

/// All `2^N` products `⊗_n φ_{s_n}⁽ⁿ⁾`, ordered like the computational basis
/// with `+` in the role of `|↑⟩`.
pub fn noninteracting_floquet_states(qubits: &[SingleQubitFloquet]) -> Result<Vec<ProductState>> {
    let n = qubits.len();
    if n == 0 {
        return Err(FloquetError::InvalidArgument("at least one qubit is required".into()));
    }
    let omega = qubits[0].omega;
    if qubits.iter().any(|q| q.omega != omega) {
        return Err(FloquetError::InvalidArgument(
            "all qubits must share the drive frequency".into(),
        ));
    }
    let mut out = Vec::with_capacity(1 << n);
    for bits in 0..(1usize << n) {
        let mut stacks = Vec::with_capacity(n);
        let mut energy = 0.0;
        let mut label = String::with_capacity(n);
        for (q, qubit) in qubits.iter().enumerate() {
            let plus = (bits >> (n - 1 - q)) & 1 == 0;
            let (s, e) = factor(qubit, plus);
            stacks.push(s);
            energy += e;
            label.push(if plus { '+' } else { '-' });
        }
        out.push(ProductState {
            label,
            quasi_energy: fold_to_zone(energy, omega),
            raw_energy: energy,
            stack: product_stack(&stacks),
        });
    }
    Ok(out)
}

/// Symmetrized products of `N` identical qubits: state `S_i` is the
/// normalized sum over all products with `i` factors `φ₋`, with quasi-energy
/// `(N − 2i)μ` folded. For `N = 2` the singlet-like combination
/// `(φ₊φ₋ − φ₋φ₊)/√2` is appended as `A`.
pub fn symmetric_noninteracting_states(qubit: &SingleQubitFloquet, n: usize) -> Result<Vec<ProductState>> {
    let all = noninteracting_floquet_states(&vec![qubit.clone(); n])?;
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..=n {
        let members: Vec<&ProductState> = all.iter().filter(|p| p.label.matches('-').count() == i).collect();
        let w = c((members.len() as f64).powf(-0.5), 0.0);
        let terms: Vec<_> = members.iter().map(|p| (w, &p.stack)).collect();
        let raw = members[0].raw_energy;
        out.push(ProductState {
            label: format!("S{i}"),
            quasi_energy: fold_to_zone(raw, qubit.omega),
            raw_energy: raw,
            stack: FourierStack::combine(&terms),
        });
    }
    if n == 2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (pm, mp) = (&all[1], &all[2]);
        out.push(ProductState {
            label: "A".into(),
            quasi_energy: pm.quasi_energy,
            raw_energy: pm.raw_energy,
            stack: FourierStack::combine(&[(c(s, 0.0), &pm.stack), (c(-s, 0.0), &mp.stack)]),
        });
    }
    Ok(out)
}
