//! Translation of a symplectic decomposition into named Clifford gates.
//!
//! Qubits are 0-based. Coordinate `q < n` is the X part of qubit `q` and
//! coordinate `2n-1-q` its Z part. The symplectic image of a gate acts on
//! Pauli vectors by left multiplication, and a gate list denotes the product
//! of the images in list order.

use alloc::vec::Vec;
use core::fmt;

use super::borel::borel_expand;
use super::Quintuple;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::moves::{symplectic_move, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    Phase(usize),
    /// Phase gate conjugated by Hadamard.
    HPhaseH(usize),
    Hadamard(usize),
    Swap(usize, usize),
    /// Controlled-Z conjugated by Hadamards on both qubits.
    HCzH(usize, usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Cnot { .. } => "CNOT",
            Gate::Cz(..) => "CZ",
            Gate::Phase(_) => "PHASE",
            Gate::HPhaseH(_) => "H_PHASE_H",
            Gate::Hadamard(_) => "HADAMARD",
            Gate::Swap(..) => "SWAP",
            Gate::HCzH(..) => "H_CZ_H",
        }
    }

    /// Qubit arguments; for CNOT the control comes first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } => alloc::vec![control, target],
            Gate::Cz(a, b) | Gate::Swap(a, b) | Gate::HCzH(a, b) => alloc::vec![a, b],
            Gate::Phase(q) | Gate::HPhaseH(q) | Gate::Hadamard(q) => alloc::vec![q],
        }
    }

    pub fn from_parts(name: &str, qubits: &[usize]) -> Result<Self> {
        let bad = || Error::InvalidParameter(alloc::format!("bad qubits for gate {name}"));
        let one = || match qubits {
            [q] => Ok(*q),
            _ => Err(bad()),
        };
        let two = || match qubits {
            [a, b] if a != b => Ok((*a, *b)),
            _ => Err(bad()),
        };
        Ok(match name {
            "CNOT" => {
                let (control, target) = two()?;
                Gate::Cnot { control, target }
            }
            "CZ" => {
                let (a, b) = two()?;
                Gate::Cz(a, b)
            }
            "H_CZ_H" => {
                let (a, b) = two()?;
                Gate::HCzH(a, b)
            }
            "SWAP" => {
                let (a, b) = two()?;
                Gate::Swap(a, b)
            }
            "PHASE" => Gate::Phase(one()?),
            "H_PHASE_H" => Gate::HPhaseH(one()?),
            "HADAMARD" => Gate::Hadamard(one()?),
            _ => return Err(Error::InvalidParameter(alloc::format!("unknown gate {name:?}"))),
        })
    }

    /// The `2n × 2n` symplectic image.
    pub fn image(&self, n: usize) -> Result<Gf2Matrix> {
        let n2 = 2 * n;
        let z = |q: usize| n2 - 1 - q;
        for &q in &self.qubits() {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, bound: n });
            }
        }
        match *self {
            // X_c → X_c X_t and Z_t → Z_t Z_c.
            Gate::Cnot { control, target } => symplectic_move(n, target, control),
            // X_a → X_a Z_b and X_b → X_b Z_a.
            Gate::Cz(a, b) => symplectic_move(n, z(a), b),
            // X_q → X_q Z_q.
            Gate::Phase(q) => symplectic_move(n, z(q), q),
            // Z_q → Z_q X_q.
            Gate::HPhaseH(q) => symplectic_move(n, q, z(q)),
            // Z_a → Z_a X_b and Z_b → Z_b X_a.
            Gate::HCzH(a, b) => symplectic_move(n, a, z(b)),
            Gate::Hadamard(q) => Ok(permutation(n2, &[(q, z(q))])),
            Gate::Swap(a, b) => Ok(permutation(n2, &[(a, b), (z(a), z(b))])),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

fn permutation(n2: usize, swaps: &[(usize, usize)]) -> Gf2Matrix {
    let mut perm: Vec<usize> = (0..n2).collect();
    for &(a, b) in swaps {
        perm.swap(a, b);
    }
    Gf2Matrix::from_fn(n2, n2, |i, j| perm[j] == i)
}

/// The gate realizing the symplectic move `s_{i,j}` on `n` qubits.
fn move_gate(n: usize, i: usize, j: usize) -> Gate {
    let n2 = 2 * n;
    let bar = |k: usize| n2 - 1 - k;
    match (i < n, j < n) {
        _ if i + j == n2 - 1 && i < n => Gate::HPhaseH(i),
        _ if i + j == n2 - 1 => Gate::Phase(j),
        (true, true) => Gate::Cnot {
            control: j,
            target: i,
        },
        (false, false) => Gate::Cnot {
            control: bar(i),
            target: bar(j),
        },
        (false, true) => Gate::Cz(bar(i), j),
        (true, false) => Gate::HCzH(i, bar(j)),
    }
}

/// Gates whose images multiply to an element of `B(2n, P(2n))`, following
/// the column-move factorization with each column move split into commuting
/// single moves.
fn borel_gates(b: &Gf2Matrix, out: &mut Vec<Gate>) -> Result<()> {
    let n2 = b.rows();
    let n = n2 / 2;
    for (k, v) in borel_expand(b)?.iter().enumerate() {
        let kb = n2 - 1 - k;
        let correction = (0..n).fold(false, |acc, j| acc ^ (v.get(j) & v.get(n2 - 1 - j)));
        if correction {
            out.push(move_gate(n, kb, k));
        }
        for j in v.iter_ones() {
            out.push(move_gate(n, j, k));
        }
    }
    Ok(())
}

/// SWAP and HADAMARD gates whose images multiply to `Π^sym(β)`.
fn permutation_gates(n: usize, beta: &[usize], out: &mut Vec<Gate>) {
    let n2 = 2 * n;
    // col_of[k] is the column holding the 1 of row k in the current P·X.
    let mut col_of: Vec<usize> = alloc::vec![0; n2];
    for (k, &b) in beta.iter().enumerate() {
        col_of[k] = b;
        col_of[n2 - 1 - k] = n2 - 1 - b;
    }
    let mut applied = Vec::new();
    for i in 0..n {
        let c = col_of[i];
        let q = c.min(n2 - 1 - c);
        if q != i {
            applied.push(Gate::Swap(i, q));
            for col in col_of.iter_mut() {
                let qc = (*col).min(n2 - 1 - *col);
                let flip = *col >= n;
                let target = if qc == i {
                    q
                } else if qc == q {
                    i
                } else {
                    continue;
                };
                *col = if flip { n2 - 1 - target } else { target };
            }
        }
        if col_of[i] != i {
            applied.push(Gate::Hadamard(i));
            for col in col_of.iter_mut() {
                if *col == i {
                    *col = n2 - 1 - i;
                } else if *col == n2 - 1 - i {
                    *col = i;
                }
            }
        }
    }
    out.extend(applied.into_iter().rev());
}

/// Translates a symplectic decomposition `L·Π^sym(β)·R` into gates: first the
/// gates for `L` (column `k = 0, …, n-1`), then SWAP/HADAMARD gates for the
/// permutation, then the gates for `R`. The product of the gate images in
/// list order equals `L·Π^sym(β)·R`.
pub fn to_gates(q: &Quintuple) -> Result<Vec<Gate>> {
    if q.mode() != Mode::Symplectic {
        return Err(Error::InvalidProfile("gate translation needs a symplectic decomposition"));
    }
    q.profile.validate()?;
    let n = q.profile.cols / 2;
    let mut gates = Vec::new();
    borel_gates(&q.l, &mut gates)?;
    permutation_gates(n, &q.profile.beta, &mut gates);
    borel_gates(&q.r, &mut gates)?;
    Ok(gates)
}

/// The product of the gate images in list order.
pub fn gates_image(n: usize, gates: &[Gate]) -> Result<Gf2Matrix> {
    let mut m = Gf2Matrix::identity(2 * n);
    for g in gates {
        m = m.mul(&g.image(n)?)?;
    }
    Ok(m)
}
