//! Minimal n-qubit Pauli algebra: just enough for symplectic checks and
//! stabilizer-group handling on `n = 2^m` qubits.

use std::fmt;

use serde::Serialize;

use crate::bits::BitVec;
use crate::error::Error;
use crate::hypercube::Subcube;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    X,
    Z,
}

/// An n-qubit Pauli operator `i^phase * X(x) * Z(z)`.
///
/// Subcube operators always carry phase 0; the phase is tracked only so the
/// group law is complete.
#[derive(Clone, PartialEq, Eq)]
pub struct PauliOp {
    x_support: BitVec,
    z_support: BitVec,
    phase_exp: u8,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp {
            x_support: BitVec::zeros(n),
            z_support: BitVec::zeros(n),
            phase_exp: 0,
        }
    }

    pub fn from_supports(x_support: BitVec, z_support: BitVec, phase_exp: u8) -> Self {
        assert_eq!(x_support.len(), z_support.len(), "support length mismatch");
        PauliOp {
            x_support,
            z_support,
            phase_exp: phase_exp & 3,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x_support.len()
    }

    pub fn x_support(&self) -> &BitVec {
        &self.x_support
    }

    pub fn z_support(&self) -> &BitVec {
        &self.z_support
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn weight(&self) -> usize {
        let mut w = 0;
        for i in 0..self.num_qubits() {
            if self.x_support.get(i) || self.z_support.get(i) {
                w += 1;
            }
        }
        w
    }

    pub fn commutes(&self, other: &PauliOp) -> Result<bool, Error> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::InvalidArgument(format!(
                "qubit counts differ: {} vs {}",
                self.num_qubits(),
                other.num_qubits()
            )));
        }
        let anti =
            self.x_support.overlap(&other.z_support) + self.z_support.overlap(&other.x_support);
        Ok(anti.is_multiple_of(2))
    }

    /// Group product. Moving `Z(z1)` past `X(x2)` costs `(-1)^{|z1 ∩ x2|}`.
    pub fn mul(&self, other: &PauliOp) -> PauliOp {
        assert_eq!(self.num_qubits(), other.num_qubits());
        let mut x = self.x_support.clone();
        x.xor_assign(&other.x_support);
        let mut z = self.z_support.clone();
        z.xor_assign(&other.z_support);
        let swaps = self.z_support.overlap(&other.x_support);
        PauliOp {
            x_support: x,
            z_support: z,
            phase_exp: (self.phase_exp + other.phase_exp + 2 * (swaps as u8 & 1)) & 3,
        }
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp(i^{} ", self.phase_exp)?;
        for i in 0..self.num_qubits() {
            let c = match (self.x_support.get(i), self.z_support.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The transversal Pauli acting as `basis` on every qubit of the subcube.
pub fn subcube_pauli(basis: Basis, a: &Subcube) -> PauliOp {
    let n = 1usize << a.m();
    let support = BitVec::from_ones(n, a.vertices().map(|v| v as usize));
    match basis {
        Basis::X => PauliOp::from_supports(support, BitVec::zeros(n), 0),
        Basis::Z => PauliOp::from_supports(BitVec::zeros(n), support, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::{all_subcubes, parse_subcube, GenSet, Subcube};

    #[test]
    fn subcube_pauli_examples() {
        let z0 = subcube_pauli(Basis::Z, &Subcube::standard(3, GenSet::EMPTY).unwrap());
        assert_eq!(z0.weight(), 1);
        assert!(z0.z_support().get(0));

        let full = subcube_pauli(Basis::X, &Subcube::full(2).unwrap());
        assert_eq!(full.weight(), 4);

        let edge = subcube_pauli(Basis::Z, &parse_subcube("0110+<4>", 4).unwrap());
        assert_eq!(edge.weight(), 2);
        assert!(edge.z_support().get(0b0110) && edge.z_support().get(0b1110));
    }

    #[test]
    fn z_paulis_always_commute() {
        for a in all_subcubes(3).unwrap() {
            for b in all_subcubes(3).unwrap() {
                let za = subcube_pauli(Basis::Z, &a);
                let zb = subcube_pauli(Basis::Z, &b);
                assert!(za.commutes(&zb).unwrap());
            }
        }
    }

    #[test]
    fn single_vertex_overlap_anticommutes() {
        // The symplectic pair for J={1,2} in m=4 overlaps on vertex 1100.
        let z = subcube_pauli(Basis::Z, &parse_subcube("<1,2>", 4).unwrap());
        let x = subcube_pauli(Basis::X, &parse_subcube("1100+<3,4>", 4).unwrap());
        assert!(!z.commutes(&x).unwrap());
    }

    #[test]
    fn commutes_rejects_length_mismatch() {
        let a = PauliOp::identity(4);
        let b = PauliOp::identity(8);
        assert!(a.commutes(&b).is_err());
    }

    #[test]
    fn symplectic_bilinearity() {
        let cubes = all_subcubes(3).unwrap();
        let ops: Vec<PauliOp> = cubes
            .iter()
            .flat_map(|c| [subcube_pauli(Basis::X, c), subcube_pauli(Basis::Z, c)])
            .collect();
        for p in ops.iter().step_by(7) {
            for q in ops.iter().step_by(5) {
                for r in ops.iter().step_by(11) {
                    let lhs = p.mul(q).commutes(r).unwrap();
                    let rhs = p.commutes(r).unwrap() == q.commutes(r).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn product_tracks_phase() {
        // Z * X = i^2 X Z on one qubit (ZX = -XZ).
        let x = PauliOp::from_supports(BitVec::from_ones(1, [0]), BitVec::zeros(1), 0);
        let z = PauliOp::from_supports(BitVec::zeros(1), BitVec::from_ones(1, [0]), 0);
        assert_eq!(z.mul(&x).phase_exp(), 2);
        assert_eq!(x.mul(&z).phase_exp(), 0);
    }
}
