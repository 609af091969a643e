//! Construction of the quantum Reed-Muller code `QRM_m(q,r)`: stabilizer
//! generators, the symplectic logical basis, code parameters, and the
//! classical Reed-Muller generator matrices that back the oracle.

use std::fmt;

use serde::Serialize;

use crate::bits::{f2_rank, BitVec};
use crate::error::Error;
use crate::hypercube::{enumerate_subcubes, gen_sets_of_size, GenSet, Subcube, MAX_M};
use crate::pauli::{subcube_pauli, Basis, PauliOp};

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

/// The CSS code with X stabilizers on all `(m-q)`-cubes and Z stabilizers on
/// all `(r+1)`-cubes of the `m`-dimensional hypercube.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct QrmCode {
    m: u32,
    q: u32,
    r: u32,
}

/// Label of one logical qubit: a generator subset `J` with `q+1 <= |J| <= r`.
///
/// The derived order (size ascending, then lexicographic) is the global
/// logical-qubit numbering used in circuit output.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LogicalIndex(pub GenSet);

impl fmt::Display for LogicalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CodeParams {
    pub n: u64,
    pub kappa: u64,
    pub d: u64,
    pub k_max: u32,
}

impl QrmCode {
    pub fn new(m: u32, q: u32, r: u32) -> Result<QrmCode, Error> {
        if m == 0 || m > MAX_M || q > r || r > m {
            return Err(Error::InvalidCode { m, q, r });
        }
        Ok(QrmCode { m, q, r })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> u64 {
        1 << self.m
    }

    pub fn kappa(&self) -> u64 {
        (self.q + 1..=self.r).map(|i| binomial(self.m, i)).sum()
    }

    /// Highest hierarchy level with a non-empty logical band, i.e. the
    /// largest `k` with `q + k*r + 1 <= m`. Degenerate codes (`r = 0` or
    /// `q = m`) report 0.
    pub fn k_max(&self) -> u32 {
        if self.r == 0 || self.q == self.m {
            0
        } else {
            (self.m - self.q - 1) / self.r
        }
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            n: self.n(),
            kappa: self.kappa(),
            d: 1 << (self.q + 1).min(self.m - self.r),
            k_max: self.k_max(),
        }
    }

    /// X generators on every `(m-q)`-cube and Z generators on every
    /// `(r+1)`-cube (none when `r + 1 > m`).
    pub fn stabilizer_generators(&self) -> (Vec<PauliOp>, Vec<PauliOp>) {
        let x = enumerate_subcubes(self.m, self.m - self.q)
            .expect("valid dimensions")
            .iter()
            .map(|a| subcube_pauli(Basis::X, a))
            .collect();
        let z = if self.r + 1 > self.m {
            Vec::new()
        } else {
            enumerate_subcubes(self.m, self.r + 1)
                .expect("valid dimensions")
                .iter()
                .map(|a| subcube_pauli(Basis::Z, a))
                .collect()
        };
        (x, z)
    }

    /// The logical-qubit labels, sorted by size then lexicographically.
    pub fn logical_indices(&self) -> Vec<LogicalIndex> {
        let mut out = Vec::new();
        for size in self.q + 1..=self.r {
            for j in gen_sets_of_size(self.m, size) {
                out.push(LogicalIndex(j));
            }
        }
        out.sort();
        out
    }

    pub fn is_logical_index(&self, j: GenSet) -> bool {
        (self.q + 1..=self.r).contains(&j.size())
    }

    /// Support of the logical Z operator for `J`: the standard subcube `<J>`.
    pub fn logical_z_subcube(&self, j: LogicalIndex) -> Subcube {
        Subcube::standard(self.m, j.0).expect("valid label")
    }

    /// Support of the logical X operator for `J`: the shifted subcube
    /// `e_J + <S \ J>`.
    pub fn logical_x_subcube(&self, j: LogicalIndex) -> Subcube {
        Subcube::new(self.m, j.0.incidence_vertex(), j.0.complement_in(self.m))
            .expect("valid label")
    }

    /// One symplectic pair `(Z_J, X_J)` per logical qubit, in label order.
    pub fn logical_basis(&self) -> Vec<(LogicalIndex, PauliOp, PauliOp)> {
        self.logical_indices()
            .into_iter()
            .map(|j| {
                (
                    j,
                    subcube_pauli(Basis::Z, &self.logical_z_subcube(j)),
                    subcube_pauli(Basis::X, &self.logical_x_subcube(j)),
                )
            })
            .collect()
    }
}

impl fmt::Display for QrmCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRM_{}({},{})", self.m, self.q, self.r)
    }
}

/// Indicator rows of the standard subcubes `<J>` with `|J| >= m - r`, whose
/// span over `F_2` is the Reed-Muller code `RM(r, m)`. Order `r = -1` gives
/// the zero code (no rows) and `r = m` spans everything.
pub fn rm_generator_matrix(r: i32, m: u32) -> Result<Vec<BitVec>, Error> {
    if m == 0 || m > MAX_M || r < -1 || r > m as i32 {
        return Err(Error::InvalidArgument(format!(
            "RM order out of range: r={r}, m={m}"
        )));
    }
    let n = 1usize << m;
    let mut rows = Vec::new();
    if r == -1 {
        return Ok(rows);
    }
    for size in (m - r as u32)..=m {
        for j in gen_sets_of_size(m, size) {
            let cube = Subcube::standard(m, j)?;
            rows.push(BitVec::from_ones(n, cube.vertices().map(|v| v as usize)));
        }
    }
    Ok(rows)
}

pub fn rm_rank(r: i32, m: u32) -> Result<usize, Error> {
    Ok(f2_rank(rm_generator_matrix(r, m)?))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TableRow {
    pub m: u32,
    pub q: u32,
    pub r: u32,
    pub n: u64,
    pub kappa: u64,
    pub d: u64,
    pub k_max: u32,
}

/// All codes with `m <= max_m`, at least one logical qubit, and
/// `k_max >= min_kmax`, ordered by `m`, then `r`, then `q`.
pub fn table_rows(max_m: u32, min_kmax: u32) -> Result<Vec<TableRow>, Error> {
    if max_m > MAX_M {
        return Err(Error::InvalidArgument(format!(
            "max-m out of range 1..={MAX_M}"
        )));
    }
    let mut rows = Vec::new();
    for m in 1..=max_m {
        for r in 1..=m {
            for q in 0..r {
                let code = QrmCode::new(m, q, r)?;
                let p = code.params();
                if p.k_max >= min_kmax {
                    rows.push(TableRow {
                        m,
                        q,
                        r,
                        n: p.n,
                        kappa: p.kappa,
                        d: p.d,
                        k_max: p.k_max,
                    });
                }
            }
        }
    }
    Ok(rows)
}
