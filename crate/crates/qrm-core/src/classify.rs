//! Validity classification of signed and unsigned `Z(k)` / `X(k)` subcube
//! operators, and the phase-free conjugation calculus behind it.
//!
//! Classification is pure threshold arithmetic on the subcube dimension. The
//! brute-force check of these thresholds lives in the oracle module so that
//! the statement and its test are independent code paths.

use serde::Serialize;

use crate::code::QrmCode;
use crate::error::Error;
use crate::hypercube::{signed_indicator, Subcube};
use crate::pauli::Basis;

/// A diagonal transversal subcube operator: `Z(k)` or `X(k)` gates, plain or
/// sign-alternating by vertex parity, applied across a subcube.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OperatorSpec {
    pub basis: Basis,
    pub signed: bool,
    pub level: u32,
    pub subcube: Subcube,
}

impl OperatorSpec {
    pub fn z(level: u32, subcube: Subcube, signed: bool) -> Self {
        OperatorSpec {
            basis: Basis::Z,
            signed,
            level,
            subcube,
        }
    }

    /// Residues are taken mod `2^(level+1)`.
    pub fn modulus(&self) -> u32 {
        1 << (self.level + 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Classification {
    /// Rotates some state out of the code space.
    NotPreserving,
    /// Fixes every code state.
    Stabilizer,
    /// Preserves the code space and acts non-trivially on it.
    NontrivialLogical,
}

/// Dimension thresholds for one (basis, level) pair: the operator preserves
/// the code space iff `dim >= preserve_min_dim`, and stabilizes it iff
/// `dim >= stabilizer_min_dim`. Signed, because the X-basis substitution on
/// degenerate codes (`r = m` or `q = m`) pushes bounds below zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Thresholds {
    pub preserve_min_dim: i64,
    pub logical_max_dim: i64,
    pub stabilizer_min_dim: i64,
}

/// Threshold parameters for the given basis. The X basis reuses the Z-basis
/// statement under the substitution `r -> m-q-1`, `q -> m-r-1`.
pub fn thresholds(code: &QrmCode, basis: Basis, level: u32) -> Thresholds {
    let (m, level) = (code.m() as i64, level as i64);
    let (q, r) = match basis {
        Basis::Z => (code.q() as i64, code.r() as i64),
        Basis::X => (m - code.r() as i64 - 1, m - code.q() as i64 - 1),
    };
    Thresholds {
        preserve_min_dim: q + level * r + 1,
        logical_max_dim: (level + 1) * r,
        stabilizer_min_dim: (level + 1) * r + 1,
    }
}

/// Classification by subcube dimension alone; signedness does not change the
/// thresholds.
pub fn classify_dim(code: &QrmCode, basis: Basis, level: u32, dim: u32) -> Classification {
    let t = thresholds(code, basis, level);
    let dim = dim as i64;
    if dim >= t.stabilizer_min_dim {
        Classification::Stabilizer
    } else if dim >= t.preserve_min_dim && dim <= t.logical_max_dim {
        Classification::NontrivialLogical
    } else {
        Classification::NotPreserving
    }
}

pub fn classify(code: &QrmCode, spec: &OperatorSpec) -> Classification {
    assert_eq!(
        spec.subcube.m(),
        code.m(),
        "operator subcube lives in the wrong hypercube"
    );
    classify_dim(code, spec.basis, spec.level, spec.subcube.dim())
}

/// Result of conjugating `X_B` by a diagonal subcube operator: a residual
/// operator one level down on the intersection, times a global phase
/// `omega^phase_exponent` with `omega` of order `2^(level+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjugation {
    pub phase_exponent: u32,
    /// `None` when the intersection is empty or the residual level would be
    /// -1 (the identity).
    pub residual: Option<OperatorSpec>,
}

impl Conjugation {
    pub fn is_phase_free(&self) -> bool {
        self.phase_exponent == 0
    }
}

/// Conjugates `X_B` by the Z-basis operator `spec`, code-independently.
///
/// Signed operators are phase-free iff `dim(A ∩ B) >= 1`; unsigned operators
/// pick up `omega^|A ∩ B|` and are phase-free iff `dim(A ∩ B) >= level + 1`.
pub fn conjugate_x(spec: &OperatorSpec, b: &Subcube) -> Result<Conjugation, Error> {
    if spec.basis != Basis::Z {
        return Err(Error::XBasisNotSimulated);
    }
    let modulus = spec.modulus() as i64;
    let Some(inter) = spec.subcube.intersect(b)? else {
        return Ok(Conjugation {
            phase_exponent: 0,
            residual: None,
        });
    };
    let phase = if spec.signed {
        // Sum of (-1)^|v| over the intersection: zero on any subcube of
        // dimension >= 1, +-1 on a vertex.
        inter.vertices().map(|v| signed_indicator(&inter, v)).sum()
    } else {
        inter.cardinality() as i64
    };
    let residual = if spec.level == 0 {
        None
    } else {
        Some(OperatorSpec {
            basis: Basis::Z,
            signed: spec.signed,
            level: spec.level - 1,
            subcube: inter,
        })
    };
    Ok(Conjugation {
        phase_exponent: phase.rem_euclid(modulus) as u32,
        residual,
    })
}

/// One row of the admissible-dimension table: the classification of the
/// given operator kind across subcube dimensions `0..=m`.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibleRow {
    pub basis: Basis,
    pub level: u32,
    pub entries: Vec<Classification>,
}

impl AdmissibleRow {
    pub fn label(&self) -> String {
        match (self.basis, self.level) {
            (Basis::X, 0) => "X".to_string(),
            (Basis::Z, 0) => "Z".to_string(),
            (Basis::Z, k) => format!("Z~({k})"),
            (Basis::X, k) => format!("X~({k})"),
        }
    }
}

/// Rows X, Z, then the signed rotations `Z~(1) ..= Z~(k_max)`, each across
/// dimensions `0..=m`.
pub fn admissible_table(code: &QrmCode, k_max: u32) -> Vec<AdmissibleRow> {
    let dims = 0..=code.m();
    let mut rows = Vec::new();
    let fill = |basis, level| AdmissibleRow {
        basis,
        level,
        entries: dims
            .clone()
            .map(|d| classify_dim(code, basis, level, d))
            .collect(),
    };
    rows.push(fill(Basis::X, 0));
    for level in 0..=k_max {
        rows.push(fill(Basis::Z, level));
    }
    rows
}
