//! Exact construction and analysis of quantum Reed-Muller codes through the
//! subcube geometry of the Boolean hypercube.
//!
//! The library builds `QRM_m(q,r)` stabilizer codes whose X and Z generators
//! act on subcubes of fixed dimensions, classifies which transversal
//! `Z(k)`-rotation subcube operators preserve the code space, synthesizes
//! the logical multi-controlled-Z circuits they implement, and checks every
//! statement against an independent brute-force phase oracle. All
//! arithmetic is exact: phases are residues mod `2^(k+1)`, never floats.
//!
//! ```
//! use qrm_core::{classify, Classification, OperatorSpec, QrmCode, Subcube};
//!
//! // The [[8,3,2]] code: a signed T across the whole cube performs logic.
//! let code = QrmCode::new(3, 0, 1).unwrap();
//! let spec = OperatorSpec::z(2, Subcube::full(3).unwrap(), true);
//! assert_eq!(classify(&code, &spec), Classification::NontrivialLogical);
//! ```

pub mod bits;
pub mod classify;
pub mod code;
pub mod error;
pub mod hypercube;
pub mod oracle;
pub mod pauli;
pub mod ring;
pub mod synthesis;

pub use classify::{
    admissible_table, classify, classify_dim, conjugate_x, thresholds, AdmissibleRow,
    Classification, Conjugation, OperatorSpec, Thresholds,
};
pub use code::{
    binomial, rm_generator_matrix, rm_rank, table_rows, CodeParams, LogicalIndex, QrmCode, TableRow,
};
pub use error::Error;
pub use hypercube::{
    all_subcubes, decompose_indicator_f2, decompose_indicator_z, enumerate_subcubes, parse_subcube,
    unsigned_to_signed_standard, GenSet, IntIndicatorCombo, OctaSimplex, Subcube, Vertex,
};
pub use oracle::{
    coset_support, oracle_classify, phase_of_operator, phase_profile, verify_equivalence,
    verify_preserves, LogicalWord, OracleMode, PhaseFunction, PhaseProfile, Witness,
};
pub use pauli::{subcube_pauli, Basis, PauliOp};
pub use ring::{
    conjecture_probe, grm_generators, membership, stacked_error_module, ProbeReport, RingModule,
    RingVector,
};
pub use synthesis::{
    arbitrary_subcube_circuit, decompose_to_standard, index_set_qk, level_of, minimal_covers,
    signed_standard_circuit, unsigned_standard_circuit, CoverFamily, CzCircuit, Gate,
};
