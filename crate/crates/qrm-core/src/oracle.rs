//! Independent brute-force verifier for diagonal transversal operators.
//!
//! A diagonal transversal operator is an exact phase function
//! `f: Z_2^m -> Z_{2^(k+1)}`; its action on a computational basis string `c`
//! is the phase exponent `E(c) = sum_x f(x) c_x mod 2^(k+1)` in units of
//! `pi / 2^k`. Each logical basis state of a CSS code is a uniform
//! superposition over one coset of the X-stabilizer code, so the operator
//! preserves the code space iff `E` is constant on every coset, and its
//! logical action is the per-coset constant. Everything here is exact
//! integer arithmetic; no amplitudes, no floating point.
//!
//! This module never consults the threshold formulas in [`crate::classify`];
//! the two are kept as independent code paths so that one can check the
//! other.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::bits::{f2_row_reduce, BitVec};
use crate::classify::{Classification, OperatorSpec};
use crate::code::QrmCode;
use crate::error::Error;
use crate::hypercube::{vertex_weight, Vertex};
use crate::pauli::Basis;
use crate::synthesis::CzCircuit;

/// Assignment of the ordered logical qubits, bit `i` holding the `i`-th
/// logical in label order.
pub type LogicalWord = u64;

/// Fixed default seed so identical invocations are byte-identical.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Default number of sampled logical words.
pub const DEFAULT_SAMPLES: usize = 1 << 14;

/// Exhaustive verification runs while `2^(kappa + rank RM(q,m))` basis-string
/// evaluations stay within `2^EXHAUSTIVE_BUDGET_LOG2`.
pub const EXHAUSTIVE_BUDGET_LOG2: u32 = 24;

/// An exact exponent map `Z_2^m -> Z_{2^(k+1)}` representing the diagonal
/// transversal operator that applies `Z(k)^f(x)` at vertex `x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhaseFunction {
    m: u32,
    level: u32,
    exps: Vec<u32>,
}

impl PhaseFunction {
    pub fn zero(m: u32, level: u32) -> Result<PhaseFunction, Error> {
        if m == 0 || m > crate::hypercube::MAX_M {
            return Err(Error::InvalidArgument(format!("m={m} out of range")));
        }
        if level > 30 {
            return Err(Error::InvalidArgument(format!(
                "level {level} too large for exact u32 residues"
            )));
        }
        Ok(PhaseFunction {
            m,
            level,
            exps: vec![0; 1 << m],
        })
    }

    pub fn from_exponents(m: u32, level: u32, exps: Vec<u32>) -> Result<PhaseFunction, Error> {
        let mut f = PhaseFunction::zero(m, level)?;
        if exps.len() != f.exps.len() {
            return Err(Error::InvalidArgument(format!(
                "expected 2^{m} exponents, got {}",
                exps.len()
            )));
        }
        let mask = f.modulus() - 1;
        for (slot, e) in f.exps.iter_mut().zip(exps) {
            *slot = e & mask;
        }
        Ok(f)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> u32 {
        1 << (self.level + 1)
    }

    pub fn get(&self, v: Vertex) -> u32 {
        self.exps[v as usize]
    }

    pub fn add_at(&mut self, v: Vertex, delta: i64) {
        let m = self.modulus() as i64;
        let cur = self.exps[v as usize] as i64;
        self.exps[v as usize] = (cur + delta).rem_euclid(m) as u32;
    }

    pub fn is_zero(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Pointwise sum mod `2^(level+1)`; the phase function of the operator
    /// product.
    pub fn add(&self, other: &PhaseFunction) -> Result<PhaseFunction, Error> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(self.m, other.m));
        }
        if self.level != other.level {
            return Err(Error::ModulusMismatch(self.level, other.level));
        }
        let mask = self.modulus() - 1;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.wrapping_add(*b) & mask)
            .collect();
        Ok(PhaseFunction {
            m: self.m,
            level: self.level,
            exps,
        })
    }
}

/// The phase function of a signed or unsigned `Z(k)` subcube operator:
/// exponent 1 on the subcube (signed: `2^(k+1) - 1` on its odd-weight
/// vertices), 0 elsewhere. X-basis operators are handled by the duality
/// substitution at the classification level, never simulated.
pub fn phase_of_operator(spec: &OperatorSpec) -> Result<PhaseFunction, Error> {
    if spec.basis != Basis::Z {
        return Err(Error::XBasisNotSimulated);
    }
    let mut f = PhaseFunction::zero(spec.subcube.m(), spec.level)?;
    for v in spec.subcube.vertices() {
        if spec.signed && !vertex_weight(v).is_multiple_of(2) {
            f.add_at(v, -1);
        } else {
            f.add_at(v, 1);
        }
    }
    Ok(f)
}

/// Support of the logical basis state for `v`: the coset `shift + span` of
/// the X-stabilizer code `RM(q,m)` inside `F_2^(2^m)`.
#[derive(Clone, Debug)]
pub struct CosetSupport {
    pub shift: BitVec,
    pub generators: Vec<BitVec>,
}

fn logical_x_rows(code: &QrmCode) -> Vec<BitVec> {
    let n = 1usize << code.m();
    code.logical_indices()
        .iter()
        .map(|&j| BitVec::from_ones(n, code.logical_x_subcube(j).vertices().map(|v| v as usize)))
        .collect()
}

fn stabilizer_basis(code: &QrmCode) -> Vec<BitVec> {
    f2_row_reduce(crate::code::rm_generator_matrix(code.q() as i32, code.m()).expect("valid order"))
}

pub fn coset_support(code: &QrmCode, v: LogicalWord) -> Result<CosetSupport, Error> {
    let kappa = code.kappa();
    if kappa > 63 {
        return Err(Error::OracleInfeasible(format!(
            "{code} has {kappa} logical qubits; words larger than 63 bits are not representable"
        )));
    }
    if kappa < 64 && v >> kappa != 0 {
        return Err(Error::InvalidArgument(format!(
            "logical word {v:#x} out of range for kappa={kappa}"
        )));
    }
    let n = 1usize << code.m();
    let mut shift = BitVec::zeros(n);
    for (i, row) in logical_x_rows(code).iter().enumerate() {
        if v >> i & 1 == 1 {
            shift.xor_assign(row);
        }
    }
    Ok(CosetSupport {
        shift,
        generators: stabilizer_basis(code),
    })
}

/// Two members of one coset on which the operator phase differs, certifying
/// that the code space is not preserved.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub logical_word: LogicalWord,
    pub member_a: String,
    pub member_b: String,
    pub phase_a: u32,
    pub phase_b: u32,
}

/// The diagonal logical action of a preserving operator: per logical word,
/// the coset-constant phase exponent, normalized so the all-zero word maps
/// to 0.
#[derive(Clone, Debug)]
pub struct PhaseProfile {
    level: u32,
    kappa: u32,
    sampled: bool,
    entries: ProfileEntries,
}

#[derive(Clone, Debug)]
enum ProfileEntries {
    Dense(Vec<u32>),
    Sparse(Vec<(LogicalWord, u32)>),
}

impl PhaseProfile {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn is_sampled(&self) -> bool {
        self.sampled
    }

    pub fn value(&self, v: LogicalWord) -> Option<u32> {
        match &self.entries {
            ProfileEntries::Dense(vals) => vals.get(v as usize).copied(),
            ProfileEntries::Sparse(pairs) => pairs
                .binary_search_by_key(&v, |&(w, _)| w)
                .ok()
                .map(|i| pairs[i].1),
        }
    }

    pub fn entries(&self) -> Box<dyn Iterator<Item = (LogicalWord, u32)> + '_> {
        match &self.entries {
            ProfileEntries::Dense(vals) => {
                Box::new(vals.iter().enumerate().map(|(v, &p)| (v as LogicalWord, p)))
            }
            ProfileEntries::Sparse(pairs) => Box::new(pairs.iter().copied()),
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.entries().all(|(_, p)| p == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Exhaustive when the total basis-string budget allows, else sampled
    /// with the defaults.
    Auto,
    Exhaustive,
    Sampled {
        samples: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub enum ScanOutcome {
    Preserving(PhaseProfile),
    Broken(Witness),
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub sampled: bool,
    pub outcome: ScanOutcome,
}

struct ScanPlan {
    kappa: u32,
    /// Supports of the logical X representatives, as vertex lists.
    logicals: Vec<Vec<u32>>,
    /// Supports of the reduced X-stabilizer basis, as vertex lists.
    generators: Vec<Vec<u32>>,
}

fn scan_plan(code: &QrmCode) -> Result<ScanPlan, Error> {
    let kappa = code.kappa();
    if kappa > 63 {
        return Err(Error::OracleInfeasible(format!(
            "{code} has {kappa} logical qubits"
        )));
    }
    let as_indices = |v: &BitVec| v.ones().map(|i| i as u32).collect::<Vec<u32>>();
    Ok(ScanPlan {
        kappa: kappa as u32,
        logicals: logical_x_rows(code).iter().map(&as_indices).collect(),
        generators: stabilizer_basis(code).iter().map(&as_indices).collect(),
    })
}

/// The mode `Auto` resolves to for this code, with explicit sampling
/// parameters for the infeasible-budget branch.
pub fn auto_mode(code: &QrmCode, samples: usize, seed: u64) -> Result<OracleMode, Error> {
    let plan = scan_plan(code)?;
    Ok(
        if plan.kappa + plan.generators.len() as u32 <= EXHAUSTIVE_BUDGET_LOG2 {
            OracleMode::Exhaustive
        } else {
            OracleMode::Sampled { samples, seed }
        },
    )
}

fn resolve_mode(plan: &ScanPlan, mode: OracleMode) -> OracleMode {
    match mode {
        OracleMode::Auto => {
            if plan.kappa + plan.generators.len() as u32 <= EXHAUSTIVE_BUDGET_LOG2 {
                OracleMode::Exhaustive
            } else {
                OracleMode::Sampled {
                    samples: DEFAULT_SAMPLES,
                    seed: DEFAULT_SEED,
                }
            }
        }
        other => other,
    }
}

/// Toggles the basis string `c` on `support`, updating the running phase
/// exponent incrementally.
#[inline]
fn flip(c: &mut [u64], e: &mut u32, support: &[u32], exps: &[u32], mask: u32) {
    for &i in support {
        let word = (i >> 6) as usize;
        let bit = i & 63;
        let val = exps[i as usize];
        if c[word] >> bit & 1 == 1 {
            *e = e.wrapping_sub(val) & mask;
        } else {
            *e = e.wrapping_add(val) & mask;
        }
        c[word] ^= 1u64 << bit;
    }
}

fn words_to_bitvec(words: &[u64], n: usize) -> BitVec {
    BitVec::from_ones(n, (0..n).filter(|&i| words[i >> 6] >> (i & 63) & 1 == 1))
}

/// Walks one coset in Gray-code order from `(c0, e0)` and checks that the
/// phase exponent is constant; returns the constant or a differing pair.
fn coset_constant(
    c0: &[u64],
    e0: u32,
    plan: &ScanPlan,
    exps: &[u32],
    mask: u32,
    n: usize,
    v: LogicalWord,
) -> Result<u32, Witness> {
    let rank = plan.generators.len();
    let mut c = c0.to_vec();
    let mut e = e0;
    for t in 1u64..1 << rank {
        let g = t.trailing_zeros() as usize;
        flip(&mut c, &mut e, &plan.generators[g], exps, mask);
        if e != e0 {
            return Err(Witness {
                logical_word: v,
                member_a: words_to_bitvec(c0, n).to_string(),
                member_b: words_to_bitvec(&c, n).to_string(),
                phase_a: e0,
                phase_b: e,
            });
        }
    }
    Ok(e0)
}

/// Scans the code space under the phase function: exhaustively over all
/// logical words when feasible, otherwise over seeded random words with the
/// full coset checked for each. Results are independent of enumeration
/// order.
pub fn scan(code: &QrmCode, f: &PhaseFunction, mode: OracleMode) -> Result<ScanResult, Error> {
    if f.m() != code.m() {
        return Err(Error::DimensionMismatch(f.m(), code.m()));
    }
    let plan = scan_plan(code)?;
    let n = 1usize << code.m();
    let n_words = n.div_ceil(64);
    let mask = f.modulus() - 1;
    let exps = f.exponents();

    match resolve_mode(&plan, mode) {
        OracleMode::Exhaustive => {
            let mut c = vec![0u64; n_words];
            let mut e: u32 = 0;
            let mut profile = vec![0u32; 1usize << plan.kappa];
            for t in 0u64..1 << plan.kappa {
                if t > 0 {
                    let idx = t.trailing_zeros() as usize;
                    flip(&mut c, &mut e, &plan.logicals[idx], exps, mask);
                }
                let v = t ^ (t >> 1);
                match coset_constant(&c, e, &plan, exps, mask, n, v) {
                    Ok(phase) => profile[v as usize] = phase,
                    Err(witness) => {
                        return Ok(ScanResult {
                            sampled: false,
                            outcome: ScanOutcome::Broken(witness),
                        })
                    }
                }
            }
            debug_assert_eq!(profile[0], 0, "the zero coset contains the zero string");
            Ok(ScanResult {
                sampled: false,
                outcome: ScanOutcome::Preserving(PhaseProfile {
                    level: f.level(),
                    kappa: plan.kappa,
                    sampled: false,
                    entries: ProfileEntries::Dense(profile),
                }),
            })
        }
        OracleMode::Sampled { samples, seed } => {
            let vmask = if plan.kappa == 0 {
                0
            } else {
                u64::MAX >> (64 - plan.kappa)
            };
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut words: Vec<LogicalWord> = std::iter::once(0)
                .chain((0..samples).map(|_| rng.next_u64() & vmask))
                .collect();
            words.sort_unstable();
            words.dedup();
            let mut entries = Vec::with_capacity(words.len());
            for &v in &words {
                let mut c = vec![0u64; n_words];
                let mut e: u32 = 0;
                for (i, support) in plan.logicals.iter().enumerate() {
                    if v >> i & 1 == 1 {
                        flip(&mut c, &mut e, support, exps, mask);
                    }
                }
                match coset_constant(&c, e, &plan, exps, mask, n, v) {
                    Ok(phase) => entries.push((v, phase)),
                    Err(witness) => {
                        return Ok(ScanResult {
                            sampled: true,
                            outcome: ScanOutcome::Broken(witness),
                        })
                    }
                }
            }
            Ok(ScanResult {
                sampled: true,
                outcome: ScanOutcome::Preserving(PhaseProfile {
                    level: f.level(),
                    kappa: plan.kappa,
                    sampled: true,
                    entries: ProfileEntries::Sparse(entries),
                }),
            })
        }
        OracleMode::Auto => unreachable!("resolved above"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PreservationReport {
    pub preserves: bool,
    pub sampled: bool,
    pub witness: Option<Witness>,
}

pub fn verify_preserves(code: &QrmCode, f: &PhaseFunction) -> Result<PreservationReport, Error> {
    verify_preserves_with(code, f, OracleMode::Auto)
}

pub fn verify_preserves_with(
    code: &QrmCode,
    f: &PhaseFunction,
    mode: OracleMode,
) -> Result<PreservationReport, Error> {
    let result = scan(code, f, mode)?;
    Ok(match result.outcome {
        ScanOutcome::Preserving(_) => PreservationReport {
            preserves: true,
            sampled: result.sampled,
            witness: None,
        },
        ScanOutcome::Broken(w) => PreservationReport {
            preserves: false,
            sampled: result.sampled,
            witness: Some(w),
        },
    })
}

pub fn phase_profile(code: &QrmCode, f: &PhaseFunction) -> Result<PhaseProfile, Error> {
    phase_profile_with(code, f, OracleMode::Auto)
}

pub fn phase_profile_with(
    code: &QrmCode,
    f: &PhaseFunction,
    mode: OracleMode,
) -> Result<PhaseProfile, Error> {
    match scan(code, f, mode)?.outcome {
        ScanOutcome::Preserving(profile) => Ok(profile),
        ScanOutcome::Broken(w) => Err(Error::NotPreserving(Box::new(w))),
    }
}

/// The oracle's own three-way classification of a diagonal operator, from
/// the scan alone.
#[derive(Clone, Debug, Serialize)]
pub struct OracleVerdict {
    pub tag: Classification,
    pub sampled: bool,
    pub witness: Option<Witness>,
}

pub fn oracle_classify(
    code: &QrmCode,
    f: &PhaseFunction,
    mode: OracleMode,
) -> Result<OracleVerdict, Error> {
    let result = scan(code, f, mode)?;
    Ok(match result.outcome {
        ScanOutcome::Broken(w) => OracleVerdict {
            tag: Classification::NotPreserving,
            sampled: result.sampled,
            witness: Some(w),
        },
        ScanOutcome::Preserving(profile) => OracleVerdict {
            tag: if profile.is_all_zero() {
                Classification::Stabilizer
            } else {
                Classification::NontrivialLogical
            },
            sampled: result.sampled,
            witness: None,
        },
    })
}

/// Bitmask form of a circuit's gates over the code's logical positions.
pub fn circuit_gate_masks(code: &QrmCode, circuit: &CzCircuit) -> Result<Vec<u64>, Error> {
    let logicals = code.logical_indices();
    circuit
        .gates()
        .map(|gate| {
            let mut mask = 0u64;
            for j in gate {
                let pos = logicals.binary_search(j).map_err(|_| {
                    Error::InvalidArgument(format!("{j} is not a logical qubit of {code}"))
                })?;
                mask |= 1 << pos;
            }
            Ok(mask)
        })
        .collect()
}

/// Phase exponent of a multi-controlled-Z circuit on the logical word `v`:
/// `2^k` times the parity of the number of gates whose controls all sit in
/// `v`.
pub fn circuit_phase_exponent(gate_masks: &[u64], level: u32, v: LogicalWord) -> u32 {
    let fired = gate_masks.iter().filter(|&&g| v & g == g).count();
    ((fired & 1) as u32) << level
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub logical_word: LogicalWord,
    pub operator_phase: u32,
    pub circuit_phase: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub sampled: bool,
    pub mismatch: Option<Mismatch>,
    pub not_preserving: Option<Witness>,
}

/// Checks that the physical operator and the logical circuit have identical
/// phase profiles on all (or sampled) logical words.
pub fn verify_equivalence(
    code: &QrmCode,
    spec: &OperatorSpec,
    circuit: &CzCircuit,
) -> Result<EquivalenceReport, Error> {
    verify_equivalence_with(code, spec, circuit, OracleMode::Auto)
}

pub fn verify_equivalence_with(
    code: &QrmCode,
    spec: &OperatorSpec,
    circuit: &CzCircuit,
    mode: OracleMode,
) -> Result<EquivalenceReport, Error> {
    let masks = circuit_gate_masks(code, circuit)?;
    let f = phase_of_operator(spec)?;
    let result = scan(code, &f, mode)?;
    match result.outcome {
        ScanOutcome::Broken(w) => Ok(EquivalenceReport {
            equivalent: false,
            sampled: result.sampled,
            mismatch: None,
            not_preserving: Some(w),
        }),
        ScanOutcome::Preserving(profile) => {
            for (v, op_phase) in profile.entries() {
                let circ_phase = circuit_phase_exponent(&masks, spec.level, v);
                if op_phase != circ_phase {
                    return Ok(EquivalenceReport {
                        equivalent: false,
                        sampled: result.sampled,
                        mismatch: Some(Mismatch {
                            logical_word: v,
                            operator_phase: op_phase,
                            circuit_phase: circ_phase,
                        }),
                        not_preserving: None,
                    });
                }
            }
            Ok(EquivalenceReport {
                equivalent: true,
                sampled: result.sampled,
                mismatch: None,
                not_preserving: None,
            })
        }
    }
}
