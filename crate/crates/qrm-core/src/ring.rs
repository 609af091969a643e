//! Generalized Reed-Muller codes over `Z_{2^(k+1)}`: construction from
//! signed indicators, membership by canonical row reduction, and a seeded
//! randomized probe of whether preserving diagonal operators always fall in
//! the stacked module.
//!
//! `Z_{2^(k+1)}` is not a field and these modules need not have a basis, so
//! membership runs over a Howell-style canonical form: pivots are chosen by
//! minimal 2-adic valuation and annihilator multiples of placed rows are
//! retained until the span closes.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::code::QrmCode;
use crate::error::Error;
use crate::hypercube::{GenSet, Subcube, MAX_M};
use crate::oracle::{self, OracleMode, PhaseFunction};

/// A length-`2^m` vector of residues mod `2^(k+1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingVector {
    m: u32,
    level: u32,
    vals: Vec<u32>,
}

impl RingVector {
    pub fn zero(m: u32, level: u32) -> Result<RingVector, Error> {
        if m == 0 || m > MAX_M {
            return Err(Error::InvalidArgument(format!("m={m} out of range")));
        }
        if level > 30 {
            return Err(Error::InvalidArgument(format!("level {level} too large")));
        }
        Ok(RingVector {
            m,
            level,
            vals: vec![0; 1 << m],
        })
    }

    /// The signed indicator of a subcube, reduced mod `2^(k+1)`.
    pub fn signed_indicator(a: &Subcube, level: u32) -> Result<RingVector, Error> {
        let mut v = RingVector::zero(a.m(), level)?;
        let modulus = v.modulus();
        for x in a.vertices() {
            v.vals[x as usize] = if crate::hypercube::vertex_weight(x).is_multiple_of(2) {
                1
            } else {
                modulus - 1
            };
        }
        Ok(v)
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

    pub fn values(&self) -> &[u32] {
        &self.vals
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, c: u32) -> RingVector {
        let mask = self.modulus() - 1;
        RingVector {
            m: self.m,
            level: self.level,
            vals: self
                .vals
                .iter()
                .map(|&x| x.wrapping_mul(c) & mask)
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &RingVector) -> Result<(), Error> {
        if self.level != other.level {
            return Err(Error::ModulusMismatch(self.level, other.level));
        }
        if self.m != other.m {
            return Err(Error::DimensionMismatch(self.m, other.m));
        }
        let mask = self.modulus() - 1;
        for (a, b) in self.vals.iter_mut().zip(&other.vals) {
            *a = a.wrapping_add(*b) & mask;
        }
        Ok(())
    }

    pub fn to_phase_function(&self) -> PhaseFunction {
        PhaseFunction::from_exponents(self.m, self.level, self.vals.clone())
            .expect("lengths agree by construction")
    }
}

/// Inverse of an odd residue mod `2^e`, by Newton iteration.
fn odd_inverse(u: u64, modulus: u64) -> u64 {
    debug_assert!(u % 2 == 1);
    let mut x = u; // correct mod 8 already for e <= 3, refined below
    for _ in 0..6 {
        x = x.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(x))) & (modulus - 1);
    }
    debug_assert_eq!(u.wrapping_mul(x) & (modulus - 1), 1);
    x
}

#[derive(Clone, Debug)]
struct HowellRow {
    pivot_col: usize,
    pivot_log2: u32,
    vals: Vec<u32>,
}

/// A submodule of `Z_{2^(k+1)}^(2^m)` given by generators, with its Howell
/// canonical form precomputed for membership tests.
#[derive(Clone, Debug)]
pub struct RingModule {
    m: u32,
    level: u32,
    generators: Vec<RingVector>,
    reduced: Vec<HowellRow>,
}

fn val2(x: u32) -> u32 {
    debug_assert!(x != 0);
    x.trailing_zeros()
}

fn row_sub_scaled(row: &mut [u32], pivot: &[u32], factor: u32, mask: u32) {
    for (a, b) in row.iter_mut().zip(pivot) {
        *a = a.wrapping_sub(b.wrapping_mul(factor)) & mask;
    }
}

/// One echelon sweep: after it, each placed row has pivot `2^v` at a fresh
/// column and every later row is zero on all earlier pivot columns.
fn echelon(mut rows: Vec<Vec<u32>>, e: u32, len: usize) -> Vec<HowellRow> {
    let mask = ((1u64 << e) - 1) as u32;
    let modulus = 1u64 << e;
    let mut placed: Vec<HowellRow> = Vec::new();
    for col in 0..len {
        let Some(best) = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r[col] != 0)
            .min_by_key(|(_, r)| val2(r[col]))
            .map(|(i, _)| i)
        else {
            continue;
        };
        let mut pivot_row = rows.swap_remove(best);
        let v = val2(pivot_row[col]);
        let unit = (pivot_row[col] >> v) as u64;
        let inv = odd_inverse(unit, modulus) as u32;
        for x in pivot_row.iter_mut() {
            *x = x.wrapping_mul(inv) & mask;
        }
        debug_assert_eq!(pivot_row[col], 1 << v);
        for row in rows.iter_mut() {
            if row[col] != 0 {
                // The pivot has minimal valuation in this column.
                let factor = row[col] >> v;
                row_sub_scaled(row, &pivot_row, factor, mask);
                debug_assert_eq!(row[col], 0);
            }
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
        placed.push(HowellRow {
            pivot_col: col,
            pivot_log2: v,
            vals: pivot_row,
        });
    }
    placed
}

/// Reduces `v` by the placed rows; leaves the unreducible residue.
fn reduce_vec(v: &mut [u32], placed: &[HowellRow], e: u32) {
    let mask = ((1u64 << e) - 1) as u32;
    for row in placed {
        let x = v[row.pivot_col];
        if x >> row.pivot_log2 != 0 {
            row_sub_scaled(v, &row.vals, x >> row.pivot_log2, mask);
        }
    }
}

fn howell(rows: Vec<Vec<u32>>, e: u32, len: usize) -> Vec<HowellRow> {
    let mask = ((1u64 << e) - 1) as u32;
    let mut work: Vec<Vec<u32>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    loop {
        let placed = echelon(work, e, len);
        // Annihilator multiples 2^(e-v) * row kill their own pivot but can
        // expose span elements with a later leading column.
        let mut extra: Vec<Vec<u32>> = Vec::new();
        for row in &placed {
            if row.pivot_log2 == 0 {
                continue;
            }
            let factor = 1u32 << (e - row.pivot_log2);
            let mut ann: Vec<u32> = row
                .vals
                .iter()
                .map(|&x| x.wrapping_mul(factor) & mask)
                .collect();
            reduce_vec(&mut ann, &placed, e);
            if ann.iter().any(|&x| x != 0) {
                extra.push(ann);
            }
        }
        if extra.is_empty() {
            // Canonicalize entries above each pivot modulo the pivot.
            let mut rows: Vec<HowellRow> = placed;
            for i in 0..rows.len() {
                let (before, rest) = rows.split_at_mut(i);
                let pivot = &rest[0];
                for row in before {
                    let x = row.vals[pivot.pivot_col];
                    if x >> pivot.pivot_log2 != 0 {
                        row_sub_scaled(&mut row.vals, &pivot.vals, x >> pivot.pivot_log2, mask);
                    }
                }
            }
            return rows;
        }
        work = extra;
        work.extend(placed.into_iter().map(|r| r.vals));
    }
}

impl RingModule {
    pub fn new(m: u32, level: u32, generators: Vec<RingVector>) -> Result<RingModule, Error> {
        for g in &generators {
            if g.m() != m {
                return Err(Error::DimensionMismatch(g.m(), m));
            }
            if g.level() != level {
                return Err(Error::ModulusMismatch(g.level(), level));
            }
        }
        let len = 1usize << m;
        let rows = generators.iter().map(|g| g.vals.clone()).collect();
        let reduced = howell(rows, level + 1, len);
        Ok(RingModule {
            m,
            level,
            generators,
            reduced,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn generators(&self) -> &[RingVector] {
        &self.generators
    }

    pub fn num_reduced_rows(&self) -> usize {
        self.reduced.len()
    }

    pub fn is_zero_module(&self) -> bool {
        self.reduced.is_empty()
    }

    /// A random `Z_{2^(k+1)}`-combination of the generators.
    pub fn random_element(&self, rng: &mut impl RngCore) -> Result<RingVector, Error> {
        let mut out = RingVector::zero(self.m, self.level)?;
        let modulus = out.modulus();
        for g in &self.generators {
            let c = rng.gen_range(0..modulus);
            out.add_assign(&g.scaled(c))?;
        }
        Ok(out)
    }
}

/// Membership of `f` in the module, decided on the Howell form.
pub fn membership(f: &RingVector, module: &RingModule) -> Result<bool, Error> {
    if f.m() != module.m() {
        return Err(Error::DimensionMismatch(f.m(), module.m()));
    }
    if f.level() != module.level() {
        return Err(Error::ModulusMismatch(f.level(), module.level()));
    }
    let mut v = f.vals.clone();
    reduce_vec(&mut v, &module.reduced, module.level + 1);
    Ok(v.iter().all(|&x| x == 0))
}

/// The generalized Reed-Muller code over `Z_{2^(k+1)}`: generated by the
/// signed indicators of the standard subcubes of dimension at least `m - r`.
/// Order `r = -1` (or below) gives the zero module.
pub fn grm_generators(level: u32, r: i32, m: u32) -> Result<RingModule, Error> {
    if m == 0 || m > MAX_M || r > m as i32 {
        return Err(Error::InvalidArgument(format!(
            "GRM order out of range: r={r}, m={m}"
        )));
    }
    let mut gens = Vec::new();
    if r >= 0 {
        for size in (m - r as u32)..=m {
            for j in crate::hypercube::gen_sets_of_size(m, size) {
                gens.push(RingVector::signed_indicator(
                    &Subcube::standard(m, j)?,
                    level,
                )?);
            }
        }
    }
    RingModule::new(m, level, gens)
}

/// The stacked module of level-`k` diagonal logical phase functions: the sum
/// over `i = 0..=k` of `2^(k-i)` times the generators of
/// `RM_k(m - (q + i*r + 1), m)`. Terms whose order falls below -1 contribute
/// nothing.
pub fn stacked_error_module(code: &QrmCode, level: u32) -> Result<RingModule, Error> {
    let m = code.m();
    let mut gens: Vec<RingVector> = Vec::new();
    for i in 0..=level {
        let order = m as i32 - (code.q() + i * code.r() + 1) as i32;
        if order < -1 {
            continue;
        }
        let layer = grm_generators(level, order, m)?;
        let scale = 1u32 << (level - i);
        gens.extend(layer.generators().iter().map(|g| g.scaled(scale)));
    }
    RingModule::new(m, level, gens)
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ProbeArm {
    /// Random module elements; must always be preserving members.
    ModuleElement,
    /// Random scaled subcube indicators, signed or unsigned.
    SubcubeIndicator,
    /// Module elements with a few random entries perturbed.
    SparsePerturbation,
}

const ARMS: [ProbeArm; 3] = [
    ProbeArm::ModuleElement,
    ProbeArm::SubcubeIndicator,
    ProbeArm::SparsePerturbation,
];

#[derive(Clone, Debug, Serialize)]
pub struct ArmStats {
    pub arm: ProbeArm,
    pub trials: u64,
    pub preserving: u64,
    pub members: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub trial: u64,
    pub arm: ProbeArm,
    pub exponents: Vec<u32>,
}

/// Structured evidence from a probe run. A preserving non-member would be a
/// counterexample candidate for the stacked-module characterization; the
/// probe reports evidence only and settles nothing.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub m: u32,
    pub q: u32,
    pub r: u32,
    pub level: u32,
    pub trials: u64,
    pub seed: u64,
    pub sampled_oracle: bool,
    pub arms: Vec<ArmStats>,
    pub counterexamples_found: u64,
    pub counterexamples: Vec<Counterexample>,
    pub summary: String,
}

const MAX_STORED_COUNTEREXAMPLES: usize = 8;

/// Runs `trials` seeded random trials against the stacked module of the
/// code, testing every preserving sample for membership.
pub fn conjecture_probe(
    code: &QrmCode,
    level: u32,
    trials: u64,
    seed: u64,
) -> Result<ProbeReport, Error> {
    let module = stacked_error_module(code, level)?;
    let m = code.m();
    let mut arms: Vec<ArmStats> = ARMS
        .iter()
        .map(|&arm| ArmStats {
            arm,
            trials: 0,
            preserving: 0,
            members: 0,
        })
        .collect();
    let mut counterexamples = Vec::new();
    let mut counterexamples_found = 0u64;
    let mut sampled_oracle = false;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    for trial in 0..trials {
        let arm = ARMS[(trial % 3) as usize];
        let f = match arm {
            ProbeArm::ModuleElement => module.random_element(&mut rng)?,
            ProbeArm::SubcubeIndicator => {
                let mask = GenSet(rng.gen_range(0..1u32 << m));
                let offset = rng.gen_range(0..1u32 << m);
                let cube = Subcube::new(m, offset, mask)?;
                let base = if rng.gen::<bool>() {
                    RingVector::signed_indicator(&cube, level)?
                } else {
                    let mut v = RingVector::zero(m, level)?;
                    for x in cube.vertices() {
                        v.vals[x as usize] = 1;
                    }
                    v
                };
                base.scaled(1 << rng.gen_range(0..=level))
            }
            ProbeArm::SparsePerturbation => {
                let mut f = module.random_element(&mut rng)?;
                let modulus = f.modulus();
                for _ in 0..rng.gen_range(1..=3usize) {
                    let x = rng.gen_range(0..1u32 << m);
                    f.vals[x as usize] =
                        f.vals[x as usize].wrapping_add(rng.gen_range(1..modulus)) & (modulus - 1);
                }
                f
            }
        };
        let stats = arms.iter_mut().find(|s| s.arm == arm).unwrap();
        stats.trials += 1;
        let report = oracle::verify_preserves_with(code, &f.to_phase_function(), OracleMode::Auto)?;
        sampled_oracle |= report.sampled;
        if !report.preserves {
            continue;
        }
        stats.preserving += 1;
        if membership(&f, &module)? {
            stats.members += 1;
        } else {
            counterexamples_found += 1;
            if counterexamples.len() < MAX_STORED_COUNTEREXAMPLES {
                counterexamples.push(Counterexample {
                    trial,
                    arm,
                    exponents: f.vals.clone(),
                });
            }
        }
    }

    let summary = if counterexamples_found == 0 {
        format!("no counterexample in {trials} trials")
    } else {
        format!("{counterexamples_found} counterexample candidates in {trials} trials")
    };
    Ok(ProbeReport {
        m,
        q: code.q(),
        r: code.r(),
        level,
        trials,
        seed,
        sampled_oracle,
        arms,
        counterexamples_found,
        counterexamples,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{f2_in_span, f2_row_reduce, BitVec};
    use crate::code::rm_generator_matrix;

    #[test]
    fn howell_handles_non_unit_pivots() {
        // Mod 4, the single generator [2,1] spans [0,2] via doubling; plain
        // echelon reduction would miss it.
        let rows = vec![vec![2u32, 1]];
        let reduced = howell(rows, 2, 2);
        let module = RingModule {
            m: 1,
            level: 1,
            generators: vec![],
            reduced,
        };
        let member = RingVector {
            m: 1,
            level: 1,
            vals: vec![0, 2],
        };
        assert!(membership(&member, &module).unwrap());
        let non_member = RingVector {
            m: 1,
            level: 1,
            vals: vec![0, 1],
        };
        assert!(!membership(&non_member, &module).unwrap());
    }

    #[test]
    fn grm_edge_orders() {
        assert!(grm_generators(2, -1, 3).unwrap().is_zero_module());
        // k=2, m=3, r=1: standard subcubes of dimension >= 2: 3 faces + cube.
        assert_eq!(grm_generators(2, 1, 3).unwrap().generators().len(), 4);
    }

    #[test]
    fn membership_matches_bruteforce_span() {
        // Random tiny modules, membership compared against full enumeration
        // of every coefficient combination.
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for (m, level) in [(2u32, 1u32), (1, 2)] {
            let len = 1usize << m;
            let modulus = 1u32 << (level + 1);
            for _ in 0..25 {
                let gens: Vec<RingVector> = (0..rng.gen_range(1..=3usize))
                    .map(|_| RingVector {
                        m,
                        level,
                        vals: (0..len).map(|_| rng.gen_range(0..modulus)).collect(),
                    })
                    .collect();
                let module = RingModule::new(m, level, gens.clone()).unwrap();

                let mut span = std::collections::HashSet::new();
                for combo in 0..modulus.pow(gens.len() as u32) {
                    let mut v = RingVector::zero(m, level).unwrap();
                    let mut c = combo;
                    for g in &gens {
                        v.add_assign(&g.scaled(c % modulus)).unwrap();
                        c /= modulus;
                    }
                    span.insert(v.vals);
                }

                for packed in 0..modulus.pow(len as u32) {
                    let mut vals = Vec::with_capacity(len);
                    let mut p = packed;
                    for _ in 0..len {
                        vals.push(p % modulus);
                        p /= modulus;
                    }
                    let probe = RingVector { m, level, vals };
                    assert_eq!(
                        membership(&probe, &module).unwrap(),
                        span.contains(&probe.vals),
                        "m={m} level={level} vals={:?}",
                        probe.vals
                    );
                }
            }
        }
    }

    #[test]
    fn grm_mod2_collapse() {
        // At level 0 the signed generators reduce to the binary RM code.
        for m in 1..=4u32 {
            for r in -1..=m as i32 {
                let module = grm_generators(0, r, m).unwrap();
                let binary = f2_row_reduce(rm_generator_matrix(r, m).unwrap());
                let module_rows: Vec<BitVec> = module
                    .generators()
                    .iter()
                    .map(|g| {
                        BitVec::from_ones(
                            1 << m,
                            g.values()
                                .iter()
                                .enumerate()
                                .filter(|(_, &x)| x % 2 == 1)
                                .map(|(i, _)| i),
                        )
                    })
                    .collect();
                assert_eq!(f2_row_reduce(module_rows.clone()).len(), binary.len());
                for row in &module_rows {
                    assert!(f2_in_span(row, &binary));
                }
            }
        }
    }

    #[test]
    fn membership_basics() {
        let module = stacked_error_module(&QrmCode::new(3, 0, 1).unwrap(), 2).unwrap();
        let zero = RingVector::zero(3, 2).unwrap();
        assert!(membership(&zero, &module).unwrap());
        for g in module.generators() {
            assert!(membership(g, &module).unwrap());
        }
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..50 {
            let f = module.random_element(&mut rng).unwrap();
            assert!(membership(&f, &module).unwrap());
        }
    }

    #[test]
    fn membership_is_order_independent() {
        let code = QrmCode::new(4, 0, 2).unwrap();
        let module = stacked_error_module(&code, 1).unwrap();
        let mut gens = module.generators().to_vec();
        gens.reverse();
        let permuted = RingModule::new(4, 1, gens).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..30 {
            let f = module.random_element(&mut rng).unwrap();
            assert!(membership(&f, &permuted).unwrap());
        }
        let spike = RingVector {
            m: 4,
            level: 1,
            vals: {
                let mut v = vec![0; 16];
                v[3] = 1;
                v
            },
        };
        assert_eq!(
            membership(&spike, &module).unwrap(),
            membership(&spike, &permuted).unwrap()
        );
    }

    #[test]
    fn weight_one_vector_is_not_a_member() {
        // Mod 2 the stacked module of QRM_3(0,1) at level 0 is RM(2,3),
        // whose minimum weight is 2.
        let module = stacked_error_module(&QrmCode::new(3, 0, 1).unwrap(), 0).unwrap();
        let mut spike = RingVector::zero(3, 0).unwrap();
        spike.vals[0] = 1;
        assert!(!membership(&spike, &module).unwrap());
    }

    #[test]
    fn stacked_level0_matches_undetectable_z_code() {
        for (m, q, r) in [(3, 0, 1), (4, 0, 2), (4, 1, 2)] {
            let code = QrmCode::new(m, q, r).unwrap();
            let module = stacked_error_module(&code, 0).unwrap();
            let binary = f2_row_reduce(rm_generator_matrix(m as i32 - q as i32 - 1, m).unwrap());
            let rows: Vec<BitVec> = module
                .generators()
                .iter()
                .map(|g| {
                    BitVec::from_ones(
                        1 << m,
                        g.values()
                            .iter()
                            .enumerate()
                            .filter(|(_, &x)| x % 2 == 1)
                            .map(|(i, _)| i),
                    )
                })
                .collect();
            assert_eq!(f2_row_reduce(rows.clone()).len(), binary.len());
            for row in &rows {
                assert!(f2_in_span(row, &binary));
            }
        }
    }

    #[test]
    fn scaled_band_indicators_are_members() {
        // 2^(k-i) times a signed indicator of <K> with K in the level-i band.
        let code = QrmCode::new(4, 0, 2).unwrap();
        let level = 1;
        let module = stacked_error_module(&code, level).unwrap();
        for i in 0..=level {
            for k_set in crate::synthesis::index_set_qk(&code, i).unwrap() {
                let cube = Subcube::standard(4, k_set).unwrap();
                let f = RingVector::signed_indicator(&cube, level)
                    .unwrap()
                    .scaled(1 << (level - i));
                assert!(membership(&f, &module).unwrap(), "K={k_set} i={i}");
            }
        }
    }

    #[test]
    fn probe_trial_zero_is_empty() {
        let code = QrmCode::new(3, 0, 1).unwrap();
        let report = conjecture_probe(&code, 2, 0, 5).unwrap();
        assert_eq!(report.trials, 0);
        assert_eq!(report.counterexamples_found, 0);
        assert_eq!(report.summary, "no counterexample in 0 trials");
    }

    #[test]
    fn probe_sanity_arm_always_passes() {
        let code = QrmCode::new(3, 0, 1).unwrap();
        let report = conjecture_probe(&code, 1, 90, 42).unwrap();
        let module_arm = report
            .arms
            .iter()
            .find(|s| s.arm == ProbeArm::ModuleElement)
            .unwrap();
        assert_eq!(module_arm.trials, 30);
        assert_eq!(module_arm.preserving, 30);
        assert_eq!(module_arm.members, 30);
    }
}
