//! Logical-circuit synthesis: level index sets, minimal covers, and the
//! multi-controlled-Z circuits implemented by signed and unsigned standard
//! subcube operators, plus the decomposition of arbitrary subcube operators
//! into standard ones.

use std::collections::BTreeSet;
use std::fmt;

use crate::classify::{classify, classify_dim, Classification, OperatorSpec};
use crate::code::{LogicalIndex, QrmCode};
use crate::error::Error;
use crate::hypercube::{GenSet, Subcube};
use crate::pauli::Basis;

/// One multi-controlled-Z gate: the set of logical qubits it touches.
pub type Gate = BTreeSet<LogicalIndex>;

/// A product of multi-controlled-Z gates over the logical qubits.
///
/// Every gate squares to the identity, so composition is symmetric
/// difference; gates are kept in a canonical sorted set and the empty gate
/// (the identity) is never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CzCircuit {
    gates: BTreeSet<Gate>,
}

impl CzCircuit {
    pub fn empty() -> Self {
        CzCircuit::default()
    }

    pub fn from_gates(gates: impl IntoIterator<Item = Gate>) -> Self {
        let mut c = CzCircuit::empty();
        for g in gates {
            c.toggle(g);
        }
        c
    }

    /// Multiplies one gate into the circuit (symmetric difference).
    pub fn toggle(&mut self, gate: Gate) {
        if gate.is_empty() {
            return;
        }
        if !self.gates.remove(&gate) {
            self.gates.insert(gate);
        }
    }

    pub fn compose(&self, other: &CzCircuit) -> CzCircuit {
        let mut out = self.clone();
        for g in &other.gates {
            out.toggle(g.clone());
        }
        out
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter()
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Conjugation by a logical X: keeps the gates containing `j`, with `j`
    /// removed. A bare Z on `j` contributes only a global sign and drops out.
    pub fn conjugate_x(&self, j: LogicalIndex) -> CzCircuit {
        let mut out = CzCircuit::empty();
        for gate in &self.gates {
            if gate.contains(&j) {
                let mut rest = gate.clone();
                rest.remove(&j);
                out.toggle(rest);
            }
        }
        out
    }
}

/// Renders `CCZ[{1},{2},{3}]`-style gate lists.
impl fmt::Display for CzCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gates.is_empty() {
            return write!(f, "I");
        }
        for (n, gate) in self.gates.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}[", gate_name(gate.len()))?;
            for (i, j) in gate.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{j}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

pub fn gate_name(arity: usize) -> String {
    match arity {
        1 => "Z".to_string(),
        2 => "CZ".to_string(),
        3 => "CCZ".to_string(),
        a => format!("C{}Z", a - 1),
    }
}

/// The minimal covers of one level index set `K`: every set of `k+1` logical
/// qubits whose labels union to `K`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverFamily {
    pub source: GenSet,
    pub level: u32,
    pub covers: BTreeSet<Gate>,
}

/// The size band of level `k`: `q + k*r + 1 ..= (k+1)*r`, in u64 so absurd
/// levels cannot wrap.
fn band(code: &QrmCode, k: u32) -> std::ops::RangeInclusive<u64> {
    let (q, r, k) = (code.q() as u64, code.r() as u64, k as u64);
    q + k * r + 1..=(k + 1) * r
}

/// The level whose band contains `|K|`, if any. Bands for distinct levels
/// are disjoint, so the level is unique.
pub fn level_of(code: &QrmCode, k_set: GenSet) -> Option<u32> {
    let size = k_set.size();
    if code.r() == 0 {
        return None;
    }
    (0..=size).find(|&k| band(code, k).contains(&(size as u64)))
}

/// All `K ⊆ S` in the level-`k` band. Bands for distinct `k` are disjoint,
/// and for `q = 0` they partition the sizes `1..=m`.
pub fn index_set_qk(code: &QrmCode, k: u32) -> Result<Vec<GenSet>, Error> {
    if code.kappa() == 0 {
        return Err(Error::NoLogicalQubits);
    }
    let sizes = band(code, k);
    let mut out = Vec::new();
    for size in 0..=code.m() {
        if sizes.contains(&(size as u64)) {
            out.extend(crate::hypercube::gen_sets_of_size(code.m(), size));
        }
    }
    out.sort();
    Ok(out)
}

fn no_level(code: &QrmCode, k_set: GenSet) -> Error {
    Error::NoLevel {
        size: k_set.size(),
        m: code.m(),
        q: code.q(),
        r: code.r(),
    }
}

/// Enumerates the minimal covers of `K` by restricting to the logical labels
/// contained in `K`; covers by labels reaching outside `K` cannot exist.
pub fn minimal_covers(code: &QrmCode, k_set: GenSet) -> Result<CoverFamily, Error> {
    if code.kappa() == 0 {
        return Err(Error::NoLogicalQubits);
    }
    let level = level_of(code, k_set).ok_or_else(|| no_level(code, k_set))?;
    let candidates: Vec<LogicalIndex> = k_set
        .subsets()
        .filter(|j| code.is_logical_index(*j))
        .map(LogicalIndex)
        .collect();
    let mut covers = BTreeSet::new();
    let want = (level + 1) as usize;
    let mut stack: Vec<usize> = Vec::with_capacity(want);
    // Depth-first walk over `want`-subsets of the candidate labels.
    fn walk(
        candidates: &[LogicalIndex],
        start: usize,
        stack: &mut Vec<usize>,
        want: usize,
        target: GenSet,
        covers: &mut BTreeSet<Gate>,
    ) {
        if stack.len() == want {
            let union = stack
                .iter()
                .fold(GenSet::EMPTY, |acc, &i| acc.union(candidates[i].0));
            if union == target {
                covers.insert(stack.iter().map(|&i| candidates[i]).collect());
            }
            return;
        }
        for i in start..candidates.len() {
            stack.push(i);
            walk(candidates, i + 1, stack, want, target, covers);
            stack.pop();
        }
    }
    walk(&candidates, 0, &mut stack, want, k_set, &mut covers);
    Ok(CoverFamily {
        source: k_set,
        level,
        covers,
    })
}

/// The logical circuit of the signed standard operator on `<K>` at level `k`:
/// one multi-controlled-Z per minimal cover of `K`.
pub fn signed_standard_circuit(code: &QrmCode, k: u32, k_set: GenSet) -> Result<CzCircuit, Error> {
    let family = minimal_covers(code, k_set)?;
    if family.level != k {
        return Err(no_level(code, k_set));
    }
    Ok(CzCircuit::from_gates(family.covers))
}

/// The logical circuit of the unsigned standard operator on `<K>` at level
/// `k`, via its expansion into signed standard operators one dimension and
/// level down at a time: terms that classify as stabilizers drop, the rest
/// contribute their cover circuits.
///
/// This single path reproduces all the band cases: for `q >= 1` or
/// `|K| >= q + k*r + 2` only the top term survives (unsigned = signed); for
/// `q = 0, r >= 2, |K| = k*r + 1` the facets of `K` join in; for `r = 1` the
/// whole power set of `K` contributes.
pub fn unsigned_standard_circuit(
    code: &QrmCode,
    k: u32,
    k_set: GenSet,
) -> Result<CzCircuit, Error> {
    if code.kappa() == 0 {
        return Err(Error::NoLogicalQubits);
    }
    if level_of(code, k_set) != Some(k) {
        return Err(no_level(code, k_set));
    }
    let size = k_set.size();
    let mut circuit = CzCircuit::empty();
    for j in 0..=k.min(size.saturating_sub(1)) {
        let level = k - j;
        for sub in k_set.subsets_of_size(size - j) {
            match classify_dim(code, Basis::Z, level, sub.size()) {
                Classification::Stabilizer => {}
                Classification::NontrivialLogical => {
                    let part = signed_standard_circuit(code, level, sub)?;
                    debug_assert!(
                        part.gates().all(|g| !circuit.gates.contains(g)),
                        "cover circuits of distinct sources never overlap"
                    );
                    circuit = circuit.compose(&part);
                }
                Classification::NotPreserving => {
                    unreachable!("every term in the expansion of a band operator preserves")
                }
            }
        }
    }
    Ok(circuit)
}

/// Standard-subcube decomposition of a subcube operator at level `k`: the
/// terms `<I ∪ K>` for `I ⊆ I_A`, with stabilizer-dimension terms dropped
/// eagerly. The product of the returned standard operators is logically
/// equivalent to the input.
pub fn decompose_to_standard(
    code: &QrmCode,
    k: u32,
    a: &Subcube,
    signed: bool,
) -> Result<Vec<(u32, GenSet)>, Error> {
    let spec = OperatorSpec::z(k, *a, signed);
    if classify(code, &spec) == Classification::NotPreserving {
        return Err(Error::NoLevel {
            size: a.dim(),
            m: code.m(),
            q: code.q(),
            r: code.r(),
        });
    }
    let max_dim = (k + 1) * code.r();
    let mut terms: Vec<(u32, GenSet)> = a
        .support_set()
        .subsets()
        .map(|i| i.union(a.type_mask()))
        .filter(|t| t.size() <= max_dim)
        .map(|t| (k, t))
        .collect();
    terms.sort_by_key(|&(_, t)| t);
    terms.dedup();
    Ok(terms)
}

/// The full logical circuit of an arbitrary subcube operator: the union of
/// the per-standard-term circuits. Distinct sources have disjoint cover
/// families, so the symmetric difference never cancels anything.
pub fn arbitrary_subcube_circuit(code: &QrmCode, spec: &OperatorSpec) -> Result<CzCircuit, Error> {
    if spec.basis != Basis::Z {
        return Err(Error::XBasisNotSimulated);
    }
    match classify(code, spec) {
        Classification::Stabilizer => Ok(CzCircuit::empty()),
        Classification::NotPreserving => Err(Error::NoLevel {
            size: spec.subcube.dim(),
            m: code.m(),
            q: code.q(),
            r: code.r(),
        }),
        Classification::NontrivialLogical => {
            let mut circuit = CzCircuit::empty();
            for (level, k_set) in
                decompose_to_standard(code, spec.level, &spec.subcube, spec.signed)?
            {
                let part = if spec.signed {
                    signed_standard_circuit(code, level, k_set)?
                } else {
                    unsigned_standard_circuit(code, level, k_set)?
                };
                circuit = circuit.compose(&part);
            }
            Ok(circuit)
        }
    }
}

/// The dense subsets of `K` relative to `J`: the `K' ∈ Q_{k-1}` with
/// `K' ∪ J = K`. Conjugating the level-`k` circuit of `K` by the logical X
/// on `J` lands on the union of their cover circuits.
pub fn dense_subsets(code: &QrmCode, k_set: GenSet, j: LogicalIndex) -> Result<Vec<GenSet>, Error> {
    let k = level_of(code, k_set).ok_or_else(|| no_level(code, k_set))?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut out: Vec<GenSet> = k_set
        .subsets()
        .filter(|&ks| level_of(code, ks) == Some(k - 1) && ks.union(j.0) == k_set)
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::parse_subcube;

    fn code(m: u32, q: u32, r: u32) -> QrmCode {
        QrmCode::new(m, q, r).unwrap()
    }

    fn gs(indices: &[u32]) -> GenSet {
        GenSet::from_indices(indices.iter().copied())
    }

    fn gate(sets: &[&[u32]]) -> Gate {
        sets.iter().map(|s| LogicalIndex(gs(s))).collect()
    }

    #[test]
    fn bands_partition_when_q_is_zero() {
        for r in 1..=3u32 {
            let c = code(6, 0, r);
            let mut seen = [0u32; 7];
            for k in 0..=c.k_max() {
                for k_set in index_set_qk(&c, k).unwrap() {
                    seen[k_set.size() as usize] += 1;
                }
            }
            for s in 1..=6u32 {
                let count = crate::code::binomial(6, s) as u32;
                assert_eq!(seen[s as usize], count, "size {s} not covered once");
            }
        }
    }

    #[test]
    fn hypercube_top_band_is_single_set() {
        let c = code(3, 0, 1);
        assert_eq!(index_set_qk(&c, 2).unwrap(), vec![GenSet::full(3)]);
    }

    #[test]
    fn shifted_codes_skip_sizes() {
        // QRM_8(1,2): only even sizes 2,4,6,8 fall in a band.
        let c = code(8, 1, 2);
        for size in 1..=8u32 {
            let has = level_of(&c, gs(&(1..=size).collect::<Vec<_>>())).is_some();
            assert_eq!(has, size % 2 == 0, "size {size}");
        }
    }

    #[test]
    fn rejects_codes_without_logical_qubits() {
        let c = code(4, 1, 1);
        assert!(matches!(index_set_qk(&c, 0), Err(Error::NoLogicalQubits)));
        assert!(matches!(
            minimal_covers(&c, gs(&[1, 2])),
            Err(Error::NoLogicalQubits)
        ));
    }

    #[test]
    fn covers_of_the_cube_code() {
        let family = minimal_covers(&code(3, 0, 1), GenSet::full(3)).unwrap();
        assert_eq!(family.level, 2);
        assert_eq!(family.covers, BTreeSet::from([gate(&[&[1], &[2], &[3]])]));
    }

    #[test]
    fn covers_are_the_three_perfect_matchings() {
        let family = minimal_covers(&code(4, 1, 2), GenSet::full(4)).unwrap();
        assert_eq!(family.level, 1);
        let expected = BTreeSet::from([
            gate(&[&[1, 2], &[3, 4]]),
            gate(&[&[1, 3], &[2, 4]]),
            gate(&[&[1, 4], &[2, 3]]),
        ]);
        assert_eq!(family.covers, expected);
    }

    #[test]
    fn covers_of_a_three_set_in_qrm402() {
        let family = minimal_covers(&code(4, 0, 2), gs(&[1, 2, 3])).unwrap();
        assert_eq!(family.level, 1);
        let expected = BTreeSet::from([
            gate(&[&[1], &[2, 3]]),
            gate(&[&[2], &[1, 3]]),
            gate(&[&[3], &[1, 2]]),
            gate(&[&[1, 2], &[1, 3]]),
            gate(&[&[1, 2], &[2, 3]]),
            gate(&[&[1, 3], &[2, 3]]),
        ]);
        assert_eq!(family.covers, expected);
    }

    #[test]
    fn out_of_band_sizes_error() {
        assert!(matches!(
            minimal_covers(&code(8, 1, 2), gs(&[1, 2, 3])),
            Err(Error::NoLevel { size: 3, .. })
        ));
    }

    #[test]
    fn signed_circuit_examples() {
        // Global signed T on the cube code: one CCZ.
        let c = signed_standard_circuit(&code(3, 0, 1), 2, GenSet::full(3)).unwrap();
        assert_eq!(c.num_gates(), 1);
        assert_eq!(c.to_string(), "CCZ[{1},{2},{3}]");

        // Level 0 is the bare logical Z.
        let c = signed_standard_circuit(&code(4, 0, 2), 0, gs(&[1, 2])).unwrap();
        assert_eq!(c.to_string(), "Z[{1,2}]");

        let c = signed_standard_circuit(&code(4, 0, 2), 1, gs(&[1, 2, 3])).unwrap();
        assert_eq!(c.num_gates(), 6);

        // Wrong level for the band errors out.
        assert!(signed_standard_circuit(&code(3, 0, 1), 1, GenSet::full(3)).is_err());
    }

    #[test]
    fn unsigned_circuit_cases() {
        // Hypercube code: the power set of K.
        let c = unsigned_standard_circuit(&code(3, 0, 1), 2, GenSet::full(3)).unwrap();
        assert_eq!(c.num_gates(), 7);
        let expected = CzCircuit::from_gates(
            GenSet::full(3)
                .subsets()
                .filter(|t| !t.is_empty())
                .map(|t| t.indices().map(|i| LogicalIndex(gs(&[i]))).collect()),
        );
        assert_eq!(c, expected);

        // q >= 1: unsigned equals signed.
        let c6 = code(6, 1, 2);
        let k_set = GenSet::full(6);
        assert_eq!(
            unsigned_standard_circuit(&c6, 2, k_set).unwrap(),
            signed_standard_circuit(&c6, 2, k_set).unwrap()
        );

        // q = 0, r = 2, |K| = k*r + 1: F(K) plus the facet families.
        let c5 = code(5, 0, 2);
        let k_set = GenSet::full(5);
        let got = unsigned_standard_circuit(&c5, 2, k_set).unwrap();
        let mut expected = signed_standard_circuit(&c5, 2, k_set).unwrap();
        for i in k_set.indices() {
            expected = expected.compose(&signed_standard_circuit(&c5, 1, k_set.remove(i)).unwrap());
        }
        assert_eq!(got, expected);

        // k = 0 operators are physically identical signed or unsigned.
        let c = code(5, 0, 2);
        assert_eq!(
            unsigned_standard_circuit(&c, 0, gs(&[1])).unwrap(),
            signed_standard_circuit(&c, 0, gs(&[1])).unwrap()
        );
    }

    #[test]
    fn gate_arity_matches_level() {
        for (m, q, r) in [(4, 0, 2), (5, 0, 2), (5, 1, 2), (4, 0, 1)] {
            let c = code(m, q, r);
            for k in 0..=c.k_max() {
                for k_set in index_set_qk(&c, k).unwrap() {
                    let circ = signed_standard_circuit(&c, k, k_set).unwrap();
                    for g in circ.gates() {
                        assert_eq!(g.len(), (k + 1) as usize);
                    }
                }
            }
        }
    }

    #[test]
    fn circuits_are_involutions() {
        let c = code(4, 0, 2);
        for k_set in index_set_qk(&c, 1).unwrap() {
            let circ = unsigned_standard_circuit(&c, 1, k_set).unwrap();
            assert!(circ.compose(&circ).is_empty());
        }
    }

    #[test]
    fn decompose_examples() {
        // A standard subcube decomposes to itself.
        let c = code(4, 0, 2);
        let a = parse_subcube("<2,3>", 4).unwrap();
        assert_eq!(
            decompose_to_standard(&c, 0, &a, true).unwrap(),
            vec![(0, gs(&[2, 3]))]
        );

        // The size filter drops the stabilizer-dimension term.
        let a = parse_subcube("1000+<2,3>", 4).unwrap();
        assert_eq!(
            decompose_to_standard(&c, 0, &a, false).unwrap(),
            vec![(0, gs(&[2, 3]))]
        );

        // In QRM_m(r-1,r) every shift drops entirely.
        let c = code(4, 1, 2);
        let a = parse_subcube("0010+<1,2>", 4).unwrap();
        assert_eq!(
            decompose_to_standard(&c, 0, &a, true).unwrap(),
            vec![(0, gs(&[1, 2]))]
        );

        // Below the band: error.
        let a = parse_subcube("<1>", 4).unwrap();
        assert!(decompose_to_standard(&c, 0, &a, true).is_err());
    }

    #[test]
    fn arbitrary_circuit_cases() {
        let c = code(4, 0, 2);

        // Stabilizer-dimension input: empty circuit.
        let spec = OperatorSpec::z(0, parse_subcube("<1,2,3>", 4).unwrap(), true);
        assert!(arbitrary_subcube_circuit(&c, &spec).unwrap().is_empty());

        // Shifted cube: union of the circuits of both surviving terms.
        let spec = OperatorSpec::z(1, parse_subcube("1000+<2,3,4>", 4).unwrap(), true);
        let got = arbitrary_subcube_circuit(&c, &spec).unwrap();
        let expected = signed_standard_circuit(&c, 1, gs(&[2, 3, 4]))
            .unwrap()
            .compose(&signed_standard_circuit(&c, 1, GenSet::full(4)).unwrap());
        assert_eq!(got, expected);
        assert_eq!(
            got.num_gates(),
            signed_standard_circuit(&c, 1, gs(&[2, 3, 4]))
                .unwrap()
                .num_gates()
                + signed_standard_circuit(&c, 1, GenSet::full(4))
                    .unwrap()
                    .num_gates(),
            "cover families of distinct sources stay disjoint"
        );
    }

    #[test]
    fn conjugate_x_identities() {
        let a = LogicalIndex(gs(&[1]));
        let b = LogicalIndex(gs(&[2]));
        let cz = CzCircuit::from_gates([Gate::from([a, b])]);
        assert_eq!(cz.conjugate_x(a), CzCircuit::from_gates([Gate::from([b])]));
        assert!(cz.conjugate_x(LogicalIndex(gs(&[3]))).is_empty());
        // A bare Z gate conjugates to a global sign, which drops.
        let z = CzCircuit::from_gates([Gate::from([a])]);
        assert!(z.conjugate_x(a).is_empty());
    }

    #[test]
    fn partial_covers_equal_dense_set_union() {
        let c = code(5, 0, 2);
        for k in 1..=c.k_max() {
            for k_set in index_set_qk(&c, k).unwrap() {
                let circ = signed_standard_circuit(&c, k, k_set).unwrap();
                for j in c.logical_indices() {
                    if !j.0.is_subset_of(k_set) {
                        assert!(circ.conjugate_x(j).is_empty());
                        continue;
                    }
                    let mut expected = CzCircuit::empty();
                    for dense in dense_subsets(&c, k_set, j).unwrap() {
                        expected =
                            expected.compose(&signed_standard_circuit(&c, k - 1, dense).unwrap());
                    }
                    assert_eq!(circ.conjugate_x(j), expected, "K={k_set} J={j}");
                }
            }
        }
    }
}
