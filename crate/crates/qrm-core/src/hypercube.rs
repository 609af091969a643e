//! Subcube algebra of the Boolean hypercube `Z_2^m` and the integer-valued
//! indicator-function calculus built on it.
//!
//! Vertices are `m`-bit strings encoded as unsigned integers with bit `i-1`
//! holding coordinate `e_i`; this single convention fixes the physical qubit
//! ordering everywhere downstream. A subcube is a coset `x + <J>` of the
//! subgroup generated by a set `J` of coordinates, stored canonically as
//! (minimal-weight offset, type mask).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;

/// Largest supported hypercube dimension. Masks fit comfortably in `u32` and
/// dense vertex-indexed vectors stay below a few MiB.
pub const MAX_M: u32 = 20;

/// A vertex of the hypercube: an `m`-bit string as an integer, bit `i-1`
/// holding coordinate `e_i`.
pub type Vertex = u32;

pub fn vertex_weight(v: Vertex) -> u32 {
    v.count_ones()
}

/// Renders a vertex as an `m`-bit binary string with `e_1` leftmost.
pub fn vertex_string(v: Vertex, m: u32) -> String {
    (0..m)
        .map(|i| if v >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses an `m`-bit binary string with `e_1` leftmost.
pub fn parse_vertex(s: &str) -> Result<(Vertex, u32), Error> {
    let m = s.len() as u32;
    if m == 0 || m > MAX_M {
        return Err(Error::Parse(format!(
            "vertex string must have between 1 and {MAX_M} bits, got {m:?}"
        )));
    }
    let mut v = 0u32;
    for (i, c) in s.chars().enumerate() {
        match c {
            '1' => v |= 1 << i,
            '0' => {}
            _ => return Err(Error::Parse(format!("invalid bit {c:?} in vertex {s:?}"))),
        }
    }
    Ok((v, m))
}

/// A subset of the generator set `S = {e_1, ..., e_m}`, as a bitmask.
///
/// Ordered by size, then lexicographically as ascending index lists; this is
/// the order used to number logical qubits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GenSet(pub u32);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn full(m: u32) -> GenSet {
        GenSet(((1u64 << m) - 1) as u32)
    }

    pub fn singleton(i: u32) -> GenSet {
        debug_assert!(i >= 1);
        GenSet(1 << (i - 1))
    }

    pub fn from_indices(indices: impl IntoIterator<Item = u32>) -> GenSet {
        let mut s = GenSet::EMPTY;
        for i in indices {
            s = s.insert(i);
        }
        s
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Membership of the generator `e_i` (1-based).
    pub fn contains(self, i: u32) -> bool {
        debug_assert!(i >= 1);
        self.0 >> (i - 1) & 1 == 1
    }

    pub fn insert(self, i: u32) -> GenSet {
        debug_assert!(i >= 1);
        GenSet(self.0 | 1 << (i - 1))
    }

    pub fn remove(self, i: u32) -> GenSet {
        debug_assert!(i >= 1);
        GenSet(self.0 & !(1 << (i - 1)))
    }

    pub fn union(self, other: GenSet) -> GenSet {
        GenSet(self.0 | other.0)
    }

    pub fn intersection(self, other: GenSet) -> GenSet {
        GenSet(self.0 & other.0)
    }

    pub fn difference(self, other: GenSet) -> GenSet {
        GenSet(self.0 & !other.0)
    }

    pub fn complement_in(self, m: u32) -> GenSet {
        GenSet(!self.0 & GenSet::full(m).0)
    }

    pub fn is_subset_of(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// 1-based generator indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() + 1;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// The incidence bit string `e_J` of this subset, as a vertex.
    pub fn incidence_vertex(self) -> Vertex {
        self.0
    }

    /// All subsets of this set, ascending in the compressed-index order.
    pub fn subsets(self) -> impl Iterator<Item = GenSet> {
        let mask = self.0;
        let n = mask.count_ones();
        (0u32..1 << n).map(move |t| GenSet(spread_bits(t, mask)))
    }

    pub fn subsets_of_size(self, size: u32) -> impl Iterator<Item = GenSet> {
        self.subsets().filter(move |j| j.size() == size)
    }
}

/// Distributes the low bits of `t` onto the set bits of `mask`.
fn spread_bits(t: u32, mask: u32) -> u32 {
    let mut out = 0;
    let mut bits = mask;
    let mut k = 0;
    while bits != 0 {
        let low = bits & bits.wrapping_neg();
        if t >> k & 1 == 1 {
            out |= low;
        }
        bits ^= low;
        k += 1;
    }
    out
}

impl Ord for GenSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| {
            let (mut a, mut b) = (self.0, other.0);
            while a != 0 && b != 0 {
                match a.trailing_zeros().cmp(&b.trailing_zeros()) {
                    Ordering::Equal => {
                        a &= a - 1;
                        b &= b - 1;
                    }
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for GenSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenSet{self}")
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A coset `x + <J>` of a standard subcube, in canonical form: the stored
/// offset is the unique minimal-weight element, so `supp(offset)` and the
/// type mask are disjoint and equality is structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subcube {
    m: u32,
    offset: Vertex,
    type_mask: GenSet,
}

impl Subcube {
    /// Builds the subcube `x + <J>`, normalizing an arbitrary representative.
    pub fn new(m: u32, x: Vertex, j: GenSet) -> Result<Subcube, Error> {
        if m == 0 || m > MAX_M {
            return Err(Error::InvalidArgument(format!(
                "hypercube dimension must be between 1 and {MAX_M}, got {m}"
            )));
        }
        let full = GenSet::full(m).0;
        if x & !full != 0 || j.0 & !full != 0 {
            return Err(Error::InvalidArgument(format!(
                "offset or type mask out of range for m={m}"
            )));
        }
        Ok(Subcube {
            m,
            offset: x & !j.0,
            type_mask: j,
        })
    }

    /// The standard subcube `<J>`.
    pub fn standard(m: u32, j: GenSet) -> Result<Subcube, Error> {
        Subcube::new(m, 0, j)
    }

    /// The whole hypercube `Z_2^m`.
    pub fn full(m: u32) -> Result<Subcube, Error> {
        Subcube::new(m, 0, GenSet::full(m))
    }

    /// The single-vertex subcube `{v}`.
    pub fn vertex(m: u32, v: Vertex) -> Result<Subcube, Error> {
        Subcube::new(m, v, GenSet::EMPTY)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn offset(&self) -> Vertex {
        self.offset
    }

    pub fn type_mask(&self) -> GenSet {
        self.type_mask
    }

    pub fn dim(&self) -> u32 {
        self.type_mask.size()
    }

    pub fn cardinality(&self) -> u64 {
        1 << self.dim()
    }

    pub fn is_standard(&self) -> bool {
        self.offset == 0
    }

    /// The support `I_A` of the minimal-weight element; disjoint from the type.
    pub fn support_set(&self) -> GenSet {
        GenSet(self.offset)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (v ^ self.offset) & !self.type_mask.0 == 0
    }

    /// All vertices of the subcube, in a deterministic order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let offset = self.offset;
        self.type_mask.subsets().map(move |s| offset ^ s.0)
    }

    /// Intersects two cosets. The result, when non-empty, is the canonical
    /// coset of type `J ∩ K`.
    pub fn intersect(&self, other: &Subcube) -> Result<Option<Subcube>, Error> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(self.m, other.m));
        }
        let j = self.type_mask.0;
        let k = other.type_mask.0;
        // Coordinates fixed by both cosets must agree.
        if (self.offset ^ other.offset) & !(j | k) != 0 {
            return Ok(None);
        }
        let z = (self.offset & !j) | (other.offset & j & !k);
        Ok(Some(Subcube::new(self.m, z, GenSet(j & k))?))
    }

    pub fn is_subset_of(&self, other: &Subcube) -> Result<bool, Error> {
        Ok(self.intersect(other)? == Some(*self))
    }
}

impl fmt::Debug for Subcube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subcube({self})")
    }
}

/// Textual form `offset+<J>`, with the offset omitted for standard subcubes,
/// e.g. `0110+<1,4>` and `<2,3,4>`.
impl fmt::Display for Subcube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.offset != 0 {
            write!(f, "{}+", vertex_string(self.offset, self.m))?;
        }
        write!(f, "<")?;
        for (n, i) in self.type_mask.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ">")
    }
}

/// Parses the textual subcube syntax relative to a known `m`.
pub fn parse_subcube(s: &str, m: u32) -> Result<Subcube, Error> {
    let s = s.trim();
    let (offset, rest) = match s.split_once('+') {
        Some((o, rest)) => {
            let (v, om) = parse_vertex(o.trim())?;
            if om != m {
                return Err(Error::Parse(format!(
                    "offset {o:?} has {om} bits but m={m}"
                )));
            }
            (v, rest.trim())
        }
        None => (0, s),
    };
    let inner = rest
        .strip_prefix('<')
        .and_then(|r| r.strip_suffix('>'))
        .ok_or_else(|| Error::Parse(format!("expected `<i,j,...>` in subcube {s:?}")))?;
    let mut j = GenSet::EMPTY;
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: u32 = part
            .parse()
            .map_err(|_| Error::Parse(format!("invalid generator index {part:?}")))?;
        if i < 1 || i > m {
            return Err(Error::Parse(format!(
                "generator index {i} out of range 1..={m}"
            )));
        }
        if j.contains(i) {
            return Err(Error::Parse(format!("duplicate generator index {i}")));
        }
        j = j.insert(i);
    }
    // The offset must not touch shifted coordinates only through <J>; any
    // representative is accepted and normalized.
    Subcube::new(m, offset, j)
}

/// All size-`s` subsets of `{1..m}` in (size, lex) order.
pub fn gen_sets_of_size(m: u32, s: u32) -> Vec<GenSet> {
    if s > m {
        return Vec::new();
    }
    if s == 0 {
        return vec![GenSet::EMPTY];
    }
    // Standard lexicographic combination walk over 1-based indices.
    let s = s as usize;
    let mut out = Vec::new();
    let mut comb: Vec<u32> = (1..=s as u32).collect();
    loop {
        out.push(GenSet::from_indices(comb.iter().copied()));
        let mut i = s;
        while i > 0 && comb[i - 1] == m - (s - i) as u32 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        comb[i - 1] += 1;
        for j in i..s {
            comb[j] = comb[j - 1] + 1;
        }
    }
    out
}

/// Every subcube of exactly the given dimension, each once, in a
/// deterministic order; there are `2^(m-dim) * C(m, dim)` of them.
pub fn enumerate_subcubes(m: u32, dim: u32) -> Result<Vec<Subcube>, Error> {
    if m == 0 || m > MAX_M {
        return Err(Error::InvalidArgument(format!(
            "hypercube dimension must be between 1 and {MAX_M}, got {m}"
        )));
    }
    if dim > m {
        return Err(Error::InvalidArgument(format!(
            "subcube dimension {dim} out of range 0..={m}"
        )));
    }
    let mut out = Vec::new();
    for j in gen_sets_of_size(m, dim) {
        for x in j.complement_in(m).subsets() {
            out.push(Subcube::new(m, x.0, j)?);
        }
    }
    Ok(out)
}

/// Every subcube of the `m`-dimensional hypercube (there are `3^m`).
pub fn all_subcubes(m: u32) -> Result<Vec<Subcube>, Error> {
    let mut out = Vec::new();
    for dim in 0..=m {
        out.extend(enumerate_subcubes(m, dim)?);
    }
    Ok(out)
}

/// The integer-valued indicator of `a` at `v`: 1 on the subcube, 0 elsewhere.
pub fn unsigned_indicator(a: &Subcube, v: Vertex) -> i64 {
    a.contains(v) as i64
}

/// The signed indicator of `a` at `v`: `(-1)^|v|` on the subcube, 0 elsewhere.
pub fn signed_indicator(a: &Subcube, v: Vertex) -> i64 {
    if a.contains(v) {
        1 - 2 * (vertex_weight(v) & 1) as i64
    } else {
        0
    }
}

/// An exact integer combination of subcube indicator functions, all of one
/// signedness. No two terms share a subcube and zero coefficients are
/// dropped; coefficients stay exact unless a modulus `2^e` is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntIndicatorCombo {
    signed: bool,
    modulus_log2: Option<u32>,
    terms: BTreeMap<Subcube, i64>,
}

impl IntIndicatorCombo {
    pub fn new(signed: bool) -> Self {
        IntIndicatorCombo {
            signed,
            modulus_log2: None,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    /// `Some(e)` means coefficients and evaluations are reduced mod `2^e`.
    pub fn modulus_log2(&self) -> Option<u32> {
        self.modulus_log2
    }

    pub fn with_modulus_log2(mut self, e: u32) -> Self {
        self.modulus_log2 = Some(e);
        let m = 1i64 << e;
        self.terms.retain(|_, c| {
            *c = c.rem_euclid(m);
            *c != 0
        });
        self
    }

    pub fn add_term(&mut self, coefficient: i64, subcube: Subcube) {
        if coefficient == 0 {
            return;
        }
        let entry = self.terms.entry(subcube).or_insert(0);
        *entry += coefficient;
        if let Some(e) = self.modulus_log2 {
            *entry = entry.rem_euclid(1i64 << e);
        }
        if *entry == 0 {
            self.terms.remove(&subcube);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Subcube, i64)> {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Pointwise evaluation over `Z` (or `Z_{2^e}` when a modulus is set).
    pub fn eval(&self, v: Vertex) -> i64 {
        let ind = if self.signed {
            signed_indicator
        } else {
            unsigned_indicator
        };
        let sum: i64 = self.terms.iter().map(|(a, c)| c * ind(a, v)).sum();
        match self.modulus_log2 {
            Some(e) => sum.rem_euclid(1i64 << e),
            None => sum,
        }
    }
}

/// Decomposes the mod-2 indicator of an arbitrary subcube into indicators of
/// the standard subcubes `<I ∪ J>` for `I ⊆ I_A`.
pub fn decompose_indicator_f2(a: &Subcube) -> Vec<Subcube> {
    a.support_set()
        .subsets()
        .map(|i| Subcube::standard(a.m(), i.union(a.type_mask())).expect("masks stay in range"))
        .collect()
}

/// Decomposes the exact integer indicator of an arbitrary subcube: the full
/// sum of standard-subcube indicators minus `2^|I|`-weighted corrections on
/// the shifted same-type subcubes `e_(I_A \ I) + <J>`. Evaluates pointwise
/// to the unsigned (resp. signed) indicator of `a` over `Z`.
///
/// The identity rests on the one-step observation
/// `1_<J> + 1_<J ∪ {i}> = 1_(e_i + <J>) + 2 * 1_<J>` applied once per
/// support coordinate.
pub fn decompose_indicator_z(a: &Subcube, signed: bool) -> IntIndicatorCombo {
    let mut combo = IntIndicatorCombo::new(signed);
    let m = a.m();
    let i_a = a.support_set();
    let j = a.type_mask();
    for i in i_a.subsets() {
        combo.add_term(1, Subcube::standard(m, i.union(j)).expect("in range"));
    }
    for i in i_a.subsets() {
        let size = i.size();
        if size == 0 {
            continue;
        }
        let shift = i_a.difference(i).incidence_vertex();
        let cube = Subcube::new(m, shift, j).expect("in range");
        combo.add_term(-(1i64 << size), cube);
    }
    combo
}

/// Expands the unsigned indicator of a standard subcube `<K>` into signed
/// indicators of the standard subcubes within it, with weights
/// `2^(|K|-i) * (-1)^i` over the size-`i` subsets of `K`.
pub fn unsigned_to_signed_standard(m: u32, k_set: GenSet) -> Result<IntIndicatorCombo, Error> {
    if !k_set.is_subset_of(GenSet::full(m)) {
        return Err(Error::InvalidArgument(format!(
            "generator set {k_set} out of range for m={m}"
        )));
    }
    let mut combo = IntIndicatorCombo::new(true);
    let size = k_set.size();
    for j in k_set.subsets() {
        let i = j.size();
        let sign = if i % 2 == 0 { 1 } else { -1 };
        combo.add_term(sign << (size - i), Subcube::standard(m, j)?);
    }
    Ok(combo)
}

/// A simplex of the `m`-dimensional hyperoctahedral complex: a length-`m`
/// string over `{0, 1, *}`, dual to a subcube of the hypercube.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OctaSimplex {
    m: u32,
    stars: GenSet,
    values: Vertex,
}

impl OctaSimplex {
    pub fn new(m: u32, stars: GenSet, values: Vertex) -> Result<OctaSimplex, Error> {
        if m == 0 || m > MAX_M {
            return Err(Error::InvalidArgument(format!(
                "dimension must be between 1 and {MAX_M}, got {m}"
            )));
        }
        let full = GenSet::full(m).0;
        if stars.0 & !full != 0 || values & !full != 0 {
            return Err(Error::InvalidArgument(
                "simplex coordinates out of range".into(),
            ));
        }
        Ok(OctaSimplex {
            m,
            stars,
            values: values & !stars.0,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Simplex dimension: one less than the number of non-`*` entries, so the
    /// empty simplex (all stars) has dimension -1.
    pub fn dim(&self) -> i64 {
        (self.m - self.stars.size()) as i64 - 1
    }

    /// The dual subcube; an l-simplex maps to an (m-l-1)-cube.
    pub fn to_subcube(&self) -> Subcube {
        Subcube::new(self.m, self.values, self.stars).expect("in range")
    }

    pub fn from_subcube(a: &Subcube) -> OctaSimplex {
        OctaSimplex {
            m: a.m(),
            stars: a.type_mask(),
            values: a.offset(),
        }
    }

    /// Face relation: `self` is incident to `rho` when every point of `self`
    /// is a point of `rho`.
    pub fn is_face_of(&self, rho: &OctaSimplex) -> bool {
        self.m == rho.m
            && rho.stars.is_subset_of(self.stars)
            && (self.values ^ rho.values) & !self.stars.0 == 0
    }
}

impl fmt::Display for OctaSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.m {
            if self.stars.contains(i) {
                write!(f, "*")?;
            } else {
                write!(f, "{}", (self.values >> (i - 1)) & 1)?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for OctaSimplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let m = s.len() as u32;
        if m == 0 || m > MAX_M {
            return Err(Error::Parse(format!(
                "simplex string must have between 1 and {MAX_M} cells"
            )));
        }
        let mut stars = GenSet::EMPTY;
        let mut values = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '*' => stars = stars.insert(i as u32 + 1),
                '1' => values |= 1 << i,
                '0' => {}
                _ => return Err(Error::Parse(format!("invalid cell {c:?} in {s:?}"))),
            }
        }
        OctaSimplex::new(m, stars, values)
    }
}
