//! Finite orthomodular lattices and the structures derived from them:
//! orthogonality, compatibility, Boolean subalgebras and conditional systems.
//!
//! A lattice is built once from a [`LatticeDescription`] (labels, a
//! generating order relation and an orthocomplement map) and is immutable
//! afterwards. Meet and join are materialized as dense `n x n` tables.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element in its owning lattice's element table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u32);

impl Element {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn at(index: usize) -> Self {
        Element(index as u32)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Meet,
    Join,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Meet => "meet",
            BoundKind::Join => "join",
        })
    }
}

/// Which ortholattice clause failed, with labelled witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrthoViolation {
    /// The pairs assign two different complements to one label.
    Conflicting { element: String, first: String, second: String },
    /// No complement was given (directly or by symmetry) for a label.
    Missing { element: String },
    /// `(a')' != a`.
    NotInvolutive { element: String },
    /// `a v a' != 1`.
    NotComplement { element: String },
    /// `a <= b` but not `b' <= a'`.
    NotAntitone { lower: String, upper: String },
}

impl fmt::Display for OrthoViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrthoViolation::Conflicting { element, first, second } => {
                write!(f, "{element} is given complements {first} and {second}")
            }
            OrthoViolation::Missing { element } => write!(f, "{element} has no complement"),
            OrthoViolation::NotInvolutive { element } => {
                write!(f, "complement of the complement of {element} is not {element}")
            }
            OrthoViolation::NotComplement { element } => {
                write!(f, "{element} joined with its complement is not the top")
            }
            OrthoViolation::NotAntitone { lower, upper } => {
                write!(f, "{lower} <= {upper} but the complements are not reversed")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice has no elements")]
    Empty,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("order is not antisymmetric: {a} <= {b} and {b} <= {a}")]
    NotAPoset { a: String, b: String },
    #[error("{a} and {b} have no unique {kind}")]
    NotALattice { a: String, b: String, kind: BoundKind },
    #[error("declared {which} `{declared}` is not the {which} of the order (found `{actual}`)")]
    BoundMismatch {
        which: &'static str,
        declared: String,
        actual: String,
    },
    #[error("not an ortholattice: {0}")]
    NotAnOrtholattice(OrthoViolation),
    #[error("orthomodular law fails: {a} <= {b} but {b} != {a} v ({a}' ^ {b})")]
    NotOrthomodular { a: String, b: String },
}

/// Human-writable lattice input. `leq` is a generating relation whose
/// reflexive-transitive closure is taken; each `ortho` pair `[x, y]` states
/// `x' = y` (and, unless contradicted, `y' = x`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDescription {
    pub labels: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub ortho: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one: Option<String>,
}

impl LatticeDescription {
    pub fn build(&self) -> Result<OrthomodularLattice, LatticeError> {
        let lattice = OrthomodularLattice::build(&self.labels, &self.leq, &self.ortho)?;
        for (which, declared, actual) in [
            ("zero", &self.zero, lattice.zero()),
            ("one", &self.one, lattice.one()),
        ] {
            if let Some(declared) = declared {
                if lattice.element(declared) != Some(actual) {
                    return Err(LatticeError::BoundMismatch {
                        which,
                        declared: declared.clone(),
                        actual: lattice.label(actual).to_string(),
                    });
                }
            }
        }
        Ok(lattice)
    }
}

/// A validated finite orthomodular lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthomodularLattice {
    labels: Vec<String>,
    index: HashMap<String, Element>,
    leq: Vec<bool>,
    ortho: Vec<Element>,
    meet: Vec<Element>,
    join: Vec<Element>,
    zero: Element,
    one: Element,
}

struct Poset {
    n: usize,
    leq: Vec<bool>,
}

impl Poset {
    fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    /// Greatest element among the common lower (or least among the common
    /// upper) bounds of `a` and `b`.
    fn bound(&self, a: usize, b: usize, kind: BoundKind) -> Option<usize> {
        let below = |x: usize, y: usize| match kind {
            BoundKind::Meet => self.le(x, y),
            BoundKind::Join => self.le(y, x),
        };
        let candidates: Vec<usize> = (0..self.n)
            .filter(|&c| below(c, a) && below(c, b))
            .collect();
        let best = *candidates.iter().max_by_key(|&&c| {
            (0..self.n).filter(|&d| below(d, c)).count()
        })?;
        candidates.iter().all(|&c| below(c, best)).then_some(best)
    }
}

impl OrthomodularLattice {
    /// Builds and fully validates a lattice. Checks run in the order: poset,
    /// lattice, ortholattice, orthomodular law; the first failure is returned.
    pub fn build<S: AsRef<str>>(
        labels: &[S],
        leq_pairs: &[(S, S)],
        ortho_pairs: &[(S, S)],
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            let label = label.as_ref();
            if index.insert(label.to_string(), Element::at(i)).is_some() {
                return Err(LatticeError::DuplicateLabel(label.to_string()));
            }
        }
        let lookup = |label: &S| {
            index
                .get(label.as_ref())
                .map(|e: &Element| e.index())
                .ok_or_else(|| LatticeError::UnknownLabel(label.as_ref().to_string()))
        };
        let name = |i: usize| labels[i].as_ref().to_string();

        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in leq_pairs {
            let (a, b) = (lookup(a)?, lookup(b)?);
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(LatticeError::NotAPoset { a: name(a), b: name(b) });
                }
            }
        }
        let poset = Poset { n, leq };

        let mut meet = vec![Element(0); n * n];
        let mut join = vec![Element(0); n * n];
        for a in 0..n {
            for b in a..n {
                for (kind, table) in [(BoundKind::Meet, &mut meet), (BoundKind::Join, &mut join)] {
                    let bound = poset.bound(a, b, kind).ok_or_else(|| LatticeError::NotALattice {
                        a: name(a),
                        b: name(b),
                        kind,
                    })?;
                    table[a * n + b] = Element::at(bound);
                    table[b * n + a] = Element::at(bound);
                }
            }
        }
        let zero = (0..n).find(|&z| (0..n).all(|x| poset.le(z, x))).expect("finite lattice has a bottom");
        let one = (0..n).find(|&t| (0..n).all(|x| poset.le(x, t))).expect("finite lattice has a top");

        let mut ortho: Vec<Option<usize>> = vec![None; n];
        for (a, b) in ortho_pairs {
            let (a, b) = (lookup(a)?, lookup(b)?);
            match ortho[a] {
                Some(prev) if prev != b => {
                    return Err(LatticeError::NotAnOrtholattice(OrthoViolation::Conflicting {
                        element: name(a),
                        first: name(prev),
                        second: name(b),
                    }))
                }
                _ => ortho[a] = Some(b),
            }
        }
        let explicit = ortho.clone();
        for (a, target) in explicit.iter().enumerate() {
            if let Some(b) = *target {
                if ortho[b].is_none() {
                    ortho[b] = Some(a);
                }
            }
        }
        let ortho: Vec<Element> = ortho
            .iter()
            .enumerate()
            .map(|(a, o)| {
                o.map(Element::at)
                    .ok_or_else(|| LatticeError::NotAnOrtholattice(OrthoViolation::Missing { element: name(a) }))
            })
            .collect::<Result<_, _>>()?;

        let lattice = OrthomodularLattice {
            labels: labels.iter().map(|l| l.as_ref().to_string()).collect(),
            index,
            leq: poset.leq,
            ortho,
            meet,
            join,
            zero: Element::at(zero),
            one: Element::at(one),
        };
        lattice.check_ortholattice()?;
        if let Some((a, b)) = lattice.orthomodular_violation() {
            return Err(LatticeError::NotOrthomodular {
                a: lattice.label(a).to_string(),
                b: lattice.label(b).to_string(),
            });
        }
        Ok(lattice)
    }

    fn check_ortholattice(&self) -> Result<(), LatticeError> {
        let fail = |v| Err(LatticeError::NotAnOrtholattice(v));
        for a in self.elements() {
            if self.ortho(self.ortho(a)) != a {
                return fail(OrthoViolation::NotInvolutive { element: self.label(a).into() });
            }
        }
        for a in self.elements() {
            if self.join(a, self.ortho(a)) != self.one {
                return fail(OrthoViolation::NotComplement { element: self.label(a).into() });
            }
        }
        for a in self.elements() {
            for b in self.elements() {
                if self.leq(a, b) && !self.leq(self.ortho(b), self.ortho(a)) {
                    return fail(OrthoViolation::NotAntitone {
                        lower: self.label(a).into(),
                        upper: self.label(b).into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// First pair `a <= b` (in id order) with `b != a v (a' ^ b)`.
    fn orthomodular_violation(&self) -> Option<(Element, Element)> {
        self.elements()
            .flat_map(|a| self.elements().map(move |b| (a, b)))
            .find(|&(a, b)| self.leq(a, b) && self.join(a, self.meet(self.ortho(a), b)) != b)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone + '_ {
        (0..self.len()).map(Element::at)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.elements().filter(move |&e| e != self.zero)
    }

    pub fn element_at(&self, index: usize) -> Option<Element> {
        (index < self.len()).then(|| Element::at(index))
    }

    pub fn element(&self, label: &str) -> Option<Element> {
        self.index.get(label).copied()
    }

    pub fn label(&self, e: Element) -> &str {
        &self.labels[e.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn zero(&self) -> Element {
        self.zero
    }

    pub fn one(&self) -> Element {
        self.one
    }

    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.leq[a.index() * self.len() + b.index()]
    }

    pub fn lt(&self, a: Element, b: Element) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: Element, b: Element) -> Element {
        self.meet[a.index() * self.len() + b.index()]
    }

    pub fn join(&self, a: Element, b: Element) -> Element {
        self.join[a.index() * self.len() + b.index()]
    }

    pub fn ortho(&self, a: Element) -> Element {
        self.ortho[a.index()]
    }

    /// Join of a finite family; the empty join is zero.
    pub fn join_all(&self, items: impl IntoIterator<Item = Element>) -> Element {
        items.into_iter().fold(self.zero, |acc, e| self.join(acc, e))
    }

    /// Meet of a finite family; the empty meet is one.
    pub fn meet_all(&self, items: impl IntoIterator<Item = Element>) -> Element {
        items.into_iter().fold(self.one, |acc, e| self.meet(acc, e))
    }

    /// `a ⊥ b` iff `a <= b'`.
    pub fn is_orthogonal(&self, a: Element, b: Element) -> bool {
        self.leq(a, self.ortho(b))
    }

    /// True when every two distinct members are orthogonal.
    pub fn is_orthogonal_family(&self, items: &[Element]) -> bool {
        items.iter().enumerate().all(|(i, &a)| {
            items[i + 1..].iter().all(|&b| self.is_orthogonal(a, b))
        })
    }

    /// `a ↔ b` iff `a = (a ^ b) v (a ^ b')`.
    pub fn is_compatible(&self, a: Element, b: Element) -> bool {
        a == self.join(self.meet(a, b), self.meet(a, self.ortho(b)))
    }

    /// For compatible `a`, `b`: the mutually orthogonal triple
    /// `(a ^ b', b ^ a', a ^ b)` whose joins rebuild `a` and `b`.
    pub fn compatibility_witness(&self, a: Element, b: Element) -> Option<(Element, Element, Element)> {
        let a1 = self.meet(a, self.ortho(b));
        let b1 = self.meet(b, self.ortho(a));
        let c = self.meet(a, b);
        let ok = self.is_orthogonal_family(&[a1, b1, c])
            && self.join(a1, c) == a
            && self.join(b1, c) == b;
        ok.then_some((a1, b1, c))
    }

    /// The subalgebra `{0, d, d', 1}` (or `{0, 1}` when `d` is a bound).
    pub fn boolean_subalgebra(&self, d: Element) -> BooleanSubalgebra {
        if d == self.zero || d == self.one {
            return BooleanSubalgebra::from_blocks(self, &[self.one]).expect("{1} partitions 1");
        }
        BooleanSubalgebra::from_blocks(self, &[d, self.ortho(d)]).expect("d, d' partition 1")
    }

    /// Smallest conditional system containing `generators`.
    pub fn generate_cs(&self, generators: &[Element]) -> Result<ConditionalSystem, CsError> {
        if generators.is_empty() {
            return Err(CsError::Empty);
        }
        let mut members: BTreeSet<Element> = generators.iter().copied().collect();
        if members.contains(&self.zero) {
            return Err(CsError::ZeroGenerated { from: None });
        }
        loop {
            let current: Vec<Element> = members.iter().copied().collect();
            let mut added = false;
            for &a in &current {
                for &b in &current {
                    let mut candidates = vec![self.join(a, b)];
                    if self.lt(a, b) {
                        let rel = self.meet(self.ortho(a), b);
                        if rel == self.zero {
                            return Err(CsError::ZeroGenerated { from: Some((a, b)) });
                        }
                        candidates.push(rel);
                    }
                    for c in candidates {
                        added |= members.insert(c);
                    }
                }
            }
            if !added {
                break;
            }
        }
        Ok(ConditionalSystem { members: members.into_iter().collect() })
    }

    /// Description listing only the covering pairs of the order.
    pub fn description(&self) -> LatticeDescription {
        let mut leq = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                let covers = self.lt(a, b)
                    && !self.elements().any(|c| self.lt(a, c) && self.lt(c, b));
                if covers {
                    leq.push((self.label(a).to_string(), self.label(b).to_string()));
                }
            }
        }
        let ortho = self
            .elements()
            .map(|a| (self.label(a).to_string(), self.label(self.ortho(a)).to_string()))
            .collect();
        LatticeDescription {
            labels: self.labels.clone(),
            leq,
            ortho,
            zero: Some(self.label(self.zero).to_string()),
            one: Some(self.label(self.one).to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsError {
    #[error("conditional system needs at least one generator")]
    Empty,
    #[error("closure produces the zero element")]
    ZeroGenerated { from: Option<(Element, Element)> },
    #[error("{a} v {b} is missing")]
    NotJoinClosed { a: Element, b: Element },
    #[error("{a} < {b} but {a}' ^ {b} is missing")]
    NotRelativeComplementClosed { a: Element, b: Element },
}

/// A set of nonzero elements closed under join and relative complement
/// (`a < b` ⇒ `a' ^ b`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionalSystem {
    members: Vec<Element>,
}

impl ConditionalSystem {
    /// Validates that `members` is already closed.
    pub fn new(lattice: &OrthomodularLattice, members: impl IntoIterator<Item = Element>) -> Result<Self, CsError> {
        let set: BTreeSet<Element> = members.into_iter().collect();
        if set.is_empty() {
            return Err(CsError::Empty);
        }
        if set.contains(&lattice.zero()) {
            return Err(CsError::ZeroGenerated { from: None });
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&lattice.join(a, b)) {
                    return Err(CsError::NotJoinClosed { a, b });
                }
                if lattice.lt(a, b) && !set.contains(&lattice.meet(lattice.ortho(a), b)) {
                    return Err(CsError::NotRelativeComplementClosed { a, b });
                }
            }
        }
        Ok(Self { members: set.into_iter().collect() })
    }

    /// `L - {0}`, always a conditional system in an orthomodular lattice.
    pub fn all_nonzero(lattice: &OrthomodularLattice) -> Self {
        Self { members: lattice.nonzero_elements().collect() }
    }

    pub fn contains(&self, e: Element) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("{a} and {b} are not orthogonal")]
    NotOrthogonal { a: Element, b: Element },
    #[error("blocks join to {0}, not to the top")]
    NotCovering(Element),
}

/// Checks that `blocks` are mutually orthogonal and join to one.
pub fn check_partition(lattice: &OrthomodularLattice, blocks: &[Element]) -> Result<(), PartitionError> {
    for (i, &a) in blocks.iter().enumerate() {
        for &b in &blocks[i + 1..] {
            if !lattice.is_orthogonal(a, b) {
                return Err(PartitionError::NotOrthogonal { a, b });
            }
        }
    }
    let top = lattice.join_all(blocks.iter().copied());
    if top != lattice.one() {
        return Err(PartitionError::NotCovering(top));
    }
    Ok(())
}

/// Boolean subalgebra generated by a partition of one into orthogonal blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanSubalgebra {
    members: Vec<Element>,
    atoms: Vec<Element>,
}

impl BooleanSubalgebra {
    /// Zero blocks are dropped; the remaining blocks become the atoms and
    /// the members are all joins of sets of atoms.
    pub fn from_blocks(lattice: &OrthomodularLattice, blocks: &[Element]) -> Result<Self, PartitionError> {
        check_partition(lattice, blocks)?;
        let mut atoms: Vec<Element> = blocks.iter().copied().filter(|&b| b != lattice.zero()).collect();
        atoms.sort();
        atoms.dedup();
        let mut members = BTreeSet::from([lattice.zero()]);
        for &atom in &atoms {
            let grown: Vec<Element> = members.iter().map(|&m| lattice.join(m, atom)).collect();
            members.extend(grown);
        }
        Ok(Self { members: members.into_iter().collect(), atoms })
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    pub fn contains(&self, e: Element) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn nonzero_members<'a>(&'a self, lattice: &'a OrthomodularLattice) -> impl Iterator<Item = Element> + 'a {
        self.members.iter().copied().filter(move |&e| e != lattice.zero())
    }

    /// Atoms lying below `e`.
    pub fn atoms_below<'a>(&'a self, lattice: &'a OrthomodularLattice, e: Element) -> impl Iterator<Item = Element> + 'a {
        self.atoms.iter().copied().filter(move |&a| lattice.leq(a, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mo2() -> OrthomodularLattice {
        let labels = ["0", "a", "a'", "b", "b'", "1"];
        let mut leq = Vec::new();
        for x in ["a", "a'", "b", "b'"] {
            leq.push(("0", x));
            leq.push((x, "1"));
        }
        let ortho = [("0", "1"), ("a", "a'"), ("b", "b'")];
        OrthomodularLattice::build(&labels, &leq, &ortho).unwrap()
    }

    fn e(l: &OrthomodularLattice, s: &str) -> Element {
        l.element(s).unwrap()
    }

    /// Brute-force bound: scan every common lower (upper) bound.
    fn scan_meet(l: &OrthomodularLattice, a: Element, b: Element) -> Element {
        let lower: Vec<_> = l.elements().filter(|&c| l.leq(c, a) && l.leq(c, b)).collect();
        *lower.iter().find(|&&c| lower.iter().all(|&d| l.leq(d, c))).unwrap()
    }

    fn scan_join(l: &OrthomodularLattice, a: Element, b: Element) -> Element {
        let upper: Vec<_> = l.elements().filter(|&c| l.leq(a, c) && l.leq(b, c)).collect();
        *upper.iter().find(|&&c| upper.iter().all(|&d| l.leq(c, d))).unwrap()
    }

    #[test]
    fn two_element_chain() {
        let l = OrthomodularLattice::build(&["0", "1"], &[("0", "1")], &[("0", "1")]).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.ortho(l.zero()), l.one());
        assert_eq!(l.ortho(l.one()), l.zero());
    }

    #[test]
    fn mo2_bounds_match_scan() {
        let l = mo2();
        assert_eq!(l.meet(e(&l, "a"), e(&l, "b")), l.zero());
        assert_eq!(l.join(e(&l, "a"), e(&l, "b")), l.one());
        assert_eq!(l.join(e(&l, "a"), e(&l, "b'")), l.one());
        assert_eq!(l.meet(e(&l, "a"), l.one()), e(&l, "a"));
        for a in l.elements() {
            for b in l.elements() {
                assert_eq!(l.meet(a, b), scan_meet(&l, a, b));
                assert_eq!(l.join(a, b), scan_join(&l, a, b));
            }
        }
    }

    #[test]
    fn hexagon_fails_orthomodular_law() {
        let labels = ["0", "a", "b", "b'", "a'", "1"];
        let leq = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "b'"), ("b'", "a'"), ("a'", "1")];
        let ortho = [("0", "1"), ("a", "a'"), ("b", "b'")];
        let err = OrthomodularLattice::build(&labels, &leq, &ortho).unwrap_err();
        assert_eq!(err, LatticeError::NotOrthomodular { a: "a".into(), b: "b".into() });
    }

    #[test]
    fn structural_errors() {
        let err = OrthomodularLattice::build(&["0", "x", "1"], &[("0", "x"), ("x", "0"), ("x", "1")], &[("0", "1")]);
        assert!(matches!(err, Err(LatticeError::NotAPoset { .. })));

        // 0 < x, y < 1 but x, y incomparable with two upper bounds u, v.
        let labels = ["0", "x", "y", "u", "v", "1"];
        let leq = [("0", "x"), ("0", "y"), ("x", "u"), ("x", "v"), ("y", "u"), ("y", "v"), ("u", "1"), ("v", "1")];
        let err = OrthomodularLattice::build(&labels, &leq, &[("0", "1")]).unwrap_err();
        assert!(matches!(err, LatticeError::NotALattice { kind: BoundKind::Join, .. }));

        let err = OrthomodularLattice::build(&["0", "1"], &[("0", "1")], &[("0", "1"), ("0", "0")]).unwrap_err();
        assert!(matches!(err, LatticeError::NotAnOrtholattice(OrthoViolation::Conflicting { .. })));

        let err = OrthomodularLattice::build(&["0", "m", "1"], &[("0", "m"), ("m", "1")], &[("0", "1")]).unwrap_err();
        assert_eq!(err, LatticeError::NotAnOrtholattice(OrthoViolation::Missing { element: "m".into() }));

        // chain 0 < m < 1 with m' = m: involutive but m v m' = m.
        let err = OrthomodularLattice::build(&["0", "m", "1"], &[("0", "m"), ("m", "1")], &[("0", "1"), ("m", "m")])
            .unwrap_err();
        assert_eq!(err, LatticeError::NotAnOrtholattice(OrthoViolation::NotComplement { element: "m".into() }));

        let err = OrthomodularLattice::build(&["0", "1"], &[("0", "2")], &[("0", "1")]).unwrap_err();
        assert_eq!(err, LatticeError::UnknownLabel("2".into()));
        let err = OrthomodularLattice::build(&["0", "0"], &[], &[]).unwrap_err();
        assert_eq!(err, LatticeError::DuplicateLabel("0".into()));
    }

    #[test]
    fn orthogonality_and_compatibility() {
        let l = mo2();
        let (a, ap, b) = (e(&l, "a"), e(&l, "a'"), e(&l, "b"));
        assert!(l.is_orthogonal(a, ap));
        assert!(!l.is_orthogonal(a, b));
        for x in l.elements() {
            assert!(l.is_orthogonal(l.zero(), x));
        }
        assert!(l.is_compatible(a, ap));
        assert!(!l.is_compatible(a, b));
        assert!(l.is_compatible(a, l.one()));
        assert_eq!(l.compatibility_witness(a, l.one()), Some((l.zero(), ap, a)));
        assert_eq!(l.compatibility_witness(a, b), None);
    }

    #[test]
    fn subalgebras_of_mo2() {
        let l = mo2();
        let ba = l.boolean_subalgebra(e(&l, "a"));
        assert_eq!(ba.members(), &[l.zero(), e(&l, "a"), e(&l, "a'"), l.one()]);
        assert_eq!(ba.atoms(), &[e(&l, "a"), e(&l, "a'")]);
        let bb = l.boolean_subalgebra(e(&l, "b"));
        assert_eq!(bb.atoms(), &[e(&l, "b"), e(&l, "b'")]);
        let trivial = l.boolean_subalgebra(l.one());
        assert_eq!(trivial.members(), &[l.zero(), l.one()]);
        assert_eq!(trivial.atoms(), &[l.one()]);
    }

    /// Brute-force closure: iterate both rules over all pairs until stable.
    fn brute_cs(l: &OrthomodularLattice, gens: &[Element]) -> Vec<Element> {
        let mut in_set = vec![false; l.len()];
        for g in gens {
            in_set[g.index()] = true;
        }
        loop {
            let snapshot = in_set.clone();
            for a in l.elements().filter(|x| snapshot[x.index()]) {
                for b in l.elements().filter(|x| snapshot[x.index()]) {
                    in_set[l.join(a, b).index()] = true;
                    if l.lt(a, b) {
                        in_set[l.meet(l.ortho(a), b).index()] = true;
                    }
                }
            }
            if snapshot == in_set {
                return l.elements().filter(|x| in_set[x.index()]).collect();
            }
        }
    }

    #[test]
    fn conditional_system_closure() {
        let l = mo2();
        let (a, ap, b, bp) = (e(&l, "a"), e(&l, "a'"), e(&l, "b"), e(&l, "b'"));
        assert_eq!(l.generate_cs(&[l.one()]).unwrap().members(), &[l.one()]);
        let cs = l.generate_cs(&[a, ap]).unwrap();
        assert_eq!(cs.members(), brute_cs(&l, &[a, ap]).as_slice());
        assert_eq!(cs.members(), &[a, ap, l.one()]);
        let cs = l.generate_cs(&[a, b]).unwrap();
        assert_eq!(cs.members(), brute_cs(&l, &[a, b]).as_slice());
        assert_eq!(cs.members(), &[a, ap, b, bp, l.one()]);
        assert!(ConditionalSystem::new(&l, cs.members().to_vec()).is_ok());

        assert_eq!(l.generate_cs(&[]), Err(CsError::Empty));
        assert_eq!(l.generate_cs(&[l.zero()]), Err(CsError::ZeroGenerated { from: None }));
        assert_eq!(
            ConditionalSystem::new(&l, [a, l.one()]),
            Err(CsError::NotRelativeComplementClosed { a, b: l.one() })
        );
        assert_eq!(ConditionalSystem::new(&l, [a, b]), Err(CsError::NotJoinClosed { a, b }));
    }

    #[test]
    fn description_round_trips() {
        let l = mo2();
        let rebuilt = l.description().build().unwrap();
        assert_eq!(rebuilt, l);
        let mut desc = l.description();
        desc.zero = Some("a".into());
        assert!(matches!(desc.build(), Err(LatticeError::BoundMismatch { which: "zero", .. })));
    }
}
