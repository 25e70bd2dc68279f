//! Finite-valued observables, their joint distributions under an s-map,
//! expectations and conditional expectations onto Boolean subalgebras.
//!
//! An observable maps each point `r` of a finite spectrum to an event
//! `x({r})`; the events are mutually orthogonal and join to one. A set of
//! values `E` is sent to `x(E) = ⋁_{r∈E} x({r})`. Value sets are bitmasks
//! over spectrum positions (bit `i` is the `i`-th smallest value).

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{check_partition, BooleanSubalgebra, Element, OrthomodularLattice, PartitionError};
use crate::rational::{format_fraction, Rational};
use crate::smap::SMap;
use crate::states::{same_lattice, ConditionalState, StateError};

/// Spectra are limited to the width of a [`ValueSet`].
pub const MAX_SPECTRUM: usize = 64;

/// Subset of a spectrum, as a bitmask over spectrum positions.
pub type ValueSet = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObservableError {
    #[error("value {0} is assigned twice")]
    DuplicateValue(String),
    #[error("point events do not partition one: {0}")]
    NotAPartition(PartitionError),
    #[error("spectrum has more than {MAX_SPECTRUM} points")]
    TooManyValues,
    #[error("objects live on different lattices")]
    LatticeMismatch,
    #[error("{0} is not in the conditional system")]
    ConditionOutsideCs(Element),
    #[error("atom {0} of the subalgebra is not in the conditional system")]
    AtomOutsideCs(Element),
    #[error("event {0} of the candidate is not in the subalgebra")]
    NotInSubalgebra(Element),
    #[error("expectations differ under the condition {witness}: {of_x} vs {of_z}")]
    NoSolution { witness: Element, of_x: String, of_z: String },
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observable {
    lattice: Arc<OrthomodularLattice>,
    // sorted by value
    points: Vec<(Rational, Element)>,
}

impl Observable {
    pub fn new(
        lattice: &Arc<OrthomodularLattice>,
        pairs: impl IntoIterator<Item = (Rational, Element)>,
    ) -> Result<Self, ObservableError> {
        let mut points: Vec<(Rational, Element)> = pairs.into_iter().collect();
        if points.len() > MAX_SPECTRUM {
            return Err(ObservableError::TooManyValues);
        }
        points.sort_by(|x, y| x.0.cmp(&y.0));
        if let Some(w) = points.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(ObservableError::DuplicateValue(format_fraction(&w[0].0)));
        }
        let events: Vec<Element> = points.iter().map(|(_, e)| *e).collect();
        check_partition(lattice, &events).map_err(ObservableError::NotAPartition)?;
        Ok(Self { lattice: Arc::clone(lattice), points })
    }

    /// The observable taking the single value `value` on one.
    pub fn constant(lattice: &Arc<OrthomodularLattice>, value: Rational) -> Self {
        Self { lattice: Arc::clone(lattice), points: vec![(value, lattice.one())] }
    }

    pub fn lattice(&self) -> &Arc<OrthomodularLattice> {
        &self.lattice
    }

    /// `(value, event)` pairs in increasing value order.
    pub fn points(&self) -> &[(Rational, Element)] {
        &self.points
    }

    pub fn spectrum(&self) -> impl Iterator<Item = &Rational> {
        self.points.iter().map(|(v, _)| v)
    }

    pub fn full_set(&self) -> ValueSet {
        if self.points.len() == MAX_SPECTRUM {
            ValueSet::MAX
        } else {
            (1 << self.points.len()) - 1
        }
    }

    /// `x(E)`.
    pub fn event(&self, set: ValueSet) -> Element {
        self.lattice.join_all(
            self.points
                .iter()
                .enumerate()
                .filter(|(i, _)| set >> i & 1 == 1)
                .map(|(_, (_, e))| *e),
        )
    }

    /// Positions of the values strictly below `r`, i.e. the half-line
    /// `(-inf, r)`.
    pub fn below(&self, r: &Rational) -> ValueSet {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, (v, _))| v < r)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Bitmask of the given values; unknown values are ignored.
    pub fn value_set<'a>(&self, values: impl IntoIterator<Item = &'a Rational>) -> ValueSet {
        values
            .into_iter()
            .filter_map(|v| self.points.iter().position(|(p, _)| p == v))
            .fold(0, |acc, i| acc | 1 << i)
    }

    /// Boolean subalgebra `R(x)` generated by the point events.
    pub fn range(&self) -> BooleanSubalgebra {
        let events: Vec<Element> = self.points.iter().map(|(_, e)| *e).collect();
        BooleanSubalgebra::from_blocks(&self.lattice, &events).expect("validated partition")
    }
}

/// `p_{x,y}(E, F) = p(x(E), y(F))`, stored as the matrix of point events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    x: Observable,
    y: Observable,
    // p(x({r_i}), y({s_j})), row-major
    cells: Vec<Rational>,
}

impl JointDistribution {
    pub fn x(&self) -> &Observable {
        &self.x
    }

    pub fn y(&self) -> &Observable {
        &self.y
    }

    /// `p(x({r_i}), y({s_j}))`.
    pub fn cell(&self, i: usize, j: usize) -> &Rational {
        &self.cells[i * self.y.points.len() + j]
    }

    /// `p_{x,y}(E, F)`, summed from the point cells (s3 makes `p`
    /// additive in both arguments over orthogonal joins).
    pub fn prob(&self, e: ValueSet, f: ValueSet) -> Rational {
        let ny = self.y.points.len();
        (0..self.x.points.len())
            .filter(|i| e >> i & 1 == 1)
            .flat_map(|i| (0..ny).filter(move |j| f >> j & 1 == 1).map(move |j| (i, j)))
            .map(|(i, j)| &self.cells[i * ny + j])
            .sum()
    }
}

pub fn joint_distribution(p: &SMap, x: &Observable, y: &Observable) -> Result<JointDistribution, ObservableError> {
    if !same_lattice(p.lattice(), x.lattice()) || !same_lattice(p.lattice(), y.lattice()) {
        return Err(ObservableError::LatticeMismatch);
    }
    let cells = x
        .points
        .iter()
        .flat_map(|(_, a)| y.points.iter().map(move |(_, b)| p.get(*a, *b).clone()))
        .collect();
    Ok(JointDistribution { x: x.clone(), y: y.clone(), cells })
}

/// `F_{x,y}(r, s) = p(x(-inf, r), y(-inf, s))` with open half-lines.
pub fn distribution_function(
    p: &SMap,
    x: &Observable,
    y: &Observable,
    r: &Rational,
    s: &Rational,
) -> Result<Rational, ObservableError> {
    if !same_lattice(p.lattice(), x.lattice()) || !same_lattice(p.lattice(), y.lattice()) {
        return Err(ObservableError::LatticeMismatch);
    }
    Ok(p.get(x.event(x.below(r)), y.event(y.below(s))).clone())
}

/// `Σ_i r_i f(x({r_i}), b)`: the mean of `x` in the state `f(., b)`.
pub fn expectation(f: &ConditionalState, x: &Observable, b: Element) -> Result<Rational, ObservableError> {
    if !same_lattice(f.lattice(), x.lattice()) {
        return Err(ObservableError::LatticeMismatch);
    }
    if !f.cs().contains(b) {
        return Err(ObservableError::ConditionOutsideCs(b));
    }
    Ok(x.points
        .iter()
        .map(|(r, e)| r * f.get(*e, b).expect("b in cs"))
        .sum())
}

/// One line of the check `f(x, b) = f(z, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub condition: Element,
    pub of_x: Rational,
    pub of_z: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalExpectation {
    pub observable: Observable,
    /// One entry per nonzero member of the subalgebra, in id order.
    pub ledger: Vec<LedgerEntry>,
}

/// Conditional expectation of `x` onto `subalgebra` in the state `f(., 1)`.
///
/// Each atom `b_i` receives the value `s_i = Σ_j r_j f(x({r_j}), b_i)`;
/// atoms with equal values are merged into one point event. The result is
/// then checked against `f(x, b) = f(z, b)` for every nonzero member.
pub fn conditional_expectation(
    f: &ConditionalState,
    x: &Observable,
    subalgebra: &BooleanSubalgebra,
) -> Result<ConditionalExpectation, ObservableError> {
    if !same_lattice(f.lattice(), x.lattice()) {
        return Err(ObservableError::LatticeMismatch);
    }
    let l = f.lattice();
    if let Some(&atom) = subalgebra.atoms().iter().find(|&&a| !f.cs().contains(a)) {
        return Err(ObservableError::AtomOutsideCs(atom));
    }
    if !f.cs().contains(l.one()) {
        return Err(ObservableError::ConditionOutsideCs(l.one()));
    }
    let mut by_value: BTreeMap<Rational, Element> = BTreeMap::new();
    for &atom in subalgebra.atoms() {
        let s = expectation(f, x, atom)?;
        let slot = by_value.entry(s).or_insert(l.zero());
        *slot = l.join(*slot, atom);
    }
    let z = Observable::new(l, by_value)?;
    let ledger = verify_conditional_expectation(f, x, subalgebra, &z)?;
    Ok(ConditionalExpectation { observable: z, ledger })
}

/// Checks that `z` is `subalgebra`-valued and matches the conditional means
/// of `x` on every nonzero member.
pub fn verify_conditional_expectation(
    f: &ConditionalState,
    x: &Observable,
    subalgebra: &BooleanSubalgebra,
    z: &Observable,
) -> Result<Vec<LedgerEntry>, ObservableError> {
    if !same_lattice(f.lattice(), z.lattice()) {
        return Err(ObservableError::LatticeMismatch);
    }
    if let Some(&(_, e)) = z.points.iter().find(|(_, e)| !subalgebra.contains(*e)) {
        return Err(ObservableError::NotInSubalgebra(e));
    }
    let l = f.lattice();
    let mut ledger = Vec::new();
    for b in subalgebra.nonzero_members(l) {
        let of_x = expectation(f, x, b)?;
        let of_z = expectation(f, z, b)?;
        if of_x != of_z {
            return Err(ObservableError::NoSolution {
                witness: b,
                of_x: format_fraction(&of_x),
                of_z: format_fraction(&of_z),
            });
        }
        ledger.push(LedgerEntry { condition: b, of_x, of_z });
    }
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    fn two_valued(l: &Arc<OrthomodularLattice>, first: &str, second: &str) -> Observable {
        let (e1, e2) = (l.element(first).unwrap(), l.element(second).unwrap());
        Observable::new(l, [(int(1), e1), (int(2), e2)]).unwrap()
    }

    #[test]
    fn construction() {
        let l = fixtures::lattice();
        let x = two_valued(&l, "a", "a'");
        assert_eq!(x.range(), l.boolean_subalgebra(l.element("a").unwrap()));
        let c = Observable::new(&l, [(ratio(7, 3), l.one())]).unwrap();
        assert_eq!(c.range().members(), &[l.zero(), l.one()]);
        let (a, b) = (l.element("a").unwrap(), l.element("b").unwrap());
        assert_eq!(
            Observable::new(&l, [(int(1), a), (int(2), b)]),
            Err(ObservableError::NotAPartition(PartitionError::NotOrthogonal { a, b }))
        );
        assert_eq!(
            Observable::new(&l, [(int(1), a), (int(1), l.ortho(a))]),
            Err(ObservableError::DuplicateValue("1".into()))
        );
        assert_eq!(
            Observable::new(&l, [(int(1), a)]),
            Err(ObservableError::NotAPartition(PartitionError::NotCovering(a)))
        );
    }

    #[test]
    fn joint_distribution_of_example() {
        let l = fixtures::lattice();
        let p = fixtures::smap(&l);
        let x = two_valued(&l, "a", "a'");
        let y = two_valued(&l, "b", "b'");
        let pxy = joint_distribution(&p, &x, &y).unwrap();
        let pyx = joint_distribution(&p, &y, &x).unwrap();
        assert_eq!(pxy.prob(0b01, 0b01), ratio(3, 25));
        assert_eq!(pyx.prob(0b01, 0b01), ratio(2, 25));
        assert_eq!(pxy.prob(0, 0b11), int(0));
        assert_eq!(pxy.prob(0b11, 0b11), int(1));
    }

    #[test]
    fn distribution_function_of_example() {
        let l = fixtures::lattice();
        let p = fixtures::smap(&l);
        let x = two_valued(&l, "a", "a'");
        let y = two_valued(&l, "b", "b'");
        let big = int(10);
        assert_eq!(distribution_function(&p, &x, &y, &big, &big).unwrap(), int(1));
        assert_eq!(distribution_function(&p, &x, &y, &int(0), &big).unwrap(), int(0));
        let mid = ratio(3, 2);
        assert_eq!(distribution_function(&p, &x, &y, &mid, &mid).unwrap(), ratio(3, 25));
        // Open half-line: the value 1 itself is excluded.
        assert_eq!(distribution_function(&p, &x, &y, &int(1), &big).unwrap(), int(0));
    }

    #[test]
    fn expectations_of_example() {
        let l = fixtures::lattice();
        let f = fixtures::conditional_state(&l);
        let x = two_valued(&l, "a", "a'");
        let y = two_valued(&l, "b", "b'");
        let a = l.element("a").unwrap();
        assert_eq!(expectation(&f, &x, l.one()).unwrap(), ratio(8, 5));
        assert_eq!(expectation(&f, &y, a).unwrap(), ratio(9, 5));
        assert_eq!(expectation(&f, &y, l.ortho(a)).unwrap(), ratio(49, 30));
        let c = Observable::constant(&l, ratio(-3, 7));
        for &b in f.cs().members() {
            assert_eq!(expectation(&f, &c, b).unwrap(), ratio(-3, 7));
        }
        assert_eq!(expectation(&f, &x, l.zero()), Err(ObservableError::ConditionOutsideCs(l.zero())));
    }

    #[test]
    fn conditional_expectations_of_example() {
        let l = fixtures::lattice();
        let f = fixtures::conditional_state(&l);
        let (a, b) = (l.element("a").unwrap(), l.element("b").unwrap());

        let x = two_valued(&l, "a", "a'");
        let z = conditional_expectation(&f, &x, &l.boolean_subalgebra(b)).unwrap();
        assert_eq!(z.observable.points(), &[(ratio(8, 5), l.one())]);
        assert_eq!(z.ledger.len(), 3);

        let y = two_valued(&l, "b", "b'");
        let w = conditional_expectation(&f, &y, &l.boolean_subalgebra(a)).unwrap();
        assert_eq!(w.observable.points(), &[(ratio(49, 30), l.ortho(a)), (ratio(9, 5), a)]);
        assert_eq!(expectation(&f, &w.observable, l.one()).unwrap(), ratio(17, 10));

        // x is already B_a-valued.
        let same = conditional_expectation(&f, &x, &l.boolean_subalgebra(a)).unwrap();
        assert_eq!(same.observable, x);
    }

    #[test]
    fn wrong_candidate_is_rejected() {
        let l = fixtures::lattice();
        let f = fixtures::conditional_state(&l);
        let a = l.element("a").unwrap();
        let y = two_valued(&l, "b", "b'");
        let ba = l.boolean_subalgebra(a);
        let wrong = Observable::new(&l, [(int(2), a), (ratio(49, 30), l.ortho(a))]).unwrap();
        assert!(matches!(
            verify_conditional_expectation(&f, &y, &ba, &wrong),
            Err(ObservableError::NoSolution { witness, .. }) if witness == a
        ));
        let off_algebra = two_valued(&l, "b", "b'");
        assert_eq!(
            verify_conditional_expectation(&f, &y, &ba, &off_algebra),
            Err(ObservableError::NotInSubalgebra(l.element("b").unwrap()))
        );
    }

    #[test]
    fn atoms_outside_cs() {
        let l = fixtures::lattice();
        let f = fixtures::conditional_state(&l);
        let (a, ap) = (l.element("a").unwrap(), l.element("a'").unwrap());
        let g = crate::states::build_conditional_state(
            &l,
            &[a, ap],
            &[f.column(a).unwrap(), f.column(ap).unwrap()],
            &[crate::Probability::new(ratio(2, 5)).unwrap(), crate::Probability::new(ratio(3, 5)).unwrap()],
        )
        .unwrap();
        let y = two_valued(&l, "b", "b'");
        let b = l.element("b").unwrap();
        assert_eq!(
            conditional_expectation(&g, &y, &l.boolean_subalgebra(b)),
            Err(ObservableError::AtomOutsideCs(b))
        );
    }
}
