//! States, conditional states and the (asymmetric) independence relation.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{ConditionalSystem, CsError, Element, OrthomodularLattice};
use crate::rational::{in_unit_interval, Probability, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("objects live on different lattices")]
    LatticeMismatch,
    #[error("expected {expected} values, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("value at {element} is outside [0, 1]")]
    OutOfRange { element: Element },
    #[error("state is not normalized (m(0) = 0 and m(1) = 1 required)")]
    NotNormalized,
    #[error("not additive on the orthogonal pair ({a}, {b})")]
    NotAdditive { a: Element, b: Element },
    #[error("entry f({element}, {condition}) is missing")]
    MissingEntry { element: Element, condition: Element },
    #[error("condition {0} is not in the conditional system")]
    ConditionOutsideCs(Element),
    #[error(transparent)]
    ConditionalSystem(#[from] CsError),
    #[error("C1: f(., {condition}) is not a state ({defect})")]
    C1Violation { condition: Element, defect: Box<StateError> },
    #[error("C2: f({condition}, {condition}) != 1")]
    C2Violation { condition: Element },
    #[error("C3: decomposition of f({element}, ⋁{family:?}) over the family fails")]
    C3Violation { element: Element, family: Vec<Element> },
    #[error("{a} and {b} are not orthogonal")]
    NotOrthogonalFamily { a: Element, b: Element },
    #[error("state {index} is not concentrated on its atom")]
    AlphaNotConcentrated { index: usize },
    #[error("weights do not sum to 1")]
    WeightsNotNormalized,
    #[error("sub-family {family:?} carries zero total weight")]
    ZeroMassCondition { family: Vec<Element> },
    #[error("f({c}, {a}) != 1, independence is not defined")]
    PreconditionFca { c: Element, a: Element },
}

pub(crate) fn same_lattice(a: &Arc<OrthomodularLattice>, b: &Arc<OrthomodularLattice>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// First defect of `values` as a state: range, normalization, then
/// additivity over orthogonal pairs in id order.
fn state_defect(lattice: &OrthomodularLattice, value: impl Fn(Element) -> Rational) -> Option<StateError> {
    if let Some(element) = lattice.elements().find(|&e| !in_unit_interval(&value(e))) {
        return Some(StateError::OutOfRange { element });
    }
    if !value(lattice.zero()).is_zero() || !value(lattice.one()).is_one() {
        return Some(StateError::NotNormalized);
    }
    for a in lattice.elements() {
        for b in lattice.elements() {
            if lattice.is_orthogonal(a, b) && value(lattice.join(a, b)) != value(a) + value(b) {
                return Some(StateError::NotAdditive { a, b });
            }
        }
    }
    None
}

/// A normalized function on `L`, additive on orthogonal pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    lattice: Arc<OrthomodularLattice>,
    values: Vec<Rational>,
}

impl State {
    /// `values[i]` is the value at the element with id `i`.
    pub fn validate(lattice: &Arc<OrthomodularLattice>, values: Vec<Rational>) -> Result<Self, StateError> {
        if values.len() != lattice.len() {
            return Err(StateError::WrongLength { expected: lattice.len(), found: values.len() });
        }
        if let Some(err) = state_defect(lattice, |e| values[e.index()].clone()) {
            return Err(err);
        }
        Ok(Self { lattice: Arc::clone(lattice), values })
    }

    pub fn lattice(&self) -> &Arc<OrthomodularLattice> {
        &self.lattice
    }

    pub fn get(&self, e: Element) -> &Rational {
        &self.values[e.index()]
    }

    pub fn probability(&self, e: Element) -> Probability {
        Probability::new(self.get(e).clone()).expect("validated")
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Validates a state given as a map from elements to values.
pub fn validate_state(
    lattice: &Arc<OrthomodularLattice>,
    values: &HashMap<Element, Rational>,
) -> Result<State, StateError> {
    let dense = lattice
        .elements()
        .map(|e| values.get(&e).cloned())
        .collect::<Option<Vec<_>>>()
        .ok_or(StateError::WrongLength { expected: lattice.len(), found: values.len() })?;
    State::validate(lattice, dense)
}

/// Per-axiom outcome of checking a candidate conditional state; each field
/// holds the first witness found for that axiom.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConditionalAudit {
    pub c1: Option<StateError>,
    pub c2: Option<StateError>,
    pub c3: Option<StateError>,
}

impl ConditionalAudit {
    pub fn passed(&self) -> bool {
        self.c1.is_none() && self.c2.is_none() && self.c3.is_none()
    }

    pub fn first_error(self) -> Option<StateError> {
        self.c1.or(self.c2).or(self.c3)
    }
}

/// `f: L x L_c -> [0, 1]` satisfying C1-C3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalState {
    lattice: Arc<OrthomodularLattice>,
    cs: ConditionalSystem,
    // row-major `n x n`; `None` outside the conditional system
    table: Vec<Option<Rational>>,
}

impl ConditionalState {
    /// Assembles the table from `(element, condition) -> value` entries
    /// without checking C1-C3.
    fn assemble(
        lattice: &Arc<OrthomodularLattice>,
        cs: ConditionalSystem,
        entries: impl IntoIterator<Item = ((Element, Element), Rational)>,
    ) -> Result<Self, StateError> {
        let n = lattice.len();
        let mut table = vec![None; n * n];
        for ((element, condition), value) in entries {
            if !cs.contains(condition) {
                return Err(StateError::ConditionOutsideCs(condition));
            }
            table[element.index() * n + condition.index()] = Some(value);
        }
        for &condition in cs.members() {
            for element in lattice.elements() {
                if table[element.index() * n + condition.index()].is_none() {
                    return Err(StateError::MissingEntry { element, condition });
                }
            }
        }
        Ok(Self { lattice: Arc::clone(lattice), cs, table })
    }

    /// Checks C1, C2 and C3 without stopping at the first failing axiom.
    /// Structural problems (missing entries, conditions outside `cs`) are
    /// returned as `Err`.
    pub fn audit(
        lattice: &Arc<OrthomodularLattice>,
        cs: ConditionalSystem,
        entries: impl IntoIterator<Item = ((Element, Element), Rational)>,
    ) -> Result<ConditionalAudit, StateError> {
        Ok(Self::assemble(lattice, cs, entries)?.audit_self())
    }

    /// Validates C1-C3; reports the first failing axiom in that order.
    pub fn validate(
        lattice: &Arc<OrthomodularLattice>,
        cs: ConditionalSystem,
        entries: impl IntoIterator<Item = ((Element, Element), Rational)>,
    ) -> Result<Self, StateError> {
        let candidate = Self::assemble(lattice, cs, entries)?;
        match candidate.audit_self().first_error() {
            Some(err) => Err(err),
            None => Ok(candidate),
        }
    }

    fn audit_self(&self) -> ConditionalAudit {
        let l = &*self.lattice;
        let c1 = self.cs.members().iter().find_map(|&condition| {
            state_defect(l, |e| self.at(e, condition).clone())
                .map(|defect| StateError::C1Violation { condition, defect: Box::new(defect) })
        });
        let c2 = self
            .cs
            .members()
            .iter()
            .find(|&&c| !self.at(c, c).is_one())
            .map(|&condition| StateError::C2Violation { condition });
        let mut c3 = None;
        for_each_orthogonal_family(l, self.cs.members(), &mut |family| {
            let top = l.join_all(family.iter().copied());
            if !self.cs.contains(top) {
                return true;
            }
            let bad = l.elements().find(|&b| {
                let decomposed: Rational = family
                    .iter()
                    .map(|&a| self.at(a, top) * self.at(b, a))
                    .sum();
                decomposed != *self.at(b, top)
            });
            match bad {
                Some(element) => {
                    c3 = Some(StateError::C3Violation { element, family: family.to_vec() });
                    false
                }
                None => true,
            }
        });
        ConditionalAudit { c1, c2, c3 }
    }

    /// Conditional state of a single state on a Boolean lattice:
    /// `f(x, y) = m(x ^ y) / m(y)` over the nonzero-mass elements.
    pub fn from_ratio(state: &State) -> Result<Self, StateError> {
        let l = state.lattice();
        let cs = ConditionalSystem::new(l, l.elements().filter(|&e| !state.get(e).is_zero()))?;
        let entries: Vec<_> = cs
            .members()
            .iter()
            .flat_map(|&y| {
                l.elements()
                    .map(move |x| ((x, y), state.get(l.meet(x, y)) / state.get(y)))
            })
            .collect();
        Self::validate(l, cs, entries)
    }

    fn at(&self, element: Element, condition: Element) -> &Rational {
        self.table[element.index() * self.lattice.len() + condition.index()]
            .as_ref()
            .expect("condition inside cs")
    }

    pub fn lattice(&self) -> &Arc<OrthomodularLattice> {
        &self.lattice
    }

    pub fn cs(&self) -> &ConditionalSystem {
        &self.cs
    }

    /// `f(element, condition)`, or `None` when the condition is outside `cs`.
    pub fn get(&self, element: Element, condition: Element) -> Option<&Rational> {
        self.table[element.index() * self.lattice.len() + condition.index()].as_ref()
    }

    pub fn value(&self, element: Element, condition: Element) -> Result<&Rational, StateError> {
        self.get(element, condition).ok_or(StateError::ConditionOutsideCs(condition))
    }

    /// `f(., condition)` as a [`State`].
    pub fn column(&self, condition: Element) -> Result<State, StateError> {
        if !self.cs.contains(condition) {
            return Err(StateError::ConditionOutsideCs(condition));
        }
        let values = self.lattice.elements().map(|e| self.at(e, condition).clone()).collect();
        State::validate(&self.lattice, values)
    }

    /// All `((element, condition), value)` entries, conditions in id order.
    pub fn entries(&self) -> impl Iterator<Item = ((Element, Element), &Rational)> + '_ {
        self.lattice
            .elements()
            .flat_map(move |e| self.cs.members().iter().map(move |&c| ((e, c), self.at(e, c))))
    }

    /// `b` independent of `a` with respect to `f(., c)`: `f(b, c) = f(b, a)`,
    /// defined only when `a, c ∈ cs` and `f(c, a) = 1`.
    pub fn is_independent(&self, b: Element, a: Element, c: Element) -> Result<bool, StateError> {
        let f_ca = self.value(c, a)?;
        self.value(b, c)?;
        if !f_ca.is_one() {
            return Err(StateError::PreconditionFca { c, a });
        }
        Ok(self.at(b, c) == self.at(b, a))
    }
}

/// Calls `visit` with every family of at least two mutually orthogonal
/// members of `pool`, in lexicographic order of ids. Stops when `visit`
/// returns `false`.
pub(crate) fn for_each_orthogonal_family(
    lattice: &OrthomodularLattice,
    pool: &[Element],
    visit: &mut dyn FnMut(&[Element]) -> bool,
) {
    fn extend(
        lattice: &OrthomodularLattice,
        pool: &[Element],
        start: usize,
        family: &mut Vec<Element>,
        visit: &mut dyn FnMut(&[Element]) -> bool,
    ) -> bool {
        for i in start..pool.len() {
            let next = pool[i];
            if family.iter().all(|&m| lattice.is_orthogonal(m, next)) {
                family.push(next);
                if family.len() >= 2 && !visit(family) {
                    return false;
                }
                if !extend(lattice, pool, i + 1, family, visit) {
                    return false;
                }
                family.pop();
            }
        }
        true
    }
    extend(lattice, pool, 0, &mut Vec::new(), visit);
}

/// Conditional state from states `alphas[i]` concentrated on mutually
/// orthogonal `atoms[i]` and weights `k` summing to one:
/// `f(d, ⋁_S a_i) = Σ_{i∈S} (k_i / Σ_{j∈S} k_j) α_i(d)`, with `f(d, a_i) = α_i(d)`.
///
/// The domain is the conditional system generated by `atoms`, i.e. all joins
/// of nonempty sub-families. A sub-family of two or more atoms with zero
/// total weight has no determined column and is rejected.
pub fn build_conditional_state(
    lattice: &Arc<OrthomodularLattice>,
    atoms: &[Element],
    alphas: &[State],
    k: &[Probability],
) -> Result<ConditionalState, StateError> {
    if alphas.len() != atoms.len() {
        return Err(StateError::WrongLength { expected: atoms.len(), found: alphas.len() });
    }
    if k.len() != atoms.len() {
        return Err(StateError::WrongLength { expected: atoms.len(), found: k.len() });
    }
    if alphas.iter().any(|alpha| !same_lattice(alpha.lattice(), lattice)) {
        return Err(StateError::LatticeMismatch);
    }
    for (i, &a) in atoms.iter().enumerate() {
        if let Some(&b) = atoms[i + 1..].iter().find(|&&b| !lattice.is_orthogonal(a, b)) {
            return Err(StateError::NotOrthogonalFamily { a, b });
        }
    }
    if let Some(index) = atoms.iter().zip(alphas).position(|(&a, alpha)| !alpha.get(a).is_one()) {
        return Err(StateError::AlphaNotConcentrated { index });
    }
    if k.iter().map(|w| w.value()).sum::<Rational>() != Rational::one() {
        return Err(StateError::WeightsNotNormalized);
    }
    // Orthogonal atoms are nonzero (each carries mass 1 under its alpha)
    // and distinct, so distinct sub-families have distinct joins.
    let cs = lattice.generate_cs(atoms)?;
    let mut entries = Vec::new();
    for mask in 1u64..(1u64 << atoms.len()) {
        let members: Vec<usize> = (0..atoms.len()).filter(|i| mask >> i & 1 == 1).collect();
        let top = lattice.join_all(members.iter().map(|&i| atoms[i]));
        let mass: Rational = members.iter().map(|&i| k[i].value()).sum();
        if members.len() == 1 {
            let alpha = &alphas[members[0]];
            entries.extend(lattice.elements().map(|d| ((d, top), alpha.get(d).clone())));
        } else if mass.is_zero() {
            return Err(StateError::ZeroMassCondition {
                family: members.iter().map(|&i| atoms[i]).collect(),
            });
        } else {
            for d in lattice.elements() {
                let mixed: Rational = members
                    .iter()
                    .map(|&i| k[i].value() / &mass * alphas[i].get(d))
                    .sum();
                entries.push(((d, top), mixed));
            }
        }
    }
    ConditionalState::validate(lattice, cs, entries)
}
