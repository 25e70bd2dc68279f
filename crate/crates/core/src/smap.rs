//! s-maps: two-argument probabilities of simultaneous measurement, and their
//! conversions to and from conditional states.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{ConditionalSystem, CsError, Element, OrthomodularLattice};
use crate::rational::{in_unit_interval, Rational};
use crate::states::{ConditionalState, State, StateError};

/// Which of the two additivity equations of s3 failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum S3Side {
    /// `p(a v b, c) = p(a, c) + p(b, c)`
    First,
    /// `p(c, a v b) = p(c, a) + p(c, b)`
    Second,
}

impl fmt::Display for S3Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            S3Side::First => "first argument",
            S3Side::Second => "second argument",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SMapError {
    #[error("entry p({a}, {b}) is missing")]
    MissingEntry { a: Element, b: Element },
    #[error("p({a}, {b}) is outside [0, 1]")]
    OutOfRange { a: Element, b: Element },
    #[error("s1: p(1, 1) != 1")]
    S1Violation,
    #[error("s2: {a} and {b} are orthogonal but p({a}, {b}) != 0")]
    S2Violation { a: Element, b: Element },
    #[error("s3: additivity in the {side} fails for the orthogonal pair ({a}, {b}) at {c}")]
    S3Violation { a: Element, b: Element, c: Element, side: S3Side },
    #[error("support of the diagonal is not a conditional system: {0}")]
    SupportNotCs(CsError),
    #[error("{0} has f({0}, 1) != 0 but lies outside the conditional system")]
    DomainTooSmall(Element),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SMapAudit {
    pub s1: Option<SMapError>,
    pub s2: Option<SMapError>,
    pub s3: Option<SMapError>,
}

impl SMapAudit {
    pub fn passed(&self) -> bool {
        self.s1.is_none() && self.s2.is_none() && self.s3.is_none()
    }

    pub fn first_error(self) -> Option<SMapError> {
        self.s1.or(self.s2).or(self.s3)
    }
}

/// `p: L x L -> [0, 1]` satisfying s1-s3, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SMap {
    lattice: Arc<OrthomodularLattice>,
    table: Vec<Rational>,
}

impl SMap {
    fn assemble(
        lattice: &Arc<OrthomodularLattice>,
        entries: impl IntoIterator<Item = ((Element, Element), Rational)>,
    ) -> Result<Self, SMapError> {
        let n = lattice.len();
        let mut table: Vec<Option<Rational>> = vec![None; n * n];
        for ((a, b), value) in entries {
            table[a.index() * n + b.index()] = Some(value);
        }
        let mut dense = Vec::with_capacity(n * n);
        for (i, slot) in table.into_iter().enumerate() {
            let (a, b) = (lattice.element_at(i / n).unwrap(), lattice.element_at(i % n).unwrap());
            let value = slot.ok_or(SMapError::MissingEntry { a, b })?;
            if !in_unit_interval(&value) {
                return Err(SMapError::OutOfRange { a, b });
            }
            dense.push(value);
        }
        Ok(Self { lattice: Arc::clone(lattice), table: dense })
    }

    /// Checks s1, s2 and s3 independently, keeping the first witness of each.
    pub fn audit(
        lattice: &Arc<OrthomodularLattice>,
        entries: impl IntoIterator<Item = ((Element, Element), Rational)>,
    ) -> Result<SMapAudit, SMapError> {
        Ok(Self::assemble(lattice, entries)?.audit_self())
    }

    pub fn validate(
        lattice: &Arc<OrthomodularLattice>,
        entries: impl IntoIterator<Item = ((Element, Element), Rational)>,
    ) -> Result<Self, SMapError> {
        let candidate = Self::assemble(lattice, entries)?;
        match candidate.audit_self().first_error() {
            Some(err) => Err(err),
            None => Ok(candidate),
        }
    }

    fn audit_self(&self) -> SMapAudit {
        let l = &*self.lattice;
        let s1 = (!self.get(l.one(), l.one()).is_one()).then_some(SMapError::S1Violation);
        let orthogonal_pairs: Vec<(Element, Element)> = l
            .elements()
            .flat_map(|a| l.elements().map(move |b| (a, b)))
            .filter(|&(a, b)| l.is_orthogonal(a, b))
            .collect();
        let s2 = orthogonal_pairs
            .iter()
            .find(|&&(a, b)| !self.get(a, b).is_zero())
            .map(|&(a, b)| SMapError::S2Violation { a, b });
        let s3 = orthogonal_pairs.iter().find_map(|&(a, b)| {
            let ab = l.join(a, b);
            l.elements().find_map(|c| {
                if *self.get(ab, c) != self.get(a, c) + self.get(b, c) {
                    Some(SMapError::S3Violation { a, b, c, side: S3Side::First })
                } else if *self.get(c, ab) != self.get(c, a) + self.get(c, b) {
                    Some(SMapError::S3Violation { a, b, c, side: S3Side::Second })
                } else {
                    None
                }
            })
        });
        SMapAudit { s1, s2, s3 }
    }

    pub fn lattice(&self) -> &Arc<OrthomodularLattice> {
        &self.lattice
    }

    pub fn get(&self, a: Element, b: Element) -> &Rational {
        &self.table[a.index() * self.lattice.len() + b.index()]
    }

    pub fn entries(&self) -> impl Iterator<Item = ((Element, Element), &Rational)> + '_ {
        let l = &*self.lattice;
        l.elements()
            .flat_map(move |a| l.elements().map(move |b| ((a, b), self.get(a, b))))
    }

    /// The diagonal `ν(b) = p(b, b)`, which is always a state.
    pub fn nu_state(&self) -> State {
        let values = self.lattice.elements().map(|b| self.get(b, b).clone()).collect();
        State::validate(&self.lattice, values).expect("diagonal of an s-map is a state")
    }

    /// `{b : p(b, b) != 0}`.
    pub fn support(&self) -> Vec<Element> {
        self.lattice.elements().filter(|&b| !self.get(b, b).is_zero()).collect()
    }

    /// `f_p(a, b) = p(a, b) / p(b, b)` on the support of the diagonal, which
    /// must itself be a conditional system.
    pub fn to_conditional(&self) -> Result<ConditionalState, SMapError> {
        let cs = ConditionalSystem::new(&self.lattice, self.support()).map_err(SMapError::SupportNotCs)?;
        let l = &*self.lattice;
        let entries: Vec<_> = cs
            .members()
            .iter()
            .flat_map(|&b| l.elements().map(move |a| ((a, b), self.get(a, b) / self.get(b, b))))
            .collect();
        Ok(ConditionalState::validate(&self.lattice, cs, entries)?)
    }

    /// Product form of independence at the top condition:
    /// `p(b, a) = p(a, a) p(b, b)`.
    pub fn is_independent_product(&self, b: Element, a: Element) -> bool {
        *self.get(b, a) == self.get(a, a) * self.get(b, b)
    }

    /// Ordered pairs `(a, b)` with `a` independent of `b` but not `b` of `a`,
    /// in id order.
    pub fn scan_asymmetric_pairs(&self) -> Vec<(Element, Element)> {
        let l = &*self.lattice;
        l.elements()
            .flat_map(|a| l.elements().map(move |b| (a, b)))
            .filter(|&(a, b)| self.is_independent_product(a, b) && !self.is_independent_product(b, a))
            .collect()
    }
}

/// Free-function form of [`SMap::to_conditional`].
pub fn smap_to_conditional(p: &SMap) -> Result<ConditionalState, SMapError> {
    p.to_conditional()
}

/// `p_f(a, b) = f(a, b) f(b, 1)` when `f(b, 1) != 0`, else `0`.
pub fn conditional_to_smap(f: &ConditionalState) -> Result<SMap, SMapError> {
    let l = f.lattice();
    let one = l.one();
    if !f.cs().contains(one) {
        return Err(SMapError::DomainTooSmall(one));
    }
    let mass = |b: Element| f.get(b, one).expect("1 is a condition");
    if let Some(b) = l.elements().find(|&b| !mass(b).is_zero() && !f.cs().contains(b)) {
        return Err(SMapError::DomainTooSmall(b));
    }
    let entries: Vec<_> = l
        .elements()
        .flat_map(|a| {
            l.elements().map(move |b| {
                let value = if mass(b).is_zero() {
                    Rational::zero()
                } else {
                    f.get(a, b).expect("checked above") * mass(b)
                };
                ((a, b), value)
            })
        })
        .collect();
    SMap::validate(l, entries)
}
