//! Error witnesses rendered with element labels instead of ids.

use qlogic::{CsError, Element, ObservableError, OrthomodularLattice, SMapError, StateError};

pub struct Describe<'a>(pub &'a OrthomodularLattice);

impl Describe<'_> {
    fn l(&self, e: Element) -> &str {
        self.0.label(e)
    }

    fn family(&self, items: &[Element]) -> String {
        let labels: Vec<&str> = items.iter().map(|&e| self.l(e)).collect();
        format!("{{{}}}", labels.join(", "))
    }

    pub fn cs(&self, err: &CsError) -> String {
        match err {
            CsError::Empty => err.to_string(),
            CsError::ZeroGenerated { from: None } => "contains the zero element".into(),
            CsError::ZeroGenerated { from: Some((a, b)) } => {
                format!("closure produces 0 from ({}, {})", self.l(*a), self.l(*b))
            }
            CsError::NotJoinClosed { a, b } => format!("{} v {} is missing", self.l(*a), self.l(*b)),
            CsError::NotRelativeComplementClosed { a, b } => {
                format!("{} < {} but {}' ^ {} is missing", self.l(*a), self.l(*b), self.l(*a), self.l(*b))
            }
        }
    }

    pub fn state(&self, err: &StateError) -> String {
        match err {
            StateError::OutOfRange { element } => format!("value at {} is outside [0, 1]", self.l(*element)),
            StateError::NotAdditive { a, b } => {
                format!("not additive on the orthogonal pair ({}, {})", self.l(*a), self.l(*b))
            }
            StateError::MissingEntry { element, condition } => {
                format!("entry f({}, {}) is missing", self.l(*element), self.l(*condition))
            }
            StateError::ConditionOutsideCs(c) => format!("condition {} is not in the conditional system", self.l(*c)),
            StateError::ConditionalSystem(e) => self.cs(e),
            StateError::C1Violation { condition, defect } => {
                format!("f(., {}) is not a state: {}", self.l(*condition), self.state(defect))
            }
            StateError::C2Violation { condition } => {
                let c = self.l(*condition);
                format!("f({c}, {c}) != 1")
            }
            StateError::C3Violation { element, family } => {
                format!("f({}, .) does not decompose over {}", self.l(*element), self.family(family))
            }
            StateError::NotOrthogonalFamily { a, b } => format!("{} and {} are not orthogonal", self.l(*a), self.l(*b)),
            StateError::ZeroMassCondition { family } => {
                format!("sub-family {} carries zero total weight", self.family(family))
            }
            StateError::PreconditionFca { c, a } => {
                format!("f({}, {}) != 1, independence is not defined", self.l(*c), self.l(*a))
            }
            StateError::LatticeMismatch
            | StateError::WrongLength { .. }
            | StateError::NotNormalized
            | StateError::AlphaNotConcentrated { .. }
            | StateError::WeightsNotNormalized => err.to_string(),
        }
    }

    pub fn smap(&self, err: &SMapError) -> String {
        match err {
            SMapError::MissingEntry { a, b } => format!("entry p({}, {}) is missing", self.l(*a), self.l(*b)),
            SMapError::OutOfRange { a, b } => format!("p({}, {}) is outside [0, 1]", self.l(*a), self.l(*b)),
            SMapError::S1Violation => "p(1, 1) != 1".into(),
            SMapError::S2Violation { a, b } => {
                format!("{} and {} are orthogonal but p({}, {}) != 0", self.l(*a), self.l(*b), self.l(*a), self.l(*b))
            }
            SMapError::S3Violation { a, b, c, side } => format!(
                "additivity in the {side} fails for the orthogonal pair ({}, {}) at {}",
                self.l(*a),
                self.l(*b),
                self.l(*c)
            ),
            SMapError::SupportNotCs(e) => format!("support of the diagonal is not a conditional system: {}", self.cs(e)),
            SMapError::DomainTooSmall(e) => {
                format!("{} has nonzero mass but lies outside the conditional system", self.l(*e))
            }
            SMapError::State(e) => self.state(e),
        }
    }

    pub fn observable(&self, err: &ObservableError) -> String {
        match err {
            ObservableError::ConditionOutsideCs(e) => format!("{} is not in the conditional system", self.l(*e)),
            ObservableError::AtomOutsideCs(e) => {
                format!("atom {} of the subalgebra is not in the conditional system", self.l(*e))
            }
            ObservableError::NotInSubalgebra(e) => format!("event {} is not in the subalgebra", self.l(*e)),
            ObservableError::NoSolution { witness, of_x, of_z } => {
                format!("expectations differ under the condition {}: {of_x} vs {of_z}", self.l(*witness))
            }
            ObservableError::NotAPartition(e) => format!("point events do not partition one: {}", self.partition(e)),
            ObservableError::State(e) => self.state(e),
            ObservableError::DuplicateValue(_) | ObservableError::TooManyValues | ObservableError::LatticeMismatch => {
                err.to_string()
            }
        }
    }

    fn partition(&self, err: &qlogic::lattice::PartitionError) -> String {
        use qlogic::lattice::PartitionError;
        match err {
            PartitionError::NotOrthogonal { a, b } => format!("{} and {} are not orthogonal", self.l(*a), self.l(*b)),
            PartitionError::NotCovering(e) => format!("the events join to {}, not 1", self.l(*e)),
        }
    }
}
