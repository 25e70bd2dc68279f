//! Finite orthomodular lattices as event structures, with exact rational
//! states, conditional states, s-maps (simultaneous-measurement maps),
//! the asymmetric independence relation, and finite observables.
//!
//! ```
//! use qlogic::fixtures;
//!
//! let l = fixtures::lattice();
//! let p = fixtures::smap(&l);
//! let (a, b) = (l.element("a").unwrap(), l.element("b").unwrap());
//! // a is independent of b, but not the other way round.
//! assert!(p.is_independent_product(a, b));
//! assert!(!p.is_independent_product(b, a));
//! ```

pub mod catalog;
pub mod fixtures;
pub mod io;
pub mod lattice;
pub mod observables;
pub mod rational;
pub mod smap;
pub mod states;

pub use lattice::{
    BooleanSubalgebra, ConditionalSystem, CsError, Element, LatticeDescription, LatticeError, OrthomodularLattice,
};
pub use observables::{
    conditional_expectation, distribution_function, expectation, joint_distribution, ConditionalExpectation,
    JointDistribution, Observable, ObservableError,
};
pub use rational::{Probability, Rational};
pub use smap::{conditional_to_smap, smap_to_conditional, SMap, SMapError};
pub use states::{build_conditional_state, validate_state, ConditionalState, State, StateError};
