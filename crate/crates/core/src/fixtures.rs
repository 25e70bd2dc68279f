//! The six-element lattice `{0, a, a', b, b', 1}` with its reference
//! conditional-state and s-map tables, entered digit for digit.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::lattice::{ConditionalSystem, Element, OrthomodularLattice};
use crate::rational::{parse_rational, Rational};
use crate::smap::SMap;
use crate::states::{ConditionalState, State};

pub const LABELS: [&str; 6] = ["0", "a", "a'", "b", "b'", "1"];

/// Rows `a, a', b, b'`; columns `a, a', b, b', 1`.
pub const CONDITIONAL_TABLE: [(&str, [&str; 5]); 4] = [
    ("a", ["1", "0", "0.4", "0.4", "0.4"]),
    ("a'", ["0", "1", "0.6", "0.6", "0.6"]),
    ("b", ["0.2", "11/30", "1", "0", "0.3"]),
    ("b'", ["0.8", "19/30", "0", "1", "0.7"]),
];

/// Rows `a, a', b, b'`; columns `a, a', b, b'`.
pub const SMAP_TABLE: [(&str, [&str; 4]); 4] = [
    ("a", ["0.4", "0", "0.12", "0.28"]),
    ("a'", ["0", "0.6", "0.18", "0.42"]),
    ("b", ["0.08", "0.22", "0.3", "0"]),
    ("b'", ["0.32", "0.38", "0", "0.7"]),
];

const COLUMNS: [&str; 5] = ["a", "a'", "b", "b'", "1"];

fn num(text: &str) -> Rational {
    parse_rational(text).expect("fixture literal")
}

pub fn lattice() -> Arc<OrthomodularLattice> {
    let mut leq = Vec::new();
    for x in ["a", "a'", "b", "b'"] {
        leq.push(("0", x));
        leq.push((x, "1"));
    }
    let ortho = [("0", "1"), ("a", "a'"), ("b", "b'")];
    Arc::new(OrthomodularLattice::build(&LABELS, &leq, &ortho).expect("MO2 is orthomodular"))
}

/// All 30 entries of `f` on `L x (L - {0})`, including the forced rows
/// `f(0, .) = 0` and `f(1, .) = 1`.
pub fn conditional_entries(l: &OrthomodularLattice) -> BTreeMap<(Element, Element), Rational> {
    let e = |s: &str| l.element(s).expect("fixture label");
    let mut entries = BTreeMap::new();
    for column in COLUMNS {
        entries.insert((l.zero(), e(column)), num("0"));
        entries.insert((l.one(), e(column)), num("1"));
    }
    for (row, values) in CONDITIONAL_TABLE {
        for (column, value) in COLUMNS.iter().zip(values) {
            entries.insert((e(row), e(column)), num(value));
        }
    }
    entries
}

pub fn conditional_state(l: &Arc<OrthomodularLattice>) -> ConditionalState {
    ConditionalState::validate(l, ConditionalSystem::all_nonzero(l), conditional_entries(l))
        .expect("reference table satisfies C1-C3")
}

/// The printed s-map table completed on the bounds: `p(x, 0) = p(0, x) = 0`
/// and `p(x, 1) = p(1, x) = p(x, x)`.
pub fn smap_entries(l: &OrthomodularLattice) -> BTreeMap<(Element, Element), Rational> {
    let e = |s: &str| l.element(s).expect("fixture label");
    let mut entries = BTreeMap::new();
    for x in l.elements() {
        entries.insert((x, l.zero()), num("0"));
        entries.insert((l.zero(), x), num("0"));
    }
    entries.insert((l.one(), l.one()), num("1"));
    for (row, values) in SMAP_TABLE {
        for (column, value) in COLUMNS.iter().zip(values) {
            entries.insert((e(row), e(column)), num(value));
        }
        let diagonal = num(values[COLUMNS.iter().position(|c| *c == row).unwrap()]);
        entries.insert((e(row), l.one()), diagonal.clone());
        entries.insert((l.one(), e(row)), diagonal);
    }
    entries
}

pub fn smap(l: &Arc<OrthomodularLattice>) -> SMap {
    SMap::validate(l, smap_entries(l)).expect("reference table satisfies s1-s3")
}

/// The diagonal state `a -> 0.4, a' -> 0.6, b -> 0.3, b' -> 0.7`.
pub fn nu_state(l: &Arc<OrthomodularLattice>) -> State {
    let values = ["0", "0.4", "0.6", "0.3", "0.7", "1"].map(num).to_vec();
    State::validate(l, values).expect("diagonal is a state")
}
