//! JSON file schemas for lattices, states, conditional states, s-maps and
//! observables.
//!
//! Numbers are strings holding either a fraction `"p/q"` or a finite decimal
//! (read exactly). Tables are nested objects keyed first by the element
//! label and then by the condition (or second-argument) label:
//!
//! ```json
//! { "kind": "smap", "table": { "a": { "a": "0.4", "b": "0.12" } } }
//! ```
//!
//! For a conditional state the set of column labels is the conditional
//! system. Rows and columns for the bounds may be left out; see
//! [`complete_conditional`] and [`complete_smap`]. Unknown fields are
//! rejected everywhere.

use std::collections::BTreeMap;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{ConditionalSystem, Element, OrthomodularLattice};
use crate::observables::Observable;
use crate::rational::{format_fraction, parse_rational, Rational, RationalError};
use crate::smap::SMap;
use crate::states::{ConditionalState, State};

pub use crate::lattice::LatticeDescription as LatticeFile;

/// Label-keyed table of rational strings.
pub type Table = IndexMap<String, IndexMap<String, String>>;

/// Label-keyed state values.
pub type StateValues = IndexMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataFile {
    State { values: StateValues },
    ConditionalState { table: Table },
    Smap { table: Table },
}

/// A number in an observable file: a string, or a JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberText {
    Text(String),
    Integer(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservablePoint {
    pub value: NumberText,
    pub element: String,
}

pub type ObservableFile = Vec<ObservablePoint>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("bad number for {location}: {source}")]
    BadNumber { location: String, source: RationalError },
}

fn element(l: &OrthomodularLattice, label: &str) -> Result<Element, SchemaError> {
    l.element(label).ok_or_else(|| SchemaError::UnknownLabel(label.to_string()))
}

fn number(text: &str, location: impl FnOnce() -> String) -> Result<Rational, SchemaError> {
    parse_rational(text).map_err(|source| SchemaError::BadNumber { location: location(), source })
}

/// Dense state values in element-id order; missing labels stay `None`.
pub fn state_values(l: &OrthomodularLattice, values: &StateValues) -> Result<Vec<Option<Rational>>, SchemaError> {
    let mut dense = vec![None; l.len()];
    for (label, text) in values {
        dense[element(l, label)?.index()] = Some(number(text, || label.clone())?);
    }
    Ok(dense)
}

/// One table cell: `((row, column), value)`.
pub type Cell = ((Element, Element), Rational);

pub fn table_entries(l: &OrthomodularLattice, table: &Table) -> Result<Vec<Cell>, SchemaError> {
    let mut entries = Vec::new();
    for (row, cells) in table {
        let r = element(l, row)?;
        for (column, text) in cells {
            let c = element(l, column)?;
            entries.push(((r, c), number(text, || format!("[{row}, {column}]"))?));
        }
    }
    Ok(entries)
}

/// Column labels of a table, in first-seen order.
pub fn table_columns(l: &OrthomodularLattice, table: &Table) -> Result<Vec<Element>, SchemaError> {
    let mut columns = Vec::new();
    for cells in table.values() {
        for column in cells.keys() {
            let c = element(l, column)?;
            if !columns.contains(&c) {
                columns.push(c);
            }
        }
    }
    Ok(columns)
}

pub fn observable_points(l: &OrthomodularLattice, file: &ObservableFile) -> Result<Vec<(Rational, Element)>, SchemaError> {
    file.iter()
        .map(|point| {
            let value = match &point.value {
                NumberText::Text(text) => number(text, || format!("value of {}", point.element))?,
                NumberText::Integer(i) => crate::rational::int(*i),
            };
            Ok((value, element(l, &point.element)?))
        })
        .collect()
}

type Entries = BTreeMap<(Element, Element), Rational>;

/// Fills the rows every conditional state shares, `f(0, c) = 0` and
/// `f(1, c) = 1`, wherever the table leaves them out.
pub fn complete_conditional(
    l: &OrthomodularLattice,
    columns: &[Element],
    entries: impl IntoIterator<Item = Cell>,
) -> Entries {
    let mut out: Entries = entries.into_iter().collect();
    for &c in columns {
        out.entry((l.zero(), c)).or_insert_with(Rational::zero);
        out.entry((l.one(), c)).or_insert_with(Rational::one);
    }
    out
}

/// Fills omitted bound entries of an s-map table: `p(x, 0) = p(0, x) = 0`,
/// `p(1, 1) = 1`, and `p(x, 1) = p(1, x) = p(x, x)` where the diagonal is given.
pub fn complete_smap(l: &OrthomodularLattice, entries: impl IntoIterator<Item = Cell>) -> Entries {
    let mut out: Entries = entries.into_iter().collect();
    let one = l.one();
    out.entry((one, one)).or_insert_with(Rational::one);
    for x in l.elements() {
        out.entry((x, l.zero())).or_insert_with(Rational::zero);
        out.entry((l.zero(), x)).or_insert_with(Rational::zero);
        if let Some(diagonal) = out.get(&(x, x)).cloned() {
            out.entry((x, one)).or_insert_with(|| diagonal.clone());
            out.entry((one, x)).or_insert(diagonal);
        }
    }
    out
}

fn render(l: &OrthomodularLattice, rows: impl Iterator<Item = Cell>) -> Table {
    let mut table = Table::new();
    for ((a, b), value) in rows {
        table
            .entry(l.label(a).to_string())
            .or_default()
            .insert(l.label(b).to_string(), format_fraction(&value));
    }
    table
}

pub fn smap_file(p: &SMap) -> DataFile {
    DataFile::Smap { table: render(p.lattice(), p.entries().map(|(k, v)| (k, v.clone()))) }
}

pub fn conditional_file(f: &ConditionalState) -> DataFile {
    DataFile::ConditionalState { table: render(f.lattice(), f.entries().map(|(k, v)| (k, v.clone()))) }
}

pub fn state_file(m: &State) -> DataFile {
    let l = m.lattice();
    DataFile::State {
        values: l.elements().map(|e| (l.label(e).to_string(), format_fraction(m.get(e)))).collect(),
    }
}

pub fn observable_file(x: &Observable) -> ObservableFile {
    let l = x.lattice();
    x.points()
        .iter()
        .map(|(v, e)| ObservablePoint {
            value: NumberText::Text(format_fraction(v)),
            element: l.label(*e).to_string(),
        })
        .collect()
}

/// Conditional system named by the column labels of a table. Its closure
/// is checked by [`ConditionalSystem::new`].
pub fn table_conditional_system(
    l: &Arc<OrthomodularLattice>,
    table: &Table,
) -> Result<Result<ConditionalSystem, crate::lattice::CsError>, SchemaError> {
    Ok(ConditionalSystem::new(l, table_columns(l, table)?))
}
