use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::Serialize;

use qlogic::catalog::{self, CatalogError, CatalogKind};
use qlogic::io::{self, DataFile, LatticeFile, ObservableFile, SchemaError, Table};
use qlogic::rational::{format_approx, format_decimal, format_fraction};
use qlogic::{
    conditional_expectation, conditional_to_smap, ConditionalState, ConditionalSystem, Element, LatticeError,
    Observable, OrthomodularLattice, Rational, SMap, State,
};

use crate::describe::Describe;
use crate::report::Report;

/// Unreadable or malformed input; exit status 2.
#[derive(Debug)]
pub struct InputError(String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn schema(path: &Path, err: SchemaError) -> InputError {
    InputError(format!("{}: {err}", path.display()))
}

/// Number printing options.
pub struct Ctx {
    pub decimal: bool,
    pub approx: Option<usize>,
}

impl Ctx {
    fn num(&self, value: &Rational) -> Result<String, InputError> {
        if !self.decimal {
            return Ok(format_fraction(value));
        }
        match (format_decimal(value), self.approx) {
            (Ok(text), _) => Ok(text),
            (Err(_), Some(places)) => Ok(format_approx(value, places)),
            (Err(_), None) => Err(InputError(format!(
                "{} has no finite decimal expansion; pass --approx PLACES to round it",
                format_fraction(value)
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Lattice,
    Smap,
    Conditional,
    State,
    Observable,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), InputError> {
    let mut text = serde_json::to_string_pretty(value).expect("file schemas serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

const STAGES: [&str; 4] = ["partial order", "lattice", "ortholattice", "orthomodular law"];

/// Builds the lattice named by `spec` (a file, or a catalog name when no
/// such file exists), recording one check per structural stage. Returns
/// `None` when a stage fails.
fn load_lattice(report: &mut Report, spec: &str) -> Result<Option<Arc<OrthomodularLattice>>, InputError> {
    let path = Path::new(spec);
    let description: LatticeFile = if path.exists() {
        read_json(path)?
    } else {
        match CatalogKind::from_str(spec) {
            Ok(kind) => catalog::catalog_description(kind).map_err(|e| InputError(e.to_string()))?,
            Err(_) => return Err(InputError(format!("{spec}: no such file or catalog lattice"))),
        }
    };
    let (failed, witness) = match description.build() {
        Ok(l) => {
            for stage in STAGES {
                report.check(stage, None);
            }
            return Ok(Some(Arc::new(l)));
        }
        Err(err @ (LatticeError::Empty | LatticeError::DuplicateLabel(_) | LatticeError::UnknownLabel(_))) => {
            return Err(InputError(format!("{spec}: {err}")));
        }
        Err(err @ LatticeError::NotAPoset { .. }) => (0, err),
        Err(err @ (LatticeError::NotALattice { .. } | LatticeError::BoundMismatch { .. })) => (1, err),
        Err(err @ LatticeError::NotAnOrtholattice(_)) => (2, err),
        Err(err @ LatticeError::NotOrthomodular { .. }) => (3, err),
    };
    for stage in &STAGES[..failed] {
        report.check(*stage, None);
    }
    report.check(STAGES[failed], Some(witness.to_string()));
    Ok(None)
}

fn label(l: &OrthomodularLattice, text: &str) -> Result<Element, InputError> {
    l.element(text).ok_or_else(|| InputError(format!("unknown label `{text}`")))
}

/// Checks a conditional-state table axiom by axiom.
fn check_conditional(
    report: &mut Report,
    l: &Arc<OrthomodularLattice>,
    path: &Path,
    table: &Table,
    prefix: &str,
) -> Result<Option<ConditionalState>, InputError> {
    let d = Describe(l);
    let columns = io::table_columns(l, table).map_err(|e| schema(path, e))?;
    let entries = io::complete_conditional(l, &columns, io::table_entries(l, table).map_err(|e| schema(path, e))?);
    let cs = match ConditionalSystem::new(l, columns) {
        Ok(cs) => {
            report.check(format!("{prefix}conditional system"), None);
            cs
        }
        Err(err) => {
            report.check(format!("{prefix}conditional system"), Some(d.cs(&err)));
            return Ok(None);
        }
    };
    let audit = match ConditionalState::audit(l, cs.clone(), entries.clone()) {
        Ok(audit) => {
            report.check(format!("{prefix}complete table"), None);
            audit
        }
        Err(err) => {
            report.check(format!("{prefix}complete table"), Some(d.state(&err)));
            return Ok(None);
        }
    };
    let passed = audit.passed();
    for (name, outcome) in [("C1", &audit.c1), ("C2", &audit.c2), ("C3", &audit.c3)] {
        report.check(format!("{prefix}{name}"), outcome.as_ref().map(|e| d.state(e)));
    }
    Ok(passed.then(|| ConditionalState::validate(l, cs, entries).expect("audit passed")))
}

/// Checks an s-map table axiom by axiom.
fn check_smap(
    report: &mut Report,
    l: &Arc<OrthomodularLattice>,
    path: &Path,
    table: &Table,
    prefix: &str,
) -> Result<Option<SMap>, InputError> {
    let d = Describe(l);
    let entries = io::complete_smap(l, io::table_entries(l, table).map_err(|e| schema(path, e))?);
    let audit = match SMap::audit(l, entries.clone()) {
        Ok(audit) => {
            report.check(format!("{prefix}complete table"), None);
            audit
        }
        Err(err) => {
            report.check(format!("{prefix}complete table"), Some(d.smap(&err)));
            return Ok(None);
        }
    };
    let passed = audit.passed();
    for (name, outcome) in [("s1", &audit.s1), ("s2", &audit.s2), ("s3", &audit.s3)] {
        report.check(format!("{prefix}{name}"), outcome.as_ref().map(|e| d.smap(e)));
    }
    Ok(passed.then(|| SMap::validate(l, entries).expect("audit passed")))
}

fn check_state(
    report: &mut Report,
    l: &Arc<OrthomodularLattice>,
    path: &Path,
    values: &io::StateValues,
    prefix: &str,
) -> Result<Option<State>, InputError> {
    let dense = io::state_values(l, values).map_err(|e| schema(path, e))?;
    if let Some(missing) = dense.iter().position(Option::is_none) {
        report.check(format!("{prefix}state"), Some(format!("no value for {}", l.labels()[missing])));
        return Ok(None);
    }
    let dense = dense.into_iter().flatten().collect();
    match State::validate(l, dense) {
        Ok(m) => {
            report.check(format!("{prefix}state"), None);
            Ok(Some(m))
        }
        Err(err) => {
            report.check(format!("{prefix}state"), Some(Describe(l).state(&err)));
            Ok(None)
        }
    }
}

fn check_observable(
    report: &mut Report,
    l: &Arc<OrthomodularLattice>,
    path: &Path,
    file: &ObservableFile,
    prefix: &str,
) -> Result<Option<Observable>, InputError> {
    let points = io::observable_points(l, file).map_err(|e| schema(path, e))?;
    match Observable::new(l, points) {
        Ok(x) => {
            report.check(format!("{prefix}observable"), None);
            Ok(Some(x))
        }
        Err(err) => {
            report.check(format!("{prefix}observable"), Some(Describe(l).observable(&err)));
            Ok(None)
        }
    }
}

/// An s-map read directly or through its conditional state.
fn load_smap(report: &mut Report, l: &Arc<OrthomodularLattice>, path: &Path) -> Result<Option<SMap>, InputError> {
    match read_json::<DataFile>(path)? {
        DataFile::Smap { table } => check_smap(report, l, path, &table, ""),
        DataFile::ConditionalState { table } => {
            let Some(f) = check_conditional(report, l, path, &table, "")? else { return Ok(None) };
            let converted = conditional_to_smap(&f);
            report.check("conversion", converted.as_ref().err().map(|e| Describe(l).smap(e)));
            Ok(converted.ok())
        }
        DataFile::State { .. } => Err(InputError(format!("{}: expected an s-map or conditional state", path.display()))),
    }
}

/// A conditional state read directly or through its s-map.
fn load_conditional(
    report: &mut Report,
    l: &Arc<OrthomodularLattice>,
    path: &Path,
) -> Result<Option<ConditionalState>, InputError> {
    match read_json::<DataFile>(path)? {
        DataFile::ConditionalState { table } => check_conditional(report, l, path, &table, ""),
        DataFile::Smap { table } => {
            let Some(p) = check_smap(report, l, path, &table, "")? else { return Ok(None) };
            let converted = p.to_conditional();
            report.check("conversion", converted.as_ref().err().map(|e| Describe(l).smap(e)));
            Ok(converted.ok())
        }
        DataFile::State { .. } => {
            Err(InputError(format!("{}: expected a conditional state or s-map", path.display())))
        }
    }
}

pub fn validate(lattice: &str, files: &[PathBuf]) -> Result<Report, InputError> {
    let mut report = Report::new("validate");
    let Some(l) = load_lattice(&mut report, lattice)? else { return Ok(report) };
    for path in files {
        let prefix = format!("{}: ", path.display());
        let value: serde_json::Value = read_json(path)?;
        if value.is_array() {
            let file: ObservableFile =
                serde_json::from_value(value).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            check_observable(&mut report, &l, path, &file, &prefix)?;
            continue;
        }
        match serde_json::from_value(value).map_err(|e| InputError(format!("{}: {e}", path.display())))? {
            DataFile::State { values } => {
                check_state(&mut report, &l, path, &values, &prefix)?;
            }
            DataFile::ConditionalState { table } => {
                check_conditional(&mut report, &l, path, &table, &prefix)?;
            }
            DataFile::Smap { table } => {
                check_smap(&mut report, &l, path, &table, &prefix)?;
            }
        }
    }
    Ok(report)
}

fn smap_values(ctx: &Ctx, report: &mut Report, p: &SMap) -> Result<(), InputError> {
    let l = p.lattice();
    for ((a, b), value) in p.entries() {
        report.value(format!("p({}, {})", l.label(a), l.label(b)), ctx.num(value)?);
    }
    Ok(())
}

fn conditional_values(ctx: &Ctx, report: &mut Report, f: &ConditionalState) -> Result<(), InputError> {
    let l = f.lattice();
    for ((a, b), value) in f.entries() {
        report.value(format!("f({}, {})", l.label(a), l.label(b)), ctx.num(value)?);
    }
    Ok(())
}

pub fn convert(ctx: &Ctx, lattice: &str, path: &Path, output: &Path) -> Result<Report, InputError> {
    let mut report = Report::new("convert");
    let Some(l) = load_lattice(&mut report, lattice)? else { return Ok(report) };
    let d = Describe(&l);
    match read_json::<DataFile>(path)? {
        DataFile::Smap { table } => {
            let Some(p) = check_smap(&mut report, &l, path, &table, "")? else { return Ok(report) };
            let f = match p.to_conditional() {
                Ok(f) => f,
                Err(err) => {
                    report.check("conversion", Some(d.smap(&err)));
                    return Ok(report);
                }
            };
            report.check("conversion", None);
            let back = conditional_to_smap(&f);
            let witness = match &back {
                Ok(q) if *q == p => None,
                Ok(_) => Some("re-converted s-map differs".into()),
                Err(err) => Some(d.smap(err)),
            };
            report.check("round trip", witness);
            write_json(output, &io::conditional_file(&f))?;
            conditional_values(ctx, &mut report, &f)?;
        }
        DataFile::ConditionalState { table } => {
            let Some(f) = check_conditional(&mut report, &l, path, &table, "")? else { return Ok(report) };
            let p = match conditional_to_smap(&f) {
                Ok(p) => p,
                Err(err) => {
                    report.check("conversion", Some(d.smap(&err)));
                    return Ok(report);
                }
            };
            report.check("conversion", None);
            let witness = match p.to_conditional() {
                Ok(back) => back
                    .entries()
                    .find(|&((a, b), value)| f.get(a, b) != Some(value))
                    .map(|((a, b), _)| format!("f({}, {}) changes", l.label(a), l.label(b))),
                Err(err) => Some(d.smap(&err)),
            };
            report.check("round trip", witness);
            write_json(output, &io::smap_file(&p))?;
            smap_values(ctx, &mut report, &p)?;
        }
        DataFile::State { .. } => {
            return Err(InputError(format!("{}: expected an s-map or conditional state", path.display())));
        }
    }
    report.outputs.push(output.display().to_string());
    Ok(report)
}

pub fn indep(ctx: &Ctx, lattice: &str, path: &Path, pair: Option<(&str, &str)>) -> Result<Report, InputError> {
    let mut report = Report::new("indep");
    let Some(l) = load_lattice(&mut report, lattice)? else { return Ok(report) };
    let Some(p) = load_smap(&mut report, &l, path)? else { return Ok(report) };
    match pair {
        Some((a_text, b_text)) => {
            let (a, b) = (label(&l, a_text)?, label(&l, b_text)?);
            report.verdict(format!("{a_text} independent of {b_text}"), p.is_independent_product(a, b));
            report.value(format!("p({a_text}, {b_text})"), ctx.num(p.get(a, b))?);
            report.value(format!("p({a_text}, {a_text}) p({b_text}, {b_text})"), ctx.num(&(p.get(a, a) * p.get(b, b)))?);
        }
        None => {
            let pairs = p.scan_asymmetric_pairs();
            report.value("asymmetric pairs", pairs.len().to_string());
            for (a, b) in pairs {
                report.verdict(format!("{} independent of {} but not conversely", l.label(a), l.label(b)), true);
            }
        }
    }
    Ok(report)
}

pub fn condexp(
    ctx: &Ctx,
    lattice: &str,
    cond: &Path,
    observable: &Path,
    subalgebra: &str,
    output: Option<&Path>,
) -> Result<Report, InputError> {
    let mut report = Report::new("condexp");
    let Some(l) = load_lattice(&mut report, lattice)? else { return Ok(report) };
    let d = label(&l, subalgebra)?;
    let file: ObservableFile = read_json(observable)?;
    let Some(f) = load_conditional(&mut report, &l, cond)? else { return Ok(report) };
    let Some(x) = check_observable(&mut report, &l, observable, &file, "")? else { return Ok(report) };
    let z = match conditional_expectation(&f, &x, &l.boolean_subalgebra(d)) {
        Ok(z) => z,
        Err(err) => {
            report.check("conditional expectation", Some(Describe(&l).observable(&err)));
            return Ok(report);
        }
    };
    report.check("conditional expectation", None);
    for entry in &z.ledger {
        let b = l.label(entry.condition);
        let witness = (entry.of_x != entry.of_z).then(|| format!("{} vs {}", entry.of_x, entry.of_z));
        report.check(format!("f(x, {b}) = f(z, {b})"), witness);
    }
    for (value, event) in z.observable.points() {
        report.value(format!("z({})", ctx.num(value)?), l.label(*event).to_string());
    }
    for entry in &z.ledger {
        let b = l.label(entry.condition);
        report.value(format!("f(x, {b})"), ctx.num(&entry.of_x)?);
        report.value(format!("f(z, {b})"), ctx.num(&entry.of_z)?);
    }
    if let Some(path) = output {
        write_json(path, &io::observable_file(&z.observable))?;
        report.outputs.push(path.display().to_string());
    }
    Ok(report)
}

fn catalog_kind(kind: &str, n: Option<usize>) -> Result<CatalogKind, InputError> {
    let spec = match (kind, n) {
        ("mo" | "boolean", Some(n)) => format!("{kind}({n})"),
        ("mo" | "boolean", None) => return Err(InputError(format!("--kind {kind} needs --n"))),
        (_, _) => kind.to_string(),
    };
    CatalogKind::from_str(&spec).map_err(|e| InputError(e.to_string()))
}

fn generator_error(err: CatalogError) -> InputError {
    InputError(err.to_string())
}

pub fn generate(
    kind: &str,
    n: Option<usize>,
    emit: &[Emit],
    out_dir: &Path,
    seed: u64,
) -> Result<Report, InputError> {
    let mut report = Report::new("gen");
    let kind = catalog_kind(kind, n)?;
    fs::create_dir_all(out_dir).map_err(|e| InputError(format!("{}: {e}", out_dir.display())))?;
    let target = |name: &str| out_dir.join(format!("{name}.json"));
    if emit.contains(&Emit::Lattice) {
        let path = target("lattice");
        write_json(&path, &catalog::catalog_description(kind).map_err(generator_error)?)?;
        report.outputs.push(path.display().to_string());
    }
    if emit.iter().all(|&e| e == Emit::Lattice) {
        return Ok(report);
    }
    let Some(l) = load_lattice(&mut report, &kind.to_string())? else { return Ok(report) };
    for &item in emit {
        let path = match item {
            Emit::Lattice => continue,
            Emit::Smap => {
                let p = catalog::random_smap(&l, seed).map_err(generator_error)?;
                let path = target("smap");
                write_json(&path, &io::smap_file(&p))?;
                path
            }
            Emit::Conditional => {
                let f = catalog::random_conditional_state(&l, seed).map_err(generator_error)?;
                let path = target("conditional");
                write_json(&path, &io::conditional_file(&f))?;
                path
            }
            Emit::State => {
                let p = catalog::random_smap(&l, seed).map_err(generator_error)?;
                let path = target("state");
                write_json(&path, &io::state_file(&p.nu_state()))?;
                path
            }
            Emit::Observable => {
                let path = target("observable");
                write_json(&path, &io::observable_file(&catalog::random_observable(&l, seed)))?;
                path
            }
        };
        report.outputs.push(path.display().to_string());
    }
    Ok(report)
}
