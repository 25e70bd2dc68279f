//! Built-in lattices and seeded generators of valid states, conditional
//! states, s-maps and observables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lattice::{ConditionalSystem, Element, LatticeDescription, LatticeError, OrthomodularLattice};
use crate::observables::Observable;
use crate::rational::{ratio, Rational};
use crate::smap::{conditional_to_smap, SMap, SMapError};
use crate::states::{build_conditional_state, ConditionalState, State, StateError};

/// Denominator of randomly drawn weights.
pub const DEFAULT_DENOMINATOR: i64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogKind {
    /// Power set of `n` atoms.
    Boolean(usize),
    /// Horizontal sum of `n` four-element Boolean blocks.
    Mo(usize),
    /// The hexagon; an ortholattice that is not orthomodular.
    O6,
    Chain2,
}

impl fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKind::Boolean(n) => write!(f, "boolean({n})"),
            CatalogKind::Mo(n) => write!(f, "mo({n})"),
            CatalogKind::O6 => f.write_str("o6"),
            CatalogKind::Chain2 => f.write_str("chain2"),
        }
    }
}

impl FromStr for CatalogKind {
    type Err = CatalogError;

    /// Accepts `boolean(3)`, `mo(2)`, `o6`, `chain2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalogError::BadSpec(s.to_string());
        let s = s.trim();
        match s {
            "o6" => return Ok(CatalogKind::O6),
            "chain2" => return Ok(CatalogKind::Chain2),
            _ => {}
        }
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let n: usize = rest.strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let kind = match name.trim() {
            "boolean" => CatalogKind::Boolean(n),
            "mo" => CatalogKind::Mo(n),
            _ => return Err(bad()),
        };
        kind.check()?;
        Ok(kind)
    }
}

impl CatalogKind {
    fn check(self) -> Result<(), CatalogError> {
        match self {
            CatalogKind::Boolean(0) | CatalogKind::Mo(0) => Err(CatalogError::BadSpec(self.to_string())),
            CatalogKind::Boolean(n) if n > 12 => Err(CatalogError::BadSpec(self.to_string())),
            _ => Ok(()),
        }
    }
}

/// A catalog lattice plus an optional seed for the random generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CatalogSpec {
    pub kind: CatalogKind,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("invalid catalog spec `{0}`")]
    BadSpec(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("random states are only generated on Boolean lattices and height-2 lattices")]
    UnsupportedShape,
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    SMap(#[from] SMapError),
}

fn block_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{i}")
    }
}

/// Unvalidated description of a catalog lattice. The hexagon is only
/// reachable this way, since it fails validation.
pub fn catalog_description(kind: CatalogKind) -> Result<LatticeDescription, CatalogError> {
    kind.check()?;
    let owned = |pairs: &[(&str, &str)]| -> Vec<(String, String)> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    };
    let desc = match kind {
        CatalogKind::Chain2 => LatticeDescription {
            labels: vec!["0".into(), "1".into()],
            leq: owned(&[("0", "1")]),
            ortho: owned(&[("0", "1")]),
            zero: Some("0".into()),
            one: Some("1".into()),
        },
        CatalogKind::O6 => LatticeDescription {
            labels: ["0", "a", "b", "b'", "a'", "1"].map(String::from).to_vec(),
            leq: owned(&[("0", "a"), ("a", "b"), ("b", "1"), ("0", "b'"), ("b'", "a'"), ("a'", "1")]),
            ortho: owned(&[("0", "1"), ("a", "a'"), ("b", "b'")]),
            zero: Some("0".into()),
            one: Some("1".into()),
        },
        CatalogKind::Mo(n) => {
            let mut labels = vec!["0".to_string()];
            let mut leq = Vec::new();
            let mut ortho = vec![("0".to_string(), "1".to_string())];
            for i in 0..n {
                let x = block_name(i);
                let xc = format!("{x}'");
                for y in [&x, &xc] {
                    leq.push(("0".to_string(), y.clone()));
                    leq.push((y.clone(), "1".to_string()));
                }
                ortho.push((x.clone(), xc.clone()));
                labels.push(x);
                labels.push(xc);
            }
            labels.push("1".into());
            LatticeDescription { labels, leq, ortho, zero: Some("0".into()), one: Some("1".into()) }
        }
        CatalogKind::Boolean(n) => {
            let full = (1usize << n) - 1;
            let label = |mask: usize| -> String {
                if mask == 0 {
                    "0".into()
                } else if mask == full {
                    "1".into()
                } else {
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| format!("x{i}"))
                        .collect::<Vec<_>>()
                        .join("+")
                }
            };
            let labels = (0..=full).map(label).collect();
            let mut leq = Vec::new();
            for mask in 0..=full {
                for i in 0..n {
                    if mask >> i & 1 == 0 {
                        leq.push((label(mask), label(mask | 1 << i)));
                    }
                }
            }
            let ortho = (0..=full).map(|m| (label(m), label(full ^ m))).collect();
            LatticeDescription { labels, leq, ortho, zero: Some(label(0)), one: Some(label(full)) }
        }
    };
    Ok(desc)
}

pub fn build_catalog(kind: CatalogKind) -> Result<OrthomodularLattice, CatalogError> {
    Ok(catalog_description(kind)?.build()?)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn is_boolean(l: &OrthomodularLattice) -> bool {
    l.elements().all(|a| l.elements().all(|b| l.is_compatible(a, b)))
}

/// Every element other than the bounds is both an atom and a coatom.
fn has_height_two(l: &OrthomodularLattice) -> bool {
    let (zero, one) = (l.zero(), l.one());
    l.elements()
        .filter(|&x| x != zero && x != one)
        .all(|x| l.elements().all(|y| !(l.lt(zero, y) && l.lt(y, x)) && !(l.lt(x, y) && l.lt(y, one))))
}

/// Elements covering zero.
fn atoms(l: &OrthomodularLattice) -> Vec<Element> {
    l.nonzero_elements()
        .filter(|&x| !l.nonzero_elements().any(|y| l.lt(y, x)))
        .collect()
}

/// `count` strictly positive multiples of `1/den` summing to one.
fn random_composition(rng: &mut ChaCha8Rng, count: usize, den: i64) -> Vec<Rational> {
    assert!(count as i64 <= den);
    let mut cuts: Vec<i64> = (1..den).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<i64> = cuts.into_iter().take(count - 1).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut parts = Vec::with_capacity(count);
    for cut in cuts.into_iter().chain([den]) {
        parts.push(ratio(cut - prev, den));
        prev = cut;
    }
    parts
}

/// State with strictly positive mass on every atom of a Boolean lattice.
fn random_boolean_state(l: &Arc<OrthomodularLattice>, rng: &mut ChaCha8Rng) -> Result<State, StateError> {
    let atoms = atoms(l);
    let weights = random_composition(rng, atoms.len().max(1), DEFAULT_DENOMINATOR);
    let values = l
        .elements()
        .map(|e| {
            if e == l.one() {
                return Rational::one();
            }
            atoms
                .iter()
                .zip(&weights)
                .filter(|(&a, _)| l.leq(a, e))
                .map(|(_, w)| w.clone())
                .sum()
        })
        .collect();
    State::validate(l, values)
}

/// Conditional state with domain `L - {0}` and `f(b, 1) > 0` for every
/// nonzero `b`.
///
/// Boolean lattices use `f(x, y) = m(x ^ y) / m(y)` for one random state.
/// Height-2 lattices (the `mo(n)` family) draw a state `m` and, for every
/// block `{x, x'}`, a state concentrated on `x` compatible with `m`; the
/// complementary state is then forced, and the block's conditional state
/// comes from the weighted-mixture builder with weights `(m(x), m(x'))`.
pub fn random_conditional_state(l: &Arc<OrthomodularLattice>, seed: u64) -> Result<ConditionalState, CatalogError> {
    let mut rng = rng(seed);
    if is_boolean(l) {
        let m = random_boolean_state(l, &mut rng)?;
        return Ok(ConditionalState::from_ratio(&m)?);
    }
    if !has_height_two(l) {
        return Err(CatalogError::UnsupportedShape);
    }
    let den = DEFAULT_DENOMINATOR;
    // One representative per block, in id order.
    let blocks: Vec<Element> = l
        .nonzero_elements()
        .filter(|&x| x != l.one() && x < l.ortho(x))
        .collect();
    let mut mass = vec![Rational::zero(); l.len()];
    mass[l.one().index()] = Rational::one();
    for &x in &blocks {
        let w = ratio(rng.random_range(1..den), den);
        mass[l.ortho(x).index()] = Rational::one() - &w;
        mass[x.index()] = w;
    }
    let m = State::validate(l, mass)?;

    let mut merged: BTreeMap<(Element, Element), Rational> = BTreeMap::new();
    for &x in &blocks {
        let xc = l.ortho(x);
        let (mx, mxc) = (m.get(x).clone(), m.get(xc).clone());
        let mut on_x = vec![Rational::zero(); l.len()];
        on_x[l.one().index()] = Rational::one();
        on_x[x.index()] = Rational::one();
        for &y in blocks.iter().filter(|&&y| y != x) {
            let lo = (Rational::one() - m.get(l.ortho(y)) / &mx).max(Rational::zero());
            let hi = (m.get(y) / &mx).min(Rational::one());
            let t = ratio(rng.random_range(0..=den), den);
            let v = &lo + (hi - &lo) * t;
            on_x[l.ortho(y).index()] = Rational::one() - &v;
            on_x[y.index()] = v;
        }
        let on_xc: Vec<Rational> = l
            .elements()
            .map(|e| (m.get(e) - &mx * &on_x[e.index()]) / &mxc)
            .collect();
        let alphas = [State::validate(l, on_x)?, State::validate(l, on_xc)?];
        let k = [m.probability(x), m.probability(xc)];
        let block = build_conditional_state(l, &[x, xc], &alphas, &k)?;
        merged.extend(block.entries().map(|(key, v)| (key, v.clone())));
    }
    if blocks.is_empty() {
        merged.extend(l.elements().map(|e| ((e, l.one()), m.get(e).clone())));
    }
    Ok(ConditionalState::validate(l, ConditionalSystem::all_nonzero(l), merged)?)
}

/// A valid s-map, obtained by converting [`random_conditional_state`].
pub fn random_smap(l: &Arc<OrthomodularLattice>, seed: u64) -> Result<SMap, CatalogError> {
    Ok(conditional_to_smap(&random_conditional_state(l, seed)?)?)
}

/// Observable whose point events are a random grouping of a maximal
/// orthogonal family of atoms, with distinct random values.
pub fn random_observable(l: &Arc<OrthomodularLattice>, seed: u64) -> Observable {
    let mut rng = rng(seed);
    let mut pool = atoms(l);
    pool.shuffle(&mut rng);
    let mut family: Vec<Element> = Vec::new();
    for a in pool {
        if family.iter().all(|&f| l.is_orthogonal(f, a)) {
            family.push(a);
        }
    }
    let mut blocks: Vec<Element> = if l.join_all(family.iter().copied()) == l.one() {
        let groups = rng.random_range(1..=family.len().max(1));
        let mut joined = vec![l.zero(); groups];
        for (i, &a) in family.iter().enumerate() {
            let slot = if i < groups { i } else { rng.random_range(0..groups) };
            joined[slot] = l.join(joined[slot], a);
        }
        joined
    } else {
        vec![l.one()]
    };
    blocks.shuffle(&mut rng);
    let mut values: Vec<Rational> = Vec::new();
    while values.len() < blocks.len() {
        let v = ratio(rng.random_range(-50..=50), rng.random_range(1..=4));
        if !values.contains(&v) {
            values.push(v);
        }
    }
    Observable::new(l, values.into_iter().zip(blocks)).expect("blocks partition one")
}

/// `f(x, y) = m(x ^ y) / m(y)` for a random state on a Boolean lattice.
pub fn random_classical(l: &Arc<OrthomodularLattice>, seed: u64) -> Result<(State, ConditionalState), CatalogError> {
    if !is_boolean(l) {
        return Err(CatalogError::UnsupportedShape);
    }
    let m = random_boolean_state(l, &mut rng(seed))?;
    let f = ConditionalState::from_ratio(&m)?;
    Ok((m, f))
}
