//! The description file: graded spaces, structures, an optional
//! Maurer-Cartan element and morphism, and optional `B_n^j` tables.
//!
//! The format is JSON. Coefficients are strings `"p/q"` or `"p/q t^e"`;
//! several output terms on the same basis vector add up.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use leibniz_core::graded::{format_rational, parse_rational, GradedSpace};
use leibniz_core::structures::{AlgebraStructure, Flavor, LinfMorphism};
use leibniz_core::{Element, MultilinearMap, Scalar};
use num_rational::BigRational;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// One monomial coefficient `q t^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeff {
    pub value: BigRational,
    pub exp: u32,
}

impl FromStr for Coeff {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (head, exp) = match s.find('t') {
            None => (s, 0),
            Some(pos) => {
                let tail = s[pos + 1..].trim();
                let exp = match tail.strip_prefix('^') {
                    None if tail.is_empty() => 1,
                    None => return Err(format!("bad coefficient {s:?}: expected t^e")),
                    Some(e) => e
                        .trim()
                        .parse()
                        .map_err(|_| format!("bad coefficient {s:?}: exponent {e:?}"))?,
                };
                (s[..pos].trim(), exp)
            }
        };
        let value = match head {
            "" if exp > 0 => BigRational::from_integer(1.into()),
            "-" if exp > 0 => BigRational::from_integer((-1).into()),
            _ => parse_rational(head).map_err(|e| format!("bad coefficient {s:?}: {e}"))?,
        };
        Ok(Coeff { value, exp })
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            0 => f.write_str(&format_rational(&self.value)),
            e => write!(f, "{} t^{e}", format_rational(&self.value)),
        }
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDesc {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDesc {
    pub name: String,
    pub basis: Vec<BasisDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDesc {
    pub basis: String,
    pub coeff: Coeff,
}

/// One nonzero value of a multilinear map on a tuple of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDesc {
    pub inputs: Vec<String>,
    pub output: Vec<TermDesc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorDesc {
    Lie,
    Leibniz,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDesc {
    pub name: String,
    pub space: String,
    pub flavor: FlavorDesc,
    #[serde(default)]
    pub differential: Vec<EntryDesc>,
    #[serde(default)]
    pub bracket: Vec<EntryDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McDesc {
    pub structure: String,
    pub value: Vec<TermDesc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphismKind {
    /// The identity of `source`.
    Identity,
    /// Listed Taylor coefficients. Without `known_arity` the list is the
    /// whole family; with `complete` the solver fills in the rest.
    Taylor,
    /// `exp [Q, H]` for the quadratic homotopy `H_2` listed in `homotopy`.
    Gauge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDesc {
    pub kind: MorphismKind,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub taylor: BTreeMap<usize, Vec<EntryDesc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_arity: Option<usize>,
    #[serde(default)]
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homotopy: Vec<EntryDesc>,
}

/// A table `B_n^j : T^n(source) -> target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDesc {
    pub arity: usize,
    pub j: usize,
    pub source: String,
    pub target: String,
    pub entries: Vec<EntryDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Description {
    pub schema_version: u32,
    pub truncation_order: u32,
    pub spaces: Vec<SpaceDesc>,
    #[serde(default)]
    pub structures: Vec<StructureDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_element: Option<McDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismDesc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b_tables: Vec<TableDesc>,
}

/// How to obtain the morphism at a requested arity.
#[derive(Debug, Clone)]
pub enum MorphismSpec {
    Fixed(LinfMorphism),
    Completed(LinfMorphism, usize),
    Gauge(AlgebraStructure, MultilinearMap),
}

impl MorphismSpec {
    /// The morphism with coefficients known at least up to `arity`.
    pub fn build(&self, arity: usize) -> leibniz_core::Result<LinfMorphism> {
        match self {
            MorphismSpec::Fixed(f) => Ok(f.clone()),
            MorphismSpec::Completed(f, from) => {
                if arity <= *from {
                    Ok(f.clone())
                } else {
                    f.complete(*from, arity)
                }
            }
            MorphismSpec::Gauge(g, h2) => LinfMorphism::gauge_automorphism(g, h2.clone(), arity),
        }
    }
}

/// A validated description.
#[derive(Debug, Clone)]
pub struct Session {
    pub order: u32,
    pub spaces: BTreeMap<String, GradedSpace>,
    pub structures: Vec<(String, AlgebraStructure)>,
    pub mc: Option<(String, Element)>,
    pub morphism: Option<(String, String, MorphismSpec)>,
    pub tables: BTreeMap<(usize, usize), MultilinearMap>,
}

impl Session {
    pub fn structure(&self, name: &str) -> Option<&AlgebraStructure> {
        self.structures.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }
}

fn invalid(at: &str, msg: impl fmt::Display) -> CliError {
    CliError::Invalid(format!("at {at}: {msg}"))
}

fn scalar(c: &Coeff, order: u32) -> Scalar {
    Scalar::monomial(c.value.clone(), c.exp, order)
}

fn element(terms: &[TermDesc], space: &GradedSpace, order: u32, at: &str) -> Result<Element, CliError> {
    let mut e = Element::zero();
    for (k, t) in terms.iter().enumerate() {
        let i = space.index_of(&t.basis).map_err(|err| invalid(&format!("{at}[{k}]"), err))?;
        e.add_term(i, &scalar(&t.coeff, order));
    }
    Ok(e)
}

/// Fills `map` from entries whose inputs live in `from` and outputs in `to`.
fn fill(
    mut map: MultilinearMap,
    entries: &[EntryDesc],
    from: &GradedSpace,
    to: &GradedSpace,
    order: u32,
    at: &str,
) -> Result<MultilinearMap, CliError> {
    for (k, entry) in entries.iter().enumerate() {
        let here = format!("{at}[{k}]");
        if entry.inputs.len() != map.arity() {
            return Err(invalid(
                &here,
                format!("expected {} inputs, got {}", map.arity(), entry.inputs.len()),
            ));
        }
        let tuple = entry
            .inputs
            .iter()
            .map(|n| from.index_of(n))
            .collect::<leibniz_core::Result<Vec<_>>>()
            .map_err(|err| invalid(&format!("{here}.inputs"), err))?;
        let value = element(&entry.output, to, order, &format!("{here}.output"))?;
        map.add_entry(&tuple, &value).map_err(|err| invalid(&here, err))?;
    }
    Ok(map)
}

/// Entries of `map`, one per stored tuple, in index order.
pub fn entries_of(map: &MultilinearMap, from: &GradedSpace, to: &GradedSpace) -> Vec<EntryDesc> {
    map.entries()
        .map(|(tuple, v)| EntryDesc {
            inputs: tuple.iter().map(|&i| from.name(i).to_string()).collect(),
            output: v
                .iter()
                .flat_map(|(b, c)| {
                    c.terms().iter().map(move |(e, q)| TermDesc {
                        basis: to.name(b).to_string(),
                        coeff: Coeff {
                            value: q.clone(),
                            exp: *e,
                        },
                    })
                })
                .collect(),
        })
        .collect()
}

pub fn space_desc(name: &str, space: &GradedSpace) -> SpaceDesc {
    SpaceDesc {
        name: name.to_string(),
        basis: space
            .basis()
            .iter()
            .map(|b| BasisDesc {
                name: b.name.clone(),
                degree: b.degree,
            })
            .collect(),
    }
}

pub fn structure_desc(name: &str, space: &str, g: &AlgebraStructure) -> StructureDesc {
    StructureDesc {
        name: name.to_string(),
        space: space.to_string(),
        flavor: match g.flavor() {
            Flavor::Lie => FlavorDesc::Lie,
            Flavor::Leibniz => FlavorDesc::Leibniz,
        },
        differential: entries_of(g.differential(), g.space(), g.space()),
        bracket: entries_of(g.bracket(), g.space(), g.space()),
    }
}

/// Parses a description; syntax errors carry line and column.
pub fn parse_description(text: &str) -> Result<Description, CliError> {
    let desc: Description = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    if desc.schema_version != SCHEMA_VERSION {
        return Err(invalid(
            "schema_version",
            format!("unsupported version {}, expected {SCHEMA_VERSION}", desc.schema_version),
        ));
    }
    Ok(desc)
}

/// Reads and validates a description file. `truncation` overrides the
/// file's truncation order.
pub fn load_description(path: &Path, truncation: Option<u32>) -> Result<Session, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let desc = parse_description(&text).map_err(|e| e.in_file(path))?;
    build_session(&desc, truncation).map_err(|e| e.in_file(path))
}

pub fn build_session(desc: &Description, truncation: Option<u32>) -> Result<Session, CliError> {
    let order = truncation.unwrap_or(desc.truncation_order);
    if order < 1 {
        return Err(invalid("truncation_order", "must be at least 1"));
    }
    let mut spaces = BTreeMap::new();
    for (k, s) in desc.spaces.iter().enumerate() {
        let space = GradedSpace::new(s.basis.iter().map(|b| (b.name.clone(), b.degree)))
            .map_err(|e| invalid(&format!("spaces[{k}]"), e))?;
        if spaces.insert(s.name.clone(), space).is_some() {
            return Err(invalid(&format!("spaces[{k}]"), format!("duplicate space {:?}", s.name)));
        }
    }
    let lookup_space = |name: &str, at: &str| {
        spaces
            .get(name)
            .ok_or_else(|| invalid(at, format!("unknown space {name:?}")))
    };
    let mut structures: Vec<(String, AlgebraStructure)> = Vec::new();
    for (k, s) in desc.structures.iter().enumerate() {
        let at = format!("structures[{k}]");
        if structures.iter().any(|(n, _)| n == &s.name) {
            return Err(invalid(&at, format!("duplicate structure {:?}", s.name)));
        }
        let space = lookup_space(&s.space, &format!("{at}.space"))?;
        let n = space.dim();
        let d = fill(MultilinearMap::new(1, n, n, 1), &s.differential, space, space, order, &format!("{at}.differential"))?;
        let b = fill(MultilinearMap::new(2, n, n, 0), &s.bracket, space, space, order, &format!("{at}.bracket"))?;
        let flavor = match s.flavor {
            FlavorDesc::Lie => Flavor::Lie,
            FlavorDesc::Leibniz => Flavor::Leibniz,
        };
        let g = AlgebraStructure::new(space.clone(), flavor, order, d, b).map_err(|e| invalid(&at, e))?;
        structures.push((s.name.clone(), g));
    }
    let find = |name: &str, at: &str| {
        structures
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g.clone())
            .ok_or_else(|| invalid(at, format!("unknown structure {name:?}")))
    };
    let mc = match &desc.mc_element {
        None => None,
        Some(m) => {
            let g = find(&m.structure, "mc_element.structure")?;
            Some((m.structure.clone(), element(&m.value, g.space(), order, "mc_element.value")?))
        }
    };
    let morphism = match &desc.morphism {
        None => None,
        Some(m) => {
            let target_name = m.target.clone().unwrap_or_else(|| m.source.clone());
            let source = find(&m.source, "morphism.source")?;
            let target = find(&target_name, "morphism.target")?;
            Some((m.source.clone(), target_name, morphism_spec(m, source, target, order)?))
        }
    };
    let mut tables = BTreeMap::new();
    for (k, t) in desc.b_tables.iter().enumerate() {
        let at = format!("b_tables[{k}]");
        let from = lookup_space(&t.source, &format!("{at}.source"))?;
        let to = lookup_space(&t.target, &format!("{at}.target"))?;
        let map = fill(MultilinearMap::new(t.arity, from.dim(), to.dim(), 0), &t.entries, from, to, order, &format!("{at}.entries"))?;
        if tables.insert((t.arity, t.j), map).is_some() {
            return Err(invalid(&at, format!("duplicate table ({}, {})", t.arity, t.j)));
        }
    }
    Ok(Session {
        order,
        spaces,
        structures,
        mc,
        morphism,
        tables,
    })
}

fn morphism_spec(
    m: &MorphismDesc,
    source: AlgebraStructure,
    target: AlgebraStructure,
    order: u32,
) -> Result<MorphismSpec, CliError> {
    match m.kind {
        MorphismKind::Identity => {
            if source != target {
                return Err(invalid("morphism", "an identity needs source = target"));
            }
            Ok(MorphismSpec::Fixed(LinfMorphism::identity(&source).map_err(|e| invalid("morphism", e))?))
        }
        MorphismKind::Taylor => {
            let mut taylor = BTreeMap::new();
            for (&k, entries) in &m.taylor {
                if k == 0 {
                    return Err(invalid("morphism.taylor", "arities start at 1"));
                }
                let map = MultilinearMap::new(k, source.dim(), target.dim(), 0);
                let map = fill(map, entries, source.space(), target.space(), order, &format!("morphism.taylor.{k}"))?;
                taylor.insert(k, map);
            }
            let top = m.taylor.keys().next_back().copied().unwrap_or(1);
            let known = if m.complete { Some(m.known_arity.unwrap_or(top)) } else { m.known_arity };
            let f = LinfMorphism::new(source, target, taylor, known).map_err(|e| invalid("morphism", e))?;
            Ok(match (m.complete, known) {
                (true, Some(from)) => MorphismSpec::Completed(f, from),
                _ => MorphismSpec::Fixed(f),
            })
        }
        MorphismKind::Gauge => {
            if source != target {
                return Err(invalid("morphism", "a gauge automorphism needs source = target"));
            }
            let h2 = MultilinearMap::symmetric(2, source.letter_degrees(), source.dim(), -1);
            let h2 = fill(h2, &m.homotopy, source.space(), source.space(), order, "morphism.homotopy")?;
            Ok(MorphismSpec::Gauge(source, h2))
        }
    }
}
