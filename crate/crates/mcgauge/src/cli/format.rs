//! The JSON input format and its conversion to spaces and structures.
//!
//! Operations are written unsuspended, `m_k(a₁, …, a_k) = Σ c · out`, with
//! coefficients as exact strings such as `"3"` or `"-2/5"`. Degrees follow
//! the `grading` of the file (cohomological by default); the differential has
//! cohomological degree `+1` and `m_k` has cohomological degree `2 - k`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ainf::{from_unshifted, to_unshifted, OpSeries};
use crate::graded::GradedSpace;
use crate::highconn::PoincareData;
use crate::linalg::{Field, Scalar, SparseVec};

/// Degree convention of a file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// Differential of degree `-1`.
    Homological,
    /// Differential of degree `+1`.
    #[default]
    Cohomological,
}

/// One basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    /// Name, unique in the file.
    pub name: String,
    /// Degree in the file's grading.
    pub degree: i32,
}

/// The `space` section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSection {
    /// Ordered basis.
    pub basis: Vec<BasisEntry>,
    /// Name of the unit, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

/// `d(from) += coef · to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffEntry {
    /// Source basis element.
    pub from: String,
    /// Target basis element.
    pub to: String,
    /// Exact coefficient.
    pub coef: String,
}

/// `m_k(inputs) += coef · output`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpEntry {
    /// Input basis elements.
    pub inputs: Vec<String>,
    /// Output basis element.
    pub output: String,
    /// Exact coefficient.
    pub coef: String,
}

/// The `poincare` section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareSection {
    /// Connectivity.
    pub k: usize,
    /// Formal dimension.
    pub n: usize,
    /// Target arity bound.
    pub ell: usize,
    /// Generator of the top degree; inferred when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
    /// Dual of each basis element as a combination of basis elements;
    /// inferred from the binary product when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duals: Option<BTreeMap<String, BTreeMap<String, String>>>,
}

/// A complete input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    /// `"Q"` or `"Fp:<p>"`.
    #[serde(default = "default_field")]
    pub field: String,
    /// Degree convention.
    #[serde(default)]
    pub grading: Grading,
    /// The underlying basis.
    pub space: SpaceSection,
    /// Nonzero entries of the differential.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<DiffEntry>,
    /// Operations keyed by arity.
    #[serde(default)]
    pub operations: BTreeMap<String, Vec<OpEntry>>,
    /// Poincaré data for the minimal model pipeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poincare: Option<PoincareSection>,
}

fn default_field() -> String {
    "Q".into()
}

/// A format error: position for syntax errors, a path for semantic ones.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    /// Malformed JSON or a schema mismatch.
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        /// 1-based line.
        line: usize,
        /// 1-based column.
        column: usize,
        /// Parser message.
        message: String,
    },
    /// Well-formed JSON with invalid content.
    #[error("{path}: {message}")]
    Content {
        /// Location inside the document.
        path: String,
        /// What is wrong.
        message: String,
    },
}

fn content(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Content { path: path.into(), message: message.into() }
}

impl InputFile {
    /// Parses a document.
    pub fn parse(text: &str) -> Result<InputFile, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// A parsed algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    /// The space with its differential.
    pub space: Arc<GradedSpace>,
    /// Operations of arity at least 2, suspended.
    pub structure: OpSeries,
    /// Poincaré data, when given.
    pub poincare: Option<PoincareSection>,
}

/// Overrides applied while building.
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Field replacing the one in the file.
    pub field: Option<Field>,
    /// Grading replacing the one in the file.
    pub grading: Option<Grading>,
    /// Operations above this arity are dropped.
    pub arity_max: usize,
}

fn sign_of(g: Grading) -> i32 {
    match g {
        Grading::Homological => 1,
        Grading::Cohomological => -1,
    }
}

/// Builds the space and the suspended operations of a file.
pub fn build(file: &InputFile, opts: BuildOptions) -> Result<Algebra, FormatError> {
    let field = match opts.field {
        Some(f) => f,
        None => Field::from_tag(&file.field).map_err(|e| content("field", e.to_string()))?,
    };
    let grading = opts.grading.unwrap_or(file.grading);
    let to_hom = sign_of(grading);
    let space = space_of(file, field, to_hom)?;
    let idx = |name: &str, path: &str| space.index_of(name).ok_or_else(|| content(path, format!("unknown basis element {name}")));
    let parse = |s: &str, path: &str| field.parse(s).map_err(|e| content(path, format!("coefficient {s:?}: {e}")));
    let mut m = OpSeries::zero_on(&space, -1, opts.arity_max.max(2));
    for (key, entries) in &file.operations {
        let k: usize = key.parse().map_err(|_| content(format!("operations.{key}"), "arity must be an integer"))?;
        if k < 2 {
            return Err(content(format!("operations.{key}"), "operations start at arity 2; the differential has its own section"));
        }
        for (e_i, e) in entries.iter().enumerate() {
            let path = format!("operations.{key}[{e_i}]");
            if e.inputs.len() != k {
                return Err(content(path, format!("{} inputs listed under arity {k}", e.inputs.len())));
            }
            if k > opts.arity_max {
                continue;
            }
            let inputs: Vec<u32> = e.inputs.iter().map(|n| idx(n, &path).map(|i| i as u32)).collect::<Result<_, _>>()?;
            let out = idx(&e.output, &path)?;
            let in_deg: i32 = inputs.iter().map(|&i| space.degree(i as usize)).sum();
            if space.degree(out) != in_deg + k as i32 - 2 {
                return Err(content(path, format!("m{k} has degree {} in the file's grading", (2 - k as i32) * -to_hom)));
            }
            m.add_entry(inputs, out, parse(&e.coef, &path)?);
        }
    }
    Ok(Algebra { space: space.clone(), structure: from_unshifted(&m), poincare: file.poincare.clone() })
}

fn space_of(file: &InputFile, field: Field, to_hom: i32) -> Result<Arc<GradedSpace>, FormatError> {
    let names: Vec<(String, i32)> = file.space.basis.iter().map(|b| (b.name.clone(), b.degree * to_hom)).collect();
    let pos: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i)).collect();
    if pos.len() != names.len() {
        return Err(content("space.basis", "basis names must be unique"));
    }
    let unit = match &file.space.unit {
        Some(u) => Some(*pos.get(u.as_str()).ok_or_else(|| content("space.unit", format!("unknown basis element {u}")))?),
        None => None,
    };
    let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); names.len()];
    for (i, e) in file.differential.iter().enumerate() {
        let path = format!("differential[{i}]");
        let s = *pos.get(e.from.as_str()).ok_or_else(|| content(&path, format!("unknown basis element {}", e.from)))?;
        let t = *pos.get(e.to.as_str()).ok_or_else(|| content(&path, format!("unknown basis element {}", e.to)))?;
        if names[t].1 != names[s].1 - 1 {
            return Err(content(&path, "the differential must have homological degree -1"));
        }
        let c = field.parse(&e.coef).map_err(|err| content(&path, format!("coefficient {:?}: {err}", e.coef)))?;
        cols[s].push((t, c));
    }
    let diff = cols.into_iter().map(SparseVec::from_entries).collect();
    let space = GradedSpace::new(field, names, unit, diff).map_err(|e| content("space", e.to_string()))?;
    Ok(Arc::new(space))
}

/// Writes a space and suspended operations in the given grading.
pub fn emit(space: &GradedSpace, structure: &OpSeries, grading: Grading, poincare: Option<PoincareSection>) -> InputFile {
    let to_file = sign_of(grading);
    let basis = (0..space.dim())
        .map(|i| BasisEntry { name: space.name(i).to_string(), degree: space.degree(i) * to_file })
        .collect();
    let mut differential = Vec::new();
    for j in 0..space.dim() {
        for (i, c) in &space.differential(j).0 {
            differential.push(DiffEntry { from: space.name(j).into(), to: space.name(*i).into(), coef: c.to_string() });
        }
    }
    InputFile {
        field: space.field().tag(),
        grading,
        space: SpaceSection { basis, unit: space.unit().map(|u| space.name(u).to_string()) },
        differential,
        operations: op_entries(space, structure),
        poincare,
    }
}

/// Unsuspended entries of a family, keyed by arity.
pub fn op_entries(space: &GradedSpace, family: &OpSeries) -> BTreeMap<String, Vec<OpEntry>> {
    let mut out = BTreeMap::new();
    for (k, comp) in to_unshifted(family).components() {
        let mut v = Vec::new();
        for (t, col) in &comp.entries {
            for (o, c) in &col.0 {
                v.push(OpEntry {
                    inputs: t.iter().map(|&i| space.name(i as usize).to_string()).collect(),
                    output: space.name(*o).to_string(),
                    coef: c.to_string(),
                });
            }
        }
        out.insert(k.to_string(), v);
    }
    out
}

/// Reads a family of the given element degree from unsuspended entries.
pub fn read_family(
    space: &Arc<GradedSpace>,
    degree: i32,
    arity_max: usize,
    entries: &BTreeMap<String, Vec<OpEntry>>,
    path: &str,
) -> Result<OpSeries, FormatError> {
    let field = space.field();
    let mut m = OpSeries::zero_on(space, degree, arity_max);
    for (key, list) in entries {
        let k: usize = key.parse().map_err(|_| content(format!("{path}.{key}"), "arity must be an integer"))?;
        if k == 0 || k > arity_max {
            return Err(content(format!("{path}.{key}"), format!("arity outside 1..={arity_max}")));
        }
        for (i, e) in list.iter().enumerate() {
            let p = format!("{path}.{key}[{i}]");
            let idx = |n: &str| space.index_of(n).ok_or_else(|| content(&p, format!("unknown basis element {n}")));
            let inputs: Vec<u32> = e.inputs.iter().map(|n| idx(n).map(|i| i as u32)).collect::<Result<_, _>>()?;
            if inputs.len() != k {
                return Err(content(&p, "wrong number of inputs"));
            }
            let out = idx(&e.output)?;
            let in_deg: i32 = inputs.iter().map(|&i| space.shifted_degree(i as usize)).sum();
            if space.shifted_degree(out) != in_deg + degree {
                return Err(content(&p, "entry violates the degree constraint"));
            }
            let c = field.parse(&e.coef).map_err(|err| content(&p, err.to_string()))?;
            m.add_entry(inputs, out, c);
        }
    }
    Ok(from_unshifted(&m))
}

impl PoincareSection {
    /// Resolves the section against a structure, inferring missing parts
    /// from the binary product.
    pub fn resolve(&self, phi: &OpSeries) -> Result<PoincareData, FormatError> {
        let inferred = PoincareData::from_pairing(phi, self.k, self.n, self.ell);
        let field = phi.field();
        let top = match (&self.top, &inferred) {
            (Some(t), _) => t.clone(),
            (None, Some(p)) => p.top.clone(),
            (None, None) => return Err(content("poincare.top", format!("degree {} is not one-dimensional", self.n))),
        };
        let duals = match &self.duals {
            Some(map) => {
                let mut v = Vec::new();
                for (x, y) in map {
                    let mut comb = Vec::new();
                    for (b, c) in y {
                        let s = field.parse(c).map_err(|e| content(format!("poincare.duals.{x}.{b}"), e.to_string()))?;
                        comb.push((b.clone(), s));
                    }
                    v.push((x.clone(), comb));
                }
                v
            }
            None => inferred.map(|p| p.duals).unwrap_or_default(),
        };
        Ok(PoincareData { k: self.k, n: self.n, ell: self.ell, top, duals })
    }
}
