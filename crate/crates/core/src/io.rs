//! Presentation files: parsing with line-level diagnostics, canonical
//! JSON and fingerprints.
//!
//! ```json
//! {
//!   "generators": ["x", "y"],
//!   "degree": 2,
//!   "relators": [[{"word": [0, 1], "coeff": "1"}, {"word": [1, 0], "coeff": "-1"}]]
//! }
//! ```
//!
//! An optional `"metric"` (e.g. `"euclid4"`, `"diag:1,-1,1,1"`) with no
//! `"relators"` asks for the Yang-Mills presentation of that metric.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::Presentation;
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational};
use crate::presets::{yang_mills, Metric};
use crate::tensor::{TensorVector, Word};

#[derive(Deserialize)]
#[serde(untagged)]
enum Coeff {
    Text(String),
    Int(i64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    word: Vec<usize>,
    coeff: Coeff,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationFile {
    generators: Vec<String>,
    degree: usize,
    #[serde(default)]
    relators: Option<Vec<Vec<TermFile>>>,
    #[serde(default)]
    metric: Option<String>,
    #[serde(default)]
    label: Option<String>,
}

/// 1-based line of the `index`-th `"word"` key, used to point at a term.
fn term_line(text: &str, index: usize) -> Option<usize> {
    let mut seen = 0;
    let mut from = 0;
    while let Some(off) = text[from..].find("\"word\"") {
        let at = from + off;
        let rest = text[at + 6..].trim_start();
        if rest.starts_with(':') {
            if seen == index {
                return Some(text[..at].matches('\n').count() + 1);
            }
            seen += 1;
        }
        from = at + 6;
    }
    None
}

fn at_line(text: &str, term: usize, msg: String) -> Error {
    match term_line(text, term) {
        Some(line) => Error::InvalidPresentation(format!("line {line}: {msg}")),
        None => Error::InvalidPresentation(msg),
    }
}

/// Parses and canonicalizes a presentation document.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let file: PresentationFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidPresentation(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let g = file.generators.len();
    if g == 0 {
        return Err(Error::InvalidPresentation("empty generator list".into()));
    }
    if file.degree < 2 {
        return Err(Error::InvalidPresentation(format!(
            "relation degree must be at least 2, got {}",
            file.degree
        )));
    }
    let Some(relators) = file.relators else {
        let Some(spec) = file.metric else {
            return Err(Error::InvalidPresentation("need `relators` or a `metric`".into()));
        };
        let metric = Metric::parse(&spec)?;
        if metric.dim() != g || file.degree != 3 {
            return Err(Error::InvalidPresentation(format!(
                "metric {spec} needs {} generators and degree 3",
                metric.dim()
            )));
        }
        let ym = yang_mills(&metric)?;
        let label = file.label.unwrap_or_else(|| ym.label().to_string());
        return Presentation::from_relator_space(file.generators, ym.relators().clone(), label);
    };
    let mut tensors = Vec::with_capacity(relators.len());
    let mut term_index = 0;
    for (r, terms) in relators.iter().enumerate() {
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let here = term_index;
            term_index += 1;
            if t.word.len() != file.degree {
                return Err(at_line(
                    text,
                    here,
                    format!(
                        "relator {r} has a term of degree {} but the relation degree is {}",
                        t.word.len(),
                        file.degree
                    ),
                ));
            }
            if let Some(&l) = t.word.iter().find(|&&l| l >= g) {
                return Err(at_line(
                    text,
                    here,
                    format!("letter {l} out of range for {g} generators"),
                ));
            }
            let c = match &t.coeff {
                Coeff::Text(s) => {
                    parse_rational(s).ok_or_else(|| at_line(text, here, format!("bad coefficient {s:?}")))?
                }
                Coeff::Int(v) => BigRational::from_integer((*v).into()),
            };
            parsed.push((Word(t.word.clone()), c));
        }
        tensors.push(if parsed.is_empty() {
            TensorVector::zero(g, file.degree)
        } else {
            TensorVector::from_terms(g, &parsed)?
        });
    }
    let label = file.label.unwrap_or_else(|| "file".to_string());
    Presentation::new(file.generators, file.degree, &tensors, label)
}

pub fn read_presentation(path: &Path) -> Result<Presentation> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_presentation(&text)
}

#[derive(Serialize)]
struct CanonicalTerm {
    coeff: String,
    word: Vec<usize>,
}

/// Keys sorted, relators as the canonical basis, terms in word order.
pub fn canonical_value(p: &Presentation) -> serde_json::Value {
    let relators: Vec<Vec<CanonicalTerm>> = p
        .relator_tensors()
        .iter()
        .map(|t| {
            t.terms()
                .map(|(w, c)| CanonicalTerm {
                    coeff: format_rational(c),
                    word: w.0,
                })
                .collect()
        })
        .collect();
    let mut m = BTreeMap::new();
    m.insert("degree", serde_json::json!(p.degree()));
    m.insert("generators", serde_json::json!(p.generator_names()));
    m.insert("relators", serde_json::to_value(relators).expect("plain data"));
    serde_json::to_value(m).expect("plain data")
}

pub fn canonical_json(p: &Presentation) -> String {
    serde_json::to_string(&canonical_value(p)).expect("plain data")
}

/// Hex SHA-256 of the canonical JSON.
pub fn fingerprint(p: &Presentation) -> String {
    hex::encode(Sha256::digest(canonical_json(p).as_bytes()))
}
