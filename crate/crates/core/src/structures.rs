//! Finite relational structures and their text/JSON interchange formats.
//!
//! The text format has three sections, in order:
//!
//! ```text
//! signature
//! lt/2
//! universe
//! a b c
//! relations
//! lt (a,b) (b,c) (a,c)
//! ```
//!
//! Blank lines and `#` comments are ignored. A relation that has no line in
//! the `relations` section is empty. The JSON rendering uses the keys
//! `signature` (object of name to arity), `universe` (array of identifiers)
//! and `relations` (object of name to array of tuples).

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: arity mismatch for `{relation}`: expected {expected}, got {found}")]
    ArityMismatch {
        line: usize,
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unknown element `{element}`")]
    UnknownElement { line: usize, element: String },
    #[error("line {line}: unknown relation `{relation}`")]
    UnknownRelation { line: usize, relation: String },
    #[error("line {line}: duplicate universe element `{element}`")]
    DuplicateElement { line: usize, element: String },
    #[error("line {line}: duplicate relation `{relation}`")]
    DuplicateRelation { line: usize, relation: String },
    #[error("line {line}: relation `{relation}` must have positive arity")]
    ZeroArity { line: usize, relation: String },
    #[error("empty universe")]
    EmptyUniverse,
    #[error("json: {0}")]
    Json(String),
}

/// Relation names with their arities, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    relations: IndexMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a relation symbol. Returns `false` if the name is taken or the
    /// arity is zero.
    pub fn add(&mut self, name: impl Into<String>, arity: usize) -> bool {
        let name = name.into();
        if arity == 0 || self.relations.contains_key(&name) {
            return false;
        }
        self.relations.insert(name, arity);
        true
    }

    pub fn with(mut self, name: impl Into<String>, arity: usize) -> Self {
        let name = name.into();
        assert!(self.add(name.clone(), arity), "bad relation symbol {name}/{arity}");
        self
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.get_index_of(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

/// A finite universe with an interpretation of every relation symbol.
///
/// Tuples are stored as sequences of universe positions. The declaration
/// order of elements is the enumeration order used everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    signature: Signature,
    universe: Vec<String>,
    relations: Vec<BTreeSet<Vec<usize>>>,
    lookup: Vec<HashSet<Vec<usize>>>,
}

impl FiniteStructure {
    /// Builds a structure from element names and named tuples.
    pub fn new<S: AsRef<str>>(
        signature: Signature,
        universe: &[S],
        tuples: &[(&str, Vec<&str>)],
    ) -> Result<Self, StructureError> {
        let mut b = Builder::new(signature);
        for (i, e) in universe.iter().enumerate() {
            b.element(e.as_ref(), i + 1)?;
        }
        for (i, (rel, t)) in tuples.iter().enumerate() {
            b.tuple(rel, t, i + 1)?;
        }
        b.finish()
    }

    /// Builds a structure directly from positional tuples, one tuple set per
    /// relation in signature order.
    pub fn from_indices(
        signature: Signature,
        universe: Vec<String>,
        relations: Vec<BTreeSet<Vec<usize>>>,
    ) -> Result<Self, StructureError> {
        if universe.is_empty() {
            return Err(StructureError::EmptyUniverse);
        }
        let mut seen = HashSet::new();
        for e in &universe {
            if !seen.insert(e.as_str()) {
                return Err(StructureError::DuplicateElement {
                    line: 0,
                    element: e.clone(),
                });
            }
        }
        assert_eq!(relations.len(), signature.len(), "one tuple set per relation");
        for ((name, arity), tuples) in signature.iter().zip(&relations) {
            for t in tuples {
                if t.len() != arity {
                    return Err(StructureError::ArityMismatch {
                        line: 0,
                        relation: name.to_string(),
                        expected: arity,
                        found: t.len(),
                    });
                }
                if let Some(&bad) = t.iter().find(|&&i| i >= universe.len()) {
                    return Err(StructureError::UnknownElement {
                        line: 0,
                        element: format!("#{bad}"),
                    });
                }
            }
        }
        let lookup = relations.iter().map(|r| r.iter().cloned().collect()).collect();
        Ok(FiniteStructure {
            signature,
            universe,
            relations,
            lookup,
        })
    }

    /// A structure on `n` elements named `e0`, `e1`, ... with one binary
    /// relation `name` given by an adjacency predicate.
    pub fn binary(name: &str, n: usize, edge: impl Fn(usize, usize) -> bool) -> Self {
        let universe = (0..n).map(|i| format!("e{i}")).collect();
        let mut tuples = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if edge(i, j) {
                    tuples.insert(vec![i, j]);
                }
            }
        }
        Self::from_indices(Signature::new().with(name, 2), universe, vec![tuples])
            .expect("well-formed binary structure")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|e| e == name)
    }

    pub fn element_name(&self, i: usize) -> &str {
        &self.universe[i]
    }

    /// Tuples of the relation at signature position `rel`.
    pub fn tuples(&self, rel: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[rel]
    }

    pub fn relation(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub fn holds(&self, rel: usize, tuple: &[usize]) -> bool {
        self.lookup[rel].contains(tuple)
    }

    /// Renders the canonical text form.
    pub fn render_text(&self) -> String {
        let mut out = String::from("signature\n");
        for (name, arity) in self.signature.iter() {
            out.push_str(&format!("{name}/{arity}\n"));
        }
        out.push_str("universe\n");
        out.push_str(&self.universe.join(" "));
        out.push_str("\nrelations\n");
        for (i, (name, _)) in self.signature.iter().enumerate() {
            out.push_str(name);
            for t in &self.relations[i] {
                let names: Vec<&str> = t.iter().map(|&k| self.universe[k].as_str()).collect();
                out.push_str(&format!(" ({})", names.join(",")));
            }
            out.push('\n');
        }
        out
    }

    /// Renders the canonical JSON form (pretty-printed, trailing newline).
    pub fn render_json(&self) -> String {
        let doc = JsonStructure {
            signature: self.signature.relations.clone(),
            universe: self.universe.clone(),
            relations: self
                .signature
                .iter()
                .enumerate()
                .map(|(i, (name, _))| {
                    let ts = self.relations[i]
                        .iter()
                        .map(|t| t.iter().map(|&k| self.universe[k].clone()).collect())
                        .collect();
                    (name.to_string(), ts)
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonStructure {
    signature: IndexMap<String, usize>,
    universe: Vec<String>,
    #[serde(default)]
    relations: IndexMap<String, Vec<Vec<String>>>,
}

struct Builder {
    signature: Signature,
    universe: Vec<String>,
    index: std::collections::HashMap<String, usize>,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

impl Builder {
    fn new(signature: Signature) -> Self {
        let relations = vec![BTreeSet::new(); signature.len()];
        Builder {
            signature,
            universe: Vec::new(),
            index: Default::default(),
            relations,
        }
    }

    fn element(&mut self, name: &str, line: usize) -> Result<(), StructureError> {
        if self.index.contains_key(name) {
            return Err(StructureError::DuplicateElement {
                line,
                element: name.to_string(),
            });
        }
        self.index.insert(name.to_string(), self.universe.len());
        self.universe.push(name.to_string());
        Ok(())
    }

    fn tuple<S: AsRef<str>>(&mut self, rel: &str, t: &[S], line: usize) -> Result<(), StructureError> {
        let Some(r) = self.signature.index_of(rel) else {
            return Err(StructureError::UnknownRelation {
                line,
                relation: rel.to_string(),
            });
        };
        let arity = self.signature.arity(rel).unwrap();
        if t.len() != arity {
            return Err(StructureError::ArityMismatch {
                line,
                relation: rel.to_string(),
                expected: arity,
                found: t.len(),
            });
        }
        let mut idx = Vec::with_capacity(t.len());
        for e in t {
            match self.index.get(e.as_ref()) {
                Some(&i) => idx.push(i),
                None => {
                    return Err(StructureError::UnknownElement {
                        line,
                        element: e.as_ref().to_string(),
                    })
                }
            }
        }
        self.relations[r].insert(idx);
        Ok(())
    }

    fn finish(self) -> Result<FiniteStructure, StructureError> {
        FiniteStructure::from_indices(self.signature, self.universe, self.relations)
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '\'')
}

/// Parses either rendering; JSON is detected by a leading `{`.
pub fn parse_structure(text: &str) -> Result<FiniteStructure, StructureError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

fn parse_json(text: &str) -> Result<FiniteStructure, StructureError> {
    let doc: JsonStructure = serde_json::from_str(text)
        .map_err(|e| StructureError::Json(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let mut sig = Signature::new();
    for (name, arity) in &doc.signature {
        if *arity == 0 {
            return Err(StructureError::ZeroArity {
                line: 0,
                relation: name.clone(),
            });
        }
        sig.add(name.clone(), *arity);
    }
    let mut b = Builder::new(sig);
    for e in &doc.universe {
        b.element(e, 0)?;
    }
    for (name, tuples) in &doc.relations {
        if b.signature.index_of(name).is_none() {
            return Err(StructureError::UnknownRelation {
                line: 0,
                relation: name.clone(),
            });
        }
        for t in tuples {
            b.tuple(name, t, 0)?;
        }
    }
    b.finish()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Signature,
    Universe,
    Relations,
}

fn parse_text(text: &str) -> Result<FiniteStructure, StructureError> {
    let mut section = Section::Start;
    let mut sig = Signature::new();
    let mut builder: Option<Builder> = None;
    let mut seen_relations = HashSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| StructureError::Syntax {
            line: line_no,
            message,
        };
        let next = match line {
            "signature" => Some(Section::Signature),
            "universe" => Some(Section::Universe),
            "relations" => Some(Section::Relations),
            _ => None,
        };
        if let Some(next) = next {
            if next <= section {
                return Err(syntax(format!("section `{line}` out of order")));
            }
            if next == Section::Universe && section == Section::Start {
                return Err(syntax("missing `signature` section".into()));
            }
            if next == Section::Relations && section != Section::Universe {
                return Err(syntax("missing `universe` section".into()));
            }
            if next == Section::Universe {
                builder = Some(Builder::new(std::mem::take(&mut sig)));
            }
            section = next;
            continue;
        }
        match section {
            Section::Start => return Err(syntax(format!("expected `signature`, found `{line}`"))),
            Section::Signature => {
                for decl in line.split_whitespace() {
                    let Some((name, arity)) = decl.split_once('/') else {
                        return Err(syntax(format!("expected name/arity, found `{decl}`")));
                    };
                    if !is_identifier(name) {
                        return Err(syntax(format!("bad relation name `{name}`")));
                    }
                    let arity: usize = arity
                        .parse()
                        .map_err(|_| syntax(format!("bad arity `{arity}`")))?;
                    if arity == 0 {
                        return Err(StructureError::ZeroArity {
                            line: line_no,
                            relation: name.to_string(),
                        });
                    }
                    if !sig.add(name, arity) {
                        return Err(StructureError::DuplicateRelation {
                            line: line_no,
                            relation: name.to_string(),
                        });
                    }
                }
            }
            Section::Universe => {
                let b = builder.as_mut().unwrap();
                for e in line.split_whitespace() {
                    if !is_identifier(e) {
                        return Err(syntax(format!("bad element identifier `{e}`")));
                    }
                    b.element(e, line_no)?;
                }
            }
            Section::Relations => {
                let b = builder.as_mut().unwrap();
                let (name, rest) = match line.find(|c: char| c.is_whitespace() || c == '(') {
                    Some(i) => (&line[..i], &line[i..]),
                    None => (line, ""),
                };
                if b.signature.index_of(name).is_none() {
                    return Err(StructureError::UnknownRelation {
                        line: line_no,
                        relation: name.to_string(),
                    });
                }
                if !seen_relations.insert(name.to_string()) {
                    return Err(StructureError::DuplicateRelation {
                        line: line_no,
                        relation: name.to_string(),
                    });
                }
                for t in parse_tuples(rest).map_err(syntax)? {
                    b.tuple(name, &t, line_no)?;
                }
            }
        }
    }
    match builder {
        Some(b) if section >= Section::Universe => b.finish(),
        _ => Err(StructureError::Syntax {
            line: text.lines().count(),
            message: "missing `universe` section".into(),
        }),
    }
}

fn parse_tuples(mut rest: &str) -> Result<Vec<Vec<&str>>, String> {
    let mut out = Vec::new();
    loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            return Ok(out);
        }
        let Some(body) = rest.strip_prefix('(') else {
            return Err(format!("expected `(`, found `{rest}`"));
        };
        let Some(close) = body.find(')') else {
            return Err("unclosed tuple".into());
        };
        let items: Vec<&str> = body[..close].split(',').map(str::trim).collect();
        if items.iter().any(|s| !is_identifier(s)) {
            return Err(format!("bad tuple `({})`", &body[..close]));
        }
        out.push(items);
        rest = &body[close + 1..];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN3: &str = "signature\nlt/2\nuniverse\na b c\nrelations\nlt (a,b) (b,c) (a,c)\n";

    #[test]
    fn parses_three_chain() {
        let s = parse_structure(CHAIN3).unwrap();
        assert_eq!(s.universe(), ["a", "b", "c"]);
        let lt = s.relation("lt").unwrap();
        assert_eq!(lt.len(), 3);
        assert!(s.holds(0, &[0, 1]));
        assert!(s.holds(0, &[0, 2]));
        assert!(!s.holds(0, &[1, 0]));
    }

    #[test]
    fn arity_mismatch_reports_line() {
        let text = "signature\nlt/2\nuniverse\na b c\nrelations\nlt (a,b,c)\n";
        match parse_structure(text) {
            Err(StructureError::ArityMismatch { line, expected, found, .. }) => {
                assert_eq!((line, expected, found), (6, 2, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_and_duplicate_elements() {
        let unknown = "signature\nlt/2\nuniverse\na b\nrelations\nlt (a,z)\n";
        assert!(matches!(
            parse_structure(unknown),
            Err(StructureError::UnknownElement { line: 6, .. })
        ));
        let dup = "signature\nlt/2\nuniverse\na b a\n";
        assert!(matches!(
            parse_structure(dup),
            Err(StructureError::DuplicateElement { line: 4, .. })
        ));
    }

    #[test]
    fn empty_universe_rejected() {
        assert_eq!(
            parse_structure("signature\nuniverse\nrelations\n"),
            Err(StructureError::EmptyUniverse)
        );
    }

    #[test]
    fn pure_universe_without_relations() {
        let s = parse_structure("signature\nuniverse\na b c\n").unwrap();
        assert_eq!(s.size(), 3);
        assert!(s.signature().is_empty());
    }

    #[test]
    fn malformed_sections() {
        assert!(matches!(
            parse_structure("universe\na\n"),
            Err(StructureError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_structure("signature\nlt/2\nuniverse\na\nrelations\nlt (a,a\n"),
            Err(StructureError::Syntax { line: 6, .. })
        ));
        assert!(matches!(
            parse_structure("signature\nlt\n"),
            Err(StructureError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn json_and_text_agree() {
        let s = parse_structure(CHAIN3).unwrap();
        let json = s.render_json();
        let back = parse_structure(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.render_json(), json);
        assert_eq!(back.render_text(), CHAIN3.replace("(b,c) (a,c)", "(a,c) (b,c)"));
    }

    #[test]
    fn json_errors() {
        let bad = r#"{"signature": {"lt": 2}, "universe": ["a"], "relations": {"lt": [["a"]]}}"#;
        assert!(matches!(
            parse_structure(bad),
            Err(StructureError::ArityMismatch { .. })
        ));
        assert!(matches!(parse_structure("{"), Err(StructureError::Json(_))));
    }
}
