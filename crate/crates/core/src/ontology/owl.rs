//! OWL 2 functional-style syntax, restricted to class and annotation-property
//! declarations, named-class `SubClassOf`, and `AnnotationAssertion`.
//!
//! Scaffold classes carry `rdfs:comment "scaffold"`; every class carries one
//! `rdfs:label`. Output order is fixed: class declarations by IRI, annotation
//! property declarations in declaration order, `SubClassOf` by child IRI,
//! annotation assertions by (subject, property IRI, value).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use super::{AnnotationSet, Ontology, OntologyError, ANNOTATION_PROPERTIES, BASE_IRI, ONTOLOGY_IRI};
use crate::category::Category;

const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
const SCAFFOLD_MARK: &str = "scaffold";

const PREFIXES: [(&str, &str); 6] = [
    ("", BASE_IRI),
    ("owl", "http://www.w3.org/2002/07/owl#"),
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("rdfs", RDFS),
    ("xml", "http://www.w3.org/XML/1998/namespace"),
    ("xsd", XSD),
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OwlError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unsupported construct {construct}")]
    Unsupported { line: usize, column: usize, construct: String },
    #[error("{line}:{column}: {message}")]
    Validation { line: usize, column: usize, message: String },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

struct Assertion {
    subject: String,
    property_iri: String,
    property_abbrev: String,
    value: String,
    rendered: String,
}

pub fn serialize_owl(ontology: &Ontology) -> String {
    let mut out = String::new();
    for (prefix, iri) in PREFIXES {
        let _ = writeln!(out, "Prefix({prefix}:=<{iri}>)");
    }
    let _ = writeln!(out, "\n\nOntology(<{ONTOLOGY_IRI}>\n");

    // Node ids share one base, so id order is IRI order.
    for node in ontology.nodes() {
        let _ = writeln!(out, "Declaration(Class(:{}))", node.concept_id);
    }
    for prop in ANNOTATION_PROPERTIES {
        let _ = writeln!(out, "Declaration(AnnotationProperty(:{prop}))");
    }
    out.push('\n');

    for node in ontology.nodes() {
        if let Some(parent) = &node.parent_id {
            let _ = writeln!(out, "SubClassOf(:{} :{})", node.concept_id, parent);
        }
    }
    out.push('\n');

    let mut assertions = Vec::new();
    for node in ontology.nodes() {
        let mut push = |iri: String, abbrev: String, value: String, rendered: String| {
            assertions.push(Assertion {
                subject: node.concept_id.clone(),
                property_iri: iri,
                property_abbrev: abbrev,
                value,
                rendered,
            })
        };
        push(format!("{RDFS}label"), "rdfs:label".into(), node.label.clone(), escape_literal(&node.label));
        if node.scaffold {
            push(
                format!("{RDFS}comment"),
                "rdfs:comment".into(),
                SCAFFOLD_MARK.into(),
                escape_literal(SCAFFOLD_MARK),
            );
        }
        for (prop, value) in node.annotations.pairs() {
            let rendered = if prop == "hasAthenaID" {
                format!("{}^^xsd:integer", escape_literal(&value))
            } else {
                escape_literal(&value)
            };
            push(format!("{BASE_IRI}{prop}"), format!(":{prop}"), value, rendered);
        }
    }
    assertions.sort_by(|a, b| {
        (&a.subject, &a.property_iri, &a.value).cmp(&(&b.subject, &b.property_iri, &b.value))
    });
    for a in &assertions {
        let _ = writeln!(out, "AnnotationAssertion({} :{} {})", a.property_abbrev, a.subject, a.rendered);
    }
    out.push_str(")\n");
    out
}

// ---------------------------------------------------------------------------
// Reader

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Eq,
    Iri(String),
    Name(String),
    Literal { value: String, datatype: Option<String>, lang: Option<String> },
}

fn syntax(pos: Pos, message: impl Into<String>) -> OwlError {
    OwlError::Syntax { line: pos.line, column: pos.column, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, OwlError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };

    let is_name_char = |c: char| !c.is_whitespace() && !matches!(c, '(' | ')' | '<' | '>' | '"' | '=' | '#');

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        match c {
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(&mut i, &mut line, &mut col);
                }
            }
            '(' => {
                toks.push((Tok::Open, pos));
                advance(&mut i, &mut line, &mut col);
            }
            ')' => {
                toks.push((Tok::Close, pos));
                advance(&mut i, &mut line, &mut col);
            }
            '=' => {
                toks.push((Tok::Eq, pos));
                advance(&mut i, &mut line, &mut col);
            }
            '<' => {
                advance(&mut i, &mut line, &mut col);
                let mut iri = String::new();
                loop {
                    match chars.get(i) {
                        Some('>') => break,
                        Some(c) if !c.is_whitespace() => iri.push(*c),
                        _ => return Err(syntax(pos, "unterminated IRI")),
                    }
                    advance(&mut i, &mut line, &mut col);
                }
                advance(&mut i, &mut line, &mut col);
                toks.push((Tok::Iri(iri), pos));
            }
            '"' => {
                advance(&mut i, &mut line, &mut col);
                let mut value = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(syntax(pos, "unterminated literal")),
                        Some('"') => break,
                        Some('\\') => {
                            advance(&mut i, &mut line, &mut col);
                            match chars.get(i) {
                                Some(e @ ('"' | '\\')) => value.push(*e),
                                _ => return Err(syntax(pos, "invalid escape in literal")),
                            }
                        }
                        Some(c) => value.push(*c),
                    }
                    advance(&mut i, &mut line, &mut col);
                }
                advance(&mut i, &mut line, &mut col);
                let mut datatype = None;
                let mut lang = None;
                if chars.get(i) == Some(&'^') && chars.get(i + 1) == Some(&'^') {
                    advance(&mut i, &mut line, &mut col);
                    advance(&mut i, &mut line, &mut col);
                    let dpos = Pos { line, column: col };
                    if chars.get(i) == Some(&'<') {
                        advance(&mut i, &mut line, &mut col);
                        let mut iri = String::new();
                        while i < chars.len() && chars[i] != '>' {
                            iri.push(chars[i]);
                            advance(&mut i, &mut line, &mut col);
                        }
                        if i >= chars.len() {
                            return Err(syntax(dpos, "unterminated datatype IRI"));
                        }
                        advance(&mut i, &mut line, &mut col);
                        datatype = Some(format!("<{iri}>"));
                    } else {
                        let mut name = String::new();
                        while i < chars.len() && is_name_char(chars[i]) {
                            name.push(chars[i]);
                            advance(&mut i, &mut line, &mut col);
                        }
                        if name.is_empty() {
                            return Err(syntax(dpos, "missing datatype"));
                        }
                        datatype = Some(name);
                    }
                } else if chars.get(i) == Some(&'@') {
                    advance(&mut i, &mut line, &mut col);
                    let mut tag = String::new();
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '-') {
                        tag.push(chars[i]);
                        advance(&mut i, &mut line, &mut col);
                    }
                    lang = Some(tag);
                }
                toks.push((Tok::Literal { value, datatype, lang }, pos));
            }
            _ if is_name_char(c) => {
                let mut name = String::new();
                while i < chars.len() && is_name_char(chars[i]) {
                    name.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
                toks.push((Tok::Name(name), pos));
            }
            _ => return Err(syntax(pos, format!("unexpected character {c:?}"))),
        }
    }
    Ok(toks)
}

#[derive(Debug, Clone)]
enum Sx {
    Call { name: String, args: Vec<Sx>, pos: Pos },
    Atom { tok: Tok, pos: Pos },
}

impl Sx {
    fn pos(&self) -> Pos {
        match self {
            Sx::Call { pos, .. } | Sx::Atom { pos, .. } => *pos,
        }
    }
}

struct SxParser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl SxParser {
    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.toks.get(self.at)
    }

    fn expr(&mut self) -> Result<Sx, OwlError> {
        let (tok, pos) = self.toks.get(self.at).cloned().ok_or_else(|| syntax(self.end, "unexpected end of input"))?;
        self.at += 1;
        match tok {
            Tok::Name(name) if matches!(self.peek(), Some((Tok::Open, _))) => {
                self.at += 1;
                let mut args = Vec::new();
                loop {
                    match self.peek() {
                        Some((Tok::Close, _)) => {
                            self.at += 1;
                            break;
                        }
                        Some(_) => args.push(self.expr()?),
                        None => return Err(syntax(pos, format!("unclosed {name}("))),
                    }
                }
                Ok(Sx::Call { name, args, pos })
            }
            Tok::Open | Tok::Close => Err(syntax(pos, "unexpected parenthesis")),
            tok => Ok(Sx::Atom { tok, pos }),
        }
    }
}

fn unsupported(pos: Pos, construct: impl Into<String>) -> OwlError {
    OwlError::Unsupported { line: pos.line, column: pos.column, construct: construct.into() }
}

fn invalid(pos: Pos, message: impl Into<String>) -> OwlError {
    OwlError::Validation { line: pos.line, column: pos.column, message: message.into() }
}

struct Reader {
    prefixes: HashMap<String, String>,
    classes: BTreeMap<String, Pos>,
    properties: Vec<String>,
    parents: BTreeMap<String, (String, Pos)>,
    labels: BTreeMap<String, String>,
    scaffold: BTreeSet<String>,
    annotations: BTreeMap<String, AnnotationSet>,
}

impl Reader {
    fn expand(&self, sx: &Sx) -> Result<String, OwlError> {
        match sx {
            Sx::Atom { tok: Tok::Iri(iri), .. } => Ok(iri.clone()),
            Sx::Atom { tok: Tok::Name(name), pos } => self.expand_name(name, *pos),
            other => Err(unsupported(other.pos(), "non-IRI entity expression")),
        }
    }

    fn expand_name(&self, name: &str, pos: Pos) -> Result<String, OwlError> {
        let (prefix, local) = name
            .split_once(':')
            .ok_or_else(|| syntax(pos, format!("expected an IRI, found {name:?}")))?;
        let base = self
            .prefixes
            .get(prefix)
            .ok_or_else(|| invalid(pos, format!("undeclared prefix {prefix:?}")))?;
        Ok(format!("{base}{local}"))
    }

    fn class_id(&self, sx: &Sx) -> Result<String, OwlError> {
        let pos = sx.pos();
        let iri = match sx {
            Sx::Call { name, .. } => return Err(unsupported(pos, format!("class expression {name}"))),
            _ => self.expand(sx)?,
        };
        iri.strip_prefix(BASE_IRI)
            .map(str::to_string)
            .ok_or_else(|| invalid(pos, format!("class IRI {iri} is outside {BASE_IRI}")))
    }

    fn declared_class(&self, sx: &Sx) -> Result<String, OwlError> {
        let id = self.class_id(sx)?;
        if !self.classes.contains_key(&id) {
            return Err(invalid(sx.pos(), format!("class {id:?} is not declared")));
        }
        Ok(id)
    }

    fn axiom(&mut self, sx: &Sx) -> Result<(), OwlError> {
        let (name, args, pos) = match sx {
            Sx::Call { name, args, pos } => (name.as_str(), args, *pos),
            Sx::Atom { pos, .. } => return Err(syntax(*pos, "expected an axiom")),
        };
        match name {
            "Declaration" => {
                let [Sx::Call { name: kind, args: inner, pos: ipos }] = args.as_slice() else {
                    return Err(syntax(pos, "Declaration takes one entity"));
                };
                let [entity] = inner.as_slice() else {
                    return Err(syntax(*ipos, format!("{kind} takes one IRI")));
                };
                match kind.as_str() {
                    "Class" => {
                        let id = self.class_id(entity)?;
                        if self.classes.insert(id.clone(), *ipos).is_some() {
                            return Err(invalid(*ipos, format!("class {id:?} declared twice")));
                        }
                    }
                    "AnnotationProperty" => {
                        let iri = self.expand(entity)?;
                        let prop = iri
                            .strip_prefix(BASE_IRI)
                            .filter(|p| ANNOTATION_PROPERTIES.contains(p))
                            .ok_or_else(|| unsupported(*ipos, format!("annotation property {iri}")))?;
                        if self.properties.iter().any(|p| p == prop) {
                            return Err(invalid(*ipos, format!("annotation property {prop} declared twice")));
                        }
                        self.properties.push(prop.to_string());
                    }
                    other => return Err(unsupported(*ipos, format!("Declaration({other})"))),
                }
            }
            "SubClassOf" => {
                let [child, parent] = args.as_slice() else {
                    return Err(unsupported(pos, "SubClassOf with axiom annotations"));
                };
                let child_id = self.declared_class(child)?;
                let parent_id = self.declared_class(parent)?;
                if self.parents.insert(child_id.clone(), (parent_id, pos)).is_some() {
                    return Err(invalid(pos, format!("class {child_id:?} has more than one parent")));
                }
            }
            "AnnotationAssertion" => {
                let [prop, subject, value] = args.as_slice() else {
                    return Err(unsupported(pos, "AnnotationAssertion with axiom annotations"));
                };
                let prop_iri = self.expand(prop)?;
                let subject_id = self.declared_class(subject)?;
                let Sx::Atom { tok: Tok::Literal { value, datatype, lang }, pos: vpos } = value else {
                    return Err(unsupported(value.pos(), "non-literal annotation value"));
                };
                if let Some(dt) = datatype {
                    let dt_iri = if let Some(inner) = dt.strip_prefix('<') {
                        inner.trim_end_matches('>').to_string()
                    } else {
                        self.expand_name(dt, *vpos)?
                    };
                    let allowed = [format!("{XSD}string"), format!("{XSD}integer")];
                    if !allowed.contains(&dt_iri) {
                        return Err(unsupported(*vpos, format!("literal datatype {dt_iri}")));
                    }
                }
                if lang.is_some() {
                    return Err(unsupported(*vpos, "language-tagged literal"));
                }
                if prop_iri == format!("{RDFS}label") {
                    if self.labels.insert(subject_id.clone(), value.clone()).is_some() {
                        return Err(invalid(pos, format!("class {subject_id:?} has more than one label")));
                    }
                } else if prop_iri == format!("{RDFS}comment") {
                    if value != SCAFFOLD_MARK {
                        return Err(unsupported(*vpos, format!("rdfs:comment {value:?}")));
                    }
                    self.scaffold.insert(subject_id);
                } else if let Some(name) = prop_iri.strip_prefix(BASE_IRI).filter(|p| ANNOTATION_PROPERTIES.contains(p)) {
                    if !self.properties.iter().any(|p| p == name) {
                        return Err(invalid(prop.pos(), format!("annotation property {name} is not declared")));
                    }
                    let prop = name;
                    let set = self.annotations.entry(subject_id.clone()).or_default();
                    let single = matches!(prop, "hasUMLS" | "hasAthenaID");
                    if single && ((prop == "hasUMLS" && set.has_umls.is_some()) || (prop == "hasAthenaID" && set.has_athena_id.is_some())) {
                        return Err(invalid(pos, format!("class {subject_id:?} has more than one {prop}")));
                    }
                    set.set(prop, value).map_err(|m| invalid(*vpos, m))?;
                } else {
                    return Err(unsupported(prop.pos(), format!("annotation property {prop_iri}")));
                }
            }
            other => return Err(unsupported(pos, other)),
        }
        Ok(())
    }

    fn finish(self, end: Pos) -> Result<Ontology, OwlError> {
        if self.properties != ANNOTATION_PROPERTIES {
            return Err(invalid(
                end,
                format!("expected annotation properties {ANNOTATION_PROPERTIES:?}, found {:?}", self.properties),
            ));
        }
        let mut roots = BTreeMap::new();
        for (id, pos) in &self.classes {
            if self.parents.contains_key(id) {
                continue;
            }
            let category: Category = id
                .parse()
                .ok()
                .filter(|c: &Category| c.as_str() == id)
                .ok_or_else(|| invalid(*pos, format!("class {id:?} has no parent and is not a category root")))?;
            roots.insert(category, self.labels.get(id).cloned().unwrap_or_else(|| id.clone()));
        }
        if let Some(missing) = Category::ALL.into_iter().find(|c| !roots.contains_key(c)) {
            return Err(invalid(end, format!("missing category root {missing}")));
        }
        let mut ontology = Ontology::with_roots(&roots);
        for root in Category::ALL {
            let id = root.as_str();
            if !self.scaffold.contains(id) {
                return Err(invalid(self.classes[id], format!("category root {id} is not marked scaffold")));
            }
            if self.annotations.get(id).is_some_and(|a| !a.is_empty()) {
                let node = ontology.nodes.get_mut(id).expect("root exists");
                node.annotations = self.annotations[id].clone();
            }
        }

        let mut children: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (child, (parent, _)) in &self.parents {
            children.entry(parent.as_str()).or_default().push(child.as_str());
        }
        let mut queue: Vec<&str> = Category::ALL.iter().map(|c| c.as_str()).collect();
        while let Some(parent) = queue.pop() {
            let category = ontology.get(parent).expect("queued nodes exist").category;
            for &child in children.get(parent).map(Vec::as_slice).unwrap_or_default() {
                let label = self.labels.get(child).map(String::as_str).unwrap_or(child);
                let annotations = self.annotations.get(child).cloned().unwrap_or_default();
                ontology.insert_node(child, label, category, Some(parent), annotations, self.scaffold.contains(child))?;
                queue.push(child);
            }
        }
        if let Some((id, (_, pos))) = self.parents.iter().find(|(id, _)| !ontology.contains(id)) {
            return Err(invalid(*pos, format!("class {id:?} is on a parent cycle")));
        }
        Ok(ontology)
    }
}

pub fn parse_owl(text: &str) -> Result<Ontology, OwlError> {
    let toks = tokenize(text)?;
    let end = Pos {
        line: text.lines().count().max(1),
        column: 1,
    };
    let mut parser = SxParser { toks, at: 0, end };
    let mut reader = Reader {
        prefixes: HashMap::new(),
        classes: BTreeMap::new(),
        properties: Vec::new(),
        parents: BTreeMap::new(),
        labels: BTreeMap::new(),
        scaffold: BTreeSet::new(),
        annotations: BTreeMap::new(),
    };

    let mut saw_ontology = false;
    while parser.peek().is_some() {
        let sx = parser.expr()?;
        match &sx {
            Sx::Call { name, args, pos } if name == "Prefix" => {
                if saw_ontology {
                    return Err(syntax(*pos, "Prefix after Ontology"));
                }
                match args.as_slice() {
                    [Sx::Atom { tok: Tok::Name(p), .. }, Sx::Atom { tok: Tok::Eq, .. }, Sx::Atom { tok: Tok::Iri(iri), .. }]
                        if p.ends_with(':') =>
                    {
                        reader.prefixes.insert(p.trim_end_matches(':').to_string(), iri.clone());
                    }
                    _ => return Err(syntax(*pos, "malformed Prefix declaration")),
                }
            }
            Sx::Call { name, args, pos } if name == "Ontology" => {
                if saw_ontology {
                    return Err(syntax(*pos, "more than one Ontology"));
                }
                saw_ontology = true;
                let mut rest = args.as_slice();
                // optional ontology IRI and version IRI
                for _ in 0..2 {
                    if let Some(Sx::Atom { tok: Tok::Iri(_), .. }) = rest.first() {
                        rest = &rest[1..];
                    }
                }
                for axiom in rest {
                    reader.axiom(axiom)?;
                }
            }
            other => {
                let construct = match other {
                    Sx::Call { name, .. } => name.clone(),
                    Sx::Atom { tok, .. } => format!("{tok:?}"),
                };
                return Err(unsupported(other.pos(), construct));
            }
        }
    }
    if !saw_ontology {
        return Err(syntax(end, "no Ontology(...) block"));
    }
    reader.finish(end)
}
