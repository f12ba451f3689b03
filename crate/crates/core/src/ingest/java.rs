//! Lexical Java scanner.
//!
//! Not a parser. Comments and literals are blanked, the remainder is split
//! into identifiers and single-character punctuation, and declarations are
//! recognised by brace depth: top-level types at depth 0, their methods and
//! constructors at depth 1. Nested types are skipped.

use std::fs;
use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use crate::error::{EncapError, Result};
use crate::model::{LabeledCodebase, Visibility};

/// Display label of the unnamed package (stored as `""`).
pub const DEFAULT_PACKAGE_LABEL: &str = "(default)";

pub fn display_region_name(name: &str) -> &str {
    if name.is_empty() {
        DEFAULT_PACKAGE_LABEL
    } else {
        name
    }
}

/// Result of scanning a source tree.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanReport {
    pub codebase: LabeledCodebase,
    pub files_scanned: usize,
    /// Files that could not be read, with the reason.
    pub skipped: Vec<(PathBuf, String)>,
}

/// Replaces comments, string/char literals and text blocks with spaces,
/// keeping line breaks.
pub fn strip_comments_and_literals(src: &str) -> String {
    let chars: Vec<char> = src.chars().collect();
    let mut out = String::with_capacity(src.len());
    let mut i = 0;
    let blank = |c: char, out: &mut String| out.push(if c == '\n' { '\n' } else { ' ' });
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        if c == '/' && next == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '/' && next == Some('*') {
            out.push(' ');
            i += 2;
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                blank(chars[i], &mut out);
                i += 1;
            }
            i += 2;
        } else if c == '"' && next == Some('"') && chars.get(i + 2) == Some(&'"') {
            out.push(' ');
            i += 3;
            while i < chars.len() && !chars[i..].starts_with(&['"', '"', '"']) {
                if chars[i] == '\\' {
                    i += 1;
                }
                if let Some(&ch) = chars.get(i) {
                    blank(ch, &mut out);
                }
                i += 1;
            }
            i += 3;
        } else if c == '"' || c == '\'' {
            out.push(' ');
            i += 1;
            while i < chars.len() && chars[i] != c && chars[i] != '\n' {
                if chars[i] == '\\' {
                    i += 1;
                }
                i += 1;
            }
            i += 1;
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Punct(char),
}

impl Tok {
    fn is(&self, word: &str) -> bool {
        matches!(self, Tok::Ident(s) if s == word)
    }

    fn ident(&self) -> Option<&str> {
        match self {
            Tok::Ident(s) => Some(s),
            Tok::Punct(_) => None,
        }
    }
}

fn tokenize(stripped: &str) -> Vec<Tok> {
    let mut toks = Vec::new();
    let mut chars = stripped.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_alphabetic() || c == '_' || c == '$' {
            let mut word = String::from(c);
            while let Some(&d) = chars.peek() {
                if d.is_alphanumeric() || d == '_' || d == '$' {
                    word.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            toks.push(Tok::Ident(word));
        } else if c.is_ascii_digit() {
            while chars.peek().is_some_and(|d| d.is_alphanumeric() || *d == '_' || *d == '.') {
                chars.next();
            }
        } else if !c.is_whitespace() {
            toks.push(Tok::Punct(c));
        }
    }
    toks
}

/// Type keyword position and declared name within a declaration header.
fn type_declaration(header: &[Tok]) -> Option<(usize, String)> {
    for (i, t) in header.iter().enumerate() {
        let after_dot = i > 0 && header[i - 1] == Tok::Punct('.');
        if after_dot {
            continue;
        }
        let is_kw = t.is("class") || t.is("interface") || t.is("enum");
        let is_record = t.is("record")
            && header.get(i + 2).is_some_and(|n| *n == Tok::Punct('(') || *n == Tok::Punct('<'));
        if is_kw || is_record {
            if let Some(name) = header.get(i + 1).and_then(Tok::ident) {
                return Some((i, name.to_owned()));
            }
        }
    }
    None
}

const NOT_METHODS: &[&str] = &[
    "if", "for", "while", "switch", "catch", "synchronized", "return", "new", "throw", "super", "this",
    "try", "do", "else", "assert",
];

/// Method or constructor name declared by a member header, if any.
fn method_name(header: &[Tok]) -> Option<String> {
    if type_declaration(header).is_some() {
        return None;
    }
    let mut parens = 0i32;
    for (i, t) in header.iter().enumerate() {
        match t {
            Tok::Punct('(') => {
                if parens == 0 {
                    let name = i.checked_sub(1).and_then(|j| header[j].ident());
                    if let Some(name) = name {
                        if !NOT_METHODS.contains(&name) {
                            return Some(name.to_owned());
                        }
                    }
                }
                parens += 1;
            }
            Tok::Punct(')') => parens -= 1,
            Tok::Punct('=') if parens == 0 => return None,
            _ => {}
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct TypeDecl {
    name: String,
    public: bool,
    // (name, is_private)
    methods: Vec<(String, bool)>,
}

#[derive(Debug, Default)]
struct FileModel {
    package: String,
    types: Vec<TypeDecl>,
}

fn scan_source(src: &str) -> FileModel {
    let toks = tokenize(&strip_comments_and_literals(src));
    let mut model = FileModel::default();
    let mut depth = 0usize;
    let mut header: Vec<Tok> = Vec::new();
    // index into model.types of the type whose body is open at depth 1
    let mut current: Option<usize> = None;
    let mut enum_constants = false;
    let mut parens = 0i32;
    let mut i = 0;
    while i < toks.len() {
        let t = &toks[i];
        // annotations: skip their argument lists
        if *t == Tok::Punct('@') && toks.get(i + 1).is_some_and(|n| !n.is("interface")) {
            i += 2;
            while toks.get(i) == Some(&Tok::Punct('.')) {
                i += 2;
            }
            if toks.get(i) == Some(&Tok::Punct('(')) {
                let mut level = 0;
                while i < toks.len() {
                    match toks[i] {
                        Tok::Punct('(') => level += 1,
                        Tok::Punct(')') => level -= 1,
                        _ => {}
                    }
                    i += 1;
                    if level == 0 {
                        break;
                    }
                }
            }
            continue;
        }
        match (depth, t) {
            (0, Tok::Punct('{')) => {
                current = type_declaration(&header).map(|(kw, name)| {
                    enum_constants = header[kw].is("enum");
                    model.types.push(TypeDecl {
                        name,
                        public: header[..kw].iter().any(|h| h.is("public")),
                        methods: Vec::new(),
                    });
                    model.types.len() - 1
                });
                depth = 1;
                parens = 0;
                header.clear();
            }
            (0, Tok::Punct(';')) => {
                if header.first().is_some_and(|h| h.is("package")) {
                    model.package = header[1..]
                        .iter()
                        .map(|h| match h {
                            Tok::Ident(s) => s.as_str(),
                            Tok::Punct(_) => ".",
                        })
                        .collect();
                }
                header.clear();
            }
            (0, Tok::Punct('}')) => header.clear(),
            (0, _) => header.push(t.clone()),
            (1, Tok::Punct('(')) => {
                parens += 1;
                header.push(t.clone());
            }
            (1, Tok::Punct(')')) => {
                parens -= 1;
                header.push(t.clone());
            }
            (1, Tok::Punct(';')) if parens == 0 => {
                if enum_constants {
                    enum_constants = false;
                } else if let (Some(ti), Some(name)) = (current, method_name(&header)) {
                    let private = header.iter().any(|h| h.is("private"));
                    model.types[ti].methods.push((name, private));
                }
                header.clear();
            }
            (1, Tok::Punct('{')) => {
                if !enum_constants {
                    if let (Some(ti), Some(name)) = (current, method_name(&header)) {
                        let private = header.iter().any(|h| h.is("private"));
                        model.types[ti].methods.push((name, private));
                    }
                    header.clear();
                }
                depth = 2;
            }
            (1, Tok::Punct('}')) => {
                depth = 0;
                current = None;
                enum_constants = false;
                header.clear();
            }
            (1, _) => header.push(t.clone()),
            (_, Tok::Punct('{')) => depth += 1,
            (_, Tok::Punct('}')) => {
                depth -= 1;
                if depth == 1 && !enum_constants {
                    header.clear();
                }
            }
            _ => {}
        }
        i += 1;
    }
    model
}

fn java_files(root: &Path) -> Result<Vec<PathBuf>> {
    if !root.is_dir() {
        return Err(EncapError::Io {
            path: root.to_path_buf(),
            message: "not a readable directory".into(),
        });
    }
    let mut files: Vec<PathBuf> = WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file() && e.path().extension().is_some_and(|x| x == "java"))
        .map(|e| e.into_path())
        .collect();
    files.sort();
    Ok(files)
}

fn scan_with<F>(root: &Path, mut add: F) -> Result<ScanReport>
where
    F: FnMut(&FileModel, &mut LabeledCodebase),
{
    let mut report = ScanReport::default();
    for path in java_files(root)? {
        match fs::read(&path) {
            Ok(bytes) => {
                let model = scan_source(&String::from_utf8_lossy(&bytes));
                add(&model, &mut report.codebase);
                report.files_scanned += 1;
            }
            Err(e) => report.skipped.push((path, e.to_string())),
        }
    }
    Ok(report)
}

/// Class/package graph: each top-level type is a node of its package's
/// region, violating iff declared `public`.
pub fn scan_java_tree(root: &Path) -> Result<ScanReport> {
    scan_with(root, |model, cb| {
        cb.touch_region(&model.package);
        for ty in &model.types {
            let vis = if ty.public { Visibility::Public } else { Visibility::Hidden };
            cb.add(&model.package, ty.name.clone(), vis);
        }
    })
}

/// Function/program-unit graph: each top-level type is a region (named
/// `package.Type`), its methods and constructors are nodes, violating
/// unless declared `private`.
pub fn function_graph_scan(root: &Path) -> Result<ScanReport> {
    scan_with(root, |model, cb| {
        for ty in &model.types {
            let region = if model.package.is_empty() {
                ty.name.clone()
            } else {
                format!("{}.{}", model.package, ty.name)
            };
            cb.touch_region(&region);
            for (name, private) in &ty.methods {
                let vis = if *private { Visibility::Hidden } else { Visibility::Public };
                cb.add(&region, name.clone(), vis);
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stripping_blanks_decoys() {
        let src = "a /* public class X {} */ b // class Y {\n\"class Z {\" 'c' '\\'' \"\"\"\nclass Q {\n\"\"\" end";
        let out = strip_comments_and_literals(src);
        assert!(!out.contains("class"));
        assert!(out.contains('a') && out.contains('b') && out.contains("end"));
        assert_eq!(out.matches('\n').count(), src.matches('\n').count());
    }

    #[test]
    fn top_level_types() {
        let m = scan_source(
            "package com.rail;\nimport java.util.List;\n@Deprecated(since = \"1\")\npublic final class Train { class Inner {} }\ninterface Track {}\npublic enum Signal { RED, GREEN }\n@interface Marker {}\nrecord Point(int x, int y) {}\n",
        );
        assert_eq!(m.package, "com.rail");
        let got: Vec<(&str, bool)> = m.types.iter().map(|t| (t.name.as_str(), t.public)).collect();
        assert_eq!(
            got,
            vec![("Train", true), ("Track", false), ("Signal", true), ("Marker", false), ("Point", false)]
        );
    }

    #[test]
    fn methods_of_car() {
        let m = scan_source(
            "package p;\nclass Car {\n  private int speed = compute(3);\n  Runnable r = () -> { go(); };\n  public Car() {}\n  public void go() { if (x) { stop(); } }\n  void stop() {}\n  private void alarm() {}\n  static { init(); }\n  class Wheel { void spin() {} }\n}\n",
        );
        let car = &m.types[0];
        assert_eq!(car.name, "Car");
        let names: Vec<&str> = car.methods.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["Car", "go", "stop", "alarm"]);
        assert_eq!(car.methods.iter().filter(|(_, private)| !private).count(), 3);
    }

    #[test]
    fn enum_constants_and_abstract_methods() {
        let m = scan_source(
            "enum Op { PLUS(\"+\") { int apply() { return 1; } }, MINUS(\"-\"); Op(String s) {} abstract int apply(); }\ninterface Shape { double area(); default String name() { return \"s\"; } }",
        );
        let op: Vec<&str> = m.types[0].methods.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(op, vec!["Op", "apply"]);
        let shape: Vec<&str> = m.types[1].methods.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(shape, vec!["area", "name"]);
        assert_eq!(m.package, "");
    }

    #[test]
    fn class_literal_is_not_a_declaration() {
        let m = scan_source("@Runs(Foo.class)\nclass Bar {}");
        assert_eq!(m.types.len(), 1);
        assert_eq!(m.types[0].name, "Bar");
    }
}
