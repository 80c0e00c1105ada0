//! Line-oriented definition files.
//!
//! ```text
//! # comment
//! [sesquiad F1]
//! preset f1
//!
//! [module Z over F1]
//! free 1
//!
//! [task h]
//! run invariants Z
//! ```
//!
//! A section header names the kind and the object; every following line is a
//! key and whitespace-separated arguments. The parser checks keys and arity
//! only; names and algebra are checked when the workspace is built.

use std::fmt;

/// 1-based line and column. Positions never take part in equality, so a
/// parsed file equals the parse of its own serialization.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Sesquiad,
    Space,
    Module,
    Hom,
    Map,
    Sheaf,
    Task,
}

impl Kind {
    fn parse(s: &str) -> Option<Kind> {
        Some(match s {
            "sesquiad" => Kind::Sesquiad,
            "space" => Kind::Space,
            "module" => Kind::Module,
            "hom" => Kind::Hom,
            "map" => Kind::Map,
            "sheaf" => Kind::Sheaf,
            "task" => Kind::Task,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Sesquiad => "sesquiad",
            Kind::Space => "space",
            Kind::Module => "module",
            Kind::Hom => "hom",
            Kind::Map => "map",
            Kind::Sheaf => "sheaf",
            Kind::Task => "task",
        }
    }

    /// Header words after the name: `over S`, `from A to B`.
    fn header_words(self) -> &'static [&'static str] {
        match self {
            Kind::Module => &["over"],
            Kind::Hom | Kind::Map => &["from", "to"],
            _ => &[],
        }
    }

    /// Allowed keys with their minimum and maximum argument counts.
    fn keys(self) -> &'static [(&'static str, usize, usize)] {
        const MANY: usize = usize::MAX;
        match self {
            Kind::Sesquiad => &[
                ("preset", 1, 1),
                ("ring", 1, 2),
                ("elements", 1, MANY),
                ("zero", 1, 1),
                ("one", 1, 1),
                ("mul", 2, MANY),
                ("fact", 3, MANY),
            ],
            Kind::Space => &[("preset", 1, 1), ("points", 0, MANY), ("less", 2, 2)],
            Kind::Module => &[
                ("free", 1, 1),
                ("rank", 1, 1),
                ("relation", 1, MANY),
                ("action", 2, MANY),
                ("point", 1, MANY),
            ],
            Kind::Hom => &[("matrix", 0, MANY)],
            Kind::Map => &[("send", 2, 2)],
            Kind::Sheaf => &[
                ("space", 1, 1),
                ("over", 1, 1),
                ("module", 1, 1),
                ("stalk", 2, 2),
                ("restrict", 3, MANY),
            ],
            Kind::Task => &[("run", 1, MANY)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: Token,
    pub args: Vec<Token>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub kind: Kind,
    pub name: Token,
    /// Names following the header words, e.g. the base of a module.
    pub refs: Vec<Token>,
    pub entries: Vec<Entry>,
    pub pos: Pos,
}

impl Section {
    pub fn entries(&self, key: &str) -> Vec<&Entry> {
        self.entries.iter().filter(|e| e.key.text == key).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefinitionFile {
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormatError {
    Syntax { pos: Pos, message: String },
    UnknownReference { pos: Pos, name: String },
    InvariantViolation { pos: Pos, message: String },
}

impl FormatError {
    pub fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        FormatError::Syntax {
            pos,
            message: message.into(),
        }
    }

    pub fn unknown(token: &Token) -> Self {
        FormatError::UnknownReference {
            pos: token.pos,
            name: token.text.clone(),
        }
    }

    pub fn invariant(pos: Pos, message: impl Into<String>) -> Self {
        FormatError::InvariantViolation {
            pos,
            message: message.into(),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            FormatError::Syntax { pos, .. }
            | FormatError::UnknownReference { pos, .. }
            | FormatError::InvariantViolation { pos, .. } => *pos,
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Syntax { pos, message } => write!(f, "{pos}: syntax error: {message}"),
            FormatError::UnknownReference { pos, name } => {
                write!(f, "{pos}: unknown reference `{name}`")
            }
            FormatError::InvariantViolation { pos, message } => {
                write!(f, "{pos}: invariant violation: {message}")
            }
        }
    }
}

impl std::error::Error for FormatError {}

fn tokenize(line: &str, lineno: usize) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::new();
    let mut current: Option<Token> = None;
    for (i, ch) in line.chars().enumerate() {
        if ch.is_whitespace() {
            out.extend(current.take());
        } else {
            current
                .get_or_insert_with(|| Token {
                    text: String::new(),
                    pos: Pos {
                        line: lineno,
                        col: i + 1,
                    },
                })
                .text
                .push(ch);
        }
    }
    out.extend(current);
    out
}

fn parse_header(body: &str, lineno: usize, col: usize) -> Result<Section, FormatError> {
    let pos = Pos { line: lineno, col };
    let words: Vec<Token> = tokenize(body, lineno)
        .into_iter()
        .map(|t| Token {
            pos: Pos {
                line: lineno,
                col: t.pos.col + col,
            },
            ..t
        })
        .collect();
    let Some(kind_tok) = words.first() else {
        return Err(FormatError::syntax(pos, "empty section header"));
    };
    let kind = Kind::parse(&kind_tok.text).ok_or_else(|| {
        FormatError::syntax(
            kind_tok.pos,
            format!("unknown section kind `{}`", kind_tok.text),
        )
    })?;
    let name = words
        .get(1)
        .cloned()
        .ok_or_else(|| FormatError::syntax(pos, "section needs a name"))?;
    let expected = kind.header_words();
    let rest = &words[2..];
    if rest.len() != 2 * expected.len() {
        let shape: Vec<String> = expected.iter().map(|w| format!("{w} NAME")).collect();
        return Err(FormatError::syntax(
            pos,
            format!(
                "expected `[{} NAME{}{}]`",
                kind.as_str(),
                if shape.is_empty() { "" } else { " " },
                shape.join(" ")
            ),
        ));
    }
    let mut refs = Vec::with_capacity(expected.len());
    for (pair, word) in rest.chunks(2).zip(expected) {
        if pair[0].text != *word {
            return Err(FormatError::syntax(
                pair[0].pos,
                format!("expected `{word}`, found `{}`", pair[0].text),
            ));
        }
        refs.push(pair[1].clone());
    }
    Ok(Section {
        kind,
        name,
        refs,
        entries: Vec::new(),
        pos,
    })
}

pub fn parse(text: &str) -> Result<DefinitionFile, FormatError> {
    let mut file = DefinitionFile::default();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        if let Some(body) = trimmed.strip_prefix('[') {
            let body = body.trim_end();
            let Some(body) = body.strip_suffix(']') else {
                return Err(FormatError::syntax(
                    Pos {
                        line: lineno,
                        col: indent + 1,
                    },
                    "unterminated section header",
                ));
            };
            file.sections.push(parse_header(body, lineno, indent + 1)?);
            continue;
        }
        let mut tokens = tokenize(line, lineno);
        let key = tokens.remove(0);
        let Some(section) = file.sections.last_mut() else {
            return Err(FormatError::syntax(key.pos, "entry outside of any section"));
        };
        let Some(&(_, min, max)) = section.kind.keys().iter().find(|(k, _, _)| *k == key.text)
        else {
            return Err(FormatError::syntax(
                key.pos,
                format!(
                    "unknown key `{}` in {} section",
                    key.text,
                    section.kind.as_str()
                ),
            ));
        };
        if tokens.len() < min || tokens.len() > max {
            return Err(FormatError::syntax(
                key.pos,
                format!(
                    "`{}` takes {} arguments, found {}",
                    key.text,
                    arity(min, max),
                    tokens.len()
                ),
            ));
        }
        section.entries.push(Entry { key, args: tokens });
    }
    Ok(file)
}

fn arity(min: usize, max: usize) -> String {
    if min == max {
        min.to_string()
    } else if max == usize::MAX {
        format!("at least {min}")
    } else {
        format!("{min} to {max}")
    }
}

/// Canonical text: one blank line between sections, single spaces, no
/// comments.
pub fn serialize(file: &DefinitionFile) -> String {
    let mut out = String::new();
    for (i, s) in file.sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push('[');
        out.push_str(s.kind.as_str());
        out.push(' ');
        out.push_str(&s.name.text);
        for (word, r) in s.kind.header_words().iter().zip(&s.refs) {
            out.push(' ');
            out.push_str(word);
            out.push(' ');
            out.push_str(&r.text);
        }
        out.push_str("]\n");
        for e in &s.entries {
            out.push_str(&e.key.text);
            for a in &e.args {
                out.push(' ');
                out.push_str(&a.text);
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_point_at_words() {
        let t = tokenize("  mul  a : b", 4);
        let cols: Vec<usize> = t.iter().map(|t| t.pos.col).collect();
        assert_eq!(cols, vec![3, 8, 10, 12]);
        assert_eq!(t[3].text, "b");
    }

    #[test]
    fn header_shapes() {
        let f = parse("[hom f from M to N]\nmatrix 1 / 2\n").unwrap();
        assert_eq!(
            f.sections[0]
                .refs
                .iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>(),
            ["M", "N"]
        );
        let e = parse("[module M from S]\n").unwrap_err();
        assert!(matches!(
            e,
            FormatError::Syntax {
                pos: Pos { line: 1, .. },
                ..
            }
        ));
    }

    #[test]
    fn rejects_unknown_keys_with_location() {
        let e = parse("[space X]\npoints a b\n  colour a red\n").unwrap_err();
        assert_eq!(e.pos(), Pos { line: 3, col: 3 });
        assert!(e.to_string().starts_with("3:3: syntax error"));
    }

    #[test]
    fn serialization_round_trips() {
        let text = "# header\n[sesquiad A]   # trailing\n  elements 0 1\nfact 1 + 1 = 0\n\n[task t]\nrun spec A\n";
        let f = parse(text).unwrap();
        let s = serialize(&f);
        assert_eq!(parse(&s).unwrap(), f);
        assert_eq!(serialize(&parse(&s).unwrap()), s);
    }
}
