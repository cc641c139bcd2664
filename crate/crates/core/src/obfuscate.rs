//! Source-program obfuscation: systematic renaming of user-defined function
//! and variable names to FUNC_i / VAR_j surface forms.
//!
//! The renamer is lexical, not AST-based: it tokenizes Python, collects
//! definition sites (def names, parameters, assignment and loop targets),
//! and rewrites every non-attribute occurrence of a collected name. Strings,
//! comments, keywords, and builtins are untouched. Renaming the same surface
//! name to the same replacement everywhere preserves shadowing, so the
//! transformation is semantics-preserving on the corpus it targets.

use crate::error::{Error, Result};
use crate::lang::Language;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// Ordered original -> replacement maps produced by obfuscation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ObfuscationMap {
    pub function_renames: Vec<(String, String)>,
    pub variable_renames: Vec<(String, String)>,
}

impl ObfuscationMap {
    pub fn is_empty(&self) -> bool {
        self.function_renames.is_empty() && self.variable_renames.is_empty()
    }

    fn lookup(&self) -> HashMap<&str, &str> {
        self.function_renames
            .iter()
            .chain(self.variable_renames.iter())
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect()
    }

    /// Replacement for the entry-point function, when it was renamed.
    pub fn entry_rename(&self, original: &str) -> Option<&str> {
        self.function_renames
            .iter()
            .find(|(k, _)| k == original)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TokKind {
    Ident,
    Number,
    Str,
    Op,
    Newline,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    start: usize,
    end: usize,
}

const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class",
    "continue", "def", "del", "elif", "else", "except", "finally", "for", "from", "global",
    "if", "import", "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return",
    "try", "while", "with", "yield",
];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_cont(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Tokenizes Python source. Strings (including triple-quoted and prefixed
/// forms) and comments become opaque tokens; f-string interiors are treated
/// as string content.
fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes: Vec<char> = src.chars().collect();
    // Byte offsets per char index, so spans index into the original string.
    let mut offsets = Vec::with_capacity(bytes.len() + 1);
    let mut off = 0;
    for c in &bytes {
        offsets.push(off);
        off += c.len_utf8();
    }
    offsets.push(off);

    let mut toks = Vec::new();
    let mut i = 0;
    let n = bytes.len();
    while i < n {
        let c = bytes[i];
        if c == '\n' {
            toks.push(Token {
                kind: TokKind::Newline,
                start: offsets[i],
                end: offsets[i + 1],
            });
            i += 1;
        } else if c == ' ' || c == '\t' || c == '\r' {
            i += 1;
        } else if c == '\\' && i + 1 < n && bytes[i + 1] == '\n' {
            i += 2; // explicit line continuation
        } else if c == '#' {
            while i < n && bytes[i] != '\n' {
                i += 1;
            }
        } else if is_ident_start(c) {
            let start = i;
            while i < n && is_ident_cont(bytes[i]) {
                i += 1;
            }
            let word: String = bytes[start..i].iter().collect();
            // String prefix (r"", f'', rb"" ...) directly followed by a quote.
            let lower = word.to_ascii_lowercase();
            let is_prefix = word.len() <= 2
                && lower.chars().all(|c| "rbfu".contains(c))
                && i < n
                && (bytes[i] == '"' || bytes[i] == '\'');
            if is_prefix {
                let end = scan_string(&bytes, i)?;
                toks.push(Token {
                    kind: TokKind::Str,
                    start: offsets[start],
                    end: offsets[end],
                });
                i = end;
            } else {
                toks.push(Token {
                    kind: TokKind::Ident,
                    start: offsets[start],
                    end: offsets[i],
                });
            }
        } else if c == '"' || c == '\'' {
            let end = scan_string(&bytes, i)?;
            toks.push(Token {
                kind: TokKind::Str,
                start: offsets[i],
                end: offsets[end],
            });
            i = end;
        } else if c.is_ascii_digit() || (c == '.' && i + 1 < n && bytes[i + 1].is_ascii_digit()) {
            let start = i;
            while i < n && (is_ident_cont(bytes[i]) || bytes[i] == '.') {
                i += 1;
            }
            toks.push(Token {
                kind: TokKind::Number,
                start: offsets[start],
                end: offsets[i],
            });
        } else {
            // Multi-char operators matter only where lookahead depends on
            // them ('==' vs '=', '->', augmented assigns).
            let start = i;
            let two: String = bytes[i..n.min(i + 2)].iter().collect();
            let three: String = bytes[i..n.min(i + 3)].iter().collect();
            let len = if ["**=", "//=", ">>=", "<<=", "..."].contains(&three.as_str()) {
                3
            } else if [
                "==", "!=", "<=", ">=", "->", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
                "**", "//", "<<", ">>", ":=",
            ]
            .contains(&two.as_str())
            {
                2
            } else {
                1
            };
            i += len;
            toks.push(Token {
                kind: TokKind::Op,
                start: offsets[start],
                end: offsets[i],
            });
        }
    }
    Ok(toks)
}

fn scan_string(bytes: &[char], start: usize) -> Result<usize> {
    let quote = bytes[start];
    let n = bytes.len();
    let triple = start + 2 < n && bytes[start + 1] == quote && bytes[start + 2] == quote;
    let mut i = start + if triple { 3 } else { 1 };
    while i < n {
        if bytes[i] == '\\' {
            i += 2;
            continue;
        }
        if triple {
            if bytes[i] == quote && i + 2 < n + 1 && i + 2 <= n - 0 {
                if i + 2 < n && bytes[i + 1] == quote && bytes[i + 2] == quote {
                    return Ok(i + 3);
                }
            }
            i += 1;
        } else {
            if bytes[i] == quote {
                return Ok(i + 1);
            }
            if bytes[i] == '\n' {
                return Err(Error::Obfuscation("unterminated string literal".into()));
            }
            i += 1;
        }
    }
    Err(Error::Obfuscation("unterminated string literal".into()))
}

/// Collected definition sites, in first-occurrence order.
struct Collector {
    functions: Vec<String>,
    variables: Vec<String>,
    globals: BTreeSet<String>,
}

impl Collector {
    fn add_function(&mut self, name: &str) {
        if !self.functions.iter().any(|f| f == name) {
            self.functions.push(name.to_string());
        }
    }

    fn add_variable(&mut self, name: &str) {
        if is_keyword(name) {
            return;
        }
        if self.functions.iter().any(|f| f == name) {
            return;
        }
        if !self.variables.iter().any(|v| v == name) {
            self.variables.push(name.to_string());
        }
    }
}

fn line_indent(src: &str, line_start: usize) -> usize {
    src[line_start..]
        .chars()
        .take_while(|&c| c == ' ')
        .count()
}

/// Renames user-defined functions to FUNC_i and parameters/local variables
/// to VAR_j, in first-occurrence order. Only Python sources are supported.
pub fn obfuscate_source(program: &str, language: Language) -> Result<(String, ObfuscationMap)> {
    if language != Language::Py {
        return Err(Error::ObfuscationUnsupported(language.id().to_string()));
    }
    let toks = tokenize(program)?;
    let text = |t: &Token| &program[t.start..t.end];

    // Statement boundaries: a token begins a statement if it is the first
    // non-newline token, or follows a newline at bracket depth zero.
    let mut depth = 0i32;
    let mut stmt_start = vec![false; toks.len()];
    let mut line_start_off = vec![0usize; toks.len()];
    let mut at_line_head = true;
    let mut cur_line_off = 0usize;
    for (idx, t) in toks.iter().enumerate() {
        if t.kind == TokKind::Newline {
            if depth == 0 {
                at_line_head = true;
            }
            cur_line_off = t.end;
            continue;
        }
        line_start_off[idx] = if at_line_head { cur_line_off } else { cur_line_off };
        if at_line_head && depth == 0 {
            stmt_start[idx] = true;
            at_line_head = false;
        }
        if t.kind == TokKind::Op {
            match text(t) {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                _ => {}
            }
        }
    }

    let mut col = Collector {
        functions: Vec::new(),
        variables: Vec::new(),
        globals: BTreeSet::new(),
    };

    // Significant tokens only (no newlines) with original indices.
    let sig: Vec<(usize, &Token)> = toks
        .iter()
        .enumerate()
        .filter(|(_, t)| t.kind != TokKind::Newline)
        .collect();

    // Indentation stack of enclosing def statements.
    let mut def_indents: Vec<usize> = Vec::new();

    let mut j = 0;
    while j < sig.len() {
        let (orig_idx, tok) = sig[j];
        let word = text(tok);
        let indent = line_indent(program, find_line_start(program, tok.start));

        if stmt_start[orig_idx] {
            while let Some(&d) = def_indents.last() {
                if indent <= d {
                    def_indents.pop();
                } else {
                    break;
                }
            }
        }
        let in_function = !def_indents.is_empty();

        if tok.kind == TokKind::Ident && word == "def" && stmt_start[orig_idx] {
            if let Some((_, name_tok)) = sig.get(j + 1) {
                if name_tok.kind == TokKind::Ident {
                    col.add_function(text(name_tok));
                }
            }
            // Parameters: identifiers in "binding position" inside the parens.
            let mut k = j + 2;
            if sig.get(k).map(|(_, t)| text(t)) == Some("(") {
                let mut pdepth = 1;
                let mut binding = true;
                k += 1;
                while k < sig.len() && pdepth > 0 {
                    let t = sig[k].1;
                    let s = text(t);
                    match s {
                        "(" | "[" | "{" => pdepth += 1,
                        ")" | "]" | "}" => pdepth -= 1,
                        "," if pdepth == 1 => binding = true,
                        ":" | "=" if pdepth == 1 => binding = false,
                        "*" | "**" => {}
                        _ => {
                            if binding && pdepth == 1 && t.kind == TokKind::Ident {
                                col.add_variable(s);
                                binding = false;
                            }
                        }
                    }
                    k += 1;
                }
            }
            def_indents.push(indent);
        } else if tok.kind == TokKind::Ident && word == "lambda" {
            let mut k = j + 1;
            let mut binding = true;
            let mut pdepth = 0;
            while k < sig.len() {
                let t = sig[k].1;
                let s = text(t);
                if s == ":" && pdepth == 0 {
                    break;
                }
                match s {
                    "(" | "[" | "{" => pdepth += 1,
                    ")" | "]" | "}" => {
                        if pdepth == 0 {
                            break;
                        }
                        pdepth -= 1;
                    }
                    "," if pdepth == 0 => binding = true,
                    "=" if pdepth == 0 => binding = false,
                    _ => {
                        if binding && pdepth == 0 && t.kind == TokKind::Ident && in_function {
                            col.add_variable(s);
                            binding = false;
                        }
                    }
                }
                k += 1;
            }
        } else if tok.kind == TokKind::Ident && word == "for" && in_function {
            // Loop targets up to "in" (statement-level and comprehensions).
            let mut k = j + 1;
            while k < sig.len() {
                let t = sig[k].1;
                let s = text(t);
                if s == "in" {
                    break;
                }
                if t.kind == TokKind::Ident && !is_keyword(s) {
                    col.add_variable(s);
                }
                k += 1;
            }
        } else if tok.kind == TokKind::Ident && word == "as" && in_function {
            if let Some((_, t)) = sig.get(j + 1) {
                if t.kind == TokKind::Ident {
                    // Skip import aliases; those bind module names.
                    let head = stmt_head(&sig, &stmt_start, j, text);
                    if head != Some("import") && head != Some("from") {
                        col.add_variable(text(t));
                    }
                }
            }
        } else if tok.kind == TokKind::Ident
            && (word == "global" || word == "nonlocal")
            && stmt_start[orig_idx]
        {
            let mut k = j + 1;
            while k < sig.len() {
                let t = sig[k].1;
                if t.kind != TokKind::Ident && text(t) != "," {
                    break;
                }
                if t.kind == TokKind::Ident && word == "global" {
                    col.globals.insert(text(t).to_string());
                }
                k += 1;
            }
        } else if tok.kind == TokKind::Ident
            && stmt_start[orig_idx]
            && in_function
            && !is_keyword(word)
        {
            // Simple assignment targets: NAME (, NAME)* ('=' | aug-assign).
            let mut names = vec![word];
            let mut k = j + 1;
            loop {
                match sig.get(k) {
                    Some((_, t)) if text(t) == "," => {
                        if let Some((_, nt)) = sig.get(k + 1) {
                            if nt.kind == TokKind::Ident && !is_keyword(text(nt)) {
                                names.push(text(nt));
                                k += 2;
                                continue;
                            }
                        }
                        names.clear();
                        break;
                    }
                    Some((_, t))
                        if matches!(
                            text(t),
                            "=" | "+=" | "-=" | "*=" | "/=" | "//=" | "%=" | "**=" | "&="
                                | "|=" | "^=" | ">>=" | "<<="
                        ) =>
                    {
                        break;
                    }
                    Some((_, t)) if text(t) == ":" => {
                        // Annotated assignment "x: int = 0": skip annotation.
                        let mut m = k + 1;
                        let mut adepth = 0;
                        let mut found = false;
                        while m < sig.len() {
                            let s = text(sig[m].1);
                            match s {
                                "(" | "[" | "{" => adepth += 1,
                                ")" | "]" | "}" => adepth -= 1,
                                "=" if adepth == 0 => {
                                    found = true;
                                    break;
                                }
                                _ => {}
                            }
                            if stmt_start.get(sig.get(m).map(|(i, _)| *i).unwrap_or(0)) == Some(&true)
                                && m > k + 1
                            {
                                break;
                            }
                            m += 1;
                        }
                        if !found {
                            names.clear();
                        }
                        break;
                    }
                    _ => {
                        names.clear();
                        break;
                    }
                }
            }
            for name in names {
                col.add_variable(name);
            }
        }
        j += 1;
    }

    let mut map = ObfuscationMap::default();
    for (i, f) in col.functions.iter().enumerate() {
        map.function_renames.push((f.clone(), format!("FUNC_{i}")));
    }
    let mut var_idx = 0;
    for v in &col.variables {
        if col.globals.contains(v) {
            continue;
        }
        map.variable_renames.push((v.clone(), format!("VAR_{var_idx}")));
        var_idx += 1;
    }

    if map.is_empty() {
        return Ok((program.to_string(), map));
    }

    // Rewrite pass: replace every identifier occurrence that is in the map
    // and is not an attribute name or part of an import statement.
    let lookup = map.lookup();
    let mut out = String::with_capacity(program.len());
    let mut cursor = 0;
    let mut prev_sig: Option<&Token> = None;
    for (idx, tok) in toks.iter().enumerate() {
        if tok.kind == TokKind::Ident {
            let word = text(tok);
            let is_attr = prev_sig.map(|t| text(t) == ".").unwrap_or(false);
            let head = stmt_head_tokens(&toks, &stmt_start, idx, text);
            let in_import = head == Some("import") || head == Some("from");
            if !is_attr && !in_import && !is_keyword(word) {
                if let Some(replacement) = lookup.get(word) {
                    out.push_str(&program[cursor..tok.start]);
                    out.push_str(replacement);
                    cursor = tok.end;
                }
            }
        }
        if tok.kind != TokKind::Newline {
            prev_sig = Some(tok);
        }
    }
    out.push_str(&program[cursor..]);
    Ok((out, map))
}

fn find_line_start(src: &str, offset: usize) -> usize {
    src[..offset].rfind('\n').map(|p| p + 1).unwrap_or(0)
}

fn stmt_head<'a>(
    sig: &[(usize, &'a Token)],
    stmt_start: &[bool],
    j: usize,
    text: impl Fn(&Token) -> &'a str,
) -> Option<&'a str> {
    let mut k = j;
    loop {
        let (orig_idx, tok) = sig[k];
        if stmt_start[orig_idx] {
            return Some(text(tok));
        }
        if k == 0 {
            return None;
        }
        k -= 1;
    }
}

fn stmt_head_tokens<'a>(
    toks: &'a [Token],
    stmt_start: &[bool],
    idx: usize,
    text: impl Fn(&Token) -> &'a str,
) -> Option<&'a str> {
    let mut k = idx;
    loop {
        if toks[k].kind != TokKind::Newline && stmt_start[k] {
            return Some(text(&toks[k]));
        }
        if k == 0 {
            return None;
        }
        k -= 1;
    }
}

/// Rewrites references to renamed entry-point functions inside a test block
/// so obfuscated programs can be executed end-to-end.
pub fn rename_in_tests(tests: &str, map: &ObfuscationMap) -> String {
    let mut out = tests.to_string();
    for (orig, repl) in &map.function_renames {
        out = replace_word(&out, orig, repl);
    }
    out
}

fn replace_word(text: &str, word: &str, replacement: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let chars: Vec<char> = text.chars().collect();
    let wchars: Vec<char> = word.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let matches = chars[i..].starts_with(&wchars[..])
            && (i == 0 || !is_ident_cont(chars[i - 1]))
            && chars
                .get(i + wchars.len())
                .map(|c| !is_ident_cont(*c))
                .unwrap_or(true);
        if matches {
            out.push_str(replacement);
            i += wchars.len();
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}
