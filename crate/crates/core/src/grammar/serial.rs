//! Text encodings of derivation trees.
//!
//! JSON: `{"rule": "r_z", "args": ["aA"], "children": [ … ]}`, with `", "` and
//! `": "` separators and no other whitespace.
//!
//! S-expression: `(r_z "aA" (r_a "a" "A"))`, arguments before children, single
//! spaces between items.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use super::DerivationTree;
use crate::words::{Word, WordError};

#[derive(Debug, Error)]
pub enum SerialError {
    #[error("malformed JSON derivation: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed s-expression at byte {offset}: {reason}")]
    Sexp { offset: usize, reason: String },
    #[error("bad word {text:?}: {source}")]
    Word { text: String, source: WordError },
}

pub fn to_json(t: &DerivationTree) -> String {
    let mut out = String::new();
    write_json(t, &mut out);
    out
}

fn write_json(t: &DerivationTree, out: &mut String) {
    out.push_str("{\"rule\": ");
    out.push_str(&serde_json::to_string(&t.rule).expect("strings serialize"));
    out.push_str(", \"args\": [");
    for (k, a) in t.args.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "\"{a}\"");
    }
    out.push_str("], \"children\": [");
    for (k, c) in t.children.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write_json(c, out);
    }
    out.push_str("]}");
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    rule: String,
    args: Vec<String>,
    children: Vec<RawNode>,
}

fn parse_word(text: &str) -> Result<Word, SerialError> {
    text.parse().map_err(|source| SerialError::Word {
        text: text.to_string(),
        source,
    })
}

impl TryFrom<RawNode> for DerivationTree {
    type Error = SerialError;

    fn try_from(raw: RawNode) -> Result<Self, SerialError> {
        Ok(DerivationTree {
            rule: raw.rule,
            args: raw
                .args
                .iter()
                .map(|a| parse_word(a))
                .collect::<Result<_, _>>()?,
            children: raw
                .children
                .into_iter()
                .map(DerivationTree::try_from)
                .collect::<Result<_, _>>()?,
        })
    }
}

/// Reads the JSON encoding. Any whitespace layout is accepted.
pub fn from_json(text: &str) -> Result<DerivationTree, SerialError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let raw = RawNode::deserialize(&mut de)?;
    de.end()?;
    raw.try_into()
}

pub fn to_sexp(t: &DerivationTree) -> String {
    let mut out = String::new();
    write_sexp(t, &mut out);
    out
}

fn write_sexp(t: &DerivationTree, out: &mut String) {
    out.push('(');
    out.push_str(&t.rule);
    for a in &t.args {
        let _ = write!(out, " \"{a}\"");
    }
    for c in &t.children {
        out.push(' ');
        write_sexp(c, out);
    }
    out.push(')');
}

#[derive(Debug, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
    Str(&'a str),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token<'_>)>, SerialError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        match bytes[pos] {
            b if b.is_ascii_whitespace() => pos += 1,
            b'(' => {
                out.push((pos, Token::Open));
                pos += 1;
            }
            b')' => {
                out.push((pos, Token::Close));
                pos += 1;
            }
            b'"' => {
                let end = text[pos + 1..].find('"').ok_or_else(|| SerialError::Sexp {
                    offset: pos,
                    reason: "unterminated string".into(),
                })?;
                out.push((pos, Token::Str(&text[pos + 1..pos + 1 + end])));
                pos += end + 2;
            }
            _ => {
                let end = text[pos..]
                    .find(|c: char| c.is_ascii_whitespace() || c == '(' || c == ')' || c == '"')
                    .map_or(text.len(), |k| pos + k);
                out.push((pos, Token::Atom(&text[pos..end])));
                pos = end;
            }
        }
    }
    Ok(out)
}

/// Reads the s-expression encoding.
pub fn from_sexp(text: &str) -> Result<DerivationTree, SerialError> {
    let err = |offset: usize, reason: &str| SerialError::Sexp {
        offset,
        reason: reason.to_string(),
    };
    let tokens = tokenize(text)?;
    // Nodes under construction; iterative so deep trees do not exhaust the stack.
    let mut open: Vec<DerivationTree> = Vec::new();
    let mut done: Option<DerivationTree> = None;
    let mut iter = tokens.into_iter().peekable();
    while let Some((offset, tok)) = iter.next() {
        if done.is_some() {
            return Err(err(offset, "trailing input after the tree"));
        }
        match tok {
            Token::Open => {
                let Some((_, Token::Atom(label))) = iter.next() else {
                    return Err(err(offset, "expected a rule label after '('"));
                };
                open.push(DerivationTree::leaf(label, Vec::new()));
            }
            Token::Close => {
                let node = open.pop().ok_or_else(|| err(offset, "unbalanced ')'"))?;
                match open.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => done = Some(node),
                }
            }
            Token::Str(s) => {
                let node = open
                    .last_mut()
                    .ok_or_else(|| err(offset, "string outside a node"))?;
                if !node.children.is_empty() {
                    return Err(err(offset, "argument after a child node"));
                }
                node.args.push(parse_word(s)?);
            }
            Token::Atom(_) => return Err(err(offset, "unexpected atom")),
        }
    }
    done.ok_or_else(|| err(text.len(), "incomplete tree"))
}
