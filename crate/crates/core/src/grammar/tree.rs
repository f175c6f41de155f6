use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{instantiate, Mcfg};
use crate::words::Word;

/// A derivation: every node names its rule and carries its full argument tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivationTree {
    pub rule: String,
    pub args: Vec<Word>,
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    pub fn new(rule: impl Into<String>, args: Vec<Word>, children: Vec<DerivationTree>) -> Self {
        DerivationTree {
            rule: rule.into(),
            args,
            children,
        }
    }

    pub fn leaf(rule: impl Into<String>, args: Vec<Word>) -> Self {
        DerivationTree::new(rule, args, Vec::new())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            count += 1;
            stack.extend(t.children.iter());
        }
        count
    }

    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self, 1)];
        while let Some((t, d)) = stack.pop() {
            best = best.max(d);
            stack.extend(t.children.iter().map(|c| (c, d + 1)));
        }
        best
    }

    /// The node at `path` (child indices from the root).
    pub fn at(&self, path: &[usize]) -> Option<&DerivationTree> {
        path.iter().try_fold(self, |t, &k| t.children.get(k))
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut DerivationTree> {
        path.iter().try_fold(self, |t, &k| t.children.get_mut(k))
    }

    /// Paths of all nodes in depth-first, left-to-right pre-order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((t, path)) = stack.pop() {
            for (k, c) in t.children.iter().enumerate().rev() {
                let mut p = path.clone();
                p.push(k);
                stack.push((c, p));
            }
            out.push(path);
        }
        out
    }
}

/// The root's argument tuple.
pub fn yield_of(t: &DerivationTree) -> &[Word] {
    &t.args
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectionCause {
    UnknownRule,
    ArgCount {
        expected: usize,
        found: usize,
    },
    ChildCount {
        expected: usize,
        found: usize,
    },
    ChildNonterminal {
        index: usize,
        expected: String,
        found: String,
    },
    ChildArgCount {
        index: usize,
        expected: usize,
        found: usize,
    },
    /// The children's arguments substituted into the rule do not give this node's arguments.
    InstanceMismatch {
        arg: usize,
        expected: Word,
        found: Word,
    },
    NotStart {
        found: String,
    },
    NotSentence {
        args: usize,
    },
}

impl fmt::Display for RejectionCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectionCause::UnknownRule => f.write_str("unknown rule"),
            RejectionCause::ArgCount { expected, found } => {
                write!(f, "expected {expected} arguments, found {found}")
            }
            RejectionCause::ChildCount { expected, found } => {
                write!(f, "expected {expected} children, found {found}")
            }
            RejectionCause::ChildNonterminal {
                index,
                expected,
                found,
            } => {
                write!(f, "child {index} derives {found}, rule needs {expected}")
            }
            RejectionCause::ChildArgCount {
                index,
                expected,
                found,
            } => {
                write!(
                    f,
                    "child {index} has {found} arguments, rule needs {expected}"
                )
            }
            RejectionCause::InstanceMismatch {
                arg,
                expected,
                found,
            } => {
                write!(
                    f,
                    "argument {arg} is \"{found}\" but the instance gives \"{expected}\""
                )
            }
            RejectionCause::NotStart { found } => {
                write!(f, "root derives {found}, not the start symbol")
            }
            RejectionCause::NotSentence { args } => {
                write!(f, "root has {args} arguments, expected 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {} ({rule}): {cause}", display_path(path))]
pub struct Rejection {
    pub path: Vec<usize>,
    pub rule: String,
    pub cause: RejectionCause,
}

fn display_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Checks every node of `t` against `g`, depth-first and left to right, and
/// reports the first failing node.
pub fn check_derivation(g: &Mcfg, t: &DerivationTree) -> Result<(), Rejection> {
    let mut stack: Vec<(&DerivationTree, Vec<usize>)> = vec![(t, Vec::new())];
    while let Some((node, path)) = stack.pop() {
        check_node(g, node, &path)?;
        for (k, c) in node.children.iter().enumerate().rev() {
            let mut p = path.clone();
            p.push(k);
            stack.push((c, p));
        }
    }
    Ok(())
}

fn check_node(g: &Mcfg, node: &DerivationTree, path: &[usize]) -> Result<(), Rejection> {
    let reject = |path: &[usize], rule: &str, cause| Rejection {
        path: path.to_vec(),
        rule: rule.to_string(),
        cause,
    };
    let Some(rule) = g.rule(&node.rule) else {
        return Err(reject(path, &node.rule, RejectionCause::UnknownRule));
    };
    if node.args.len() != rule.lhs_args.len() {
        return Err(reject(
            path,
            &node.rule,
            RejectionCause::ArgCount {
                expected: rule.lhs_args.len(),
                found: node.args.len(),
            },
        ));
    }
    if node.children.len() != rule.rhs.len() {
        return Err(reject(
            path,
            &node.rule,
            RejectionCause::ChildCount {
                expected: rule.rhs.len(),
                found: node.children.len(),
            },
        ));
    }
    let mut assignment = HashMap::new();
    for (index, ((nt, vars), child)) in rule.rhs.iter().zip(&node.children).enumerate() {
        let Some(child_rule) = g.rule(&child.rule) else {
            let mut p = path.to_vec();
            p.push(index);
            return Err(reject(&p, &child.rule, RejectionCause::UnknownRule));
        };
        if &child_rule.lhs != nt {
            return Err(reject(
                path,
                &node.rule,
                RejectionCause::ChildNonterminal {
                    index,
                    expected: nt.clone(),
                    found: child_rule.lhs.clone(),
                },
            ));
        }
        if child.args.len() != vars.len() {
            return Err(reject(
                path,
                &node.rule,
                RejectionCause::ChildArgCount {
                    index,
                    expected: vars.len(),
                    found: child.args.len(),
                },
            ));
        }
        for (v, word) in vars.iter().zip(&child.args) {
            assignment.insert(v.clone(), word.clone());
        }
    }
    // Arities were checked above, so every variable has exactly one value.
    let instance = instantiate(rule, &assignment).expect("assignment covers the rule's variables");
    for (arg, (expected, found)) in instance.lhs.1.iter().zip(&node.args).enumerate() {
        if expected != found {
            return Err(reject(
                path,
                &node.rule,
                RejectionCause::InstanceMismatch {
                    arg,
                    expected: expected.clone(),
                    found: found.clone(),
                },
            ));
        }
    }
    Ok(())
}

/// Checks `t` and that it is rooted at the start symbol with one argument,
/// returning the derived sentence.
pub fn certify(g: &Mcfg, t: &DerivationTree) -> Result<Word, Rejection> {
    check_derivation(g, t)?;
    let rule = g.rule(&t.rule).expect("checked above");
    if rule.lhs != g.start {
        return Err(Rejection {
            path: Vec::new(),
            rule: t.rule.clone(),
            cause: RejectionCause::NotStart {
                found: rule.lhs.clone(),
            },
        });
    }
    match t.args.as_slice() {
        [w] => Ok(w.clone()),
        args => Err(Rejection {
            path: Vec::new(),
            rule: t.rule.clone(),
            cause: RejectionCause::NotSentence { args: args.len() },
        }),
    }
}
