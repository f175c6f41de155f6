//! Multiple context-free grammars, rule instantiation, and the grammar G₂.
//!
//! A rule `r: A(s₁,…,s_k) → B₁(x…), …, B_m(x…)` rewrites a tuple of strings
//! for `A` out of the tuples for the `Bᵢ`; each right-hand variable appears in
//! the left-hand arguments exactly once.

mod serial;
mod tree;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::words::{Letter, Word};

pub use serial::{from_json, from_sexp, to_json, to_sexp, SerialError};
pub use tree::{certify, check_derivation, yield_of, DerivationTree, Rejection, RejectionCause};

/// Labels of the ten rules of G₂.
pub mod labels {
    pub const R0: &str = "r_0";
    pub const RA: &str = "r_a";
    pub const RA_BAR: &str = "r_A";
    pub const RB: &str = "r_b";
    pub const RB_BAR: &str = "r_B";
    pub const RL: &str = "r_l";
    pub const RR: &str = "r_r";
    pub const RN: &str = "r_n";
    pub const RS: &str = "r_s";
    pub const RZ: &str = "r_z";
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(pub String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Variable(name.into())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One symbol of a left-hand argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Terminal(Letter),
    Var(Variable),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub label: String,
    pub lhs: String,
    pub lhs_args: Vec<Vec<Symbol>>,
    pub rhs: Vec<(String, Vec<Variable>)>,
}

impl Rule {
    pub fn rank(&self) -> usize {
        self.rhs.len()
    }

    /// The set X_r of variables bound on the right-hand side.
    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.rhs.iter().flat_map(|(_, vars)| vars.iter())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}(", self.label, self.lhs)?;
        for (k, arg) in self.lhs_args.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            if arg.is_empty() {
                f.write_str("ε")?;
            }
            for sym in arg {
                match sym {
                    Symbol::Terminal(x) => write!(f, "{x}")?,
                    Symbol::Var(v) => write!(f, "{v}")?,
                }
            }
        }
        f.write_str(") →")?;
        for (k, (nt, vars)) in self.rhs.iter().enumerate() {
            f.write_str(if k > 0 { ", " } else { " " })?;
            let names: Vec<&str> = vars.iter().map(|v| v.0.as_str()).collect();
            write!(f, "{nt}({})", names.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mcfg {
    /// Number of letter pairs; the terminals are `a_1, ā_1, …, a_n, ā_n`.
    pub pairs: usize,
    pub fanout: BTreeMap<String, usize>,
    pub variables: BTreeSet<Variable>,
    pub rules: Vec<Rule>,
    pub start: String,
}

impl Mcfg {
    pub fn rule(&self, label: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.label == label)
    }

    /// Maximum fanout over all nonterminals.
    pub fn grammar_fanout(&self) -> usize {
        self.fanout.values().copied().max().unwrap_or(0)
    }

    pub fn rank(&self, label: &str) -> Option<usize> {
        self.rule(label).map(Rule::rank)
    }

    pub fn terminals(&self) -> impl Iterator<Item = Letter> {
        (1..=self.pairs as u32).flat_map(|k| {
            let x = Letter::plain(k);
            [x, x.conjugate()]
        })
    }
}

/// Which requirement on an MCFG a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// The terminal, nonterminal, variable and rule sets must be non-empty and disjoint.
    CarrierSets,
    /// Variables in a rule are pairwise distinct.
    DistinctVariables,
    /// Left-hand arguments use only the rule's variables and terminals.
    LhsSymbols,
    /// Each rule variable occurs exactly once across the left-hand arguments.
    VariableUsage,
    /// The start symbol has fanout 1.
    StartFanout,
    /// Argument counts agree with the fanout of each nonterminal, and every
    /// nonterminal and variable is declared.
    Arity,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constraint::CarrierSets => "carrier sets non-empty and disjoint",
            Constraint::DistinctVariables => "constraint 1 (pairwise distinct variables)",
            Constraint::LhsSymbols => "constraint 2 (left-hand symbols)",
            Constraint::VariableUsage => "constraint 3 (each variable used exactly once)",
            Constraint::StartFanout => "constraint 4 (start symbol fanout 1)",
            Constraint::Arity => "fanout/arity consistency",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{constraint} violated{}: {detail}", rule.as_ref().map(|r| format!(" in rule {r}")).unwrap_or_default())]
pub struct GrammarViolation {
    pub constraint: Constraint,
    pub rule: Option<String>,
    pub detail: String,
}

fn violation(constraint: Constraint, rule: Option<&Rule>, detail: String) -> GrammarViolation {
    GrammarViolation {
        constraint,
        rule: rule.map(|r| r.label.clone()),
        detail,
    }
}

/// Checks the structural MCFG constraints, reporting the first violation.
///
/// Grammar-level checks come first (carrier sets, start fanout), then each rule
/// in order: distinct variables, left-hand symbols, variable usage, arities.
/// A variable repeated on the left-hand side is reported as a distinctness
/// violation; one missing from the left-hand side as a usage violation.
pub fn validate_grammar(g: &Mcfg) -> Result<(), GrammarViolation> {
    let terminals: BTreeSet<String> = g.terminals().map(|x| x.to_string()).collect();
    let nonterminals: BTreeSet<String> = g.fanout.keys().cloned().collect();
    let variables: BTreeSet<String> = g.variables.iter().map(|v| v.0.clone()).collect();
    let labels: Vec<String> = g.rules.iter().map(|r| r.label.clone()).collect();
    let label_set: BTreeSet<String> = labels.iter().cloned().collect();

    let sets = [
        ("terminals", &terminals),
        ("nonterminals", &nonterminals),
        ("variables", &variables),
        ("rules", &label_set),
    ];
    for (name, set) in &sets {
        if set.is_empty() {
            return Err(violation(
                Constraint::CarrierSets,
                None,
                format!("no {name}"),
            ));
        }
    }
    for (k, (a, sa)) in sets.iter().enumerate() {
        for (b, sb) in &sets[k + 1..] {
            if let Some(x) = sa.intersection(sb).next() {
                return Err(violation(
                    Constraint::CarrierSets,
                    None,
                    format!("{x:?} is both in {a} and {b}"),
                ));
            }
        }
    }
    if label_set.len() != labels.len() {
        return Err(violation(
            Constraint::CarrierSets,
            None,
            "duplicate rule label".into(),
        ));
    }

    match g.fanout.get(&g.start) {
        None => {
            return Err(violation(
                Constraint::StartFanout,
                None,
                format!("start symbol {} is not a nonterminal", g.start),
            ))
        }
        Some(&f) if f != 1 => {
            return Err(violation(
                Constraint::StartFanout,
                None,
                format!("f({}) = {f}", g.start),
            ))
        }
        Some(_) => {}
    }

    for rule in &g.rules {
        validate_rule(g, rule)?;
    }
    Ok(())
}

fn validate_rule(g: &Mcfg, rule: &Rule) -> Result<(), GrammarViolation> {
    let mut bound: BTreeSet<&Variable> = BTreeSet::new();
    for v in rule.variables() {
        if !bound.insert(v) {
            return Err(violation(
                Constraint::DistinctVariables,
                Some(rule),
                format!("variable {v} bound twice on the right-hand side"),
            ));
        }
    }

    let mut uses: HashMap<&Variable, usize> = HashMap::new();
    for sym in rule.lhs_args.iter().flatten() {
        if let Symbol::Var(v) = sym {
            let count = uses.entry(v).or_default();
            *count += 1;
            if *count > 1 && bound.contains(v) {
                return Err(violation(
                    Constraint::DistinctVariables,
                    Some(rule),
                    format!("variable {v} occurs twice on the left-hand side"),
                ));
            }
        }
    }

    for sym in rule.lhs_args.iter().flatten() {
        match sym {
            Symbol::Var(v) if !bound.contains(v) => {
                return Err(violation(
                    Constraint::LhsSymbols,
                    Some(rule),
                    format!("variable {v} is not bound on the right-hand side"),
                ))
            }
            Symbol::Terminal(x) if x.pair() as usize > g.pairs => {
                return Err(violation(
                    Constraint::LhsSymbols,
                    Some(rule),
                    format!("letter {x} is not in the alphabet"),
                ))
            }
            _ => {}
        }
    }

    if let Some(v) = bound.iter().find(|v| !uses.contains_key(*v)) {
        return Err(violation(
            Constraint::VariableUsage,
            Some(rule),
            format!("variable {v} never occurs on the left-hand side"),
        ));
    }

    if let Some(v) = bound.iter().find(|v| !g.variables.contains(*v)) {
        return Err(violation(
            Constraint::Arity,
            Some(rule),
            format!("undeclared variable {v}"),
        ));
    }
    let arity_of = |nt: &str| {
        g.fanout.get(nt).copied().ok_or_else(|| {
            violation(
                Constraint::Arity,
                Some(rule),
                format!("undeclared nonterminal {nt}"),
            )
        })
    };
    let lhs_fanout = arity_of(&rule.lhs)?;
    if lhs_fanout != rule.lhs_args.len() {
        return Err(violation(
            Constraint::Arity,
            Some(rule),
            format!(
                "{} has fanout {lhs_fanout} but {} arguments",
                rule.lhs,
                rule.lhs_args.len()
            ),
        ));
    }
    for (nt, vars) in &rule.rhs {
        let f = arity_of(nt)?;
        if f != vars.len() {
            return Err(violation(
                Constraint::Arity,
                Some(rule),
                format!("{nt} has fanout {f} but {} arguments", vars.len()),
            ));
        }
    }
    Ok(())
}

fn symbols(template: &str) -> Vec<Symbol> {
    template
        .chars()
        .map(|c| match c {
            'a' => Symbol::Terminal(Letter::A),
            'A' => Symbol::Terminal(Letter::A_BAR),
            'b' => Symbol::Terminal(Letter::B),
            'B' => Symbol::Terminal(Letter::B_BAR),
            v => Symbol::Var(Variable(v.to_string())),
        })
        .collect()
}

/// Builds a rule from a compact notation: terminals as ASCII letters and
/// single-character variables (any other character).
fn rule(label: &str, lhs: &str, args: &[&str], rhs: &[(&str, &str)]) -> Rule {
    Rule {
        label: label.to_string(),
        lhs: lhs.to_string(),
        lhs_args: args.iter().map(|a| symbols(a)).collect(),
        rhs: rhs
            .iter()
            .map(|(nt, vars)| {
                (
                    nt.to_string(),
                    vars.chars().map(|c| Variable(c.to_string())).collect(),
                )
            })
            .collect(),
    }
}

/// The 2-MCFG G₂ over Σ₂ with nonterminals `S` (fanout 1) and `I` (fanout 2).
pub fn g2() -> Mcfg {
    use labels::*;
    let both = [("I", "vw"), ("I", "xy")];
    let rules = vec![
        rule(R0, "I", &["", ""], &[]),
        rule(RA, "I", &["a", "A"], &[]),
        rule(RA_BAR, "I", &["A", "a"], &[]),
        rule(RB, "I", &["b", "B"], &[]),
        rule(RB_BAR, "I", &["B", "b"], &[]),
        rule(RL, "I", &["vxw", "y"], &both),
        rule(RR, "I", &["v", "xwy"], &both),
        rule(RN, "I", &["vx", "yw"], &both),
        rule(RS, "I", &["vx", "wy"], &both),
        rule(RZ, "S", &["vw"], &[("I", "vw")]),
    ];
    Mcfg {
        pairs: 2,
        fanout: [("S".to_string(), 1), ("I".to_string(), 2)]
            .into_iter()
            .collect(),
        variables: ["v", "w", "x", "y"]
            .into_iter()
            .map(Variable::new)
            .collect(),
        rules,
        start: "S".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("rule {rule} has no value for variable {var}")]
    Missing { rule: String, var: Variable },
    #[error("variable {var} is not a variable of rule {rule}")]
    Extra { rule: String, var: Variable },
}

/// A rule with every variable replaced by a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub lhs: (String, Vec<Word>),
    pub rhs: Vec<(String, Vec<Word>)>,
}

/// Substitutes `assignment` into both sides of `rule`.
pub fn instantiate(
    rule: &Rule,
    assignment: &HashMap<Variable, Word>,
) -> Result<Instance, InstantiateError> {
    let vars: BTreeSet<&Variable> = rule.variables().collect();
    if let Some(var) = assignment.keys().find(|v| !vars.contains(v)) {
        return Err(InstantiateError::Extra {
            rule: rule.label.clone(),
            var: var.clone(),
        });
    }
    let lookup = |v: &Variable| {
        assignment.get(v).ok_or_else(|| InstantiateError::Missing {
            rule: rule.label.clone(),
            var: v.clone(),
        })
    };
    let rhs = rule
        .rhs
        .iter()
        .map(|(nt, vs)| {
            Ok((
                nt.clone(),
                vs.iter()
                    .map(|v| lookup(v).cloned())
                    .collect::<Result<_, _>>()?,
            ))
        })
        .collect::<Result<Vec<_>, InstantiateError>>()?;
    let mut lhs_args = Vec::with_capacity(rule.lhs_args.len());
    for arg in &rule.lhs_args {
        let mut word = Word::new();
        for sym in arg {
            match sym {
                Symbol::Terminal(x) => word.push(*x),
                Symbol::Var(v) => {
                    for &x in lookup(v)?.iter() {
                        word.push(x);
                    }
                }
            }
        }
        lhs_args.push(word);
    }
    Ok(Instance {
        lhs: (rule.lhs.clone(), lhs_args),
        rhs,
    })
}
