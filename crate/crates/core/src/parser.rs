//! Balanced decompositions of pairs and G₂ derivation trees for O₂ words.
//!
//! A pair `(v, w)` with `vw` balanced is split into two balanced components;
//! the way their slices interleave selects the rule whose children are the
//! components. Recursing until the pairs are trivial and closing with `r_z`
//! gives a derivation of the word.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::decompose::{
    cancel_bump, decompose_short, lift_decomposition, BalDecomposition, DecomposeError, FactorRef,
    InvalidDecomposition, LiftOutcome, WhichWord,
};
use crate::grammar::{labels, DerivationTree};
use crate::oracle::{search_decompositions, SearchBudget};
use crate::words::{self, Balance, Bump, Word, WordError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    /// Cancel a minimal bump, decompose the reduced pair, lift the result back.
    #[default]
    Guided,
    /// Take the first rule-shaped decomposition found by exhaustive search.
    Search,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Guided => "guided",
            Strategy::Search => "search",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "guided" => Ok(Strategy::Guided),
            "search" => Ok(Strategy::Search),
            _ => Err(format!("unknown strategy {s:?}; expected guided or search")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("the word is not in O2: its balance is {0}")]
    NotBalanced(Balance),
    #[error("the pair has total length {0}; at least 3 is required")]
    TooShort(usize),
    #[error("word {index} of the pair is empty")]
    EmptyWord { index: usize },
    /// A balanced pair without a balanced decomposition. Cannot happen unless
    /// the implementation is wrong.
    #[error("no balanced decomposition found for ({v}, {w})")]
    InternalIncompleteness { v: Word, w: Word },
    #[error("decomposition {0} matches no rule pattern")]
    NoPattern(String),
    #[error("invalid decomposition: {0}")]
    Invalid(#[from] InvalidDecomposition),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Alphabet(#[from] WordError),
}

impl ParseError {
    /// Errors that point at a defect in this crate rather than at the input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            ParseError::InternalIncompleteness { .. }
                | ParseError::Decompose(_)
                | ParseError::Invalid(_)
        )
    }
}

/// Counters for the guided strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GuidedStats {
    /// Successful lifts from a reduced pair.
    pub lifts: usize,
    /// Lifts that ended in a border case and moved on to the next bump.
    pub border_cases: usize,
    /// Pairs where every bump ended in a border case and search took over.
    pub fallbacks: usize,
    /// Pairs of total length 4 handed to search directly.
    pub base_searches: usize,
}

impl std::ops::AddAssign for GuidedStats {
    fn add_assign(&mut self, o: GuidedStats) {
        self.lifts += o.lifts;
        self.border_cases += o.border_cases;
        self.fallbacks += o.fallbacks;
        self.base_searches += o.base_searches;
    }
}

/// An argument of a child in a rule pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Empty,
    /// The k-th slice of the component holding the pair's first letter.
    A(usize),
    /// The k-th slice of the other component.
    B(usize),
}

/// How the slices of a canonical decomposition interleave, and the rule it selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RulePattern {
    /// Component of each slice of `v`, left to right (`b'A'` or `b'B'`).
    pub v_layout: &'static [u8],
    pub w_layout: &'static [u8],
    pub rule: &'static str,
    pub children: [[Slot; 2]; 2],
}

const fn pattern(
    v: &'static [u8],
    w: &'static [u8],
    rule: &'static str,
    children: [[Slot; 2]; 2],
) -> RulePattern {
    RulePattern {
        v_layout: v,
        w_layout: w,
        rule,
        children,
    }
}

/// Every arrangement of a rule-shaped decomposition of a pair, with the rule
/// and the child argument pairs that rebuild the pair.
pub const PATTERNS: [RulePattern; 9] = {
    use Slot::*;
    [
        pattern(b"A", b"B", labels::RN, [[A(0), Empty], [Empty, B(0)]]),
        pattern(b"AB", b"A", labels::RS, [[A(0), A(1)], [B(0), Empty]]),
        pattern(b"AB", b"B", labels::RS, [[A(0), Empty], [B(0), B(1)]]),
        pattern(b"A", b"AB", labels::RS, [[A(0), A(1)], [Empty, B(0)]]),
        pattern(b"A", b"BA", labels::RS, [[Empty, B(0)], [A(0), A(1)]]),
        pattern(b"ABA", b"B", labels::RL, [[A(0), A(1)], [B(0), B(1)]]),
        pattern(b"A", b"BAB", labels::RR, [[A(0), A(1)], [B(0), B(1)]]),
        pattern(b"AB", b"AB", labels::RS, [[A(0), A(1)], [B(0), B(1)]]),
        pattern(b"AB", b"BA", labels::RN, [[A(0), A(1)], [B(0), B(1)]]),
    ]
};

/// One derivation step: `rule` applied to the child argument pairs gives the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: &'static str,
    pub children: Vec<(Word, Word)>,
}

fn check_pair(v: &Word, w: &Word) -> Result<(), ParseError> {
    for (index, s) in [v, w].into_iter().enumerate() {
        if s.is_empty() {
            return Err(ParseError::EmptyWord { index });
        }
    }
    let balance = words::balance(&v.concat(w), 2)?;
    if !balance.is_zero() {
        return Err(ParseError::NotBalanced(balance));
    }
    if v.len() + w.len() <= 2 {
        return Err(ParseError::TooShort(v.len() + w.len()));
    }
    Ok(())
}

/// A balanced decomposition of `(v, w)`.
pub fn decompose_pair(
    v: &Word,
    w: &Word,
    strategy: Strategy,
) -> Result<BalDecomposition, ParseError> {
    decompose_pair_with_stats(v, w, strategy, &mut GuidedStats::default())
}

pub fn decompose_pair_with_stats(
    v: &Word,
    w: &Word,
    strategy: Strategy,
    stats: &mut GuidedStats,
) -> Result<BalDecomposition, ParseError> {
    check_pair(v, w)?;
    match strategy {
        Strategy::Search => search_first(v, w),
        Strategy::Guided => guided(v, w, stats),
    }
}

fn search_first(v: &Word, w: &Word) -> Result<BalDecomposition, ParseError> {
    search_decompositions(v, w, SearchBudget::default())
        .next()
        .ok_or_else(|| ParseError::InternalIncompleteness {
            v: v.clone(),
            w: w.clone(),
        })
}

/// A pair whose guided decomposition waits on a reduced pair.
struct Frame {
    sources: [Word; 2],
    /// Bumps in the order they are tried; only the first is known until a border case.
    candidates: Vec<(WhichWord, Bump)>,
    expanded: bool,
    next: usize,
}

enum Entered {
    Done(BalDecomposition),
    Pending(Frame),
}

fn enter(v: Word, w: Word, stats: &mut GuidedStats) -> Result<Entered, ParseError> {
    if words::is_balanced(&v, 2)? {
        let d = BalDecomposition::new(
            vec![FactorRef::new(0, 0, v.len())],
            vec![FactorRef::new(1, 0, w.len())],
        );
        return Ok(Entered::Done(d));
    }
    if v.is_short() && w.is_short() {
        return Ok(Entered::Done(decompose_short(&v, &w)?));
    }
    if v.len() + w.len() == 4 {
        stats.base_searches += 1;
        return Ok(Entered::Done(search_first(&v, &w)?));
    }
    let first = crate::decompose::find_min_bump(&v, &w).expect("a non-short word has a bump");
    Ok(Entered::Pending(Frame {
        sources: [v, w],
        candidates: vec![first],
        expanded: false,
        next: 0,
    }))
}

fn all_bumps(sources: &[Word; 2]) -> Vec<(WhichWord, Bump)> {
    let mut out: Vec<(WhichWord, Bump)> = [WhichWord::First, WhichWord::Second]
        .into_iter()
        .flat_map(|which| {
            words::bumps(&sources[which.index()])
                .into_iter()
                .map(move |b| (which, b))
        })
        .collect();
    out.sort_by_key(|(which, b)| (b.len(), *which, b.start));
    out
}

/// Reduced pairs a guided decomposition may visit, per letter of input,
/// before border cases stop retrying other bumps.
const RETRY_BUDGET: usize = 4;

/// Bump-cancellation recursion, run on an explicit stack of pending pairs.
fn guided(v: &Word, w: &Word, stats: &mut GuidedStats) -> Result<BalDecomposition, ParseError> {
    let mut stack = match enter(v.clone(), w.clone(), stats)? {
        Entered::Done(d) => return Ok(d),
        Entered::Pending(frame) => vec![frame],
    };
    let mut result: Option<BalDecomposition> = None;
    let budget = RETRY_BUDGET * (v.len() + w.len());
    let mut entered = 1;
    loop {
        let top = stack
            .last_mut()
            .expect("stack is non-empty inside the loop");
        if let Some(d) = result.take() {
            let (which, bp) = top.candidates[top.next];
            let [s0, s1] = &top.sources;
            match lift_decomposition(s0, s1, which, &bp, &d)? {
                LiftOutcome::Lifted(d) => {
                    stats.lifts += 1;
                    stack.pop();
                    if stack.is_empty() {
                        return Ok(d);
                    }
                    result = Some(d);
                    continue;
                }
                LiftOutcome::BorderCase(_) => {
                    stats.border_cases += 1;
                    top.next += 1;
                    // Retries re-run the whole reduced recursion; past the budget
                    // a border case goes straight to search.
                    if entered > budget {
                        top.next = usize::MAX;
                        top.expanded = true;
                    }
                }
            }
        }
        if top.next == top.candidates.len() && !top.expanded {
            top.candidates = all_bumps(&top.sources);
            top.expanded = true;
        }
        if let Some(&(which, bp)) = top.candidates.get(top.next) {
            let mut reduced = top.sources.clone();
            reduced[which.index()] = cancel_bump(&top.sources[which.index()], &bp)?;
            let [r0, r1] = reduced;
            entered += 1;
            match enter(r0, r1, stats)? {
                Entered::Done(d) => result = Some(d),
                Entered::Pending(frame) => stack.push(frame),
            }
        } else {
            stats.fallbacks += 1;
            let frame = stack.pop().expect("top exists");
            let d = search_first(&frame.sources[0], &frame.sources[1])?;
            if stack.is_empty() {
                return Ok(d);
            }
            result = Some(d);
        }
    }
}

/// The rule and child argument pairs for one node `I(v, w)`.
///
/// Pairs with an empty word or of total length at most 2 need no
/// decomposition; every other pair needs a canonical rule-shaped `d`.
pub fn build_step(v: &Word, w: &Word, d: Option<&BalDecomposition>) -> Result<Step, ParseError> {
    let eps = Word::new;
    let split_first = |s: &Word| (Word::from(&s[..1]), Word::from(&s[1..]));
    match (v.len(), w.len()) {
        (0, 0) => {
            return Ok(Step {
                rule: labels::R0,
                children: vec![],
            })
        }
        (1, 1) => {
            let rule = match (v[0], w[0]) {
                (x, y) if y != x.conjugate() => None,
                (x, _) if x == words::Letter::A => Some(labels::RA),
                (x, _) if x == words::Letter::A_BAR => Some(labels::RA_BAR),
                (x, _) if x == words::Letter::B => Some(labels::RB),
                (x, _) if x == words::Letter::B_BAR => Some(labels::RB_BAR),
                _ => None,
            };
            return match rule {
                Some(rule) => Ok(Step {
                    rule,
                    children: vec![],
                }),
                None => Err(ParseError::NotBalanced(words::balance(&v.concat(w), 2)?)),
            };
        }
        (_, 0) => {
            return Ok(Step {
                rule: labels::RL,
                children: vec![split_first(v), (eps(), eps())],
            })
        }
        (0, _) => {
            return Ok(Step {
                rule: labels::RR,
                children: vec![(eps(), eps()), split_first(w)],
            })
        }
        _ => {}
    }
    check_pair(v, w)?;
    let d = d.ok_or_else(|| ParseError::NoPattern("(none)".into()))?;
    let sources = [v.clone(), w.clone()];
    d.validate(&sources)?;
    if *d != d.canonical() {
        return Err(ParseError::NoPattern(d.to_string()));
    }
    let layout = |source: usize| -> Vec<u8> {
        let mut slices: Vec<(usize, u8)> = d
            .first()
            .iter()
            .map(|f| (f, b'A'))
            .chain(d.second().iter().map(|f| (f, b'B')))
            .filter(|(f, _)| f.source == source)
            .map(|(f, c)| (f.start, c))
            .collect();
        slices.sort();
        slices.into_iter().map(|(_, c)| c).collect()
    };
    let (lv, lw) = (layout(0), layout(1));
    let pattern = PATTERNS
        .iter()
        .find(|p| p.v_layout == lv.as_slice() && p.w_layout == lw.as_slice())
        .ok_or_else(|| ParseError::NoPattern(d.to_string()))?;
    let fill = |slot: Slot| match slot {
        Slot::Empty => Word::new(),
        Slot::A(k) => Word::from(d.first()[k].resolve(&sources)),
        Slot::B(k) => Word::from(d.second()[k].resolve(&sources)),
    };
    let children = pattern
        .children
        .iter()
        .map(|[x, y]| (fill(*x), fill(*y)))
        .collect();
    Ok(Step {
        rule: pattern.rule,
        children,
    })
}

/// A G₂ derivation of `word`, rooted at `r_z` over the pair `(word(0), rest)`.
pub fn parse(word: &Word, strategy: Strategy) -> Result<DerivationTree, ParseError> {
    parse_with_stats(word, strategy, &mut GuidedStats::default())
}

pub fn parse_with_stats(
    word: &Word,
    strategy: Strategy,
    stats: &mut GuidedStats,
) -> Result<DerivationTree, ParseError> {
    let balance = words::balance(word, 2)?;
    if !balance.is_zero() {
        return Err(ParseError::NotBalanced(balance));
    }
    let top = if word.is_empty() {
        (Word::new(), Word::new())
    } else {
        (Word::from(&word[..1]), Word::from(&word[1..]))
    };

    // Nodes are created parent-first in an arena, then assembled bottom-up,
    // so neither phase recurses.
    struct Node {
        rule: &'static str,
        args: Vec<Word>,
        children: Vec<usize>,
    }
    let mut arena = vec![
        Node {
            rule: labels::RZ,
            args: vec![word.clone()],
            children: vec![1],
        },
        Node {
            rule: "",
            args: vec![top.0, top.1],
            children: vec![],
        },
    ];
    let mut work = vec![1];
    while let Some(k) = work.pop() {
        let (v, w) = (&arena[k].args[0], &arena[k].args[1]);
        let d = if !v.is_empty() && !w.is_empty() && v.len() + w.len() > 2 {
            Some(decompose_pair_with_stats(v, w, strategy, stats)?)
        } else {
            None
        };
        let step = build_step(v, w, d.as_ref())?;
        arena[k].rule = step.rule;
        for (p, q) in step.children {
            let id = arena.len();
            arena[k].children.push(id);
            work.push(id);
            arena.push(Node {
                rule: "",
                args: vec![p, q],
                children: vec![],
            });
        }
    }
    let mut built: Vec<Option<DerivationTree>> = (0..arena.len()).map(|_| None).collect();
    for (k, node) in arena.into_iter().enumerate().rev() {
        let children = node
            .children
            .iter()
            .map(|&c| built[c].take().expect("children are built first"))
            .collect();
        built[k] = Some(DerivationTree::new(node.rule, node.args, children));
    }
    Ok(built[0].take().expect("root"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{certify, g2, to_sexp};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn words_of(v: &str, x: &str, strategy: Strategy) -> [Vec<Word>; 2] {
        let sources = [w(v), w(x)];
        decompose_pair(&sources[0], &sources[1], strategy)
            .unwrap()
            .component_words(&sources)
    }

    #[test]
    fn decompose_examples() {
        for strategy in [Strategy::Guided, Strategy::Search] {
            assert_eq!(
                words_of("ab", "BA", strategy),
                [vec![w("a"), w("A")], vec![w("b"), w("B")]]
            );
            assert_eq!(
                words_of("abb", "ABB", strategy),
                [vec![w("a"), w("A")], vec![w("bb"), w("BB")]]
            );
            assert_eq!(
                decompose_pair(&w("a"), &w("A"), strategy),
                Err(ParseError::TooShort(2))
            );
            assert_eq!(
                decompose_pair(&w(""), &w("aA"), strategy),
                Err(ParseError::EmptyWord { index: 0 })
            );
            assert!(matches!(
                decompose_pair(&w("ab"), &w("A"), strategy),
                Err(ParseError::NotBalanced(_))
            ));
        }
    }

    #[test]
    fn build_step_examples() {
        let (v, x) = (w("ab"), w("BA"));
        let d = decompose_pair(&v, &x, Strategy::Search).unwrap();
        let step = build_step(&v, &x, Some(&d)).unwrap();
        assert_eq!(
            step,
            Step {
                rule: labels::RN,
                children: vec![(w("a"), w("A")), (w("b"), w("B"))]
            }
        );

        let (v, x) = (w("aA"), w("bB"));
        let d = decompose_pair(&v, &x, Strategy::Guided).unwrap();
        let step = build_step(&v, &x, Some(&d)).unwrap();
        assert_eq!(
            step,
            Step {
                rule: labels::RN,
                children: vec![(w("aA"), w("")), (w(""), w("bB"))]
            }
        );

        let step = build_step(&w("aA"), &w(""), None).unwrap();
        assert_eq!(
            step,
            Step {
                rule: labels::RL,
                children: vec![(w("a"), w("A")), (w(""), w(""))]
            }
        );

        assert_eq!(
            build_step(&w("B"), &w("b"), None).unwrap().rule,
            labels::RB_BAR
        );
        assert!(build_step(&w("a"), &w("b"), None).is_err());
        assert!(build_step(&w("ab"), &w("BA"), None).is_err());
    }

    #[test]
    fn non_canonical_decomposition_is_rejected() {
        let (v, x) = (w("ab"), w("BA"));
        let raw = BalDecomposition::raw(
            vec![FactorRef::new(0, 1, 2), FactorRef::new(1, 0, 1)],
            vec![FactorRef::new(0, 0, 1), FactorRef::new(1, 1, 2)],
        );
        assert!(matches!(
            build_step(&v, &x, Some(&raw)),
            Err(ParseError::NoPattern(_))
        ));
    }

    #[test]
    fn parse_examples() {
        for strategy in [Strategy::Guided, Strategy::Search] {
            assert_eq!(
                to_sexp(&parse(&w("aA"), strategy).unwrap()),
                r#"(r_z "aA" (r_a "a" "A"))"#
            );
            assert_eq!(
                to_sexp(&parse(&w(""), strategy).unwrap()),
                r#"(r_z "" (r_0 "" ""))"#
            );
            assert!(matches!(
                parse(&w("ab"), strategy),
                Err(ParseError::NotBalanced(_))
            ));
            let t = parse(&w("abAB"), strategy).unwrap();
            assert_eq!(certify(&g2(), &t), Ok(w("abAB")));
        }
        assert!(matches!(
            parse(&w("a3A3"), Strategy::Guided),
            Err(ParseError::Alphabet(_))
        ));
    }

    #[test]
    fn every_pattern_rebuilds_its_pair() {
        use crate::grammar::instantiate;
        use std::collections::HashMap;
        let g = g2();
        // Distinct single letters per slot make any misplacement visible.
        for p in PATTERNS {
            let rule = g.rule(p.rule).unwrap();
            let name = |s: Slot| match s {
                Slot::Empty => String::new(),
                Slot::A(k) => format!("A{k}"),
                Slot::B(k) => format!("B{k}"),
            };
            let mut names = HashMap::new();
            for ((_, vars), args) in rule.rhs.iter().zip(p.children) {
                for (var, slot) in vars.iter().zip(args) {
                    names.insert(var.clone(), name(slot));
                }
            }
            // Rebuild each lhs argument as a list of slot names by substituting marker words.
            let markers: Vec<String> = names.values().filter(|n| !n.is_empty()).cloned().collect();
            let marker_word = |n: &str| -> Word {
                let k = markers.iter().position(|m| m == n).unwrap();
                Word::from_letters(vec![words::Letter::plain(k as u32 + 1)])
            };
            let assignment = names
                .iter()
                .map(|(var, n)| {
                    (
                        var.clone(),
                        if n.is_empty() {
                            Word::new()
                        } else {
                            marker_word(n)
                        },
                    )
                })
                .collect();
            let inst = instantiate(rule, &assignment).unwrap();
            let mut seen = [0usize; 2];
            let mut expect = |layout: &[u8]| -> Word {
                let mut out = Word::new();
                for &c in layout {
                    let comp = (c == b'B') as usize;
                    let n = format!("{}{}", c as char, seen[comp]);
                    seen[comp] += 1;
                    out.push(marker_word(&n)[0]);
                }
                out
            };
            let expected = vec![expect(p.v_layout), expect(p.w_layout)];
            assert_eq!(inst.lhs.1, expected, "{p:?}");
        }
    }
}
