//! Brute-force references: enumeration of O₂, exhaustive search for
//! rule-shaped balanced decompositions, and a parser built on that search
//! alone.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::decompose::{BalDecomposition, FactorRef};
use crate::grammar::{g2, instantiate, labels, DerivationTree, Mcfg, Variable};
use crate::parser::ParseError;
use crate::words::{self, Letter, Word};

/// Every word of O₂ of length at most `max_len`, shortest first and
/// lexicographically (`a < A < b < B`) within a length.
pub fn enumerate_balanced(max_len: usize) -> BalancedWords {
    BalancedWords {
        max_len,
        len: 0,
        digits: Vec::new(),
        counts: [0; 2],
        fresh: true,
    }
}

pub struct BalancedWords {
    max_len: usize,
    len: usize,
    digits: Vec<u8>,
    counts: [i64; 2],
    fresh: bool,
}

impl BalancedWords {
    fn apply(&mut self, d: u8, sign: i64) {
        let x = Letter::SIGMA2[d as usize];
        self.counts[x.pair() as usize - 1] += sign * x.sign();
    }

    /// Whether appending `d` leaves a prefix that can still return to balance.
    fn feasible(&self, d: u8) -> bool {
        let x = Letter::SIGMA2[d as usize];
        let mut c = self.counts;
        c[x.pair() as usize - 1] += x.sign();
        let remaining = self.len - self.digits.len() - 1;
        (c[0].unsigned_abs() + c[1].unsigned_abs()) as usize <= remaining
    }

    fn push_from(&mut self, lo: u8) -> bool {
        match (lo..4).find(|&d| self.feasible(d)) {
            Some(d) => {
                self.digits.push(d);
                self.apply(d, 1);
                true
            }
            None => false,
        }
    }

    /// Moves to the next complete word of the current length.
    fn step(&mut self, mut backtrack: bool) -> bool {
        loop {
            if backtrack {
                let Some(d) = self.digits.pop() else {
                    return false;
                };
                self.apply(d, -1);
                backtrack = !self.push_from(d + 1);
            } else if self.digits.len() == self.len {
                return true;
            } else {
                backtrack = !self.push_from(0);
            }
        }
    }
}

impl Iterator for BalancedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        while self.len <= self.max_len {
            let found = if self.fresh {
                self.fresh = false;
                self.step(false)
            } else {
                self.step(true)
            };
            if found {
                return Some(
                    self.digits
                        .iter()
                        .map(|&d| Letter::SIGMA2[d as usize])
                        .collect(),
                );
            }
            self.len += 2;
            self.fresh = true;
        }
        None
    }
}

/// Limits on a decomposition search. The default is unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of cut-point tuples examined.
    pub max_splits: Option<usize>,
    pub time_limit: Option<Duration>,
}

/// Every canonical rule-shaped balanced decomposition of `(v, w)`: each word
/// cut into contiguous slices, at most four slices in all, at most two per
/// component, both components non-empty and balanced.
///
/// Results come in order of the extra cut points (positions in `vw` other
/// than `|v|`), compared lexicographically; for one set of cuts, the
/// labelling that starts `w` in the first component comes first.
pub fn search_decompositions(v: &Word, w: &Word, budget: SearchBudget) -> Decompositions {
    let total = v.len() + w.len();
    let n = v.max_pair().max(w.max_pair()).max(1) as usize;
    let mut prefix = vec![0i64; (total + 1) * n];
    for (k, x) in v.iter().chain(w.iter()).enumerate() {
        let (before, after) = prefix.split_at_mut((k + 1) * n);
        after[..n].copy_from_slice(&before[k * n..]);
        after[x.pair() as usize - 1] += x.sign();
    }
    Decompositions {
        v_len: v.len(),
        total,
        n,
        prefix,
        cuts: Vec::new(),
        started: false,
        w_label: 0,
        done: v.is_empty() || w.is_empty(),
        budget,
        examined: 0,
        deadline: budget.time_limit.map(|t| Instant::now() + t),
        exhausted_budget: false,
    }
}

pub struct Decompositions {
    v_len: usize,
    total: usize,
    n: usize,
    prefix: Vec<i64>,
    cuts: Vec<usize>,
    started: bool,
    /// Label of the first slice of `w` for the current cuts: 0, then 1.
    w_label: u8,
    done: bool,
    budget: SearchBudget,
    examined: usize,
    deadline: Option<Instant>,
    exhausted_budget: bool,
}

impl Decompositions {
    /// Whether the search stopped early because of its budget.
    pub fn exhausted_budget(&self) -> bool {
        self.exhausted_budget
    }

    fn is_cut(&self, c: usize) -> bool {
        c >= 1 && c < self.total && c != self.v_len
    }

    /// The next cut tuple after `self.cuts` in lexicographic order, at most two cuts.
    fn advance_cuts(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return true;
        }
        let first_after = |me: &Self, c: usize| (c + 1..me.total).find(|&x| me.is_cut(x));
        if self.cuts.len() < 2 {
            let from = self.cuts.last().copied().unwrap_or(0);
            if let Some(c) = first_after(self, from) {
                self.cuts.push(c);
                return true;
            }
        }
        while let Some(c) = self.cuts.pop() {
            if let Some(next) = first_after(self, c) {
                self.cuts.push(next);
                return true;
            }
        }
        false
    }

    fn balance_is_zero(&self, slices: &[(usize, usize)]) -> bool {
        (0..self.n).all(|p| {
            slices
                .iter()
                .map(|&(s, e)| self.prefix[e * self.n + p] - self.prefix[s * self.n + p])
                .sum::<i64>()
                == 0
        })
    }

    /// The decomposition for the current cuts and `w_label`, if it qualifies.
    fn candidate(&self) -> Option<BalDecomposition> {
        let mut bounds = vec![0, self.v_len, self.total];
        bounds.extend(&self.cuts);
        bounds.sort_unstable();
        let mut comps: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
        let mut label = 0u8;
        for win in bounds.windows(2) {
            let (s, e) = (win[0], win[1]);
            if s == self.v_len {
                label = self.w_label;
            }
            comps[label as usize].push((s, e));
            label = 1 - label;
        }
        if comps.iter().any(|c| c.is_empty() || c.len() > 2)
            || !comps.iter().all(|c| self.balance_is_zero(c))
        {
            return None;
        }
        let to_ref = |&(s, e): &(usize, usize)| {
            if s < self.v_len {
                FactorRef::new(0, s, e)
            } else {
                FactorRef::new(1, s - self.v_len, e - self.v_len)
            }
        };
        let [a, b] = comps;
        Some(BalDecomposition::new(
            a.iter().map(to_ref).collect(),
            b.iter().map(to_ref).collect(),
        ))
    }
}

impl Iterator for Decompositions {
    type Item = BalDecomposition;

    fn next(&mut self) -> Option<BalDecomposition> {
        while !self.done {
            if self.w_label == 0 {
                if self.budget.max_splits.is_some_and(|m| self.examined >= m)
                    || (self.examined.is_multiple_of(1024)
                        && self.deadline.is_some_and(|d| Instant::now() >= d))
                {
                    self.exhausted_budget = true;
                    self.done = true;
                    return None;
                }
                if !self.advance_cuts() {
                    self.done = true;
                    return None;
                }
                self.examined += 1;
            }
            let found = self.candidate();
            self.w_label = 1 - self.w_label;
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Child argument pairs for a component: two slices in either order, or one
/// slice next to an empty argument on either side.
fn argument_options(component: &[Word]) -> Vec<(Word, Word)> {
    match component {
        [s] => vec![(s.clone(), Word::new()), (Word::new(), s.clone())],
        [s, t] => vec![(s.clone(), t.clone()), (t.clone(), s.clone())],
        _ => Vec::new(),
    }
}

/// The first binary rule of `g` (in grammar order) and child pairs built
/// from the two components that instantiate to `I(p, q)`.
fn match_binary(
    g: &Mcfg,
    p: &Word,
    q: &Word,
    comps: [Vec<Word>; 2],
) -> Option<(String, Vec<(Word, Word)>)> {
    let target = [p.clone(), q.clone()];
    for rule in g.rules.iter().filter(|r| r.rank() == 2) {
        for (first, second) in [(&comps[0], &comps[1]), (&comps[1], &comps[0])] {
            for c1 in argument_options(first) {
                for c2 in argument_options(second) {
                    let mut assignment: HashMap<Variable, Word> = HashMap::new();
                    for ((_, vars), (x, y)) in rule.rhs.iter().zip([&c1, &c2]) {
                        assignment.insert(vars[0].clone(), x.clone());
                        assignment.insert(vars[1].clone(), y.clone());
                    }
                    let inst = instantiate(rule, &assignment).ok()?;
                    if inst.lhs.1 == target {
                        return Some((rule.label.clone(), vec![c1, c2]));
                    }
                }
            }
        }
    }
    None
}

/// The nullary rule of `g` whose arguments are exactly `(p, q)`.
fn match_leaf(g: &Mcfg, p: &Word, q: &Word) -> Option<String> {
    g.rules
        .iter()
        .filter(|r| r.rank() == 0 && r.lhs == "I")
        .find(|r| {
            instantiate(r, &HashMap::new()).is_ok_and(|inst| inst.lhs.1 == [p.clone(), q.clone()])
        })
        .map(|r| r.label.clone())
}

/// One expansion of `I(p, q)` found by search and generic rule matching.
fn reference_step(g: &Mcfg, p: &Word, q: &Word) -> Result<(String, Vec<(Word, Word)>), ParseError> {
    if let Some(label) = match_leaf(g, p, q) {
        return Ok((label, Vec::new()));
    }
    let stuck = || ParseError::InternalIncompleteness {
        v: p.clone(),
        w: q.clone(),
    };
    let comps = if p.is_empty() || q.is_empty() {
        // (s, ε) or (ε, s): the first letter and the rest of s against an empty pair.
        let s = if p.is_empty() { q } else { p };
        [
            vec![Word::from(&s[..1]), Word::from(&s[1..])],
            vec![Word::new(), Word::new()],
        ]
    } else {
        let d = search_decompositions(p, q, SearchBudget::default())
            .next()
            .ok_or_else(stuck)?;
        d.component_words(&[p.clone(), q.clone()])
    };
    match_binary(g, p, q, comps).ok_or_else(stuck)
}

/// A derivation of `word` that uses only exhaustive search and generic rule
/// matching, independent of the parser's pattern table.
pub fn reference_parse(word: &Word) -> Result<DerivationTree, ParseError> {
    let balance = words::balance(word, 2)?;
    if !balance.is_zero() {
        return Err(ParseError::NotBalanced(balance));
    }
    let g = g2();
    let top = if word.is_empty() {
        (Word::new(), Word::new())
    } else {
        (Word::from(&word[..1]), Word::from(&word[1..]))
    };
    // (args, rule, children) in creation order; children always follow their parent.
    let mut nodes: Vec<(Vec<Word>, String, Vec<usize>)> =
        vec![(vec![word.clone()], labels::RZ.to_string(), vec![1])];
    nodes.push((vec![top.0, top.1], String::new(), Vec::new()));
    let mut todo = vec![1];
    while let Some(k) = todo.pop() {
        let (label, children) = reference_step(&g, &nodes[k].0[0], &nodes[k].0[1])?;
        nodes[k].1 = label;
        for (p, q) in children {
            let id = nodes.len();
            nodes[k].2.push(id);
            todo.push(id);
            nodes.push((vec![p, q], String::new(), Vec::new()));
        }
    }
    let mut built: Vec<Option<DerivationTree>> = (0..nodes.len()).map(|_| None).collect();
    for (k, (args, rule, children)) in nodes.into_iter().enumerate().rev() {
        let kids = children
            .iter()
            .map(|&c| built[c].take().expect("built"))
            .collect();
        built[k] = Some(DerivationTree::new(rule, args, kids));
    }
    Ok(built[0].take().expect("root"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::certify;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn all_words(len: usize) -> Vec<Word> {
        let mut out = vec![Word::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|p| {
                    Letter::SIGMA2.into_iter().map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_balanced(0).collect::<Vec<_>>(), vec![w("")]);
        assert_eq!(
            enumerate_balanced(2).collect::<Vec<_>>(),
            vec![w(""), w("aA"), w("Aa"), w("bB"), w("Bb")]
        );
        assert_eq!(enumerate_balanced(1).count(), 1);
        assert_eq!(enumerate_balanced(4).count(), 41);
    }

    #[test]
    fn enumeration_matches_filtered_brute_force() {
        for len in (0..=8).step_by(2) {
            let mut expected: Vec<Word> = all_words(len)
                .into_iter()
                .filter(|x| words::is_balanced(x, 2).unwrap())
                .collect();
            expected.sort();
            let got: Vec<Word> = enumerate_balanced(len).filter(|x| x.len() == len).collect();
            assert_eq!(got, expected, "length {len}");
        }
    }

    #[test]
    fn search_examples() {
        let none = SearchBudget::default();
        assert_eq!(search_decompositions(&w("a"), &w("A"), none).count(), 0);
        assert_eq!(search_decompositions(&w(""), &w("aA"), none).count(), 0);

        let (v, x) = (w("ab"), w("BA"));
        let all: Vec<_> = search_decompositions(&v, &x, none).collect();
        let want = [vec![w("a"), w("A")], vec![w("b"), w("B")]];
        assert!(all
            .iter()
            .any(|d| d.component_words(&[v.clone(), x.clone()]) == want));

        let (v, x) = (w("aA"), w("bB"));
        let first = search_decompositions(&v, &x, none).next().unwrap();
        assert_eq!(
            first.component_words(&[v, x]),
            [vec![w("aA")], vec![w("bB")]]
        );
    }

    #[test]
    fn search_results_are_valid_and_distinct() {
        for word in enumerate_balanced(8).filter(|x| x.len() > 2) {
            for cut in 1..word.len() {
                let sources = [Word::from(&word[..cut]), Word::from(&word[cut..])];
                let all: Vec<_> =
                    search_decompositions(&sources[0], &sources[1], SearchBudget::default())
                        .collect();
                assert!(!all.is_empty(), "{word} at {cut}");
                for d in &all {
                    assert_eq!(d.validate(&sources), Ok(()));
                    assert_eq!(*d, d.canonical());
                }
                let distinct: std::collections::HashSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
            }
        }
    }

    #[test]
    fn budget_stops_the_search() {
        let (v, x) = (w("abAB"), w("baBA"));
        let mut it = search_decompositions(
            &v,
            &x,
            SearchBudget {
                max_splits: Some(1),
                time_limit: None,
            },
        );
        while it.next().is_some() {}
        assert!(it.exhausted_budget());
        let mut it = search_decompositions(&v, &x, SearchBudget::default());
        while it.next().is_some() {}
        assert!(!it.exhausted_budget());
    }

    #[test]
    fn reference_parse_examples() {
        let g = g2();
        for s in ["", "aA", "abAB", "aabBAA", "bBaA"] {
            let t = reference_parse(&w(s)).unwrap();
            assert_eq!(certify(&g, &t), Ok(w(s)), "{s}");
        }
        assert!(matches!(
            reference_parse(&w("aabABB")),
            Err(ParseError::NotBalanced(_))
        ));
    }
}
