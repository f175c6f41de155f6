//! Factorisations and balanced decompositions of word lists.
//!
//! A decomposition of `(s₀, …, s_{n−1})` cuts every source word into non-empty
//! factors and splits all factors into two components, each with at most `n`
//! factors and strictly shorter than the whole list. It is balanced when the
//! concatenation of each component is balanced.
//!
//! Factors are kept as [`FactorRef`] slices into the source words rather than
//! copied strings.

mod lift;
mod replace;
mod short;

use std::fmt;

use thiserror::Error;

use crate::words::{self, Balance, Word};

pub use lift::{
    cancel_bump, find_min_bump, lift_decomposition, lift_decomposition_observed, BorderReport,
    BumpPosition, LiftOutcome, PatternSource, WhichWord,
};
pub use replace::{replace_in_decomposition, replaced_sources};
pub use short::{decompose_short, short_case, ShortCase};

/// A list of words whose concatenation is the factored word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorisation {
    pub parts: Vec<Word>,
}

impl Factorisation {
    pub fn new(parts: Vec<Word>) -> Self {
        Factorisation { parts }
    }

    pub fn concat(&self) -> Word {
        self.parts.iter().flat_map(|p| p.iter().copied()).collect()
    }

    /// Every part non-empty.
    pub fn is_proper(&self) -> bool {
        self.parts.iter().all(|p| !p.is_empty())
    }

    pub fn factors(&self, w: &Word) -> bool {
        self.concat() == *w
    }
}

/// The factor `sources[source][start..end]` (end exclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorRef {
    pub source: usize,
    pub start: usize,
    pub end: usize,
}

impl FactorRef {
    pub fn new(source: usize, start: usize, end: usize) -> Self {
        FactorRef { source, start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn resolve<'a>(&self, sources: &'a [Word]) -> &'a [words::Letter] {
        &sources[self.source][self.start..self.end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidDecomposition {
    #[error("a decomposition needs at least one source word")]
    NoSources,
    #[error("source word {word} is empty")]
    EmptySource { word: usize },
    #[error("factor {factor:?} is empty or lies outside its source word")]
    BadFactor { factor: FactorRef },
    #[error("the factors of source word {word} do not cover it exactly once")]
    NotAFactorisation { word: usize },
    #[error("component {component} is empty")]
    EmptyComponent { component: usize },
    #[error("component {component} has {count} factors, more than the {max} source words")]
    TooManyFactors {
        component: usize,
        count: usize,
        max: usize,
    },
    #[error("component {component} has length {len}, not shorter than the whole list ({total})")]
    TooLong {
        component: usize,
        len: usize,
        total: usize,
    },
    #[error("component {component} has balance {balance}")]
    Unbalanced { component: usize, balance: Balance },
}

/// Two components of factor references.
///
/// [`BalDecomposition::new`] canonicalises: factors are sorted by
/// `(source, start)`, adjacent factors of one component inside the same source
/// are merged, and the component holding position 0 of source 0 comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BalDecomposition {
    components: [Vec<FactorRef>; 2],
}

impl BalDecomposition {
    pub fn new(first: Vec<FactorRef>, second: Vec<FactorRef>) -> Self {
        let mut components = [canonical_component(first), canonical_component(second)];
        let holds_origin =
            |c: &[FactorRef]| c.first().is_some_and(|f| f.source == 0 && f.start == 0);
        if holds_origin(&components[1]) && !holds_origin(&components[0]) {
            components.swap(0, 1);
        }
        BalDecomposition { components }
    }

    /// Keeps the components exactly as given.
    pub fn raw(first: Vec<FactorRef>, second: Vec<FactorRef>) -> Self {
        BalDecomposition {
            components: [first, second],
        }
    }

    pub fn components(&self) -> &[Vec<FactorRef>; 2] {
        &self.components
    }

    pub fn first(&self) -> &[FactorRef] {
        &self.components[0]
    }

    pub fn second(&self) -> &[FactorRef] {
        &self.components[1]
    }

    pub fn canonical(&self) -> BalDecomposition {
        BalDecomposition::new(self.components[0].clone(), self.components[1].clone())
    }

    /// The factor words of each component, in stored order.
    pub fn component_words(&self, sources: &[Word]) -> [Vec<Word>; 2] {
        let words = |c: &[FactorRef]| c.iter().map(|f| Word::from(f.resolve(sources))).collect();
        [words(&self.components[0]), words(&self.components[1])]
    }

    /// Checks every requirement on a balanced decomposition of `sources`.
    pub fn validate(&self, sources: &[Word]) -> Result<(), InvalidDecomposition> {
        if sources.is_empty() {
            return Err(InvalidDecomposition::NoSources);
        }
        if let Some(source) = sources.iter().position(|s| s.is_empty()) {
            return Err(InvalidDecomposition::EmptySource { word: source });
        }
        let mut per_source: Vec<Vec<FactorRef>> = vec![Vec::new(); sources.len()];
        for f in self.components.iter().flatten() {
            if f.is_empty() || f.source >= sources.len() || f.end > sources[f.source].len() {
                return Err(InvalidDecomposition::BadFactor { factor: *f });
            }
            per_source[f.source].push(*f);
        }
        for (source, factors) in per_source.iter_mut().enumerate() {
            factors.sort();
            let mut at = 0;
            for f in factors.iter() {
                if f.start != at {
                    return Err(InvalidDecomposition::NotAFactorisation { word: source });
                }
                at = f.end;
            }
            if at != sources[source].len() {
                return Err(InvalidDecomposition::NotAFactorisation { word: source });
            }
        }
        let total: usize = sources.iter().map(|s| s.len()).sum();
        let n = sources
            .iter()
            .map(|s| s.max_pair())
            .max()
            .unwrap_or(1)
            .max(1) as usize;
        if let Some(component) = self.components.iter().position(|c| c.is_empty()) {
            return Err(InvalidDecomposition::EmptyComponent { component });
        }
        for (component, c) in self.components.iter().enumerate() {
            if c.len() > sources.len() {
                return Err(InvalidDecomposition::TooManyFactors {
                    component,
                    count: c.len(),
                    max: sources.len(),
                });
            }
            let len: usize = c.iter().map(FactorRef::len).sum();
            if len >= total {
                return Err(InvalidDecomposition::TooLong {
                    component,
                    len,
                    total,
                });
            }
            let concat: Vec<words::Letter> = c
                .iter()
                .flat_map(|f| f.resolve(sources).iter().copied())
                .collect();
            let balance = words::balance(&concat, n).expect("n covers every letter");
            if !balance.is_zero() {
                return Err(InvalidDecomposition::Unbalanced { component, balance });
            }
        }
        Ok(())
    }

    /// Component index (0 or 1) of every position of every source word.
    pub(crate) fn labels(&self, lens: &[usize]) -> Vec<Vec<u8>> {
        let mut labels: Vec<Vec<u8>> = lens.iter().map(|&l| vec![0; l]).collect();
        for (c, comp) in self.components.iter().enumerate() {
            for f in comp {
                labels[f.source][f.start..f.end].fill(c as u8);
            }
        }
        labels
    }

    /// Inverse of [`labels`](Self::labels): maximal runs become factors.
    pub(crate) fn from_labels(labels: &[Vec<u8>]) -> BalDecomposition {
        let mut comps: [Vec<FactorRef>; 2] = [Vec::new(), Vec::new()];
        for (source, row) in labels.iter().enumerate() {
            let mut start = 0;
            for k in 1..=row.len() {
                if k == row.len() || row[k] != row[start] {
                    comps[row[start] as usize].push(FactorRef::new(source, start, k));
                    start = k;
                }
            }
        }
        let [a, b] = comps;
        BalDecomposition::new(a, b)
    }
}

fn canonical_component(mut c: Vec<FactorRef>) -> Vec<FactorRef> {
    c.sort();
    let mut out: Vec<FactorRef> = Vec::with_capacity(c.len());
    for f in c {
        match out.last_mut() {
            Some(last) if last.source == f.source && last.end == f.start => last.end = f.end,
            _ => out.push(f),
        }
    }
    out
}

impl fmt::Display for BalDecomposition {
    /// `[(src,start,end),…] | [(src,start,end),…]`, end exclusive.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, comp) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            f.write_str("[")?;
            for (m, r) in comp.iter().enumerate() {
                if m > 0 {
                    f.write_str(",")?;
                }
                write!(f, "({},{},{})", r.source, r.start, r.end)?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("input word {index} is empty")]
    EmptyWord { index: usize },
    #[error("input word {index} is not short")]
    NotShort { index: usize },
    #[error("the concatenation has balance {0}, not zero")]
    NotBalanced(Balance),
    #[error("the concatenation has length {0}; at least 3 is required")]
    TooShort(usize),
    #[error("invalid decomposition: {0}")]
    Invalid(#[from] InvalidDecomposition),
    #[error("replacement has balance {found}, the replaced factor {expected}")]
    BalanceMismatch { expected: Balance, found: Balance },
    #[error("index {index} is out of range")]
    OutOfRange { index: usize },
    #[error("{0} is not a bump of the designated word")]
    NotABump(words::Bump),
    #[error(transparent)]
    Word(#[from] words::WordError),
}
