//! Bump cancellation and lifting a decomposition of the reduced pair back to
//! the original one.
//!
//! The canceled letters are put back next to a slice of one component when
//! both sit next to that component. Otherwise the component boundary inside
//! the bump is slid one letter at a time; each move is paired with a
//! compensating move elsewhere so both components stay balanced.

use super::{replace_in_decomposition, BalDecomposition, DecomposeError};
use crate::words::{self, Bump, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WhichWord {
    First,
    Second,
}

impl WhichWord {
    pub fn index(self) -> usize {
        match self {
            WhichWord::First => 0,
            WhichWord::Second => 1,
        }
    }

    pub fn other(self) -> WhichWord {
        match self {
            WhichWord::First => WhichWord::Second,
            WhichWord::Second => WhichWord::First,
        }
    }
}

/// Where the bump sits in its word. A bump spanning the whole word is a left factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BumpPosition {
    LeftFactor,
    RightFactor,
    Interior,
}

/// The word in which a `β̄^j α` prefix was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternSource {
    ReversedDesignated,
    Other,
    ReversedOther,
}

/// Why a lift gave up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderReport {
    pub which: WhichWord,
    pub bump: Bump,
    pub position: BumpPosition,
    /// First `x` among the reversed designated word, the other word and its
    /// reverse that starts with `β̄^j α`, `1 ≤ j < k`, where `α β …` opens the
    /// bump and `k` is its interior length.
    pub pattern: Option<(PatternSource, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftOutcome {
    Lifted(BalDecomposition),
    BorderCase(BorderReport),
}

/// Removes the two extrema of `bp` from `w`.
pub fn cancel_bump(w: &Word, bp: &Bump) -> Result<Word, DecomposeError> {
    if !words::is_bump(w, bp) {
        return Err(DecomposeError::NotABump(*bp));
    }
    Ok(words::remove_indices(w, [bp.start, bp.end]))
}

/// A shortest bump of either word; ties go to `s0`, then to the smaller start.
pub fn find_min_bump(s0: &Word, s1: &Word) -> Option<(WhichWord, Bump)> {
    [(WhichWord::First, s0), (WhichWord::Second, s1)]
        .into_iter()
        .flat_map(|(which, s)| words::bumps(s).into_iter().map(move |b| (which, b)))
        .min_by_key(|(which, b)| (b.len(), *which, b.start))
}

pub fn lift_decomposition(
    s0: &Word,
    s1: &Word,
    which: WhichWord,
    bp: &Bump,
    d_reduced: &BalDecomposition,
) -> Result<LiftOutcome, DecomposeError> {
    lift_decomposition_observed(s0, s1, which, bp, d_reduced, |_, _| {})
}

/// As [`lift_decomposition`], calling `observe` with the reduced pair and the
/// intermediate decomposition after every sliding move.
pub fn lift_decomposition_observed<F>(
    s0: &Word,
    s1: &Word,
    which: WhichWord,
    bp: &Bump,
    d_reduced: &BalDecomposition,
    mut observe: F,
) -> Result<LiftOutcome, DecomposeError>
where
    F: FnMut(&[Word], &BalDecomposition),
{
    let sources = [s0.clone(), s1.clone()];
    let k = which.index();
    let designated = &sources[k];
    let reduced_word = cancel_bump(designated, bp)?;
    let mut reduced = sources.clone();
    reduced[k] = reduced_word;
    d_reduced.validate(&reduced)?;
    let (i, j) = (bp.start, bp.end);

    if j == i + 1 {
        let pair = Word::from_letters(vec![designated[i], designated[j]]);
        let d = if i > 0 {
            replace_in_decomposition(&reduced, d_reduced, k, i - 1, 0, &pair)?
        } else {
            let s = pair.concat(&Word::from_letters(vec![reduced[k][0]]));
            replace_in_decomposition(&reduced, d_reduced, k, 0, 1, &s)?
        };
        return Ok(LiftOutcome::Lifted(d));
    }

    let slider = Slider {
        sources: &sources,
        reduced: &reduced,
        k,
        i,
        j,
    };
    let labels = d_reduced.labels(&[reduced[0].len(), reduced[1].len()]);
    let cap = s0.len() + s1.len();
    for rightwards in [true, false] {
        if let Some(d) = slider.slide(labels.clone(), rightwards, cap, &mut observe) {
            return Ok(LiftOutcome::Lifted(d));
        }
    }
    Ok(LiftOutcome::BorderCase(border_report(&sources, which, bp)))
}

struct Slider<'a> {
    sources: &'a [Word; 2],
    reduced: &'a [Word; 2],
    /// Index of the designated word.
    k: usize,
    i: usize,
    j: usize,
}

impl Slider<'_> {
    /// Component labels adjacent to the gap before reduced position `b` of the designated word.
    fn options(&self, labels: &[Vec<u8>], b: usize) -> [Option<u8>; 2] {
        let row = &labels[self.k];
        [b.checked_sub(1).map(|p| row[p]), row.get(b).copied()]
    }

    /// Reinstates both canceled letters into a component adjacent to both gaps.
    fn reinstate(&self, labels: &[Vec<u8>]) -> Option<BalDecomposition> {
        let at_i = self.options(labels, self.i);
        let at_j = self.options(labels, self.j - 1);
        let x = (0u8..2).find(|x| at_i.contains(&Some(*x)) && at_j.contains(&Some(*x)))?;
        let mut full = labels.to_vec();
        let row = &mut full[self.k];
        row.insert(self.i, x);
        row.insert(self.j, x);
        let d = BalDecomposition::from_labels(&full);
        d.validate(self.sources).ok().map(|_| d)
    }

    fn interior(&self) -> std::ops::Range<usize> {
        self.i..self.j - 1
    }

    fn slide<F>(
        &self,
        mut labels: Vec<Vec<u8>>,
        rightwards: bool,
        cap: usize,
        observe: &mut F,
    ) -> Option<BalDecomposition>
    where
        F: FnMut(&[Word], &BalDecomposition),
    {
        let interior = self.interior();
        for _ in 0..=cap {
            if let Some(d) = self.reinstate(&labels) {
                return Some(d);
            }
            let row = &labels[self.k];
            // The interior is made uniform with the label at its left (or right) end.
            let e = if rightwards {
                let target = row[interior.start];
                interior.clone().find(|&p| row[p] != target)?
            } else {
                let target = row[interior.end - 1];
                interior.clone().rev().find(|&p| row[p] != target)?
            };
            let from = row[e];
            labels[self.k][e] = 1 - from;
            self.compensate(&mut labels, self.reduced[self.k][e], from, e)?;
            observe(self.reduced, &BalDecomposition::from_labels(&labels));
        }
        None
    }

    /// After a letter `beta` moved from component `from` to the other one,
    /// moves a second letter at a run edge so both components regain their balance.
    fn compensate(
        &self,
        labels: &mut [Vec<u8>],
        beta: Letter,
        from: u8,
        moved: usize,
    ) -> Option<()> {
        let to = 1 - from;
        let interior = self.interior();
        for src in [self.k, 1 - self.k] {
            let word = &self.reduced[src];
            for p in 0..word.len() {
                if src == self.k && (p == moved || interior.contains(&p)) {
                    continue;
                }
                let label = labels[src][p];
                let wanted = if word[p] == beta && label == to {
                    from
                } else if word[p] == beta.conjugate() && label == from {
                    to
                } else {
                    continue;
                };
                let row = &labels[src];
                let at_edge = (p > 0 && row[p - 1] == wanted) || row.get(p + 1) == Some(&wanted);
                if at_edge {
                    labels[src][p] = wanted;
                    return Some(());
                }
            }
        }
        None
    }
}

fn border_report(sources: &[Word; 2], which: WhichWord, bp: &Bump) -> BorderReport {
    let designated = &sources[which.index()];
    let other = &sources[which.other().index()];
    let position = if bp.start == 0 {
        BumpPosition::LeftFactor
    } else if bp.end + 1 == designated.len() {
        BumpPosition::RightFactor
    } else {
        BumpPosition::Interior
    };
    let alpha = bp.direction;
    let beta_bar = designated[bp.start + 1].conjugate();
    let k = bp.end - bp.start - 1;
    let candidates = [
        (
            PatternSource::ReversedDesignated,
            words::reverse(designated),
        ),
        (PatternSource::Other, other.clone()),
        (PatternSource::ReversedOther, words::reverse(other)),
    ];
    let pattern = candidates.into_iter().find_map(|(source, x)| {
        let run = x.iter().take_while(|&&y| y == beta_bar).count();
        (run >= 1 && run < k && x.get(run) == Some(&alpha)).then_some((source, run))
    });
    BorderReport {
        which,
        bump: *bp,
        position,
        pattern,
    }
}
