use super::{BalDecomposition, DecomposeError, FactorRef};
use crate::words::{self, Word};

/// The list obtained by replacing `factor(sources[entry], i, i - 1 + delta)` with `s`.
pub fn replaced_sources(
    sources: &[Word],
    entry: usize,
    i: usize,
    delta: usize,
    s: &Word,
) -> Result<Vec<Word>, DecomposeError> {
    check_indices(sources, entry, i, delta)?;
    let old = &sources[entry];
    let cut = i + 1 - delta;
    let mut new: Vec<_> = old[..cut].to_vec();
    new.extend_from_slice(s);
    new.extend_from_slice(&old[i + 1..]);
    let mut out = sources.to_vec();
    out[entry] = Word::from_letters(new);
    Ok(out)
}

fn check_indices(
    sources: &[Word],
    entry: usize,
    i: usize,
    delta: usize,
) -> Result<(), DecomposeError> {
    if delta > 1 {
        return Err(DecomposeError::OutOfRange { index: delta });
    }
    let Some(word) = sources.get(entry) else {
        return Err(DecomposeError::OutOfRange { index: entry });
    };
    if i >= word.len() {
        return Err(DecomposeError::OutOfRange { index: i });
    }
    Ok(())
}

/// Rewrites `d` for the list where position `i` of `sources[entry]` is replaced
/// by `s` (`delta = 1`), or `s` is inserted right after position `i`
/// (`delta = 0`). The slice holding position `i` absorbs the change; every
/// other slice keeps its component and is only re-indexed.
///
/// `s` must have the balance of the factor it replaces.
pub fn replace_in_decomposition(
    sources: &[Word],
    d: &BalDecomposition,
    entry: usize,
    i: usize,
    delta: usize,
    s: &Word,
) -> Result<BalDecomposition, DecomposeError> {
    check_indices(sources, entry, i, delta)?;
    d.validate(sources)?;
    let n = sources
        .iter()
        .chain([s])
        .map(|w| w.max_pair())
        .max()
        .unwrap_or(1)
        .max(1) as usize;
    let replaced = if delta == 0 {
        Word::new()
    } else {
        words::factor(&sources[entry], i, i)
    };
    let expected = words::balance(&replaced, n)?;
    let found = words::balance(s, n)?;
    if expected != found {
        return Err(DecomposeError::BalanceMismatch { expected, found });
    }

    let grow = s.len() as isize - delta as isize;
    let shift = |x: usize| (x as isize + grow) as usize;
    let moved = |f: &FactorRef| -> FactorRef {
        if f.source != entry || f.end <= i {
            *f
        } else if f.start <= i {
            FactorRef::new(f.source, f.start, shift(f.end))
        } else {
            FactorRef::new(f.source, shift(f.start), shift(f.end))
        }
    };
    let component = |c: &[FactorRef]| c.iter().map(moved).collect::<Vec<_>>();
    let out = BalDecomposition::new(component(d.first()), component(d.second()));
    out.validate(&replaced_sources(sources, entry, i, delta, s)?)?;
    Ok(out)
}
