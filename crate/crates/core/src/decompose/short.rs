use super::{BalDecomposition, DecomposeError, FactorRef};
use crate::words::{self, Letter, Word};

/// Which of the three short-case shapes produced a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShortCase {
    /// The first letter of `x` is conjugate to the last letter of `y`.
    OuterLetters,
    /// The last letter of `x` is conjugate to the first letter of `y`.
    InnerLetters,
    /// Ultra-proper left factors `p ⪯ x`, `q ⪯ y` with `pq` balanced.
    Prefixes { p: usize, q: usize },
}

fn check_preconditions(x: &Word, y: &Word) -> Result<usize, DecomposeError> {
    for (index, s) in [x, y].into_iter().enumerate() {
        if s.is_empty() {
            return Err(DecomposeError::EmptyWord { index });
        }
    }
    for (index, s) in [x, y].into_iter().enumerate() {
        if !s.is_short() {
            return Err(DecomposeError::NotShort { index });
        }
    }
    if x.len() + y.len() <= 2 {
        return Err(DecomposeError::TooShort(x.len() + y.len()));
    }
    let n = x.max_pair().max(y.max_pair()) as usize;
    let balance = words::balance(&x.concat(y), n)?;
    if !balance.is_zero() {
        return Err(DecomposeError::NotBalanced(balance));
    }
    Ok(n)
}

fn prefix_sums(w: &[Letter], n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut cur = vec![0i64; n];
    out.push(cur.clone());
    for x in w {
        cur[x.pair() as usize - 1] += x.sign();
        out.push(cur.clone());
    }
    out
}

/// The first applicable short-case shape for `(x, y)`, tried in order: outer
/// letters, inner letters, then prefix pairs by increasing `|p| + |q|` and then `|p|`.
pub fn short_case(x: &Word, y: &Word) -> Result<ShortCase, DecomposeError> {
    let n = check_preconditions(x, y)?;
    if x[0].conjugate() == y[y.len() - 1] {
        return Ok(ShortCase::OuterLetters);
    }
    if x[x.len() - 1] == y[0].conjugate() {
        return Ok(ShortCase::InnerLetters);
    }
    let px = prefix_sums(x, n);
    let py = prefix_sums(y, n);
    for total in 2..=(x.len() + y.len() - 2) {
        for (p, sx) in px.iter().enumerate().take(x.len()).skip(1) {
            let Some(q) = total.checked_sub(p) else { break };
            if q == 0 || q >= y.len() {
                continue;
            }
            if sx.iter().zip(&py[q]).all(|(a, b)| a + b == 0) {
                return Ok(ShortCase::Prefixes { p, q });
            }
        }
    }
    // Unreachable for inputs meeting the preconditions.
    Err(DecomposeError::NotBalanced(words::balance(
        &x.concat(y),
        n,
    )?))
}

/// Balanced decomposition of a short pair `(x, y)` with `xy` balanced and `|xy| > 2`.
pub fn decompose_short(x: &Word, y: &Word) -> Result<BalDecomposition, DecomposeError> {
    let (lx, ly) = (x.len(), y.len());
    let f = FactorRef::new;
    let d = match short_case(x, y)? {
        ShortCase::OuterLetters => {
            let mut inner = Vec::new();
            if lx > 1 {
                inner.push(f(0, 1, lx));
            }
            if ly > 1 {
                inner.push(f(1, 0, ly - 1));
            }
            BalDecomposition::new(vec![f(0, 0, 1), f(1, ly - 1, ly)], inner)
        }
        ShortCase::InnerLetters => {
            let mut outer = Vec::new();
            if lx > 1 {
                outer.push(f(0, 0, lx - 1));
            }
            if ly > 1 {
                outer.push(f(1, 1, ly));
            }
            BalDecomposition::new(vec![f(0, lx - 1, lx), f(1, 0, 1)], outer)
        }
        ShortCase::Prefixes { p, q } => {
            BalDecomposition::new(vec![f(0, 0, p), f(1, 0, q)], vec![f(0, p, lx), f(1, q, ly)])
        }
    };
    debug_assert_eq!(d.validate(&[x.clone(), y.clone()]), Ok(()));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn words_of(x: &str, y: &str) -> [Vec<Word>; 2] {
        let sources = [w(x), w(y)];
        decompose_short(&sources[0], &sources[1])
            .unwrap()
            .component_words(&sources)
    }

    #[test]
    fn examples() {
        assert_eq!(
            words_of("ab", "BA"),
            [vec![w("a"), w("A")], vec![w("b"), w("B")]]
        );
        assert_eq!(
            words_of("aab", "BAA"),
            [vec![w("a"), w("A")], vec![w("ab"), w("BA")]]
        );
        assert_eq!(
            words_of("abb", "ABB"),
            [vec![w("a"), w("A")], vec![w("bb"), w("BB")]]
        );
        assert_eq!(
            short_case(&w("abb"), &w("ABB")),
            Ok(ShortCase::Prefixes { p: 1, q: 1 })
        );
        assert_eq!(
            short_case(&w("ab"), &w("AB")),
            Ok(ShortCase::Prefixes { p: 1, q: 1 })
        );
        assert_eq!(short_case(&w("ba"), &w("AB")), Ok(ShortCase::OuterLetters));
        assert_eq!(
            short_case(&w("ba"), &w("BA")),
            Ok(ShortCase::Prefixes { p: 1, q: 1 })
        );
        assert_eq!(
            short_case(&w("aba"), &w("AAB")),
            Ok(ShortCase::InnerLetters)
        );
    }

    #[test]
    fn preconditions() {
        assert_eq!(
            decompose_short(&w("a"), &w("A")),
            Err(DecomposeError::TooShort(2))
        );
        assert_eq!(
            decompose_short(&w(""), &w("aA")),
            Err(DecomposeError::EmptyWord { index: 0 })
        );
        assert_eq!(
            decompose_short(&w("aA"), &w("bB")),
            Err(DecomposeError::NotShort { index: 0 })
        );
        assert!(matches!(
            decompose_short(&w("ab"), &w("B")),
            Err(DecomposeError::NotBalanced(_))
        ));
        assert!(matches!(
            decompose_short(&w("ab"), &w("a")),
            Err(DecomposeError::NotBalanced(_))
        ));
    }
}
