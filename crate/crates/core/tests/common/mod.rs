#![allow(dead_code)]

use o2_mcfg::decompose::ShortCase;
use o2_mcfg::words::{Letter, Word};
use o2_mcfg::DerivationTree;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn w(s: &str) -> Word {
    s.parse().unwrap()
}

pub fn word_from_digits(digits: &[usize]) -> Word {
    digits.iter().map(|&d| Letter::SIGMA2[d]).collect()
}

/// Every word of length `len` over Σ₂, in base-4 order.
pub fn all_words(len: usize) -> impl Iterator<Item = Word> {
    let total = 4usize.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut digits = vec![0; len];
        for d in digits.iter_mut().rev() {
            *d = code % 4;
            code /= 4;
        }
        word_from_digits(&digits)
    })
}

/// Letter counts compared directly, without the crate's balance map.
pub fn balanced_by_count(s: &str) -> bool {
    let count = |c| s.chars().filter(|&x| x == c).count();
    count('a') == count('A') && count('b') == count('B')
}

/// Balanced words of every length up to `max_len`, by filtering all words.
pub fn brute_balanced(max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(all_words)
        .filter(|x| balanced_by_count(&x.to_string()))
        .collect()
}

/// The I-rules of G₂ written out on strings: the argument pair a node must
/// carry given its children's pairs.
fn rank2(rule: &str, (v, w): (&str, &str), (x, y): (&str, &str)) -> Option<(String, String)> {
    Some(match rule {
        "r_l" => (format!("{v}{x}{w}"), y.to_string()),
        "r_r" => (v.to_string(), format!("{x}{w}{y}")),
        "r_n" => (format!("{v}{x}"), format!("{y}{w}")),
        "r_s" => (format!("{v}{x}"), format!("{w}{y}")),
        _ => return None,
    })
}

fn rank0(rule: &str) -> Option<(&'static str, &'static str)> {
    Some(match rule {
        "r_0" => ("", ""),
        "r_a" => ("a", "A"),
        "r_A" => ("A", "a"),
        "r_b" => ("b", "B"),
        "r_B" => ("B", "b"),
        _ => return None,
    })
}

/// The pair derived by an I-node, if the subtree is a valid I-derivation.
fn i_pair(t: &DerivationTree) -> Option<(String, String)> {
    let args: Vec<String> = t.args.iter().map(|x| x.to_string()).collect();
    if args.len() != 2 {
        return None;
    }
    let expected = if let Some((p, q)) = rank0(&t.rule) {
        if !t.children.is_empty() {
            return None;
        }
        (p.to_string(), q.to_string())
    } else {
        let [c0, c1] = t.children.as_slice() else {
            return None;
        };
        let (v, w) = i_pair(c0)?;
        let (x, y) = i_pair(c1)?;
        rank2(&t.rule, (&v, &w), (&x, &y))?
    };
    (expected.0 == args[0] && expected.1 == args[1]).then_some(expected)
}

/// Whether `t` is a complete S-derivation of G₂; returns the derived word.
pub fn g2_yield(t: &DerivationTree) -> Option<String> {
    if t.rule != "r_z" || t.args.len() != 1 {
        return None;
    }
    let [c] = t.children.as_slice() else {
        return None;
    };
    let (v, w) = i_pair(c)?;
    let word = format!("{v}{w}");
    (word == t.args[0].to_string()).then_some(word)
}

const RULES: [&str; 10] = [
    "r_0", "r_a", "r_A", "r_b", "r_B", "r_l", "r_r", "r_n", "r_s", "r_z",
];

/// One random single-point change to a random node: relabel, swap or drop
/// children, swap arguments, or insert or overwrite one letter of an argument.
pub fn mutate<R: Rng>(rng: &mut R, t: &DerivationTree) -> DerivationTree {
    let mut m = t.clone();
    let paths = t.paths();
    let node = m.at_mut(paths.choose(rng).unwrap()).unwrap();
    let letters = ["a", "A", "b", "B"];
    match rng.gen_range(0..6) {
        0 => node.rule = RULES.choose(rng).unwrap().to_string(),
        1 if node.children.len() == 2 => node.children.swap(0, 1),
        2 if node.args.len() == 2 => node.args.swap(0, 1),
        3 if !node.children.is_empty() => {
            node.children.pop();
        }
        4 => {
            let k = rng.gen_range(0..node.args.len());
            let mut s = node.args[k].to_string();
            let at = rng.gen_range(0..=s.len());
            s.insert_str(at, letters.choose(rng).unwrap());
            node.args[k] = w(&s);
        }
        _ => {
            let k = rng.gen_range(0..node.args.len());
            let s = node.args[k].to_string();
            if s.is_empty() {
                node.args[k] = w(letters.choose(rng).unwrap());
            } else {
                let at = rng.gen_range(0..s.len());
                let mut t = s.clone();
                t.replace_range(at..at + 1, letters.choose(rng).unwrap());
                node.args[k] = w(&t);
            }
        }
    }
    m
}

fn conj(x: Letter, y: Letter) -> bool {
    x.conjugate() == y
}

/// The short-case trichotomy checked directly: returns whether the reported
/// case holds and no earlier case applies.
pub fn trichotomy_holds(x: &Word, y: &Word, case: ShortCase) -> bool {
    let outer = conj(x[0], y[y.len() - 1]);
    let inner = conj(x[x.len() - 1], y[0]);
    match case {
        ShortCase::OuterLetters => outer,
        ShortCase::InnerLetters => !outer && inner,
        ShortCase::Prefixes { p, q } => {
            !outer
                && !inner
                && (1..x.len()).contains(&p)
                && (1..y.len()).contains(&q)
                && balanced_by_count(&format!("{}{}", &x.to_string()[..p], &y.to_string()[..q]))
        }
    }
}
