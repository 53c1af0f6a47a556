#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use slpseq::slp::{Slp, Statement};

pub fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

pub fn fib() -> Slp {
    Slp::parse("1='b'\n2='a'\n3=2 1\n4=3 2\n5=4 3\n6=5 4\n").unwrap()
}

/// Left-deep chain: every statement appends one character.
pub fn chain(text: &str) -> Slp {
    let mut st = Vec::new();
    let mut ids = std::collections::HashMap::new();
    let mut acc: Option<usize> = None;
    for ch in text.chars() {
        let t = *ids.entry(ch).or_insert_with(|| {
            st.push(Statement::Terminal(ch));
            st.len() - 1
        });
        acc = Some(match acc {
            None => t,
            Some(a) => {
                st.push(Statement::Concat(a, t));
                st.len() - 1
            }
        });
    }
    Slp::new(st, acc).unwrap()
}

/// `c` repeated `2^k` times.
pub fn doubling(c: char, k: usize) -> Slp {
    let mut st = vec![Statement::Terminal(c)];
    for r in 0..k {
        st.push(Statement::Concat(r, r));
    }
    Slp::new(st, None).unwrap()
}

pub fn alphabet(sigma: usize) -> Vec<char> {
    "abcdefgh".chars().take(sigma).collect()
}

/// Random SLP over the first `sigma` letters with at most `max_statements`
/// statements and expanded length at most `max_len`. Later statements tend
/// to combine recent ones so texts grow long.
pub fn random_slp(rng: &mut impl Rng, sigma: usize, max_statements: usize, max_len: usize) -> Slp {
    let mut letters = alphabet(sigma);
    letters.shuffle(rng);
    let terminals = rng.gen_range(1..=sigma.min(max_statements));
    let mut st: Vec<Statement> = letters[..terminals].iter().map(|&c| Statement::Terminal(c)).collect();
    let mut len: Vec<usize> = vec![1; terminals];
    let total = rng.gen_range((max_statements / 2).max(terminals)..=max_statements);
    while st.len() < total {
        let k = st.len();
        let pick = |rng: &mut dyn rand::RngCore| {
            if rng.gen_bool(0.85) {
                rng.gen_range(k.saturating_sub(2)..k)
            } else {
                rng.gen_range(0..k)
            }
        };
        let mut placed = false;
        for _ in 0..20 {
            let (s, t) = (pick(rng), pick(rng));
            if len[s] + len[t] <= max_len {
                st.push(Statement::Concat(s, t));
                len.push(len[s] + len[t]);
                placed = true;
                break;
            }
        }
        if !placed {
            break;
        }
    }
    Slp::new(st, None).unwrap()
}

/// Random pattern of length `1..=max_n`: half the time a subsequence of
/// `text`, otherwise uniform over the first `sigma` letters.
pub fn random_pattern(rng: &mut impl Rng, text: &[char], sigma: usize, max_n: usize) -> Vec<char> {
    let letters = alphabet(sigma);
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=max_n.min(text.len()));
        let mut pos: Vec<usize> = rand::seq::index::sample(rng, text.len(), n).into_vec();
        pos.sort_unstable();
        pos.into_iter().map(|i| text[i]).collect()
    } else {
        let n = rng.gen_range(1..=max_n);
        (0..n).map(|_| letters[rng.gen_range(0..letters.len())]).collect()
    }
}

pub fn expand(slp: &Slp) -> Vec<char> {
    slp.expand(slp.root(), 1 << 20).unwrap().chars().collect()
}
