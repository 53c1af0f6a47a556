mod common;

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{alphabet, chars, expand, random_pattern, random_slp};
use slpseq::oracle;
use slpseq::recognition::{contains, lcs, report_windows_with_cache, ReportMode, SemilocalCache, WindowCounter};
use slpseq::semilocal::{base_case, concat, PartialScoreMatrix};
use slpseq::slp::Slp;

fn instance(seed: u64, max_statements: usize, max_len: usize) -> (Slp, Vec<char>, Vec<char>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let sigma = [1, 2, 3, 4][(seed % 4) as usize];
    let slp = random_slp(&mut rng, sigma, max_statements, max_len);
    let text = expand(&slp);
    let p = random_pattern(&mut rng, &text, sigma, 8);
    (slp, text, p)
}

fn word(max: usize) -> impl Strategy<Value = Vec<char>> {
    prop::collection::vec(prop::sample::select(alphabet(3)), 1..=max)
}

/// Matrix of `text` built by folding `base_case` left to right.
fn left_fold(text: &[char], p: &[char]) -> PartialScoreMatrix {
    let mut acc = base_case(text[0], p).unwrap();
    for &c in &text[1..] {
        acc = concat(&acc, &base_case(c, p).unwrap()).unwrap();
    }
    acc
}

fn partial_oracle(text: &[char], p: &[char]) -> BTreeSet<(BigInt, BigInt)> {
    let n = p.len() as i64;
    oracle::oracle_semilocal(text, p)
        .unwrap()
        .into_iter()
        .filter(|&(i, j)| (0..n).contains(&i) || (0..n).contains(&j))
        .map(|(i, j)| (i.into(), j.into()))
        .collect()
}

fn partial_of(psm: &PartialScoreMatrix) -> BTreeSet<(BigInt, BigInt)> {
    let n = BigInt::from(psm.pattern_len());
    let zero = BigInt::from(0);
    let inside = |v: &BigInt| *v >= zero && *v < n;
    psm.nonzeros().iter().filter(|(i, j)| inside(i) || inside(j)).cloned().collect()
}

#[test]
fn base_case_matches_oracle_exhaustively() {
    let sigma = alphabet(3);
    for n in 1..=10 {
        let total = sigma.len().pow(n as u32);
        for code in 0..total {
            let mut x = code;
            let p: Vec<char> = (0..n)
                .map(|_| {
                    let c = sigma[x % 3];
                    x /= 3;
                    c
                })
                .collect();
            for &c in &sigma {
                let got: BTreeSet<_> = base_case(c, &p).unwrap().nonzeros().iter().cloned().collect();
                let want: BTreeSet<(BigInt, BigInt)> = oracle::oracle_semilocal(&[c], &p)
                    .unwrap()
                    .into_iter()
                    .map(|(i, j)| (i.into(), j.into()))
                    .collect();
                assert_eq!(got, want, "{c} vs {p:?}");
            }
        }
    }
}

#[test]
fn all_widths_match_oracle() {
    for seed in 0..150 {
        let (slp, text, p) = instance(seed, 12, 200);
        let cache = SemilocalCache::build(&slp, &p).unwrap();
        let counter = WindowCounter::new(&slp, &cache).unwrap();
        let root = slp.root();
        for w in 1..=text.len() {
            let wb = BigUint::from(w);
            let fixed = &counter.fixed_counts(&wb).unwrap()[root];
            assert_eq!(*fixed, BigUint::from(oracle::oracle_count_fixed(&text, &p, w).unwrap()), "seed {seed} w {w}");
            let bounded = &counter.minimal_counts(Some(&wb)).unwrap()[root];
            assert_eq!(
                *bounded,
                BigUint::from(oracle::oracle_count_bounded(&text, &p, w).unwrap()),
                "seed {seed} w {w}"
            );
        }
    }
}

#[test]
fn reports_agree_with_counts_and_oracle() {
    for seed in 0..100 {
        let (slp, text, p) = instance(seed + 1000, 10, 120);
        let cache = SemilocalCache::build(&slp, &p).unwrap();
        let counter = WindowCounter::new(&slp, &cache).unwrap();
        let count = counter.minimal_counts(None).unwrap()[slp.root()].clone();
        let rep = report_windows_with_cache(&slp, &cache, &ReportMode::Minimal, 10_000).unwrap();
        assert_eq!(BigUint::from(rep.windows.len()), count);
        let want: Vec<(BigUint, BigUint)> =
            oracle::oracle_minimal_windows(&text, &p).unwrap().into_iter().map(|(s, e)| (s.into(), e.into())).collect();
        assert_eq!(rep.windows, want, "seed {seed}");

        let limit = rep.windows.len() / 2;
        if limit > 0 {
            let head = report_windows_with_cache(&slp, &cache, &ReportMode::Minimal, limit).unwrap();
            assert!(head.truncated);
            assert_eq!(head.windows[..], rep.windows[..limit]);
        }
    }
}

#[test]
fn global_identities() {
    for seed in 0..200 {
        let (slp, _, p) = instance(seed + 2000, 12, 200);
        let n = p.len();
        assert_eq!(contains(&slp, &p), lcs(&slp, &p).unwrap() == n);
    }
}

proptest! {
    #[test]
    fn concat_is_associative(a in word(6), b in word(6), c in word(6), p in word(6)) {
        let (ma, mb, mc) = (left_fold(&a, &p), left_fold(&b, &p), left_fold(&c, &p));
        let left = concat(&concat(&ma, &mb).unwrap(), &mc).unwrap();
        let right = concat(&ma, &concat(&mb, &mc).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn matrices_match_oracle(text in word(20), p in word(8)) {
        let psm = left_fold(&text, &p);
        psm.validate().unwrap();
        prop_assert_eq!(partial_of(&psm), partial_oracle(&text, &p));
    }

    #[test]
    fn bracketing_does_not_matter(text in word(24), p in word(6)) {
        let s: String = text.iter().collect();
        let balanced = Slp::from_text(&s).unwrap();
        let cache = SemilocalCache::build(&balanced, &p).unwrap();
        prop_assert_eq!(&cache.entry(balanced.root()).matrix, &left_fold(&text, &p));
    }

    #[test]
    fn queries_stay_in_range(seed in 0u64..10_000) {
        let (slp, text, p) = instance(seed, 12, 200);
        let cache = SemilocalCache::build(&slp, &p).unwrap();
        let idx = &cache.entry(slp.root()).index;
        let (m, n) = (text.len(), p.len());
        for j in 0..=n {
            for j2 in j..=n {
                let v = idx.string_substring(j, j2).unwrap();
                prop_assert!(v <= (j2 - j).min(m));
            }
        }
        for l in [0, m / 3, m / 2, m] {
            for j in 0..=n {
                prop_assert!(idx.suffix_prefix(&BigUint::from(l), j).unwrap() <= j.min(l));
                prop_assert!(idx.prefix_suffix(&BigUint::from(l), j).unwrap() <= (n - j).min(l));
            }
        }
    }

    #[test]
    fn bounded_counts_are_monotone(seed in 0u64..10_000) {
        let (slp, text, p) = instance(seed, 10, 80);
        let cache = SemilocalCache::build(&slp, &p).unwrap();
        let counter = WindowCounter::new(&slp, &cache).unwrap();
        let root = slp.root();
        let unbounded = counter.minimal_counts(None).unwrap()[root].clone();
        let mut prev = BigUint::from(0u32);
        for w in 0..=text.len() {
            let cur = counter.minimal_counts(Some(&BigUint::from(w))).unwrap()[root].clone();
            prop_assert!(cur >= prev);
            prev = cur;
        }
        prop_assert_eq!(prev, unbounded);
    }
}

#[test]
fn serialize_round_trip() {
    for seed in 0..50 {
        let (slp, text, _) = instance(seed + 3000, 12, 200);
        let again = Slp::parse(&slp.serialize()).unwrap();
        assert_eq!(expand(&again), text);
        assert_eq!(again.serialize(), slp.serialize());
    }
    assert_eq!(expand(&Slp::from_text("abaababa").unwrap()), chars("abaababa"));
}
