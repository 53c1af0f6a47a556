use num_bigint::BigUint;
use slpseq::{mul_dist, PySlp};

#[test]
fn slp_methods() {
    let fib = PySlp::parse("1='b'\n2='a'\n3=2 1\n4=3 2\n5=4 3\n6=5 4\n").unwrap();
    assert_eq!(fib.expand(100).unwrap(), "abaababa");
    assert_eq!(fib.__len__(), 6);
    assert_eq!(fib.text_length(), BigUint::from(8u32));
    assert!(fib.contains("aab"));
    assert_eq!(fib.prefix_len("bbbb"), 3);
    assert_eq!(fib.lcs("aab").unwrap(), 3);
    assert_eq!(fib.count_minimal("aab").unwrap(), BigUint::from(2u32));
    assert_eq!(fib.count_fixed("aab", 5u32.into()).unwrap(), BigUint::from(4u32));
    assert_eq!(fib.count_bounded("aab", 3u32.into()).unwrap(), BigUint::from(1u32));
    let (windows, truncated) = fib.report("aab", "minimal", None, 1).unwrap();
    assert_eq!(windows, vec![(3u32.into(), 5u32.into())]);
    assert!(truncated);
    assert!(fib.report("aab", "fixed", None, 1).is_err());
    assert!(fib.report("aab", "sideways", None, 1).is_err());
    assert!(fib.count_minimal("").is_err());
}

#[test]
fn cache_methods() {
    let slp = PySlp::from_text("baabcbca").unwrap();
    let cache = slp.semilocal("baabcabcabaca", 2).unwrap();
    assert_eq!(cache.string_substring(4, 11).unwrap(), 5);
    assert_eq!(
        cache.nonzeros(None).unwrap().len(),
        slp.semilocal("baabcabcabaca", 1).unwrap().nonzeros(None).unwrap().len()
    );
    assert!(cache.nonzeros(Some(99)).is_err());
    assert_eq!(cache.count_minimal().unwrap(), slp.count_minimal("baabcabcabaca").unwrap());
}

#[test]
fn multiplication() {
    assert_eq!(mul_dist(vec![1, 0], vec![1, 0], false).unwrap(), vec![1, 0]);
    assert_eq!(
        mul_dist(vec![2, 0, 1], vec![1, 2, 0], false).unwrap(),
        mul_dist(vec![2, 0, 1], vec![1, 2, 0], true).unwrap()
    );
    assert!(mul_dist(vec![0, 0], vec![0, 1], false).is_err());
}
