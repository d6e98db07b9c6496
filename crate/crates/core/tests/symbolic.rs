use fab_core::map_core::Params;
use fab_core::symbolic::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    let mut s = vec![rng.gen_range(1..=4u8)];
    while s.len() < len {
        let next: Vec<u8> = (1..=4).filter(|&k| transition(*s.last().unwrap(), k)).collect();
        s.push(next[rng.gen_range(0..next.len())]);
    }
    Word::from_symbols(&s).unwrap()
}

fn word_strategy() -> impl Strategy<Value = Word> {
    (any::<u64>(), 1usize..9).prop_map(|(seed, len)| random_word(&mut ChaCha8Rng::seed_from_u64(seed), len))
}

proptest! {
    #[test]
    fn parry_mass_is_consistent(w in word_strategy()) {
        let m = parry_measure();
        let nu = m.nu(&w);
        let mut right = 0.0;
        let mut left = 0.0;
        for s in 1..=4u8 {
            let mut r = w.symbols().to_vec();
            r.push(s);
            right += Word::from_symbols(&r).map(|x| if is_admissible(&x) { m.nu(&x) } else { 0.0 }).unwrap();
            let mut l = vec![s];
            l.extend_from_slice(w.symbols());
            left += Word::from_symbols(&l).map(|x| if is_admissible(&x) { m.nu(&x) } else { 0.0 }).unwrap();
        }
        prop_assert!((nu - right).abs() < 1e-12);
        prop_assert!((nu - left).abs() < 1e-12);
    }

    #[test]
    fn counts_match_enumeration(len in 1usize..8, first in 1u8..=4, last in 1u8..=4) {
        let n = admissible_words(len, Some(&[first]), Some(&[last])).len();
        prop_assert_eq!(count_admissible(len, Some(&[first]), Some(&[last])), n.into());
    }
}

#[test]
fn parry_measure_is_a_probability() {
    let m = parry_measure();
    for len in 1..=6 {
        let total: f64 = admissible_words(len, None, None).iter().map(|w| m.nu(w)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
    assert!((entropy() - 2.147899035704787f64.ln()).abs() < 1e-12);
}

fn realizes(w: &Word, params: &Params) {
    let r = realize_word(w, params, &RealizeConfig::default()).unwrap();
    let code = code_window(&r.witness, params, 0, w.len() as i64 - 1).unwrap();
    assert_eq!(code.symbols(), w.symbols(), "word {w}");
}

#[test]
fn short_words_are_realized() {
    let params = Params::from_ints(-2, 1);
    for w in ["3", "43", "121", "2134"] {
        realizes(&Word::parse(w).unwrap(), &params);
    }
}

#[test]
fn random_words_are_realized() {
    let params = Params::from_ints(-2, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..12 {
        let len = rng.gen_range(2..=7);
        realizes(&random_word(&mut rng, len), &params);
    }
}

#[test]
fn inadmissible_words_are_rejected() {
    let params = Params::from_ints(-2, 1);
    for w in ["11", "22", "24", "41"] {
        let w = Word::parse(w).unwrap();
        assert!(!is_admissible(&w));
        assert!(realize_word(&w, &params, &RealizeConfig::default()).is_err());
    }
}
