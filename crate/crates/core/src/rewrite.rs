//! Normal forms and the word problem.
//!
//! Every element has a unique representative
//!
//! ```text
//! a^alpha t^beta (r_1 a^gamma_1) ... (r_l a^gamma_l)
//! ```
//!
//! where each `r_j` is a stable letter `b_i^{+-1}` and no `b_i^{-e} b_i^{e}`
//! appears with an empty `a`-run between them. The powers `a^gamma` serve as
//! coset representatives for `<t>` and `<a^(n_i) t>` in `Z^2 = <a, t>`; the only
//! `a`-power in either subgroup is the identity, so a pinch is possible exactly
//! when the intervening tail is zero.
//!
//! Normal forms are built letter by letter with [`NormalForm::push`]. Pushing
//! `t^e` past a block uses `b t^e = t^e b a^(-e n)` and `b^-1 t^e = a^(e n) t^e b^-1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::presentation::{a_power, t_power, Base, GroupSpec, Letter, Sign, Word};

/// A stable letter `b_index^sign` followed by `a^tail`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub index: u32,
    pub sign: Sign,
    pub tail: i64,
}

impl Block {
    pub fn new(index: u32, sign: Sign, tail: i64) -> Block {
        Block { index, sign, tail }
    }

    pub fn header(&self) -> (u32, Sign) {
        (self.index, self.sign)
    }

    pub fn letter(&self) -> Letter {
        Letter::stable(self.index, self.sign)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalForm {
    pub head_a: i64,
    pub head_t: i64,
    pub blocks: Vec<Block>,
}

/// JSON shape of a normal form, including its spelling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormRecord {
    #[serde(flatten)]
    pub normal_form: NormalForm,
    pub spelled: String,
}

impl NormalForm {
    pub fn identity() -> NormalForm {
        NormalForm::default()
    }

    pub fn is_identity(&self) -> bool {
        self.head_a == 0 && self.head_t == 0 && self.blocks.is_empty()
    }

    /// Replaces `self` by the normal form of `self * x`.
    pub fn push(&mut self, spec: &GroupSpec, x: Letter) {
        let e = x.sign.value();
        match x.base {
            Base::A => match self.blocks.last_mut() {
                Some(last) => last.tail += e,
                None => self.head_a += e,
            },
            Base::T => {
                for j in (0..self.blocks.len()).rev() {
                    let Block { index, sign, .. } = self.blocks[j];
                    let n = spec.exponent(index);
                    match sign {
                        Sign::Pos => self.blocks[j].tail -= e * n,
                        Sign::Neg => match j {
                            0 => self.head_a += e * n,
                            _ => self.blocks[j - 1].tail += e * n,
                        },
                    }
                }
                self.head_t += e;
            }
            Base::Stable(index) => match self.blocks.last() {
                Some(last) if last.index == index && last.sign != x.sign && last.tail == 0 => {
                    self.blocks.pop();
                }
                _ => self.blocks.push(Block::new(index, x.sign, 0)),
            },
        }
    }

    pub fn pushed(&self, spec: &GroupSpec, x: Letter) -> NormalForm {
        let mut nf = self.clone();
        nf.push(spec, x);
        nf
    }

    /// The word `a^alpha t^beta r_1 a^gamma_1 ... r_l a^gamma_l`.
    pub fn to_word(&self) -> Word {
        let mut out: Vec<Letter> = a_power(self.head_a).chain(t_power(self.head_t)).collect();
        for b in &self.blocks {
            out.push(b.letter());
            out.extend(a_power(b.tail));
        }
        Word::from(out)
    }

    pub fn spelled(&self) -> String {
        self.to_word().to_string()
    }

    /// Number of letters in the spelled normal form.
    pub fn spelled_len(&self) -> usize {
        self.head_a.unsigned_abs() as usize
            + self.head_t.unsigned_abs() as usize
            + self
                .blocks
                .iter()
                .map(|b| 1 + b.tail.unsigned_abs() as usize)
                .sum::<usize>()
    }

    pub fn headers(&self) -> impl Iterator<Item = (u32, Sign)> + '_ {
        self.blocks.iter().map(Block::header)
    }

    pub fn inverse(&self, spec: &GroupSpec) -> NormalForm {
        normalize(spec, &self.to_word().inverse())
    }

    /// Checks index ranges and pinch-freeness.
    pub fn is_valid(&self, spec: &GroupSpec) -> bool {
        let in_range = self
            .blocks
            .iter()
            .all(|b| b.index >= 1 && b.index as usize <= spec.rank());
        let pinch_free = self.blocks.windows(2).all(|w| {
            !(w[0].index == w[1].index && w[0].sign != w[1].sign && w[0].tail == 0)
        });
        in_range && pinch_free
    }

    pub fn record(&self) -> NormalFormRecord {
        NormalFormRecord {
            normal_form: self.clone(),
            spelled: self.spelled(),
        }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spelled())
    }
}

pub fn append_letter(spec: &GroupSpec, nf: &NormalForm, x: Letter) -> NormalForm {
    nf.pushed(spec, x)
}

pub fn normalize(spec: &GroupSpec, w: &Word) -> NormalForm {
    w.letters().iter().fold(NormalForm::identity(), |mut nf, &x| {
        nf.push(spec, x);
        nf
    })
}

pub fn spell_nf(nf: &NormalForm) -> Word {
    nf.to_word()
}

pub fn word_problem(spec: &GroupSpec, w: &Word) -> bool {
    normalize(spec, w).is_identity()
}

pub fn equal_elements(spec: &GroupSpec, w1: &Word, w2: &Word) -> bool {
    normalize(spec, w1) == normalize(spec, w2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{invert, parse_word, t_power};

    fn spec(e: &[i64]) -> GroupSpec {
        GroupSpec::new(e.to_vec()).unwrap()
    }

    fn nf(s: &GroupSpec, text: &str) -> NormalForm {
        normalize(s, &parse_word(s, text).unwrap())
    }

    fn letter(text: &str) -> Letter {
        text.parse().unwrap()
    }

    #[test]
    fn append_examples() {
        let s = spec(&[1, 2]);
        let out = append_letter(&s, &nf(&s, "b1 a^3"), letter("t"));
        assert_eq!(out.spelled(), "t b1 a^2");
        let out = append_letter(&s, &nf(&s, "B2 a^3"), letter("t"));
        assert_eq!(out.spelled(), "a^2 t B2 a^3");
        let out = append_letter(&s, &nf(&s, "B1"), letter("b1"));
        assert!(out.is_identity());
        let out = append_letter(&s, &NormalForm::identity(), letter("a"));
        assert_eq!(
            out,
            NormalForm {
                head_a: 1,
                head_t: 0,
                blocks: vec![]
            }
        );
    }

    #[test]
    fn normalize_examples() {
        let s = spec(&[1, 2]);
        assert!(nf(&s, "").is_identity());
        let x = nf(&s, "B1 t b1");
        assert_eq!((x.head_a, x.head_t, x.blocks.len()), (1, 1, 0));
        assert_eq!(x.spelled(), "a t");
        let x = nf(&s, "B2 t b2");
        assert_eq!((x.head_a, x.head_t, x.blocks.len()), (2, 1, 0));
        let x = nf(&s, "B2 t");
        assert_eq!(
            x,
            NormalForm {
                head_a: 2,
                head_t: 1,
                blocks: vec![Block::new(2, Sign::Neg, 0)]
            }
        );
        assert_eq!(x.spelled(), "a^2 t B2");
    }

    #[test]
    fn spell_examples() {
        assert!(spell_nf(&NormalForm::identity()).is_empty());
        let x = NormalForm {
            head_a: 2,
            head_t: 1,
            blocks: vec![Block::new(2, Sign::Neg, 0)],
        };
        assert_eq!(spell_nf(&x).to_string(), "a^2 t B2");
        let x = NormalForm {
            head_a: 0,
            head_t: 1,
            blocks: vec![Block::new(1, Sign::Pos, -1)],
        };
        assert_eq!(spell_nf(&x).to_string(), "t b1 A");
        assert_eq!(x.spelled_len(), 3);
    }

    #[test]
    fn word_problem_examples() {
        let s = spec(&[1, 2]);
        let wp = |t: &str| word_problem(&s, &parse_word(&s, t).unwrap());
        assert!(wp("a t A T"));
        assert!(wp("B1 t b1 T A"));
        assert!(!wp("a b1 A B1"));
        assert!(wp(""));
    }

    #[test]
    fn equal_elements_examples() {
        let s = spec(&[1, 2]);
        let eq = |x: &str, y: &str| {
            equal_elements(&s, &parse_word(&s, x).unwrap(), &parse_word(&s, y).unwrap())
        };
        assert!(eq("t b2", "b2 a^2 t"));
        assert!(eq("a", "a"));
        assert!(!eq("a", "t"));
    }

    #[test]
    fn no_generator_is_trivial() {
        for e in [&[1, 2][..], &[0, 4], &[-2, 5]] {
            let s = spec(e);
            for x in s.alphabet() {
                assert!(!word_problem(&s, &Word::from(vec![x])), "{x}");
            }
        }
    }

    #[test]
    fn zero_exponent_makes_stable_letter_commute_with_t() {
        let s = spec(&[0, 4]);
        assert!(word_problem(&s, &parse_word(&s, "B1 t b1 T").unwrap()));
        assert_eq!(nf(&s, "b1 t").spelled(), "t b1");
        assert_eq!(nf(&s, "B1 t").spelled(), "t B1");
    }

    #[test]
    fn negative_exponent() {
        let s = spec(&[-2, 5]);
        assert_eq!(nf(&s, "B1 t b1").spelled(), "A^2 t");
        assert_eq!(nf(&s, "b1 t").spelled(), "t b1 a^2");
    }

    fn conj(i: u32, p: usize, tp: i64) -> Word {
        let mut w = vec![Letter::stable(i, Sign::Neg); p];
        w.extend(t_power(tp));
        w.extend(vec![Letter::stable(i, Sign::Pos); p]);
        Word::from(w)
    }

    #[test]
    fn conjugating_t_powers_once() {
        let s = spec(&[1, 2]);
        for (i, n) in [(1u32, 1i64), (2, 2)] {
            for p in -6..=6 {
                let want = NormalForm {
                    head_a: p * n,
                    head_t: p,
                    blocks: vec![],
                };
                assert_eq!(normalize(&s, &conj(i, 1, p)), want);
            }
        }
    }

    /// `b^-1 a b` is reduced, so conjugating twice leaves two stable letters.
    #[test]
    fn conjugating_t_twice_is_not_an_a_power() {
        let s = spec(&[1, 2]);
        assert_eq!(normalize(&s, &conj(1, 2, 1)).spelled(), "a t B1 a b1");
        assert_eq!(normalize(&s, &conj(2, 2, 1)).spelled(), "a^2 t B2 a^2 b2");
        assert_eq!(normalize(&s, &conj(2, 3, 1)).blocks.len(), 4);
        let s0 = spec(&[0]);
        assert_eq!(normalize(&s0, &conj(1, 5, 1)).spelled(), "t");
    }

    #[test]
    fn validity_check_flags_pinches() {
        let s = spec(&[1, 2]);
        let bad = NormalForm {
            head_a: 0,
            head_t: 0,
            blocks: vec![Block::new(1, Sign::Pos, 0), Block::new(1, Sign::Neg, 3)],
        };
        assert!(!bad.is_valid(&s));
        let ok = NormalForm {
            head_a: 0,
            head_t: 0,
            blocks: vec![Block::new(1, Sign::Pos, 1), Block::new(1, Sign::Neg, 0)],
        };
        assert!(ok.is_valid(&s));
        let out_of_range = NormalForm {
            head_a: 0,
            head_t: 0,
            blocks: vec![Block::new(3, Sign::Pos, 0)],
        };
        assert!(!out_of_range.is_valid(&s));
    }

    #[test]
    fn json_shape() {
        let s = spec(&[1, 2]);
        let json = serde_json::to_string(&nf(&s, "B2 t").record()).unwrap();
        assert_eq!(
            json,
            r#"{"head_a":2,"head_t":1,"blocks":[{"index":2,"sign":-1,"tail":0}],"spelled":"a^2 t B2"}"#
        );
        let back: NormalFormRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.normal_form, nf(&s, "B2 t"));
    }

    #[test]
    fn inverse_multiplies_to_identity() {
        let s = spec(&[1, 2]);
        let x = nf(&s, "b1 a^3 t B2 A b1");
        let inv = x.inverse(&s);
        let prod = normalize(&s, &x.to_word().concat(&inv.to_word()));
        assert!(prod.is_identity());
        let w = parse_word(&s, "b1 a^3 t B2 A b1").unwrap();
        assert!(word_problem(&s, &w.concat(&invert(&w))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        fn arb_spec() -> impl Strategy<Value = GroupSpec> {
            proptest::collection::vec(-4i64..=4, 1..=3).prop_map(|e| GroupSpec::new(e).unwrap())
        }

        fn arb_word_for(k: usize, max: usize) -> impl Strategy<Value = Word> {
            let letter = (0..(k as u32 + 2), any::<bool>()).prop_map(|(b, neg)| {
                let base = match b {
                    0 => Base::A,
                    1 => Base::T,
                    i => Base::Stable(i - 1),
                };
                Letter::new(base, if neg { Sign::Neg } else { Sign::Pos })
            });
            proptest::collection::vec(letter, 0..max).prop_map(Word::from)
        }

        fn spec_and_words(n: usize) -> impl Strategy<Value = (GroupSpec, Vec<Word>)> {
            arb_spec().prop_flat_map(move |s| {
                let k = s.rank();
                (
                    Just(s),
                    proptest::collection::vec(arb_word_for(k, 25), n..=n),
                )
            })
        }

        proptest! {
            #[test]
            fn idempotent_and_valid((s, ws) in spec_and_words(1)) {
                let x = normalize(&s, &ws[0]);
                prop_assert!(x.is_valid(&s));
                prop_assert_eq!(normalize(&s, &spell_nf(&x)), x);
            }

            #[test]
            fn congruence((s, ws) in spec_and_words(3)) {
                let (w, v, u) = (&ws[0], &ws[1], &ws[2]);
                // u' is another spelling of the element w
                let u2 = spell_nf(&normalize(&s, w));
                prop_assert!(equal_elements(&s, w, &u2));
                prop_assert!(equal_elements(&s, &w.concat(v), &u2.concat(v)));
                prop_assert!(equal_elements(&s, &v.concat(w), &v.concat(&u2)));
                if equal_elements(&s, w, u) {
                    prop_assert!(equal_elements(&s, &w.concat(v), &u.concat(v)));
                }
            }

            #[test]
            fn inverse_law((s, ws) in spec_and_words(1)) {
                let w = &ws[0];
                prop_assert!(word_problem(&s, &w.concat(&invert(w))));
                prop_assert!(word_problem(&s, &invert(w).concat(w)));
            }

            #[test]
            fn a_and_t_keep_block_headers((s, ws) in spec_and_words(1)) {
                let x = normalize(&s, &ws[0]);
                for y in [Letter::a(Sign::Pos), Letter::a(Sign::Neg), Letter::t(Sign::Pos), Letter::t(Sign::Neg)] {
                    let z = normalize(&s, &spell_nf(&x).concat(&Word::from(vec![y])));
                    prop_assert!(z.headers().eq(x.headers()));
                }
            }

            #[test]
            fn conjugating_t_power(e in proptest::collection::vec(-5i64..=5, 1..=4), p in -12i64..12) {
                let s = GroupSpec::new(e).unwrap();
                for i in 1..=s.rank() as u32 {
                    let got = normalize(&s, &conj(i, 1, p));
                    prop_assert_eq!(got, NormalForm { head_a: p * s.exponent(i), head_t: p, blocks: vec![] });
                }
            }
        }

        /// Random append sequences never produce an invalid normal form.
        #[test]
        fn pinch_preservation_fuzz() {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let specs = [vec![1, 2], vec![2, 3], vec![-2, 5], vec![0, 4], vec![1, 1, -1]];
            let mut violations = 0usize;
            let mut appends = 0usize;
            for e in specs {
                let s = GroupSpec::new(e).unwrap();
                let alpha = s.alphabet();
                for _ in 0..4_000 {
                    let mut x = NormalForm::identity();
                    for _ in 0..rng.gen_range(1..=100) {
                        x.push(&s, alpha[rng.gen_range(0..alpha.len())]);
                        appends += 1;
                        if !x.is_valid(&s) {
                            violations += 1;
                        }
                    }
                }
            }
            assert!(appends > 900_000);
            assert_eq!(violations, 0);
        }
    }
}
