//! The group family, its alphabet and the textual word syntax.
//!
//! A group is fixed by its exponent list `n_1, ..., n_k` and has presentation
//!
//! ```text
//! < a, t, b_1, ..., b_k | at = ta, b_i^-1 t b_i = a^(n_i) t >
//! ```
//!
//! Words are written as whitespace separated tokens `base[^exp]` where `base`
//! is one of `a`, `t`, `b<i>` and the uppercase variants `A`, `T`, `B<i>`
//! denote inverses. The exponent composes with case, so `B2^-1` is `b2`.
//! In two-letter examples elsewhere `b` corresponds to `b1` and `c` to `b2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError, ParseErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v.signum() {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.value() as i8)
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Sign::Pos),
            -1 => Ok(Sign::Neg),
            other => Err(serde::de::Error::custom(format!(
                "sign must be 1 or -1, got {other}"
            ))),
        }
    }
}

/// Generator underlying a letter. Stable letters are indexed from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    A,
    T,
    Stable(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub base: Base,
    pub sign: Sign,
}

impl Letter {
    pub const fn new(base: Base, sign: Sign) -> Letter {
        Letter { base, sign }
    }

    pub const fn a(sign: Sign) -> Letter {
        Letter::new(Base::A, sign)
    }

    pub const fn t(sign: Sign) -> Letter {
        Letter::new(Base::T, sign)
    }

    pub const fn stable(index: u32, sign: Sign) -> Letter {
        Letter::new(Base::Stable(index), sign)
    }

    pub fn inverse(self) -> Letter {
        Letter::new(self.base, self.sign.flip())
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.base == other.base && self.sign != other.sign
    }

    pub fn is_stable(self) -> bool {
        matches!(self.base, Base::Stable(_))
    }

    /// Token for this single letter, e.g. `a`, `T`, `B2`.
    pub fn token(self) -> String {
        let lower = match self.base {
            Base::A => "a".to_string(),
            Base::T => "t".to_string(),
            Base::Stable(i) => format!("b{i}"),
        };
        match self.sign {
            Sign::Pos => lower,
            Sign::Neg => lower.to_uppercase(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for Letter {
    type Err = ParseErrorKind;

    /// Parses a bare base token (no exponent).
    fn from_str(s: &str) -> Result<Letter, ParseErrorKind> {
        let mut chars = s.chars();
        let head = chars.next().ok_or(ParseErrorKind::UnknownBase)?;
        let rest = chars.as_str();
        let sign = if head.is_ascii_uppercase() {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let base = match (head.to_ascii_lowercase(), rest) {
            ('a', "") => Base::A,
            ('t', "") => Base::T,
            ('b', digits) if !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit()) => {
                let index: u32 = digits.parse().map_err(|_| ParseErrorKind::UnknownBase)?;
                if index == 0 {
                    return Err(ParseErrorKind::StableIndexOutOfRange(0));
                }
                Base::Stable(index)
            }
            _ => return Err(ParseErrorKind::UnknownBase),
        };
        Ok(Letter::new(base, sign))
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.token())
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|e| serde::de::Error::custom(format!("bad letter {s:?}: {e}")))
    }
}

/// Exponent list `n_1..n_k` defining one group of the family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRecord", into = "GroupSpecRecord")]
pub struct GroupSpec {
    exponents: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecRecord {
    exponents: Vec<i64>,
}

impl TryFrom<GroupSpecRecord> for GroupSpec {
    type Error = Error;

    fn try_from(r: GroupSpecRecord) -> Result<Self, Error> {
        GroupSpec::new(r.exponents)
    }
}

impl From<GroupSpec> for GroupSpecRecord {
    fn from(g: GroupSpec) -> Self {
        GroupSpecRecord {
            exponents: g.exponents,
        }
    }
}

impl GroupSpec {
    pub fn new(exponents: Vec<i64>) -> Result<GroupSpec, Error> {
        if exponents.is_empty() {
            return Err(Error::InvalidSpec(
                "at least one stable letter exponent is required".into(),
            ));
        }
        Ok(GroupSpec { exponents })
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// Number of stable letters.
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Exponent `n_i` of stable letter `b_i` (1-based).
    pub fn exponent(&self, index: u32) -> i64 {
        self.exponents[index as usize - 1]
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.exponents.iter().map(|n| n.abs()).max().unwrap_or(0)
    }

    /// All `2(k+2)` letters in the canonical order `a A t T b1 B1 ...`.
    pub fn alphabet(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(2 * (self.rank() + 2));
        let bases = [Base::A, Base::T]
            .into_iter()
            .chain((1..=self.rank() as u32).map(Base::Stable));
        for base in bases {
            out.push(Letter::new(base, Sign::Pos));
            out.push(Letter::new(base, Sign::Neg));
        }
        out
    }

    pub fn contains(&self, x: Letter) -> bool {
        match x.base {
            Base::Stable(i) => i >= 1 && (i as usize) <= self.rank(),
            _ => true,
        }
    }

    /// Membership of `a^gamma` in `<t>`.
    pub fn a_power_in_domain(&self, gamma: i64) -> bool {
        gamma == 0
    }

    /// Membership of `a^gamma` in `<a^(n_i) t>`.
    pub fn a_power_in_image(&self, _index: u32, gamma: i64) -> bool {
        gamma == 0
    }

    /// Defining relators: `a t A T` followed by `B_i t b_i T a^(-n_i)` for each `i`.
    /// Every relator is cyclically reduced.
    pub fn relators(&self) -> Vec<Word> {
        let mut out = vec![Word::from(vec![
            Letter::a(Sign::Pos),
            Letter::t(Sign::Pos),
            Letter::a(Sign::Neg),
            Letter::t(Sign::Neg),
        ])];
        for (i, &n) in self.exponents.iter().enumerate() {
            let i = i as u32 + 1;
            let mut r = vec![
                Letter::stable(i, Sign::Neg),
                Letter::t(Sign::Pos),
                Letter::stable(i, Sign::Pos),
                Letter::t(Sign::Neg),
            ];
            r.extend(a_power(-n));
            out.push(Word::from(r));
        }
        out
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses the comma separated form `1,2,-3`.
    fn from_str(s: &str) -> Result<GroupSpec, Error> {
        let exponents = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidSpec(format!("bad exponent {:?}", p.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupSpec::new(exponents)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// `a^e` as a letter sequence.
pub fn a_power(e: i64) -> impl Iterator<Item = Letter> {
    let sign = if e < 0 { Sign::Neg } else { Sign::Pos };
    std::iter::repeat_n(Letter::a(sign), e.unsigned_abs() as usize)
}

/// `t^e` as a letter sequence.
pub fn t_power(e: i64) -> impl Iterator<Item = Letter> {
    let sign = if e < 0 { Sign::Neg } else { Sign::Pos };
    std::iter::repeat_n(Letter::t(sign), e.unsigned_abs() as usize)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        invert(self)
    }

    /// Number of stable letters in the word.
    pub fn stable_count(&self) -> usize {
        self.0.iter().filter(|x| x.is_stable()).count()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Word {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&spell_word(self))
    }
}

pub fn parse_word(spec: &GroupSpec, text: &str) -> Result<Word, ParseError> {
    let mut out = Vec::new();
    for (position, token) in tokens(text) {
        let err = |kind| ParseError {
            token: token.to_string(),
            position,
            kind,
        };
        let (base_text, exp) = match token.split_once('^') {
            Some((b, e)) => {
                let e: i64 = e.parse().map_err(|_| err(ParseErrorKind::MalformedExponent))?;
                (b, e)
            }
            None => (token, 1),
        };
        let letter: Letter = base_text.parse().map_err(err)?;
        if !spec.contains(letter) {
            let Base::Stable(i) = letter.base else {
                unreachable!()
            };
            return Err(err(ParseErrorKind::StableIndexOutOfRange(i)));
        }
        let letter = if exp < 0 { letter.inverse() } else { letter };
        out.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
    }
    Ok(Word(out))
}

/// Whitespace separated tokens with their byte offsets.
fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - text.as_ptr() as usize, tok))
}

/// Canonical spelling: maximal runs of one letter collapse to `x^len`.
pub fn spell_word(w: &Word) -> String {
    let mut parts = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let x = letters[i];
        let mut j = i + 1;
        while j < letters.len() && letters[j] == x {
            j += 1;
        }
        let run = j - i;
        if run == 1 {
            parts.push(x.token());
        } else {
            parts.push(format!("{}^{run}", x.token()));
        }
        i = j;
    }
    parts.join(" ")
}

pub fn invert(w: &Word) -> Word {
    w.0.iter().rev().map(|x| x.inverse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec12() -> GroupSpec {
        GroupSpec::new(vec![1, 2]).unwrap()
    }

    fn w(s: &str) -> Word {
        parse_word(&spec12(), s).unwrap()
    }

    const A: Letter = Letter::a(Sign::Pos);
    const AI: Letter = Letter::a(Sign::Neg);
    const T: Letter = Letter::t(Sign::Pos);
    const TI: Letter = Letter::t(Sign::Neg);

    #[test]
    fn parse_examples() {
        assert_eq!(
            w("a^3 B2 t^-2").letters(),
            &[A, A, A, Letter::stable(2, Sign::Neg), TI, TI]
        );
        assert!(w("").is_empty());
        assert!(w("   ").is_empty());
        assert_eq!(
            w("b1^-1 t b1").letters(),
            &[Letter::stable(1, Sign::Neg), T, Letter::stable(1, Sign::Pos)]
        );
        assert_eq!(w("B2^-1").letters(), &[Letter::stable(2, Sign::Pos)]);
        assert_eq!(w("A^-2").letters(), &[A, A]);
        assert!(w("a^0").is_empty());
    }

    #[test]
    fn parse_errors_name_token_and_position() {
        let e = parse_word(&spec12(), "a x t").unwrap_err();
        assert_eq!(e.token, "x");
        assert_eq!(e.position, 2);
        assert_eq!(e.kind, ParseErrorKind::UnknownBase);

        let e = parse_word(&spec12(), "a b3").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::StableIndexOutOfRange(3));
        assert_eq!(e.position, 2);

        let e = parse_word(&spec12(), "t^x").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MalformedExponent);

        for bad in ["b", "b0", "ab", "t^", "b1^1.5", "B-1"] {
            assert!(parse_word(&spec12(), bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn spell_examples() {
        assert_eq!(spell_word(&Word::from(vec![A, A, A])), "a^3");
        assert_eq!(spell_word(&Word::empty()), "");
        assert_eq!(
            spell_word(&Word::from(vec![Letter::stable(2, Sign::Neg), T])),
            "B2 t"
        );
        assert_eq!(spell_word(&Word::from(vec![A, AI, AI])), "a A^2");
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&Word::from(vec![A, T])).letters(), &[TI, AI]);
        assert!(invert(&Word::empty()).is_empty());
        assert_eq!(
            invert(&w("B1")).letters(),
            &[Letter::stable(1, Sign::Pos)]
        );
    }

    #[test]
    fn alphabet_has_expected_size_and_order() {
        let spec = GroupSpec::new(vec![3, -1, 0]).unwrap();
        let alpha = spec.alphabet();
        assert_eq!(alpha.len(), 2 * (3 + 2));
        let tokens: Vec<String> = alpha.iter().map(|x| x.token()).collect();
        assert_eq!(tokens, ["a", "A", "t", "T", "b1", "B1", "b2", "B2", "b3", "B3"]);
        let mut sorted = alpha.clone();
        sorted.sort();
        assert_eq!(sorted, alpha);
    }

    #[test]
    fn spec_parsing_and_json() {
        let spec: GroupSpec = "1, -2,0".parse().unwrap();
        assert_eq!(spec.exponents(), &[1, -2, 0]);
        assert!("".parse::<GroupSpec>().is_err());
        assert!(GroupSpec::new(vec![]).is_err());
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"exponents":[1,-2,0]}"#);
        let back: GroupSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        assert!(serde_json::from_str::<GroupSpec>(r#"{"exponents":[]}"#).is_err());
    }

    #[test]
    fn relators_are_cyclically_reduced() {
        let spec = GroupSpec::new(vec![1, 2, -3, 0]).unwrap();
        for r in spec.relators() {
            let l = r.letters();
            for pair in l.windows(2) {
                assert!(!pair[0].is_inverse_of(pair[1]), "{r}");
            }
            assert!(!l[0].is_inverse_of(*l.last().unwrap()), "{r}");
        }
        assert_eq!(spec.relators()[2].to_string(), "B2 t b2 T A^2");
        assert_eq!(spec.relators()[3].to_string(), "B3 t b3 T a^3");
    }

    #[test]
    fn subgroup_membership_is_trivial_on_a_powers() {
        let spec = spec12();
        assert!(spec.a_power_in_domain(0));
        assert!(!spec.a_power_in_domain(2));
        assert!(spec.a_power_in_image(2, 0));
        assert!(!spec.a_power_in_image(2, -2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        pub fn arb_word(k: u32, max: usize) -> impl Strategy<Value = Word> {
            let letter = (0..(k + 2), any::<bool>()).prop_map(|(b, neg)| {
                let base = match b {
                    0 => Base::A,
                    1 => Base::T,
                    i => Base::Stable(i - 1),
                };
                Letter::new(base, if neg { Sign::Neg } else { Sign::Pos })
            });
            proptest::collection::vec(letter, 0..max).prop_map(Word::from)
        }

        proptest! {
            #[test]
            fn spell_then_parse_is_identity(word in arb_word(3, 30)) {
                let spec = GroupSpec::new(vec![1, 2, 3]).unwrap();
                let text = spell_word(&word);
                let back = parse_word(&spec, &text).unwrap();
                prop_assert_eq!(&back, &word);
                prop_assert_eq!(spell_word(&back), text);
            }

            #[test]
            fn invert_is_involution(word in arb_word(2, 30)) {
                prop_assert_eq!(invert(&invert(&word)), word);
            }
        }
    }
}
