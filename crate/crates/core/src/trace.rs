//! Step-by-step certificates for [`normalize`](crate::rewrite::normalize).
//!
//! [`rewrite_trace`] replays normalization on the word itself, recording every
//! elementary move. [`check_trace`] validates a trace using only free reduction
//! and the defining relators, so it is independent of the normal form code.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::{a_power, Base, GroupSpec, Letter, Sign, Word};
use crate::rewrite::{normalize, NormalForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Removal of an adjacent `x x^-1` pair.
    FreeCancellation,
    /// Swap of adjacent `a` and `t` letters.
    Commutation,
    /// Replacement of `u` by `v` where `u v^-1` is a conjugate of a relator.
    Relator,
    /// Removal of an adjacent `b_i^-e b_i^e` pair.
    Pinch,
}

/// One move: `removed` at `position` is replaced by `inserted`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub position: usize,
    pub removed: Vec<Letter>,
    pub inserted: Vec<Letter>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteTrace {
    pub steps: Vec<Step>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("step {step}: removed letters do not match the word at position {position}")]
    Mismatch { step: usize, position: usize },
    #[error("step {step}: not a legal {kind:?} move")]
    Illegal { step: usize, kind: StepKind },
}

struct Tracer<'a> {
    spec: &'a GroupSpec,
    word: Vec<Letter>,
    steps: Vec<Step>,
}

impl Tracer<'_> {
    fn replace(&mut self, kind: StepKind, position: usize, len: usize, inserted: Vec<Letter>) {
        let removed = self.word[position..position + len].to_vec();
        self.word
            .splice(position..position + len, inserted.iter().copied());
        self.steps.push(Step {
            kind,
            position,
            removed,
            inserted,
        });
    }

    fn commute(&mut self, position: usize) {
        let (x, y) = (self.word[position], self.word[position + 1]);
        self.replace(StepKind::Commutation, position, 2, vec![y, x]);
    }

    fn has_stable_before(&self, end: usize) -> bool {
        self.word[..end].iter().any(|x| x.is_stable())
    }

    /// Restores canonical form of `word[..end]` after the letter at `end - 1`
    /// was appended to a canonical prefix. Returns the new prefix length.
    fn settle(&mut self, mut end: usize) -> usize {
        let x = self.word[end - 1];
        if x.base == Base::T {
            end = self.push_t_left(end);
        }
        self.sort_head(end);
        self.free_reduce(end)
    }

    /// Moves the `t^e` at `end - 1` left until it reaches the head.
    fn push_t_left(&mut self, mut end: usize) -> usize {
        let mut q = end - 1;
        let t = self.word[q];
        let e = t.sign.value();
        while self.has_stable_before(q) {
            let y = self.word[q - 1];
            match y.base {
                Base::A => {
                    self.commute(q - 1);
                    q -= 1;
                }
                Base::Stable(i) => {
                    let n = self.spec.exponent(i);
                    let abs_n = n.unsigned_abs() as usize;
                    let before = self.word.len();
                    match (y.sign, t.sign) {
                        (Sign::Pos, Sign::Pos) => {
                            // b t -> t b T a^(-n) t -> t b T t a^(-n) -> t b a^(-n)
                            let mut v = vec![t, y, t.inverse()];
                            v.extend(a_power(-n));
                            v.push(t);
                            self.replace(StepKind::Relator, q - 1, 2, v);
                            let mut p = q + 2 + abs_n;
                            for _ in 0..abs_n {
                                self.commute(p - 1);
                                p -= 1;
                            }
                            self.replace(StepKind::FreeCancellation, q + 1, 2, vec![]);
                            q -= 1;
                        }
                        (Sign::Pos, Sign::Neg) => {
                            let mut v = vec![t, y];
                            v.extend(a_power(-e * n));
                            self.replace(StepKind::Relator, q - 1, 2, v);
                            q -= 1;
                        }
                        (Sign::Neg, Sign::Pos) => {
                            let mut v: Vec<Letter> = a_power(n).collect();
                            v.push(t);
                            v.push(y);
                            self.replace(StepKind::Relator, q - 1, 2, v);
                            q = q - 1 + abs_n;
                        }
                        (Sign::Neg, Sign::Neg) => {
                            let mut v = vec![t];
                            v.extend(a_power(-n));
                            v.push(y);
                            self.replace(StepKind::Relator, q - 1, 2, v);
                            q -= 1;
                        }
                    }
                    end = end + self.word.len() - before;
                }
                Base::T => unreachable!("t letter to the right of a stable letter"),
            }
        }
        end
    }

    /// Moves every `a` in the head left of every `t`.
    fn sort_head(&mut self, end: usize) {
        let head_end = self.word[..end]
            .iter()
            .position(|x| x.is_stable())
            .unwrap_or(end);
        loop {
            let swap = (0..head_end.saturating_sub(1))
                .find(|&p| self.word[p].base == Base::T && self.word[p + 1].base == Base::A);
            match swap {
                Some(p) => self.commute(p),
                None => break,
            }
        }
    }

    fn free_reduce(&mut self, mut end: usize) -> usize {
        let mut i = 1;
        while i < end {
            let (x, y) = (self.word[i - 1], self.word[i]);
            if x.is_inverse_of(y) {
                let kind = if x.is_stable() {
                    StepKind::Pinch
                } else {
                    StepKind::FreeCancellation
                };
                self.replace(kind, i - 1, 2, vec![]);
                end -= 2;
                i = i.saturating_sub(1).max(1);
            } else {
                i += 1;
            }
        }
        end
    }
}

/// Elementary-move trace from `w` to the spelling of its normal form.
pub fn rewrite_trace(spec: &GroupSpec, w: &Word) -> RewriteTrace {
    let mut tracer = Tracer {
        spec,
        word: w.letters().to_vec(),
        steps: Vec::new(),
    };
    let mut prefix = 0;
    let mut nf = NormalForm::identity();
    for &x in w.letters() {
        prefix = tracer.settle(prefix + 1);
        nf.push(spec, x);
        debug_assert_eq!(&tracer.word[..prefix], nf.to_word().letters());
    }
    debug_assert_eq!(tracer.word, normalize(spec, w).to_word().into_letters());
    RewriteTrace {
        steps: tracer.steps,
    }
}

/// Replays `trace` on `w`, validating every move. Returns the final word.
pub fn check_trace(spec: &GroupSpec, w: &Word, trace: &RewriteTrace) -> Result<Word, TraceError> {
    let relators = spec.relators();
    let mut word = w.letters().to_vec();
    for (step_no, step) in trace.steps.iter().enumerate() {
        let end = step.position + step.removed.len();
        if end > word.len() || word[step.position..end] != step.removed[..] {
            return Err(TraceError::Mismatch {
                step: step_no,
                position: step.position,
            });
        }
        if !step_is_legal(step, &relators) {
            return Err(TraceError::Illegal {
                step: step_no,
                kind: step.kind,
            });
        }
        word.splice(step.position..end, step.inserted.iter().copied());
    }
    Ok(Word::from(word))
}

fn step_is_legal(step: &Step, relators: &[Word]) -> bool {
    let (u, v) = (&step.removed[..], &step.inserted[..]);
    match step.kind {
        StepKind::FreeCancellation | StepKind::Pinch => {
            let stable_ok = match step.kind {
                StepKind::Pinch => u.first().is_some_and(|x| x.is_stable()),
                _ => true,
            };
            u.len() == 2 && v.is_empty() && u[0].is_inverse_of(u[1]) && stable_ok
        }
        StepKind::Commutation => {
            u.len() == 2
                && v.len() == 2
                && u[0] == v[1]
                && u[1] == v[0]
                && matches!(
                    (u[0].base, u[1].base),
                    (Base::A, Base::T) | (Base::T, Base::A)
                )
                && is_relator_conjugate(u, v, relators)
        }
        StepKind::Relator => is_relator_conjugate(u, v, relators),
    }
}

/// True when `u v^-1` is freely conjugate to a relator or its inverse.
fn is_relator_conjugate(u: &[Letter], v: &[Letter], relators: &[Word]) -> bool {
    let mut w = u.to_vec();
    w.extend(v.iter().rev().map(|x| x.inverse()));
    let c = cyclically_reduce(&free_reduce(&w));
    if c.is_empty() {
        return false;
    }
    relators.iter().any(|r| {
        let inv: Vec<Letter> = r.letters().iter().rev().map(|x| x.inverse()).collect();
        is_rotation(&c, r.letters()) || is_rotation(&c, &inv)
    })
}

pub(crate) fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &x in w {
        match out.last() {
            Some(&y) if y.is_inverse_of(x) => {
                out.pop();
            }
            _ => out.push(x),
        }
    }
    out
}

fn cyclically_reduce(w: &[Letter]) -> Vec<Letter> {
    let (mut i, mut j) = (0, w.len());
    while j >= i + 2 && w[i].is_inverse_of(w[j - 1]) {
        i += 1;
        j -= 1;
    }
    w[i..j].to_vec()
}

fn is_rotation(c: &[Letter], r: &[Letter]) -> bool {
    c.len() == r.len() && (0..r.len()).any(|k| c.iter().eq(r[k..].iter().chain(&r[..k])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_word;

    fn spec12() -> GroupSpec {
        GroupSpec::new(vec![1, 2]).unwrap()
    }

    fn letters(s: &GroupSpec, text: &str) -> Vec<Letter> {
        parse_word(s, text).unwrap().into_letters()
    }

    #[test]
    fn trace_examples() {
        let s = spec12();
        let w = parse_word(&s, "B1 b1").unwrap();
        let tr = rewrite_trace(&s, &w);
        assert_eq!(tr.steps.len(), 1);
        assert_eq!(tr.steps[0].kind, StepKind::Pinch);
        assert_eq!(tr.steps[0].position, 0);
        assert!(check_trace(&s, &w, &tr).unwrap().is_empty());

        let w = parse_word(&s, "b1 t").unwrap();
        let tr = rewrite_trace(&s, &w);
        assert!(tr.steps.iter().any(|st| st.kind == StepKind::Relator));
        assert_eq!(check_trace(&s, &w, &tr).unwrap().to_string(), "t b1 A");

        assert!(rewrite_trace(&s, &Word::empty()).is_empty());
    }

    #[test]
    fn every_push_case_validates() {
        for e in [vec![1, 2], vec![-2, 5], vec![0, 4]] {
            let s = GroupSpec::new(e).unwrap();
            for text in [
                "b1 t", "b1 T", "B1 t", "B1 T", "b2 a^3 t", "B2 A^2 T", "a^2 t B1 a b2 A t",
                "t^3 a b1 T^2 B2 t a", "B1 t b1 T A", "b2 a b2 t^2",
            ] {
                let w = parse_word(&s, text).unwrap();
                let tr = rewrite_trace(&s, &w);
                let out = check_trace(&s, &w, &tr).unwrap();
                assert_eq!(out, normalize(&s, &w).to_word(), "{text} in {s}");
            }
        }
    }

    #[test]
    fn checker_rejects_bogus_steps() {
        let s = spec12();
        let w = parse_word(&s, "a t").unwrap();
        let bogus = RewriteTrace {
            steps: vec![Step {
                kind: StepKind::FreeCancellation,
                position: 0,
                removed: letters(&s, "a t"),
                inserted: vec![],
            }],
        };
        assert!(matches!(
            check_trace(&s, &w, &bogus),
            Err(TraceError::Illegal { .. })
        ));

        // b1 t = t b1 a would need exponent -1
        let w = parse_word(&s, "b1 t").unwrap();
        let wrong = RewriteTrace {
            steps: vec![Step {
                kind: StepKind::Relator,
                position: 0,
                removed: letters(&s, "b1 t"),
                inserted: letters(&s, "t b1 a"),
            }],
        };
        assert!(check_trace(&s, &w, &wrong).is_err());

        let mismatch = RewriteTrace {
            steps: vec![Step {
                kind: StepKind::Commutation,
                position: 0,
                removed: letters(&s, "t a"),
                inserted: letters(&s, "a t"),
            }],
        };
        assert!(matches!(
            check_trace(&s, &w, &mismatch),
            Err(TraceError::Mismatch { .. })
        ));

        let w = parse_word(&s, "b1 b2").unwrap();
        let swap = RewriteTrace {
            steps: vec![Step {
                kind: StepKind::Commutation,
                position: 0,
                removed: letters(&s, "b1 b2"),
                inserted: letters(&s, "b2 b1"),
            }],
        };
        assert!(check_trace(&s, &w, &swap).is_err());
    }

    #[test]
    fn relator_check_accepts_conjugates() {
        let s = spec12();
        let rels = s.relators();
        // t b2 = b2 a^2 t
        assert!(is_relator_conjugate(
            &letters(&s, "t b2"),
            &letters(&s, "b2 a^2 t"),
            &rels
        ));
        // the whole relator replaced by nothing
        assert!(is_relator_conjugate(&letters(&s, "B1 t b1 T A"), &[], &rels));
        assert!(!is_relator_conjugate(&letters(&s, "a"), &letters(&s, "a"), &rels));
        assert!(!is_relator_conjugate(&letters(&s, "t b2"), &letters(&s, "b2 a t"), &rels));
    }
}
