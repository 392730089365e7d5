//! Deterministic acceptor for the language of spelled normal forms.
//!
//! The language is `{a^i t^j} ({r a^i})*` with `r` ranging over stable letters
//! and their inverses, where every run is written with a single sign and no
//! `b_i^-e b_i^e` adjacency occurs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::presentation::{Base, GroupSpec, Letter, Sign, Word};

/// Missing transitions go to an implicit rejecting sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<String>,
    initial: usize,
    accepting: BTreeSet<usize>,
    transitions: BTreeMap<(usize, Letter), usize>,
}

#[derive(Serialize, Deserialize)]
struct AutomatonRecord {
    states: Vec<String>,
    initial: usize,
    accepting: Vec<usize>,
    transitions: Vec<TransitionRecord>,
}

#[derive(Serialize, Deserialize)]
struct TransitionRecord {
    from: usize,
    letter: Letter,
    to: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Phase {
    Start,
    HeadA(Sign),
    HeadT(Sign),
    /// Last stable letter and the sign lock of its tail, if any.
    Block(u32, Sign, Option<Sign>),
}

impl Phase {
    fn name(self) -> String {
        let s = |x: Sign| if x == Sign::Pos { "+" } else { "-" };
        match self {
            Phase::Start => "start".into(),
            Phase::HeadA(x) => format!("a{}", s(x)),
            Phase::HeadT(x) => format!("t{}", s(x)),
            Phase::Block(i, sg, lock) => {
                let l = Letter::stable(i, sg).token();
                match lock {
                    None => l,
                    Some(x) => format!("{l}/a{}", s(x)),
                }
            }
        }
    }

    fn step(self, x: Letter) -> Option<Phase> {
        use Phase::*;
        match (self, x.base) {
            (Start, Base::A) => Some(HeadA(x.sign)),
            (Start | HeadA(_), Base::T) => Some(HeadT(x.sign)),
            (HeadA(s), Base::A) => (s == x.sign).then_some(self),
            (HeadT(s), Base::T) => (s == x.sign).then_some(self),
            (HeadT(_), Base::A) => None,
            (Start | HeadA(_) | HeadT(_), Base::Stable(i)) => Some(Block(i, x.sign, None)),
            (Block(_, _, _), Base::T) => None,
            (Block(i, s, None), Base::A) => Some(Block(i, s, Some(x.sign))),
            (Block(_, _, Some(lock)), Base::A) => (lock == x.sign).then_some(self),
            (Block(i, s, None), Base::Stable(j)) if i == j && s != x.sign => None,
            (Block(_, _, _), Base::Stable(j)) => Some(Block(j, x.sign, None)),
        }
    }
}

pub fn build_acceptor(spec: &GroupSpec) -> Automaton {
    let alphabet = spec.alphabet();
    let mut index: BTreeMap<Phase, usize> = BTreeMap::new();
    let mut order = vec![Phase::Start];
    index.insert(Phase::Start, 0);
    let mut transitions = BTreeMap::new();
    let mut next = 0;
    while next < order.len() {
        let p = order[next];
        for &x in &alphabet {
            if let Some(q) = p.step(x) {
                let id = *index.entry(q).or_insert_with(|| {
                    order.push(q);
                    order.len() - 1
                });
                transitions.insert((next, x), id);
            }
        }
        next += 1;
    }
    Automaton {
        states: order.iter().map(|p| p.name()).collect(),
        initial: 0,
        accepting: (0..order.len()).collect(),
        transitions,
    }
}

impl Automaton {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting.contains(&state)
    }

    pub fn step(&self, state: usize, x: Letter) -> Option<usize> {
        self.transitions.get(&(state, x)).copied()
    }

    pub fn run(&self, w: &Word) -> Option<usize> {
        w.letters()
            .iter()
            .try_fold(self.initial, |s, &x| self.step(s, x))
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run(w).is_some_and(|s| self.is_accepting(s))
    }

    /// Outgoing letters of `state` in letter order.
    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        self.transitions
            .range((state, Letter::a(Sign::Pos))..)
            .take_while(move |((s, _), _)| *s == state)
            .map(|((_, x), to)| (*x, *to))
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([self.initial]);
        let mut stack = vec![self.initial];
        while let Some(s) = stack.pop() {
            for (_, to) in self.outgoing(s) {
                if seen.insert(to) {
                    stack.push(to);
                }
            }
        }
        seen
    }

    /// All accepted words of length at most `maxlen` in length-lexicographic
    /// order. Fails once more than `cap` words would be produced.
    pub fn enumerate_accepted(&self, maxlen: usize, cap: usize) -> Result<Vec<Word>, Error> {
        let mut out = Vec::new();
        let mut level: Vec<(Vec<Letter>, usize)> = vec![(Vec::new(), self.initial)];
        for len in 0..=maxlen {
            for (w, s) in &level {
                if self.is_accepting(*s) {
                    if out.len() == cap {
                        return Err(Error::EnumerationCapExceeded { cap });
                    }
                    out.push(Word::from(w.clone()));
                }
            }
            if len == maxlen {
                break;
            }
            let mut next = Vec::new();
            for (w, s) in &level {
                for (x, to) in self.outgoing(*s) {
                    let mut w2 = w.clone();
                    w2.push(x);
                    next.push((w2, to));
                }
            }
            if next.len() > cap.saturating_mul(8) {
                return Err(Error::EnumerationCapExceeded { cap });
            }
            level = next;
        }
        Ok(out)
    }

    /// Random accepted word: at every step choose uniformly among the legal
    /// letters and, in accepting states, stopping. Stops at `maxlen`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, maxlen: usize) -> Word {
        loop {
            let mut state = self.initial;
            let mut w = Word::empty();
            loop {
                let choices: Vec<(Letter, usize)> = self.outgoing(state).collect();
                let can_stop = self.is_accepting(state);
                if w.len() == maxlen || choices.is_empty() {
                    if can_stop {
                        return w;
                    }
                    break;
                }
                let n = choices.len() + usize::from(can_stop);
                let pick = rng.gen_range(0..n);
                if pick == choices.len() {
                    return w;
                }
                let (x, to) = choices[pick];
                w.push(x);
                state = to;
            }
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph acceptor {\n  rankdir=LR;\n");
        for (i, name) in self.states.iter().enumerate() {
            let shape = if self.is_accepting(i) {
                "doublecircle"
            } else {
                "circle"
            };
            writeln!(out, "  s{i} [label=\"{name}\", shape={shape}];").unwrap();
        }
        writeln!(out, "  init [shape=point];\n  init -> s{};", self.initial).unwrap();
        for ((from, x), to) in &self.transitions {
            writeln!(out, "  s{from} -> s{to} [label=\"{x}\"];").unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let record = AutomatonRecord {
            states: self.states.clone(),
            initial: self.initial,
            accepting: self.accepting.iter().copied().collect(),
            transitions: self
                .transitions
                .iter()
                .map(|(&(from, letter), &to)| TransitionRecord { from, letter, to })
                .collect(),
        };
        serde_json::to_string_pretty(&record).expect("automaton serializes")
    }

    pub fn from_json(text: &str) -> Result<Automaton, Error> {
        let r: AutomatonRecord = serde_json::from_str(text)?;
        let n = r.states.len();
        let bad = |msg: String| Err(Error::InvalidAutomaton(msg));
        if r.initial >= n {
            return bad(format!("initial state {} out of range", r.initial));
        }
        if let Some(s) = r.accepting.iter().find(|&&s| s >= n) {
            return bad(format!("accepting state {s} out of range"));
        }
        let mut transitions = BTreeMap::new();
        for t in r.transitions {
            if t.from >= n || t.to >= n {
                return bad(format!("transition {} -> {} out of range", t.from, t.to));
            }
            if transitions.insert((t.from, t.letter), t.to).is_some() {
                return bad(format!("duplicate transition from {} on {}", t.from, t.letter));
            }
        }
        Ok(Automaton {
            states: r.states,
            initial: r.initial,
            accepting: r.accepting.into_iter().collect(),
            transitions,
        })
    }
}

/// Exports in `dot` or `json` format.
pub fn export_automaton(aut: &Automaton, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => aut.to_dot(),
        ExportFormat::Json => aut.to_json(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}
