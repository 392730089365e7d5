//! Breadth-first balls in the Cayley graph, used as the word metric oracle.
//!
//! Vertices are keyed by normal form; by uniqueness of normal forms this is
//! the same as keying by spelled normal form.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Error;
use crate::presentation::{invert, GroupSpec, Letter, Sign, Word};
use crate::rewrite::{normalize, NormalForm};

pub const DEFAULT_ENTRY_CAP: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallEntry {
    pub distance: u32,
    /// Last letter of a geodesic from the identity; `None` for the identity.
    pub parent: Option<Letter>,
}

#[derive(Clone, Debug)]
pub struct BallIndex {
    spec: GroupSpec,
    radius: u32,
    entries: HashMap<NormalForm, BallEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallRow {
    pub key: String,
    pub distance: u32,
}

/// Word metric lower bound: stable letters and `t`-exponent of a normal form
/// are each changed by at most one per generator.
pub fn distance_lower_bound(nf: &NormalForm) -> u32 {
    (nf.blocks.len() as u64).max(nf.head_t.unsigned_abs()) as u32
}

pub fn build_ball(spec: &GroupSpec, radius: u32, entry_cap: usize) -> Result<BallIndex, Error> {
    let alphabet = spec.alphabet();
    let mut entries = HashMap::new();
    entries.insert(
        NormalForm::identity(),
        BallEntry {
            distance: 0,
            parent: None,
        },
    );
    let mut frontier = vec![NormalForm::identity()];
    for d in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for &x in &alphabet {
                let h = g.pushed(spec, x);
                if let Entry::Vacant(v) = entries.entry(h) {
                    next.push(v.key().clone());
                    v.insert(BallEntry {
                        distance: d,
                        parent: Some(x),
                    });
                }
            }
            if entries.len() > entry_cap {
                return Err(Error::BallCapExceeded {
                    cap: entry_cap,
                    completed_radius: d - 1,
                });
            }
        }
        frontier = next;
    }
    Ok(BallIndex {
        spec: spec.clone(),
        radius,
        entries,
    })
}

impl BallIndex {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, nf: &NormalForm) -> Option<&BallEntry> {
        self.entries.get(nf)
    }

    /// Word-metric distance from the identity, or `None` beyond the radius.
    pub fn element_distance(&self, nf: &NormalForm) -> Option<u32> {
        if distance_lower_bound(nf) > self.radius {
            return None;
        }
        self.entries.get(nf).map(|e| e.distance)
    }

    /// A geodesic word for `nf`, rebuilt from parent letters.
    pub fn geodesic(&self, nf: &NormalForm) -> Option<Word> {
        let mut cur = nf.clone();
        let mut rev = Vec::new();
        loop {
            let e = self.entries.get(&cur)?;
            match e.parent {
                None => break,
                Some(x) => {
                    rev.push(x);
                    cur.push(&self.spec, x.inverse());
                }
            }
        }
        rev.reverse();
        Some(Word::from(rev))
    }

    /// `(key, distance)` rows ordered by distance, then key.
    pub fn rows(&self) -> Vec<BallRow> {
        let mut rows: Vec<BallRow> = self
            .entries
            .iter()
            .map(|(nf, e)| BallRow {
                key: nf.spelled(),
                distance: e.distance,
            })
            .collect();
        rows.sort_by(|a, b| (a.distance, &a.key).cmp(&(b.distance, &b.key)));
        rows
    }

    pub fn to_csv(&self) -> Result<String, Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in self.rows() {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows()).expect("rows serialize")
    }

    /// Edge set of the ball in DOT form, one edge `g -- gx` per positive generator `x`.
    pub fn to_dot(&self) -> String {
        let mut nodes: Vec<(&NormalForm, String, u32)> = self
            .entries
            .iter()
            .map(|(nf, e)| (nf, nf.spelled(), e.distance))
            .collect();
        nodes.sort_by(|a, b| (a.2, &a.1).cmp(&(b.2, &b.1)));
        let ids: HashMap<&NormalForm, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.0, i)).collect();
        let mut out = String::from("graph ball {\n");
        for (i, (_, key, _)) in nodes.iter().enumerate() {
            writeln!(out, "  n{i} [label=\"{key}\"];").unwrap();
        }
        for (i, (nf, _, _)) in nodes.iter().enumerate() {
            for x in self.spec.alphabet().into_iter().filter(|x| x.sign == Sign::Pos) {
                if let Some(j) = ids.get(&nf.pushed(&self.spec, x)) {
                    writeln!(out, "  n{i} -- n{j} [label=\"{x}\"];").unwrap();
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn element_distance(ball: &BallIndex, nf: &NormalForm) -> Option<u32> {
    ball.element_distance(nf)
}

/// `d(w1, w2)` if at most `cap`, else `None`. Searches breadth-first for the
/// difference element `w1^-1 w2`, stopping at depth `cap`.
pub fn bounded_distance(spec: &GroupSpec, w1: &Word, w2: &Word, cap: u32) -> Option<u32> {
    let target = normalize(spec, &invert(w1).concat(w2));
    distance_to(spec, &target, cap)
}

/// Breadth-first distance from the identity to `target`, up to `cap`.
pub fn distance_to(spec: &GroupSpec, target: &NormalForm, cap: u32) -> Option<u32> {
    if target.is_identity() {
        return Some(0);
    }
    if distance_lower_bound(target) > cap {
        return None;
    }
    let alphabet = spec.alphabet();
    let mut seen = HashSet::from([NormalForm::identity()]);
    let mut frontier = vec![NormalForm::identity()];
    for d in 1..=cap {
        let mut next = Vec::new();
        for g in &frontier {
            for &x in &alphabet {
                let h = g.pushed(spec, x);
                if &h == target {
                    return Some(d);
                }
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    None
}
