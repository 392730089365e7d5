//! Synchronous and asynchronous fellow-traveler distances between word paths.
//!
//! The asynchronous distance is the discrete Fréchet distance in the word
//! metric: the minimum over monotone lattice alignments of the largest
//! distance between aligned prefix endpoints.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cayley::{build_ball, distance_lower_bound, BallIndex, DEFAULT_ENTRY_CAP};
use crate::error::Error;
use crate::presentation::{GroupSpec, Word};
use crate::rewrite::NormalForm;

/// Endpoints of all prefixes of a word, including the empty prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathVertices(pub Vec<NormalForm>);

impl PathVertices {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn path_vertices(spec: &GroupSpec, w: &Word) -> PathVertices {
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut cur = NormalForm::identity();
    out.push(cur.clone());
    for &x in w.letters() {
        cur.push(spec, x);
        out.push(cur.clone());
    }
    PathVertices(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlignStep {
    /// Advance the left path only.
    Down,
    /// Advance the right path only.
    Right,
    /// Advance both.
    Diagonal,
}

/// Monotone sequence of index pairs from `(0, 0)` to `(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment(pub Vec<(usize, usize)>);

impl Alignment {
    pub fn diagonal(len: usize) -> Alignment {
        Alignment((0..=len).map(|i| (i, i)).collect())
    }

    pub fn steps(&self) -> Vec<AlignStep> {
        self.0
            .windows(2)
            .map(|p| match (p[1].0 - p[0].0, p[1].1 - p[0].1) {
                (1, 0) => AlignStep::Down,
                (0, 1) => AlignStep::Right,
                _ => AlignStep::Diagonal,
            })
            .collect()
    }

    /// Checks corners and unit monotone steps.
    pub fn is_valid(&self, m: usize, n: usize) -> bool {
        self.0.first() == Some(&(0, 0))
            && self.0.last() == Some(&(m, n))
            && self.0.windows(2).all(|p| {
                let (di, dj) = (p[1].0.wrapping_sub(p[0].0), p[1].1.wrapping_sub(p[0].1));
                matches!((di, dj), (1, 0) | (0, 1) | (1, 1))
            })
    }
}

impl fmt::Display for Alignment {
    /// Step string over `D` (left advances), `R` (right advances) and `G` (both).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.steps() {
            f.write_str(match s {
                AlignStep::Down => "D",
                AlignStep::Right => "R",
                AlignStep::Diagonal => "G",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsyncMatch {
    pub distance: u32,
    pub alignment: Alignment,
}

/// Word metric restricted to distances at most `cap`, backed by a ball.
#[derive(Clone, Debug)]
pub struct CappedMetric {
    ball: BallIndex,
}

impl CappedMetric {
    pub fn new(spec: &GroupSpec, cap: u32) -> Result<CappedMetric, Error> {
        Ok(CappedMetric {
            ball: build_ball(spec, cap, DEFAULT_ENTRY_CAP)?,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        self.ball.spec()
    }

    pub fn cap(&self) -> u32 {
        self.ball.radius()
    }

    /// Distance of the element `diff` from the identity, `None` past the cap.
    pub fn norm(&self, diff: &NormalForm) -> Option<u32> {
        if distance_lower_bound(diff) > self.cap() {
            return None;
        }
        self.ball.element_distance(diff)
    }

    /// Matrix of capped distances `d(p[i], q[j])`.
    fn distance_grid(&self, p: &Word, q: &Word) -> Vec<Vec<Option<u32>>> {
        let spec = self.spec();
        let mut rows = Vec::with_capacity(p.len() + 1);
        for i in 0..=p.len() {
            // p[..i]^-1 q[..j], extended one letter of q at a time
            let mut diff = crate::rewrite::normalize(spec, &p.prefix(i).inverse());
            let mut row = Vec::with_capacity(q.len() + 1);
            row.push(self.norm(&diff));
            for &y in q.letters() {
                diff.push(spec, y);
                row.push(self.norm(&diff));
            }
            rows.push(row);
        }
        rows
    }

    pub fn sync_distance(&self, w: &Word, u: &Word) -> Option<u32> {
        let grid = self.distance_grid(w, u);
        let (m, n) = (w.len(), u.len());
        let mut best = 0;
        for i in 0..=m.max(n) {
            best = best.max(grid[i.min(m)][i.min(n)]?);
        }
        Some(best)
    }

    pub fn async_distance(&self, w: &Word, u: &Word) -> Option<AsyncMatch> {
        let grid = self.distance_grid(w, u);
        frechet(&grid)
    }
}

/// Bottleneck dynamic program over a grid where `None` means "past the cap".
fn frechet(grid: &[Vec<Option<u32>>]) -> Option<AsyncMatch> {
    let m = grid.len() - 1;
    let n = grid[0].len() - 1;
    let mut best = vec![vec![None::<u32>; n + 1]; m + 1];
    for i in 0..=m {
        for j in 0..=n {
            let here = grid[i][j];
            let prev = if i == 0 && j == 0 {
                Some(0)
            } else {
                let mut cands = Vec::with_capacity(3);
                if i > 0 {
                    cands.push(best[i - 1][j]);
                }
                if j > 0 {
                    cands.push(best[i][j - 1]);
                }
                if i > 0 && j > 0 {
                    cands.push(best[i - 1][j - 1]);
                }
                cands.into_iter().flatten().min()
            };
            best[i][j] = match (here, prev) {
                (Some(h), Some(p)) => Some(h.max(p)),
                _ => None,
            };
        }
    }
    let distance = best[m][n]?;
    // walk back along cells that stay within the optimum
    let mut path = vec![(m, n)];
    let (mut i, mut j) = (m, n);
    while (i, j) != (0, 0) {
        let ok = |a: usize, b: usize| best[a][b].is_some_and(|v| v <= distance);
        (i, j) = if i > 0 && j > 0 && ok(i - 1, j - 1) {
            (i - 1, j - 1)
        } else if i > 0 && ok(i - 1, j) {
            (i - 1, j)
        } else {
            (i, j - 1)
        };
        path.push((i, j));
    }
    path.reverse();
    Some(AsyncMatch {
        distance,
        alignment: Alignment(path),
    })
}

/// Largest distance between equal-time prefixes, the shorter path waiting at
/// its endpoint. `None` if some pair is farther apart than `cap`.
pub fn sync_fellow_distance(spec: &GroupSpec, w: &Word, u: &Word, cap: u32) -> Result<Option<u32>, Error> {
    Ok(CappedMetric::new(spec, cap)?.sync_distance(w, u))
}

/// Discrete Fréchet distance between the paths of `w` and `u`, with an optimal
/// alignment. `None` if every alignment exceeds `cap`.
pub fn async_fellow_distance(
    spec: &GroupSpec,
    w: &Word,
    u: &Word,
    cap: u32,
) -> Result<Option<AsyncMatch>, Error> {
    Ok(CappedMetric::new(spec, cap)?.async_distance(w, u))
}

/// Whether the two normal forms have the same sequence of stable letters.
pub fn parallel_structure(w: &NormalForm, u: &NormalForm) -> bool {
    w.headers().eq(u.headers())
}
