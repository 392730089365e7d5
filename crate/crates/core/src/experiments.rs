//! Reproducible experiment harnesses: the combing-constant sweep, the growth
//! table for `b_i^-k t^j`, and the iterated-conjugation check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automata::build_acceptor;
use crate::cayley::{build_ball, BallIndex};
use crate::error::Error;
use crate::fellow::{parallel_structure, CappedMetric};
use crate::presentation::{GroupSpec, Letter, Sign, Word};
use crate::rewrite::{normalize, NormalForm};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiRow {
    pub k: u32,
    pub j: u32,
    pub geodesic_claimed: u32,
    /// `None` when the element lies beyond the verification radius.
    pub geodesic_bfs: Option<u32>,
    pub normal_form_length: u64,
    pub paper_formula: i64,
    pub ratio: f64,
}

/// `b_i^-k t^j` as a word.
pub fn conjugate_power_word(index: u32, k: u32, j: u32) -> Word {
    std::iter::repeat_n(Letter::stable(index, Sign::Neg), k as usize)
        .chain(std::iter::repeat_n(Letter::t(Sign::Pos), j as usize))
        .collect()
}

/// Normal form lengths of `b_i^-k t^j` against the length `k + j` of the word
/// itself, with breadth-first confirmation of the geodesic length where
/// `k + j <= verify_radius`.
pub fn quasigeodesic_table(
    spec: &GroupSpec,
    stable_index: u32,
    kmax: u32,
    jmax: u32,
    verify_radius: u32,
    entry_cap: usize,
) -> Result<Vec<QuasiRow>, Error> {
    if stable_index == 0 || stable_index as usize > spec.rank() {
        return Err(Error::InvalidSpec(format!(
            "stable index {stable_index} not in 1..={}",
            spec.rank()
        )));
    }
    let ball = ball_within_budget(spec, verify_radius, entry_cap)?;
    let n = spec.exponent(stable_index);
    let mut rows = Vec::new();
    for k in 1..=kmax {
        for j in 1..=jmax {
            let nf = normalize(spec, &conjugate_power_word(stable_index, k, j));
            let claimed = k + j;
            let geodesic_bfs = if claimed <= verify_radius {
                ball.element_distance(&nf)
            } else {
                None
            };
            let len = nf.spelled_len() as u64;
            let (k64, j64) = (k as i64, j as i64);
            rows.push(QuasiRow {
                k,
                j,
                geodesic_claimed: claimed,
                geodesic_bfs,
                normal_form_length: len,
                paper_formula: n * j64 + j64 + k64 * j64 + n * k64 * j64 + 1,
                ratio: len as f64 / claimed as f64,
            });
        }
    }
    Ok(rows)
}

/// The largest ball of radius at most `radius` that fits in `entry_cap`.
fn ball_within_budget(spec: &GroupSpec, radius: u32, entry_cap: usize) -> Result<BallIndex, Error> {
    match build_ball(spec, radius, entry_cap) {
        Err(Error::BallCapExceeded {
            completed_radius, ..
        }) => build_ball(spec, completed_radius, entry_cap),
        other => other,
    }
}

pub fn quasi_rows_csv(rows: &[QuasiRow]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub lhs: String,
    pub rhs: String,
    /// `None` when the pair could not be aligned within the cap.
    pub distance: Option<u32>,
    pub alignment: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorStat {
    pub letter: Letter,
    pub max_distance: u32,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FellowReport {
    pub exponents: Vec<i64>,
    pub samples: usize,
    pub max_length: usize,
    pub seed: u64,
    pub cap: u32,
    /// Tested constant `max |n_i| + 1`.
    pub bound: u32,
    pub pairs_checked: usize,
    pub per_generator: Vec<GeneratorStat>,
    /// Pairs whose distance exceeded `bound` or the cap.
    pub violations: Vec<Witness>,
    /// Pairs whose stable letter sequences differ.
    pub structure_failures: Vec<Witness>,
}

impl FellowReport {
    pub fn max_distance(&self) -> u32 {
        self.per_generator
            .iter()
            .map(|g| g.max_distance)
            .max()
            .unwrap_or(0)
    }
}

pub fn combing_bound(spec: &GroupSpec) -> u32 {
    spec.max_abs_exponent() as u32 + 1
}

/// The seeded L-words used by [`combing_sweep`].
pub fn sample_words(spec: &GroupSpec, samples: usize, maxlen: usize, seed: u64) -> Vec<Word> {
    let aut = build_acceptor(spec);
    (0..samples)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            aut.sample(&mut rng, maxlen)
        })
        .collect()
}

/// For seeded random normal-form words `w` and each `x` in `a, A, t, T`,
/// measures the asynchronous distance between `w` and the normal form of `wx`.
pub fn combing_sweep(
    spec: &GroupSpec,
    samples: usize,
    maxlen: usize,
    seed: u64,
    cap: u32,
) -> Result<FellowReport, Error> {
    let metric = CappedMetric::new(spec, cap)?;
    let bound = combing_bound(spec);
    let generators = [
        Letter::a(Sign::Pos),
        Letter::a(Sign::Neg),
        Letter::t(Sign::Pos),
        Letter::t(Sign::Neg),
    ];
    let mut per_generator: Vec<GeneratorStat> = generators
        .iter()
        .map(|&letter| GeneratorStat {
            letter,
            max_distance: 0,
            witness: None,
        })
        .collect();
    let mut violations = Vec::new();
    let mut structure_failures = Vec::new();
    let mut pairs_checked = 0;

    for w in sample_words(spec, samples, maxlen, seed) {
        let w_nf = normalize(spec, &w);
        for (g, &x) in generators.iter().enumerate() {
            let wx: NormalForm = w_nf.pushed(spec, x);
            let u = wx.to_word();
            let found = metric.async_distance(&w, &u);
            pairs_checked += 1;
            let witness = Witness {
                lhs: w.to_string(),
                rhs: u.to_string(),
                distance: found.as_ref().map(|m| m.distance),
                alignment: found.as_ref().map(|m| m.alignment.to_string()),
            };
            if !parallel_structure(&w_nf, &wx) {
                structure_failures.push(witness.clone());
            }
            match found {
                Some(m) => {
                    let stat = &mut per_generator[g];
                    if stat.witness.is_none() || m.distance > stat.max_distance {
                        stat.max_distance = m.distance;
                        stat.witness = Some(witness.clone());
                    }
                    if m.distance > bound {
                        violations.push(witness);
                    }
                }
                None => violations.push(witness),
            }
        }
    }

    Ok(FellowReport {
        exponents: spec.exponents().to_vec(),
        samples,
        max_length: maxlen,
        seed,
        cap,
        bound,
        pairs_checked,
        per_generator,
        violations,
        structure_failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationRow {
    pub index: u32,
    pub p: u32,
    /// `a^(p n_i) t`.
    pub expected: String,
    /// Normal form of `b_i^-p t b_i^p`.
    pub actual: String,
    pub pass: bool,
    /// `a^(p n_i) t^p`.
    pub power_expected: String,
    /// Normal form of `b_i^-1 t^p b_i`.
    pub power_actual: String,
    pub power_pass: bool,
}

/// For every `i` and `0 <= p <= pmax`, compares `b_i^-p t b_i^p` with
/// `a^(p n_i) t`, and `b_i^-1 t^p b_i` with `a^(p n_i) t^p`.
///
/// The first identity only holds for `p <= 1` or `n_i = 0`: `b_i^-1 a b_i` is
/// reduced, so a second conjugation leaves stable letters behind. The second
/// identity holds for all `p`.
pub fn conjugation_check(spec: &GroupSpec, pmax: u32) -> Vec<ConjugationRow> {
    let mut rows = Vec::new();
    for index in 1..=spec.rank() as u32 {
        let n = spec.exponent(index);
        for p in 0..=pmax {
            let nested = normalize(spec, &conjugate(index, p, 1));
            let expected = NormalForm {
                head_a: p as i64 * n,
                head_t: 1,
                blocks: Vec::new(),
            };
            let power = normalize(spec, &conjugate(index, 1, p));
            let power_expected = NormalForm {
                head_a: p as i64 * n,
                head_t: p as i64,
                blocks: Vec::new(),
            };
            rows.push(ConjugationRow {
                index,
                p,
                expected: expected.spelled(),
                actual: nested.spelled(),
                pass: nested == expected,
                power_expected: power_expected.spelled(),
                power_actual: power.spelled(),
                power_pass: power == power_expected,
            });
        }
    }
    rows
}

/// `b_i^-depth t^tp b_i^depth`.
fn conjugate(index: u32, depth: u32, tp: u32) -> Word {
    let mut w = conjugate_power_word(index, depth, tp);
    for _ in 0..depth {
        w.push(Letter::stable(index, Sign::Pos));
    }
    w
}
