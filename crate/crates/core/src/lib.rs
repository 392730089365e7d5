//! Normal forms, word problem and fellow-traveler experiments for the groups
//!
//! ```text
//! G = < a, t, b_1, ..., b_k | at = ta, b_i^-1 t b_i = a^(n_i) t >
//! ```
//!
//! viewed as iterated HNN extensions of `Z^2 = <a, t>` with associated
//! subgroups `<t>` and `<a^(n_i) t>`.
//!
//! - [`presentation`]: group spec, letters, words and their text syntax.
//! - [`rewrite`]: normal forms, [`rewrite::normalize`] and the word problem.
//! - [`trace`]: elementary-move certificates for normalization and their checker.
//! - [`automata`]: deterministic acceptor for the normal form language.
//! - [`cayley`]: breadth-first balls and the word metric.
//! - [`fellow`]: synchronous and asynchronous fellow-traveler distances.
//! - [`experiments`]: combing sweep, growth table and conjugation check.
//! - [`cli`]: the `lmfbc` command line.

pub mod automata;
pub mod cayley;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod fellow;
pub mod presentation;
pub mod rewrite;
pub mod trace;

pub use error::{Error, ParseError, ParseErrorKind};
pub use presentation::{invert, parse_word, spell_word, Base, GroupSpec, Letter, Sign, Word};
pub use rewrite::{
    append_letter, equal_elements, normalize, spell_nf, word_problem, Block, NormalForm,
};
