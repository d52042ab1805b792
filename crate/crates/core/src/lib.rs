//! Generation and auditing of privacy-preserving synthetic interaction logs.
//!
//! The input is a triplet dataset (`user_id`, `action_id`, binary `outcome`).
//! The toolkit fits generative models on a training half of the users —
//! resampled rows (drop baseline), a first-order Markov chain, or a GRU — and
//! pairs them with a Rasch response model to produce fully synthetic logs.
//! Released datasets are scored on two axes:
//!
//! * **utility** — refit item difficulties on the fake data and compare them
//!   to the training-set fit (RMSE / frequency-weighted RMSE), plus
//!   histogram distances;
//! * **privacy** — a membership-inference audit that matches every original
//!   user against the fake set by normalized longest-common-subsequence
//!   score and reports the re-identification ROC AUC.
//!
//! Everything randomized takes an explicit seed; a complete experiment is a
//! pure function of its config.

pub mod corpus;
pub mod drop;
pub mod error;
pub mod gru;
pub mod irt;
pub mod markov;
pub mod pipeline;
pub mod privacy;
pub mod seeding;
pub mod utility;

pub use corpus::{Corpus, CorpusStats, InteractionRecord, UserSequence, Vocabulary};
pub use error::{Error, Result};
