//! Interaction-log corpora: loading, validation, filtering, splitting and
//! summary statistics.
//!
//! A corpus is a list of per-user sequences of `(action, outcome)` pairs over
//! a shared action vocabulary. User and action identifiers are opaque strings
//! externally and dense `u32` indices internally. A corpus is immutable after
//! construction; every transformation returns a new corpus.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding;

/// Dense action-name indexing. Index order is first-appearance order in the
/// source the vocabulary was built from.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn from_names(names: Vec<String>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        Vocabulary { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, idx: u32) -> &str {
        &self.names[idx as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// One row of the raw triplet format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionRecord {
    pub user_id: String,
    pub action_id: String,
    /// 1 = success, 0 = failure.
    pub outcome: u8,
}

/// All rows of one user, in original row order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserSequence {
    pub user_id: String,
    /// Dense action indices into the owning corpus vocabulary.
    pub actions: Vec<u32>,
    /// Same length as `actions`; entries are 0 or 1.
    pub outcomes: Vec<u8>,
}

impl UserSequence {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

/// An immutable interaction-log corpus.
#[derive(Debug, Clone)]
pub struct Corpus {
    sequences: Vec<UserSequence>,
    vocab: Arc<Vocabulary>,
    attempts: Vec<u64>,
    successes: Vec<u64>,
}

impl Corpus {
    /// Build a corpus from sequences over an existing vocabulary. Per-action
    /// counts are recomputed; sequence invariants are checked.
    pub fn from_sequences(sequences: Vec<UserSequence>, vocab: Arc<Vocabulary>) -> Result<Self> {
        let mut attempts = vec![0u64; vocab.len()];
        let mut successes = vec![0u64; vocab.len()];
        for seq in &sequences {
            if seq.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "user {:?} has an empty sequence",
                    seq.user_id
                )));
            }
            if seq.actions.len() != seq.outcomes.len() {
                return Err(Error::InvalidArgument(format!(
                    "user {:?}: {} actions but {} outcomes",
                    seq.user_id,
                    seq.actions.len(),
                    seq.outcomes.len()
                )));
            }
            for (&a, &r) in seq.actions.iter().zip(&seq.outcomes) {
                if a as usize >= vocab.len() {
                    return Err(Error::InvalidArgument(format!(
                        "action index {a} out of range for vocabulary of {}",
                        vocab.len()
                    )));
                }
                if r > 1 {
                    return Err(Error::InvalidArgument(format!("outcome {r} is not binary")));
                }
                attempts[a as usize] += 1;
                successes[a as usize] += u64::from(r);
            }
        }
        Ok(Corpus {
            sequences,
            vocab,
            attempts,
            successes,
        })
    }

    /// Load a corpus from a `user_id,action_id,outcome` CSV file. Rows of one
    /// user need not be contiguous; grouping is by `user_id` value and row
    /// order is preserved within each user.
    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(file).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    /// Same as [`Corpus::load_csv`] but from any reader.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);

        {
            let headers = rdr
                .headers()
                .map_err(|e| csv_error(e, 1, "cannot read header"))?;
            let expected = ["user_id", "action_id", "outcome"];
            if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h != e) {
                if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
                    return Err(Error::EmptyDataset);
                }
                return Err(Error::MalformedRow {
                    line: 1,
                    message: format!(
                        "expected header user_id,action_id,outcome, got {:?}",
                        headers.iter().collect::<Vec<_>>().join(",")
                    ),
                });
            }
        }

        let mut vocab_names: Vec<String> = Vec::new();
        let mut vocab_index: HashMap<String, u32> = HashMap::new();
        let mut user_index: HashMap<String, usize> = HashMap::new();
        let mut sequences: Vec<UserSequence> = Vec::new();

        for row in rdr.records() {
            let row = row.map_err(|e| {
                let line = csv_line(&e).unwrap_or(0);
                csv_error(e, line, "cannot parse row")
            })?;
            let line = row.position().map_or(0, |p| p.line());
            if row.len() != 3 {
                return Err(Error::MalformedRow {
                    line,
                    message: format!("expected 3 fields, got {}", row.len()),
                });
            }
            let outcome = match &row[2] {
                "0" => 0u8,
                "1" => 1u8,
                other => {
                    return Err(Error::MalformedRow {
                        line,
                        message: format!("outcome must be 0 or 1, got {other:?}"),
                    })
                }
            };
            let action = &row[1];
            let action_idx = match vocab_index.get(action) {
                Some(&i) => i,
                None => {
                    let i = vocab_names.len() as u32;
                    vocab_names.push(action.to_string());
                    vocab_index.insert(action.to_string(), i);
                    i
                }
            };
            let user = &row[0];
            let seq_idx = match user_index.get(user) {
                Some(&i) => i,
                None => {
                    let i = sequences.len();
                    user_index.insert(user.to_string(), i);
                    sequences.push(UserSequence {
                        user_id: user.to_string(),
                        actions: Vec::new(),
                        outcomes: Vec::new(),
                    });
                    i
                }
            };
            sequences[seq_idx].actions.push(action_idx);
            sequences[seq_idx].outcomes.push(outcome);
        }

        if sequences.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let vocab = Arc::new(Vocabulary::from_names(vocab_names));
        Corpus::from_sequences(sequences, vocab)
    }

    /// Write the corpus back to the triplet CSV format.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut wtr = csv::Writer::from_writer(file);
        wtr.write_record(["user_id", "action_id", "outcome"])
            .map_err(|e| write_error(path, e))?;
        for seq in &self.sequences {
            for (&a, &r) in seq.actions.iter().zip(&seq.outcomes) {
                wtr.write_record([
                    seq.user_id.as_str(),
                    self.vocab.name(a),
                    if r == 1 { "1" } else { "0" },
                ])
                .map_err(|e| write_error(path, e))?;
            }
        }
        wtr.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Remove every record whose action has an empirical success rate of
    /// exactly 0 or exactly 1, drop users whose sequences become empty, and
    /// reindex the vocabulary. Single pass: the filter is not iterated even
    /// though removing users changes the remaining actions' rates.
    pub fn filter_degenerate_actions(&self) -> Result<Self> {
        let keep: Vec<bool> = self
            .attempts
            .iter()
            .zip(&self.successes)
            .map(|(&n, &s)| n > 0 && s > 0 && s < n)
            .collect();
        if keep.iter().all(|&k| !k) {
            return Err(Error::NoActionsRemain);
        }

        let mut remap = vec![u32::MAX; self.vocab.len()];
        let mut names = Vec::new();
        for (old, &k) in keep.iter().enumerate() {
            if k {
                remap[old] = names.len() as u32;
                names.push(self.vocab.names[old].clone());
            }
        }
        let vocab = Arc::new(Vocabulary::from_names(names));

        let mut sequences = Vec::new();
        for seq in &self.sequences {
            let mut actions = Vec::new();
            let mut outcomes = Vec::new();
            for (&a, &r) in seq.actions.iter().zip(&seq.outcomes) {
                if keep[a as usize] {
                    actions.push(remap[a as usize]);
                    outcomes.push(r);
                }
            }
            if !actions.is_empty() {
                sequences.push(UserSequence {
                    user_id: seq.user_id.clone(),
                    actions,
                    outcomes,
                });
            }
        }
        Corpus::from_sequences(sequences, vocab)
    }

    /// Partition users uniformly at random into a training corpus of
    /// `ceil(U/2)` users and a holdout corpus with the rest. All rows of a
    /// user travel together; both sides keep the full original vocabulary
    /// indexing; user order within each side follows the original corpus.
    pub fn split_half_users(&self, seed: u64) -> Result<(Self, Self)> {
        let n = self.sequences.len();
        if n < 2 {
            return Err(Error::TooFewUsers {
                needed: 2,
                actual: n,
            });
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut seeding::rng(seed));
        let n_train = n.div_ceil(2);
        let mut in_training = vec![false; n];
        for &i in &order[..n_train] {
            in_training[i] = true;
        }
        let (mut train, mut holdout) = (Vec::new(), Vec::new());
        for (i, seq) in self.sequences.iter().enumerate() {
            if in_training[i] {
                train.push(seq.clone());
            } else {
                holdout.push(seq.clone());
            }
        }
        Ok((
            Corpus::from_sequences(train, Arc::clone(&self.vocab))?,
            Corpus::from_sequences(holdout, Arc::clone(&self.vocab))?,
        ))
    }

    /// Summary statistics in the shape of the usual dataset tables.
    pub fn stats(&self) -> CorpusStats {
        let rows: u64 = self.sequences.iter().map(|s| s.len() as u64).sum();
        let users = self.sequences.len() as u64;
        let actions = self.attempts.iter().filter(|&&n| n > 0).count() as u64;

        let mut lengths: Vec<u64> = self.sequences.iter().map(|s| s.len() as u64).collect();
        lengths.sort_unstable();

        // Per user: occurrence count per distinct action; then the lower
        // median of those counts, and their max. Aggregate the medians by a
        // lower median across users and the maxes by a max.
        let mut user_medians = Vec::with_capacity(self.sequences.len());
        let mut repeats_max = 0u64;
        let mut counts: HashMap<u32, u64> = HashMap::new();
        for seq in &self.sequences {
            counts.clear();
            for &a in &seq.actions {
                *counts.entry(a).or_insert(0) += 1;
            }
            let mut per_action: Vec<u64> = counts.values().copied().collect();
            per_action.sort_unstable();
            user_medians.push(lower_median(&per_action));
            repeats_max = repeats_max.max(*per_action.last().unwrap());
        }
        user_medians.sort_unstable();

        CorpusStats {
            rows,
            users,
            actions,
            repeats_median: lower_median(&user_medians),
            repeats_max,
            seq_len_min: lengths[0],
            seq_len_median: lower_median(&lengths),
            seq_len_max: *lengths.last().unwrap(),
        }
    }

    pub fn sequences(&self) -> &[UserSequence] {
        &self.sequences
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn n_users(&self) -> usize {
        self.sequences.len()
    }

    pub fn n_rows(&self) -> u64 {
        self.sequences.iter().map(|s| s.len() as u64).sum()
    }

    /// Number of records containing the action at `idx`.
    pub fn attempts(&self, idx: u32) -> u64 {
        self.attempts[idx as usize]
    }

    /// Number of successful records containing the action at `idx`.
    pub fn successes(&self, idx: u32) -> u64 {
        self.successes[idx as usize]
    }

    pub fn user_ids(&self) -> impl Iterator<Item = &str> {
        self.sequences.iter().map(|s| s.user_id.as_str())
    }

    /// Flatten the corpus into rows (original order).
    pub fn records(&self) -> impl Iterator<Item = InteractionRecord> + '_ {
        self.sequences.iter().flat_map(move |seq| {
            seq.actions
                .iter()
                .zip(&seq.outcomes)
                .map(move |(&a, &r)| InteractionRecord {
                    user_id: seq.user_id.clone(),
                    action_id: self.vocab.name(a).to_string(),
                    outcome: r,
                })
        })
    }
}

/// Lower median of a sorted, non-empty slice.
fn lower_median(sorted: &[u64]) -> u64 {
    sorted[(sorted.len() - 1) / 2]
}

fn csv_line(e: &csv::Error) -> Option<u64> {
    match e.kind() {
        csv::ErrorKind::Utf8 { pos, .. } => pos.as_ref().map(|p| p.line()),
        csv::ErrorKind::UnequalLengths { pos, .. } => pos.as_ref().map(|p| p.line()),
        _ => None,
    }
}

fn csv_error(e: csv::Error, line: u64, context: &str) -> Error {
    Error::MalformedRow {
        line,
        message: format!("{context}: {e}"),
    }
}

fn write_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidArgument(format!("csv write failed: {other:?}")),
    }
}

/// Flat statistics record, serialized as a single-level JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub rows: u64,
    pub users: u64,
    pub actions: u64,
    pub repeats_median: u64,
    pub repeats_max: u64,
    pub seq_len_min: u64,
    pub seq_len_median: u64,
    pub seq_len_max: u64,
}
