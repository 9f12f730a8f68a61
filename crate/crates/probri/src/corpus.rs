//! Text ingestion: cleaning, tokenization, stopword removal, and grouping
//! into labeled time slices.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

/// Default stopword list shipped with the crate (one word per line,
/// `#` comments allowed).
pub const DEFAULT_STOPWORDS: &str = include_str!("../assets/english_stopwords.txt");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("bad JSON record at {path}:{line}: {message}")]
    Json {
        path: PathBuf,
        line: u64,
        message: String,
    },
}

/// Stopword set for the order-preserving token filter.
#[derive(Debug, Clone, Default)]
pub struct StopwordSet {
    words: HashSet<String>,
}

impl StopwordSet {
    /// Parse from text: one word per line, blank lines and `#` comments
    /// skipped.
    pub fn from_text(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_lowercase())
            .collect();
        Self { words }
    }

    /// The shipped English list.
    pub fn english() -> Self {
        Self::from_text(DEFAULT_STOPWORDS)
    }

    pub fn from_file(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path).map_err(|source| {
            CorpusError::Config(format!(
                "stopword file {} unreadable: {source}",
                path.display()
            ))
        })?;
        Ok(Self::from_text(&text))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Clean raw text:
/// 1. lowercase;
/// 2. drop whitespace-delimited spans containing `http` or `.com`, and
///    spans starting with `@`, each together with one following whitespace
///    character;
/// 3. replace ASCII punctuation with a space, keeping apostrophes flanked
///    by alphanumerics on both sides.
///
/// Untouched whitespace is preserved, so the function is idempotent.
pub fn clean(text: &str) -> String {
    let lower = text.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();

    // Pass 1: span filter.
    let mut filtered = String::with_capacity(lower.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            filtered.push(chars[i]);
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        let span: String = chars[start..i].iter().collect();
        if span.contains("http") || span.contains(".com") || span.starts_with('@') {
            // swallow one following whitespace char so surrounding spacing
            // stays as it would look without the span
            if i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
        } else {
            filtered.push_str(&span);
        }
    }

    // Pass 2: punctuation to spaces, internal apostrophes kept.
    let fchars: Vec<char> = filtered.chars().collect();
    let mut out = String::with_capacity(filtered.len());
    for (i, &c) in fchars.iter().enumerate() {
        if c.is_ascii_punctuation() {
            let internal_apostrophe = c == '\''
                && i > 0
                && fchars[i - 1].is_alphanumeric()
                && i + 1 < fchars.len()
                && fchars[i + 1].is_alphanumeric();
            out.push(if internal_apostrophe { c } else { ' ' });
        } else {
            out.push(c);
        }
    }
    out
}

/// Split cleaned text on whitespace runs.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

/// Order-preserving stopword filter.
pub fn remove_stopwords(tokens: Vec<String>, stopwords: &StopwordSet) -> Vec<String> {
    tokens
        .into_iter()
        .filter(|t| !stopwords.contains(t))
        .collect()
}

/// A raw input document with its time-slice label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub text: String,
    pub slice_label: String,
}

/// A cleaned, tokenized, stopword-filtered document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDocument {
    pub tokens: Vec<String>,
    pub slice_label: String,
}

/// All documents of one time slice plus its vocabulary statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSlice {
    label: String,
    documents: Vec<TokenizedDocument>,
    /// Distinct tokens in first-occurrence order.
    vocab_order: Vec<String>,
    counts: HashMap<String, u64>,
    total_tokens: u64,
}

impl CorpusSlice {
    fn new(label: String) -> Self {
        Self {
            label,
            documents: Vec::new(),
            vocab_order: Vec::new(),
            counts: HashMap::new(),
            total_tokens: 0,
        }
    }

    fn push_document(&mut self, tokens: Vec<String>) {
        for t in &tokens {
            match self.counts.get_mut(t) {
                Some(c) => *c += 1,
                None => {
                    self.counts.insert(t.clone(), 1);
                    self.vocab_order.push(t.clone());
                }
            }
            self.total_tokens += 1;
        }
        self.documents.push(TokenizedDocument {
            tokens,
            slice_label: self.label.clone(),
        });
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn documents(&self) -> &[TokenizedDocument] {
        &self.documents
    }

    /// Distinct tokens in first-occurrence order.
    pub fn vocabulary(&self) -> &[String] {
        &self.vocab_order
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_order.len()
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }
}

/// Ordered collection of labeled slices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TimeSlicedCorpus {
    slices: Vec<CorpusSlice>,
}

impl TimeSlicedCorpus {
    /// Assemble directly from pre-tokenized documents, in label order of
    /// first appearance. Used by synthetic corpora and tests.
    pub fn from_token_documents<L, I, D>(docs: I) -> Self
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, D)>,
        D: IntoIterator<Item = String>,
    {
        let mut corpus = TimeSlicedCorpus::default();
        for (label, tokens) in docs {
            let label = label.into();
            let slice = corpus.slice_mut_or_insert(&label);
            slice.push_document(tokens.into_iter().collect());
        }
        corpus
    }

    fn slice_mut_or_insert(&mut self, label: &str) -> &mut CorpusSlice {
        if let Some(pos) = self.slices.iter().position(|s| s.label == label) {
            &mut self.slices[pos]
        } else {
            self.slices.push(CorpusSlice::new(label.to_string()));
            self.slices.last_mut().unwrap()
        }
    }

    pub fn slices(&self) -> &[CorpusSlice] {
        &self.slices
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.slices.iter().map(|s| s.label.as_str())
    }

    pub fn slice(&self, label: &str) -> Option<&CorpusSlice> {
        self.slices.iter().find(|s| s.label == label)
    }

    /// Union vocabulary across slices, first occurrence first, slices in
    /// order.
    pub fn union_vocabulary(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for slice in &self.slices {
            for w in &slice.vocab_order {
                if seen.insert(w.clone()) {
                    out.push(w.clone());
                }
            }
        }
        out
    }
}

/// Ingest outcome: the corpus plus counters for skipped input.
#[derive(Debug)]
pub struct IngestReport {
    pub corpus: TimeSlicedCorpus,
    /// Lines dropped because they were not valid UTF-8.
    pub skipped_lines: u64,
}

/// Run the cleaning pipeline over in-memory documents. Documents that are
/// empty after trimming are skipped; documents whose tokens are all
/// stopwords are kept as empty documents.
pub fn ingest_documents(docs: Vec<RawDocument>, stopwords: &StopwordSet) -> TimeSlicedCorpus {
    let mut corpus = TimeSlicedCorpus::default();
    for doc in docs {
        if doc.text.trim().is_empty() {
            continue;
        }
        let tokens = remove_stopwords(tokenize(&clean(&doc.text)), stopwords);
        corpus
            .slice_mut_or_insert(&doc.slice_label)
            .push_document(tokens);
    }
    corpus
}

/// Ingest plain-text files, one document per line, each file carrying its
/// slice label. Slices appear in input order; non-UTF-8 lines are counted
/// and skipped.
pub fn ingest_lines(
    inputs: &[(String, PathBuf)],
    stopwords: &StopwordSet,
) -> Result<IngestReport, CorpusError> {
    let mut docs = Vec::new();
    let mut skipped = 0u64;
    for (label, path) in inputs {
        let file = File::open(path).map_err(|source| CorpusError::Io {
            path: path.clone(),
            source,
        })?;
        let reader = BufReader::new(file);
        for raw in reader.split(b'\n') {
            let raw = raw.map_err(|source| CorpusError::Io {
                path: path.clone(),
                source,
            })?;
            match String::from_utf8(raw) {
                Ok(text) => docs.push(RawDocument {
                    text,
                    slice_label: label.clone(),
                }),
                Err(_) => skipped += 1,
            }
        }
    }
    Ok(IngestReport {
        corpus: ingest_documents(docs, stopwords),
        skipped_lines: skipped,
    })
}

#[derive(Deserialize)]
struct JsonRecord {
    text: String,
    slice: String,
}

/// Ingest a JSON-lines file with `{"text": ..., "slice": ...}` records.
pub fn ingest_jsonl(path: &Path, stopwords: &StopwordSet) -> Result<IngestReport, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut docs = Vec::new();
    let mut skipped = 0u64;
    for (lineno, raw) in reader.split(b'\n').enumerate() {
        let raw = raw.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let text = match String::from_utf8(raw) {
            Ok(t) => t,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        if text.trim().is_empty() {
            continue;
        }
        let record: JsonRecord = serde_json::from_str(&text).map_err(|e| CorpusError::Json {
            path: path.to_path_buf(),
            line: lineno as u64 + 1,
            message: e.to_string(),
        })?;
        docs.push(RawDocument {
            text: record.text,
            slice_label: record.slice,
        });
    }
    Ok(IngestReport {
        corpus: ingest_documents(docs, stopwords),
        skipped_lines: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn clean_removes_urls_mentions_and_punctuation() {
        assert_eq!(
            clean("Check http://t.co/x @user #launch!"),
            "check  launch "
        );
        assert_eq!(clean("iPhone X, new!"), "iphone x  new ");
        assert_eq!(clean(""), "");
    }

    #[test]
    fn clean_keeps_internal_apostrophes() {
        assert_eq!(clean("don't stop"), "don't stop");
        assert_eq!(clean("'quoted'"), " quoted ");
        assert_eq!(clean("rock'n'roll"), "rock'n'roll");
    }

    #[test]
    fn clean_catches_com_and_uppercase_urls() {
        assert_eq!(clean("see example.com now"), "see now");
        assert_eq!(clean("HTTP://X.Y"), "");
    }

    #[test]
    fn tokenize_splits_on_whitespace_runs() {
        assert_eq!(tokenize("check  launch "), vec!["check", "launch"]);
        assert_eq!(tokenize("a  b   c"), vec!["a", "b", "c"]);
        assert!(tokenize("   ").is_empty());
    }

    #[test]
    fn stopword_filter_preserves_order() {
        let stop = StopwordSet::english();
        let toks = vec!["the", "virus", "is", "new"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(remove_stopwords(toks, &stop), vec!["virus", "new"]);
        assert!(remove_stopwords(vec![], &stop).is_empty());
        let keep: Vec<String> = vec!["virus".into(), "new".into()];
        assert_eq!(remove_stopwords(keep.clone(), &stop), keep);
    }

    #[test]
    fn ingest_groups_by_label() {
        let stop = StopwordSet::english();
        let docs = vec![
            RawDocument {
                text: "The virus spreads fast".into(),
                slice_label: "pre".into(),
            },
            RawDocument {
                text: "a new virus variant".into(),
                slice_label: "pre".into(),
            },
            RawDocument {
                text: "vaccine works".into(),
                slice_label: "post".into(),
            },
        ];
        let corpus = ingest_documents(docs, &stop);
        assert_eq!(corpus.labels().collect::<Vec<_>>(), vec!["pre", "post"]);
        let pre = corpus.slice("pre").unwrap();
        assert_eq!(pre.documents().len(), 2);
        assert_eq!(pre.count("virus"), 2);
        assert_eq!(
            pre.total_tokens(),
            pre.documents()
                .iter()
                .map(|d| d.tokens.len() as u64)
                .sum::<u64>()
        );
    }

    #[test]
    fn all_stopword_document_stays_as_empty_document() {
        let stop = StopwordSet::english();
        let docs = vec![RawDocument {
            text: "the and of".into(),
            slice_label: "pre".into(),
        }];
        let corpus = ingest_documents(docs, &stop);
        let pre = corpus.slice("pre").unwrap();
        assert_eq!(pre.documents().len(), 1);
        assert!(pre.documents()[0].tokens.is_empty());
        assert_eq!(pre.vocab_size(), 0);
    }

    #[test]
    fn ingest_lines_reads_files_and_counts_bad_utf8() {
        let dir = tempfile::tempdir().unwrap();
        let pre = dir.path().join("pre.txt");
        std::fs::write(&pre, b"The virus spreads\nvaccines help\n\xff\xfe broken\n").unwrap();
        let post = dir.path().join("post.txt");
        std::fs::write(&post, "corona virus outbreak\n").unwrap();
        let stop = StopwordSet::english();
        let report = ingest_lines(
            &[("pre".to_string(), pre), ("post".to_string(), post)],
            &stop,
        )
        .unwrap();
        assert_eq!(report.skipped_lines, 1);
        assert_eq!(
            report.corpus.labels().collect::<Vec<_>>(),
            vec!["pre", "post"]
        );
        assert_eq!(report.corpus.slice("pre").unwrap().documents().len(), 2);

        let missing = dir.path().join("nope.txt");
        let err = ingest_lines(&[("x".to_string(), missing.clone())], &stop).unwrap_err();
        assert!(err.to_string().contains("nope.txt"));
    }

    #[test]
    fn ingest_jsonl_reads_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("docs.jsonl");
        std::fs::write(
            &path,
            r#"{"text": "The virus spreads", "slice": "pre"}
{"text": "corona outbreak", "slice": "post"}
"#,
        )
        .unwrap();
        let report = ingest_jsonl(&path, &StopwordSet::english()).unwrap();
        assert_eq!(
            report.corpus.labels().collect::<Vec<_>>(),
            vec!["pre", "post"]
        );

        std::fs::write(&path, "{broken\n").unwrap();
        assert!(matches!(
            ingest_jsonl(&path, &StopwordSet::english()),
            Err(CorpusError::Json { line: 1, .. })
        ));
    }

    #[test]
    fn stopword_file_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stop.txt");
        std::fs::write(&path, "# comment\nthe\n\nAND\n").unwrap();
        let s = StopwordSet::from_file(&path).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains("and"));
        assert!(StopwordSet::from_file(&dir.path().join("missing.txt")).is_err());
    }

    proptest! {
        #[test]
        fn clean_is_idempotent(text in "\\PC{0,120}") {
            let once = clean(&text);
            prop_assert_eq!(clean(&once), once);
        }

        #[test]
        fn vocabulary_counts_conserve_tokens(
            docs in proptest::collection::vec(
                proptest::collection::vec("[a-f]{1,3}", 0..8),
                1..6,
            )
        ) {
            let corpus = TimeSlicedCorpus::from_token_documents(
                docs.into_iter().map(|d| ("s".to_string(), d)),
            );
            let slice = corpus.slice("s").unwrap();
            let by_counts: u64 = slice.vocabulary().iter().map(|w| slice.count(w)).sum();
            let by_docs: u64 = slice.documents().iter().map(|d| d.tokens.len() as u64).sum();
            prop_assert_eq!(by_counts, by_docs);
            prop_assert_eq!(by_counts, slice.total_tokens());
        }
    }
}
