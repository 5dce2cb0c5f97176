//! Loading, boilerplate removal, heading removal, normalization and word
//! tokenization of plain-text documents.

use std::fs;
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// One step recorded while turning a raw file into an analyzable document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub step: String,
    pub count: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl LogEntry {
    fn new(step: &str, count: usize) -> Self {
        LogEntry {
            step: step.to_owned(),
            count,
            detail: String::new(),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// A decoded input file, possibly with its distribution boilerplate removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub source_id: String,
    pub content: String,
    pub byte_length: usize,
    /// Steps already applied (boilerplate stripping); carried into the clean
    /// document's log.
    pub provenance: Vec<LogEntry>,
}

impl RawDocument {
    fn with_content(&self, content: String, entry: LogEntry) -> RawDocument {
        let mut provenance = self.provenance.clone();
        provenance.push(entry);
        RawDocument {
            source_id: self.source_id.clone(),
            byte_length: content.len(),
            content,
            provenance,
        }
    }
}

/// Text every analysis consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanDocument {
    pub source_id: String,
    pub content: String,
    pub normalization_log: Vec<LogEntry>,
}

impl CleanDocument {
    /// Wrap already-clean text, e.g. for tests and synthetic inputs.
    pub fn from_text(source_id: impl Into<String>, content: impl Into<String>) -> Self {
        CleanDocument {
            source_id: source_id.into(),
            content: content.into(),
            normalization_log: Vec::new(),
        }
    }

    /// Length in Unicode scalar values.
    pub fn char_len(&self) -> usize {
        self.content.chars().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub folded: String,
    pub ordinal: usize,
}

pub fn load_document_bytes(bytes: &[u8], source_id: &str) -> Result<RawDocument> {
    if bytes.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let content = std::str::from_utf8(bytes).map_err(|e| Error::Decode {
        offset: e.valid_up_to(),
    })?;
    // A leading byte-order mark is an encoding artifact, not text.
    let content = content.strip_prefix('\u{feff}').unwrap_or(content);
    Ok(RawDocument {
        source_id: source_id.to_owned(),
        byte_length: content.len(),
        content: content.to_owned(),
        provenance: Vec::new(),
    })
}

/// Read a file; `source_id` defaults to the file stem.
pub fn load_document(path: &Path, source_id: Option<&str>) -> Result<RawDocument> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let id = match source_id {
        Some(id) => id.to_owned(),
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "document".to_owned()),
    };
    load_document_bytes(&bytes, &id)
}

pub const DEFAULT_START_MARKER: &str =
    r"(?i)^\s*\*{3}\s*START OF (THE|THIS) PROJECT GUTENBERG E-?BOOK";
pub const DEFAULT_END_MARKER: &str = r"(?i)^\s*\*{3}\s*END OF (THE|THIS) PROJECT GUTENBERG E-?BOOK";

pub const DEFAULT_HEADING_PATTERNS: &[&str] = &[
    r"^\s*CHAPTER\s+(?:[IVXLCDM]+|\d+)\b.*$",
    r"^\s*(?:ĈAPITRO|CXAPITRO|CHAPITRO)\b.*$",
];

fn compile(pattern: &str) -> Result<Regex> {
    Regex::new(pattern).map_err(|source| Error::Pattern {
        pattern: pattern.to_owned(),
        source,
    })
}

/// Line-level patterns delimiting the body of a distribution file.
#[derive(Debug, Clone)]
pub struct MarkerConfig {
    start: Regex,
    end: Regex,
}

impl MarkerConfig {
    pub fn new(start: &str, end: &str) -> Result<Self> {
        Ok(MarkerConfig {
            start: compile(start)?,
            end: compile(end)?,
        })
    }

    pub fn start_pattern(&self) -> &str {
        self.start.as_str()
    }

    pub fn end_pattern(&self) -> &str {
        self.end.as_str()
    }
}

impl Default for MarkerConfig {
    fn default() -> Self {
        MarkerConfig::new(DEFAULT_START_MARKER, DEFAULT_END_MARKER)
            .expect("default markers compile")
    }
}

/// Iterate `(byte_offset, line_without_terminator, line_with_terminator)`.
fn lines_with_offsets(text: &str) -> impl Iterator<Item = (usize, &str, &str)> {
    let mut offset = 0;
    text.split_inclusive('\n').map(move |full| {
        let start = offset;
        offset += full.len();
        let bare = full.strip_suffix('\n').unwrap_or(full);
        let bare = bare.strip_suffix('\r').unwrap_or(bare);
        (start, bare, full)
    })
}

/// Keep only the text strictly between the first start-marker line and the
/// first end-marker line after it.
pub fn strip_boilerplate(doc: &RawDocument, markers: &MarkerConfig) -> Result<RawDocument> {
    let mut body_start = None;
    let mut body_end = None;
    let mut end_before_start = false;
    for (offset, line, full) in lines_with_offsets(&doc.content) {
        match body_start {
            None if markers.start.is_match(line) => body_start = Some(offset + full.len()),
            None if markers.end.is_match(line) => end_before_start = true,
            Some(_) if markers.end.is_match(line) => {
                body_end = Some(offset);
                break;
            }
            _ => {}
        }
    }
    match (body_start, body_end) {
        (None, None) if !end_before_start => Ok(doc.with_content(
            doc.content.clone(),
            LogEntry::new("strip-boilerplate", 0).with_detail("no markers"),
        )),
        (Some(start), Some(end)) => {
            let body = doc.content[start..end].to_owned();
            let removed = doc.content.len() - body.len();
            Ok(doc.with_content(
                body,
                LogEntry::new("strip-boilerplate", removed).with_detail("bytes removed"),
            ))
        }
        (Some(_), None) => Err(Error::UnbalancedMarkers(
            "start marker without a following end marker".into(),
        )),
        _ => Err(Error::UnbalancedMarkers(
            "end marker without a preceding start marker".into(),
        )),
    }
}

/// Line patterns identifying chapter headings.
#[derive(Debug, Clone)]
pub struct HeadingPatterns {
    patterns: Vec<Regex>,
}

impl HeadingPatterns {
    pub fn new<S: AsRef<str>>(patterns: &[S]) -> Result<Self> {
        let patterns = patterns
            .iter()
            .map(|p| compile(p.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(HeadingPatterns { patterns })
    }

    /// No patterns at all; heading removal becomes a logged no-op.
    pub fn none() -> Self {
        HeadingPatterns {
            patterns: Vec::new(),
        }
    }

    pub fn patterns(&self) -> impl Iterator<Item = &str> {
        self.patterns.iter().map(Regex::as_str)
    }

    pub fn matches(&self, line: &str) -> bool {
        if self.patterns.is_empty() {
            return false;
        }
        let composed: String = line.nfc().collect();
        self.patterns.iter().any(|p| p.is_match(&composed))
    }
}

impl Default for HeadingPatterns {
    fn default() -> Self {
        HeadingPatterns::new(DEFAULT_HEADING_PATTERNS).expect("default heading patterns compile")
    }
}

/// Remove every line (with its newline) that matches a heading pattern.
pub fn strip_chapter_heads(doc: &RawDocument, headings: &HeadingPatterns) -> CleanDocument {
    let mut content = String::with_capacity(doc.content.len());
    let mut removed = 0;
    for (_, line, full) in lines_with_offsets(&doc.content) {
        if headings.matches(line) {
            removed += 1;
        } else {
            content.push_str(full);
        }
    }
    let mut normalization_log = doc.provenance.clone();
    normalization_log
        .push(LogEntry::new("strip-chapter-heads", removed).with_detail("lines removed"));
    CleanDocument {
        source_id: doc.source_id.clone(),
        content,
        normalization_log,
    }
}

/// Independent switches for [`normalize_text`]; all on by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormalizeOptions {
    pub compose: bool,
    pub remove_carriage_returns: bool,
    pub newlines_to_blanks: bool,
    pub collapse_blanks: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            compose: true,
            remove_carriage_returns: true,
            newlines_to_blanks: true,
            collapse_blanks: true,
        }
    }
}

const X_SYSTEM_DIGRAPHS: [&str; 6] = ["cx", "gx", "hx", "jx", "sx", "ux"];

fn count_x_digraphs(text: &str) -> usize {
    let lower = text.to_lowercase();
    X_SYSTEM_DIGRAPHS
        .iter()
        .map(|d| lower.matches(d).count())
        .sum()
}

pub fn normalize_text(doc: &CleanDocument, options: &NormalizeOptions) -> CleanDocument {
    let mut log = doc.normalization_log.clone();
    let mut text = doc.content.clone();

    if options.compose {
        let before = text.chars().count();
        let composed: String = text.nfc().collect();
        let count = before - composed.chars().count();
        // Already-composed input with nothing to merge still counts as applied.
        log.push(LogEntry::new("nfc-compose", count).with_detail("scalars merged"));
        text = composed;
    }
    if options.remove_carriage_returns {
        let count = text.matches('\r').count();
        text.retain(|c| c != '\r');
        log.push(LogEntry::new("remove-carriage-returns", count));
    }
    if options.newlines_to_blanks {
        let count = text.matches('\n').count();
        text = text.replace('\n', " ");
        log.push(LogEntry::new("newlines-to-blanks", count));
    }
    if options.collapse_blanks {
        let mut out = String::with_capacity(text.len());
        let mut count = 0;
        let mut prev_blank = false;
        for c in text.chars() {
            let blank = c == ' ';
            if blank && prev_blank {
                count += 1;
                continue;
            }
            prev_blank = blank;
            out.push(c);
        }
        log.push(LogEntry::new("collapse-blanks", count).with_detail("blanks removed"));
        text = out;
    }

    let digraphs = count_x_digraphs(&text);
    if digraphs > 0 {
        log::warn!(
            "{}: {digraphs} x-system digraphs (cx gx hx jx sx ux) found; they inflate character counts",
            doc.source_id
        );
        log.push(LogEntry::new("warning-x-system-digraphs", digraphs));
    }

    CleanDocument {
        source_id: doc.source_id.clone(),
        content: text,
        normalization_log: log,
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Split into words: maximal runs of letters and digits, with an apostrophe
/// kept only when a letter sits on both sides of it.
pub fn tokenize_words(doc: &CleanDocument) -> Vec<Token> {
    let chars: Vec<char> = doc.content.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        let internal_apostrophe = is_apostrophe(c)
            && !current.is_empty()
            && chars[i - 1].is_alphabetic()
            && chars.get(i + 1).is_some_and(|n| n.is_alphabetic());
        if c.is_alphanumeric() || internal_apostrophe {
            current.push(c);
        } else if !current.is_empty() {
            push_token(&mut tokens, std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        push_token(&mut tokens, current);
    }
    tokens
}

fn push_token(tokens: &mut Vec<Token>, surface: String) {
    let folded = caseless::default_case_fold_str(&surface);
    let ordinal = tokens.len();
    tokens.push(Token {
        surface,
        folded,
        ordinal,
    });
}

/// Settings for the whole cleaning stage.
#[derive(Debug, Clone, Default)]
pub struct CleaningConfig {
    /// `None` skips boilerplate removal entirely.
    pub markers: Option<MarkerConfig>,
    pub headings: HeadingPatterns,
    pub normalize: NormalizeOptions,
}

impl CleaningConfig {
    pub fn standard() -> Self {
        CleaningConfig {
            markers: Some(MarkerConfig::default()),
            ..Default::default()
        }
    }
}

/// Boilerplate, headings, normalization.
pub fn clean(raw: &RawDocument, config: &CleaningConfig) -> Result<CleanDocument> {
    let body = match &config.markers {
        Some(markers) => strip_boilerplate(raw, markers)?,
        None => raw.clone(),
    };
    let headless = strip_chapter_heads(&body, &config.headings);
    Ok(normalize_text(&headless, &config.normalize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(text: &str) -> RawDocument {
        load_document_bytes(text.as_bytes(), "t").unwrap()
    }

    #[test]
    fn load_passes_content_through() {
        let doc = raw("Alice.");
        assert_eq!(doc.content, "Alice.");
        assert_eq!(doc.byte_length, 6);
    }

    #[test]
    fn load_reports_offset_of_invalid_bytes() {
        let mut bytes = b"Hello world!".to_vec();
        bytes.extend_from_slice(&[0xFF, 0xFE]);
        match load_document_bytes(&bytes, "bad") {
            Err(Error::Decode { offset }) => assert_eq!(offset, 12),
            other => panic!("expected decode error, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_empty_input() {
        assert!(matches!(
            load_document_bytes(b"", "e"),
            Err(Error::EmptyDocument)
        ));
    }

    #[test]
    fn byte_length_counts_utf8_width() {
        let doc = raw("ŝi");
        assert_eq!(doc.byte_length, 3);
    }

    const START: &str = "*** START OF THE PROJECT GUTENBERG EBOOK ALICE ***";
    const END: &str = "*** END OF THE PROJECT GUTENBERG EBOOK ALICE ***";

    #[test]
    fn boilerplate_between_markers_is_kept() {
        let text = format!("License header\n{START}\nB\n{END}\nfooter\n");
        let out = strip_boilerplate(&raw(&text), &MarkerConfig::default()).unwrap();
        assert_eq!(out.content, "B\n");
        assert_eq!(out.byte_length, 2);

        let text = format!("{START}\r\nB{END}\n");
        // The end marker must start its own line.
        assert!(strip_boilerplate(&raw(&text), &MarkerConfig::default()).is_err());
    }

    #[test]
    fn boilerplate_absent_is_identity() {
        let out = strip_boilerplate(&raw("just text\n"), &MarkerConfig::default()).unwrap();
        assert_eq!(out.content, "just text\n");
        assert_eq!(out.provenance.last().unwrap().detail, "no markers");
    }

    #[test]
    fn boilerplate_unbalanced_is_an_error() {
        let start_only = format!("{START}\nbody\n");
        let end_only = format!("body\n{END}\n");
        for text in [start_only, end_only] {
            assert!(matches!(
                strip_boilerplate(&raw(&text), &MarkerConfig::default()),
                Err(Error::UnbalancedMarkers(_))
            ));
        }
    }

    #[test]
    fn chapter_heads_are_removed_with_their_newline() {
        let doc = raw("CHAPTER I. Down the Rabbit-Hole\nAlice was beginning\n");
        let clean = strip_chapter_heads(&doc, &HeadingPatterns::default());
        assert_eq!(clean.content, "Alice was beginning\n");
        assert_eq!(clean.normalization_log.last().unwrap().count, 1);
    }

    #[test]
    fn chapter_head_variants() {
        let h = HeadingPatterns::default();
        assert!(h.matches("                            CHAPTER XII"));
        assert!(h.matches("CHAPTER 3"));
        assert!(h.matches("ĈAPITRO I. Malsupren en la kuniklo-truon"));
        // Decomposed Ĉ still matches after composition.
        assert!(h.matches("C\u{302}APITRO II"));
        assert!(!h.matches("The chapter ended."));
        assert!(!h.matches("CHAPTERS of life"));
    }

    #[test]
    fn no_heads_means_identity_with_zero_logged() {
        let clean = strip_chapter_heads(&raw("plain\ntext"), &HeadingPatterns::default());
        assert_eq!(clean.content, "plain\ntext");
        assert_eq!(clean.normalization_log.last().unwrap().count, 0);
    }

    #[test]
    fn normalization_examples() {
        let opts = NormalizeOptions::default();
        let n = |s: &str| normalize_text(&CleanDocument::from_text("t", s), &opts).content;
        assert_eq!(n("a\r\nb"), "a b");
        assert_eq!(n("a  \n b"), "a b");
        assert_eq!(n("s\u{302}i"), "ŝi");
    }

    #[test]
    fn composition_only_leaves_digraphs_alone() {
        let opts = NormalizeOptions {
            compose: true,
            remove_carriage_returns: false,
            newlines_to_blanks: false,
            collapse_blanks: false,
        };
        let out = normalize_text(&CleanDocument::from_text("t", "sxi"), &opts);
        assert_eq!(out.content, "sxi");
        assert_eq!(out.normalization_log.len(), 2);
        assert_eq!(out.normalization_log[1].step, "warning-x-system-digraphs");
    }

    #[test]
    fn normalization_logs_one_entry_per_enabled_transform() {
        let out = normalize_text(
            &CleanDocument::from_text("t", "a\r\n\r\nb"),
            &NormalizeOptions::default(),
        );
        let steps: Vec<_> = out
            .normalization_log
            .iter()
            .map(|e| (e.step.as_str(), e.count))
            .collect();
        assert_eq!(
            steps,
            [
                ("nfc-compose", 0),
                ("remove-carriage-returns", 2),
                ("newlines-to-blanks", 2),
                ("collapse-blanks", 1)
            ]
        );
    }

    #[test]
    fn tokenization_examples() {
        let toks = tokenize_words(&CleanDocument::from_text("t", "Alice's cat, the cat."));
        let surfaces: Vec<_> = toks.iter().map(|t| t.surface.as_str()).collect();
        let folded: Vec<_> = toks.iter().map(|t| t.folded.as_str()).collect();
        assert_eq!(surfaces, ["Alice's", "cat", "the", "cat"]);
        assert_eq!(folded, ["alice's", "cat", "the", "cat"]);
        assert_eq!(
            toks.iter().map(|t| t.ordinal).collect::<Vec<_>>(),
            [0, 1, 2, 3]
        );

        assert!(tokenize_words(&CleanDocument::from_text("t", "!!! ???")).is_empty());

        let eo = tokenize_words(&CleanDocument::from_text("t", "ŝi diris"));
        assert_eq!(
            eo.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>(),
            ["ŝi", "diris"]
        );
    }

    #[test]
    fn quotes_around_words_are_separators() {
        let toks = tokenize_words(&CleanDocument::from_text(
            "t",
            "`a book,' 'tis rock'n'roll 'x'",
        ));
        let surfaces: Vec<_> = toks.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(surfaces, ["a", "book", "tis", "rock'n'roll", "x"]);
    }

    #[test]
    fn full_case_folding() {
        let toks = tokenize_words(&CleanDocument::from_text("t", "Straße STRASSE"));
        assert_eq!(toks[0].folded, toks[1].folded);
    }
}
