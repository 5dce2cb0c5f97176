//! Punctuation-delimited segments and their character lengths.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::CleanDocument;

/// A set of punctuation marks that close a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkClass {
    Dot,
    Comma,
    Colon,
    Semicolon,
    #[serde(rename = "exclam")]
    Exclamation,
    Question,
    /// Dot, semicolon, exclamation and question marks together.
    #[serde(rename = "unit")]
    UnitOfThought,
}

impl MarkClass {
    pub const ALL: [MarkClass; 7] = [
        MarkClass::Dot,
        MarkClass::Comma,
        MarkClass::Colon,
        MarkClass::Semicolon,
        MarkClass::Exclamation,
        MarkClass::Question,
        MarkClass::UnitOfThought,
    ];

    pub const SINGLE: [MarkClass; 6] = [
        MarkClass::Dot,
        MarkClass::Comma,
        MarkClass::Colon,
        MarkClass::Semicolon,
        MarkClass::Exclamation,
        MarkClass::Question,
    ];

    pub fn terminators(self) -> &'static [char] {
        match self {
            MarkClass::Dot => &['.'],
            MarkClass::Comma => &[','],
            MarkClass::Colon => &[':'],
            MarkClass::Semicolon => &[';'],
            MarkClass::Exclamation => &['!'],
            MarkClass::Question => &['?'],
            MarkClass::UnitOfThought => &['.', ';', '!', '?'],
        }
    }

    pub fn is_terminator(self, c: char) -> bool {
        self.terminators().contains(&c)
    }

    /// Whether a run of dots closes a single segment.
    fn collapses_dot_runs(self) -> bool {
        matches!(self, MarkClass::Dot | MarkClass::UnitOfThought)
    }

    /// Name used on the command line and in output file names.
    pub fn name(self) -> &'static str {
        match self {
            MarkClass::Dot => "dot",
            MarkClass::Comma => "comma",
            MarkClass::Colon => "colon",
            MarkClass::Semicolon => "semicolon",
            MarkClass::Exclamation => "exclam",
            MarkClass::Question => "question",
            MarkClass::UnitOfThought => "unit",
        }
    }
}

impl fmt::Display for MarkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MarkClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MarkClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown mark class `{s}`"))
    }
}

/// A trimmed span between two terminators of one class.
///
/// `start` and `end` are scalar-value offsets into the document content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub ordinal: usize,
    pub start: usize,
    pub end: usize,
    pub terminator: Option<char>,
    pub length_chars: usize,
}

impl Segment {
    pub fn text(&self, doc: &CleanDocument) -> String {
        doc.content
            .chars()
            .skip(self.start)
            .take(self.end - self.start)
            .collect()
    }
}

pub fn segment_length(segment: &Segment) -> usize {
    segment.length_chars
}

fn is_blank(c: char) -> bool {
    c.is_whitespace()
}

pub fn split_by_mark(doc: &CleanDocument, class: MarkClass) -> Vec<Segment> {
    let chars: Vec<char> = doc.content.chars().collect();
    split_chars(&chars, class)
}

pub(crate) fn split_chars(chars: &[char], class: MarkClass) -> Vec<Segment> {
    let mut segments = Vec::new();
    let mut emit = |from: usize, to: usize, terminator: Option<char>| {
        let span = &chars[from..to];
        let Some(first) = span.iter().position(|&c| !is_blank(c)) else {
            return;
        };
        let last = span.iter().rposition(|&c| !is_blank(c)).unwrap_or(first);
        let (start, end) = (from + first, from + last + 1);
        segments.push(Segment {
            ordinal: segments.len(),
            start,
            end,
            terminator,
            length_chars: end - start,
        });
    };

    let mut span_start = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !class.is_terminator(c) {
            i += 1;
            continue;
        }
        let mut next = i + 1;
        if c == '.' && class.collapses_dot_runs() {
            while chars.get(next) == Some(&'.') {
                next += 1;
            }
        }
        emit(span_start, i, Some(c));
        span_start = next;
        i = next;
    }
    emit(span_start, chars.len(), None);
    segments
}

/// Terminator occurrences per class; a run of dots counts once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkCounts(pub BTreeMap<MarkClass, usize>);

impl MarkCounts {
    pub fn get(&self, class: MarkClass) -> usize {
        self.0.get(&class).copied().unwrap_or(0)
    }

    /// (Dot + Comma) / (Colon + Semicolon + Exclamation + Question).
    pub fn major_to_minor_ratio(&self) -> Option<f64> {
        let major = self.get(MarkClass::Dot) + self.get(MarkClass::Comma);
        let minor = self.get(MarkClass::Colon)
            + self.get(MarkClass::Semicolon)
            + self.get(MarkClass::Exclamation)
            + self.get(MarkClass::Question);
        (minor > 0).then(|| major as f64 / minor as f64)
    }
}

pub fn count_marks(doc: &CleanDocument) -> MarkCounts {
    let mut counts: BTreeMap<MarkClass, usize> = MarkClass::ALL.iter().map(|&c| (c, 0)).collect();
    let mut prev = None;
    for c in doc.content.chars() {
        let in_dot_run = c == '.' && prev == Some('.');
        prev = Some(c);
        if in_dot_run {
            continue;
        }
        if let Some(&class) = MarkClass::SINGLE.iter().find(|k| k.is_terminator(c)) {
            *counts.entry(class).or_default() += 1;
        }
    }
    let unit = [
        MarkClass::Dot,
        MarkClass::Semicolon,
        MarkClass::Exclamation,
        MarkClass::Question,
    ]
    .iter()
    .map(|k| counts[k])
    .sum();
    counts.insert(MarkClass::UnitOfThought, unit);
    MarkCounts(counts)
}
