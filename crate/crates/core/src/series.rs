//! Length and frequency time series, and the word-frequency table.

use std::collections::HashMap;

use crate::corpus::Token;
use crate::error::{Error, Result};
use crate::segmentation::{MarkClass, Segment};

/// Segment lengths in text order for one mark class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthSeries {
    pub class: MarkClass,
    pub values: Vec<(usize, usize)>,
}

impl LengthSeries {
    pub fn max(&self) -> usize {
        self.values.iter().map(|&(_, l)| l).max().unwrap_or(0)
    }

    pub fn min(&self) -> usize {
        self.values.iter().map(|&(_, l)| l).min().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.values.iter().map(|&(_, l)| l).sum()
    }

    /// `(ordinal, value)` pairs ready for ranking.
    pub fn pairs(&self) -> Vec<(usize, f64)> {
        self.values.iter().map(|&(o, l)| (o, l as f64)).collect()
    }
}

pub fn build_lts(segments: &[Segment], class: MarkClass) -> Result<LengthSeries> {
    if segments.is_empty() {
        return Err(Error::NoSegments(class.name()));
    }
    Ok(LengthSeries {
        class,
        values: segments
            .iter()
            .map(|s| (s.ordinal, s.length_chars))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordEntry {
    pub frequency: usize,
    pub first_ordinal: usize,
}

/// Folded word -> frequency and first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFrequencyTable {
    // Insertion order is first-occurrence order.
    words: Vec<(String, WordEntry)>,
    index: HashMap<String, usize>,
    total_tokens: usize,
}

impl WordFrequencyTable {
    pub fn get(&self, folded: &str) -> Option<WordEntry> {
        self.index.get(folded).map(|&i| self.words[i].1)
    }

    /// Entries in order of first occurrence.
    pub fn entries(&self) -> impl Iterator<Item = (&str, WordEntry)> {
        self.words.iter().map(|(w, e)| (w.as_str(), *e))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn total_tokens(&self) -> usize {
        self.total_tokens
    }

    /// The word whose first occurrence is at token `ordinal`.
    pub fn word_at_first_ordinal(&self, ordinal: usize) -> Option<&str> {
        // first ordinals increase with insertion order
        self.words
            .binary_search_by_key(&ordinal, |(_, e)| e.first_ordinal)
            .ok()
            .map(|i| self.words[i].0.as_str())
    }
}

pub fn build_word_frequency_table(tokens: &[Token]) -> Result<WordFrequencyTable> {
    if tokens.is_empty() {
        return Err(Error::NoTokens);
    }
    let mut words: Vec<(String, WordEntry)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for token in tokens {
        match index.get(&token.folded) {
            Some(&i) => words[i].1.frequency += 1,
            None => {
                index.insert(token.folded.clone(), words.len());
                words.push((
                    token.folded.clone(),
                    WordEntry {
                        frequency: 1,
                        first_ordinal: token.ordinal,
                    },
                ));
            }
        }
    }
    Ok(WordFrequencyTable {
        words,
        index,
        total_tokens: tokens.len(),
    })
}

/// Each token replaced by its whole-document frequency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySeries {
    pub values: Vec<(usize, usize)>,
}

pub fn build_fts(tokens: &[Token], table: &WordFrequencyTable) -> Result<FrequencySeries> {
    let values = tokens
        .iter()
        .map(|t| {
            table
                .get(&t.folded)
                .map(|e| (t.ordinal, e.frequency))
                .ok_or_else(|| Error::UnknownToken(t.folded.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrequencySeries { values })
}
