//! Rank-size series with chronological tie-breaking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::WordFrequencyTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedItem {
    pub rank: usize,
    pub value: f64,
    pub origin: usize,
}

/// Values sorted descending with ranks `1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedSeries {
    pub label: String,
    pub items: Vec<RankedItem>,
}

impl RankedSeries {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Value at 1-based `rank`.
    pub fn value_at(&self, rank: usize) -> Option<f64> {
        rank.checked_sub(1)
            .and_then(|i| self.items.get(i))
            .map(|it| it.value)
    }

    /// Rank-1 value.
    pub fn top(&self) -> f64 {
        self.items[0].value
    }
}

/// Sort `(ordinal, value)` pairs by value descending, ties by ascending
/// ordinal, and number them from 1.
pub fn rank_descending(series: &[(usize, f64)], label: impl Into<String>) -> Result<RankedSeries> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    if let Some(&(ordinal, value)) = series.iter().find(|(_, v)| !v.is_finite() || *v <= 0.0) {
        return Err(Error::NonPositive { ordinal, value });
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let items = sorted
        .into_iter()
        .enumerate()
        .map(|(i, (origin, value))| RankedItem {
            rank: i + 1,
            value,
            origin,
        })
        .collect();
    Ok(RankedSeries {
        label: label.into(),
        items,
    })
}

/// Frequency-rank series; the origin of each item is the word's first
/// occurrence.
pub fn zipf_rank(table: &WordFrequencyTable, label: impl Into<String>) -> Result<RankedSeries> {
    let pairs: Vec<(usize, f64)> = table
        .entries()
        .map(|(_, e)| (e.first_ordinal, e.frequency as f64))
        .collect();
    rank_descending(&pairs, label)
}
