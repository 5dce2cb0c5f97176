//! Reference implementations used only by tests. None of these share code
//! with the library paths they check.
#![allow(dead_code)]

use std::collections::HashMap;

use punkt_stats::segmentation::MarkClass;

/// One expected segment: (start, end, terminator, length).
pub type RefSegment = (usize, usize, Option<char>, usize);

/// Quadratic reference scanner: find every terminator run, then recover each
/// segment by walking back to the previous run.
pub fn reference_split(text: &str, class: MarkClass) -> Vec<RefSegment> {
    let chars: Vec<char> = text.chars().collect();
    let marks = class.terminators();
    let merges_dots = matches!(class, MarkClass::Dot | MarkClass::UnitOfThought);
    let is_mark = |i: usize| marks.contains(&chars[i]);
    // Continuation dots belong to the run started by an earlier dot.
    let is_continuation = |i: usize| merges_dots && i > 0 && chars[i] == '.' && chars[i - 1] == '.';

    let mut closers: Vec<usize> = (0..chars.len())
        .filter(|&i| is_mark(i) && !is_continuation(i))
        .collect();
    closers.push(chars.len()); // virtual closer at the end

    let mut out = Vec::new();
    for &t in &closers {
        // Walk back over text until hitting the previous mark (or the start).
        let mut from = t;
        while from > 0 && !is_mark(from - 1) {
            from -= 1;
        }
        let span: String = chars[from..t].iter().collect();
        let trimmed = span.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = span.chars().take_while(|c| c.is_whitespace()).count();
        let len = trimmed.chars().count();
        let terminator = (t < chars.len()).then(|| chars[t]);
        out.push((from + lead, from + lead + len, terminator, len));
    }
    out
}

/// Brute-force mark count: every mark occurrence, minus dots preceded by a dot.
pub fn reference_counts(text: &str) -> HashMap<char, usize> {
    let chars: Vec<char> = text.chars().collect();
    let mut counts = HashMap::new();
    for (i, &c) in chars.iter().enumerate() {
        if ".,:;!?".contains(c) && !(c == '.' && i > 0 && chars[i - 1] == '.') {
            *counts.entry(c).or_insert(0) += 1;
        }
    }
    counts
}

/// Σ_w f(w)² by direct counting.
pub fn sum_of_squared_frequencies(words: &[String]) -> usize {
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for w in words {
        *freq.entry(w).or_default() += 1;
    }
    freq.values().map(|f| f * f).sum()
}

/// Exhaustive break scan by brute force over the raw-sum regression formula.
pub fn reference_break(values: &[f64], r_min: usize) -> usize {
    let pts: Vec<(f64, f64)> = (r_min..=values.len())
        .map(|r| ((r as f64).log10(), values[r - 1].log10()))
        .collect();
    let ssr = |p: &[(f64, f64)]| {
        let n = p.len() as f64;
        let sx: f64 = p.iter().map(|q| q.0).sum();
        let sy: f64 = p.iter().map(|q| q.1).sum();
        let sxx: f64 = p.iter().map(|q| q.0 * q.0).sum();
        let sxy: f64 = p.iter().map(|q| q.0 * q.1).sum();
        let b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let a = (sy - b * sx) / n;
        p.iter().map(|q| (q.1 - a - b * q.0).powi(2)).sum::<f64>()
    };
    let mut best = (f64::INFINITY, 0);
    for k in 3..=pts.len() - 3 {
        let total = ssr(&pts[..k]) + ssr(&pts[k..]);
        if total < best.0 {
            best = (total, r_min + k - 1);
        }
    }
    best.1
}

/// Two-regime synthetic rank curve with the knee at `break_at`.
pub fn two_regime(break_at: usize, n: usize, slope_before: f64, slope_after: f64) -> Vec<f64> {
    let knee = 1000.0 * (break_at as f64).powf(slope_before);
    (1..=n)
        .map(|r| {
            let r = r as f64;
            if r <= break_at as f64 {
                1000.0 * r.powf(slope_before)
            } else {
                knee * (r / break_at as f64).powf(slope_after)
            }
        })
        .collect()
}
