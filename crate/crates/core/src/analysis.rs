//! End-to-end analysis of one document.

use serde::{Deserialize, Serialize};

use crate::config::{Config, Windows};
use crate::corpus::{self, CleanDocument, LogEntry, RawDocument, Token};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fitting::{self, BreakEstimate, FitRecord, FitWindow};
use crate::ranking::{self, RankedSeries};
use crate::segmentation::{self, MarkClass, MarkCounts, Segment};
use crate::series::{self, FrequencySeries, LengthSeries, WordFrequencyTable};

/// What to compute for each document.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub classes: Vec<MarkClass>,
    pub windows: Windows,
    pub stretched: bool,
    pub breaks: bool,
    pub break_r_min: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions::from_config(&Config::default())
    }
}

impl AnalysisOptions {
    pub fn from_config(config: &Config) -> Self {
        AnalysisOptions {
            classes: MarkClass::ALL.to_vec(),
            windows: config.windows.clone(),
            stretched: config.stretched,
            breaks: config.breaks,
            break_r_min: config.break_r_min,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: MarkClass,
    pub segment_count: usize,
    pub mark_count: usize,
    pub min_length: usize,
    pub max_length: usize,
    pub total_length: usize,
    pub rank1_length: f64,
    pub power_law: Outcome<FitRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stretched_exponential: Option<Outcome<FitRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub break_estimate: Option<Outcome<BreakEstimate>>,
}

impl ClassReport {
    pub fn exponent(&self) -> Option<f64> {
        self.power_law.ok().map(|f| f.params["exponent"])
    }
}

/// A computed value, or the reason it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome<T> {
    Fitted(T),
    Unavailable(String),
}

impl<T> Outcome<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Fitted(v) => Some(v),
            Outcome::Unavailable(_) => None,
        }
    }

    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Fitted(v),
            Err(e) => Outcome::Unavailable(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCount {
    pub word: String,
    pub frequency: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordReport {
    pub token_count: usize,
    pub vocabulary_size: usize,
    pub top_words: Vec<WordCount>,
    pub zipf: Outcome<FitRecord>,
}

impl WordReport {
    pub fn zeta(&self) -> Option<f64> {
        self.zipf.ok().map(|f| f.params["exponent"])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub source_id: String,
    pub preprocessing: Vec<LogEntry>,
    pub document_chars: usize,
    pub mark_counts: MarkCounts,
    /// (Dot + Comma) / (Colon + Semicolon + Exclamation + Question).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub major_to_minor_ratio: Option<f64>,
    pub classes: Vec<ClassReport>,
    pub words: WordReport,
}

impl AnalysisReport {
    pub fn class(&self, class: MarkClass) -> Option<&ClassReport> {
        self.classes.iter().find(|c| c.class == class)
    }
}

/// Per-class intermediate data kept for dumping.
#[derive(Debug, Clone)]
pub struct ClassAnalysis {
    pub segments: Vec<Segment>,
    pub lts: LengthSeries,
    pub ranked: RankedSeries,
}

#[derive(Debug, Clone)]
pub struct WordAnalysis {
    pub tokens: Vec<Token>,
    pub table: WordFrequencyTable,
    pub fts: FrequencySeries,
    pub ranked: RankedSeries,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub classes: Vec<ClassAnalysis>,
    pub words: WordAnalysis,
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Stage {
        stage: name,
        source: Box::new(e),
    })
}

pub fn load_and_clean(raw: &RawDocument, config: &Config) -> Result<CleanDocument> {
    let cleaning = stage("configure", config.cleaning())?;
    stage("clean", corpus::clean(raw, &cleaning))
}

fn analyze_class(
    doc: &CleanDocument,
    class: MarkClass,
    counts: &MarkCounts,
    options: &AnalysisOptions,
    exec: Execution,
) -> Result<(ClassReport, ClassAnalysis)> {
    let segments = segmentation::split_by_mark(doc, class);
    let lts = stage("series", series::build_lts(&segments, class))?;
    let label = format!("{}/{}", doc.source_id, class);
    let ranked = stage(
        "ranking",
        ranking::rank_descending(&lts.pairs(), label.clone()),
    )?;
    let window = options.windows.get(class);

    let power_law = Outcome::from_result(
        fitting::fit_power_law(&ranked, window).map(|f| FitRecord::power_law(&label, &f)),
    );
    let stretched_exponential = options.stretched.then(|| {
        Outcome::from_result(
            fitting::fit_stretched_exponential(&ranked, window, None)
                .map(|f| FitRecord::stretched(&label, &f)),
        )
    });
    let break_estimate = options
        .breaks
        .then(|| Outcome::from_result(fitting::detect_break(&ranked, options.break_r_min, exec)));

    let report = ClassReport {
        class,
        segment_count: segments.len(),
        mark_count: counts.get(class),
        min_length: lts.min(),
        max_length: lts.max(),
        total_length: lts.total(),
        rank1_length: ranked.top(),
        power_law,
        stretched_exponential,
        break_estimate,
    };
    Ok((
        report,
        ClassAnalysis {
            segments,
            lts,
            ranked,
        },
    ))
}

pub fn analyze_words(doc: &CleanDocument, window: FitWindow) -> Result<(WordReport, WordAnalysis)> {
    let tokens = corpus::tokenize_words(doc);
    let table = stage(
        "word-frequencies",
        series::build_word_frequency_table(&tokens),
    )?;
    let fts = stage("word-frequencies", series::build_fts(&tokens, &table))?;
    let label = format!("{}/words", doc.source_id);
    let ranked = stage("ranking", ranking::zipf_rank(&table, label.clone()))?;
    let zipf = Outcome::from_result(
        fitting::fit_power_law(&ranked, window).map(|f| FitRecord::power_law(&label, &f)),
    );
    let top_words = ranked
        .items
        .iter()
        .take(10)
        .map(|it| WordCount {
            word: table
                .word_at_first_ordinal(it.origin)
                .unwrap_or_default()
                .to_owned(),
            frequency: it.value as usize,
        })
        .collect();
    let report = WordReport {
        token_count: table.total_tokens(),
        vocabulary_size: table.len(),
        top_words,
        zipf,
    };
    Ok((
        report,
        WordAnalysis {
            tokens,
            table,
            fts,
            ranked,
        },
    ))
}

/// Run every requested class and the word pipeline over a clean document.
/// Classes are independent and run under `exec`.
pub fn analyze_document(
    doc: &CleanDocument,
    options: &AnalysisOptions,
    exec: Execution,
) -> Result<Analysis> {
    let counts = segmentation::count_marks(doc);
    let per_class = exec.map(&options.classes, |&class| {
        analyze_class(doc, class, &counts, options, exec)
    });
    let (reports, classes): (Vec<_>, Vec<_>) = per_class
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let (word_report, words) = analyze_words(doc, options.windows.words)?;
    let report = AnalysisReport {
        source_id: doc.source_id.clone(),
        preprocessing: doc.normalization_log.clone(),
        document_chars: doc.char_len(),
        major_to_minor_ratio: counts.major_to_minor_ratio(),
        mark_counts: counts,
        classes: reports,
        words: word_report,
    };
    Ok(Analysis {
        report,
        classes,
        words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::load_document_bytes;

    #[test]
    fn tiny_document() {
        let raw = load_document_bytes(b"Hi. Bye. Hi.", "tiny").unwrap();
        let doc = load_and_clean(&raw, &Config::default()).unwrap();
        let analysis =
            analyze_document(&doc, &AnalysisOptions::default(), Execution::Sequential).unwrap();
        let dot = analysis.report.class(MarkClass::Dot).unwrap();
        assert_eq!(dot.segment_count, 3);
        assert_eq!(dot.rank1_length, 3.0);
        assert!(matches!(dot.power_law, Outcome::Unavailable(ref m) if m.contains("fewer than 3")));
        assert_eq!(analysis.report.words.vocabulary_size, 2);
        assert_eq!(analysis.report.words.token_count, 3);
    }

    #[test]
    fn sequential_and_parallel_reports_match() {
        let text = "One, two; three. Four? Five! Six: seven, eight. ".repeat(40);
        let doc = CleanDocument::from_text("rep", text);
        let options = AnalysisOptions {
            breaks: true,
            stretched: true,
            ..AnalysisOptions::default()
        };
        let a = analyze_document(&doc, &options, Execution::Sequential).unwrap();
        let b = analyze_document(&doc, &options, Execution::Parallel).unwrap();
        assert_eq!(a.report, b.report);
    }

    #[test]
    fn failing_stage_is_named() {
        let doc = CleanDocument::from_text("marks", "-- --");
        let err =
            analyze_document(&doc, &AnalysisOptions::default(), Execution::Sequential).unwrap_err();
        assert!(err.to_string().starts_with("word-frequencies"), "{err}");
    }
}
