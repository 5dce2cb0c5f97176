//! CSV, plot-data and JSON writers, plus the per-document output directory.
//!
//! Layout under the output root:
//!
//! ```text
//! <out>/<source_id>/report.json
//! <out>/<source_id>/<class>.csv          rank,value,origin
//! <out>/<source_id>/<class>.loglog.dat   log10(rank) log10(value)
//! <out>/<source_id>/words.csv            (same as a class)
//! <out>/<source_id>/words.vocab.csv      rank,word,frequency,first_ordinal
//! ```
//!
//! Segment (`<class>.segments.csv`) and series (`<class>.lts.csv`,
//! `words.fts.csv`) dumps are written on request.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::analysis::Analysis;
use crate::ranking::{RankedItem, RankedSeries};
use crate::segmentation::Segment;
use crate::series::WordFrequencyTable;

pub fn rank_csv(series: &RankedSeries) -> String {
    let mut out = String::from("rank,value,origin\n");
    for it in &series.items {
        let _ = writeln!(out, "{},{},{}", it.rank, it.value, it.origin);
    }
    out
}

pub fn loglog_dat(series: &RankedSeries) -> String {
    let mut out = String::new();
    for it in &series.items {
        let _ = writeln!(out, "{} {}", (it.rank as f64).log10(), it.value.log10());
    }
    out
}

pub fn segments_csv(segments: &[Segment]) -> String {
    let mut out = String::from("ordinal,start,end,terminator,length\n");
    for s in segments {
        let term = match s.terminator {
            Some(',') => "\",\"".to_owned(),
            Some(c) => c.to_string(),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.ordinal, s.start, s.end, term, s.length_chars
        );
    }
    out
}

pub fn series_csv(source_id: &str, class: &str, values: &[(usize, usize)]) -> String {
    let mut out = format!("# source_id={source_id} class={class}\nordinal,value\n");
    for (o, v) in values {
        let _ = writeln!(out, "{o},{v}");
    }
    out
}

pub fn vocabulary_csv(ranked: &RankedSeries, table: &WordFrequencyTable) -> String {
    let mut out = String::from("rank,word,frequency,first_ordinal\n");
    for it in &ranked.items {
        let word = table.word_at_first_ordinal(it.origin).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", it.rank, word, it.value, it.origin);
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum ParseRankCsvError {
    #[error("missing or unexpected header")]
    Header,
    #[error("line {line}: {reason}")]
    Row { line: usize, reason: String },
}

/// Read back a file produced by [`rank_csv`].
pub fn parse_rank_csv(text: &str, label: &str) -> Result<RankedSeries, ParseRankCsvError> {
    let mut lines = text.lines();
    if lines.next() != Some("rank,value,origin") {
        return Err(ParseRankCsvError::Header);
    }
    let items = lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let row = |reason: String| ParseRankCsvError::Row {
                line: i + 2,
                reason,
            };
            let fields: Vec<&str> = l.split(',').collect();
            let [rank, value, origin] = fields[..] else {
                return Err(row(format!("expected 3 fields, got {}", fields.len())));
            };
            Ok(RankedItem {
                rank: rank.parse().map_err(|e| row(format!("rank: {e}")))?,
                value: value.parse().map_err(|e| row(format!("value: {e}")))?,
                origin: origin.parse().map_err(|e| row(format!("origin: {e}")))?,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RankedSeries {
        label: label.to_owned(),
        items,
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DumpOptions {
    pub segments: bool,
    pub series: bool,
}

/// Name for a file inside a document directory paired with its contents.
pub type OutputFile = (String, String);

pub fn analysis_files(analysis: &Analysis, dumps: DumpOptions) -> Vec<OutputFile> {
    let report = &analysis.report;
    let mut files = vec![(
        "report.json".to_owned(),
        serde_json::to_string_pretty(report).expect("report serializes") + "\n",
    )];
    for class in &analysis.classes {
        let name = class.lts.class.name();
        files.push((format!("{name}.csv"), rank_csv(&class.ranked)));
        files.push((format!("{name}.loglog.dat"), loglog_dat(&class.ranked)));
        if dumps.segments {
            files.push((
                format!("{name}.segments.csv"),
                segments_csv(&class.segments),
            ));
        }
        if dumps.series {
            files.push((
                format!("{name}.lts.csv"),
                series_csv(&report.source_id, name, &class.lts.values),
            ));
        }
    }
    let words = &analysis.words;
    files.push(("words.csv".into(), rank_csv(&words.ranked)));
    files.push(("words.loglog.dat".into(), loglog_dat(&words.ranked)));
    files.push((
        "words.vocab.csv".into(),
        vocabulary_csv(&words.ranked, &words.table),
    ));
    if dumps.series {
        files.push((
            "words.fts.csv".into(),
            series_csv(&report.source_id, "words", &words.fts.values),
        ));
    }
    files
}

/// Write `files` into `<root>/<dir_name>/`, replacing any previous contents.
/// Files are staged in a sibling directory first, so a failure leaves no
/// partial output behind.
pub fn write_document_dir(
    root: &Path,
    dir_name: &str,
    files: &[OutputFile],
) -> io::Result<PathBuf> {
    fs::create_dir_all(root)?;
    let target = root.join(dir_name);
    let staging = root.join(format!(".{dir_name}.partial-{}", std::process::id()));
    if staging.exists() {
        fs::remove_dir_all(&staging)?;
    }
    let staged = (|| {
        fs::create_dir(&staging)?;
        for (name, contents) in files {
            fs::write(staging.join(name), contents)?;
        }
        if target.exists() {
            fs::remove_dir_all(&target)?;
        }
        fs::rename(&staging, &target)
    })();
    if let Err(e) = staged {
        let _ = fs::remove_dir_all(&staging);
        return Err(e);
    }
    Ok(target)
}
