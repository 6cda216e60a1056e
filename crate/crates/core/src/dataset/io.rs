//! File formats.
//!
//! Raw corpus: UTF-8, one example per line,
//! `<sense-name> <TAB> <previous sentence> <TAB> <current sentence>`,
//! previous sentence possibly empty. Blank lines and `#` comments skipped.
//!
//! Serialized dataset: a header carrying the sense inventory, the stem
//! table, and any warnings, then one record per example:
//!
//! ```text
//! senses <S>
//! sense <id> <name>        (S lines)
//! features <F>
//! feature <index> <stem>   (F lines)
//! warning <text>           (zero or more)
//! examples <N>
//! <label-id> <idx1,idx2,...>   (N lines; indices ascending, comma-joined;
//!                               a bare label means no features present)
//! ```

use std::sync::Arc;

use crate::error::{Error, Result};

use super::{CorpusRecord, Dataset, FeatureSpace, LabeledExample, SenseLabel, SparseBinaryVector};

fn parse_err(what: &'static str, line: usize, detail: impl Into<String>) -> Error {
    Error::Parse {
        what,
        line,
        detail: detail.into(),
    }
}

/// Parses the raw corpus format. Line numbers in errors are 1-based.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(3, '\t');
        let sense = parts.next().unwrap_or_default().trim();
        let previous = parts
            .next()
            .ok_or_else(|| parse_err("corpus", line_no, "expected 3 tab-separated fields"))?;
        let current = parts
            .next()
            .ok_or_else(|| parse_err("corpus", line_no, "expected 3 tab-separated fields"))?;
        if sense.is_empty() {
            return Err(parse_err("corpus", line_no, "empty sense name"));
        }
        records.push(CorpusRecord {
            sense: sense.to_string(),
            previous: previous.to_string(),
            current: current.to_string(),
        });
    }
    Ok(records)
}

/// Serializes a dataset to the line format above. Deterministic: equal
/// datasets produce byte-identical text.
pub fn write_dataset(data: &Dataset) -> String {
    let mut out = String::new();
    out.push_str(&format!("senses {}\n", data.sense_count()));
    for sense in data.senses.iter() {
        out.push_str(&format!("sense {} {}\n", sense.id, sense.name));
    }
    out.push_str(&format!("features {}\n", data.feature_count()));
    for (i, name) in data.space.names().iter().enumerate() {
        out.push_str(&format!("feature {i} {name}\n"));
    }
    for warning in &data.warnings {
        out.push_str(&format!("warning {warning}\n"));
    }
    out.push_str(&format!("examples {}\n", data.len()));
    for ex in &data.examples {
        if ex.features.is_empty() {
            out.push_str(&format!("{}\n", ex.label));
        } else {
            let joined = ex
                .features
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!("{} {}\n", ex.label, joined));
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    what: &'static str,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((i, line)) => Ok((i + 1, line)),
            None => Err(parse_err(self.what, 0, "unexpected end of file")),
        }
    }
}

fn parse_count(what: &'static str, line_no: usize, line: &str, keyword: &str) -> Result<usize> {
    let rest = line
        .strip_prefix(keyword)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| parse_err(what, line_no, format!("expected `{keyword} <count>`")))?;
    rest.trim()
        .parse()
        .map_err(|_| parse_err(what, line_no, format!("bad count in `{keyword}` line")))
}

/// Parses the serialized dataset format, validating every invariant the
/// in-memory type relies on (dense ids, sorted indices, bounds).
pub fn read_dataset(text: &str) -> Result<Dataset> {
    const WHAT: &str = "dataset";
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        what: WHAT,
    };

    let (n, line) = lines.next()?;
    let sense_count = parse_count(WHAT, n, line, "senses")?;
    if sense_count == 0 {
        return Err(parse_err(WHAT, n, "dataset needs at least one sense"));
    }
    let mut senses = Vec::with_capacity(sense_count);
    for expect in 0..sense_count {
        let (n, line) = lines.next()?;
        let rest = line
            .strip_prefix("sense ")
            .ok_or_else(|| parse_err(WHAT, n, "expected `sense <id> <name>`"))?;
        let (id_str, name) = rest
            .split_once(' ')
            .ok_or_else(|| parse_err(WHAT, n, "expected `sense <id> <name>`"))?;
        let id: usize = id_str
            .parse()
            .map_err(|_| parse_err(WHAT, n, "bad sense id"))?;
        if id != expect {
            return Err(parse_err(
                WHAT,
                n,
                format!("sense ids must be dense, expected {expect}"),
            ));
        }
        if name.is_empty() || senses.iter().any(|s: &SenseLabel| s.name == name) {
            return Err(parse_err(
                WHAT,
                n,
                "sense names must be unique and nonempty",
            ));
        }
        senses.push(SenseLabel {
            id,
            name: name.to_string(),
        });
    }

    let (n, line) = lines.next()?;
    let feature_count = parse_count(WHAT, n, line, "features")?;
    let mut names = Vec::with_capacity(feature_count);
    for expect in 0..feature_count {
        let (n, line) = lines.next()?;
        let rest = line
            .strip_prefix("feature ")
            .ok_or_else(|| parse_err(WHAT, n, "expected `feature <index> <stem>`"))?;
        let (idx_str, name) = rest
            .split_once(' ')
            .ok_or_else(|| parse_err(WHAT, n, "expected `feature <index> <stem>`"))?;
        let idx: usize = idx_str
            .parse()
            .map_err(|_| parse_err(WHAT, n, "bad feature index"))?;
        if idx != expect {
            return Err(parse_err(
                WHAT,
                n,
                format!("feature indices must be dense, expected {expect}"),
            ));
        }
        if name.is_empty() {
            return Err(parse_err(WHAT, n, "empty feature name"));
        }
        names.push(name.to_string());
    }

    let mut warnings = Vec::new();
    let (mut n, mut line) = lines.next()?;
    while let Some(w) = line.strip_prefix("warning ") {
        warnings.push(w.to_string());
        (n, line) = lines.next()?;
    }

    let example_count = parse_count(WHAT, n, line, "examples")?;
    let mut examples = Vec::with_capacity(example_count);
    for _ in 0..example_count {
        let (n, line) = lines.next()?;
        let (label_str, idx_part) = match line.split_once(' ') {
            Some((l, rest)) => (l, Some(rest)),
            None => (line, None),
        };
        let label: usize = label_str
            .parse()
            .map_err(|_| parse_err(WHAT, n, "bad label id"))?;
        if label >= sense_count {
            return Err(parse_err(WHAT, n, format!("label {label} out of range")));
        }
        let mut indices = Vec::new();
        if let Some(idx_part) = idx_part {
            for piece in idx_part.split(',') {
                let idx: usize = piece
                    .parse()
                    .map_err(|_| parse_err(WHAT, n, "bad feature index in example"))?;
                if idx >= feature_count {
                    return Err(parse_err(
                        WHAT,
                        n,
                        format!("feature index {idx} out of range"),
                    ));
                }
                if let Some(&last) = indices.last() {
                    if idx <= last {
                        return Err(parse_err(
                            WHAT,
                            n,
                            "example indices must be strictly ascending",
                        ));
                    }
                }
                indices.push(idx);
            }
        }
        examples.push(LabeledExample {
            features: SparseBinaryVector::from_indices(indices),
            label,
        });
    }

    let mut data = Dataset::new(
        Arc::new(FeatureSpace::from_names(names)),
        Arc::new(senses),
        examples,
    );
    data.warnings = warnings;
    Ok(data)
}

/// Reads and parses a dataset file.
pub fn load_dataset(path: &std::path::Path) -> Result<Dataset> {
    read_dataset(&std::fs::read_to_string(path)?)
}

/// Writes a dataset file.
pub fn save_dataset(data: &Dataset, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, write_dataset(data))?;
    Ok(())
}
