//! Chain file formats.
//!
//! * JSON: `{"states": ["1", "2"], "matrix": [[0.5, 0.5], [1.0, 0.0]]}`
//! * TSV edge list, one `src<TAB>dst<TAB>probability` per line. Absent edges
//!   are zero, states are numbered in order of first appearance, blank lines
//!   and lines starting with `#` are ignored.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chain::MarkovChain;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainDoc {
    states: Vec<String>,
    matrix: Vec<Vec<f64>>,
}

/// Input format of a chain file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

impl Format {
    /// Guess from the file extension, falling back to the first
    /// non-blank character (`{` means JSON).
    pub fn detect(path: &Path, text: &str) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("json") => Format::Json,
            Some("tsv" | "tab" | "txt") => Format::Tsv,
            _ if text.trim_start().starts_with('{') => Format::Json,
            _ => Format::Tsv,
        }
    }
}

fn convert<T: Real>(x: f64) -> T {
    T::from_f64(x).unwrap_or_else(T::nan)
}

pub fn parse_json<T: Real>(text: &str) -> Result<MarkovChain<T>> {
    let doc: ChainDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = doc
        .matrix
        .into_iter()
        .map(|r| r.into_iter().map(convert).collect())
        .collect();
    MarkovChain::new(doc.states, rows)
}

pub fn parse_tsv<T: Real>(text: &str) -> Result<MarkovChain<T>> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        *index.entry(label.to_string()).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() - 1
        })
    };
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        let [src, dst, prob] = fields[..] else {
            return Err(Error::Parse(format!(
                "line {}: expected 3 tab-separated fields, found {}",
                lineno + 1,
                fields.len()
            )));
        };
        if src.is_empty() || dst.is_empty() {
            return Err(Error::Parse(format!("line {}: empty state label", lineno + 1)));
        }
        let p: f64 = prob
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad probability {prob:?}", lineno + 1)))?;
        let i = intern(src, &mut labels);
        let j = intern(dst, &mut labels);
        edges.push((i, j, p));
    }
    let n = labels.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut p = vec![T::zero(); n * n];
    let mut seen = vec![false; n * n];
    for (i, j, x) in edges {
        if std::mem::replace(&mut seen[i * n + j], true) {
            return Err(Error::DuplicateEdge {
                src: labels[i].clone(),
                dst: labels[j].clone(),
            });
        }
        p[i * n + j] = convert(x);
    }
    MarkovChain::from_flat(labels, p)
}

/// Parses `text` in the given format.
pub fn parse<T: Real>(text: &str, format: Format) -> Result<MarkovChain<T>> {
    match format {
        Format::Json => parse_json(text),
        Format::Tsv => parse_tsv(text),
    }
}

/// Reads and parses a chain file, detecting its format.
pub fn load<T: Real>(path: impl AsRef<Path>) -> Result<MarkovChain<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse(&text, Format::detect(path, &text))
}

/// JSON representation accepted by [`parse_json`].
pub fn to_json<T: Real>(chain: &MarkovChain<T>) -> String {
    let doc = ChainDoc {
        states: chain.labels().to_vec(),
        matrix: chain
            .matrix()
            .into_iter()
            .map(|r| r.into_iter().map(T::as_f64).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("chain serializes")
}

/// Edge list accepted by [`parse_tsv`]; zero entries are omitted.
pub fn to_tsv<T: Real>(chain: &MarkovChain<T>) -> String {
    let mut out = String::new();
    for i in chain.states() {
        for (j, p) in chain.successors(i) {
            out.push_str(&format!("{}\t{}\t{}\n", chain.label(i), chain.label(j), p.as_f64()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::five_state;

    #[test]
    fn json_round_trip() {
        let c = five_state();
        let back: MarkovChain<f64> = parse_json(&to_json(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn tsv_round_trip() {
        let c = five_state();
        let back: MarkovChain<f64> = parse_tsv(&to_tsv(&c)).unwrap();
        assert_eq!(back.n_states(), c.n_states());
        for i in c.states() {
            for j in c.states() {
                let (bi, bj) = (back.state(c.label(i)).unwrap(), back.state(c.label(j)).unwrap());
                assert_eq!(back.prob(bi, bj), c.prob(i, j));
            }
        }
    }

    #[test]
    fn tsv_labels_follow_first_appearance() {
        let text = "# comment\nb\ta\t1.0\n\na\tb\t0.5\na\ta\t0.5\n";
        let c: MarkovChain<f64> = parse_tsv(text).unwrap();
        assert_eq!(c.labels(), ["b", "a"]);
        assert_eq!(c.matrix(), vec![vec![0.0, 1.0], vec![0.5, 0.5]]);
    }

    #[test]
    fn tsv_errors() {
        assert_eq!(
            parse_tsv::<f64>("a\tb\t1\na\tb\t1\n").unwrap_err(),
            Error::DuplicateEdge {
                src: "a".into(),
                dst: "b".into()
            }
        );
        assert!(matches!(parse_tsv::<f64>("a\tb\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_tsv::<f64>("a\tb\tx\n"), Err(Error::Parse(_))));
        assert_eq!(parse_tsv::<f64>("# nothing\n").unwrap_err(), Error::Empty);
        // b has no outgoing edges
        assert!(matches!(
            parse_tsv::<f64>("a\tb\t1\n"),
            Err(Error::RowSumViolation { row: 1, .. })
        ));
    }

    #[test]
    fn json_errors() {
        assert!(matches!(
            parse_json::<f64>("{\"states\": [\"a\"]}"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_json::<f64>("not json"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_json::<f64>("{\"states\": [\"a\", \"b\"], \"matrix\": [[0.5, 0.6], [1, 0]]}"),
            Err(Error::RowSumViolation { row: 0, .. })
        ));
        assert!(matches!(
            parse_json::<f64>("{\"states\": [\"a\", \"a\"], \"matrix\": [[1, 0], [0, 1]]}"),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn format_detection() {
        assert_eq!(Format::detect(Path::new("c.json"), ""), Format::Json);
        assert_eq!(Format::detect(Path::new("c.tsv"), "{"), Format::Tsv);
        assert_eq!(Format::detect(Path::new("chain"), "  {\"states\": []}"), Format::Json);
        assert_eq!(Format::detect(Path::new("chain"), "a\tb\t1"), Format::Tsv);
    }
}
