//! Reader and writer for the LETOR / SVMlight ranking format:
//!
//! ```text
//! <rel> qid:<id> <fid>:<val> ... [# comment]
//! ```
//!
//! Feature ids are 1-based. Missing ids inside a line are read as 0.0; the
//! highest id on a line must be the same for every line.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use super::{Dataset, Document, QueryData};
use crate::error::{Error, Result};
use crate::types::DocumentId;

struct Line {
    relevance: u8,
    qid: String,
    features: Vec<f64>,
    comment: Option<String>,
}

fn parse_line(text: &str, line: usize) -> Result<Option<Line>> {
    let err = |message: String| Error::Parse { line, message };
    let (body, comment) = match text.split_once('#') {
        Some((b, c)) => (b, Some(c.trim().to_string())),
        None => (text, None),
    };
    let mut tokens = body.split_whitespace();
    let Some(rel) = tokens.next() else {
        return Ok(None);
    };
    let relevance: u8 = rel
        .parse()
        .map_err(|_| err(format!("invalid relevance label `{rel}`")))?;
    let qid = tokens
        .next()
        .and_then(|t| t.strip_prefix("qid:"))
        .filter(|q| !q.is_empty())
        .ok_or_else(|| err("missing `qid:<id>`".into()))?;

    let mut features = Vec::new();
    let mut last = 0usize;
    for tok in tokens {
        let (fid, val) = tok
            .split_once(':')
            .ok_or_else(|| err(format!("malformed feature `{tok}`")))?;
        let fid: usize = fid.parse().map_err(|_| err(format!("invalid feature id `{fid}`")))?;
        if fid <= last {
            return Err(err(format!("feature ids must be increasing and start at 1, got {fid}")));
        }
        let val: f64 = val.parse().map_err(|_| err(format!("invalid feature value `{val}`")))?;
        if !val.is_finite() {
            return Err(err(format!("non-finite feature value `{val}`")));
        }
        features.resize(fid - 1, 0.0);
        features.push(val);
        last = fid;
    }
    if features.is_empty() {
        return Err(err("no features".into()));
    }
    Ok(Some(Line {
        relevance,
        qid: qid.to_string(),
        features,
        comment: comment.filter(|c| !c.is_empty()),
    }))
}

/// Parses a whole LETOR stream. Documents are grouped by qid in encounter
/// order and numbered by their position within the query.
pub fn parse_letor<R: Read>(source: R) -> Result<Dataset> {
    let reader = BufReader::new(source);
    let mut queries: Vec<QueryData> = Vec::new();
    let mut by_qid: HashMap<String, usize> = HashMap::new();
    let mut feature_count = None;
    let mut relevance_max = 0u8;

    for (i, text) in reader.lines().enumerate() {
        let line_no = i + 1;
        let text = text.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let Some(line) = parse_line(&text, line_no)? else {
            continue;
        };
        match feature_count {
            None => feature_count = Some(line.features.len()),
            Some(n) if n != line.features.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {n} features, found {}", line.features.len()),
                })
            }
            _ => {}
        }
        relevance_max = relevance_max.max(line.relevance);
        let qi = *by_qid.entry(line.qid.clone()).or_insert_with(|| {
            queries.push(QueryData {
                query_id: line.qid.clone(),
                documents: Vec::new(),
            });
            queries.len() - 1
        });
        let q = &mut queries[qi];
        q.documents.push(Document {
            id: DocumentId(q.documents.len() as u32),
            features: line.features,
            relevance: line.relevance,
            comment: line.comment,
        });
    }

    let feature_count = feature_count.ok_or(Error::NoQueries)?;
    Ok(Dataset {
        queries,
        feature_count,
        relevance_max: relevance_max.max(1),
    })
}

pub fn read_letor(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_letor(file)
}

/// Writes a dataset back in LETOR format, one line per document.
pub fn serialize_letor(data: &Dataset) -> String {
    let mut out = String::new();
    for q in &data.queries {
        for d in &q.documents {
            write!(out, "{} qid:{}", d.relevance, q.query_id).unwrap();
            for (i, v) in d.features.iter().enumerate() {
                write!(out, " {}:{}", i + 1, v).unwrap();
            }
            if let Some(c) = &d.comment {
                write!(out, " # {c}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_letor(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, serialize_letor(data)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_line() {
        let d = parse_letor("2 qid:1 1:0.5 2:1.0".as_bytes()).unwrap();
        assert_eq!(d.queries.len(), 1);
        assert_eq!(d.feature_count, 2);
        let doc = &d.queries[0].documents[0];
        assert_eq!(doc.relevance, 2);
        assert_eq!(doc.features, vec![0.5, 1.0]);
        assert_eq!(doc.id, DocumentId(0));
    }

    #[test]
    fn empty_input_has_no_queries() {
        let err = parse_letor("".as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "no queries");
        assert!(matches!(parse_letor("\n  \n".as_bytes()), Err(Error::NoQueries)));
    }

    #[test]
    fn groups_by_qid() {
        let text = "1 qid:7 1:0.1\n0 qid:8 1:0.2\n2 qid:7 1:0.3 # docid = x\n";
        let d = parse_letor(text.as_bytes()).unwrap();
        assert_eq!(d.queries.len(), 2);
        assert_eq!(d.queries[0].query_id, "7");
        assert_eq!(d.queries[0].documents.len(), 2);
        assert_eq!(d.queries[0].documents[1].id, DocumentId(1));
        assert_eq!(d.queries[0].documents[1].comment.as_deref(), Some("docid = x"));
        assert_eq!(d.relevance_max, 2);
    }

    #[test]
    fn malformed_lines_report_line_number() {
        let cases = [
            "1 qid:1 1:0.5\nx qid:1 1:0.5",
            "1 qid:1 1:0.5\n1 1:0.5",
            "1 qid:1 1:0.5\n1 qid:1 1-0.5",
            "1 qid:1 1:0.5\n1 qid:1 2:0.5 1:0.1",
            "1 qid:1 1:0.5\n1 qid:1 1:abc",
        ];
        for text in cases {
            match parse_letor(text.as_bytes()) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, 2, "{text}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn inconsistent_feature_counts() {
        let err = parse_letor("1 qid:1 1:0.5 2:0.1\n0 qid:1 1:0.5".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn sparse_ids_fill_zero() {
        let d = parse_letor("1 qid:1 1:0.5 3:0.25".as_bytes()).unwrap();
        assert_eq!(d.queries[0].documents[0].features, vec![0.5, 0.0, 0.25]);
    }

    fn dataset_strategy() -> impl Strategy<Value = Dataset> {
        (1usize..4, 1usize..4).prop_flat_map(|(nq, nf)| {
            proptest::collection::vec(
                proptest::collection::vec(
                    (
                        0u8..5,
                        proptest::collection::vec(-1e3f64..1e3, nf),
                        proptest::option::of("[a-z =]{1,8}"),
                    ),
                    1..5,
                ),
                nq,
            )
            .prop_map(move |qs| {
                let queries: Vec<QueryData> = qs
                    .into_iter()
                    .enumerate()
                    .map(|(qi, docs)| QueryData {
                        query_id: format!("q{qi}"),
                        documents: docs
                            .into_iter()
                            .enumerate()
                            .map(|(i, (rel, features, comment))| Document {
                                id: DocumentId(i as u32),
                                features,
                                relevance: rel,
                                comment: comment.map(|c| c.trim().to_string()).filter(|c| !c.is_empty()),
                            })
                            .collect(),
                    })
                    .collect();
                let relevance_max = queries
                    .iter()
                    .flat_map(|q| q.documents.iter().map(|d| d.relevance))
                    .max()
                    .unwrap()
                    .max(1);
                Dataset {
                    queries,
                    feature_count: nf,
                    relevance_max,
                }
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_round_trips(data in dataset_strategy()) {
            let text = serialize_letor(&data);
            let parsed = parse_letor(text.as_bytes()).unwrap();
            prop_assert_eq!(&parsed, &data);
            prop_assert_eq!(serialize_letor(&parsed), text);
        }
    }
}
