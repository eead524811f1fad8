//! Reading and writing LETOR / SVMlight style ranking data:
//! `grade qid:Q fid:value fid:value ... # comment`.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use mdb_core::ltr::{Document, LtrDataset};

#[derive(Debug, thiserror::Error)]
pub enum LetorError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_line(text: &str) -> Result<Option<(u64, Document)>, String> {
    let body = text.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let mut tokens = body.split_whitespace();
    let grade_tok = tokens.next().ok_or("missing grade")?;
    let grade: u8 = grade_tok
        .parse()
        .map_err(|_| format!("invalid relevance grade `{grade_tok}`"))?;
    let qid_tok = tokens.next().ok_or("missing qid")?;
    let qid: u64 = qid_tok
        .strip_prefix("qid:")
        .and_then(|q| q.parse().ok())
        .ok_or_else(|| format!("expected `qid:<integer>`, found `{qid_tok}`"))?;
    let mut features = Vec::new();
    for tok in tokens {
        let (f, v) = tok
            .split_once(':')
            .ok_or_else(|| format!("expected `feature:value`, found `{tok}`"))?;
        let f: u32 = f.parse().map_err(|_| format!("invalid feature id in `{tok}`"))?;
        let v: f64 = v.parse().map_err(|_| format!("invalid feature value in `{tok}`"))?;
        if !v.is_finite() {
            return Err(format!("non-finite feature value in `{tok}`"));
        }
        features.push((f, v));
    }
    let doc = Document::new(grade, features).map_err(|e| e.to_string())?;
    Ok(Some((qid, doc)))
}

pub fn parse_letor<R: BufRead>(reader: R) -> Result<LtrDataset, LetorError> {
    let mut ds = LtrDataset::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        match parse_line(&line) {
            Ok(Some((qid, doc))) => ds.push(qid, doc),
            Ok(None) => {}
            Err(msg) => return Err(LetorError::Parse { line: i + 1, msg }),
        }
    }
    Ok(ds)
}

pub fn parse_letor_str(text: &str) -> Result<LtrDataset, LetorError> {
    parse_letor(text.as_bytes())
}

/// Reads a dataset from `path`, or standard input when `path` is `-`.
pub fn read_letor(path: &Path) -> Result<LtrDataset, LetorError> {
    if path == Path::new("-") {
        return parse_letor(io::stdin().lock());
    }
    parse_letor(BufReader::new(File::open(path)?))
}

pub fn write_letor<W: Write>(ds: &LtrDataset, mut w: W) -> io::Result<()> {
    for q in ds.queries() {
        for d in &q.docs {
            write!(w, "{} qid:{}", d.grade, q.id)?;
            for (f, v) in d.features() {
                write!(w, " {f}:{v}")?;
            }
            writeln!(w)?;
        }
    }
    w.flush()
}
