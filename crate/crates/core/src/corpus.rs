//! Streaming reader for files of graph6 lines.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6::parse_graph6;

const HEADER: &[u8] = b">>graph6<<";

#[derive(Clone, Copy, Debug, Default)]
pub struct IngestOptions {
    /// Count malformed lines and move on instead of failing.
    pub skip_bad: bool,
}

/// Lazily parses one graph per line. Blank lines are ignored and the
/// optional `>>graph6<<` header is accepted on the first line.
pub struct CorpusReader<R> {
    input: R,
    line: usize,
    buf: Vec<u8>,
    opts: IngestOptions,
    skipped: usize,
    done: bool,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(input: R, opts: IngestOptions) -> Self {
        CorpusReader {
            input,
            line: 0,
            buf: Vec::new(),
            opts,
            skipped: 0,
            done: false,
        }
    }

    /// Malformed lines passed over so far (only with `skip_bad`).
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// 1-based number of the last line read.
    pub fn line(&self) -> usize {
        self.line
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<Graph>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            match self.input.read_until(b'\n', &mut self.buf) {
                Ok(0) => {
                    self.done = true;
                    return None;
                }
                Ok(_) => {}
                Err(e) => {
                    self.done = true;
                    return Some(Err(Error::Ingest {
                        line: self.line + 1,
                        source: Box::new(e.into()),
                    }));
                }
            }
            self.line += 1;
            let mut text = self.buf.as_slice();
            if let Some(rest) = text.strip_suffix(b"\n") {
                text = rest;
            }
            if let Some(rest) = text.strip_suffix(b"\r") {
                text = rest;
            }
            if self.line == 1 {
                if let Some(rest) = text.strip_prefix(HEADER) {
                    text = rest;
                }
            }
            if text.is_empty() {
                continue;
            }
            match parse_graph6(text) {
                Ok(g) => return Some(Ok(g)),
                Err(_) if self.opts.skip_bad => self.skipped += 1,
                Err(e) => {
                    return Some(Err(Error::Ingest {
                        line: self.line,
                        source: Box::new(e),
                    }))
                }
            }
        }
        None
    }
}

pub fn ingest_corpus(path: impl AsRef<Path>, opts: IngestOptions) -> Result<CorpusReader<BufReader<File>>> {
    let file = File::open(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    Ok(CorpusReader::new(BufReader::new(file), opts))
}
