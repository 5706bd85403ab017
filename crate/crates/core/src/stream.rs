//! Line-per-hyperedge stream input.
//!
//! Each non-empty line holds the decimal vertex ids of one hyperedge,
//! separated by spaces or tabs. Lines whose first non-blank character is
//! `#` are comments. Line order is arrival order.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph, VertexId};

/// A streaming hyperedge reader that tracks how much input it consumed.
/// Memory use is bounded by the longest line.
pub struct StreamSource<R> {
    reader: R,
    origin: String,
    line: String,
    bytes_read: u64,
    line_number: u64,
    next_arrival: u64,
    deduplicated_lines: u64,
}

impl StreamSource<Box<dyn BufRead>> {
    /// Opens `path`, or standard input when `path` is `-`.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if path.as_os_str() == "-" {
            return Ok(StreamSource::new(
                Box::new(BufReader::new(io::stdin())) as Box<dyn BufRead>,
                "<stdin>",
            ));
        }
        let file = File::open(path)?;
        Ok(StreamSource::new(
            Box::new(BufReader::new(file)) as Box<dyn BufRead>,
            path.display().to_string(),
        ))
    }
}

impl<R: BufRead> StreamSource<R> {
    pub fn new(reader: R, origin: impl Into<String>) -> Self {
        StreamSource {
            reader,
            origin: origin.into(),
            line: String::new(),
            bytes_read: 0,
            line_number: 0,
            next_arrival: 1,
            deduplicated_lines: 0,
        }
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    /// Raw bytes consumed so far, newlines included.
    pub fn bytes_read(&self) -> u64 {
        self.bytes_read
    }

    pub fn line_number(&self) -> u64 {
        self.line_number
    }

    /// Lines that repeated a vertex id and were deduplicated.
    pub fn deduplicated_lines(&self) -> u64 {
        self.deduplicated_lines
    }

    fn parse_line(&mut self) -> Option<Result<Hyperedge>> {
        let text = self.line.trim_end_matches(['\n', '\r']);
        let body = text.trim_start_matches([' ', '\t']);
        if body.is_empty() || body.starts_with('#') {
            return None;
        }
        let line = self.line_number;
        let mut vertices = Vec::new();
        for token in body.split([' ', '\t']).filter(|t| !t.is_empty()) {
            if !token.bytes().all(|b| b.is_ascii_digit()) {
                return Some(Err(Error::Parse {
                    line,
                    message: format!("'{token}' is not a non-negative integer"),
                }));
            }
            match token.parse::<u32>() {
                Ok(v) => vertices.push(VertexId(v)),
                Err(_) => {
                    return Some(Err(Error::Parse {
                        line,
                        message: format!("vertex id '{token}' does not fit in 32 bits"),
                    }))
                }
            }
        }
        let arrival = self.next_arrival;
        Some(
            Hyperedge::new_reporting_duplicates(arrival, vertices).map(|(e, dropped)| {
                if dropped > 0 {
                    self.deduplicated_lines += 1;
                    log::warn!(
                        "{}:{line}: dropped {dropped} duplicate vertex id(s)",
                        self.origin
                    );
                }
                self.next_arrival += 1;
                e
            }),
        )
    }
}

impl<R: BufRead> Iterator for StreamSource<R> {
    type Item = Result<Hyperedge>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.line.clear();
            let n = match self.reader.read_line(&mut self.line) {
                Ok(0) => return None,
                Ok(n) => n,
                Err(e) if e.kind() == io::ErrorKind::InvalidData => {
                    return Some(Err(Error::Parse {
                        line: self.line_number + 1,
                        message: "input is not valid UTF-8".into(),
                    }))
                }
                Err(e) => return Some(Err(e.into())),
            };
            self.bytes_read += n as u64;
            self.line_number += 1;
            if let Some(item) = self.parse_line() {
                return Some(item);
            }
        }
    }
}

/// Reads a whole stream into memory.
pub fn parse_stream<R: BufRead>(reader: R) -> Result<Hypergraph> {
    let edges = StreamSource::new(reader, "<input>").collect::<Result<Vec<_>>>()?;
    Hypergraph::new(edges)
}

pub fn parse_str(text: &str) -> Result<Hypergraph> {
    parse_stream(text.as_bytes())
}

/// Writes a hypergraph in the line format accepted by [`parse_stream`].
pub fn write_stream<W: io::Write>(h: &Hypergraph, mut out: W) -> io::Result<()> {
    for e in h.edges() {
        let mut first = true;
        for v in e.vertices() {
            if !first {
                out.write_all(b" ")?;
            }
            first = false;
            write!(out, "{v}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_edges() {
        let h = parse_str("1 2 3\n2 3 4\n").unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.edges()[0].to_string(), "{1,2,3}");
        assert_eq!(h.edges()[1].to_string(), "{2,3,4}");
        assert_eq!(h.edges()[1].arrival(), 2);
    }

    #[test]
    fn comments_blank_lines_and_duplicates() {
        let mut src = StreamSource::new("# header\n\n5 5 6\n".as_bytes(), "t");
        let e = src.next().unwrap().unwrap();
        assert_eq!(e.to_string(), "{5,6}");
        assert_eq!(e.arrival(), 1);
        assert!(src.next().is_none());
        assert_eq!(src.deduplicated_lines(), 1);
        assert_eq!(src.line_number(), 3);
        assert_eq!(src.bytes_read(), 16);
    }

    #[test]
    fn malformed_token_names_the_line() {
        match parse_str("1 x 3") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse_str("1 2\n\n4 -5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(parse_str("99999999999").is_err());
        assert!(parse_str("+5").is_err());
    }

    #[test]
    fn tabs_crlf_and_empty_input() {
        let h = parse_str("1\t2  3\r\n\t# indented comment\n7\n").unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.edges()[0].len(), 3);
        assert!(parse_str("").unwrap().is_empty());
    }

    #[test]
    fn invalid_utf8_is_a_parse_error() {
        let bytes: &[u8] = b"1 2\n\xff\xfe\n";
        let r = parse_stream(bytes);
        assert!(matches!(r, Err(Error::Parse { line: 2, .. })), "{r:?}");
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(lists in prop::collection::vec(
            prop::collection::btree_set(0u32..1000, 1..10), 0..30)) {
            let h = Hypergraph::from_vertex_lists(lists).unwrap();
            let mut buf = Vec::new();
            write_stream(&h, &mut buf).unwrap();
            prop_assert_eq!(parse_stream(buf.as_slice()).unwrap(), h);
        }
    }
}
