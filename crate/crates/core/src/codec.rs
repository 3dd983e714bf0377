//! File formats: `planar_code` (binary, single-byte variant), the embedding
//! text format and the colouring text format.
//!
//! A `planar_code` stream is the 15-byte header `>>planar_code<<` followed by
//! records. Each record is the vertex count `n` as one byte, then for every
//! vertex `1..=n` its neighbours (1-based) in rotation order, terminated by
//! a 0 byte. Rotation order is read as counter-clockwise; reading a file
//! written with the opposite convention yields the mirror map, which has
//! the same underlying graph.

use std::fmt::Write as _;
use std::io::{BufRead, ErrorKind};

use thiserror::Error;

use crate::embedder::QualityReport;
use crate::planar_map::{MapError, PlanarMap};

pub const PLANAR_CODE_HEADER: &[u8; 15] = b">>planar_code<<";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error("missing or malformed >>planar_code<< header")]
    BadHeader,
    #[error("unsupported planar_code variant: {0}")]
    UnsupportedExtension(String),
    #[error("record {record} is truncated")]
    TruncatedRecord { record: usize },
    #[error("record {record}: neighbour {value} out of range for n = {n}")]
    NeighborOutOfRange { record: usize, value: u8, n: usize },
    #[error("record {record}: vertex {u} lists {v} but {v} does not list {u} back")]
    AsymmetricAdjacency { record: usize, u: usize, v: usize },
    #[error("record {record}: {source}")]
    InvalidMap { record: usize, source: MapError },
    #[error("map with {0} vertices does not fit the single-byte format")]
    TooLarge(usize),
    #[error("map is not simple and cannot be written as planar_code")]
    NotSimple,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("read failed: {0}")]
    Io(String),
}

/// Parses a complete `planar_code` stream.
pub fn read_planar_code(bytes: &[u8]) -> Result<Vec<PlanarMap>, CodecError> {
    let body = strip_header(bytes)?;
    let mut maps = Vec::new();
    let mut pos = 0;
    while pos < body.len() {
        let record = maps.len();
        let (map, used) = read_record(&body[pos..], record)?;
        maps.push(map);
        pos += used;
    }
    Ok(maps)
}

fn strip_header(bytes: &[u8]) -> Result<&[u8], CodecError> {
    if bytes.starts_with(PLANAR_CODE_HEADER) {
        return Ok(&bytes[PLANAR_CODE_HEADER.len()..]);
    }
    let prefix = b">>planar_code ";
    if bytes.starts_with(prefix) {
        let rest = &bytes[prefix.len()..];
        let end = rest
            .windows(2)
            .position(|w| w == b"<<")
            .map_or(rest.len().min(16), |p| p);
        let ext = String::from_utf8_lossy(&rest[..end]).into_owned();
        return Err(CodecError::UnsupportedExtension(ext));
    }
    Err(CodecError::BadHeader)
}

fn read_record(buf: &[u8], record: usize) -> Result<(PlanarMap, usize), CodecError> {
    let n = buf[0] as usize;
    if n == 0 {
        return Err(CodecError::UnsupportedExtension(
            "two-byte records (leading zero vertex count)".into(),
        ));
    }
    let mut pos = 1;
    let mut rotations = Vec::with_capacity(n);
    for _ in 0..n {
        let mut rot = Vec::new();
        loop {
            let Some(&b) = buf.get(pos) else {
                return Err(CodecError::TruncatedRecord { record });
            };
            pos += 1;
            if b == 0 {
                break;
            }
            if b as usize > n {
                return Err(CodecError::NeighborOutOfRange { record, value: b, n });
            }
            rot.push(b as usize - 1);
        }
        rotations.push(rot);
    }
    for (u, rot) in rotations.iter().enumerate() {
        for &v in rot {
            let forward = rot.iter().filter(|&&w| w == v).count();
            let back = rotations[v].iter().filter(|&&w| w == u).count();
            if forward != back {
                return Err(CodecError::AsymmetricAdjacency {
                    record,
                    u: u + 1,
                    v: v + 1,
                });
            }
        }
    }
    let map = PlanarMap::from_rotations(&rotations)
        .map_err(|source| CodecError::InvalidMap { record, source })?;
    Ok((map, pos))
}

/// Streaming `planar_code` reader for pools too large to hold as bytes.
pub struct PlanarCodeReader<R> {
    inner: R,
    record: usize,
    buf: Vec<u8>,
    failed: bool,
}

impl<R: BufRead> PlanarCodeReader<R> {
    /// Consumes and checks the header.
    pub fn new(mut inner: R) -> Result<Self, CodecError> {
        let mut head = vec![0u8; PLANAR_CODE_HEADER.len()];
        let mut got = 0;
        while got < head.len() {
            match inner.read(&mut head[got..]) {
                Ok(0) => break,
                Ok(k) => got += k,
                Err(e) if e.kind() == ErrorKind::Interrupted => {}
                Err(e) => return Err(CodecError::Io(e.to_string())),
            }
        }
        head.truncate(got);
        if head.as_slice() != PLANAR_CODE_HEADER {
            // Reuse the slice parser's diagnosis (bad vs unsupported header).
            let mut probe = head;
            probe.extend_from_slice(inner.fill_buf().unwrap_or(&[]));
            strip_header(&probe)?;
            return Err(CodecError::BadHeader);
        }
        Ok(PlanarCodeReader {
            inner,
            record: 0,
            buf: Vec::new(),
            failed: false,
        })
    }

    fn next_byte(&mut self) -> Result<Option<u8>, CodecError> {
        let buf = match self.inner.fill_buf() {
            Ok(b) => b,
            Err(e) if e.kind() == ErrorKind::Interrupted => return self.next_byte(),
            Err(e) => return Err(CodecError::Io(e.to_string())),
        };
        let Some(&b) = buf.first() else {
            return Ok(None);
        };
        self.inner.consume(1);
        Ok(Some(b))
    }

    fn read_raw(&mut self) -> Result<Option<PlanarMap>, CodecError> {
        let Some(n) = self.next_byte()? else {
            return Ok(None);
        };
        self.buf.clear();
        self.buf.push(n);
        let mut zeros = 0;
        while n != 0 && zeros < n as usize {
            match self.next_byte()? {
                Some(b) => {
                    self.buf.push(b);
                    zeros += usize::from(b == 0);
                }
                None => break,
            }
        }
        let (map, _) = read_record(&self.buf, self.record)?;
        self.record += 1;
        Ok(Some(map))
    }
}

impl<R: BufRead> Iterator for PlanarCodeReader<R> {
    type Item = Result<PlanarMap, CodecError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let out = self.read_raw().transpose();
        if matches!(out, Some(Err(_))) {
            self.failed = true;
        }
        out
    }
}

/// Serialises maps as a `planar_code` stream. Rotations start at each
/// vertex's lowest dart.
pub fn write_planar_code(maps: &[PlanarMap]) -> Result<Vec<u8>, CodecError> {
    let mut out = PLANAR_CODE_HEADER.to_vec();
    for map in maps {
        let n = map.vertex_count();
        if n > 255 {
            return Err(CodecError::TooLarge(n));
        }
        if !map.is_simple() {
            return Err(CodecError::NotSimple);
        }
        out.push(n as u8);
        for rot in map.rotations() {
            out.extend(rot.iter().map(|&v| (v + 1) as u8));
            out.push(0);
        }
    }
    Ok(out)
}

/// Contents of an embedding file.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingFile {
    /// `key: value` header comments, e.g. the command line and seed.
    pub meta: Vec<(String, String)>,
    pub points: Vec<[f64; 3]>,
    pub report: Option<QualityReport>,
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes one `id x y z` line per vertex with 17 significant digits, then a
/// `#` comment block holding the report.
pub fn write_embedding(
    points: &[[f64; 3]],
    report: Option<&QualityReport>,
    meta: &[(String, String)],
) -> String {
    let mut s = String::new();
    s.push_str("# reuleaux embedding\n");
    for (k, v) in meta {
        let _ = writeln!(s, "# {k}: {v}");
    }
    for (i, p) in points.iter().enumerate() {
        let _ = writeln!(s, "{i} {} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(p[2]));
    }
    if let Some(r) = report {
        s.push_str("# report\n");
        let _ = writeln!(s, "# J = {}", fmt_f64(r.objective));
        let _ = writeln!(s, "# max_edge_error = {}", fmt_f64(r.max_edge_error));
        let _ = writeln!(s, "# avg_edge_error = {}", fmt_f64(r.avg_edge_error));
        let _ = writeln!(s, "# min_pair_distance = {}", fmt_f64(r.min_pair_distance));
        let _ = writeln!(s, "# diameter = {}", fmt_f64(r.diameter));
        let _ = writeln!(s, "# injective = {}", r.injective);
        let _ = writeln!(s, "# generations_used = {}", r.generations_used);
        let _ = writeln!(s, "# restarts_used = {}", r.restarts_used);
    }
    s
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T, CodecError> {
    Err(CodecError::Parse {
        line,
        msg: msg.into(),
    })
}

pub fn read_embedding(text: &str) -> Result<EmbeddingFile, CodecError> {
    let mut meta = Vec::new();
    let mut points = Vec::new();
    let mut fields: Vec<(String, String, usize)> = Vec::new();
    let mut in_report = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim();
            if c == "report" {
                in_report = true;
            } else if in_report {
                if let Some((k, v)) = c.split_once('=') {
                    fields.push((k.trim().to_string(), v.trim().to_string(), line_no));
                }
            } else if let Some((k, v)) = c.split_once(": ") {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 {
            return parse_err(line_no, "expected `id x y z`");
        }
        let id: usize = toks[0]
            .parse()
            .or_else(|_| parse_err(line_no, "bad vertex id"))?;
        if id != points.len() {
            return parse_err(line_no, format!("vertex id {id} out of sequence"));
        }
        let mut p = [0.0; 3];
        for (k, t) in toks[1..].iter().enumerate() {
            p[k] = t.parse().or_else(|_| parse_err(line_no, "bad coordinate"))?;
        }
        points.push(p);
    }
    let report = if in_report {
        let get = |key: &str| -> Result<(String, usize), CodecError> {
            fields
                .iter()
                .find(|(k, _, _)| k == key)
                .map(|(_, v, l)| (v.clone(), *l))
                .ok_or(CodecError::Parse {
                    line: 0,
                    msg: format!("report field `{key}` missing"),
                })
        };
        let num = |key: &str| -> Result<f64, CodecError> {
            let (v, l) = get(key)?;
            v.parse().or_else(|_| parse_err(l, format!("bad value for `{key}`")))
        };
        let int = |key: &str| -> Result<usize, CodecError> {
            let (v, l) = get(key)?;
            v.parse().or_else(|_| parse_err(l, format!("bad value for `{key}`")))
        };
        let (inj, inj_line) = get("injective")?;
        Some(QualityReport {
            objective: num("J")?,
            max_edge_error: num("max_edge_error")?,
            avg_edge_error: num("avg_edge_error")?,
            min_pair_distance: num("min_pair_distance")?,
            diameter: num("diameter")?,
            injective: inj
                .parse()
                .or_else(|_| parse_err(inj_line, "bad value for `injective`"))?,
            generations_used: int("generations_used")?,
            restarts_used: int("restarts_used")?,
        })
    } else {
        None
    };
    Ok(EmbeddingFile {
        meta,
        points,
        report,
    })
}

/// One `id color` line per vertex, after optional `# key: value` comments.
pub fn write_coloring(colors: &[u8], meta: &[(String, String)]) -> String {
    let mut s = String::from("# reuleaux coloring\n");
    for (k, v) in meta {
        let _ = writeln!(s, "# {k}: {v}");
    }
    for (i, c) in colors.iter().enumerate() {
        let _ = writeln!(s, "{i} {c}");
    }
    s
}

pub fn read_coloring(text: &str) -> Result<Vec<u8>, CodecError> {
    let mut colors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let (Some(id), Some(c), None) = (toks.next(), toks.next(), toks.next()) else {
            return parse_err(idx + 1, "expected `id color`");
        };
        if id.parse::<usize>().ok() != Some(colors.len()) {
            return parse_err(idx + 1, "vertex id out of sequence");
        }
        match c.parse::<u8>() {
            Ok(c) if c < 4 => colors.push(c),
            _ => return parse_err(idx + 1, "color must be 0, 1, 2 or 3"),
        }
    }
    Ok(colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn with_header(body: &[u8]) -> Vec<u8> {
        let mut v = PLANAR_CODE_HEADER.to_vec();
        v.extend_from_slice(body);
        v
    }

    #[test]
    fn reads_k4_record() {
        let bytes = with_header(&[4, 2, 3, 4, 0, 1, 4, 3, 0, 1, 2, 4, 0, 1, 3, 2, 0]);
        let maps = read_planar_code(&bytes).unwrap();
        assert_eq!(maps.len(), 1);
        let k4 = &maps[0];
        assert_eq!(k4.vertex_count(), 4);
        assert_eq!(k4.face_count(), 4);
        assert!(k4.faces().iter().all(|f| f.size() == 3));
        assert_eq!(k4.vertex_count() + k4.face_count(), k4.edge_count() + 2);
    }

    #[test]
    fn header_only_is_empty() {
        assert!(read_planar_code(PLANAR_CODE_HEADER).unwrap().is_empty());
        assert_eq!(write_planar_code(&[]).unwrap(), PLANAR_CODE_HEADER.to_vec());
    }

    #[test]
    fn k4_writes_seventeen_payload_bytes() {
        let out = write_planar_code(&[families::tetrahedron()]).unwrap();
        assert_eq!(out.len() - PLANAR_CODE_HEADER.len(), 17);
    }

    #[test]
    fn header_errors() {
        assert_eq!(read_planar_code(b">>graph6<<"), Err(CodecError::BadHeader));
        assert_eq!(read_planar_code(b""), Err(CodecError::BadHeader));
        assert!(matches!(
            read_planar_code(b">>planar_code le<<\x04"),
            Err(CodecError::UnsupportedExtension(e)) if e == "le"
        ));
        assert!(matches!(
            read_planar_code(&with_header(&[0, 4, 0])),
            Err(CodecError::UnsupportedExtension(_))
        ));
    }

    #[test]
    fn record_errors() {
        assert_eq!(
            read_planar_code(&with_header(&[4, 2, 3, 4, 0, 1, 4])),
            Err(CodecError::TruncatedRecord { record: 0 })
        );
        assert_eq!(
            read_planar_code(&with_header(&[4, 2, 3, 5, 0])),
            Err(CodecError::NeighborOutOfRange {
                record: 0,
                value: 5,
                n: 4
            })
        );
        // Vertex 4 omits vertex 1.
        assert!(matches!(
            read_planar_code(&with_header(&[4, 2, 3, 4, 0, 1, 4, 3, 0, 1, 2, 4, 0, 3, 2, 0])),
            Err(CodecError::AsymmetricAdjacency { record: 0, .. })
        ));
    }

    #[test]
    fn round_trip_preserves_rotations() {
        let maps = vec![families::tetrahedron(), families::wheel(5), families::cube()];
        let bytes = write_planar_code(&maps).unwrap();
        let back = read_planar_code(&bytes).unwrap();
        for (a, b) in maps.iter().zip(&back) {
            assert_eq!(a.rotations(), b.rotations());
        }
        assert_eq!(write_planar_code(&back).unwrap(), bytes);
    }

    #[test]
    fn streaming_reader_agrees_with_slice_reader() {
        let maps = vec![families::tetrahedron(), families::wheel(5), families::cube()];
        let bytes = write_planar_code(&maps).unwrap();
        let streamed: Vec<PlanarMap> = PlanarCodeReader::new(&bytes[..])
            .unwrap()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(streamed, read_planar_code(&bytes).unwrap());
        let cut = &bytes[..bytes.len() - 3];
        let results: Vec<_> = PlanarCodeReader::new(cut).unwrap().collect();
        assert_eq!(results.len(), 3);
        assert_eq!(results[2], Err(CodecError::TruncatedRecord { record: 2 }));
        assert!(matches!(
            PlanarCodeReader::new(&b">>planar_code le<<"[..]),
            Err(CodecError::UnsupportedExtension(_))
        ));
        assert!(matches!(
            PlanarCodeReader::new(&b"junk"[..]),
            Err(CodecError::BadHeader)
        ));
    }

    #[test]
    fn concatenation_parses_as_union() {
        let a = write_planar_code(&[families::tetrahedron()]).unwrap();
        let b = write_planar_code(&[families::wheel(5)]).unwrap();
        let mut joined = a.clone();
        joined.extend_from_slice(&b[PLANAR_CODE_HEADER.len()..]);
        assert_eq!(read_planar_code(&joined).unwrap().len(), 2);
    }

    #[test]
    fn embedding_text_round_trip() {
        let s = 1.0 / 2f64.sqrt();
        let pts = vec![[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s], [s, s, s]];
        let text = write_embedding(&pts, None, &[("seed".into(), "7".into())]);
        let back = read_embedding(&text).unwrap();
        assert_eq!(back.points.len(), 4);
        for (a, b) in pts.iter().zip(&back.points) {
            for k in 0..3 {
                assert_eq!(a[k].to_bits(), b[k].to_bits());
            }
        }
        assert_eq!(back.meta, vec![("seed".to_string(), "7".to_string())]);
        assert!(back.report.is_none());
    }

    #[test]
    fn embedding_report_round_trip() {
        let report = QualityReport {
            objective: 3.2e-15,
            max_edge_error: 1.0e-8,
            avg_edge_error: 4.0e-9,
            min_pair_distance: 0.3141592653589793,
            diameter: 1.0000000001,
            injective: true,
            generations_used: 1234,
            restarts_used: 1,
        };
        let text = write_embedding(&[[0.0, 0.0, 0.0]], Some(&report), &[]);
        assert!(text.contains("# J = 3.1999999999999999e-15"));
        assert_eq!(read_embedding(&text).unwrap().report, Some(report));
    }

    #[test]
    fn coloring_round_trip_and_errors() {
        let colors = vec![0, 1, 2, 3, 1];
        let text = write_coloring(&colors, &[]);
        assert_eq!(read_coloring(&text).unwrap(), colors);
        assert!(read_coloring("0 4\n").is_err());
        assert!(read_coloring("1 0\n").is_err());
    }
}
