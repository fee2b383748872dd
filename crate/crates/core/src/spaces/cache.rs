//! Text cache files for built quotient spaces.
//!
//! ```text
//! jacobi-space
//! format-version: 1
//! kind: Bprime
//! degree: 2
//! content-hash: <sha256 of everything after the separator>
//! ---
//! spanning 6
//! <canonical bytes, one per line>
//! basis 3
//! <spanning indices>
//! reduction
//! <basis-position>=<num/den> ... (one line per spanning diagram)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::quotient::{DiagramSpace, SparseRow};
use crate::diagrams::{CanonicalDiagram, SpaceKind};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, to_fraction_string};

pub const CACHE_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "jacobi-space";
const SEPARATOR: &str = "---\n";

pub fn cache_file_name(degree: usize, kind: SpaceKind) -> String {
    format!("{}-{degree}.space", kind.name())
}

pub fn cache_path(dir: &Path, degree: usize, kind: SpaceKind) -> PathBuf {
    dir.join(cache_file_name(degree, kind))
}

/// Writes `s` into `dir`, returning the file path.
pub fn cache_store(s: &DiagramSpace, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, s.degree(), s.kind());
    let body = encode_body(s);
    let header = format!(
        "{MAGIC}\nformat-version: {CACHE_FORMAT_VERSION}\nkind: {}\ndegree: {}\ncontent-hash: {}\n",
        s.kind().name(),
        s.degree(),
        content_hash(&body)
    );
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, format!("{header}{SEPARATOR}{body}"))?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

pub fn cache_load(degree: usize, kind: SpaceKind, dir: &Path) -> Result<DiagramSpace> {
    let path = cache_path(dir, degree, kind);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::CacheMissing(path.display().to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let header = read_header(&text)?;
    if header.kind != kind || header.degree != degree {
        return Err(Error::CacheIntegrity(format!(
            "{} holds {} degree {}",
            path.display(),
            header.kind,
            header.degree
        )));
    }
    decode_body(kind, degree, header.body)
}

/// Header fields of a cache file, checked for version and hash.
pub struct CacheHeader<'a> {
    pub kind: SpaceKind,
    pub degree: usize,
    pub hash: String,
    body: &'a str,
}

pub fn read_header(text: &str) -> Result<CacheHeader<'_>> {
    let bad = |m: &str| Error::CacheIntegrity(m.to_string());
    let (head, body) = text.split_once(SEPARATOR).ok_or_else(|| bad("missing header separator"))?;
    let mut lines = head.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad("not a space cache file"));
    }
    let mut field = |name: &str| -> Result<String> {
        let line = lines.next().ok_or_else(|| bad("truncated header"))?;
        line.strip_prefix(name)
            .and_then(|r| r.strip_prefix(": "))
            .map(str::to_string)
            .ok_or_else(|| bad(&format!("expected header field {name}")))
    };
    let version: u32 = field("format-version")?.parse().map_err(|_| bad("bad version"))?;
    if version != CACHE_FORMAT_VERSION {
        return Err(Error::CacheVersion {
            found: version,
            expected: CACHE_FORMAT_VERSION,
        });
    }
    let kind = SpaceKind::parse(&field("kind")?).map_err(|_| bad("bad kind"))?;
    let degree = field("degree")?.parse().map_err(|_| bad("bad degree"))?;
    let hash = field("content-hash")?;
    if content_hash(body) != hash {
        return Err(bad("content hash mismatch"));
    }
    Ok(CacheHeader {
        kind,
        degree,
        hash,
        body,
    })
}

fn content_hash(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

fn encode_body(s: &DiagramSpace) -> String {
    let mut out = String::new();
    writeln!(out, "spanning {}", s.spanning().len()).unwrap();
    for d in s.spanning() {
        writeln!(out, "{}", d.bytes()).unwrap();
    }
    writeln!(out, "basis {}", s.dimension()).unwrap();
    let idx: Vec<String> = s.basis_indices().iter().map(|i| i.to_string()).collect();
    writeln!(out, "{}", idx.join(" ")).unwrap();
    writeln!(out, "reduction").unwrap();
    for row in s.reduction_rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|(i, q)| format!("{i}={}", to_fraction_string(q)))
            .collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}

fn decode_body(kind: SpaceKind, degree: usize, body: &str) -> Result<DiagramSpace> {
    let bad = |m: String| Error::CacheIntegrity(m);
    let mut lines = body.lines();
    let mut next = |what: &str| lines.next().ok_or_else(|| bad(format!("truncated body at {what}")));
    let count = |line: &str, tag: &str| -> Result<usize> {
        line.strip_prefix(tag)
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| bad(format!("expected `{tag} <n>`")))
    };
    let n = count(next("spanning")?, "spanning")?;
    let mut spanning = Vec::with_capacity(n);
    for _ in 0..n {
        let d = CanonicalDiagram::from_bytes(next("diagram")?).map_err(|e| bad(e.to_string()))?;
        if d.degree() != degree {
            return Err(bad(format!("diagram of degree {} in degree {degree} file", d.degree())));
        }
        spanning.push(d);
    }
    let k = count(next("basis")?, "basis")?;
    let basis: Vec<usize> = next("basis indices")?
        .split_whitespace()
        .map(|t| t.parse::<usize>().ok().filter(|&i| i < n))
        .collect::<Option<_>>()
        .ok_or_else(|| bad("bad basis index".into()))?;
    if basis.len() != k {
        return Err(bad("basis length mismatch".into()));
    }
    if next("reduction")? != "reduction" {
        return Err(bad("expected reduction section".into()));
    }
    let mut reduction = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = SparseRow::new();
        for cell in next("reduction row")?.split_whitespace() {
            let (i, q) = cell.split_once('=').ok_or_else(|| bad(format!("bad cell {cell}")))?;
            let i: usize = i.parse().ok().filter(|&i| i < k).ok_or_else(|| bad(format!("bad cell {cell}")))?;
            row.push((i, parse_rational(q).map_err(|_| bad(format!("bad cell {cell}")))?));
        }
        reduction.push(row);
    }
    if lines.next().is_some() {
        return Err(bad("trailing data".into()));
    }
    Ok(DiagramSpace::from_parts(kind, degree, spanning, basis, reduction))
}
