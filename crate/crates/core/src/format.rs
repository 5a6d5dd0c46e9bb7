//! Plain-text files: ideals, free-algebra ideals, reconstruction results,
//! key files and ciphertext lists. Lines starting with `#` and blank lines
//! are ignored everywhere.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::crypto::PublicKey;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::ncpoly::NcPolynomial;
use crate::poly::Polynomial;
use crate::staircase::StaircaseResult;
use crate::term::{Monomial, OrderKind, TermOrder};
use crate::word::WordOrder;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// `keyword k1=v1 k2=v2 ...`
fn parse_header(line: &str, keyword: &str) -> Result<HashMap<String, String>> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(Error::Parse(format!("expected a '{keyword}' header, got '{line}'")));
    }
    parts
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Parse(format!("malformed header field '{kv}'")))
        })
        .collect()
}

fn field_value<T: std::str::FromStr>(h: &HashMap<String, String>, key: &str) -> Result<Option<T>> {
    h.get(key)
        .map(|v| v.parse().map_err(|_| Error::Parse(format!("bad value '{v}' for {key}"))))
        .transpose()
}

fn required<T: std::str::FromStr>(h: &HashMap<String, String>, key: &str) -> Result<T> {
    field_value(h, key)?.ok_or_else(|| Error::Parse(format!("header is missing {key}=")))
}

fn ring_of(h: &HashMap<String, String>) -> Result<(usize, PrimeField)> {
    let n: usize = required(h, "n")?;
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    let p = field_value(h, "p")?.unwrap_or(PrimeField::DEFAULT_PRIME);
    Ok((n, PrimeField::new(p)?))
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Parse(format!("line {line}: {e}")))
}

/// A commutative ideal file: `ring n=<n> p=<p> order=<kind>` then one
/// polynomial per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealFile {
    pub nvars: usize,
    pub field: PrimeField,
    pub ord: TermOrder,
    pub polys: Vec<Polynomial>,
}

impl IdealFile {
    pub fn parse(text: &str) -> Result<IdealFile> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| Error::Parse("empty ideal file".into()))?;
        let h = at_line(ln, parse_header(header, "ring"))?;
        let (nvars, field) = at_line(ln, ring_of(&h))?;
        let kind: OrderKind = at_line(ln, field_value(&h, "order"))?.unwrap_or(OrderKind::DegLex);
        let polys = lines
            .map(|(ln, l)| at_line(ln, Polynomial::parse(l, nvars, field)))
            .collect::<Result<_>>()?;
        Ok(IdealFile {
            nvars,
            field,
            ord: TermOrder::new(kind, nvars),
            polys,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("ring n={} p={} order={}\n", self.nvars, self.field.modulus(), self.ord.kind());
        for f in &self.polys {
            let _ = writeln!(s, "{}", f.format_with(&self.ord));
        }
        s
    }
}

/// A free-algebra ideal file: `free n=<n> p=<p>` then one polynomial per
/// line. Words are ordered by deglex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeFile {
    pub nvars: usize,
    pub field: PrimeField,
    pub polys: Vec<NcPolynomial>,
}

impl FreeFile {
    pub fn parse(text: &str) -> Result<FreeFile> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| Error::Parse("empty free-algebra file".into()))?;
        let h = at_line(ln, parse_header(header, "free"))?;
        let (nvars, field) = at_line(ln, ring_of(&h))?;
        let polys = lines
            .map(|(ln, l)| at_line(ln, NcPolynomial::parse(l, nvars, field)))
            .collect::<Result<_>>()?;
        Ok(FreeFile { nvars, field, polys })
    }

    pub fn ord(&self) -> WordOrder {
        WordOrder::deglex(self.nvars)
    }

    pub fn to_text(&self) -> String {
        let ord = self.ord();
        let mut s = format!("free n={} p={}\n", self.nvars, self.field.modulus());
        for f in &self.polys {
            let _ = writeln!(s, "{}", f.format_with(&ord));
        }
        s
    }
}

/// `generators k=<k> D=<D>`, the generators, `basis`, the basis
/// polynomials, then `queries <N>`.
pub fn write_result(r: &StaircaseResult, ord: &TermOrder) -> String {
    let mut s = format!("generators k={} D={}\n", r.generators.len(), r.bound);
    for t in &r.generators {
        let _ = writeln!(s, "{t}");
    }
    s.push_str("basis\n");
    for f in &r.reduced_basis {
        let _ = writeln!(s, "{}", f.format_with(ord));
    }
    let _ = writeln!(s, "queries {}", r.queries_used);
    s
}

pub fn parse_result(text: &str, nvars: usize, field: PrimeField) -> Result<StaircaseResult> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::Parse("empty result file".into()))?;
    let h = at_line(ln, parse_header(header, "generators"))?;
    let k: usize = at_line(ln, required(&h, "k"))?;
    let bound: u32 = at_line(ln, required(&h, "D"))?;
    let mut generators = Vec::with_capacity(k);
    let mut reduced_basis = Vec::with_capacity(k);
    let mut queries = None;
    let mut in_basis = false;
    for (ln, l) in lines {
        if l == "basis" {
            in_basis = true;
        } else if let Some(q) = l.strip_prefix("queries ") {
            queries = Some(at_line(ln, q.trim().parse().map_err(|_| Error::Parse(format!("bad count '{q}'"))))?);
        } else if in_basis {
            reduced_basis.push(at_line(ln, Polynomial::parse(l, nvars, field))?);
        } else {
            generators.push(at_line(ln, Monomial::parse(l, nvars))?);
        }
    }
    if generators.len() != k || reduced_basis.len() != k {
        return Err(Error::Parse(format!(
            "expected {k} generators and basis elements, found {} and {}",
            generators.len(),
            reduced_basis.len()
        )));
    }
    Ok(StaircaseResult {
        generators,
        reduced_basis,
        queries_used: queries.ok_or_else(|| Error::Parse("missing queries line".into()))?,
        bound,
    })
}

/// `public n= p= order= delta= cap=`, then a `G` section of polynomials and
/// a `T` section of terms.
pub fn write_public_key(pk: &PublicKey) -> String {
    let mut s = format!(
        "public n={} p={} order={} delta={} cap={}\nG\n",
        pk.nvars,
        pk.field.modulus(),
        pk.ord.kind(),
        pk.delta,
        pk.cap
    );
    for g in &pk.g {
        let _ = writeln!(s, "{}", g.format_with(&pk.ord));
    }
    s.push_str("T\n");
    for t in &pk.t {
        let _ = writeln!(s, "{t}");
    }
    s
}

pub fn parse_public_key(text: &str) -> Result<PublicKey> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::Parse("empty key file".into()))?;
    let h = at_line(ln, parse_header(header, "public"))?;
    let (nvars, field) = at_line(ln, ring_of(&h))?;
    let kind: OrderKind = at_line(ln, required(&h, "order"))?;
    let delta = at_line(ln, required(&h, "delta"))?;
    let cap = at_line(ln, required(&h, "cap"))?;
    let (mut g, mut t) = (Vec::new(), Vec::new());
    let mut section = None;
    for (ln, l) in lines {
        match (l, section) {
            ("G", _) => section = Some('G'),
            ("T", _) => section = Some('T'),
            (_, Some('G')) => g.push(at_line(ln, Polynomial::parse(l, nvars, field))?),
            (_, Some('T')) => t.push(at_line(ln, Monomial::parse(l, nvars))?),
            _ => return Err(Error::Parse(format!("line {ln}: expected a G or T section"))),
        }
    }
    Ok(PublicKey {
        nvars,
        field,
        ord: TermOrder::new(kind, nvars),
        g,
        t,
        delta,
        cap,
    })
}

/// `cipher n=<n> p=<p>` then one polynomial per line.
pub fn write_polys(keyword: &str, nvars: usize, field: PrimeField, polys: &[Polynomial], ord: &TermOrder) -> String {
    let mut s = format!("{keyword} n={nvars} p={}\n", field.modulus());
    for f in polys {
        let _ = writeln!(s, "{}", f.format_with(ord));
    }
    s
}

pub fn parse_polys(text: &str, keyword: &str) -> Result<(usize, PrimeField, Vec<Polynomial>)> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::Parse(format!("empty {keyword} file")))?;
    let h = at_line(ln, parse_header(header, keyword))?;
    let (nvars, field) = at_line(ln, ring_of(&h))?;
    let polys = lines
        .map(|(ln, l)| at_line(ln, Polynomial::parse(l, nvars, field)))
        .collect::<Result<_>>()?;
    Ok((nvars, field, polys))
}

/// The `H` file written by the free-algebra recovery.
pub fn write_h(nvars: usize, field: PrimeField, h: &[NcPolynomial], trace: &[String], queries: u64) -> String {
    let ord = WordOrder::deglex(nvars);
    let mut s = format!("free n={nvars} p={}\nH\n", field.modulus());
    for f in h {
        let _ = writeln!(s, "{}", f.format_with(&ord));
    }
    for line in trace {
        let _ = writeln!(s, "# {line}");
    }
    let _ = writeln!(s, "# queries {queries}");
    s
}

/// Reads the `H` section back as a free-algebra file.
pub fn parse_h(text: &str) -> Result<FreeFile> {
    let stripped: String = text
        .lines()
        .filter(|l| l.trim() != "H")
        .map(|l| format!("{l}\n"))
        .collect();
    FreeFile::parse(&stripped)
}
