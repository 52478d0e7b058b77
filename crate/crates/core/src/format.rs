//! Plain-text formats for tensors, decompositions, families, vectors and
//! set cover instances.
//!
//! Every file starts with a header line naming the kind and its dimensions,
//! followed by whitespace-separated entries. Blank lines and anything after
//! `#` on a line are ignored.

use std::fmt::Write as _;

use crate::broken::{QDecomposition, TaggedQDecomposition};
use crate::error::{Error, Result};
use crate::ring::{EpsPoly, ExactRational, Gf2, Gf3, Gf5, Gf7, RingTag, ScalarRing};
use crate::setcover::SetCoverInstance;
use crate::subsetconv::{IndicatorVector, SetFamily, MAX_MASK_N};
use crate::tensor::{BorderDecomposition, Matrix, RankDecomposition, Tensor3};

struct Body<'a> {
    kind: &'a str,
    fields: Vec<&'a str>,
    tokens: std::vec::IntoIter<&'a str>,
}

fn strip(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn split(text: &str) -> Result<Body<'_>> {
    let mut lines = text.lines().map(strip).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let mut fields = header.split_whitespace();
    let kind = fields.next().expect("nonempty header");
    let tokens: Vec<&str> = lines.flat_map(str::split_whitespace).collect();
    Ok(Body { kind, fields: fields.collect(), tokens: tokens.into_iter() })
}

impl<'a> Body<'a> {
    fn expect(self, kind: &str, arity: usize) -> Result<Self> {
        if self.kind != kind {
            return Err(Error::Parse(format!("expected a `{kind}` header, found `{}`", self.kind)));
        }
        if self.fields.len() != arity {
            return Err(Error::Parse(format!("`{kind}` header takes {arity} fields, found {}", self.fields.len())));
        }
        Ok(self)
    }

    fn usize_field(&self, i: usize) -> Result<usize> {
        let f = self.fields[i];
        f.parse().map_err(|_| Error::Parse(format!("bad header field `{f}`")))
    }

    fn tag_field(&self, i: usize) -> Result<RingTag> {
        let f = self.fields[i];
        RingTag::parse(f).ok_or_else(|| Error::Parse(format!("unknown ring tag `{f}`")))
    }

    fn check_tag<R: ScalarRing>(&self, i: usize) -> Result<()> {
        let tag = self.tag_field(i)?;
        if tag.as_str() != R::TAG {
            return Err(Error::Parse(format!("file holds ring `{tag}`, expected `{}`", R::TAG)));
        }
        Ok(())
    }

    fn token(&mut self) -> Result<&'a str> {
        self.tokens.next().ok_or_else(|| Error::Parse("unexpected end of input".into()))
    }

    fn scalar<R: ScalarRing>(&mut self) -> Result<R> {
        let t = self.token()?;
        R::parse(t).ok_or_else(|| Error::Parse(format!("bad {} entry `{t}`", R::TAG)))
    }

    fn index(&mut self) -> Result<usize> {
        let t = self.token()?;
        t.parse().map_err(|_| Error::Parse(format!("bad integer `{t}`")))
    }

    fn scalars<R: ScalarRing>(&mut self, count: usize) -> Result<Vec<R>> {
        (0..count).map(|_| self.scalar()).collect()
    }

    fn matrix<R: ScalarRing>(&mut self, rows: usize, cols: usize) -> Result<Matrix<R>> {
        Matrix::new(rows, cols, self.scalars(checked_area(rows, cols)?)?)
    }

    /// Comma-separated ε-coefficient lists.
    fn polys<R: ScalarRing>(&mut self, count: usize) -> Result<Vec<Vec<R>>> {
        (0..count)
            .map(|_| {
                let t = self.token()?;
                t.split(',')
                    .map(|c| R::parse(c).ok_or_else(|| Error::Parse(format!("bad ε-coefficient in `{t}`"))))
                    .collect()
            })
            .collect()
    }

    fn finish(mut self) -> Result<()> {
        match self.tokens.next() {
            None => Ok(()),
            Some(t) => Err(Error::Parse(format!("trailing token `{t}`"))),
        }
    }
}

fn checked_area(rows: usize, cols: usize) -> Result<usize> {
    rows.checked_mul(cols).ok_or_else(|| Error::TooLarge(format!("{rows}×{cols} entries")))
}

/// The header keyword of a file (`tensor`, `decomp`, `family`, ...).
pub fn header_kind(text: &str) -> Result<String> {
    Ok(split(text)?.kind.to_string())
}

/// The ring tag stored in the last header field of a tagged file.
pub fn ring_tag_of(text: &str) -> Result<RingTag> {
    let body = split(text)?;
    let last = body.fields.last().ok_or_else(|| Error::Parse("header has no ring tag".into()))?;
    RingTag::parse(last).ok_or_else(|| Error::Parse(format!("unknown ring tag `{last}`")))
}

/// Replace the ring tag of a tagged file, so that an integer-valued file can
/// be read over another ring.
pub fn retag(text: &str, tag: RingTag) -> Result<String> {
    ring_tag_of(text)?;
    let mut out = String::with_capacity(text.len());
    let mut done = false;
    for line in text.split_inclusive('\n') {
        if !done && !strip(line).is_empty() {
            let mut fields: Vec<&str> = strip(line).split_whitespace().collect();
            *fields.last_mut().expect("tagged header") = tag.as_str();
            out.push_str(&fields.join(" "));
            out.push('\n');
            done = true;
        } else {
            out.push_str(line);
        }
    }
    Ok(out)
}

fn push_row(out: &mut String, items: impl IntoIterator<Item = String>) {
    let items: Vec<String> = items.into_iter().collect();
    out.push_str(&items.join(" "));
    out.push('\n');
}

fn push_matrix<R: ScalarRing>(out: &mut String, m: &Matrix<R>) {
    for i in 0..m.rows() {
        push_row(out, m.row(i).iter().map(ScalarRing::render));
    }
}

pub fn parse_tensor<R: ScalarRing>(text: &str) -> Result<Tensor3<R>> {
    let mut body = split(text)?.expect("tensor", 4)?;
    body.check_tag::<R>(3)?;
    let dims = (body.usize_field(0)?, body.usize_field(1)?, body.usize_field(2)?);
    let count = checked_area(checked_area(dims.0, dims.1)?, dims.2)?;
    let data = body.scalars(count)?;
    body.finish()?;
    Tensor3::new(dims, data)
}

/// One line per (level, row); entries of a row are the columns.
pub fn write_tensor<R: ScalarRing>(t: &Tensor3<R>) -> String {
    let (m, n, p) = t.dims();
    let mut out = format!("tensor {m} {n} {p} {}\n", R::TAG);
    for i in 0..m {
        for j in 0..n {
            push_row(&mut out, (0..p).map(|k| t.get(i, j, k).render()));
        }
    }
    out
}

pub fn parse_decomposition<R: ScalarRing>(text: &str) -> Result<RankDecomposition<R>> {
    let mut body = split(text)?.expect("decomp", 5)?;
    body.check_tag::<R>(4)?;
    let (m, n, p, r) = (body.usize_field(0)?, body.usize_field(1)?, body.usize_field(2)?, body.usize_field(3)?);
    let a = body.matrix(m, r)?;
    let b = body.matrix(n, r)?;
    let c = body.matrix(p, r)?;
    body.finish()?;
    RankDecomposition::new(a, b, c)
}

pub fn write_decomposition<R: ScalarRing>(d: &RankDecomposition<R>) -> String {
    let (m, n, p) = d.dims();
    let mut out = format!("decomp {m} {n} {p} {} {}\n", d.rank(), R::TAG);
    for f in [&d.a, &d.b, &d.c] {
        push_matrix(&mut out, f);
    }
    out
}

/// Border witnesses: header `border m n p r d ring`, then `Aε`, `Bε`, `Cε`
/// row-major, each entry a comma-separated list of ε-coefficients (low
/// degree first), e.g. `1,0,-1` for `1 − ε²`. An optional section starting
/// with the token `error` holds the m·n·p entries of `Eε` in the same style.
pub fn parse_border<R: ScalarRing>(text: &str) -> Result<BorderDecomposition<R>> {
    let mut body = split(text)?.expect("border", 6)?;
    body.check_tag::<R>(5)?;
    let (m, n, p, r) = (body.usize_field(0)?, body.usize_field(1)?, body.usize_field(2)?, body.usize_field(3)?);
    let degree = body.usize_field(4)?;
    let a = body.polys::<R>(checked_area(m, r)?)?;
    let b = body.polys::<R>(checked_area(n, r)?)?;
    let c = body.polys::<R>(checked_area(p, r)?)?;
    let error = match body.tokens.next() {
        None => None,
        Some("error") => {
            let e = body.polys::<R>(checked_area(checked_area(m, n)?, p)?)?;
            body.finish()?;
            Some(e)
        }
        Some(t) => return Err(Error::Parse(format!("trailing token `{t}`"))),
    };
    let longest = [&a, &b, &c].into_iter().chain(error.as_ref()).flat_map(|v| v.iter().map(Vec::len)).max();
    // The error tensor is shifted by ε^(d+1) inside the product.
    let bound = longest.unwrap_or(1).max(1) + degree + 1;
    let poly = |cs: Vec<R>| EpsPoly::from_coeffs(cs, bound);
    let lift = |rows: usize, v: Vec<Vec<R>>| Matrix::new(rows, r, v.into_iter().map(poly).collect());
    let error = error.map(|e| Tensor3::new((m, n, p), e.into_iter().map(poly).collect())).transpose()?;
    Ok(BorderDecomposition { a: lift(m, a)?, b: lift(n, b)?, c: lift(p, c)?, degree, error })
}

fn render_poly<R: ScalarRing>(e: &EpsPoly<R>) -> String {
    e.coeffs().iter().map(ScalarRing::render).collect::<Vec<_>>().join(",")
}

pub fn write_border<R: ScalarRing>(d: &BorderDecomposition<R>) -> String {
    let (m, n, p) = d.dims();
    let mut out = format!("border {m} {n} {p} {} {} {}\n", d.rank(), d.degree, R::TAG);
    for f in [&d.a, &d.b, &d.c] {
        for i in 0..f.rows() {
            push_row(&mut out, f.row(i).iter().map(render_poly));
        }
    }
    if let Some(e) = &d.error {
        out.push_str("error\n");
        for i in 0..m {
            for j in 0..n {
                push_row(&mut out, (0..p).map(|k| render_poly(e.get(i, j, k))));
            }
        }
    }
    out
}

fn parse_q_factors<R: ScalarRing>(body: &mut Body<'_>, d: usize, r: usize) -> Result<QDecomposition<R>> {
    let rows = u32::try_from(d)
        .ok()
        .and_then(|e| 7usize.checked_pow(e))
        .ok_or_else(|| Error::TooLarge(format!("7^{d} rows")))?;
    let a = body.matrix(rows, r)?;
    let b = body.matrix(rows, r)?;
    let c = body.matrix(rows, r)?;
    QDecomposition::new(d, a, b, c)
}

/// Parse a `qdecomp d r ring` file. The result is unverified.
pub fn parse_qdecomp(text: &str) -> Result<TaggedQDecomposition> {
    let mut body = split(text)?.expect("qdecomp", 3)?;
    let (d, r) = (body.usize_field(0)?, body.usize_field(1)?);
    let dec = match body.tag_field(2)? {
        RingTag::Rational => TaggedQDecomposition::Rational(parse_q_factors::<ExactRational>(&mut body, d, r)?),
        RingTag::Gf2 => TaggedQDecomposition::Gf2(parse_q_factors::<Gf2>(&mut body, d, r)?),
        RingTag::Gf3 => TaggedQDecomposition::Gf3(parse_q_factors::<Gf3>(&mut body, d, r)?),
        RingTag::Gf5 => TaggedQDecomposition::Gf5(parse_q_factors::<Gf5>(&mut body, d, r)?),
        RingTag::Gf7 => TaggedQDecomposition::Gf7(parse_q_factors::<Gf7>(&mut body, d, r)?),
    };
    body.finish()?;
    Ok(dec)
}

fn write_q_factors<R: ScalarRing>(dec: &QDecomposition<R>) -> String {
    let mut out = format!("qdecomp {} {} {}\n", dec.d(), dec.rank(), R::TAG);
    let (a, b, c) = dec.factors();
    for f in [a, b, c] {
        push_matrix(&mut out, f);
    }
    out
}

pub fn write_qdecomp(dec: &TaggedQDecomposition) -> String {
    match dec {
        TaggedQDecomposition::Rational(x) => write_q_factors(x),
        TaggedQDecomposition::Gf2(x) => write_q_factors(x),
        TaggedQDecomposition::Gf3(x) => write_q_factors(x),
        TaggedQDecomposition::Gf5(x) => write_q_factors(x),
        TaggedQDecomposition::Gf7(x) => write_q_factors(x),
    }
}

fn parse_sets(body: &mut Body<'_>, n: usize, m: usize) -> Result<SetFamily> {
    let mut masks = Vec::with_capacity(m.min(1 << 20));
    for _ in 0..m {
        let k = body.index()?;
        let mut mask = 0u64;
        for _ in 0..k {
            let e = body.index()?;
            if e >= n {
                return Err(Error::Parse(format!("element {e} outside a universe of size {n}")));
            }
            if mask >> e & 1 == 1 {
                return Err(Error::Parse(format!("element {e} repeated within a set")));
            }
            mask |= 1 << e;
        }
        masks.push(mask);
    }
    SetFamily::new(n, masks)
}

fn check_universe(n: usize) -> Result<()> {
    if n > MAX_MASK_N {
        return Err(Error::TooLarge(format!("universe of size {n} exceeds {MAX_MASK_N}")));
    }
    Ok(())
}

fn push_sets(out: &mut String, family: &SetFamily) {
    for &mask in family.members() {
        let elems = (0..family.n()).filter(|&e| mask >> e & 1 == 1);
        push_row(out, std::iter::once(mask.count_ones().to_string()).chain(elems.map(|e| e.to_string())));
    }
}

/// Parse a `family n m` file. Duplicate sets are merged.
pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut body = split(text)?.expect("family", 2)?;
    let (n, m) = (body.usize_field(0)?, body.usize_field(1)?);
    check_universe(n)?;
    let family = parse_sets(&mut body, n, m)?;
    body.finish()?;
    Ok(family)
}

pub fn write_family(family: &SetFamily) -> String {
    let mut out = format!("family {} {}\n", family.n(), family.len());
    push_sets(&mut out, family);
    out
}

pub fn parse_vector<R: ScalarRing>(text: &str) -> Result<IndicatorVector<R>> {
    let mut body = split(text)?.expect("vector", 2)?;
    body.check_tag::<R>(1)?;
    let n = body.usize_field(0)?;
    check_universe(n)?;
    let len = 1usize.checked_shl(n as u32).ok_or_else(|| Error::TooLarge(format!("2^{n} entries")))?;
    crate::subsetconv::check_dense(n)?;
    let entries = body.scalars(len)?;
    body.finish()?;
    IndicatorVector::new(n, entries)
}

/// Eight entries per line.
pub fn write_vector<R: ScalarRing>(v: &IndicatorVector<R>) -> String {
    let mut out = format!("vector {} {}\n", v.n(), R::TAG);
    for chunk in v.entries().chunks(8) {
        push_row(&mut out, chunk.iter().map(ScalarRing::render));
    }
    out
}

/// Parse a `setcover n m t` file; `k` is the largest set size.
pub fn parse_instance(text: &str) -> Result<SetCoverInstance> {
    let mut body = split(text)?.expect("setcover", 3)?;
    let (n, m, t) = (body.usize_field(0)?, body.usize_field(1)?, body.usize_field(2)?);
    check_universe(n)?;
    let family = parse_sets(&mut body, n, m)?;
    body.finish()?;
    SetCoverInstance::new(family, t)
}

pub fn write_instance(inst: &SetCoverInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "setcover {} {} {}", inst.family.n(), inst.family.len(), inst.t);
    push_sets(&mut out, &inst.family);
    out
}
