//! The document format: a line-oriented, human-editable container for
//! named algebraic objects over a single field, with a canonical
//! serialization (sorted object names, sorted sparse entries, reduced
//! scalars) that round-trips byte-identically.
//!
//! A document starts with a header:
//!
//! ```text
//! schema_version 1
//! field Fp 2
//! ```
//!
//! (`field Q` for the rationals) followed by named object blocks:
//!
//! ```text
//! begin lie_algebra g
//! dim 2
//! bracket 1 2 2 1
//! end
//! ```
//!
//! Indices in files are 1-based; brackets are sparse triples
//! `i j k value` with i < j, closed under antisymmetry on load. Lines
//! may carry `#` comments; keys may appear in any order. Matrices are
//! objects of kind `linear_map` and are referenced by name everywhere
//! a map is needed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use nijlie::cohomology::{AbelianTwoCocycle, NonAbelianTwoCocycle};
use nijlie::extensions::Extension;
use nijlie::lie::{LieAlgebra, Representation};
use nijlie::linalg::{v_is_zero, vneg, vzero, Matrix};
use nijlie::nijenhuis::{NijenhuisLieAlgebra, NijenhuisRepresentation};
use nijlie::{Field, Scalar};

use crate::CliError;

/// A malformed document: bad syntax, bad references, or bad shapes
/// detectable without running any mathematical check.
#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("object '{0}' is not defined in the document")]
    Unresolved(String),
    #[error("object '{name}' has kind {found}, expected {expected}")]
    WrongKind {
        name: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("object '{name}': {msg}")]
    Shape { name: String, msg: String },
    #[error("reference cycle through object '{0}'")]
    Cycle(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    LieAlgebra,
    LinearMap,
    Nijenhuis,
    Representation,
    NijRepresentation,
    CocycleNab,
    CocycleAb,
    Extension,
    Pair,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::LieAlgebra => "lie_algebra",
            Kind::LinearMap => "linear_map",
            Kind::Nijenhuis => "nijenhuis",
            Kind::Representation => "representation",
            Kind::NijRepresentation => "nij_representation",
            Kind::CocycleNab => "cocycle_nab",
            Kind::CocycleAb => "cocycle_ab",
            Kind::Extension => "extension",
            Kind::Pair => "pair",
        }
    }

    fn from_label(s: &str) -> Option<Kind> {
        Some(match s {
            "lie_algebra" => Kind::LieAlgebra,
            "linear_map" => Kind::LinearMap,
            "nijenhuis" => Kind::Nijenhuis,
            "representation" => Kind::Representation,
            "nij_representation" => Kind::NijRepresentation,
            "cocycle_nab" => Kind::CocycleNab,
            "cocycle_ab" => Kind::CocycleAb,
            "extension" => Kind::Extension,
            "pair" => Kind::Pair,
            _ => return None,
        })
    }
}

/// One named entry of a document. Indices are 0-based in memory and
/// 1-based in files; sparse lists are kept sorted and free of zero
/// entries and duplicates.
#[derive(Clone, PartialEq, Debug)]
pub enum Object {
    LieAlgebra {
        dim: usize,
        bracket: Vec<(usize, usize, usize, Scalar)>,
    },
    LinearMap {
        matrix: Matrix,
    },
    Nijenhuis {
        algebra: String,
        operator: String,
    },
    Representation {
        algebra: String,
        dim_v: usize,
        action: Vec<(usize, String)>,
    },
    NijRepresentation {
        base: String,
        rep: String,
        operator: String,
    },
    CocycleNab {
        source: String,
        target: String,
        chi: Vec<(usize, usize, Vec<Scalar>)>,
        psi: Vec<(usize, String)>,
        f: String,
    },
    CocycleAb {
        context: String,
        chi: Vec<(usize, usize, Vec<Scalar>)>,
        f: String,
    },
    Extension {
        total: String,
        kernel: String,
        base: String,
        embedding: String,
        projection: String,
    },
    Pair {
        kernel_map: String,
        base_map: String,
    },
}

impl Object {
    pub fn kind(&self) -> Kind {
        match self {
            Object::LieAlgebra { .. } => Kind::LieAlgebra,
            Object::LinearMap { .. } => Kind::LinearMap,
            Object::Nijenhuis { .. } => Kind::Nijenhuis,
            Object::Representation { .. } => Kind::Representation,
            Object::NijRepresentation { .. } => Kind::NijRepresentation,
            Object::CocycleNab { .. } => Kind::CocycleNab,
            Object::CocycleAb { .. } => Kind::CocycleAb,
            Object::Extension { .. } => Kind::Extension,
            Object::Pair { .. } => Kind::Pair,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Document {
    pub field: Field,
    pub objects: BTreeMap<String, Object>,
}

// ---------------------------------------------------------------------------
// Scalars.
// ---------------------------------------------------------------------------

/// Parse one scalar token: an integer or `a/b`, reduced over Q and
/// taken mod p over a prime field.
pub fn parse_scalar(field: Field, tok: &str) -> Result<Scalar, String> {
    let (num_str, den_str) = match tok.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (tok, None),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| format!("'{tok}' is not a number"))?;
    let den: BigInt = match den_str {
        Some(d) => d.parse().map_err(|_| format!("'{tok}' is not a number"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(format!("'{tok}' has a zero denominator"));
    }
    match field {
        Field::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
        Field::Prime(p) => {
            let pb = BigInt::from(p);
            let reduce = |x: BigInt| -> i64 {
                let r = ((x % &pb) + &pb) % &pb;
                r.to_i64().expect("residue fits in i64")
            };
            let n = Scalar::from_integer(field, reduce(num));
            let d = reduce(den);
            if d == 1 {
                Ok(n)
            } else {
                let inv = Scalar::from_integer(field, d)
                    .inverse()
                    .map_err(|_| format!("denominator of '{tok}' vanishes mod {p}"))?;
                Ok(&n * &inv)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing.
// ---------------------------------------------------------------------------

fn syntax(line: usize, msg: impl Into<String>) -> DocError {
    DocError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize, DocError> {
    tok.parse().map_err(|_| {
        syntax(
            line,
            format!("{what} must be a non-negative integer, got '{tok}'"),
        )
    })
}

/// 1-based index token to 0-based value.
fn parse_index(tok: &str, line: usize, what: &str) -> Result<usize, DocError> {
    let v: usize = tok.parse().map_err(|_| {
        syntax(
            line,
            format!("{what} must be a positive integer, got '{tok}'"),
        )
    })?;
    if v == 0 {
        return Err(syntax(line, format!("{what} is 1-based, got 0")));
    }
    Ok(v - 1)
}

fn scalar_at(field: Field, tok: &str, line: usize) -> Result<Scalar, DocError> {
    parse_scalar(field, tok).map_err(|msg| syntax(line, msg))
}

/// One content line: number, key token, value tokens.
struct Line<'a> {
    no: usize,
    tokens: Vec<&'a str>,
}

fn content_lines(input: &str) -> Vec<Line<'_>> {
    input
        .lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let body = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if tokens.is_empty() {
                None
            } else {
                Some(Line {
                    no: idx + 1,
                    tokens,
                })
            }
        })
        .collect()
}

pub fn parse(input: &str) -> Result<Document, DocError> {
    let lines = content_lines(input);
    let mut pos = 0;

    let header = |pos: &mut usize, key: &str| -> Result<(usize, Vec<String>), DocError> {
        let line = lines
            .get(*pos)
            .ok_or_else(|| syntax(input.lines().count() + 1, format!("missing '{key}' header")))?;
        if line.tokens[0] != key {
            return Err(syntax(
                line.no,
                format!("expected '{key}', got '{}'", line.tokens[0]),
            ));
        }
        *pos += 1;
        Ok((
            line.no,
            line.tokens[1..].iter().map(|t| t.to_string()).collect(),
        ))
    };

    let (ver_line, ver) = header(&mut pos, "schema_version")?;
    if ver.len() != 1 || ver[0] != "1" {
        return Err(syntax(ver_line, "this tool reads schema_version 1"));
    }
    let (field_line, ftoks) = header(&mut pos, "field")?;
    let field = match ftoks.as_slice() {
        [q] if q == "Q" => Field::Rational,
        [fp, p] if fp == "Fp" => {
            let p: u64 = p
                .parse()
                .map_err(|_| syntax(field_line, format!("'{p}' is not a prime")))?;
            Field::prime(p)
                .map_err(|_| syntax(field_line, format!("{p} is not a prime at most 2^31")))?
        }
        _ => return Err(syntax(field_line, "field must be 'Q' or 'Fp <p>'")),
    };

    let mut objects: BTreeMap<String, Object> = BTreeMap::new();
    while pos < lines.len() {
        let open = &lines[pos];
        if open.tokens[0] != "begin" || open.tokens.len() != 3 {
            return Err(syntax(open.no, "expected 'begin <kind> <name>'"));
        }
        let kind = Kind::from_label(open.tokens[1])
            .ok_or_else(|| syntax(open.no, format!("unknown kind '{}'", open.tokens[1])))?;
        let name = open.tokens[2];
        if !valid_name(name) {
            return Err(syntax(open.no, format!("invalid object name '{name}'")));
        }
        if objects.contains_key(name) {
            return Err(syntax(open.no, format!("object '{name}' is defined twice")));
        }
        pos += 1;
        let start = pos;
        while pos < lines.len() && lines[pos].tokens[0] != "end" {
            if lines[pos].tokens[0] == "begin" {
                return Err(syntax(lines[pos].no, "blocks do not nest; missing 'end'?"));
            }
            pos += 1;
        }
        if pos == lines.len() {
            return Err(syntax(
                open.no,
                format!("block '{name}' is never closed with 'end'"),
            ));
        }
        let body = &lines[start..pos];
        pos += 1; // consume 'end'
        let obj = parse_block(kind, name, field, body)?;
        objects.insert(name.to_string(), obj);
    }
    Ok(Document { field, objects })
}

/// Accumulates `key value` lines where each key may appear once.
struct Once<'a> {
    slot: Option<(usize, Vec<&'a str>)>,
    key: &'static str,
}

impl<'a> Once<'a> {
    fn new(key: &'static str) -> Self {
        Once { slot: None, key }
    }

    fn set(&mut self, line: &Line<'a>) -> Result<(), DocError> {
        if self.slot.is_some() {
            return Err(syntax(line.no, format!("duplicate key '{}'", self.key)));
        }
        self.slot = Some((line.no, line.tokens[1..].to_vec()));
        Ok(())
    }

    fn required(self, block: usize) -> Result<(usize, Vec<&'a str>), DocError> {
        self.slot
            .ok_or_else(|| syntax(block, format!("missing key '{}'", self.key)))
    }

    fn one_token(self, block: usize) -> Result<(usize, String), DocError> {
        let key = self.key;
        let (no, toks) = self.required(block)?;
        if toks.len() != 1 {
            return Err(syntax(no, format!("key '{key}' takes exactly one value")));
        }
        Ok((no, toks[0].to_string()))
    }

    fn name(self, block: usize) -> Result<String, DocError> {
        let (no, tok) = self.one_token(block)?;
        if !valid_name(&tok) {
            return Err(syntax(no, format!("'{tok}' is not a valid object name")));
        }
        Ok(tok)
    }
}

fn parse_block(kind: Kind, name: &str, field: Field, body: &[Line]) -> Result<Object, DocError> {
    let block_line = body.first().map(|l| l.no).unwrap_or(0);
    match kind {
        Kind::LieAlgebra => {
            let mut dim = Once::new("dim");
            let mut triples: Vec<(usize, usize, usize, Scalar, usize)> = Vec::new();
            for line in body {
                match line.tokens[0] {
                    "dim" => dim.set(line)?,
                    "bracket" => {
                        if line.tokens.len() != 5 {
                            return Err(syntax(line.no, "bracket takes 'i j k value'"));
                        }
                        let i = parse_index(line.tokens[1], line.no, "bracket index i")?;
                        let j = parse_index(line.tokens[2], line.no, "bracket index j")?;
                        let k = parse_index(line.tokens[3], line.no, "bracket index k")?;
                        if i >= j {
                            return Err(syntax(line.no, "bracket entries need i < j"));
                        }
                        let v = scalar_at(field, line.tokens[4], line.no)?;
                        triples.push((i, j, k, v, line.no));
                    }
                    other => return Err(syntax(line.no, format!("unknown key '{other}'"))),
                }
            }
            let (dim_line, dim_tok) = dim.one_token(block_line)?;
            let dim = parse_count(&dim_tok, dim_line, "dim")?;
            let mut bracket = Vec::new();
            let mut seen = std::collections::BTreeSet::new();
            triples.sort_by_key(|(i, j, k, _, _)| (*i, *j, *k));
            for (i, j, k, v, no) in triples {
                if j >= dim || k >= dim {
                    return Err(syntax(
                        no,
                        format!("bracket index out of range for dim {dim}"),
                    ));
                }
                if !seen.insert((i, j, k)) {
                    return Err(syntax(no, "duplicate bracket entry"));
                }
                if !v.is_zero() {
                    bracket.push((i, j, k, v));
                }
            }
            Ok(Object::LieAlgebra { dim, bracket })
        }
        Kind::LinearMap => {
            let mut rows = Once::new("rows");
            let mut cols = Once::new("cols");
            let mut row_lines: Vec<(usize, Vec<Scalar>)> = Vec::new();
            for line in body {
                match line.tokens[0] {
                    "rows" => rows.set(line)?,
                    "cols" => cols.set(line)?,
                    "row" => {
                        let mut vals = Vec::with_capacity(line.tokens.len() - 1);
                        for t in &line.tokens[1..] {
                            vals.push(scalar_at(field, t, line.no)?);
                        }
                        row_lines.push((line.no, vals));
                    }
                    other => return Err(syntax(line.no, format!("unknown key '{other}'"))),
                }
            }
            let (rl, rt) = rows.one_token(block_line)?;
            let r = parse_count(&rt, rl, "rows")?;
            let (cl, ct) = cols.one_token(block_line)?;
            let c = parse_count(&ct, cl, "cols")?;
            if row_lines.len() != r {
                return Err(syntax(
                    block_line,
                    format!(
                        "'{name}' declares {r} rows but has {} row lines",
                        row_lines.len()
                    ),
                ));
            }
            let mut flat = Vec::with_capacity(r * c);
            for (no, vals) in row_lines {
                if vals.len() != c {
                    return Err(syntax(
                        no,
                        format!("row needs {c} entries, got {}", vals.len()),
                    ));
                }
                flat.extend(vals);
            }
            Ok(Object::LinearMap {
                matrix: Matrix::from_flat(field, r, c, flat),
            })
        }
        Kind::Nijenhuis => {
            let mut algebra = Once::new("algebra");
            let mut operator = Once::new("operator");
            for line in body {
                match line.tokens[0] {
                    "algebra" => algebra.set(line)?,
                    "operator" => operator.set(line)?,
                    other => return Err(syntax(line.no, format!("unknown key '{other}'"))),
                }
            }
            Ok(Object::Nijenhuis {
                algebra: algebra.name(block_line)?,
                operator: operator.name(block_line)?,
            })
        }
        Kind::Representation => {
            let mut algebra = Once::new("algebra");
            let mut dim_v = Once::new("dim_v");
            let mut action: Vec<(usize, String, usize)> = Vec::new();
            for line in body {
                match line.tokens[0] {
                    "algebra" => algebra.set(line)?,
                    "dim_v" => dim_v.set(line)?,
                    "action" => {
                        if line.tokens.len() != 3 {
                            return Err(syntax(line.no, "action takes 'i <linear_map>'"));
                        }
                        let i = parse_index(line.tokens[1], line.no, "action index")?;
                        if !valid_name(line.tokens[2]) {
                            return Err(syntax(line.no, "action value must be an object name"));
                        }
                        action.push((i, line.tokens[2].to_string(), line.no));
                    }
                    other => return Err(syntax(line.no, format!("unknown key '{other}'"))),
                }
            }
            let (dl, dt) = dim_v.one_token(block_line)?;
            let dim_v = parse_count(&dt, dl, "dim_v")?;
            action.sort_by_key(|(i, _, _)| *i);
            let mut out = Vec::new();
            for (i, n, no) in action {
                if out.last().is_some_and(|(p, _)| *p == i) {
                    return Err(syntax(no, format!("duplicate action index {}", i + 1)));
                }
                out.push((i, n));
            }
            Ok(Object::Representation {
                algebra: algebra.name(block_line)?,
                dim_v,
                action: out,
            })
        }
        Kind::NijRepresentation => {
            let mut base = Once::new("base");
            let mut rep = Once::new("rep");
            let mut operator = Once::new("operator");
            for line in body {
                match line.tokens[0] {
                    "base" => base.set(line)?,
                    "rep" => rep.set(line)?,
                    "operator" => operator.set(line)?,
                    other => return Err(syntax(line.no, format!("unknown key '{other}'"))),
                }
            }
            Ok(Object::NijRepresentation {
                base: base.name(block_line)?,
                rep: rep.name(block_line)?,
                operator: operator.name(block_line)?,
            })
        }
        Kind::CocycleNab => {
            let mut source = Once::new("source");
            let mut target = Once::new("target");
            let mut f = Once::new("f");
            let mut chi = Vec::new();
            let mut psi: Vec<(usize, String, usize)> = Vec::new();
            for line in body {
                match line.tokens[0] {
                    "source" => source.set(line)?,
                    "target" => target.set(line)?,
                    "f" => f.set(line)?,
                    "chi" => parse_chi_line(field, line, &mut chi)?,
                    "psi" => {
                        if line.tokens.len() != 3 {
                            return Err(syntax(line.no, "psi takes 'i <linear_map>'"));
                        }
                        let i = parse_index(line.tokens[1], line.no, "psi index")?;
                        if !valid_name(line.tokens[2]) {
                            return Err(syntax(line.no, "psi value must be an object name"));
                        }
                        psi.push((i, line.tokens[2].to_string(), line.no));
                    }
                    other => return Err(syntax(line.no, format!("unknown key '{other}'"))),
                }
            }
            psi.sort_by_key(|(i, _, _)| *i);
            let mut psi_out = Vec::new();
            for (i, n, no) in psi {
                if psi_out.last().is_some_and(|(p, _)| *p == i) {
                    return Err(syntax(no, format!("duplicate psi index {}", i + 1)));
                }
                psi_out.push((i, n));
            }
            Ok(Object::CocycleNab {
                source: source.name(block_line)?,
                target: target.name(block_line)?,
                chi: finish_chi(chi)?,
                psi: psi_out,
                f: f.name(block_line)?,
            })
        }
        Kind::CocycleAb => {
            let mut context = Once::new("context");
            let mut f = Once::new("f");
            let mut chi = Vec::new();
            for line in body {
                match line.tokens[0] {
                    "context" => context.set(line)?,
                    "f" => f.set(line)?,
                    "chi" => parse_chi_line(field, line, &mut chi)?,
                    other => return Err(syntax(line.no, format!("unknown key '{other}'"))),
                }
            }
            Ok(Object::CocycleAb {
                context: context.name(block_line)?,
                chi: finish_chi(chi)?,
                f: f.name(block_line)?,
            })
        }
        Kind::Extension => {
            let mut total = Once::new("total");
            let mut kernel = Once::new("kernel");
            let mut base = Once::new("base");
            let mut embedding = Once::new("embedding");
            let mut projection = Once::new("projection");
            for line in body {
                match line.tokens[0] {
                    "total" => total.set(line)?,
                    "kernel" => kernel.set(line)?,
                    "base" => base.set(line)?,
                    "embedding" => embedding.set(line)?,
                    "projection" => projection.set(line)?,
                    other => return Err(syntax(line.no, format!("unknown key '{other}'"))),
                }
            }
            Ok(Object::Extension {
                total: total.name(block_line)?,
                kernel: kernel.name(block_line)?,
                base: base.name(block_line)?,
                embedding: embedding.name(block_line)?,
                projection: projection.name(block_line)?,
            })
        }
        Kind::Pair => {
            let mut kernel_map = Once::new("kernel_map");
            let mut base_map = Once::new("base_map");
            for line in body {
                match line.tokens[0] {
                    "kernel_map" => kernel_map.set(line)?,
                    "base_map" => base_map.set(line)?,
                    other => return Err(syntax(line.no, format!("unknown key '{other}'"))),
                }
            }
            Ok(Object::Pair {
                kernel_map: kernel_map.name(block_line)?,
                base_map: base_map.name(block_line)?,
            })
        }
    }
}

fn parse_chi_line(
    field: Field,
    line: &Line,
    out: &mut Vec<(usize, usize, Vec<Scalar>, usize)>,
) -> Result<(), DocError> {
    if line.tokens.len() < 3 {
        return Err(syntax(line.no, "chi takes 'i j v1 ... vm'"));
    }
    let i = parse_index(line.tokens[1], line.no, "chi index i")?;
    let j = parse_index(line.tokens[2], line.no, "chi index j")?;
    if i >= j {
        return Err(syntax(line.no, "chi entries need i < j"));
    }
    let mut vals = Vec::with_capacity(line.tokens.len() - 3);
    for t in &line.tokens[3..] {
        vals.push(scalar_at(field, t, line.no)?);
    }
    out.push((i, j, vals, line.no));
    Ok(())
}

fn finish_chi(
    mut chi: Vec<(usize, usize, Vec<Scalar>, usize)>,
) -> Result<Vec<(usize, usize, Vec<Scalar>)>, DocError> {
    chi.sort_by_key(|(i, j, _, _)| (*i, *j));
    let mut out: Vec<(usize, usize, Vec<Scalar>)> = Vec::new();
    for (i, j, vals, no) in chi {
        if out.last().is_some_and(|(pi, pj, _)| (*pi, *pj) == (i, j)) {
            return Err(syntax(
                no,
                format!("duplicate chi entry ({}, {})", i + 1, j + 1),
            ));
        }
        if !v_is_zero(&vals) {
            out.push((i, j, vals));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Canonical serialization.
// ---------------------------------------------------------------------------

pub fn serialize(doc: &Document) -> String {
    let mut out = String::from("schema_version 1\n");
    match doc.field {
        Field::Rational => out.push_str("field Q\n"),
        Field::Prime(p) => {
            let _ = writeln!(out, "field Fp {p}");
        }
    }
    for (name, obj) in &doc.objects {
        out.push('\n');
        let _ = writeln!(out, "begin {} {}", obj.kind().label(), name);
        match obj {
            Object::LieAlgebra { dim, bracket } => {
                let _ = writeln!(out, "dim {dim}");
                for (i, j, k, v) in bracket {
                    let _ = writeln!(out, "bracket {} {} {} {v}", i + 1, j + 1, k + 1);
                }
            }
            Object::LinearMap { matrix } => {
                let _ = writeln!(out, "rows {}", matrix.rows());
                let _ = writeln!(out, "cols {}", matrix.cols());
                for r in 0..matrix.rows() {
                    out.push_str("row");
                    for c in 0..matrix.cols() {
                        let _ = write!(out, " {}", matrix.get(r, c));
                    }
                    out.push('\n');
                }
            }
            Object::Nijenhuis { algebra, operator } => {
                let _ = writeln!(out, "algebra {algebra}");
                let _ = writeln!(out, "operator {operator}");
            }
            Object::Representation {
                algebra,
                dim_v,
                action,
            } => {
                let _ = writeln!(out, "algebra {algebra}");
                let _ = writeln!(out, "dim_v {dim_v}");
                for (i, m) in action {
                    let _ = writeln!(out, "action {} {m}", i + 1);
                }
            }
            Object::NijRepresentation {
                base,
                rep,
                operator,
            } => {
                let _ = writeln!(out, "base {base}");
                let _ = writeln!(out, "rep {rep}");
                let _ = writeln!(out, "operator {operator}");
            }
            Object::CocycleNab {
                source,
                target,
                chi,
                psi,
                f,
            } => {
                let _ = writeln!(out, "source {source}");
                let _ = writeln!(out, "target {target}");
                write_chi(&mut out, chi);
                for (i, m) in psi {
                    let _ = writeln!(out, "psi {} {m}", i + 1);
                }
                let _ = writeln!(out, "f {f}");
            }
            Object::CocycleAb { context, chi, f } => {
                let _ = writeln!(out, "context {context}");
                write_chi(&mut out, chi);
                let _ = writeln!(out, "f {f}");
            }
            Object::Extension {
                total,
                kernel,
                base,
                embedding,
                projection,
            } => {
                let _ = writeln!(out, "total {total}");
                let _ = writeln!(out, "kernel {kernel}");
                let _ = writeln!(out, "base {base}");
                let _ = writeln!(out, "embedding {embedding}");
                let _ = writeln!(out, "projection {projection}");
            }
            Object::Pair {
                kernel_map,
                base_map,
            } => {
                let _ = writeln!(out, "kernel_map {kernel_map}");
                let _ = writeln!(out, "base_map {base_map}");
            }
        }
        out.push_str("end\n");
    }
    out
}

fn write_chi(out: &mut String, chi: &[(usize, usize, Vec<Scalar>)]) {
    for (i, j, vals) in chi {
        let _ = write!(out, "chi {} {}", i + 1, j + 1);
        for v in vals {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
}

// ---------------------------------------------------------------------------
// Resolution into core types.
// ---------------------------------------------------------------------------

/// Turns document entries into validated core objects, following name
/// references. Construction runs the core constructors, so resolving an
/// object enforces every invariant its constructor enforces.
pub struct Resolver<'a> {
    doc: &'a Document,
    stack: Vec<String>,
}

impl<'a> Resolver<'a> {
    pub fn new(doc: &'a Document) -> Resolver<'a> {
        Resolver {
            doc,
            stack: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.doc.field
    }

    fn get(&self, name: &str) -> Result<&'a Object, DocError> {
        self.doc
            .objects
            .get(name)
            .ok_or_else(|| DocError::Unresolved(name.to_string()))
    }

    fn enter(&mut self, name: &str) -> Result<(), DocError> {
        if self.stack.iter().any(|n| n == name) {
            return Err(DocError::Cycle(name.to_string()));
        }
        self.stack.push(name.to_string());
        Ok(())
    }

    fn wrong_kind(name: &str, expected: &'static str, found: Kind) -> CliError {
        CliError::Doc(DocError::WrongKind {
            name: name.to_string(),
            expected,
            found: found.label(),
        })
    }

    fn shape(name: &str, msg: impl Into<String>) -> CliError {
        CliError::Doc(DocError::Shape {
            name: name.to_string(),
            msg: msg.into(),
        })
    }

    pub fn kind_of(&self, name: &str) -> Result<Kind, DocError> {
        Ok(self.get(name)?.kind())
    }

    pub fn algebra(&mut self, name: &str) -> Result<LieAlgebra, CliError> {
        let obj = self.get(name)?;
        let Object::LieAlgebra { dim, bracket } = obj else {
            return Err(Self::wrong_kind(name, "lie_algebra", obj.kind()));
        };
        let triples: Vec<(usize, usize, usize, Scalar)> = bracket.clone();
        Ok(LieAlgebra::from_sparse(
            name,
            self.doc.field,
            *dim,
            &triples,
        )?)
    }

    pub fn matrix(&mut self, name: &str) -> Result<Matrix, CliError> {
        let obj = self.get(name)?;
        let Object::LinearMap { matrix } = obj else {
            return Err(Self::wrong_kind(name, "linear_map", obj.kind()));
        };
        Ok(matrix.clone())
    }

    pub fn nijenhuis(&mut self, name: &str) -> Result<NijenhuisLieAlgebra, CliError> {
        self.enter(name)?;
        let result = (|| {
            let obj = self.get(name)?;
            let Object::Nijenhuis { algebra, operator } = obj else {
                return Err(Self::wrong_kind(name, "nijenhuis", obj.kind()));
            };
            let (algebra, operator) = (algebra.clone(), operator.clone());
            let alg = self.algebra(&algebra)?;
            let op = self.matrix(&operator)?;
            Ok(NijenhuisLieAlgebra::new(alg, op)?)
        })();
        self.stack.pop();
        result
    }

    pub fn representation(&mut self, name: &str) -> Result<Representation, CliError> {
        self.enter(name)?;
        let result = (|| {
            let obj = self.get(name)?;
            let Object::Representation {
                algebra,
                dim_v,
                action,
            } = obj
            else {
                return Err(Self::wrong_kind(name, "representation", obj.kind()));
            };
            let (algebra, dim_v, action) = (algebra.clone(), *dim_v, action.clone());
            let alg = self.algebra(&algebra)?;
            if action.len() != alg.dim() || action.iter().enumerate().any(|(k, (i, _))| k != *i) {
                return Err(Self::shape(
                    name,
                    format!("action must name one map per basis index 1..{}", alg.dim()),
                ));
            }
            let mut rho = Vec::with_capacity(action.len());
            for (_, m) in &action {
                rho.push(self.matrix(m)?);
            }
            Ok(Representation::new(alg, dim_v, rho)?)
        })();
        self.stack.pop();
        result
    }

    pub fn nij_representation(&mut self, name: &str) -> Result<NijenhuisRepresentation, CliError> {
        self.enter(name)?;
        let result = (|| {
            let obj = self.get(name)?;
            let Object::NijRepresentation {
                base,
                rep,
                operator,
            } = obj
            else {
                return Err(Self::wrong_kind(name, "nij_representation", obj.kind()));
            };
            let (base, rep, operator) = (base.clone(), rep.clone(), operator.clone());
            let b = self.nijenhuis(&base)?;
            let r = self.representation(&rep)?;
            let s = self.matrix(&operator)?;
            Ok(NijenhuisRepresentation::new(b, r, s)?)
        })();
        self.stack.pop();
        result
    }

    pub fn cocycle_nab(&mut self, name: &str) -> Result<NonAbelianTwoCocycle, CliError> {
        self.enter(name)?;
        let result = (|| {
            let obj = self.get(name)?;
            let Object::CocycleNab {
                source,
                target,
                chi,
                psi,
                f,
            } = obj
            else {
                return Err(Self::wrong_kind(name, "cocycle_nab", obj.kind()));
            };
            let (source, target) = (source.clone(), target.clone());
            let (chi, psi, f) = (chi.clone(), psi.clone(), f.clone());
            let src = self.nijenhuis(&source)?;
            let tgt = self.nijenhuis(&target)?;
            let table = self.chi_table(name, &chi, src.dim(), tgt.dim())?;
            if psi.len() != src.dim() || psi.iter().enumerate().any(|(k, (i, _))| k != *i) {
                return Err(Self::shape(
                    name,
                    format!("psi must name one map per basis index 1..{}", src.dim()),
                ));
            }
            let mut psi_maps = Vec::with_capacity(psi.len());
            for (_, m) in &psi {
                psi_maps.push(self.matrix(m)?);
            }
            let fm = self.matrix(&f)?;
            Ok(NonAbelianTwoCocycle::new(src, tgt, table, psi_maps, fm)?)
        })();
        self.stack.pop();
        result
    }

    pub fn cocycle_ab(&mut self, name: &str) -> Result<AbelianTwoCocycle, CliError> {
        self.enter(name)?;
        let result = (|| {
            let obj = self.get(name)?;
            let Object::CocycleAb { context, chi, f } = obj else {
                return Err(Self::wrong_kind(name, "cocycle_ab", obj.kind()));
            };
            let (context, chi, f) = (context.clone(), chi.clone(), f.clone());
            let ctx = self.nij_representation(&context)?;
            let table = self.chi_table(name, &chi, ctx.base().dim(), ctx.dim_v())?;
            let fm = self.matrix(&f)?;
            Ok(AbelianTwoCocycle::new(ctx, table, fm)?)
        })();
        self.stack.pop();
        result
    }

    /// A cocycle by either representation, as kernel-valued data.
    pub fn cocycle_any(&mut self, name: &str) -> Result<NonAbelianTwoCocycle, CliError> {
        match self.get(name)?.kind() {
            Kind::CocycleNab => self.cocycle_nab(name),
            Kind::CocycleAb => Ok(self.cocycle_ab(name)?.as_nonabelian()?),
            other => Err(Self::wrong_kind(name, "cocycle_nab or cocycle_ab", other)),
        }
    }

    pub fn extension(&mut self, name: &str) -> Result<Extension, CliError> {
        self.enter(name)?;
        let result = (|| {
            let obj = self.get(name)?;
            let Object::Extension {
                total,
                kernel,
                base,
                embedding,
                projection,
            } = obj
            else {
                return Err(Self::wrong_kind(name, "extension", obj.kind()));
            };
            let names = [
                total.clone(),
                kernel.clone(),
                base.clone(),
                embedding.clone(),
                projection.clone(),
            ];
            let t = self.nijenhuis(&names[0])?;
            let k = self.nijenhuis(&names[1])?;
            let b = self.nijenhuis(&names[2])?;
            let i = self.matrix(&names[3])?;
            let p = self.matrix(&names[4])?;
            Ok(Extension::new(t, k, b, i, p)?)
        })();
        self.stack.pop();
        result
    }

    pub fn pair(&mut self, name: &str) -> Result<(Matrix, Matrix), CliError> {
        let obj = self.get(name)?;
        let Object::Pair {
            kernel_map,
            base_map,
        } = obj
        else {
            return Err(Self::wrong_kind(name, "pair", obj.kind()));
        };
        let (kernel_map, base_map) = (kernel_map.clone(), base_map.clone());
        Ok((self.matrix(&kernel_map)?, self.matrix(&base_map)?))
    }

    fn chi_table(
        &self,
        name: &str,
        chi: &[(usize, usize, Vec<Scalar>)],
        n: usize,
        m: usize,
    ) -> Result<Vec<Vec<Vec<Scalar>>>, CliError> {
        let mut table = vec![vec![vzero(self.doc.field, m); n]; n];
        for (i, j, vals) in chi {
            if *j >= n {
                return Err(Self::shape(
                    name,
                    format!("chi index ({}, {}) out of range for dim {n}", i + 1, j + 1),
                ));
            }
            if vals.len() != m {
                return Err(Self::shape(
                    name,
                    format!("chi values must have {m} entries, got {}", vals.len()),
                ));
            }
            table[*j][*i] = vneg(vals);
            table[*i][*j] = vals.clone();
        }
        Ok(table)
    }
}

// ---------------------------------------------------------------------------
// Emission: core types back into document objects.
// ---------------------------------------------------------------------------

/// Collects emitted objects under unique names, reusing an existing
/// name when the content is identical.
pub struct DocBuilder {
    field: Field,
    objects: BTreeMap<String, Object>,
}

/// Make a string usable as an object name: map forbidden characters to
/// underscores, collapse runs, and guarantee a sound first character.
pub fn sanitize_name(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut last_underscore = false;
    for c in s.chars() {
        let mapped = if c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-') {
            c
        } else {
            '_'
        };
        if mapped == '_' {
            if last_underscore {
                continue;
            }
            last_underscore = true;
        } else {
            last_underscore = false;
        }
        out.push(mapped);
    }
    let trimmed = out.trim_matches(|c| matches!(c, '_' | '.' | '-'));
    let mut name = if trimmed.is_empty() {
        "obj".to_string()
    } else {
        trimmed.to_string()
    };
    if !name
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
    {
        name.insert(0, 'x');
    }
    name
}

impl DocBuilder {
    pub fn new(field: Field) -> DocBuilder {
        DocBuilder {
            field,
            objects: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn finish(self) -> Document {
        Document {
            field: self.field,
            objects: self.objects,
        }
    }

    /// Insert under a name derived from the hint; returns the name
    /// actually used. Identical content reuses the existing name.
    pub fn add(&mut self, hint: &str, obj: Object) -> String {
        let base = sanitize_name(hint);
        let mut candidate = base.clone();
        let mut k = 1usize;
        loop {
            match self.objects.get(&candidate) {
                None => {
                    self.objects.insert(candidate.clone(), obj);
                    return candidate;
                }
                Some(existing) if *existing == obj => return candidate,
                Some(_) => {
                    k += 1;
                    candidate = format!("{base}_{k}");
                }
            }
        }
    }
}

pub fn emit_matrix(b: &mut DocBuilder, hint: &str, m: &Matrix) -> String {
    b.add(hint, Object::LinearMap { matrix: m.clone() })
}

pub fn emit_algebra(b: &mut DocBuilder, l: &LieAlgebra) -> String {
    let mut bracket = Vec::new();
    for i in 0..l.dim() {
        for j in (i + 1)..l.dim() {
            for (k, v) in l.bracket_basis(i, j).iter().enumerate() {
                if !v.is_zero() {
                    bracket.push((i, j, k, v.clone()));
                }
            }
        }
    }
    b.add(
        l.name(),
        Object::LieAlgebra {
            dim: l.dim(),
            bracket,
        },
    )
}

pub fn emit_nla(b: &mut DocBuilder, g: &NijenhuisLieAlgebra) -> String {
    let algebra = emit_algebra(b, g.algebra());
    let operator = emit_matrix(b, &format!("{algebra}_op"), g.operator());
    b.add(
        &format!("{algebra}_nij"),
        Object::Nijenhuis { algebra, operator },
    )
}

pub fn emit_representation(b: &mut DocBuilder, hint: &str, r: &Representation) -> String {
    let algebra = emit_algebra(b, r.algebra());
    let action = (0..r.algebra().dim())
        .map(|i| {
            (
                i,
                emit_matrix(b, &format!("{hint}_rho_{}", i + 1), r.rho_basis(i)),
            )
        })
        .collect();
    b.add(
        hint,
        Object::Representation {
            algebra,
            dim_v: r.dim_v(),
            action,
        },
    )
}

pub fn emit_nij_representation(
    b: &mut DocBuilder,
    hint: &str,
    r: &NijenhuisRepresentation,
) -> String {
    let base = emit_nla(b, r.base());
    let rep = emit_representation(b, &format!("{hint}_rep"), r.rep());
    let operator = emit_matrix(b, &format!("{hint}_s"), r.operator());
    b.add(
        hint,
        Object::NijRepresentation {
            base,
            rep,
            operator,
        },
    )
}

fn sparse_chi(
    n: usize,
    chi_basis: impl Fn(usize, usize) -> Vec<Scalar>,
) -> Vec<(usize, usize, Vec<Scalar>)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = chi_basis(i, j);
            if !v_is_zero(&v) {
                out.push((i, j, v));
            }
        }
    }
    out
}

pub fn emit_cocycle_nab(b: &mut DocBuilder, hint: &str, c: &NonAbelianTwoCocycle) -> String {
    let source = emit_nla(b, c.source());
    let target = emit_nla(b, c.target());
    let n = c.source().dim();
    let chi = sparse_chi(n, |i, j| c.chi_basis(i, j).to_vec());
    let psi = (0..n)
        .map(|i| {
            (
                i,
                emit_matrix(b, &format!("{hint}_psi_{}", i + 1), c.psi_basis(i)),
            )
        })
        .collect();
    let f = emit_matrix(b, &format!("{hint}_f"), c.f());
    b.add(
        hint,
        Object::CocycleNab {
            source,
            target,
            chi,
            psi,
            f,
        },
    )
}

pub fn emit_cocycle_ab(b: &mut DocBuilder, hint: &str, c: &AbelianTwoCocycle) -> String {
    let context = emit_nij_representation(b, &format!("{hint}_context"), c.context());
    let n = c.context().base().dim();
    let chi = sparse_chi(n, |i, j| c.chi_basis(i, j).to_vec());
    let f = emit_matrix(b, &format!("{hint}_f"), c.f());
    b.add(hint, Object::CocycleAb { context, chi, f })
}

pub fn emit_extension(b: &mut DocBuilder, hint: &str, e: &Extension) -> String {
    let total = emit_nla(b, e.total());
    let kernel = emit_nla(b, e.kernel());
    let base = emit_nla(b, e.base());
    let embedding = emit_matrix(b, &format!("{hint}_embedding"), e.embedding());
    let projection = emit_matrix(b, &format!("{hint}_projection"), e.projection());
    b.add(
        hint,
        Object::Extension {
            total,
            kernel,
            base,
            embedding,
            projection,
        },
    )
}

pub fn emit_pair(b: &mut DocBuilder, hint: &str, kernel_map: &Matrix, base_map: &Matrix) -> String {
    let km = emit_matrix(b, &format!("{hint}_kernel_map"), kernel_map);
    let bm = emit_matrix(b, &format!("{hint}_base_map"), base_map);
    b.add(
        hint,
        Object::Pair {
            kernel_map: km,
            base_map: bm,
        },
    )
}
