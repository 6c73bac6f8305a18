//! Form-definition and geometry files, plus the JSON report schemas.
//!
//! Form files are UTF-8 and line-oriented. `#` starts a comment. Keys:
//!
//! ```text
//! ring = field(2, 1) | funcfield2(t) | quaternions()
//! pair = pair(sigma = id | frob^k | conj, eps = <element>)
//! dim = <n>
//! gram = [[<element>, ...], ...]
//! values = [<element>, ...]
//! codefect = codefect(zero | full | gens = [<element>, ...])
//! ```
//!
//! Geometry files carry `ambient = field(p, n)`, `dim = <d>`, then one
//! `point <coords...>` line per point and `line <idx> <idx> ...` lines with
//! indices into the point list (at least two; the full projective line is
//! regenerated and checked).

use crate::admissible::{validate_pair, AdmissiblePair, ClosedSubgroup, SubgroupKind};
use crate::classify::EmbeddedGeometry;
use crate::error::{Error, Result};
use crate::forms::GenPseudoQuadraticForm;
use crate::linalg::Matrix;
use crate::scalars::{parse_antiauto, parse_element, parse_ring, RingElement, RingSpec};
use serde::Serialize;

fn err_at(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Splits a bracketed list `[a, b, c]` on top-level commas.
fn split_list(line: usize, s: &str) -> Result<Vec<String>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| err_at(line, "expected a bracketed list"))?;
    let mut out = Vec::new();
    let mut depth = 0i64;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '[' | '(' => {
                depth += 1;
                cur.push(ch);
            }
            ']' | ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    Ok(out)
}

fn parse_pair_clause(line: usize, ring: &RingSpec, s: &str) -> Result<AdmissiblePair> {
    let inner = s
        .trim()
        .strip_prefix("pair")
        .map(str::trim)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err_at(line, "expected pair(sigma = ..., eps = ...)"))?;
    let mut sigma = None;
    let mut eps = None;
    for part in inner.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| err_at(line, "expected key = value inside pair(...)"))?;
        match k.trim() {
            "sigma" => sigma = Some(parse_antiauto(v.trim())?),
            "eps" => eps = Some(parse_element(ring, v.trim())?),
            other => return Err(err_at(line, format!("unknown pair key `{}`", other))),
        }
    }
    let sigma = sigma.ok_or_else(|| err_at(line, "pair needs sigma"))?;
    let eps = eps.ok_or_else(|| err_at(line, "pair needs eps"))?;
    validate_pair(ring, sigma, eps)
}

fn parse_codefect_clause(line: usize, pair: &AdmissiblePair, s: &str) -> Result<ClosedSubgroup> {
    let inner = s
        .trim()
        .strip_prefix("codefect")
        .map(str::trim)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err_at(line, "expected codefect(zero | full | gens = [...])"))?;
    let inner = inner.trim();
    if inner == "zero" {
        return Ok(ClosedSubgroup::zero(pair));
    }
    if inner == "full" {
        return Ok(ClosedSubgroup::full(pair));
    }
    let gens_str = inner
        .strip_prefix("gens")
        .map(str::trim)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| err_at(line, "expected gens = [...]"))?;
    let gens = split_list(line, gens_str)?
        .iter()
        .map(|g| Ok(pair.coset(&parse_element(pair.ring(), g)?)?))
        .collect::<Result<Vec<_>>>()?;
    ClosedSubgroup::generated(pair, gens)
}

/// Parses a complete form-definition file into a validated form.
pub fn parse_form_file(text: &str) -> Result<GenPseudoQuadraticForm> {
    let mut ring: Option<RingSpec> = None;
    let mut pair: Option<AdmissiblePair> = None;
    let mut dim: Option<usize> = None;
    let mut gram: Option<Matrix> = None;
    let mut values: Option<Vec<RingElement>> = None;
    let mut codefect: Option<ClosedSubgroup> = None;
    for (no, raw) in text.lines().enumerate() {
        let lineno = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err_at(lineno, "expected key = value"))?;
        let value = value.trim();
        match key.trim() {
            "ring" => ring = Some(parse_ring(value).map_err(|e| relocate(e, lineno))?),
            "pair" => {
                let r = ring
                    .as_ref()
                    .ok_or_else(|| err_at(lineno, "ring must come before pair"))?;
                pair = Some(parse_pair_clause(lineno, r, value)?);
            }
            "dim" => {
                dim = Some(
                    value
                        .parse()
                        .map_err(|_| err_at(lineno, "dim must be a positive integer"))?,
                )
            }
            "gram" => {
                let r = ring
                    .as_ref()
                    .ok_or_else(|| err_at(lineno, "ring must come before gram"))?;
                let rows = split_list(lineno, value)?;
                let mut m = Vec::with_capacity(rows.len());
                for row in rows {
                    let entries = split_list(lineno, &row)?
                        .iter()
                        .map(|e| parse_element(r, e).map_err(|e| relocate(e, lineno)))
                        .collect::<Result<Vec<_>>>()?;
                    m.push(entries);
                }
                gram = Some(m);
            }
            "values" => {
                let r = ring
                    .as_ref()
                    .ok_or_else(|| err_at(lineno, "ring must come before values"))?;
                values = Some(
                    split_list(lineno, value)?
                        .iter()
                        .map(|e| parse_element(r, e).map_err(|e| relocate(e, lineno)))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            "codefect" => {
                let p = pair
                    .as_ref()
                    .ok_or_else(|| err_at(lineno, "pair must come before codefect"))?;
                codefect = Some(parse_codefect_clause(lineno, p, value)?);
            }
            other => return Err(err_at(lineno, format!("unknown key `{}`", other))),
        }
    }
    let pair = pair.ok_or_else(|| err_at(0, "missing pair"))?;
    let dim = dim.ok_or_else(|| err_at(0, "missing dim"))?;
    let gram = gram.ok_or_else(|| err_at(0, "missing gram"))?;
    let values = values.ok_or_else(|| err_at(0, "missing values"))?;
    let codefect = codefect.unwrap_or_else(|| ClosedSubgroup::zero(&pair));
    if gram.len() != dim || gram.iter().any(|r| r.len() != dim) {
        return Err(err_at(0, format!("gram must be {dim} x {dim}")));
    }
    if values.len() != dim {
        return Err(err_at(0, format!("values must list {dim} entries")));
    }
    let value_cosets = values
        .iter()
        .map(|v| pair.coset(v))
        .collect::<Result<Vec<_>>>()?;
    GenPseudoQuadraticForm::new(pair, gram, value_cosets, codefect)
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => other,
    }
}

/// Parses a geometry file into a validated embedded polar space.
pub fn parse_geometry_file(text: &str) -> Result<EmbeddedGeometry> {
    let mut ring: Option<RingSpec> = None;
    let mut dim: Option<usize> = None;
    let mut points: Vec<Vec<RingElement>> = Vec::new();
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let lineno = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("point ") {
            let r = ring
                .as_ref()
                .ok_or_else(|| err_at(lineno, "ambient must come before points"))?;
            let coords = rest
                .split_whitespace()
                .map(|c| parse_element(r, c).map_err(|e| relocate(e, lineno)))
                .collect::<Result<Vec<_>>>()?;
            points.push(coords);
        } else if let Some(rest) = line.strip_prefix("line ") {
            let idx = rest
                .split_whitespace()
                .map(|c| {
                    c.parse::<usize>()
                        .map_err(|_| err_at(lineno, format!("bad point index `{}`", c)))
                })
                .collect::<Result<Vec<_>>>()?;
            lines.push(idx);
        } else if let Some((key, value)) = line.split_once('=') {
            match key.trim() {
                "ambient" => {
                    ring = Some(parse_ring(value.trim()).map_err(|e| relocate(e, lineno))?)
                }
                "dim" => {
                    dim = Some(
                        value
                            .trim()
                            .parse()
                            .map_err(|_| err_at(lineno, "dim must be a positive integer"))?,
                    )
                }
                other => return Err(err_at(lineno, format!("unknown key `{}`", other))),
            }
        } else {
            return Err(err_at(lineno, format!("unrecognized line `{}`", line)));
        }
    }
    let ring = ring.ok_or_else(|| err_at(0, "missing ambient"))?;
    let dim = dim.ok_or_else(|| err_at(0, "missing dim"))?;
    EmbeddedGeometry::new(ring, dim, points, lines)
}

#[derive(Serialize)]
pub struct PairReport {
    pub sigma: String,
    pub eps: String,
}

#[derive(Serialize)]
pub struct CodefectReport {
    pub kind: String,
    pub gens: Vec<String>,
}

/// A form in the same schema as form-definition files.
#[derive(Serialize)]
pub struct FormReport {
    pub ring: String,
    pub pair: PairReport,
    pub dim: usize,
    pub gram: Vec<Vec<String>>,
    pub values: Vec<String>,
    pub codefect: CodefectReport,
}

impl FormReport {
    pub fn of(q: &GenPseudoQuadraticForm) -> FormReport {
        let pair = q.pair();
        FormReport {
            ring: pair.ring().to_string(),
            pair: PairReport {
                sigma: pair.sigma().to_string(),
                eps: pair.epsilon().to_string(),
            },
            dim: q.dim(),
            gram: q
                .gram()
                .iter()
                .map(|row| row.iter().map(|e| e.to_string()).collect())
                .collect(),
            values: q.values().iter().map(|v| v.rep().to_string()).collect(),
            codefect: CodefectReport {
                kind: match q.codefect().kind() {
                    SubgroupKind::Zero => "zero".into(),
                    SubgroupKind::Full => "full".into(),
                    SubgroupKind::Generated => "gens".into(),
                },
                gens: q
                    .codefect()
                    .generators()
                    .iter()
                    .map(|g| g.rep().to_string())
                    .collect(),
            },
        }
    }

    /// The same data in form-file syntax.
    pub fn to_form_file(&self) -> String {
        let gram = self
            .gram
            .iter()
            .map(|row| format!("[{}]", row.join(", ")))
            .collect::<Vec<_>>()
            .join(", ");
        let codefect = match self.codefect.kind.as_str() {
            "gens" => format!("codefect(gens = [{}])", self.codefect.gens.join(", ")),
            kind => format!("codefect({})", kind),
        };
        format!(
            "ring = {}\npair = pair(sigma = {}, eps = {})\ndim = {}\ngram = [{}]\nvalues = [{}]\ncodefect = {}\n",
            self.ring,
            self.pair.sigma,
            self.pair.eps,
            self.dim,
            gram,
            self.values.join(", "),
            codefect
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::sampler::Sampler;

    #[test]
    fn form_file_roundtrip() {
        let text = "\
# hyperbolic plane over F_2(t) with co-defect span {1}
ring = funcfield2(t)
pair = pair(sigma = id, eps = 1)
dim = 2
gram = [[0, 1], [1, 0]]
values = [0, 0]
codefect = codefect(gens = [1])
";
        let q = parse_form_file(text).unwrap();
        assert_eq!(q, fixtures::funcfield_hyperbolic(&["1"]).unwrap());
        let back = parse_form_file(&FormReport::of(&q).to_form_file()).unwrap();
        let mut sampler = Sampler::new(1);
        assert!(crate::forms::forms_agree(&q, &back, &mut sampler, 50).unwrap());
    }

    #[test]
    fn form_file_diagnostics() {
        let bad_gram = "\
ring = field(5, 1)
pair = pair(sigma = id, eps = 1)
dim = 2
gram = [[0, 1], [2, 0]]
values = [0, 0]
codefect = codefect(zero)
";
        assert!(matches!(
            parse_form_file(bad_gram),
            Err(Error::NotReflexive(1, 0))
        ));
        let bad_trace = "\
ring = field(2, 1)
pair = pair(sigma = id, eps = 1)
dim = 2
gram = [[1, 0], [0, 1]]
values = [1, 1]
codefect = codefect(full)
";
        assert!(matches!(
            parse_form_file(bad_trace),
            Err(Error::NotTraceValued(0))
        ));
        let bad_syntax = "ring = field(5, 1)\npair = pair(sigma = id)\n";
        assert!(matches!(
            parse_form_file(bad_syntax),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn geometry_file_roundtrip() {
        let q = fixtures::hyperbolic_q(&RingSpec::finite(2, 1).unwrap(), 2).unwrap();
        let space = crate::polar::build_polar_space(&crate::polar::PolarSource::Q(&q)).unwrap();
        let mut text = String::from("ambient = field(2, 1)\ndim = 4\n");
        for p in &space.points {
            let coords: Vec<String> = p.coords.iter().map(|c| c.to_string()).collect();
            text.push_str(&format!("point {}\n", coords.join(" ")));
        }
        for l in &space.lines {
            let idx: Vec<String> = l.iter().map(|i| i.to_string()).collect();
            text.push_str(&format!("line {}\n", idx.join(" ")));
        }
        let geom = parse_geometry_file(&text).unwrap();
        assert_eq!(geom.points.len(), 9);
        assert_eq!(geom.lines.len(), 6);
    }

    #[test]
    fn quaternion_form_file() {
        let text = "\
ring = quaternions()
pair = pair(sigma = conj, eps = -1)
dim = 4
gram = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
values = [0, 0, 0, 0]
codefect = codefect(zero)
";
        let q = parse_form_file(text).unwrap();
        assert_eq!(q, fixtures::quaternion_exceptional().unwrap());
    }
}
