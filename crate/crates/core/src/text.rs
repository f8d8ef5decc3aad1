//! Line-oriented quiver file format.
//!
//! ```text
//! quiver kronecker
//! vertex 1
//! vertex 2
//! arrow a : 1 -> 2
//! arrow b : 1 -> 2
//! rel 2*b*c - a*d        # right-to-left: c then b
//! dim 1=2 2=2
//! theta 1=1 2=-1
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quiver::{BoundQuiver, DimVector, Path, Quiver, Relation, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverFile {
    pub bound: BoundQuiver,
    pub dim: Option<DimVector>,
    pub theta: Option<Weight>,
}

impl QuiverFile {
    pub fn new(bound: BoundQuiver) -> Self {
        Self {
            bound,
            dim: None,
            theta: None,
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::ParseAt {
        line,
        column,
        message: message.into(),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_ident_char)
}

fn is_arrow_ident(s: &str) -> bool {
    is_ident(s) && !s.starts_with(|c: char| c.is_ascii_digit())
}

/// Splits a line into whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

pub fn parse_quiver(src: &str) -> Result<QuiverFile> {
    let mut name: Option<String> = None;
    let mut quiver = Quiver::new::<&str>(&[], &[])?;
    let mut relations = Vec::new();
    let mut dim_pairs: Option<Vec<(String, i64, usize, usize)>> = None;
    let mut theta_pairs: Option<Vec<(String, i64, usize, usize)>> = None;

    for (idx, raw) in src.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        match keyword {
            "quiver" => {
                if name.is_some() {
                    return Err(err(ln, col, "second 'quiver' declaration"));
                }
                match toks.as_slice() {
                    [_, (_, n)] => name = Some(n.to_string()),
                    _ => return Err(err(ln, col, "expected 'quiver <name>'")),
                }
            }
            "vertex" => {
                let [_, (c, v)] = toks.as_slice() else {
                    return Err(err(ln, col, "expected 'vertex <id>'"));
                };
                if !is_ident(v) {
                    return Err(err(ln, *c, format!("invalid vertex id '{v}'")));
                }
                quiver.add_vertex(v).map_err(|e| err(ln, *c, e.to_string()))?;
            }
            "arrow" => {
                let [_, (ca, a), (cc, colon), (ct, t), (cr, arrow), (ch, h)] = toks.as_slice() else {
                    return Err(err(ln, col, "expected 'arrow <id> : <tail> -> <head>'"));
                };
                if *colon != ":" {
                    return Err(err(ln, *cc, "expected ':'"));
                }
                if *arrow != "->" {
                    return Err(err(ln, *cr, "expected '->'"));
                }
                if !is_arrow_ident(a) {
                    return Err(err(ln, *ca, format!("invalid arrow id '{a}'")));
                }
                let t = quiver.vertex(t).map_err(|e| err(ln, *ct, e.to_string()))?;
                let h = quiver.vertex(h).map_err(|e| err(ln, *ch, e.to_string()))?;
                quiver.add_arrow(a, t, h).map_err(|e| err(ln, *ca, e.to_string()))?;
            }
            "rel" => {
                let start = line.find("rel").expect("keyword") + 3;
                let rel = parse_relation(&quiver, &line[start..], ln, line[..start].chars().count() + 1)?;
                relations.push(rel);
            }
            "dim" | "theta" => {
                let mut pairs = Vec::new();
                for &(c, tok) in &toks[1..] {
                    for (off, part) in split_commas(tok) {
                        let column = c + off;
                        let (v, x) = part
                            .split_once('=')
                            .ok_or_else(|| err(ln, column, format!("expected <vertex>=<int>, got '{part}'")))?;
                        let x: i64 = x
                            .parse()
                            .map_err(|_| err(ln, column, format!("invalid integer '{x}'")))?;
                        pairs.push((v.to_string(), x, ln, column));
                    }
                }
                let slot = if keyword == "dim" { &mut dim_pairs } else { &mut theta_pairs };
                if slot.replace(pairs).is_some() {
                    return Err(err(ln, col, format!("second '{keyword}' block")));
                }
            }
            other => return Err(err(ln, col, format!("unknown declaration '{other}'"))),
        }
    }
    let name = name.ok_or_else(|| err(1, 1, "missing 'quiver <name>' declaration"))?;
    let located = |pairs: &[(String, i64, usize, usize)]| -> Vec<(String, i64)> {
        pairs.iter().map(|(v, x, _, _)| (v.clone(), *x)).collect()
    };
    let first_pos = |pairs: &[(String, i64, usize, usize)]| {
        pairs.first().map(|p| (p.2, p.3)).unwrap_or((1, 1))
    };
    let dim = match &dim_pairs {
        Some(p) => Some(DimVector::from_assignments(&quiver, &located(p)).map_err(|e| {
            let (l, c) = first_pos(p);
            err(l, c, e.to_string())
        })?),
        None => None,
    };
    let theta = match &theta_pairs {
        Some(p) => Some(Weight::from_assignments(&quiver, &located(p)).map_err(|e| {
            let (l, c) = first_pos(p);
            err(l, c, e.to_string())
        })?),
        None => None,
    };
    Ok(QuiverFile {
        bound: BoundQuiver::new(name, quiver, relations),
        dim,
        theta,
    })
}

fn split_commas(tok: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in tok.split(',') {
        if !part.is_empty() {
            out.push((offset, part));
        }
        offset += part.chars().count() + 1;
    }
    out
}

/// Parses `[<int>[/<int>]*]<id>*...*<id> [(+|-) term]...`.
fn parse_relation(quiver: &Quiver, s: &str, ln: usize, col0: usize) -> Result<Relation> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    let mut terms = Vec::new();
    let mut sign = BigRational::one();
    skip_ws(&mut i);
    if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
        if chars[i] == '-' {
            sign = -sign;
        }
        i += 1;
    }
    loop {
        skip_ws(&mut i);
        let term_col = col0 + i;
        let mut coeff = BigRational::one();
        if i < chars.len() && chars[i].is_ascii_digit() {
            let num = read_while(&chars, &mut i, |c| c.is_ascii_digit());
            let mut den = String::from("1");
            if i < chars.len() && chars[i] == '/' {
                i += 1;
                den = read_while(&chars, &mut i, |c| c.is_ascii_digit());
            }
            let n: BigInt = num.parse().map_err(|_| err(ln, term_col, "invalid coefficient"))?;
            let d: BigInt = den.parse().map_err(|_| err(ln, term_col, "invalid coefficient"))?;
            if d.is_zero() {
                return Err(err(ln, term_col, "zero denominator"));
            }
            coeff = BigRational::new(n, d);
            if i >= chars.len() || chars[i] != '*' {
                return Err(err(ln, col0 + i, "expected '*' after coefficient"));
            }
            i += 1;
        }
        let mut arrows = Vec::new();
        loop {
            let c = col0 + i;
            let id = read_while(&chars, &mut i, is_ident_char);
            if id.is_empty() {
                return Err(err(ln, c, "expected an arrow id"));
            }
            let a = quiver.arrow_id(&id).map_err(|e| err(ln, c, e.to_string()))?;
            arrows.push(a);
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            } else {
                break;
            }
        }
        arrows.reverse();
        let path = Path::new(quiver, arrows).map_err(|e| err(ln, term_col, e.to_string()))?;
        terms.push((sign.clone() * coeff, path));
        skip_ws(&mut i);
        if i >= chars.len() {
            break;
        }
        sign = match chars[i] {
            '+' => BigRational::one(),
            '-' => -BigRational::one(),
            c => return Err(err(ln, col0 + i, format!("unexpected '{c}'"))),
        };
        i += 1;
    }
    Relation::new(quiver, terms).map_err(|e| err(ln, col0, e.to_string()))
}

fn read_while(chars: &[char], i: &mut usize, pred: impl Fn(char) -> bool) -> String {
    let start = *i;
    while *i < chars.len() && pred(chars[*i]) {
        *i += 1;
    }
    chars[start..*i].iter().collect()
}

pub fn print_quiver(file: &QuiverFile) -> String {
    let bq = &file.bound;
    let q = bq.quiver();
    let mut out = format!("quiver {}\n", bq.name());
    for v in q.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for a in q.arrows() {
        out.push_str(&format!(
            "arrow {} : {} -> {}\n",
            a.name,
            q.vertex_name(a.tail),
            q.vertex_name(a.head)
        ));
    }
    for r in bq.relations() {
        out.push_str(&format!("rel {}\n", r.render(q)));
    }
    if let Some(d) = &file.dim {
        out.push_str(&format!("dim {}\n", d.render(q).replace(',', " ")));
    }
    if let Some(t) = &file.theta {
        out.push_str(&format!("theta {}\n", t.render(q).replace(',', " ")));
    }
    out
}
