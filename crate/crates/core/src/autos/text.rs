//! Text grammar for automorphisms and additive maps.
//!
//! Steps: `id`, `flip`, `ring:<ring auto>`, `phiP:P=X^2+X+1,a=1[,inv]`,
//! `inner:<matrix>`, `diag:(u1,...,un)`, `central:i=1,lambda=<map>`,
//! `sigma:a=2,lambda=half` (`sigma'` for the primed family),
//! `sec6:phiB:a=2`, `sec6:phiBP:P=X^2+X+1`, and `compose(e1,e2,...)`.
//!
//! Ring automorphisms: `id`, `t->a*t+b:a=1,b=1` (or just `a=1,b=1`),
//! `eps=0|1`, `x-><elem>`. Additive maps: `zero`, `frob`, `mul:<elem>`,
//! `ring:<ring auto>`, `block:P=<poly>[,inv]`, `phiP:...`, `half[:c]`,
//! `halfshift[:c]`, `compose(...)`.

use std::fmt;

use super::{AdditiveMapSpec, AutExpr, AutStep, Sec6Kind, Signature};
use crate::error::{Error, Result};
use crate::matgroups::{parse_group_elem, GroupTag};
use crate::rings::{fmt_field_poly, parse_elem, parse_field_poly, RingAuto, RingDescriptor, RingElem};

const KEYWORDS: &[&str] = &[
    "id", "flip", "ring:", "phiP:", "inner:", "diag:", "central:", "sigma:", "sigma':", "sec6:", "compose(", "zero",
    "frob", "mul:", "block:", "half", "halfshift",
];

fn starts_item(s: &str) -> bool {
    let s = s.trim_start();
    KEYWORDS.iter().any(|k| s.starts_with(k))
        && !s.split_once('=').is_some_and(|(k, _)| k.chars().all(|c| c.is_ascii_alphanumeric() || c == '\''))
}

/// Splits at top-level commas.
fn split_commas(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Items of `compose(...)`: top-level comma pieces, where a piece that does
/// not start a new item (e.g. `b=1`) continues the previous one.
fn split_items(s: &str) -> Vec<String> {
    let mut items: Vec<String> = Vec::new();
    for piece in split_commas(s) {
        match items.last_mut() {
            Some(last) if !starts_item(piece) => {
                last.push(',');
                last.push_str(piece);
            }
            _ => items.push(piece.trim().to_string()),
        }
    }
    items
}

fn compose_body(s: &str) -> Option<&str> {
    s.strip_prefix("compose(").and_then(|x| x.strip_suffix(')'))
}

/// `key=value` pairs (and bare flags) separated by `,` or `:`.
fn key_values(s: &str) -> Vec<(String, String)> {
    split_commas(s)
        .into_iter()
        .flat_map(|p| {
            if p.contains('(') {
                vec![p]
            } else {
                p.split(':').collect()
            }
        })
        .filter(|p| !p.trim().is_empty())
        .map(|p| match p.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
            None => (p.trim().to_string(), String::new()),
        })
        .collect()
}

fn get<'a>(kv: &'a [(String, String)], key: &str) -> Option<&'a str> {
    kv.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn require<'a>(kv: &'a [(String, String)], key: &str, ctx: &str) -> Result<&'a str> {
    get(kv, key).ok_or_else(|| Error::Parse(format!("`{ctx}` is missing `{key}=`")))
}

fn field_index(ring: &RingDescriptor, s: &str) -> Result<u32> {
    let base = ring.coefficient_field().map(|_| {
        let mut b = ring.clone();
        while !b.is_base() {
            b = b.base().clone();
        }
        b
    });
    let base = base.ok_or_else(|| Error::InvalidParams(format!("{ring} has no finite coefficient field")))?;
    Ok(parse_elem(&base, s)?.field_index().unwrap())
}

fn parse_p(ring: &RingDescriptor, s: &str) -> Result<Vec<u32>> {
    let f = ring
        .coefficient_field()
        .ok_or_else(|| Error::InvalidParams(format!("{ring} has no finite coefficient field")))?;
    if let Some(list) = s.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        return list
            .split(',')
            .map(|c| c.trim().parse::<u32>().ok().filter(|&c| c < f.order()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse(format!("bad coefficient list `{s}`")));
    }
    parse_field_poly(f, s)
}

pub(crate) fn parse_ring_auto(ring: &RingDescriptor, s: &str) -> Result<RingAuto> {
    let s = s.trim();
    if s == "id" {
        return Ok(RingAuto::Identity);
    }
    if let Some(img) = s.strip_prefix("x->") {
        return RingAuto::order_root_map(ring, parse_elem(ring, img)?);
    }
    let body = s.strip_prefix("t->a*t+b:").unwrap_or(s);
    let kv = key_values(body);
    if let Some(e) = get(&kv, "eps") {
        if !ring.is_laurent() {
            return Err(Error::InvalidAutomorphism(format!("eps needs a Laurent ring, got {ring}")));
        }
        return match e {
            "0" => Ok(RingAuto::LaurentFlip(false)),
            "1" => Ok(RingAuto::LaurentFlip(true)),
            _ => Err(Error::Parse(format!("eps must be 0 or 1, got `{e}`"))),
        };
    }
    if !ring.is_poly() {
        return Err(Error::InvalidAutomorphism(format!("affine substitution needs a polynomial ring, got {ring}")));
    }
    let a = parse_elem(ring.base(), require(&kv, "a", s)?)?;
    let b = parse_elem(ring.base(), require(&kv, "b", s)?)?;
    RingAuto::poly_affine(ring, a, b)
}

fn phi_p_spec(ring: &RingDescriptor, kv: &[(String, String)], ctx: &str) -> Result<AdditiveMapSpec> {
    let p = parse_p(ring, require(kv, "P", ctx)?)?;
    let a = field_index(ring, get(kv, "a").unwrap_or("1"))?;
    let inverse = get(kv, "inv").is_some();
    super::phi_p_map(ring, &p, a, inverse)
}

/// `sigma_a` is the Sigma datum used by `half` and `halfshift` without an
/// explicit coefficient.
fn parse_additive_with(ring: &RingDescriptor, s: &str, sigma_a: Option<&RingElem>) -> Result<AdditiveMapSpec> {
    let s = s.trim();
    if let Some(body) = compose_body(s) {
        let parts = split_items(body)
            .iter()
            .map(|p| parse_additive_with(ring, p, sigma_a))
            .collect::<Result<Vec<_>>>()?;
        return Ok(AdditiveMapSpec::Compose(parts));
    }
    let half = |shifted: bool, rest: Option<&str>| -> Result<AdditiveMapSpec> {
        let a = match rest {
            Some(c) => parse_elem(ring, c)?,
            None => sigma_a.cloned().ok_or_else(|| Error::Parse("`half` needs a coefficient outside sigma".into()))?,
        };
        Ok(AdditiveMapSpec::QuadraticHalf { a, shifted })
    };
    match s {
        "id" => return Ok(AdditiveMapSpec::RingAutoInduced(RingAuto::Identity)),
        "zero" => return Ok(AdditiveMapSpec::ZeroMap),
        "frob" => return Ok(AdditiveMapSpec::Frobenius),
        "half" => return half(false, None),
        "halfshift" => return half(true, None),
        _ => {}
    }
    if let Some(c) = s.strip_prefix("halfshift:") {
        return half(true, Some(c));
    }
    if let Some(c) = s.strip_prefix("half:") {
        return half(false, Some(c));
    }
    if let Some(c) = s.strip_prefix("mul:") {
        return Ok(AdditiveMapSpec::MulUnit(parse_elem(ring, c)?));
    }
    if let Some(r) = s.strip_prefix("ring:") {
        return Ok(AdditiveMapSpec::RingAutoInduced(parse_ring_auto(ring, r)?));
    }
    if let Some(body) = s.strip_prefix("block:") {
        let kv = key_values(body);
        let p = parse_p(ring, require(&kv, "P", s)?)?;
        return Ok(AdditiveMapSpec::BlockCompanion { p, inverse: get(&kv, "inv").is_some() });
    }
    if let Some(body) = s.strip_prefix("phiP:") {
        return phi_p_spec(ring, &key_values(body), s);
    }
    Err(Error::Parse(format!("unknown additive map `{s}`")))
}

pub fn parse_additive(ring: &RingDescriptor, s: &str) -> Result<AdditiveMapSpec> {
    parse_additive_with(ring, s, None)
}

fn parse_step(sig: &Signature, s: &str) -> Result<Vec<AutStep>> {
    let ring = &sig.ring;
    let s = s.trim();
    if let Some(body) = compose_body(s) {
        let mut steps = Vec::new();
        for item in split_items(body) {
            steps.extend(parse_step(sig, &item)?);
        }
        return Ok(steps);
    }
    let step = if s == "id" {
        return Ok(Vec::new());
    } else if s == "flip" {
        AutStep::Flip
    } else if let Some(r) = s.strip_prefix("ring:") {
        AutStep::RingInduced(parse_ring_auto(ring, r)?)
    } else if let Some(body) = s.strip_prefix("phiP:") {
        let kv = key_values(body);
        AutStep::ExplicitPhiP {
            p: parse_p(ring, require(&kv, "P", s)?)?,
            a: field_index(ring, get(&kv, "a").unwrap_or("1"))?,
            inverse: get(&kv, "inv").is_some(),
        }
    } else if let Some(m) = s.strip_prefix("inner:") {
        let tag = if sig.tag.is_projective() { GroupTag::ProjBorel } else { GroupTag::Borel };
        AutStep::Inner(parse_group_elem(tag, ring, m)?)
    } else if let Some(body) = s.strip_prefix("diag:") {
        let inner = body
            .trim()
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("`{s}` should look like diag:(u1,...,un)")))?;
        AutStep::DiagConj(split_commas(inner).into_iter().map(|u| parse_elem(ring, u)).collect::<Result<_>>()?)
    } else if let Some(body) = s.strip_prefix("central:") {
        let kv = key_values_lambda(body);
        let i = require(&kv, "i", s)?.parse().map_err(|_| Error::Parse(format!("bad index in `{s}`")))?;
        AutStep::Central { i, lambda: parse_additive(ring, require(&kv, "lambda", s)?)? }
    } else if let Some((primed, body)) =
        s.strip_prefix("sigma':").map(|b| (true, b)).or_else(|| s.strip_prefix("sigma:").map(|b| (false, b)))
    {
        let kv = key_values_lambda(body);
        let a = parse_elem(ring, require(&kv, "a", s)?)?;
        let lambda = parse_additive_with(ring, get(&kv, "lambda").unwrap_or("half"), Some(&a))?;
        AutStep::Sigma { lambda, a, primed }
    } else if let Some(body) = s.strip_prefix("sec6:") {
        let (kind, rest) = body.split_once(':').unwrap_or((body, ""));
        let kind = Sec6Kind::from_name(kind)?;
        let kv = key_values(rest);
        let (p, a) = if kind.uses_p() {
            let p = match get(&kv, "P") {
                Some(p) => parse_p(ring, p)?,
                None => crate::rings::find_irreducible(&ring.base().clone(), 2)?,
            };
            (p, 1)
        } else {
            let a = match get(&kv, "a") {
                Some(a) => field_index(ring, a)?,
                None => crate::rings::find_flip_unit(ring)?,
            };
            (Vec::new(), a)
        };
        AutStep::Section6 { kind, p, a, inverse: get(&kv, "inv").is_some() }
    } else {
        return Err(Error::Parse(format!("unknown automorphism `{s}`")));
    };
    step.validate(sig)?;
    Ok(vec![step])
}

/// Key-value pairs where the `lambda` value may itself contain `:` and `,`.
fn key_values_lambda(body: &str) -> Vec<(String, String)> {
    match body.find("lambda=") {
        Some(pos) => {
            let mut kv = key_values(body[..pos].trim_end_matches(','));
            kv.push(("lambda".into(), body[pos + "lambda=".len()..].to_string()));
            kv
        }
        None => key_values(body),
    }
}

pub fn parse_aut(s: &str, sig: &Signature) -> Result<AutExpr> {
    Ok(AutExpr { sig: sig.clone(), steps: parse_step(sig, s)? })
}

pub(crate) struct StepDisplay<'a>(pub &'a AutStep, pub &'a Signature);

impl fmt::Display for StepDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = &self.1.ring;
        let field = ring.coefficient_field();
        let fe = |a: u32| field.map(|fl| fl.format_elem(a)).unwrap_or_default();
        let fp = |p: &[u32]| field.map(|fl| fmt_field_poly(fl, p, "X")).unwrap_or_default();
        match self.0 {
            AutStep::Inner(g) => write!(f, "inner:{g}"),
            AutStep::DiagConj(u) => {
                write!(f, "diag:({})", u.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            }
            AutStep::Central { i, lambda } => write!(f, "central:i={i},lambda={lambda}"),
            AutStep::Sigma { lambda, a, primed } => {
                write!(f, "sigma{}:a={a},lambda={lambda}", if *primed { "'" } else { "" })
            }
            AutStep::Flip => write!(f, "flip"),
            AutStep::RingInduced(alpha) => write!(f, "ring:{alpha}"),
            AutStep::ExplicitPhiP { p, a, inverse } => {
                write!(f, "phiP:P={},a={}{}", fp(p), fe(*a), if *inverse { ",inv" } else { "" })
            }
            AutStep::Section6 { kind, p, a, inverse } => {
                write!(f, "sec6:{}", kind.name())?;
                if kind.uses_p() {
                    write!(f, ":P={}", fp(p))?;
                } else {
                    write!(f, ":a={}", fe(*a))?;
                }
                if *inverse {
                    write!(f, ":inv")?;
                }
                Ok(())
            }
        }
    }
}
