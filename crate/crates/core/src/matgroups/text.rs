//! Matrix text form: rows separated by `;`, entries by `,`, e.g. `(1,t;0,1)`.
//! Square brackets are accepted in place of the outer parentheses.

use std::fmt;

use super::{GroupElem, GroupTag, TriMatrix};
use crate::error::{Error, Result};
use crate::rings::{parse_elem, RingDescriptor};

/// Splits at top-level occurrences of `sep`.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

pub fn parse_matrix(ring: &RingDescriptor, s: &str) -> Result<TriMatrix> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .or_else(|| s.strip_prefix('[').and_then(|x| x.strip_suffix(']')))
        .ok_or_else(|| Error::Parse(format!("matrix `{s}` must be enclosed in parentheses")))?;
    let rows = split_top(inner, ';')
        .into_iter()
        .map(|row| split_top(row, ',').into_iter().map(|e| parse_elem(ring, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    TriMatrix::from_rows(ring, rows)
}

pub fn parse_group_elem(tag: GroupTag, ring: &RingDescriptor, s: &str) -> Result<GroupElem> {
    GroupElem::new(tag, parse_matrix(ring, s)?)
}

impl fmt::Display for TriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, ")")
    }
}
