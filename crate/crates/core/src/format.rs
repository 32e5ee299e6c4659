//! The tower file format: UTF-8 `key = value` lines defining the primes,
//! the degree, named permutations in cycle notation, the generator lists
//! for G, H and N, and an optional block of expected values for golden
//! testing.
//!
//! ```text
//! p = 7
//! q = 2
//! degree = 14
//! a = (1,2,3,4,5,6,7)(8,9,10,11,12,13,14)
//! b = (1,2,3,11,12,6,14)(4,5,13,7,8,9,10)
//! G = a, b
//! H = [(3,10)(5,12)(6,13)(7,14); (1,8)(3,10)(4,11)(5,12)]
//! N = [(3,10)(5,12)(6,13)(7,14)]
//! expect.order = 56
//! expect.s = 3
//! expect.U = Z7
//! expect.gZ = 17
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. List entries are
//! names of previously defined permutations or inline cycle expressions.

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith;
use crate::classify::SimpleGroupId;
use crate::perm::{format_cycles, parse_cycles, Permutation};

#[derive(Error, Debug)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Expected values for golden testing, all optional.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectations {
    pub order: Option<BigUint>,
    pub core_rank: Option<u32>,
    pub image_label: Option<String>,
    pub genus_z: Option<BigUint>,
}

impl Expectations {
    pub fn is_empty(&self) -> bool {
        self.order.is_none()
            && self.core_rank.is_none()
            && self.image_label.is_none()
            && self.genus_z.is_none()
    }
}

/// A parsed tower file, still purely syntactic: group-theoretic validation
/// happens in `CoverTower::validated`.
#[derive(Clone, Debug)]
pub struct TowerFile {
    pub p: u64,
    pub q: u64,
    pub degree: usize,
    /// Named permutations in definition order.
    pub named: Vec<(String, Permutation)>,
    pub g_gens: Vec<Permutation>,
    pub h_gens: Vec<Permutation>,
    pub n_gens: Vec<Permutation>,
    pub expect: Expectations,
}

pub fn parse_tower_file(text: &str) -> Result<TowerFile, ParseError> {
    // First pass: the numeric header keys, which fix the degree every
    // permutation is parsed at.
    let mut p: Option<(u64, usize)> = None;
    let mut q: Option<(u64, usize)> = None;
    let mut degree: Option<(u64, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(line_no, "expected `key = value`"));
        };
        let key = key.trim();
        let value = value.trim();
        let set = |slot: &mut Option<(u64, usize)>| -> Result<(), ParseError> {
            if slot.is_some() {
                return Err(err(line_no, format!("duplicate key {key:?}")));
            }
            let parsed: u64 = value
                .parse()
                .map_err(|_| err(line_no, format!("invalid integer {value:?}")))?;
            *slot = Some((parsed, line_no));
            Ok(())
        };
        match key {
            "p" => set(&mut p)?,
            "q" => set(&mut q)?,
            "degree" => set(&mut degree)?,
            _ => {}
        }
    }
    let (p, p_line) = p.ok_or_else(|| err(1, "missing key `p`"))?;
    let (q, q_line) = q.ok_or_else(|| err(1, "missing key `q`"))?;
    let (degree, degree_line) = degree.ok_or_else(|| err(1, "missing key `degree`"))?;
    if !arith::is_prime(p) || p % 2 == 0 || p < 3 {
        return Err(err(p_line, format!("p = {p} must be an odd prime")));
    }
    if !arith::is_prime(q) {
        return Err(err(q_line, format!("q = {q} must be prime")));
    }
    if p == q {
        return Err(err(q_line, "p and q must be different primes"));
    }
    if degree != p * q {
        return Err(err(
            degree_line,
            format!("degree = {degree} must equal p*q = {}", p * q),
        ));
    }
    let degree = degree as usize;

    // Second pass: named permutations and the generator lists.
    let mut named: Vec<(String, Permutation)> = Vec::new();
    let mut g_gens: Option<Vec<Permutation>> = None;
    let mut h_gens: Option<Vec<Permutation>> = None;
    let mut n_gens: Option<Vec<Permutation>> = None;
    let mut expect = Expectations::default();

    let lookup = |named: &[(String, Permutation)],
                  token: &str,
                  line_no: usize|
     -> Result<Permutation, ParseError> {
        let token = token.trim();
        if token.is_empty() {
            return Err(err(line_no, "empty permutation entry"));
        }
        if token.starts_with('(') {
            return parse_cycles(token, degree).map_err(|e| err(line_no, e.to_string()));
        }
        named
            .iter()
            .find(|(name, _)| name == token)
            .map(|(_, perm)| perm.clone())
            .ok_or_else(|| err(line_no, format!("undefined permutation name {token:?}")))
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').expect("checked in first pass");
        let key = key.trim();
        let value = value.trim();
        match key {
            "p" | "q" | "degree" => {}
            "G" | "H" | "N" => {
                let slot = match key {
                    "G" => &mut g_gens,
                    "H" => &mut h_gens,
                    _ => &mut n_gens,
                };
                if slot.is_some() {
                    return Err(err(line_no, format!("duplicate key {key:?}")));
                }
                let body = if key == "G" {
                    value
                } else {
                    value
                        .strip_prefix('[')
                        .and_then(|v| v.strip_suffix(']'))
                        .ok_or_else(|| {
                            err(line_no, format!("{key} expects a bracketed [..;..] list"))
                        })?
                };
                let separator = if key == "G" { ',' } else { ';' };
                // Splitting cycle expressions on ',' would cut inside a
                // cycle, so G entries are split only at top level.
                let mut items: Vec<Permutation> = Vec::new();
                let mut depth = 0usize;
                let mut start = 0usize;
                let bytes = body.as_bytes();
                for (i, &c) in bytes.iter().enumerate() {
                    match c {
                        b'(' => depth += 1,
                        b')' => {
                            depth = depth
                                .checked_sub(1)
                                .ok_or_else(|| err(line_no, "unbalanced parentheses"))?
                        }
                        c if c == separator as u8 && depth == 0 => {
                            items.push(lookup(&named, &body[start..i], line_no)?);
                            start = i + 1;
                        }
                        _ => {}
                    }
                }
                if depth != 0 {
                    return Err(err(line_no, "unbalanced parentheses"));
                }
                if !body[start..].trim().is_empty() || items.is_empty() {
                    items.push(lookup(&named, &body[start..], line_no)?);
                }
                *slot = Some(items);
            }
            "expect.order" => {
                expect.order = Some(
                    value
                        .parse::<BigUint>()
                        .map_err(|_| err(line_no, format!("invalid integer {value:?}")))?,
                );
            }
            "expect.s" => {
                expect.core_rank = Some(
                    value
                        .parse::<u32>()
                        .map_err(|_| err(line_no, format!("invalid integer {value:?}")))?,
                );
            }
            "expect.U" => {
                let id = SimpleGroupId::parse(value).map_err(|e| err(line_no, e.to_string()))?;
                expect.image_label = Some(id.to_string());
            }
            "expect.gZ" => {
                expect.genus_z = Some(
                    value
                        .parse::<BigUint>()
                        .map_err(|_| err(line_no, format!("invalid integer {value:?}")))?,
                );
            }
            name => {
                if !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_')
                    || name.starts_with(|c: char| c.is_ascii_digit())
                {
                    return Err(err(line_no, format!("invalid key {name:?}")));
                }
                if named.iter().any(|(existing, _)| existing == name) {
                    return Err(err(line_no, format!("duplicate permutation name {name:?}")));
                }
                let perm =
                    parse_cycles(value, degree).map_err(|e| err(line_no, e.to_string()))?;
                named.push((name.to_string(), perm));
            }
        }
    }

    Ok(TowerFile {
        p,
        q,
        degree,
        named,
        g_gens: g_gens.ok_or_else(|| err(1, "missing key `G`"))?,
        h_gens: h_gens.ok_or_else(|| err(1, "missing key `H`"))?,
        n_gens: n_gens.ok_or_else(|| err(1, "missing key `N`"))?,
        expect,
    })
}

/// Canonical serialization; `parse(serialize(f))` reproduces the same
/// tower data.
pub fn serialize_tower_file(file: &TowerFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("p = {}\n", file.p));
    out.push_str(&format!("q = {}\n", file.q));
    out.push_str(&format!("degree = {}\n", file.degree));
    for (name, perm) in &file.named {
        out.push_str(&format!("{name} = {}\n", format_cycles(perm)));
    }
    let render = |perms: &[Permutation]| -> Vec<String> {
        perms
            .iter()
            .map(|perm| {
                file.named
                    .iter()
                    .find(|(_, known)| known == perm)
                    .map(|(name, _)| name.clone())
                    .unwrap_or_else(|| format_cycles(perm))
            })
            .collect()
    };
    out.push_str(&format!("G = {}\n", render(&file.g_gens).join(", ")));
    out.push_str(&format!("H = [{}]\n", render(&file.h_gens).join("; ")));
    out.push_str(&format!("N = [{}]\n", render(&file.n_gens).join("; ")));
    if let Some(order) = &file.expect.order {
        out.push_str(&format!("expect.order = {order}\n"));
    }
    if let Some(s) = file.expect.core_rank {
        out.push_str(&format!("expect.s = {s}\n"));
    }
    if let Some(u) = &file.expect.image_label {
        out.push_str(&format!("expect.U = {u}\n"));
    }
    if let Some(gz) = &file.expect.genus_z {
        out.push_str(&format!("expect.gZ = {gz}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample tower
p = 7
q = 2
degree = 14
a = (1,2,3,4,5,6,7)(8,9,10,11,12,13,14)
b = (1,2,3,11,12,6,14)(4,5,13,7,8,9,10)
h1 = (3,10)(5,12)(6,13)(7,14)
h2 = (1,8)(3,10)(4,11)(5,12)
h3 = (2,9)(3,10)(4,11)(7,14)
G = a, b
H = [h1; h2; h3]
N = [h1; h2]
expect.order = 56
expect.s = 3
expect.U = Z7
expect.gZ = 17
";

    #[test]
    fn parses_sample() {
        let f = parse_tower_file(SAMPLE).unwrap();
        assert_eq!((f.p, f.q, f.degree), (7, 2, 14));
        assert_eq!(f.g_gens.len(), 2);
        assert_eq!(f.h_gens.len(), 3);
        assert_eq!(f.n_gens.len(), 2);
        assert_eq!(f.expect.order, Some(BigUint::from(56u32)));
        assert_eq!(f.expect.core_rank, Some(3));
        assert_eq!(f.expect.image_label.as_deref(), Some("Z7"));
        assert_eq!(f.expect.genus_z, Some(BigUint::from(17u32)));
    }

    #[test]
    fn inline_cycles_in_lists() {
        let text = "\
p = 3
q = 2
degree = 6
G = (1,2,3)(4,5,6), (1,4)(2,5)(3,6)
H = [(1,4)(2,5)(3,6)]
N = [()]
";
        let f = parse_tower_file(text).unwrap();
        assert_eq!(f.g_gens.len(), 2);
        assert_eq!(f.h_gens.len(), 1);
        assert!(f.n_gens[0].is_identity());
    }

    #[test]
    fn round_trip() {
        let f = parse_tower_file(SAMPLE).unwrap();
        let text = serialize_tower_file(&f);
        let g = parse_tower_file(&text).unwrap();
        assert_eq!(f.g_gens, g.g_gens);
        assert_eq!(f.h_gens, g.h_gens);
        assert_eq!(f.n_gens, g.n_gens);
        assert_eq!(f.expect, g.expect);
        assert_eq!(text, serialize_tower_file(&g));
    }

    #[test]
    fn rejects_equal_primes() {
        let text = "p = 7\nq = 7\ndegree = 49\nG = ()\nH = [()]\nN = [()]\n";
        let e = parse_tower_file(text).unwrap_err();
        assert!(e.message.contains("different primes"), "{e}");
        assert_eq!(e.line, 2);
    }

    #[test]
    fn rejects_bad_degree_and_unknown_names() {
        let text = "p = 7\nq = 2\ndegree = 15\nG = ()\nH = [()]\nN = [()]\n";
        assert!(parse_tower_file(text).unwrap_err().message.contains("p*q"));

        let text = "p = 7\nq = 2\ndegree = 14\nG = nosuch\nH = [()]\nN = [()]\n";
        let e = parse_tower_file(text).unwrap_err();
        assert!(e.message.contains("undefined"), "{e}");
    }

    #[test]
    fn line_numbers_in_errors() {
        let text = "p = 7\nq = 2\ndegree = 14\nbad = (1,2,99)\nG = ()\nH = [()]\nN = [()]\n";
        let e = parse_tower_file(text).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("out of range"));
    }
}
