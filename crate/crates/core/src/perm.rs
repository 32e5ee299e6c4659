//! Permutations of `{1..n}`, stored as dense image maps.
//!
//! Points are 0-based in code; cycle notation (parsing, formatting,
//! `Display`) is 1-based. The composition convention is the right action
//! throughout: `(x)(p * q) = ((x)p)q`, i.e. `p` is applied first.

use std::fmt;
use std::ops::Mul;

use thiserror::Error;

/// Internal point type; degrees in scope stay well below `u16::MAX`.
pub(crate) type Point = u16;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images are not a bijection of {{1..{degree}}}")]
    NotBijective { degree: usize },
    #[error("cycle notation syntax error at byte {at}: {reason}")]
    Syntax { at: usize, reason: String },
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {point} repeated in cycle expression")]
    RepeatedPoint { point: usize },
    #[error("degree {0} exceeds the supported maximum {max}", max = Point::MAX)]
    DegreeTooLarge(usize),
}

/// A bijection of `{0..degree-1}`; `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Point>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as Point).collect(),
        }
    }

    /// Builds a permutation from a 0-based image map, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let degree = images.len();
        if degree > Point::MAX as usize {
            return Err(PermError::DegreeTooLarge(degree));
        }
        let mut seen = vec![false; degree];
        for &v in &images {
            if v >= degree || seen[v] {
                return Err(PermError::NotBijective { degree });
            }
            seen[v] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|v| v as Point).collect(),
        })
    }

    pub(crate) fn from_points_unchecked(images: Vec<Point>) -> Self {
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    #[inline]
    pub(crate) fn apply_point(&self, x: Point) -> Point {
        self.images[x as usize]
    }

    pub(crate) fn image_slice(&self) -> &[Point] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Checked composition under the right action (`self` applied first).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self * other)
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0 as Point; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as Point;
        }
        Permutation { images }
    }

    /// `g^-1 * self * g`, the conjugate of `self` by `g`.
    pub fn conjugate(&self, g: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != g.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), g.degree()));
        }
        // (x)(g^-1 p g) for all x, without materializing g^-1.
        let mut images = vec![0 as Point; self.images.len()];
        for x in 0..self.images.len() {
            images[g.images[x] as usize] = g.images[self.images[x] as usize];
        }
        Ok(Permutation { images })
    }

    /// `self` raised to the `k`-th power; negative exponents use the inverse.
    pub fn power(&self, k: i64) -> Permutation {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order: the lcm of the cycle lengths.
    pub fn order(&self) -> u128 {
        let mut ord: u128 = 1;
        for (len, _) in self.cycle_type().pairs() {
            ord = num_integer::lcm(ord, *len as u128);
        }
        ord
    }

    /// Nontrivial cycles (0-based points), each starting at its smallest
    /// point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut counts: Vec<usize> = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 1;
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                len += 1;
                x = self.apply(x);
            }
            if counts.len() < len + 1 {
                counts.resize(len + 1, 0);
            }
            counts[len] += 1;
        }
        CycleType(
            counts
                .into_iter()
                .enumerate()
                .filter(|&(_, m)| m > 0)
                .collect(),
        )
    }

    /// True when the permutation is a product of an even number of
    /// transpositions, i.e. `sum (len - 1)` over cycles is even.
    pub fn is_even(&self) -> bool {
        self.cycle_type()
            .pairs()
            .iter()
            .map(|&(len, mult)| (len - 1) * mult)
            .sum::<usize>()
            % 2
            == 0
    }

    /// Smallest point moved by the permutation, if any.
    pub fn smallest_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &v)| i != v as usize)
            .map(|(i, _)| i)
    }

    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i != v as usize)
            .map(|(i, _)| i)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Right-action product; panics on degree mismatch (use
    /// [`Permutation::compose`] for a checked version).
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        let images = self
            .images
            .iter()
            .map(|&v| rhs.images[v as usize])
            .collect();
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_cycles(self))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", format_cycles(self))
    }
}

/// Multiset of cycle lengths as `(length, multiplicity)` pairs, fixed points
/// included as length-1 cycles; pairs are sorted by length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycleType(Vec<(usize, usize)>);

impl CycleType {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&(len, mult)| len * mult).sum()
    }

    /// True when the type is exactly `count` disjoint cycles of length `len`
    /// covering every point.
    pub fn is_uniform(&self, len: usize, count: usize) -> bool {
        self.0 == [(len, count)]
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(len, mult)| format!("{len}^{mult}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Parses 1-based disjoint-cycle notation.
///
/// Grammar: `perm := cycle+ | "()"` with `cycle := "(" int ("," int)+ ")"`;
/// whitespace is ignored and omitted points are fixed.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
    if degree > Point::MAX as usize {
        return Err(PermError::DegreeTooLarge(degree));
    }
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    let mut images: Vec<Point> = (0..degree as Point).collect();
    let mut used = vec![false; degree];
    let mut cycles_read = 0;

    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(PermError::Syntax {
            at: pos,
            reason: "empty permutation expression".into(),
        });
    }
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err(PermError::Syntax {
                at: pos,
                reason: format!("expected '(', found {:?}", bytes[pos] as char),
            });
        }
        pos += 1;
        skip_ws(&mut pos);
        // "()" denotes the identity and must stand alone.
        if pos < bytes.len() && bytes[pos] == b')' {
            pos += 1;
            skip_ws(&mut pos);
            if cycles_read > 0 || pos != bytes.len() {
                return Err(PermError::Syntax {
                    at: pos,
                    reason: "\"()\" is only valid as the whole expression".into(),
                });
            }
            return Ok(Permutation { images });
        }
        let mut cycle: Vec<usize> = Vec::new();
        loop {
            skip_ws(&mut pos);
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == start {
                return Err(PermError::Syntax {
                    at: pos,
                    reason: "expected a point".into(),
                });
            }
            let point: usize = text[start..pos].parse().map_err(|_| PermError::Syntax {
                at: start,
                reason: "integer too large".into(),
            })?;
            if point == 0 || point > degree {
                return Err(PermError::PointOutOfRange { point, degree });
            }
            if used[point - 1] {
                return Err(PermError::RepeatedPoint { point });
            }
            used[point - 1] = true;
            cycle.push(point - 1);
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b',') => {
                    pos += 1;
                }
                Some(b')') => {
                    pos += 1;
                    break;
                }
                _ => {
                    return Err(PermError::Syntax {
                        at: pos,
                        reason: "expected ',' or ')'".into(),
                    })
                }
            }
        }
        if cycle.len() < 2 {
            return Err(PermError::Syntax {
                at: pos,
                reason: "a cycle needs at least two points".into(),
            });
        }
        for w in 0..cycle.len() {
            images[cycle[w]] = cycle[(w + 1) % cycle.len()] as Point;
        }
        cycles_read += 1;
        skip_ws(&mut pos);
    }
    Ok(Permutation { images })
}

/// Formats 1-based disjoint-cycle notation; inverse of [`parse_cycles`].
pub fn format_cycles(p: &Permutation) -> String {
    let cycles = p.cycles();
    if cycles.is_empty() {
        return "()".to_string();
    }
    let mut out = String::new();
    for cycle in cycles {
        out.push('(');
        for (i, x) in cycle.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&(x + 1).to_string());
        }
        out.push(')');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, degree: usize) -> Permutation {
        parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn parse_section_six_generator() {
        let a = p("(1,2,3,4,5,6,7)(8,9,10,11,12,13,14)", 14);
        assert_eq!(a.apply(0), 1);
        assert_eq!(a.apply(6), 0);
        assert_eq!(a.apply(13), 7);
        assert_eq!(a.order(), 7);
        assert!(a.cycle_type().is_uniform(7, 2));
    }

    #[test]
    fn parse_identity_and_involution() {
        let id = p("()", 5);
        assert!(id.is_identity());
        assert_eq!(id.degree(), 5);

        let h1 = p("(3,10)(5,12)(6,13)(7,14)", 14);
        assert_eq!(h1.order(), 2);
        assert_eq!(h1.apply(2), 9);
        assert_eq!(h1.apply(9), 2);
        assert_eq!(h1.apply(0), 0);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_cycles("(1,2", 5),
            Err(PermError::Syntax { .. })
        ));
        assert!(matches!(
            parse_cycles("(1,6)", 5),
            Err(PermError::PointOutOfRange { point: 6, .. })
        ));
        assert!(matches!(
            parse_cycles("(1,2)(2,3)", 5),
            Err(PermError::RepeatedPoint { point: 2 })
        ));
        assert!(matches!(
            parse_cycles("(3)", 5),
            Err(PermError::Syntax { .. })
        ));
        assert!(matches!(
            parse_cycles("(1,2)()", 5),
            Err(PermError::Syntax { .. })
        ));
        assert!(matches!(
            parse_cycles("", 5),
            Err(PermError::Syntax { .. })
        ));
    }

    /// Pins the composition convention: under the right action,
    /// (1,2) * (2,3) sends 1 -> 2 -> 3, so the product is (1,3,2).
    /// The exhaustive check below rules out the left-action reading.
    #[test]
    fn right_action_convention_on_s3() {
        let t12 = p("(1,2)", 3);
        let t23 = p("(2,3)", 3);
        let product = &t12 * &t23;
        assert_eq!(format_cycles(&product), "(1,3,2)");

        // Left action would give (x)(pq) = (x q) p, i.e. (1,2,3) here.
        let left = |a: &Permutation, b: &Permutation| b * a;
        assert_eq!(format_cycles(&left(&t12, &t23)), "(1,2,3)");
        assert_ne!(product, left(&t12, &t23));

        // Exhaustive: the right action applies factors left to right
        // on every point of every pair in S3.
        let s3: Vec<Permutation> = ["()", "(1,2)", "(1,3)", "(2,3)", "(1,2,3)", "(1,3,2)"]
            .iter()
            .map(|t| p(t, 3))
            .collect();
        for x in &s3 {
            for y in &s3 {
                let prod = x * y;
                for point in 0..3 {
                    assert_eq!(prod.apply(point), y.apply(x.apply(point)));
                }
            }
        }
    }

    #[test]
    fn compose_identity_is_neutral() {
        let a = p("(1,2,3,4,5,6,7)(8,9,10,11,12,13,14)", 14);
        let id = Permutation::identity(14);
        assert_eq!(&id * &a, a);
        assert_eq!(&a * &id, a);
    }

    #[test]
    fn compose_checks_degree() {
        let a = p("(1,2)", 3);
        let b = p("(1,2)", 4);
        assert_eq!(a.compose(&b), Err(PermError::DegreeMismatch(3, 4)));
        assert_eq!(a.conjugate(&b), Err(PermError::DegreeMismatch(3, 4)));
    }

    #[test]
    fn inverse_is_two_sided() {
        let a = p("(1,5,2)(3,8)(4,9,10,6)", 10);
        assert!((&a * &a.inverse()).is_identity());
        assert!((&a.inverse() * &a).is_identity());
    }

    #[test]
    fn order_by_iteration_matches_lcm() {
        let cases = ["(1,2)(3,4,5)", "(1,2,3,4,5,6)", "(1,2)(3,4)", "(1,2,3)(4,5,6,7,8)"];
        for text in cases {
            let g = p(text, 8);
            assert_eq!(g.order() as usize, order_by_iteration(&g));
        }
        assert_eq!(p("(1,2)(3,4,5)", 5).order(), 6);
    }

    fn order_by_iteration(g: &Permutation) -> usize {
        let mut acc = g.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = &acc * g;
            k += 1;
        }
        k
    }

    #[test]
    fn conjugate_by_identity() {
        let a = p("(1,2,3)(4,5)", 6);
        assert_eq!(a.conjugate(&Permutation::identity(6)).unwrap(), a);
    }

    #[test]
    fn conjugation_preserves_cycle_type() {
        let a = p("(1,2,3)(4,5)", 7);
        let g = p("(1,7,4,2)(3,6)", 7);
        let c = a.conjugate(&g).unwrap();
        assert_eq!(c.cycle_type(), a.cycle_type());
        assert_eq!(c, &(&g.inverse() * &a) * &g);
    }

    #[test]
    fn cycle_type_includes_fixed_points() {
        let a = p("(1,2,3,4,5,6,7)(8,9,10,11,12,13,14)", 14);
        assert_eq!(a.cycle_type().pairs(), &[(7, 2)]);
        let b = p("(1,2)", 5);
        assert_eq!(b.cycle_type().pairs(), &[(1, 3), (2, 1)]);
        assert_eq!(b.cycle_type().degree(), 5);
    }

    #[test]
    fn evenness() {
        assert!(Permutation::identity(4).is_even());
        assert!(!p("(1,2)", 4).is_even());
        // q disjoint p-cycles with p odd are always even.
        for (pp, q) in [(3usize, 2usize), (5, 2), (7, 3)] {
            let mut text = String::new();
            for j in 0..q {
                text.push('(');
                let pts: Vec<String> = (1..=pp).map(|i| (j * pp + i).to_string()).collect();
                text.push_str(&pts.join(","));
                text.push(')');
            }
            assert!(p(&text, pp * q).is_even(), "{text}");
        }
    }

    #[test]
    fn format_round_trip() {
        for text in ["()", "(1,2)", "(1,14)(2,9,4)", "(2,3,5)(4,7,6)"] {
            let g = p(text, 14);
            assert_eq!(parse_cycles(&format_cycles(&g), 14).unwrap(), g);
        }
    }

    #[test]
    fn power_matches_repeated_product() {
        let a = p("(1,2,3,4,5)(6,7)", 7);
        let mut acc = Permutation::identity(7);
        for k in 0..=10i64 {
            assert_eq!(a.power(k), acc);
            acc = &acc * &a;
        }
        assert_eq!(a.power(-3), a.power(3).inverse());
    }
}
