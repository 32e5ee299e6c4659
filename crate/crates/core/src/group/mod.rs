//! Finite permutation groups given by generators.
//!
//! A [`PermutationGroup`] owns a deterministic base-and-strong-generating-set
//! chain built at construction time, which makes order, membership and
//! stabilizer queries cheap thereafter. Groups are immutable once built and
//! safe to share across threads.

mod bsgs;
mod classes;
mod cosets;
mod intersect;

use std::collections::BTreeSet;
use std::ops::Deref;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::perm::{PermError, Permutation, Point};
pub(crate) use bsgs::{BaseRule, Bsgs};
pub use cosets::CosetAction;

/// Element-enumeration budget for fallback algorithms (intersection, block
/// stabilizers, conjugacy classes).
pub const ENUMERATION_THRESHOLD: u64 = 1_000_000;

/// Largest coset index materialized by [`CosetAction`].
pub const INDEX_THRESHOLD: u64 = 1_000_000;

/// Largest order accepted by [`PermutationGroup::is_simple`].
pub const SIMPLICITY_THRESHOLD: u64 = 100_000_000;

#[derive(Error, Debug, PartialEq, Eq)]
pub enum GroupError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("element or generator is not contained in the claimed parent group")]
    NotASubgroup,
    #[error("block is empty")]
    EmptyBlock,
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group order {order} exceeds the enumeration budget {limit}")]
    EnumerationBudget { order: BigUint, limit: u64 },
    #[error("coset index {index} exceeds the supported limit {limit}")]
    IndexTooLarge { index: BigUint, limit: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A permutation group of fixed degree with an eagerly built chain.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: Bsgs,
}

impl PermutationGroup {
    /// The trivial group; the degree must be stated explicitly so that
    /// containment checks keep a well-defined ambient symmetric group.
    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            chain: Bsgs::build(degree, &[], &BaseRule::SmallestMoved),
        }
    }

    /// Builds `<gens>` with a deterministic Schreier–Sims chain.
    /// Identity generators are dropped; an empty list yields the trivial
    /// group of the stated degree.
    pub fn generated(degree: usize, gens: Vec<Permutation>) -> Result<Self, GroupError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch(degree, g.degree()));
            }
        }
        let generators: Vec<Permutation> =
            gens.into_iter().filter(|g| !g.is_identity()).collect();
        let chain = Bsgs::build(degree, &generators, &BaseRule::SmallestMoved);
        Ok(PermutationGroup {
            degree,
            generators,
            chain,
        })
    }

    /// Rebuilds a group from an element list, keeping only the elements that
    /// enlarge the chain as generators.
    pub fn from_elements<I>(degree: usize, elems: I) -> Self
    where
        I: IntoIterator<Item = Permutation>,
    {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut chain = Bsgs::build(degree, &[], &BaseRule::SmallestMoved);
        for e in elems {
            if !e.is_identity() && !chain.contains(&e) {
                gens.push(e);
                chain = Bsgs::build(degree, &gens, &BaseRule::SmallestMoved);
            }
        }
        PermutationGroup {
            degree,
            generators: gens,
            chain,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub(crate) fn chain(&self) -> &Bsgs {
        &self.chain
    }

    /// Exact group order (the product of the chain's orbit sizes).
    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Membership test; errors on degree mismatch.
    pub fn contains(&self, g: &Permutation) -> Result<bool, GroupError> {
        if g.degree() != self.degree {
            return Err(GroupError::DegreeMismatch(self.degree, g.degree()));
        }
        Ok(self.chain.contains(g))
    }

    /// Membership for elements known to share the group's degree.
    #[inline]
    pub(crate) fn has(&self, g: &Permutation) -> bool {
        debug_assert_eq!(g.degree(), self.degree);
        self.chain.contains(g)
    }

    /// Lists all elements in deterministic chain order; errors when the
    /// order exceeds [`ENUMERATION_THRESHOLD`].
    pub fn elements(&self) -> Result<Vec<Permutation>, GroupError> {
        self.elements_limited(ENUMERATION_THRESHOLD)
    }

    pub(crate) fn elements_limited(&self, limit: u64) -> Result<Vec<Permutation>, GroupError> {
        let order = self.order();
        if order > BigUint::from(limit) {
            return Err(GroupError::EnumerationBudget { order, limit });
        }
        Ok(self.chain.elements())
    }

    /// Orbit of one point under the right action of the generators.
    pub fn orbit_of(&self, point: usize) -> Result<Vec<usize>, GroupError> {
        if point >= self.degree {
            return Err(GroupError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let mut orbit = vec![point];
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            head += 1;
        }
        orbit.sort_unstable();
        Ok(orbit)
    }

    /// The orbit partition of `{0..degree-1}`, sorted by smallest element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut parts = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let orbit = self.orbit_of(start).expect("point in range");
            for &x in &orbit {
                seen[x] = true;
            }
            parts.push(orbit);
        }
        parts
    }

    pub fn is_transitive(&self) -> bool {
        self.degree > 0 && self.orbits().len() == 1
    }

    /// Pointwise stabilizer of `point`, read off a chain based at it.
    pub fn stabilizer(&self, point: usize) -> Result<Subgroup, GroupError> {
        if point >= self.degree {
            return Err(GroupError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let group = self.pointwise_stabilizer(&[point]);
        Subgroup::attach(self, group)
    }

    /// Pointwise stabilizer of a set of points.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermutationGroup {
        let base: Vec<Point> = points.iter().map(|&p| p as Point).collect();
        let aligned = Bsgs::build(self.degree, &self.generators, &BaseRule::Prescribed(base));
        let gens = aligned.gens_below(points.len());
        PermutationGroup::generated(self.degree, gens).expect("degrees agree")
    }

    /// Setwise stabilizer of a block of points, by enumeration and filtering
    /// under [`ENUMERATION_THRESHOLD`].
    pub fn block_stabilizer(&self, block: &[usize]) -> Result<Subgroup, GroupError> {
        if block.is_empty() {
            return Err(GroupError::EmptyBlock);
        }
        let mut set = BTreeSet::new();
        for &p in block {
            if p >= self.degree {
                return Err(GroupError::PointOutOfRange {
                    point: p,
                    degree: self.degree,
                });
            }
            set.insert(p);
        }
        let elems = self.elements()?;
        let keep = elems
            .into_iter()
            .filter(|g| set.iter().all(|&x| set.contains(&g.apply(x))));
        let group = PermutationGroup::from_elements(self.degree, keep);
        Subgroup::attach(self, group)
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if &(a * b) != &(b * a) {
                    return false;
                }
            }
        }
        true
    }

    /// If the group is elementary abelian of exponent `q`, returns its rank
    /// `s` (so the order is `q^s`, with `s = 0` for the trivial group).
    pub fn is_elementary_abelian(&self, q: u64) -> Result<Option<u32>, GroupError> {
        if !crate::arith::is_prime(q) {
            return Err(GroupError::NotPrime(q));
        }
        if self.is_trivial() {
            return Ok(Some(0));
        }
        if !self.is_abelian() {
            return Ok(None);
        }
        for g in &self.generators {
            if g.order() != q as u128 {
                return Ok(None);
            }
        }
        // Abelian and generated by order-q elements, so the order is q^s.
        let mut order = self.order();
        let big_q = BigUint::from(q);
        let mut s = 0u32;
        while order > BigUint::one() {
            debug_assert!((&order % &big_q) == BigUint::ZERO);
            order /= &big_q;
            s += 1;
        }
        Ok(Some(s))
    }

    /// Whether `h` is a normal subgroup of this group.
    pub fn is_normal(&self, h: &PermutationGroup) -> Result<bool, GroupError> {
        if h.degree() != self.degree {
            return Err(GroupError::DegreeMismatch(self.degree, h.degree()));
        }
        if !h.is_subgroup_of(self) {
            return Err(GroupError::NotASubgroup);
        }
        for hg in h.generators() {
            for g in &self.generators {
                let conj = hg.conjugate(g)?;
                if !h.has(&conj) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// True when every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.has(g))
    }

    /// Group equality as subgroups of the common symmetric group.
    pub fn equals(&self, other: &PermutationGroup) -> bool {
        self.is_subgroup_of(other) && self.order() == other.order()
    }

    pub(crate) fn base_points(&self) -> Vec<Point> {
        self.chain.base_points()
    }
}

/// A group together with its ambient parent; construction verifies that
/// every generator lies in the parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<PermutationGroup>,
    group: PermutationGroup,
}

impl Subgroup {
    pub fn new(parent: &PermutationGroup, group: PermutationGroup) -> Result<Self, GroupError> {
        Self::attach(parent, group)
    }

    fn attach(parent: &PermutationGroup, group: PermutationGroup) -> Result<Self, GroupError> {
        if group.degree() != parent.degree() {
            return Err(GroupError::DegreeMismatch(parent.degree(), group.degree()));
        }
        if !group.is_subgroup_of(parent) {
            return Err(GroupError::NotASubgroup);
        }
        Ok(Subgroup {
            parent: Arc::new(parent.clone()),
            group,
        })
    }

    pub fn parent(&self) -> &PermutationGroup {
        &self.parent
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    pub fn into_group(self) -> PermutationGroup {
        self.group
    }

    /// `|parent : self|` as an exact integer.
    pub fn index(&self) -> BigUint {
        self.parent.order() / self.group.order()
    }
}

impl Deref for Subgroup {
    type Target = PermutationGroup;

    fn deref(&self) -> &PermutationGroup {
        &self.group
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    pub(crate) fn grp(gens: &[&str], degree: usize) -> PermutationGroup {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|t| parse_cycles(t, degree).unwrap())
            .collect();
        PermutationGroup::generated(degree, gens).unwrap()
    }

    #[test]
    fn trivial_group_needs_explicit_degree() {
        let t = PermutationGroup::trivial(14);
        assert_eq!(t.degree(), 14);
        assert_eq!(t.order(), BigUint::one());
        assert!(t.contains(&Permutation::identity(14)).unwrap());
        assert!(matches!(
            t.contains(&Permutation::identity(5)),
            Err(GroupError::DegreeMismatch(14, 5))
        ));
    }

    #[test]
    fn generated_checks_degrees() {
        let a = parse_cycles("(1,2)", 3).unwrap();
        let b = parse_cycles("(1,2)", 4).unwrap();
        assert!(matches!(
            PermutationGroup::generated(3, vec![a, b]),
            Err(GroupError::DegreeMismatch(3, 4))
        ));
    }

    #[test]
    fn orbits_of_seven_cycles() {
        let g = grp(&["(1,2,3,4,5,6,7)(8,9,10,11,12,13,14)"], 14);
        let orbits = g.orbits();
        assert_eq!(orbits.len(), 2);
        assert_eq!(orbits[0], (0..7).collect::<Vec<_>>());
        assert_eq!(orbits[1], (7..14).collect::<Vec<_>>());
        assert!(!g.is_transitive());
    }

    #[test]
    fn orbits_of_trivial_group() {
        let t = PermutationGroup::trivial(3);
        assert_eq!(t.orbits(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn point_stabilizer_in_s3() {
        let s3 = grp(&["(1,2)", "(1,2,3)"], 3);
        let stab = s3.stabilizer(2).unwrap();
        assert_eq!(stab.order(), BigUint::from(2u32));
        assert_eq!(stab.index(), BigUint::from(3u32));
        for g in stab.generators() {
            assert_eq!(g.apply(2), 2);
        }
    }

    #[test]
    fn orbit_stabilizer_identity() {
        let g = grp(&["(1,2,3,4,5,6,7)(8,9,10,11,12,13,14)", "(1,8)(2,9)"], 14);
        for point in [0usize, 5, 9] {
            let stab = g.stabilizer(point).unwrap();
            let orbit = g.orbit_of(point).unwrap();
            assert_eq!(
                stab.order() * BigUint::from(orbit.len()),
                g.order(),
                "orbit-stabilizer at {point}"
            );
        }
    }

    #[test]
    fn block_stabilizer_rejects_empty() {
        let s3 = grp(&["(1,2)", "(1,2,3)"], 3);
        assert!(matches!(
            s3.block_stabilizer(&[]),
            Err(GroupError::EmptyBlock)
        ));
    }

    #[test]
    fn elementary_abelian_detection() {
        let t = PermutationGroup::trivial(4);
        assert_eq!(t.is_elementary_abelian(2).unwrap(), Some(0));

        let klein = grp(&["(1,2)(3,4)", "(1,3)(2,4)"], 4);
        assert_eq!(klein.is_elementary_abelian(2).unwrap(), Some(2));

        let z3 = grp(&["(1,2,3)"], 3);
        assert_eq!(z3.is_elementary_abelian(2).unwrap(), None);
        assert_eq!(z3.is_elementary_abelian(3).unwrap(), Some(1));

        assert!(matches!(
            z3.is_elementary_abelian(4),
            Err(GroupError::NotPrime(4))
        ));
    }

    #[test]
    fn normality() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let a4 = grp(&["(1,2,3)", "(2,3,4)"], 4);
        let s3_in_s4 = grp(&["(1,2)", "(1,2,3)"], 4);
        assert!(s4.is_normal(&a4).unwrap());
        assert!(!s4.is_normal(&s3_in_s4).unwrap());
        let z5 = grp(&["(1,2,3,4,5)"], 5);
        assert!(matches!(s4.is_normal(&z5), Err(GroupError::DegreeMismatch(..))));
    }
}
