//! Subgroup intersection: enumerate-and-filter below the budget, chain-based
//! backtrack above it.

use num_bigint::BigUint;

use super::{BaseRule, Bsgs, GroupError, PermutationGroup, ENUMERATION_THRESHOLD};
use crate::perm::Permutation;

impl PermutationGroup {
    /// Intersection of two groups of the same degree.
    pub fn intersect(&self, other: &PermutationGroup) -> Result<PermutationGroup, GroupError> {
        self.intersect_with_budget(other, ENUMERATION_THRESHOLD)
    }

    /// Intersection with an explicit enumeration budget: if the smaller group
    /// fits the budget it is enumerated and filtered, otherwise a backtrack
    /// search over its chain is used.
    pub fn intersect_with_budget(
        &self,
        other: &PermutationGroup,
        budget: u64,
    ) -> Result<PermutationGroup, GroupError> {
        if self.degree() != other.degree() {
            return Err(GroupError::DegreeMismatch(self.degree(), other.degree()));
        }
        if self.is_trivial() || other.is_trivial() {
            return Ok(PermutationGroup::trivial(self.degree()));
        }
        if self.is_subgroup_of(other) {
            return Ok(self.clone());
        }
        if other.is_subgroup_of(self) {
            return Ok(other.clone());
        }
        let (small, big) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        if small.order() <= BigUint::from(budget) {
            let keep = small
                .elements_limited(budget)?
                .into_iter()
                .filter(|e| big.has(e));
            Ok(PermutationGroup::from_elements(self.degree(), keep))
        } else {
            Ok(intersect_backtrack(small, big))
        }
    }
}

/// Backtrack search for `a ∩ b` over `a`'s stabilizer chain.
///
/// `b`'s chain is rebuilt over `a`'s base so that, while extending a partial
/// element of `a` by base images, any prefix with no matching element of `b`
/// is pruned: a matching element must map `a`'s k-th base point into the
/// orbit of that point under the subgroup of `b` fixing the earlier choices.
fn intersect_backtrack(a: &PermutationGroup, b: &PermutationGroup) -> PermutationGroup {
    let degree = a.degree();
    let a_chain = a.chain();
    let a_base = a_chain.base_points();
    let b_aligned = Bsgs::build(degree, b.generators(), &BaseRule::Prescribed(a_base.clone()));

    struct Search<'s> {
        a_chain: &'s Bsgs,
        b_exact: &'s Bsgs,
        b_aligned: Bsgs,
        gens: Vec<Permutation>,
        chain: Bsgs,
        degree: usize,
    }

    impl Search<'_> {
        fn dfs(&mut self, level: usize, partial: &Permutation, matched: &Permutation) {
            if level == self.a_chain.levels.len() {
                if self.b_exact.contains(partial)
                    && !partial.is_identity()
                    && !self.chain.contains(partial)
                {
                    self.gens.push(partial.clone());
                    self.chain = Bsgs::build(self.degree, &self.gens, &BaseRule::SmallestMoved);
                }
                return;
            }
            let matched_inv = matched.inverse();
            let a_level = &self.a_chain.levels[level];
            let orbit = a_level.orbit.clone();
            for x in orbit {
                let u = a_level.rep(x).expect("orbit point").clone();
                let beta = partial.apply_point(x);
                let y = matched_inv.apply_point(beta);
                let Some(v) = self.b_aligned.levels[level].rep(y) else {
                    continue;
                };
                let next_partial = &u * partial;
                let next_matched = v * matched;
                self.dfs(level + 1, &next_partial, &next_matched);
            }
        }
    }

    let mut search = Search {
        a_chain,
        b_exact: b.chain(),
        b_aligned,
        gens: Vec::new(),
        chain: Bsgs::build(degree, &[], &BaseRule::SmallestMoved),
        degree,
    };
    let identity = Permutation::identity(degree);
    search.dfs(0, &identity, &identity);
    PermutationGroup {
        degree,
        generators: search.gens,
        chain: search.chain,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;
    use num_traits::One;

    fn grp(gens: &[&str], degree: usize) -> PermutationGroup {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|t| parse_cycles(t, degree).unwrap())
            .collect();
        PermutationGroup::generated(degree, gens).unwrap()
    }

    #[test]
    fn intersect_with_trivial() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let t = PermutationGroup::trivial(4);
        assert_eq!(s4.intersect(&t).unwrap().order(), BigUint::one());
    }

    #[test]
    fn intersect_with_self() {
        let a4 = grp(&["(1,2,3)", "(2,3,4)"], 4);
        let i = a4.intersect(&a4).unwrap();
        assert_eq!(i.order(), a4.order());
    }

    #[test]
    fn intersect_s3_with_a4() {
        let s3 = grp(&["(1,2)", "(1,2,3)"], 4);
        let a4 = grp(&["(1,2,3)", "(2,3,4)"], 4);
        let i = s3.intersect(&a4).unwrap();
        assert_eq!(i.order(), BigUint::from(3u32));
        assert!(i.has(&parse_cycles("(1,2,3)", 4).unwrap()));
    }

    #[test]
    fn backtrack_agrees_with_enumeration() {
        // Neither side contains the other in any of these, so the subset
        // fast paths cannot short-circuit the search.
        let cases: Vec<(PermutationGroup, PermutationGroup)> = vec![
            (
                grp(&["(1,2)", "(1,2,3)"], 6),
                grp(&["(1,2,3)", "(2,3,4)"], 6),
            ),
            (
                grp(&["(1,2,3,4,5,6)", "(1,6)(2,5)(3,4)"], 6),
                grp(&["(1,2,3)", "(2,3,4)"], 6),
            ),
            (
                grp(&["(1,2,3)", "(4,5,6)", "(1,4)(2,5)(3,6)"], 6),
                grp(&["(1,2,3,4,5,6)"], 6),
            ),
            (
                grp(&["(1,2,3,4,5)", "(3,4,5)"], 6),
                grp(&["(1,2)(3,4)", "(1,3,5)(2,4,6)"], 6),
            ),
        ];
        for (a, b) in cases {
            assert!(!a.is_subgroup_of(&b) && !b.is_subgroup_of(&a));
            let by_enum = a.intersect_with_budget(&b, ENUMERATION_THRESHOLD).unwrap();
            // Budget 1 forces the backtrack path.
            let by_backtrack = a.intersect_with_budget(&b, 1).unwrap();
            assert_eq!(by_enum.order(), by_backtrack.order());
            assert!(by_enum.equals(&by_backtrack));
        }
    }
}
