//! Normal closures, derived subgroups, conjugacy classes and simplicity.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;

use super::{GroupError, PermutationGroup, Subgroup, ENUMERATION_THRESHOLD, SIMPLICITY_THRESHOLD};
use crate::perm::{Permutation, Point};

impl PermutationGroup {
    /// Smallest normal subgroup of `self` containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> Result<Subgroup, GroupError> {
        for s in seeds {
            if s.degree() != self.degree() {
                return Err(GroupError::DegreeMismatch(self.degree(), s.degree()));
            }
            if !self.has(s) {
                return Err(GroupError::NotASubgroup);
            }
        }
        let mut gens: Vec<Permutation> = Vec::new();
        let mut closure = PermutationGroup::trivial(self.degree());
        for s in seeds {
            if !s.is_identity() && !closure.has(s) {
                gens.push(s.clone());
                closure = PermutationGroup::generated(self.degree(), gens.clone())?;
            }
        }
        // Conjugate the closure's generators by the group's generators until
        // nothing new appears.
        loop {
            let mut grew = false;
            let snapshot = gens.clone();
            for c in &snapshot {
                for g in self.generators() {
                    let t = c.conjugate(g)?;
                    if !closure.has(&t) {
                        gens.push(t);
                        closure = PermutationGroup::generated(self.degree(), gens.clone())?;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        Subgroup::new(self, closure)
    }

    /// Derived subgroup: the normal closure of the commutators of all
    /// generator pairs.
    pub fn derived_subgroup(&self) -> Result<Subgroup, GroupError> {
        let mut commutators = Vec::new();
        for (i, a) in self.generators().iter().enumerate() {
            for b in self.generators().iter().skip(i + 1) {
                // [a, b] = a^-1 b^-1 a b
                let c = &(&(&a.inverse() * &b.inverse()) * a) * b;
                if !c.is_identity() {
                    commutators.push(c);
                }
            }
        }
        self.normal_closure(&commutators)
    }

    /// One representative per conjugacy class, in deterministic element
    /// order. Requires enumerating the group.
    pub fn conjugacy_class_reps(&self) -> Result<Vec<Permutation>, GroupError> {
        let elems = self.elements_limited(SIMPLICITY_THRESHOLD.min(ENUMERATION_THRESHOLD))?;
        let mut visited: HashSet<Vec<Point>> = HashSet::with_capacity(elems.len());
        let mut reps = Vec::new();
        for e in &elems {
            if visited.contains(e.image_slice()) {
                continue;
            }
            reps.push(e.clone());
            // Conjugation orbit of e under the generators.
            let mut queue = vec![e.clone()];
            visited.insert(e.image_slice().to_vec());
            while let Some(x) = queue.pop() {
                for g in self.generators() {
                    let y = x.conjugate(g)?;
                    if visited.insert(y.image_slice().to_vec()) {
                        queue.push(y);
                    }
                }
            }
        }
        Ok(reps)
    }

    /// True iff the group is nontrivial and has no proper nontrivial normal
    /// subgroup, decided by checking that the normal closure of every
    /// non-identity conjugacy class representative is the whole group.
    pub fn is_simple(&self) -> Result<bool, GroupError> {
        let order = self.order();
        if order > BigUint::from(SIMPLICITY_THRESHOLD) {
            return Err(GroupError::EnumerationBudget {
                order,
                limit: SIMPLICITY_THRESHOLD,
            });
        }
        if order == BigUint::one() {
            return Ok(false);
        }
        if let Some(o) = self.order_u64() {
            if crate::arith::is_prime(o) {
                return Ok(true);
            }
            // A noncyclic abelian group always has proper subgroups, and
            // every subgroup is normal.
            if self.is_abelian() {
                return Ok(false);
            }
        }
        for rep in self.conjugacy_class_reps()? {
            if rep.is_identity() {
                continue;
            }
            if self.normal_closure(std::slice::from_ref(&rep))?.order() != order {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    fn grp(gens: &[&str], degree: usize) -> PermutationGroup {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|t| parse_cycles(t, degree).unwrap())
            .collect();
        PermutationGroup::generated(degree, gens).unwrap()
    }

    #[test]
    fn derived_subgroup_of_abelian_is_trivial() {
        let z3 = grp(&["(1,2,3)"], 3);
        assert_eq!(z3.derived_subgroup().unwrap().order(), BigUint::one());
    }

    #[test]
    fn derived_subgroup_of_s4_is_a4() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let derived = s4.derived_subgroup().unwrap();
        assert_eq!(derived.order(), BigUint::from(12u32));
        let a4 = grp(&["(1,2,3)", "(2,3,4)"], 4);
        assert!(derived.equals(&a4));
    }

    #[test]
    fn normal_closure_of_double_transposition_in_s4() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let v = parse_cycles("(1,2)(3,4)", 4).unwrap();
        let closure = s4.normal_closure(&[v]).unwrap();
        assert_eq!(closure.order(), BigUint::from(4u32));
        assert!(s4.is_normal(closure.group()).unwrap());
    }

    #[test]
    fn conjugacy_classes_of_s3() {
        let s3 = grp(&["(1,2)", "(1,2,3)"], 3);
        let reps = s3.conjugacy_class_reps().unwrap();
        assert_eq!(reps.len(), 3);
    }

    #[test]
    fn a5_is_simple() {
        let a5 = grp(&["(1,2,3,4,5)", "(3,4,5)"], 5);
        assert_eq!(a5.order(), BigUint::from(60u32));
        assert!(a5.is_simple().unwrap());
    }

    #[test]
    fn elementary_abelian_is_not_simple() {
        let z2_cubed = grp(&["(1,2)", "(3,4)", "(5,6)"], 6);
        assert_eq!(z2_cubed.order(), BigUint::from(8u32));
        assert!(!z2_cubed.is_simple().unwrap());
    }

    #[test]
    fn prime_cyclic_is_simple_and_trivial_is_not() {
        assert!(grp(&["(1,2,3)"], 3).is_simple().unwrap());
        assert!(!PermutationGroup::trivial(3).is_simple().unwrap());
        assert!(!grp(&["(1,2,3,4,5,6)"], 6).is_simple().unwrap());
    }
}
