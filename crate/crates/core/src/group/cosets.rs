//! Right cosets: canonical representatives, deterministic coset enumeration,
//! the induced action on cosets, and cores of subgroups.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{Bsgs, GroupError, PermutationGroup, Subgroup, INDEX_THRESHOLD};
use crate::perm::{Permutation, Point};

/// Canonical representative of the right coset `H * g`: level by level along
/// `H`'s chain, replace `g` by `u * g` for the transversal element `u`
/// minimizing the image of the level's base point. Elements of the same
/// coset map to the same representative.
fn coset_canonical(h_chain: &Bsgs, g: &Permutation) -> Permutation {
    let mut rep = g.clone();
    for level in &h_chain.levels {
        let mut best: Option<(Point, Point)> = None;
        for &x in &level.orbit {
            let img = rep.apply_point(x);
            if best.map_or(true, |(_, b)| img < b) {
                best = Some((x, img));
            }
        }
        let (x, _) = best.expect("orbit is never empty");
        if x != level.base {
            rep = level.rep(x).expect("orbit point has a representative") * &rep;
        }
    }
    rep
}

/// The action of a group on the right cosets of a subgroup, with the coset
/// order fixed by a breadth-first enumeration from `H * 1` over the
/// generators in the order given.
pub struct CosetAction {
    parent: PermutationGroup,
    sub_chain: Bsgs,
    reps: Vec<Permutation>,
    key_to_index: HashMap<Vec<Point>, u32>,
    gen_images: Vec<Permutation>,
    image: PermutationGroup,
}

impl CosetAction {
    /// Enumerates the right cosets of `h` in `g` and the induced action of
    /// each generator of `g`; errors when the index exceeds
    /// [`INDEX_THRESHOLD`] or `h` is not a subgroup of `g`.
    pub fn new(g: &PermutationGroup, h: &PermutationGroup) -> Result<Self, GroupError> {
        if !h.is_subgroup_of(g) {
            return Err(GroupError::NotASubgroup);
        }
        let index = g.order() / h.order();
        if index > BigUint::from(INDEX_THRESHOLD) {
            return Err(GroupError::IndexTooLarge {
                index,
                limit: INDEX_THRESHOLD,
            });
        }
        let expected = index.to_usize().expect("index fits after threshold check");

        let h_chain = h.chain().clone();
        let identity = Permutation::identity(g.degree());
        let mut reps: Vec<Permutation> = vec![identity.clone()];
        let mut key_to_index: HashMap<Vec<Point>, u32> = HashMap::new();
        key_to_index.insert(
            coset_canonical(&h_chain, &identity).image_slice().to_vec(),
            0,
        );
        let mut head = 0;
        while head < reps.len() {
            let rep = reps[head].clone();
            for gen in g.generators() {
                let next = &rep * gen;
                let key = coset_canonical(&h_chain, &next).image_slice().to_vec();
                if !key_to_index.contains_key(&key) {
                    key_to_index.insert(key, reps.len() as u32);
                    reps.push(next.clone());
                }
            }
            head += 1;
        }
        debug_assert_eq!(reps.len(), expected, "coset enumeration count");

        let mut action = CosetAction {
            parent: g.clone(),
            sub_chain: h_chain,
            reps,
            key_to_index,
            gen_images: Vec::new(),
            image: PermutationGroup::trivial(expected),
        };
        action.gen_images = g
            .generators()
            .iter()
            .map(|gen| action.act(gen))
            .collect::<Result<_, _>>()?;
        action.image =
            PermutationGroup::generated(expected, action.gen_images.clone())?;
        Ok(action)
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    /// Coset representatives in enumeration order (`reps[0]` is the
    /// identity, representing `H * 1`).
    pub fn representatives(&self) -> &[Permutation] {
        &self.reps
    }

    /// Image of an arbitrary element of the parent group as a permutation of
    /// the coset indices.
    pub fn act(&self, g: &Permutation) -> Result<Permutation, GroupError> {
        if g.degree() != self.parent.degree() {
            return Err(GroupError::DegreeMismatch(self.parent.degree(), g.degree()));
        }
        let mut images = vec![0 as Point; self.reps.len()];
        for (i, rep) in self.reps.iter().enumerate() {
            let key = coset_canonical(&self.sub_chain, &(rep * g))
                .image_slice()
                .to_vec();
            let j = *self
                .key_to_index
                .get(&key)
                .ok_or(GroupError::NotASubgroup)?;
            images[i] = j as Point;
        }
        Ok(Permutation::from_points_unchecked(images))
    }

    /// Images of the parent's generators, aligned with `generators()`.
    pub fn generator_images(&self) -> &[Permutation] {
        &self.gen_images
    }

    pub fn image(&self) -> &PermutationGroup {
        &self.image
    }

    /// The kernel of the action, computed as a pointwise stabilizer in the
    /// representation on original points plus coset points. Only the image
    /// group's base points need to be prescribed: a permutation fixing them
    /// induces the identity on all cosets.
    pub fn kernel(&self) -> Result<PermutationGroup, GroupError> {
        let n = self.parent.degree();
        let m = self.reps.len();
        let aug_degree = n + m;
        let aug_gens: Vec<Permutation> = self
            .parent
            .generators()
            .iter()
            .zip(&self.gen_images)
            .map(|(g, img)| {
                let mut images: Vec<Point> = Vec::with_capacity(aug_degree);
                images.extend(g.image_slice());
                images.extend(img.image_slice().iter().map(|&c| c + n as Point));
                Permutation::from_points_unchecked(images)
            })
            .collect();
        let image_base: Vec<Point> = self
            .image
            .base_points()
            .iter()
            .map(|&b| b + n as Point)
            .collect();
        let prefix = image_base.len();
        let aug = Bsgs::build(aug_degree, &aug_gens, &super::BaseRule::Prescribed(image_base));
        let kernel_gens: Vec<Permutation> = aug
            .gens_below(prefix)
            .into_iter()
            .map(|g| {
                Permutation::from_points_unchecked(g.image_slice()[..n].to_vec())
            })
            .collect();
        PermutationGroup::generated(n, kernel_gens)
    }
}

impl PermutationGroup {
    /// A right transversal of `h` in `self`, in deterministic breadth-first
    /// coset order starting from the identity.
    pub fn right_transversal(
        &self,
        h: &PermutationGroup,
    ) -> Result<Vec<Permutation>, GroupError> {
        Ok(CosetAction::new(self, h)?.reps)
    }

    /// The core of `h` in `self`: the largest normal subgroup of `self`
    /// contained in `h`, computed as the intersection of the conjugates of
    /// `h` over a right transversal.
    pub fn core(&self, h: &PermutationGroup) -> Result<Subgroup, GroupError> {
        if !h.is_subgroup_of(self) {
            return Err(GroupError::NotASubgroup);
        }
        let transversal = self.right_transversal(h)?;
        let mut core = h.clone();
        for t in transversal.iter().skip(1) {
            if core.is_trivial() {
                break;
            }
            let conj_gens: Vec<Permutation> = h
                .generators()
                .iter()
                .map(|g| g.conjugate(t))
                .collect::<Result<_, _>>()?;
            let conjugate = PermutationGroup::generated(self.degree(), conj_gens)?;
            core = core.intersect(&conjugate)?;
        }
        Subgroup::new(self, core)
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
    fn coset_action_on_whole_group_is_trivial() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let action = CosetAction::new(&s4, &s4).unwrap();
        assert_eq!(action.index(), 1);
        assert_eq!(action.image().order(), BigUint::one());
    }

    #[test]
    fn coset_action_on_trivial_subgroup_is_regular() {
        let s3 = grp(&["(1,2)", "(1,2,3)"], 3);
        let action = CosetAction::new(&s3, &PermutationGroup::trivial(3)).unwrap();
        assert_eq!(action.index(), 6);
        assert!(action.image().is_transitive());
        assert_eq!(action.image().order(), BigUint::from(6u32));
        // The regular action is faithful.
        assert_eq!(action.kernel().unwrap().order(), BigUint::one());
    }

    #[test]
    fn coset_action_index_and_kernel() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let s3 = grp(&["(1,2)", "(1,2,3)"], 4);
        let action = CosetAction::new(&s4, &s3).unwrap();
        assert_eq!(action.index(), 4);
        assert_eq!(action.image().order(), BigUint::from(24u32));
        assert_eq!(action.kernel().unwrap().order(), BigUint::one());

        // V4 is the kernel of the S4 action on the cosets of D4? No:
        // take H = <(1,2,3)> of index 8; the core is trivial, while
        // H = A4 of index 2 has core A4 itself.
        let a4 = grp(&["(1,2,3)", "(2,3,4)"], 4);
        let action = CosetAction::new(&s4, &a4).unwrap();
        assert_eq!(action.index(), 2);
        let kernel = action.kernel().unwrap();
        assert!(kernel.equals(&a4));
    }

    #[test]
    fn core_matches_conjugate_intersection_facts() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let a4 = grp(&["(1,2,3)", "(2,3,4)"], 4);
        let s3 = grp(&["(1,2)", "(1,2,3)"], 4);

        assert!(s4.core(&a4).unwrap().equals(&a4));
        assert_eq!(s4.core(&s3).unwrap().order(), BigUint::one());
        assert!(s4.core(&s4).unwrap().equals(&s4));

        let z5 = grp(&["(1,2,3,4,5)"], 5);
        assert!(matches!(s4.core(&z5), Err(GroupError::NotASubgroup)));
    }

    #[test]
    fn transversal_covers_group() {
        let s4 = grp(&["(1,2)", "(1,2,3,4)"], 4);
        let s3 = grp(&["(1,2)", "(1,2,3)"], 4);
        let reps = s4.right_transversal(&s3).unwrap();
        assert_eq!(reps.len(), 4);
        // Every element is h * rep for exactly one rep.
        let elems = s4.elements().unwrap();
        for e in elems {
            let matching = reps
                .iter()
                .filter(|r| s3.has(&(&e * &r.inverse())))
                .count();
            assert_eq!(matching, 1);
        }
    }
}
