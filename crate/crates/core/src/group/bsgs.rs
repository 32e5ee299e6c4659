//! Deterministic Schreier–Sims stabilizer chains.
//!
//! Base points are chosen by a fixed rule (smallest moved point first,
//! or an explicitly prescribed sequence), generators are processed in the
//! order given, and orbits are explored breadth-first, so identical input
//! always yields an identical chain.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::perm::{Permutation, Point};

/// One level of the chain. `gens` holds the strong generators whose home is
/// this level (they fix all earlier base points and move `base`); the
/// subgroup at level `i` is generated by the home generators of levels
/// `i..`. `reps[k]` maps `base` to `orbit[k]`.
#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base: Point,
    pub gens: Vec<Permutation>,
    pub orbit: Vec<Point>,
    pub reps: Vec<Permutation>,
    pos: HashMap<Point, u32>,
}

impl Level {
    fn new(degree: usize, base: Point) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            reps: Vec::new(),
            pos: HashMap::new(),
        };
        level.orbit.push(base);
        level.reps.push(Permutation::identity(degree));
        level.pos.insert(base, 0);
        level
    }

    pub fn rep(&self, point: Point) -> Option<&Permutation> {
        self.pos.get(&point).map(|&i| &self.reps[i as usize])
    }
}

/// How the next base point is picked when a new level is created.
#[derive(Clone, Debug, Default)]
pub(crate) enum BaseRule {
    /// Smallest point moved by the generator that opens the level.
    #[default]
    SmallestMoved,
    /// Create one level per listed point, in order (orbits may be trivial),
    /// then fall back to the smallest-moved rule. Used to read off pointwise
    /// stabilizers and to align two chains over a common base.
    Prescribed(Vec<Point>),
}

#[derive(Clone, Debug)]
pub(crate) struct Bsgs {
    pub degree: usize,
    pub levels: Vec<Level>,
}

impl Bsgs {
    pub fn build(degree: usize, gens: &[Permutation], rule: &BaseRule) -> Bsgs {
        let mut chain = Bsgs {
            degree,
            levels: Vec::new(),
        };
        if let BaseRule::Prescribed(points) = rule {
            for &pt in points {
                chain.levels.push(Level::new(degree, pt));
            }
        }
        for g in gens {
            if g.is_identity() {
                continue;
            }
            let (residue, at) = chain.strip_from(0, g.clone());
            if !residue.is_identity() {
                chain.insert(residue, at);
            }
        }
        chain.verify_closure();
        chain
    }

    pub fn order(&self) -> BigUint {
        let mut order = BigUint::one();
        for level in &self.levels {
            order *= BigUint::from(level.orbit.len());
        }
        order
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        debug_assert_eq!(g.degree(), self.degree);
        let (residue, _) = self.strip_from(0, g.clone());
        residue.is_identity()
    }

    /// Sifts `g` through levels `from..`, returning the residue and the level
    /// at which sifting stopped (== `levels.len()` on full descent).
    pub fn strip_from(&self, from: usize, mut g: Permutation) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let x = g.apply_point(level.base);
            match level.rep(x) {
                Some(u) => g = &g * &u.inverse(),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    /// Adds `residue` with home level `at` (it fixes all earlier base points)
    /// and refreshes the orbits whose effective generator set changed.
    fn insert(&mut self, residue: Permutation, at: usize) {
        debug_assert!(!residue.is_identity());
        if at == self.levels.len() {
            let base = residue
                .smallest_moved()
                .expect("non-identity permutation moves a point") as Point;
            self.levels.push(Level::new(self.degree, base));
        }
        self.levels[at].gens.push(residue);
        for i in (0..=at).rev() {
            self.recompute_orbit(i);
        }
    }

    /// Effective generators of the subgroup at `level`: all home generators
    /// of this level and deeper ones.
    fn effective_gens(&self, level: usize) -> Vec<Permutation> {
        self.levels[level..]
            .iter()
            .flat_map(|l| l.gens.iter().cloned())
            .collect()
    }

    fn recompute_orbit(&mut self, level: usize) {
        let gens = self.effective_gens(level);
        let lvl = &mut self.levels[level];
        lvl.orbit.clear();
        lvl.reps.clear();
        lvl.pos.clear();
        lvl.orbit.push(lvl.base);
        lvl.reps.push(Permutation::identity(self.degree));
        lvl.pos.insert(lvl.base, 0);
        let mut head = 0;
        while head < lvl.orbit.len() {
            let x = lvl.orbit[head];
            let rep_x = lvl.reps[head].clone();
            for g in &gens {
                let y = g.apply_point(x);
                if !lvl.pos.contains_key(&y) {
                    lvl.pos.insert(y, lvl.orbit.len() as u32);
                    lvl.orbit.push(y);
                    lvl.reps.push(&rep_x * g);
                }
            }
            head += 1;
        }
    }

    /// Bottom-up Schreier verification: every Schreier generator of every
    /// level must sift to the identity through the levels below it. A
    /// violation becomes a new strong generator at the level where sifting
    /// stopped, and verification re-descends there.
    fn verify_closure(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() - 1;
        'outer: loop {
            self.recompute_orbit(i);
            let gens = self.effective_gens(i);
            let orbit = self.levels[i].orbit.clone();
            for &x in &orbit {
                let rep_x = self.levels[i].rep(x).expect("orbit point").clone();
                for s in &gens {
                    let y = s.apply_point(x);
                    let rep_y = self.levels[i].rep(y).expect("orbit is closed");
                    let schreier = &(&rep_x * s) * &rep_y.inverse();
                    if schreier.is_identity() {
                        continue;
                    }
                    let (residue, at) = self.strip_from(i + 1, schreier);
                    if !residue.is_identity() {
                        self.insert(residue, at);
                        i = at;
                        continue 'outer;
                    }
                }
            }
            if i == 0 {
                break;
            }
            i -= 1;
        }
    }

    /// All strong generators fixing the first `prefix_levels` base points;
    /// with a prescribed base these generate the pointwise stabilizer of the
    /// prescribed points.
    pub fn gens_below(&self, prefix_levels: usize) -> Vec<Permutation> {
        self.levels
            .iter()
            .skip(prefix_levels)
            .flat_map(|level| level.gens.iter().cloned())
            .collect()
    }

    pub fn base_points(&self) -> Vec<Point> {
        self.levels.iter().map(|level| level.base).collect()
    }

    /// Lists every element, one per chain word, in deterministic order.
    /// The caller is responsible for checking the order beforehand.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut elems = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * level.orbit.len());
            for rep in &level.reps {
                for h in &elems {
                    next.push(h * rep);
                }
            }
            elems = next;
        }
        elems
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    fn chain(gens: &[&str], degree: usize) -> Bsgs {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|t| parse_cycles(t, degree).unwrap())
            .collect();
        Bsgs::build(degree, &gens, &BaseRule::SmallestMoved)
    }

    #[test]
    fn symmetric_group_order() {
        let s4 = chain(&["(1,2)", "(1,2,3,4)"], 4);
        assert_eq!(s4.order(), BigUint::from(24u32));
        assert_eq!(s4.elements().len(), 24);

        let s7 = chain(&["(1,2)", "(1,2,3,4,5,6,7)"], 7);
        assert_eq!(s7.order(), BigUint::from(5040u32));
    }

    #[test]
    fn membership() {
        let a4 = chain(&["(1,2,3)", "(2,3,4)"], 4);
        assert_eq!(a4.order(), BigUint::from(12u32));
        assert!(a4.contains(&parse_cycles("(1,2)(3,4)", 4).unwrap()));
        assert!(!a4.contains(&parse_cycles("(1,2)", 4).unwrap()));
    }

    #[test]
    fn all_elements_are_members() {
        let g = chain(&["(1,2,3,4,5)", "(1,2)"], 5);
        let elems = g.elements();
        assert_eq!(elems.len(), 120);
        let mut dedup = elems.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 120);
        for e in &elems {
            assert!(g.contains(e));
        }
    }

    #[test]
    fn prescribed_base_reads_off_stabilizer() {
        let s4_gens: Vec<Permutation> = ["(1,2)", "(1,2,3,4)"]
            .iter()
            .map(|t| parse_cycles(t, 4).unwrap())
            .collect();
        let chain = Bsgs::build(4, &s4_gens, &BaseRule::Prescribed(vec![3]));
        assert_eq!(chain.levels[0].base, 3);
        assert_eq!(chain.order(), BigUint::from(24u32));
        let stab_gens = chain.gens_below(1);
        let stab = Bsgs::build(4, &stab_gens, &BaseRule::SmallestMoved);
        assert_eq!(stab.order(), BigUint::from(6u32));
        for g in &stab_gens {
            assert_eq!(g.apply(3), 3);
        }
    }

    #[test]
    fn deterministic_rebuild() {
        let gens = [
            "(1,2,3,4,5,6,7)(8,9,10,11,12,13,14)",
            "(1,2,3,11,12,6,14)(4,5,13,7,8,9,10)",
        ];
        let a = chain(&gens, 14);
        let b = chain(&gens, 14);
        assert_eq!(a.base_points(), b.base_points());
        assert_eq!(a.order(), b.order());
        assert_eq!(a.elements(), b.elements());
    }
}
