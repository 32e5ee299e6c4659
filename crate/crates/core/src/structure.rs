//! Block structure of the monodromy group: the size-q blocks of
//! imprimitivity, the relabeling that puts them in standard position, the
//! block-rotation scaffold and its envelope group, the containment checks,
//! and the decomposition of `G` over its core.

use num_bigint::BigUint;
use thiserror::Error;

use crate::cover::{base_point_of, CoverError, CoverTower};
use crate::group::{GroupError, PermutationGroup, Subgroup};
use crate::perm::{Permutation, Point};
use crate::report::CheckReport;

/// Largest group order for which an internal complement of the core is
/// searched exhaustively.
pub const COMPLEMENT_SEARCH_THRESHOLD: u64 = 10_000;

#[derive(Error, Debug)]
pub enum StructureError {
    #[error("no element of order divisible by {p} found among short generator words")]
    NoOrderPElement { p: u64 },
    #[error("every element of H scanned lies in N; H = N is impossible here")]
    NoCosetRepresentative,
    #[error("coset enumeration mismatch: the transversal walk produced a repeated coset")]
    CosetMismatch,
    #[error("blocks of size q are not invariant under a generator")]
    BlocksNotInvariant,
    #[error("kernel of the block projection does not equal the core")]
    KernelMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// The partition of `{0..pq-1}` into p blocks of size q: block `b` holds
/// the points `b, p+b, ..., (q-1)p+b`.
#[derive(Clone, Copy, Debug)]
pub struct BlockSystem {
    pub p: u64,
    pub q: u64,
}

impl BlockSystem {
    pub fn new(p: u64, q: u64) -> Self {
        BlockSystem { p, q }
    }

    pub fn degree(&self) -> usize {
        (self.p * self.q) as usize
    }

    #[inline]
    pub fn block_of(&self, point: usize) -> usize {
        point % self.p as usize
    }

    pub fn block_points(&self, block: usize) -> Vec<usize> {
        (0..self.q as usize)
            .map(|j| j * self.p as usize + block)
            .collect()
    }
}

/// The fixed subgroups of the ambient symmetric group that contain every
/// monodromy group in standard block position: the q-cycles rotating each
/// block, their product, the full rotation group (elementary abelian of
/// rank p), its zero-sum subgroup of rank p-1, and the envelope generated
/// by the zero-sum subgroup together with the diagonal alternating action
/// on blocks.
#[derive(Clone, Debug)]
pub struct BlockScaffold {
    pub blocks: BlockSystem,
    pub block_cycles: Vec<Permutation>,
    pub diagonal: Permutation,
    pub rotation_group: PermutationGroup,
    pub zero_sum: PermutationGroup,
    pub envelope: PermutationGroup,
}

/// The q-cycle rotating block `b` through `b -> p+b -> 2p+b -> ...`.
fn block_cycle(blocks: &BlockSystem, b: usize) -> Permutation {
    let p = blocks.p as usize;
    let q = blocks.q as usize;
    let mut images: Vec<Point> = (0..p * q).map(|x| x as Point).collect();
    for j in 0..q {
        let from = j * p + b;
        let to = ((j + 1) % q) * p + b;
        images[from] = to as Point;
    }
    Permutation::from_points_unchecked(images)
}

/// Lifts a permutation of the p blocks to the diagonal permutation of the
/// pq points sending `jp + b` to `jp + pi(b)`.
pub fn diagonal_lift(blocks: &BlockSystem, pi: &Permutation) -> Permutation {
    let p = blocks.p as usize;
    let q = blocks.q as usize;
    debug_assert_eq!(pi.degree(), p);
    let mut images: Vec<Point> = vec![0; p * q];
    for j in 0..q {
        for b in 0..p {
            images[j * p + b] = (j * p + pi.apply(b)) as Point;
        }
    }
    Permutation::from_points_unchecked(images)
}

/// Builds the block cycles, their product, the rotation group, its zero-sum
/// subgroup, and the envelope for the given primes.
pub fn block_scaffold(p: u64, q: u64) -> Result<BlockScaffold, StructureError> {
    let blocks = BlockSystem::new(p, q);
    let degree = blocks.degree();
    let block_cycles: Vec<Permutation> = (0..p as usize).map(|b| block_cycle(&blocks, b)).collect();
    let mut diagonal = Permutation::identity(degree);
    for c in &block_cycles {
        diagonal = &diagonal * c;
    }
    let rotation_group = PermutationGroup::generated(degree, block_cycles.clone())?;
    let zero_sum_gens: Vec<Permutation> = (0..p as usize - 1)
        .map(|b| &block_cycles[b] * &block_cycles[b + 1].inverse())
        .collect();
    let zero_sum = PermutationGroup::generated(degree, zero_sum_gens.clone())?;

    // The alternating group on blocks, lifted diagonally; p odd makes the
    // full p-cycle even.
    let p_usize = p as usize;
    let three_cycle = Permutation::from_images(
        (0..p_usize)
            .map(|b| match b {
                0 => 1,
                1 => 2,
                2 => 0,
                other => other,
            })
            .collect(),
    )
    .expect("three-cycle images");
    let full_cycle =
        Permutation::from_images((0..p_usize).map(|b| (b + 1) % p_usize).collect())
            .expect("cycle images");
    let mut envelope_gens = zero_sum_gens;
    envelope_gens.push(diagonal_lift(&blocks, &three_cycle));
    envelope_gens.push(diagonal_lift(&blocks, &full_cycle));
    let envelope = PermutationGroup::generated(degree, envelope_gens)?;

    Ok(BlockScaffold {
        blocks,
        block_cycles,
        diagonal,
        rotation_group,
        zero_sum,
        envelope,
    })
}

/// The element of order p generating the block shift, and a representative
/// of the nontrivial coset of N in H.
#[derive(Clone, Debug)]
pub struct ShiftPair {
    pub shift: Permutation,
    pub coset_rep: Permutation,
}

/// Finds an element of order p (deterministically: the first generator
/// power that works, then breadth-first products) and the first element of
/// H outside N in chain order. Verifies `H<shift> = G` and
/// `N<coset_rep> = H` by order arithmetic.
pub fn find_shift_pair(t: &CoverTower) -> Result<ShiftPair, StructureError> {
    let p = t.p();
    let q = t.q();
    let shift = find_order_p_element(t.group(), p)?;

    debug_assert!(!t.h().has(&shift), "p does not divide |H|");
    let mut with_shift = t.h().generators().to_vec();
    with_shift.push(shift.clone());
    let joined = PermutationGroup::generated(t.degree(), with_shift)?;
    debug_assert_eq!(joined.order(), t.group().order());

    let coset_rep = t
        .h()
        .elements()?
        .into_iter()
        .find(|x| !t.n().has(x))
        .ok_or(StructureError::NoCosetRepresentative)?;
    // In H/N of prime order q every q-th power falls back into N.
    debug_assert!(t.n().has(&coset_rep.power(q as i64)));
    let mut with_rep = t.n().generators().to_vec();
    with_rep.push(coset_rep.clone());
    let joined_h = PermutationGroup::generated(t.degree(), with_rep)?;
    debug_assert_eq!(joined_h.order(), t.h().order());

    Ok(ShiftPair { shift, coset_rep })
}

fn find_order_p_element(g: &PermutationGroup, p: u64) -> Result<Permutation, StructureError> {
    let reduce = |x: &Permutation| -> Option<Permutation> {
        let o = x.order();
        if o % p as u128 == 0 {
            Some(x.power((o / p as u128) as i64))
        } else {
            None
        }
    };
    for gen in g.generators() {
        if let Some(s) = reduce(gen) {
            return Ok(s);
        }
    }
    // Breadth-first over generator words; an element of order divisible by
    // p exists whenever p divides the group order.
    let mut frontier: Vec<Permutation> = g.generators().to_vec();
    let mut seen: std::collections::HashSet<Vec<Point>> = frontier
        .iter()
        .map(|x| x.image_slice().to_vec())
        .collect();
    let budget = 200_000usize;
    while !frontier.is_empty() && seen.len() < budget {
        let mut next = Vec::new();
        for w in &frontier {
            for gen in g.generators() {
                let x = w * gen;
                if seen.insert(x.image_slice().to_vec()) {
                    if let Some(s) = reduce(&x) {
                        return Ok(s);
                    }
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    Err(StructureError::NoOrderPElement { p })
}

/// A tower conjugated into standard block position, together with the
/// relabeling that got it there.
#[derive(Clone, Debug)]
pub struct RelabeledTower {
    pub relabeling: Permutation,
    pub tower: CoverTower,
    pub shift: Permutation,
    pub coset_rep: Permutation,
    pub checks: CheckReport,
}

/// Relabels points so that the coset `N * coset_rep^a * shift^b` becomes
/// the point `a*p + b` (0-based), i.e. blocks become the arithmetic
/// progressions `{b, p+b, ...}` and the shift becomes the standard product
/// of p-cycles. Requires the tower to be in its monodromy representation
/// (N a point stabilizer), which `CoverTower::validated` guarantees.
pub fn relabel_to_blocks(
    t: &CoverTower,
    pair: &ShiftPair,
) -> Result<RelabeledTower, StructureError> {
    let p = t.p() as usize;
    let q = t.q() as usize;
    let degree = t.degree();
    let base_point = base_point_of(t.group(), t.n()).ok_or(StructureError::CosetMismatch)?;

    // Transversal walk in the order of the coset diagram: row a is the
    // power of the H-coset representative, column b the power of the shift.
    let mut images: Vec<Option<Point>> = vec![None; degree];
    for a in 0..q {
        let row = pair.coset_rep.power(a as i64);
        for b in 0..p {
            let rep = &row * &pair.shift.power(b as i64);
            let from = rep.apply(base_point);
            let label = (a * p + b) as Point;
            if images[from].is_some() {
                return Err(StructureError::CosetMismatch);
            }
            images[from] = Some(label);
        }
    }
    let rho = Permutation::from_points_unchecked(
        images
            .into_iter()
            .map(|x| x.ok_or(StructureError::CosetMismatch))
            .collect::<Result<Vec<_>, _>>()?,
    );

    let tower = t.conjugated(&rho)?;
    let shift = pair
        .shift
        .conjugate(&rho)
        .map_err(GroupError::from)?;
    let coset_rep = pair
        .coset_rep
        .conjugate(&rho)
        .map_err(GroupError::from)?;

    let mut checks = CheckReport::new();
    let blocks = BlockSystem::new(t.p(), t.q());
    let standard = standard_shift(&blocks);
    checks.check(
        "shift_standard_form",
        shift == standard,
        format!("relabeled shift is {shift}"),
    );
    checks.check(
        "shift_rotates_blocks",
        (0..p).all(|b| {
            blocks
                .block_points(b)
                .iter()
                .all(|&x| blocks.block_of(shift.apply(x)) == (b + 1) % p)
        }),
        "shift sends block b to block b+1 cyclically",
    );
    let h_stab = tower.group().block_stabilizer(&blocks.block_points(0))?;
    checks.check(
        "h_is_block_stabilizer",
        h_stab.group().equals(tower.h()),
        format!(
            "|Stab(first block)| = {}, |H| = {}",
            h_stab.order(),
            tower.h().order()
        ),
    );
    // The conjugates of N act trivially on the corresponding block.
    let mut conj_trivial = true;
    for b in 0..p {
        let twist = shift.power(b as i64);
        for gen in tower.n().generators() {
            let moved = gen.conjugate(&twist).map_err(GroupError::from)?;
            if blocks.block_points(b).iter().any(|&x| moved.apply(x) != x) {
                conj_trivial = false;
            }
        }
    }
    checks.check(
        "n_conjugates_fix_their_block",
        conj_trivial,
        "shift-conjugates of N fix their block pointwise",
    );

    Ok(RelabeledTower {
        relabeling: rho,
        tower,
        shift,
        coset_rep,
        checks,
    })
}

/// The standard block shift `jp + b -> jp + (b+1 mod p)`.
pub fn standard_shift(blocks: &BlockSystem) -> Permutation {
    let p = blocks.p as usize;
    let q = blocks.q as usize;
    let mut images: Vec<Point> = vec![0; p * q];
    for j in 0..q {
        for b in 0..p {
            images[j * p + b] = (j * p + (b + 1) % p) as Point;
        }
    }
    Permutation::from_points_unchecked(images)
}

/// Containment facts for a relabeled tower against the scaffold: all
/// generators even, commuting with the full rotation product, inside the
/// envelope; the core inside the zero-sum subgroup and equal to the
/// intersection of the group with it.
pub fn verify_containments(
    t: &CoverTower,
    scaffold: &BlockScaffold,
    core: &PermutationGroup,
) -> Result<CheckReport, StructureError> {
    let mut checks = CheckReport::new();
    checks.check(
        "generators_even",
        t.group().generators().iter().all(|g| g.is_even()),
        "every generator lies in the alternating group",
    );
    let eps = &scaffold.diagonal;
    checks.check(
        "generators_commute_with_rotation",
        t.group()
            .generators()
            .iter()
            .all(|g| &(g * eps) == &(eps * g)),
        "every generator commutes with the product of the block cycles",
    );
    let mut in_envelope = true;
    for g in t.group().generators() {
        if !scaffold.envelope.contains(g)? {
            in_envelope = false;
        }
    }
    checks.check(
        "generators_in_envelope",
        in_envelope,
        "every generator lies in the zero-sum/alternating envelope",
    );
    let mut core_in_zero_sum = true;
    for g in core.generators() {
        if !scaffold.zero_sum.contains(g)? {
            core_in_zero_sum = false;
        }
    }
    checks.check(
        "core_in_zero_sum",
        core_in_zero_sum,
        "the core lies in the zero-sum rotation subgroup",
    );
    let meet = t.group().intersect(&scaffold.zero_sum)?;
    checks.check(
        "core_equals_group_meet_zero_sum",
        meet.equals(core) && core.is_subgroup_of(&meet),
        format!(
            "|G meet zero-sum| = {}, |core| = {}",
            meet.order(),
            core.order()
        ),
    );
    Ok(checks)
}

/// The computed structure of a tower: core and rank, shift data, scaffold,
/// block projection and its image, and (below the search threshold) every
/// internal complement of the core.
#[derive(Clone, Debug)]
pub struct StructureWitness {
    pub core: Subgroup,
    pub rank: u32,
    pub shift: Permutation,
    pub coset_rep: Permutation,
    pub scaffold: BlockScaffold,
    pub block_images: Vec<Permutation>,
    pub block_image: PermutationGroup,
    /// All complements of the core in the group, found by the exhaustive
    /// kernel-coset sweep; `None` when the group order exceeds
    /// [`COMPLEMENT_SEARCH_THRESHOLD`].
    pub complements: Option<Vec<PermutationGroup>>,
    pub checks: CheckReport,
}

/// Projects the relabeled tower onto its block action, verifies that the
/// kernel is exactly the core, and packages the structural data. The
/// block-action image realizes `G / core` faithfully on p points.
/// `core` must be the core of H in G for the relabeled tower.
pub fn decompose(
    relabeled: &RelabeledTower,
    scaffold: &BlockScaffold,
    core: Subgroup,
) -> Result<StructureWitness, StructureError> {
    let t = &relabeled.tower;
    let p = t.p() as usize;
    let blocks = scaffold.blocks;
    let mut checks = CheckReport::new();

    let rank = core
        .is_elementary_abelian(t.q())?
        .ok_or(StructureError::KernelMismatch);
    checks.check(
        "core_elementary_abelian",
        rank.is_ok(),
        format!("core order {}", core.order()),
    );
    let rank = rank?;
    checks.check(
        "core_rank_at_most_p_minus_1",
        (rank as u64) <= t.p() - 1,
        format!("rank {rank}"),
    );

    let mut block_images = Vec::new();
    for g in t.group().generators() {
        block_images.push(block_projection(&blocks, g)?);
    }
    let block_image = PermutationGroup::generated(p, block_images.clone())?;

    // Kernel of the projection equals the core: the core projects
    // trivially, and the order factorization pins the kernel size.
    let core_projects_trivially = core
        .generators()
        .iter()
        .map(|g| block_projection(&blocks, g))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|pi| pi.is_identity());
    checks.check(
        "core_in_projection_kernel",
        core_projects_trivially,
        "the core acts trivially on blocks",
    );
    let factorization_ok = core.order() * block_image.order() == t.group().order();
    checks.check(
        "order_factors_through_blocks",
        factorization_ok,
        format!(
            "|core| * |block image| = {} * {}, |G| = {}",
            core.order(),
            block_image.order(),
            t.group().order()
        ),
    );
    if !(core_projects_trivially && factorization_ok) {
        return Err(StructureError::KernelMismatch);
    }
    checks.check(
        "block_image_transitive",
        block_image.is_transitive(),
        "the block action is transitive on p blocks",
    );

    let complements = if t.group().order() <= BigUint::from(COMPLEMENT_SEARCH_THRESHOLD) {
        Some(find_complements(t.group(), core.group(), &block_image)?)
    } else {
        None
    };
    if let Some(found) = &complements {
        checks.check(
            "complement_exists",
            core.is_trivial() || !found.is_empty(),
            format!("{} complement(s) found", found.len()),
        );
    } else {
        checks.note(
            "complement_search",
            format!("skipped: group order exceeds {COMPLEMENT_SEARCH_THRESHOLD}"),
        );
    }

    Ok(StructureWitness {
        core,
        rank,
        shift: relabeled.shift.clone(),
        coset_rep: relabeled.coset_rep.clone(),
        scaffold: scaffold.clone(),
        block_images,
        block_image,
        complements,
        checks,
    })
}

/// The action of `g` on blocks as a permutation of `0..p-1`; errors if the
/// block partition is not invariant.
pub fn block_projection(
    blocks: &BlockSystem,
    g: &Permutation,
) -> Result<Permutation, StructureError> {
    let p = blocks.p as usize;
    let mut images: Vec<usize> = Vec::with_capacity(p);
    for b in 0..p {
        images.push(blocks.block_of(g.apply(b)));
    }
    for x in 0..g.degree() {
        if images[blocks.block_of(x)] != blocks.block_of(g.apply(x)) {
            return Err(StructureError::BlocksNotInvariant);
        }
    }
    Permutation::from_images(images).map_err(|_| StructureError::BlocksNotInvariant)
}

/// Exhaustive complement search: every complement of the core is generated
/// by one core-twist of each group generator, so sweeping all twist tuples
/// finds them all. Candidates are kept when their order matches
/// `|G| / |core|` (which forces trivial intersection with the core).
fn find_complements(
    g: &PermutationGroup,
    core: &PermutationGroup,
    block_image: &PermutationGroup,
) -> Result<Vec<PermutationGroup>, StructureError> {
    let target = g.order() / core.order();
    debug_assert_eq!(block_image.order(), target);
    if core.is_trivial() {
        return Ok(vec![g.clone()]);
    }
    let core_elems = core.elements()?;
    let r = g.generators().len();
    let combos = (core_elems.len() as u64).checked_pow(r as u32);
    if combos.is_none() || combos.unwrap() > 1_000_000 {
        return Ok(Vec::new());
    }
    let mut found: Vec<PermutationGroup> = Vec::new();
    let mut indices = vec![0usize; r];
    loop {
        let gens: Vec<Permutation> = indices
            .iter()
            .zip(g.generators())
            .map(|(&i, gen)| &core_elems[i] * gen)
            .collect();
        // The twisted generators still project onto the full block image,
        // so hitting the target order forces trivial core intersection.
        let candidate = PermutationGroup::generated(g.degree(), gens)?;
        if candidate.order() == target && !found.iter().any(|u| u.equals(&candidate)) {
            found.push(candidate);
        }

        // Advance the mixed-radix counter.
        let mut pos = 0;
        loop {
            if pos == r {
                return Ok(found);
            }
            indices[pos] += 1;
            if indices[pos] < core_elems.len() {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{format_cycles, parse_cycles};

    #[test]
    fn block_cycles_for_small_primes() {
        let scaffold = block_scaffold(3, 2).unwrap();
        let texts: Vec<String> = scaffold
            .block_cycles
            .iter()
            .map(format_cycles)
            .collect();
        assert_eq!(texts, vec!["(1,4)", "(2,5)", "(3,6)"]);
        assert_eq!(format_cycles(&scaffold.diagonal), "(1,4)(2,5)(3,6)");
    }

    #[test]
    fn scaffold_orders() {
        // rotation q^p, zero-sum q^(p-1), envelope q^(p-1) * p!/2.
        let s32 = block_scaffold(3, 2).unwrap();
        assert_eq!(s32.rotation_group.order_u64(), Some(8));
        assert_eq!(s32.zero_sum.order_u64(), Some(4));
        assert_eq!(s32.envelope.order_u64(), Some(12));

        let s72 = block_scaffold(7, 2).unwrap();
        assert_eq!(s72.rotation_group.order_u64(), Some(128));
        assert_eq!(s72.zero_sum.order_u64(), Some(64));
        assert_eq!(s72.envelope.order_u64(), Some(161_280));

        let s52 = block_scaffold(5, 2).unwrap();
        assert_eq!(s52.envelope.order_u64(), Some(16 * 60));
        let s53 = block_scaffold(5, 3).unwrap();
        assert_eq!(s53.envelope.order_u64(), Some(81 * 60));
        let s73 = block_scaffold(7, 3).unwrap();
        assert_eq!(s73.envelope.order_u64(), Some(729 * 2520));
    }

    #[test]
    fn zero_sum_and_envelope_are_even() {
        let s = block_scaffold(7, 2).unwrap();
        for g in s.zero_sum.generators() {
            assert!(g.is_even());
        }
        for g in s.envelope.generators() {
            assert!(g.is_even());
        }
    }

    #[test]
    fn shift_conjugates_block_cycles() {
        let s = block_scaffold(5, 2).unwrap();
        let shift = standard_shift(&s.blocks);
        for b in 0..5 {
            let conj = s.block_cycles[b].conjugate(&shift).unwrap();
            assert_eq!(conj, s.block_cycles[(b + 1) % 5]);
        }
    }

    #[test]
    fn diagonal_commutes_with_envelope() {
        let s = block_scaffold(5, 2).unwrap();
        let eps = &s.diagonal;
        for g in s.envelope.generators() {
            assert_eq!(&(g * eps), &(eps * g));
        }
    }

    #[test]
    fn block_projection_reads_off_block_action() {
        let blocks = BlockSystem::new(3, 2);
        let shift = standard_shift(&blocks);
        let pi = block_projection(&blocks, &shift).unwrap();
        assert_eq!(format_cycles(&pi), "(1,2,3)");
        // A block cycle projects to the identity.
        let cycle = block_cycle(&blocks, 0);
        assert!(block_projection(&blocks, &cycle).unwrap().is_identity());
        // A permutation breaking the blocks is rejected.
        let bad = parse_cycles("(1,2)", 6).unwrap();
        assert!(matches!(
            block_projection(&blocks, &bad),
            Err(StructureError::BlocksNotInvariant)
        ));
    }
}
