//! Classification of the monodromy group: the candidate list of simple
//! transitive groups of prime degree, the admissible `(q, U)` pairs, the
//! solvable and Galois criteria, identification of the block image, and
//! the assembled case report.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::arith;
use crate::cover::{tower_genera, CoverError, CoverTower};
use crate::group::{GroupError, PermutationGroup, ENUMERATION_THRESHOLD};
use crate::structure::StructureWitness;

/// Largest `|H|` for which maximality of N in H is certified by exhaustive
/// search over intermediate subgroups.
pub const MAXIMALITY_THRESHOLD: u64 = 10_000;

#[derive(Error, Debug)]
pub enum ClassifyError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("two distinct candidates of degree {p} share order {order}; identification by order is ambiguous")]
    AmbiguousCandidates { p: u64, order: BigUint },
    #[error("block image of degree {p} and order {order} matches no candidate simple group")]
    NoCandidateMatch { p: u64, order: BigUint },
    #[error("block image is not transitive")]
    ImageNotTransitive,
    #[error("block image failed the simplicity check")]
    ImageNotSimple,
    #[error("structure violates a classification invariant: {0}")]
    InvariantViolation(String),
    #[error("unrecognized group label {0:?}")]
    BadLabel(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Identification tag for the groups appearing in the classification of
/// simple transitive groups of prime degree, plus the cyclic case.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SimpleGroupTag {
    Cyclic,
    Alternating,
    PslTwoEleven,
    MathieuEleven,
    MathieuTwentyThree,
    Psl { n: u32, field: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimpleGroupId {
    pub tag: SimpleGroupTag,
    /// The prime degree p of the transitive action.
    pub degree: u64,
    pub order: BigUint,
}

impl SimpleGroupId {
    pub fn cyclic(p: u64) -> Self {
        SimpleGroupId {
            tag: SimpleGroupTag::Cyclic,
            degree: p,
            order: BigUint::from(p),
        }
    }

    pub fn alternating(p: u64) -> Self {
        SimpleGroupId {
            tag: SimpleGroupTag::Alternating,
            degree: p,
            order: arith::factorial(p) / BigUint::from(2u32),
        }
    }

    pub fn psl_two_eleven() -> Self {
        SimpleGroupId {
            tag: SimpleGroupTag::PslTwoEleven,
            degree: 11,
            order: BigUint::from(660u32),
        }
    }

    pub fn mathieu_eleven() -> Self {
        SimpleGroupId {
            tag: SimpleGroupTag::MathieuEleven,
            degree: 11,
            order: BigUint::from(7920u32),
        }
    }

    pub fn mathieu_twenty_three() -> Self {
        SimpleGroupId {
            tag: SimpleGroupTag::MathieuTwentyThree,
            degree: 23,
            order: BigUint::from(10_200_960u32),
        }
    }

    /// `PSL(n, field)` acting on the `(field^n - 1)/(field - 1)` points of
    /// the projective space.
    pub fn psl(n: u32, field: u64) -> Self {
        let degree = (arith::big_pow(field, n) - BigUint::one())
            / BigUint::from(field - 1);
        SimpleGroupId {
            tag: SimpleGroupTag::Psl { n, field },
            degree: degree.try_into().unwrap_or(u64::MAX),
            order: psl_order(n, field),
        }
    }

    /// Parses the label format used in tower files: `Z7`, `A7`, `M11`,
    /// `M23`, `PSL(3,2)`, `PSL(2,11)`.
    pub fn parse(label: &str) -> Result<Self, ClassifyError> {
        let label = label.trim();
        let bad = || ClassifyError::BadLabel(label.to_string());
        if let Some(rest) = label.strip_prefix('Z') {
            let p: u64 = rest.parse().map_err(|_| bad())?;
            return Ok(SimpleGroupId::cyclic(p));
        }
        if let Some(rest) = label.strip_prefix('A') {
            let p: u64 = rest.parse().map_err(|_| bad())?;
            return Ok(SimpleGroupId::alternating(p));
        }
        if label == "M11" {
            return Ok(SimpleGroupId::mathieu_eleven());
        }
        if label == "M23" {
            return Ok(SimpleGroupId::mathieu_twenty_three());
        }
        if let Some(rest) = label.strip_prefix("PSL(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            let (n_text, q_text) = inner.split_once(',').ok_or_else(bad)?;
            let n: u32 = n_text.trim().parse().map_err(|_| bad())?;
            let field: u64 = q_text.trim().parse().map_err(|_| bad())?;
            if n == 2 && field == 11 {
                return Ok(SimpleGroupId::psl_two_eleven());
            }
            return Ok(SimpleGroupId::psl(n, field));
        }
        Err(bad())
    }
}

impl fmt::Display for SimpleGroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag {
            SimpleGroupTag::Cyclic => write!(f, "Z{}", self.degree),
            SimpleGroupTag::Alternating => write!(f, "A{}", self.degree),
            SimpleGroupTag::PslTwoEleven => write!(f, "PSL(2,11)"),
            SimpleGroupTag::MathieuEleven => write!(f, "M11"),
            SimpleGroupTag::MathieuTwentyThree => write!(f, "M23"),
            SimpleGroupTag::Psl { n, field } => write!(f, "PSL({n},{field})"),
        }
    }
}

/// `|PSL(n, q)| = q^(n(n-1)/2) * prod_{i=2..n} (q^i - 1) / gcd(n, q - 1)`.
fn psl_order(n: u32, field: u64) -> BigUint {
    let mut order = arith::big_pow(field, n * (n - 1) / 2);
    for i in 2..=n {
        order *= arith::big_pow(field, i) - BigUint::one();
    }
    order / BigUint::from((n as u64).gcd(&(field - 1)))
}

/// All non-abelian simple transitive groups of prime degree `p`, sorted by
/// order: the alternating group for p >= 5, the two exceptional degree-11
/// groups, the degree-23 Mathieu group, and every `PSL(n, field)` with `n`
/// prime, `field` a prime power, and projective-space size `p`. Orders are
/// verified pairwise distinct so that identification by order is
/// well-defined; the single known coincidence (degree 5, where the
/// projective group on 5 points is the alternating group) is merged.
pub fn guralnick_candidates(p: u64) -> Result<Vec<SimpleGroupId>, ClassifyError> {
    if !arith::is_prime(p) || p == 2 {
        return Err(ClassifyError::NotOddPrime(p));
    }
    let mut out: Vec<SimpleGroupId> = Vec::new();
    if p >= 5 {
        out.push(SimpleGroupId::alternating(p));
    }
    if p == 11 {
        out.push(SimpleGroupId::psl_two_eleven());
        out.push(SimpleGroupId::mathieu_eleven());
    }
    if p == 23 {
        out.push(SimpleGroupId::mathieu_twenty_three());
    }
    // (field^n - 1)/(field - 1) = p forces field^n = p(field-1) + 1, which
    // bounds both the field (by p) and the exponent.
    for field in 2..=p {
        if arith::prime_power(field).is_none() {
            continue;
        }
        let target = BigUint::from(p) * BigUint::from(field - 1) + BigUint::one();
        let mut n = 2u32;
        loop {
            let power = arith::big_pow(field, n);
            if power > target {
                break;
            }
            if power == target && arith::is_prime(n as u64) {
                // PSL(2,2) and PSL(2,3) are solvable, not simple.
                if !(n == 2 && field <= 3) {
                    out.push(SimpleGroupId::psl(n, field));
                }
            }
            n += 1;
        }
    }
    out.sort_by(|a, b| a.order.cmp(&b.order));

    // Disambiguation assumption: within a fixed degree the order identifies
    // the group. The alternating/projective coincidence at degree 5 is the
    // one equal-order pair and denotes a single group.
    let mut merged: Vec<SimpleGroupId> = Vec::new();
    for id in out {
        if let Some(last) = merged.last() {
            if last.order == id.order {
                let pair = (&last.tag, &id.tag);
                let known_coincidence = p == 5
                    && matches!(
                        pair,
                        (SimpleGroupTag::Alternating, SimpleGroupTag::Psl { .. })
                            | (SimpleGroupTag::Psl { .. }, SimpleGroupTag::Alternating)
                    );
                if known_coincidence {
                    if matches!(last.tag, SimpleGroupTag::Psl { .. }) {
                        merged.pop();
                        merged.push(id);
                    }
                    continue;
                }
                return Err(ClassifyError::AmbiguousCandidates {
                    p,
                    order: id.order.clone(),
                });
            }
        }
        merged.push(id);
    }
    Ok(merged)
}

/// The `(q, U)` pairs for which a non-solvable tower with trivial core (or
/// with the group equal to the product of N and the complement) can exist:
/// the index-p subgroup of U must admit a normal subgroup of prime index q.
pub fn admissible_pairs(p: u64) -> Result<Vec<(u64, SimpleGroupId)>, ClassifyError> {
    let mut out: Vec<(u64, SimpleGroupId)> = Vec::new();
    for id in guralnick_candidates(p)? {
        match id.tag {
            // Only degree 5 survives: for larger degree the point stabilizer
            // of the alternating group is simple.
            SimpleGroupTag::Alternating if p == 5 => out.push((3, id)),
            SimpleGroupTag::MathieuEleven => out.push((2, id)),
            SimpleGroupTag::Psl { n, field } => {
                if field == 2 {
                    if n == 3 {
                        out.push((2, id));
                    }
                } else {
                    for (divisor, _) in arith::factorize(field - 1) {
                        out.push((divisor, id.clone()));
                    }
                }
            }
            _ => {}
        }
    }
    out.sort_by(|a, b| (a.0, &a.1.order).cmp(&(b.0, &b.1.order)));
    Ok(out)
}

/// Data extracted in the solvable case (H normal in G).
#[derive(Clone, Debug)]
pub struct SolvableCase {
    pub rank: u32,
    pub galois: bool,
    /// For a Galois tower, the conjugation exponent `r` with
    /// `shift^-1 * a * shift = a^r` for a generator `a` of the core.
    pub presentation: Option<GaloisPresentation>,
}

#[derive(Clone, Copy, Debug)]
pub struct GaloisPresentation {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

/// Detects the solvable case: present exactly when H is normal in G, in
/// which case H equals the core, the whole tower is determined by the rank
/// and the Galois flag, and for a Galois tower the presentation exponent is
/// extracted and verified to be a primitive p-th root of unity mod q.
pub fn solvable_case(
    t: &CoverTower,
    witness: &StructureWitness,
) -> Result<Option<SolvableCase>, ClassifyError> {
    if !t.group().is_normal(t.h())? {
        return Ok(None);
    }
    if !witness.core.group().equals(t.h()) {
        return Err(ClassifyError::InvariantViolation(
            "H is normal but does not equal the core".into(),
        ));
    }
    let rank = witness.rank;
    if rank == 0 {
        return Err(ClassifyError::InvariantViolation(
            "H is normal but the core is trivial".into(),
        ));
    }
    let galois = t.n().is_trivial();
    if galois != (t.group().order() == BigUint::from(t.p() * t.q())) {
        return Err(ClassifyError::InvariantViolation(
            "N trivial must coincide with |G| = pq".into(),
        ));
    }
    let presentation = if galois {
        let p = t.p();
        let q = t.q();
        if (q - 1) % p != 0 {
            return Err(ClassifyError::InvariantViolation(format!(
                "Galois case needs p | q - 1, got p = {p}, q = {q}"
            )));
        }
        let a = witness
            .core
            .generators()
            .first()
            .cloned()
            .ok_or_else(|| ClassifyError::InvariantViolation("core has no generator".into()))?;
        let conj = a
            .conjugate(&witness.shift)
            .map_err(GroupError::from)?;
        let mut power = a.clone();
        let mut r = None;
        for k in 1..q {
            if power == conj {
                r = Some(k);
                break;
            }
            power = &power * &a;
        }
        let r = r.ok_or_else(|| {
            ClassifyError::InvariantViolation("conjugate of core generator not a power".into())
        })?;
        let mut rp = 1u64;
        for _ in 0..p {
            rp = rp * r % q;
        }
        if r == 1 || rp != 1 {
            return Err(ClassifyError::InvariantViolation(format!(
                "exponent {r} is not a primitive {p}-th root of unity mod {q}"
            )));
        }
        Some(GaloisPresentation { p, q, r })
    } else {
        None
    };
    Ok(Some(SolvableCase {
        rank,
        galois,
        presentation,
    }))
}

/// The identified block image together with confirmation status: the
/// simplicity check is skipped above the enumeration budget.
#[derive(Clone, Debug)]
pub struct IdentifiedImage {
    pub id: SimpleGroupId,
    pub simplicity_confirmed: bool,
}

/// Identifies the block image: cyclic of order p, or the unique candidate
/// with matching order. Confirms transitivity always and simplicity when
/// the order is within the enumeration budget.
pub fn identify_image(
    image: &PermutationGroup,
    p: u64,
) -> Result<IdentifiedImage, ClassifyError> {
    if !image.is_transitive() {
        return Err(ClassifyError::ImageNotTransitive);
    }
    let order = image.order();
    if order == BigUint::from(p) {
        return Ok(IdentifiedImage {
            id: SimpleGroupId::cyclic(p),
            simplicity_confirmed: true,
        });
    }
    let id = guralnick_candidates(p)?
        .into_iter()
        .find(|c| c.order == order)
        .ok_or(ClassifyError::NoCandidateMatch {
            p,
            order: order.clone(),
        })?;
    let simplicity_confirmed = if order <= BigUint::from(ENUMERATION_THRESHOLD) {
        if !image.is_simple()? {
            return Err(ClassifyError::ImageNotSimple);
        }
        true
    } else {
        false
    };
    Ok(IdentifiedImage {
        id,
        simplicity_confirmed,
    })
}

/// Which clause of the structure theorem a tower lands in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BaseCase {
    SolvableGeneral,
    SolvableGalois,
    Alternating,
    PslTwoEleven,
    MathieuEleven,
    MathieuTwentyThree,
    Psl,
}

/// Sub-case flags that apply when the core is trivial or the group is the
/// product of N with a complement.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubFlag {
    AlternatingFive,
    MathieuEleven,
    Psl,
}

/// The assembled classification of one tower.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub solvable: bool,
    pub galois: bool,
    pub rank: u32,
    pub image: SimpleGroupId,
    pub simplicity_confirmed: bool,
    pub presentation: Option<GaloisPresentation>,
    pub base_case: BaseCase,
    pub sub_flag: Option<SubFlag>,
    /// Whether the product condition `G = N * complement` could be decided
    /// (a complement was materialized, or the core is trivial).
    pub product_condition_evaluated: bool,
    /// True when some complement U of the core satisfies `G = N * U`.
    pub product_condition: Option<bool>,
    pub h_meets_u: String,
    pub genus_x: BigUint,
    pub genus_y: BigUint,
    pub genus_z: BigUint,
    /// Maximality of N in H by exhaustive intermediate-subgroup search;
    /// `None` when `|H|` exceeds [`MAXIMALITY_THRESHOLD`].
    pub n_maximal_in_h: Option<bool>,
    /// Theorem-violation diagnostics; empty for a consistent tower.
    pub diagnostics: Vec<String>,
}

impl ClassificationReport {
    /// Case label as printed in reports: `i-galois`, `i-general`,
    /// `ii-a` .. `ii-e`, or the sub-case `ii-f` / `ii-g` / `ii-h`.
    pub fn case_label(&self) -> String {
        if let Some(flag) = self.sub_flag {
            return match flag {
                SubFlag::AlternatingFive => "ii-f",
                SubFlag::MathieuEleven => "ii-g",
                SubFlag::Psl => "ii-h",
            }
            .to_string();
        }
        match self.base_case {
            BaseCase::SolvableGalois => "i-galois",
            BaseCase::SolvableGeneral => "i-general",
            BaseCase::Alternating => "ii-a",
            BaseCase::PslTwoEleven => "ii-b",
            BaseCase::MathieuEleven => "ii-c",
            BaseCase::MathieuTwentyThree => "ii-d",
            BaseCase::Psl => "ii-e",
        }
        .to_string()
    }
}

/// Assembles the full classification report for a decomposed tower.
pub fn case_label(
    t: &CoverTower,
    witness: &StructureWitness,
    solvable: Option<&SolvableCase>,
    identified: &IdentifiedImage,
) -> Result<ClassificationReport, ClassifyError> {
    let p = t.p();
    let q = t.q();
    let mut diagnostics = Vec::new();

    let is_cyclic = identified.id.tag == SimpleGroupTag::Cyclic;
    if solvable.is_some() != is_cyclic {
        diagnostics.push(format!(
            "solvable case ({}) must coincide with a cyclic block image ({})",
            solvable.is_some(),
            is_cyclic
        ));
    }

    let base_case = match (&solvable, &identified.id.tag) {
        (Some(s), _) if s.galois => BaseCase::SolvableGalois,
        (Some(_), _) => BaseCase::SolvableGeneral,
        (None, SimpleGroupTag::Alternating) => BaseCase::Alternating,
        (None, SimpleGroupTag::PslTwoEleven) => BaseCase::PslTwoEleven,
        (None, SimpleGroupTag::MathieuEleven) => BaseCase::MathieuEleven,
        (None, SimpleGroupTag::MathieuTwentyThree) => BaseCase::MathieuTwentyThree,
        (None, SimpleGroupTag::Psl { .. }) => BaseCase::Psl,
        (None, SimpleGroupTag::Cyclic) => {
            diagnostics.push("cyclic block image outside the solvable case".into());
            BaseCase::SolvableGeneral
        }
    };

    // Product condition G = N * U, decided exactly on materialized
    // complements: |N * U| = |N| |U| / |N meet U| must equal |G|.
    let (evaluated, product_condition) = if witness.rank == 0 {
        (true, Some(true))
    } else {
        match &witness.complements {
            Some(complements) => {
                let holds = product_with_any_complement(t, complements)?;
                (true, Some(holds))
            }
            None => (false, None),
        }
    };

    let sub_condition = witness.rank == 0 || product_condition == Some(true);
    let sub_flag = if solvable.is_none() && evaluated && sub_condition {
        let flag = match identified.id.tag {
            SimpleGroupTag::Alternating if p == 5 => Some(SubFlag::AlternatingFive),
            SimpleGroupTag::MathieuEleven => Some(SubFlag::MathieuEleven),
            SimpleGroupTag::Psl { .. } => Some(SubFlag::Psl),
            _ => None,
        };
        if flag.is_none() {
            diagnostics.push(format!(
                "sub-case condition holds but {} with p = {p} is not an admissible pair target",
                identified.id
            ));
        }
        // Cross-check against the admissible (q, U) table.
        let admissible = admissible_pairs(p)?;
        if !admissible
            .iter()
            .any(|(aq, id)| *aq == q && id.tag == identified.id.tag)
        {
            diagnostics.push(format!(
                "sub-case condition holds but (q = {q}, U = {}) is not admissible for p = {p}",
                identified.id
            ));
        }
        flag
    } else {
        None
    };

    let h_meets_u = match &identified.id.tag {
        SimpleGroupTag::Cyclic => "trivial (H equals the core)".to_string(),
        SimpleGroupTag::Alternating => format!("A{}", p - 1),
        SimpleGroupTag::PslTwoEleven => "A5".to_string(),
        SimpleGroupTag::MathieuEleven => "M10".to_string(),
        SimpleGroupTag::MathieuTwentyThree => "M22".to_string(),
        SimpleGroupTag::Psl { n, field } => {
            format!("stabilizer of a point or hyperplane of F{field}^{n}")
        }
    };

    let (genus_x, genus_y, genus_z) = tower_genera(t)?;

    let n_maximal_in_h = if t.h().order() <= BigUint::from(MAXIMALITY_THRESHOLD) {
        Some(check_maximal(t.h(), t.n())?)
    } else {
        None
    };
    if n_maximal_in_h == Some(false) {
        diagnostics.push("N is not maximal in H".into());
    }

    Ok(ClassificationReport {
        solvable: solvable.is_some(),
        galois: solvable.map(|s| s.galois).unwrap_or(false),
        rank: witness.rank,
        image: identified.id.clone(),
        simplicity_confirmed: identified.simplicity_confirmed,
        presentation: solvable.and_then(|s| s.presentation),
        base_case,
        sub_flag,
        product_condition_evaluated: evaluated,
        product_condition,
        h_meets_u,
        genus_x,
        genus_y,
        genus_z,
        n_maximal_in_h,
        diagnostics,
    })
}

/// Whether `G = N * U` holds for some materialized complement `U`, using
/// the exact set-size identity `|N * U| = |N| |U| / |N meet U|`.
fn product_with_any_complement(
    t: &CoverTower,
    complements: &[PermutationGroup],
) -> Result<bool, ClassifyError> {
    let g_order = t.group().order();
    let n_order = t.n().order();
    for u in complements {
        let meet = t.n().intersect(u)?;
        if &n_order * u.order() == &g_order * meet.order() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exhaustive maximality certificate: every element of H outside N extends
/// N to the whole of H. (With |H : N| prime this always holds; the search
/// verifies it independently.)
fn check_maximal(h: &PermutationGroup, n: &PermutationGroup) -> Result<bool, ClassifyError> {
    let h_order = h.order();
    for x in h.elements()? {
        if n.has(&x) {
            continue;
        }
        let mut gens = n.generators().to_vec();
        gens.push(x);
        let joined = PermutationGroup::generated(h.degree(), gens)?;
        if joined.order() != h_order {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(ids: &[SimpleGroupId]) -> Vec<String> {
        ids.iter().map(|id| id.to_string()).collect()
    }

    #[test]
    fn candidates_for_seven() {
        let c = guralnick_candidates(7).unwrap();
        assert_eq!(tags(&c), vec!["PSL(3,2)", "A7"]);
        assert_eq!(c[0].order, BigUint::from(168u32));
        assert_eq!(c[1].order, BigUint::from(2520u32));
    }

    #[test]
    fn candidates_for_three_empty() {
        assert!(guralnick_candidates(3).unwrap().is_empty());
    }

    #[test]
    fn candidates_for_eleven() {
        let c = guralnick_candidates(11).unwrap();
        assert_eq!(tags(&c), vec!["PSL(2,11)", "M11", "A11"]);
        assert_eq!(c[0].order, BigUint::from(660u32));
        assert_eq!(c[1].order, BigUint::from(7920u32));
        assert_eq!(c[2].order, BigUint::from(19_958_400u64));
    }

    #[test]
    fn candidates_for_five_merge_coincidence() {
        // The projective group on 5 points is the alternating group; the
        // list must contain a single order-60 entry tagged alternating.
        let c = guralnick_candidates(5).unwrap();
        assert_eq!(tags(&c), vec!["A5"]);
        assert_eq!(c[0].order, BigUint::from(60u32));
    }

    #[test]
    fn candidates_for_thirty_one_distinct_orders() {
        let c = guralnick_candidates(31).unwrap();
        let psl52 = c.iter().find(|id| id.to_string() == "PSL(5,2)").unwrap();
        let psl35 = c.iter().find(|id| id.to_string() == "PSL(3,5)").unwrap();
        assert_eq!(psl52.order, BigUint::from(9_999_360u64));
        assert_eq!(psl35.order, BigUint::from(372_000u64));
        assert_ne!(psl52.order, psl35.order);
    }

    #[test]
    fn candidates_for_twenty_three() {
        let c = guralnick_candidates(23).unwrap();
        let m23 = c
            .iter()
            .find(|id| id.tag == SimpleGroupTag::MathieuTwentyThree)
            .unwrap();
        assert_eq!(m23.order, BigUint::from(10_200_960u32));
        assert!(c.iter().any(|id| id.tag == SimpleGroupTag::Alternating));
    }

    #[test]
    fn candidates_reject_even_or_composite() {
        assert!(matches!(
            guralnick_candidates(2),
            Err(ClassifyError::NotOddPrime(2))
        ));
        assert!(matches!(
            guralnick_candidates(9),
            Err(ClassifyError::NotOddPrime(9))
        ));
    }

    #[test]
    fn admissible_pairs_match_corollary() {
        let five = admissible_pairs(5).unwrap();
        assert_eq!(five.len(), 1);
        assert_eq!(five[0].0, 3);
        assert_eq!(five[0].1.to_string(), "A5");

        let seven = admissible_pairs(7).unwrap();
        assert_eq!(seven.len(), 1);
        assert_eq!(seven[0].0, 2);
        assert_eq!(seven[0].1.to_string(), "PSL(3,2)");

        let eleven = admissible_pairs(11).unwrap();
        assert_eq!(eleven.len(), 1);
        assert_eq!(eleven[0].0, 2);
        assert_eq!(eleven[0].1.to_string(), "M11");

        let thirteen = admissible_pairs(13).unwrap();
        assert_eq!(thirteen.len(), 1);
        assert_eq!(thirteen[0].0, 2);
        assert_eq!(thirteen[0].1.to_string(), "PSL(3,3)");
    }

    #[test]
    fn admissible_pairs_subset_of_candidates() {
        for p in [5u64, 7, 11, 13, 23, 31] {
            let candidates = guralnick_candidates(p).unwrap();
            for (_, id) in admissible_pairs(p).unwrap() {
                assert!(
                    candidates.iter().any(|c| c.tag == id.tag),
                    "admissible entry {id} missing from candidates for p = {p}"
                );
            }
        }
    }

    #[test]
    fn candidate_orders_divide_alternating_order() {
        for p in arith::primes_up_to(100) {
            if p < 3 {
                continue;
            }
            if p == 2 {
                continue;
            }
            let half_factorial = arith::factorial(p) / BigUint::from(2u32);
            for id in guralnick_candidates(p).unwrap() {
                assert!(
                    (&half_factorial % &id.order) == BigUint::ZERO,
                    "order of {id} does not divide {p}!/2"
                );
                assert!(
                    (&id.order % BigUint::from(p)) == BigUint::ZERO,
                    "order of {id} is not divisible by {p}"
                );
            }
        }
    }

    #[test]
    fn label_parsing_round_trip() {
        for label in ["Z7", "A7", "PSL(3,2)", "PSL(2,11)", "M11", "M23"] {
            let id = SimpleGroupId::parse(label).unwrap();
            assert_eq!(id.to_string(), label);
        }
        assert!(SimpleGroupId::parse("X9").is_err());
        assert!(SimpleGroupId::parse("PSL(3)").is_err());
    }

    #[test]
    fn psl_orders() {
        assert_eq!(psl_order(3, 2), BigUint::from(168u32));
        assert_eq!(psl_order(3, 3), BigUint::from(5616u32));
        assert_eq!(psl_order(2, 4), BigUint::from(60u32));
        assert_eq!(psl_order(2, 11), BigUint::from(660u32));
    }
}
