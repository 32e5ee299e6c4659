// Temporary data-validation harness; removed before release.
use std::collections::HashSet;

use pqcover::group::PermutationGroup;
use pqcover::perm::{parse_cycles, Permutation};

fn main() {
    let a = parse_cycles("(1,2,3,4,5,6,7)(8,9,10,11,12,13,14)", 14).unwrap();
    // Failing search tower (candidate non-split extension).
    let b_bad = parse_cycles("(1,2,5,14,10,13,4)(3,6,11,8,9,12,7)", 14).unwrap();
    // A passing 1344 tower (16 complements found).
    let b_good = parse_cycles("(1,2,12,7,10,13,4)(3,6,11,8,9,5,14)", 14).unwrap();

    for (name, b) in [("bad", &b_bad), ("good", &b_good)] {
        let g = PermutationGroup::generated(14, vec![a.clone(), b.clone()]).unwrap();
        println!("== {name}: |G| = {}", g.order());

        // Independent order check by closure enumeration.
        let mut elems: HashSet<Vec<u16>> = HashSet::new();
        let mut frontier: Vec<Permutation> = vec![Permutation::identity(14)];
        elems.insert((0..14u16).collect());
        while let Some(x) = frontier.pop() {
            for gen in g.generators() {
                let y = &x * gen;
                let key: Vec<u16> = (0..14).map(|i| y.apply(i) as u16).collect();
                if elems.insert(key) {
                    frontier.push(y);
                }
            }
        }
        println!("   brute-force order: {}", elems.len());

        // Element order histogram.
        let all: Vec<Permutation> = g.elements().unwrap();
        let mut hist: std::collections::BTreeMap<u128, usize> = Default::default();
        for e in &all {
            *hist.entry(e.order()).or_default() += 1;
        }
        println!("   element orders: {hist:?}");

        // Independent complement hunt: PSL(3,2) is generated by a
        // (2,3,7)-pair, so scan all such pairs for order-168 subgroups
        // meeting the core trivially.
        let zero_sum: Vec<Permutation> = {
            let scaffold = pqcover::structure::block_scaffold(7, 2).unwrap();
            scaffold.zero_sum.elements().unwrap()
        };
        let core_elems: Vec<Permutation> = zero_sum
            .into_iter()
            .filter(|e| g.contains(e).unwrap())
            .collect();
        println!("   |core| = {}", core_elems.len());
        let order2: Vec<&Permutation> = all.iter().filter(|e| e.order() == 2).collect();
        let order3: Vec<&Permutation> = all.iter().filter(|e| e.order() == 3).collect();
        println!("   order-2: {}, order-3: {}", order2.len(), order3.len());
        let mut found = 0usize;
        'outer: for t in &order2 {
            for s in &order3 {
                if (*t * *s).order() != 7 {
                    continue;
                }
                let u = PermutationGroup::generated(14, vec![(*t).clone(), (*s).clone()])
                    .unwrap();
                if u.order_u64() == Some(168)
                    && core_elems
                        .iter()
                        .all(|k| k.is_identity() || !u.contains(k).unwrap())
                {
                    found += 1;
                    if found > 3 {
                        break 'outer;
                    }
                }
            }
        }
        println!("   (2,3,7)-generated complements found: {found}");
    }
}
