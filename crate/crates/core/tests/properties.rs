mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use cyclecx::cobordism::{CobordismCycle, CobordismPiece};
use cyclecx::multicurve::OrientedMulticurve;
use cyclecx::surface::CombinatorialSurface;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use common::*;

fn renamed(levels: &Levels, rng: &mut StdRng) -> Levels {
    let mut names: Vec<String> = levels.iter().flatten().flat_map(|p| p.in_circles.iter().cloned()).collect();
    names.sort();
    names.dedup();
    let mut shuffled = names.clone();
    shuffled.shuffle(rng);
    let map: BTreeMap<String, String> = names.into_iter().zip(shuffled.into_iter().map(|s| format!("x{s}"))).collect();
    levels
        .iter()
        .map(|l| {
            l.iter()
                .map(|p| CobordismPiece {
                    genus: p.genus,
                    in_circles: p.in_circles.iter().map(|c| map[c].clone()).collect(),
                    out_circles: p.out_circles.iter().map(|c| map[c].clone()).collect(),
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_ignores_names_and_rotation(seed in any::<u64>(), g in 2usize..=4, rot in 0usize..8) {
        let mut rng = StdRng::seed_from_u64(seed);
        let levels = random_simplex(&mut rng, g);
        let mut other = renamed(&levels, &mut rng);
        let n = other.len();
        other.rotate_left(rot % n);
        let a = CobordismCycle::new(levels).unwrap();
        let b = CobordismCycle::new(other).unwrap();
        prop_assert_eq!(a.canonical_form(), b.canonical_form());
    }

    #[test]
    fn faces_of_simplices_are_simplices(seed in any::<u64>(), g in 2usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let levels = random_simplex(&mut rng, g);
        prop_assume!(levels.len() > 1);
        let c = CobordismCycle::new(levels.clone()).unwrap();
        for i in 0..levels.len() {
            let f = c.face(i).unwrap();
            prop_assert_eq!(f.validate(g as i64).unwrap().k, levels.len() - 2);
            prop_assert_eq!(normalized(&f.levels().to_vec()), normalized(&merge_at(&levels, i)));
        }
    }

    #[test]
    fn reversing_negates_class(idx in 0usize..400, g in 1usize..=2) {
        let s = Arc::new(CombinatorialSurface::standard(g));
        let pool = weight_vectors(&s, 6);
        let w = &pool[idx % pool.len()];
        let c = OrientedMulticurve::positive(s, w).unwrap();
        prop_assert_eq!(c.reversed().homology_class(), c.homology_class().scale(-1));
        prop_assert_eq!(c.reversed().canonical_key().weights, c.canonical_key().weights);
    }

    #[test]
    fn intersection_is_symmetric_on_the_torus(i in 0usize..200, j in 0usize..200) {
        let s = Arc::new(CombinatorialSurface::standard(1));
        let pool = weight_vectors(&s, 8);
        let a = OrientedMulticurve::positive(s.clone(), &pool[i % pool.len()]).unwrap();
        let b = OrientedMulticurve::positive(s, &pool[j % pool.len()]).unwrap();
        prop_assert_eq!(a.geometric_intersection(&b).unwrap(), b.geometric_intersection(&a).unwrap());
        prop_assert_eq!(a.algebraic_intersection(&b).unwrap(), -b.algebraic_intersection(&a).unwrap());
        prop_assert_eq!(a.algebraic_intersection(&b).unwrap(), a.homology_class().pairing(&b.homology_class()));
    }
}
