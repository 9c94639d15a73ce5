use berkpatch::berkovich::{
    cover_with_intersections, is_nice_cover, meet, nice_refinement, parity_function, refine_pair, sample_points,
    AffinoidDomain, BerkPoint, Disc, Membership, SwissCheese,
};
use berkpatch::exponent::q;
use berkpatch::padic::ratio;
use berkpatch::Exponent;
use proptest::prelude::*;

const P: u64 = 3;

/// Radii `k/2 + sqrt(2)/10`: type 3 and pairwise distinct for distinct `k`.
fn radius(k: i64) -> Exponent {
    Exponent::new(q(k, 2), q(1, 10))
}

fn domain() -> impl Strategy<Value = SwissCheese> {
    (0u8..4, -6i64..6, -3i64..6, 1i64..4, 0i64..3, 1i64..3).prop_map(|(kind, c, k, width, m, u)| {
        let center = ratio(c, 1);
        match kind {
            0 => SwissCheese::disc(P, center, radius(k)).unwrap(),
            1 => SwissCheese::outside(P, center, radius(k)).unwrap(),
            2 => SwissCheese::annulus(P, center, radius(k + width), radius(k)).unwrap(),
            _ => {
                // A hole centered inside the outer disc.
                let outer = radius(k);
                let level = outer.ceil().max(0) + m;
                let hole_center = ratio(c + u * 3i64.pow(level as u32), 1);
                SwissCheese::new(P, Some(Disc::new(center, outer)), vec![Disc::new(hole_center, radius(k + width))])
                    .unwrap()
            }
        }
    })
}

fn in_union(pt: &BerkPoint, doms: &[SwissCheese]) -> bool {
    doms.iter().any(|d| d.contains(pt))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn refine_pair_partitions(c in domain(), d in domain()) {
        let pieces = refine_pair(&c, &d).unwrap();
        let (rest, last) = pieces.split_at(pieces.len() - 1);
        prop_assert!(last[0].same_set(&d));
        for (i, a) in rest.iter().enumerate() {
            prop_assert!(a.is_subset_of(&c));
            for b in &rest[i + 1..] {
                prop_assert!(meet(a, b).is_none());
            }
            // Each piece touches D in at most one type 3 point.
            if let Some(m) = meet(a, &d) {
                prop_assert!(m.as_point().is_some());
            }
        }
        let grid = sample_points(P, [&c, &d]);
        for pt in &grid {
            let before = c.contains(pt) || d.contains(pt);
            prop_assert_eq!(before, in_union(pt, &pieces), "{}", pt);
        }
    }

    #[test]
    fn refinement_is_nice(doms in prop::collection::vec(domain(), 1..5)) {
        let cover = nice_refinement(&doms).unwrap();
        let grid = sample_points(P, doms.iter().chain(&cover.elements));
        for pt in &grid {
            prop_assert_eq!(in_union(pt, &doms), in_union(pt, &cover.elements), "{}", pt);
        }
        for e in &cover.elements {
            prop_assert!(doms.iter().any(|d| e.is_subset_of(d)));
        }
        for (i, d) in doms.iter().enumerate() {
            let parts: Vec<AffinoidDomain> = cover.domains();
            let report = is_nice_cover(&parts, &AffinoidDomain::connected(d.clone()));
            prop_assert!(report.nice, "input {}: {:?}", i, report.violation);
        }
        for pt in &cover.intersection_points {
            prop_assert_eq!(cover.elements_containing(pt).len(), 2);
        }
        // No point of the grid lies in three elements.
        for pt in &grid {
            prop_assert!(cover.elements_containing(pt).len() <= 2);
        }
        let bits = parity_function(&cover).unwrap();
        for i in 0..bits.len() {
            for j in i + 1..bits.len() {
                if meet(&cover.elements[i], &cover.elements[j]).is_some() {
                    prop_assert_ne!(bits[i], bits[j]);
                }
            }
        }
    }

    #[test]
    fn prescribed_intersections(a in domain(), picks in prop::collection::vec((-6i64..6, -4i64..8), 0..4)) {
        let candidates: Vec<BerkPoint> = picks
            .iter()
            .map(|(c, k)| BerkPoint::eta(ratio(*c, 1), Exponent::new(q(*k, 2), q(1, 5))))
            .filter(|pt| a.membership(pt) == Membership::Inside)
            .collect();
        let cover = cover_with_intersections(&a, &candidates).unwrap();
        for s in &candidates {
            prop_assert!(cover.intersection_points.iter().any(|t| t.same_point(s, P)));
            prop_assert_eq!(cover.elements_containing(s).len(), 2);
        }
        for t in &cover.intersection_points {
            prop_assert!(candidates.iter().any(|s| t.same_point(s, P)));
        }
        let report = is_nice_cover(&cover.domains(), &AffinoidDomain::connected(a.clone()));
        prop_assert!(report.nice, "{:?}", report.violation);
        let bits = parity_function(&cover).unwrap();
        prop_assert_eq!(bits.len(), cover.elements.len());
    }
}
