use berkpatch::berkovich::{cover_with_intersections, BerkPoint, SwissCheese};
use berkpatch::exponent::q;
use berkpatch::padic::ratio;
use berkpatch::patching::{
    factor_matrix, half_window, laurent_split, patch_over_cover, supported_on, Chart, Mat2, PeelOrder, Side,
    Transition,
};
use berkpatch::series::{AnnulusSeries, SeriesContext};
use berkpatch::Exponent;
use num_rational::BigRational;
use proptest::prelude::*;

const P: u64 = 3;
const N: i64 = 64;

fn circle(rho: Exponent) -> SeriesContext {
    SeriesContext::new(P, rho, N).unwrap()
}

fn rho() -> Exponent {
    Exponent::new(q(0, 1), q(1, 4))
}

/// Terms `c * 3^k * t^d` with `k >= 2 + |d|`, so the series has norm at most
/// `3^-2 <= 1/8` on every circle with `|log radius| < 1`.
fn small_series() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-3i64..=3, -4i64..5, 0i64..2), 0..5)
}

fn build(ctx: &SeriesContext, terms: &[(i64, i64, i64)]) -> AnnulusSeries {
    let ts: Vec<(i64, BigRational)> = terms
        .iter()
        .map(|(d, c, extra)| (*d, ratio(*c, 1) * ratio(3i64.pow((2 + d.abs() + extra) as u32), 1)))
        .collect();
    AnnulusSeries::from_terms(ctx, &ts)
}

fn sl2(ctx: &SeriesContext, x: [&[(i64, i64, i64)]; 3]) -> Mat2 {
    Chart::Sl2.to_matrix(&[build(ctx, x[0]), build(ctx, x[1]), build(ctx, x[2])]).unwrap()
}

#[test]
fn factor_identity() {
    let ctx = circle(rho());
    let f = factor_matrix(&Mat2::identity(&ctx)).unwrap();
    assert!(f.g1.is_identity() && f.g2.is_identity());
}

#[test]
fn factor_disc_side_input() {
    let ctx = circle(rho());
    let g = sl2(&ctx, [&[(1, 1, 0), (0, 2, 0)], &[(2, 1, 0)], &[(0, -1, 1)]]);
    let f = factor_matrix(&g).unwrap();
    assert!(f.g2.is_identity());
    assert!(f.g1.distance(&g).is_none_or(|v| v >= half_window(N)));
}

#[test]
fn factor_rejects_far_from_identity() {
    let ctx = circle(rho());
    let g = Chart::Sl2.to_matrix(&[AnnulusSeries::parse(&ctx, "t^-1").unwrap(), AnnulusSeries::zero(&ctx), AnnulusSeries::zero(&ctx)]).unwrap();
    assert!(factor_matrix(&g).is_err());
    let mut bad = Mat2::identity(&ctx);
    bad.e[0][0] = AnnulusSeries::constant(&ctx, &ratio(10, 1));
    assert!(factor_matrix(&bad).is_err());
}

fn chain_cover() -> (berkpatch::berkovich::NiceCover, Exponent, Exponent) {
    let outer = SwissCheese::whole(P).unwrap();
    let r1 = Exponent::new(q(0, 1), q(1, 4));
    let r2 = Exponent::new(q(0, 1), q(-1, 4));
    let cover = cover_with_intersections(&outer, &[BerkPoint::eta(ratio(0, 1), r1), BerkPoint::eta(ratio(0, 1), r2)])
        .unwrap();
    (cover, r1, r2)
}

#[test]
fn patch_identity_transitions() {
    let (cover, r1, r2) = chain_cover();
    let ts = [r1, r2].map(|r| Transition { point: BerkPoint::eta(ratio(0, 1), r), g: Mat2::identity(&circle(r)) });
    let res = patch_over_cover(&cover, &ts, PeelOrder::Last, N).unwrap();
    assert!(res.elements.iter().all(|m| m.is_identity()));
}

#[test]
fn patch_two_pieces() {
    let outer = SwissCheese::whole(P).unwrap();
    let cover = cover_with_intersections(&outer, &[BerkPoint::eta(ratio(0, 1), rho())]).unwrap();
    let ctx = circle(rho());
    let g = sl2(&ctx, [&[(-1, 1, 0), (1, 1, 0)], &[(-2, 2, 0)], &[(0, 1, 0), (-1, 1, 1)]]);
    let res = patch_over_cover(&cover, &[Transition { point: BerkPoint::eta(ratio(0, 1), rho()), g: g.clone() }], PeelOrder::Last, N)
        .unwrap();
    let f = factor_matrix(&g).unwrap();
    assert_eq!(res.parity, vec![0, 1]);
    assert!(res.elements[0].distance(&f.g1).is_none_or(|v| v >= half_window(N)));
    assert!(res.elements[1].distance(&f.g2.adjugate()).is_none_or(|v| v >= half_window(N)));
    assert!(res.verified(half_window(N)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn split_reproduces(terms in prop::collection::vec((-6i64..=6, -20i64..20, 0i64..3), 0..8)) {
        let ctx = circle(rho());
        let c = build(&ctx, &terms);
        let s = laurent_split(&c);
        prop_assert_eq!(s.plus.add(&s.minus), c.clone());
        prop_assert!(s.plus.min_degree().is_none_or(|d| d >= 0));
        prop_assert!(s.minus.max_degree().is_none_or(|d| d < 0));
        let parts = [s.plus.valuation(), s.minus.valuation()].into_iter().flatten().min();
        prop_assert_eq!(parts, c.valuation());
    }

    #[test]
    fn factor_random(x1 in small_series(), x2 in small_series(), x3 in small_series()) {
        let ctx = circle(rho());
        let g = sl2(&ctx, [&x1, &x2, &x3]);
        let f = factor_matrix(&g).unwrap();
        prop_assert!(supported_on(&f.g1, Side::Inner));
        prop_assert!(supported_on(&f.g2, Side::Outer));
        prop_assert!(f.residual_valuation.is_none_or(|v| v >= half_window(N)));
        // Re-multiplication from scratch.
        prop_assert!(f.g1.mul(&f.g2).distance(&g).is_none_or(|v| v >= half_window(N)));
    }

    #[test]
    fn patch_chain(a in small_series(), b in small_series(), c in small_series(), d in small_series()) {
        let (cover, r1, r2) = chain_cover();
        let ts = [
            Transition { point: BerkPoint::eta(ratio(0, 1), r1), g: sl2(&circle(r1), [&a, &b, &c]) },
            Transition { point: BerkPoint::eta(ratio(0, 1), r2), g: sl2(&circle(r2), [&d, &a, &b]) },
        ];
        for order in [PeelOrder::Last, PeelOrder::First] {
            let res = patch_over_cover(&cover, &ts, order, N).unwrap();
            prop_assert_eq!(res.checks.len(), 2);
            prop_assert!(res.verified(half_window(N)), "{:?}", res.checks);
        }
    }
}
