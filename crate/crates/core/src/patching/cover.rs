use num_rational::BigRational;

use crate::berkovich::{parity_function, BerkPoint, NiceCover, SwissCheese};
use crate::error::{Error, Result};
use crate::exponent::{q, Exponent};
use crate::series::SeriesContext;

use super::factor::{factor_oriented, Side};
use super::matrix::Mat2;

/// A group element on the circle through an intersection point, in the
/// coordinate `t = T - c` of the point's center.
#[derive(Clone, Debug)]
pub struct Transition {
    pub point: BerkPoint,
    pub g: Mat2,
}

/// Which leaf is peeled first when the cover is taken apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeelOrder {
    First,
    Last,
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub point: BerkPoint,
    /// The parity 0 and parity 1 elements through the point.
    pub sides: (usize, usize),
    pub residual_valuation: Option<Exponent>,
}

#[derive(Clone, Debug)]
pub struct PatchResult {
    pub elements: Vec<Mat2>,
    pub parity: Vec<u8>,
    pub checks: Vec<IdentityCheck>,
}

impl PatchResult {
    pub fn verified(&self, min_valuation: Exponent) -> bool {
        self.checks.iter().all(|c| c.residual_valuation.is_none_or(|v| v >= min_valuation))
    }
}

struct Edge {
    a: usize,
    b: usize,
    point: usize,
}

fn point_parts(pt: &BerkPoint) -> Result<(BigRational, Exponent)> {
    match pt {
        BerkPoint::Finite { center, log_radius: Some(e) } => Ok((center.clone(), *e)),
        _ => Err(Error::BadPoint(format!("{} is not an intersection point", pt))),
    }
}

/// Finds elements `g_U` with `g_s = g_{U0} g_{U1}^-1` at every intersection
/// point `s`, where `U0` and `U1` are the parity 0 and parity 1 elements
/// through `s`. All intersection points must lie on circles around one
/// center; series are in `t = T - c` for that center.
pub fn patch_over_cover(
    cover: &NiceCover,
    transitions: &[Transition],
    order: PeelOrder,
    window: i64,
) -> Result<PatchResult> {
    let p = cover.prime;
    let n = cover.elements.len();
    let parity = match &cover.parity {
        Some(bits) => bits.clone(),
        None => parity_function(cover)?,
    };
    let points = &cover.intersection_points;
    let center = match points.first() {
        Some(pt) => point_parts(pt)?.0,
        None => BigRational::from_integer(0.into()),
    };
    let mut radii = Vec::new();
    let mut edges = Vec::new();
    for (k, pt) in points.iter().enumerate() {
        let (_, e) = point_parts(pt)?;
        if !pt.same_point(&BerkPoint::eta(center.clone(), e), p) {
            return Err(Error::BadDomain("intersection points are not concentric".into()));
        }
        radii.push(e);
        let owners = cover.elements_containing(pt);
        let [a, b] = owners[..] else {
            return Err(Error::NotNice(format!("{} lies in {} elements", pt, owners.len())));
        };
        edges.push(Edge { a, b, point: k });
    }
    let circle = |e: Exponent| SeriesContext::new(p, e, window);
    let mut g_s = Vec::new();
    for (k, pt) in points.iter().enumerate() {
        let t = transitions
            .iter()
            .find(|t| t.point.same_point(pt, p))
            .ok_or_else(|| Error::BadPoint(format!("no transition at {}", pt)))?;
        g_s.push(t.g.recontext(&circle(radii[k])?));
    }
    if let Some(t) = transitions.iter().find(|t| !points.iter().any(|pt| t.point.same_point(pt, p))) {
        return Err(Error::BadPoint(format!("{} is not an intersection point", t.point)));
    }

    // Each element's functions are tracked on the band of its own circles.
    let mut ctxs = Vec::with_capacity(n);
    for i in 0..n {
        let mine: Vec<Exponent> = edges.iter().filter(|e| e.a == i || e.b == i).map(|e| radii[e.point]).collect();
        let base = circle(mine.first().copied().or(radii.first().copied()).unwrap_or_else(Exponent::zero))?;
        let lo = mine.iter().copied().min().unwrap_or(base.rho_log);
        let hi = mine.iter().copied().max().unwrap_or(base.rho_log);
        ctxs.push(base.with_band(lo, hi));
    }

    // Peel leaves; the remaining elements of a component stay connected.
    let mut alive = vec![true; n];
    let mut peeled: Vec<(usize, usize)> = Vec::new();
    loop {
        let live_edges = |i: usize, alive: &[bool]| -> Vec<usize> {
            (0..edges.len())
                .filter(|k| {
                    let e = &edges[*k];
                    (e.a == i && alive[e.b]) || (e.b == i && alive[e.a])
                })
                .collect()
        };
        let is_leaf = |i: &usize| alive[*i] && live_edges(*i, &alive).len() == 1;
        let leaf = match order {
            PeelOrder::Last => (0..n).rev().find(is_leaf),
            PeelOrder::First => (0..n).find(is_leaf),
        };
        let Some(i) = leaf else { break };
        let k = live_edges(i, &alive)[0];
        alive[i] = false;
        peeled.push((i, k));
    }

    let mut g: Vec<Option<Mat2>> = (0..n).map(|i| alive[i].then(|| Mat2::identity(&ctxs[i]))).collect();
    let mut component: Vec<usize> = (0..n).collect();
    for (leaf, k) in peeled.into_iter().rev() {
        let e = &edges[k];
        let nb = if e.a == leaf { e.b } else { e.a };
        let s_ctx = circle(radii[e.point])?;
        let gn = g[nb].as_ref().expect("neighbour assigned first").recontext(&s_ctx);
        let disc = SwissCheese::disc(p, center.clone(), radii[e.point])?;
        let w_side = if cover.elements[nb].is_subset_of(&disc) { Side::Inner } else { Side::Outer };
        let gs = &g_s[e.point];
        let (leaf_g, push) = if parity[nb] == 0 {
            // g_s = (g_N A) g_L^-1 with g_N^-1 g_s = A g_L^-1.
            let (f1, f2) = factor_oriented(&gn.adjugate().mul(gs), w_side)?;
            (f2.adjugate(), f1)
        } else {
            // g_s = g_L (g_N A)^-1 with g_s g_N = g_L A^-1.
            let (f1, f2) = factor_oriented(&gs.mul(&gn), w_side.other())?;
            (f1, f2.adjugate())
        };
        let root = component[nb];
        for u in 0..n {
            if component[u] == root {
                if let Some(gu) = g[u].take() {
                    g[u] = Some(gu.mul(&push.recontext(&ctxs[u])));
                }
            }
        }
        g[leaf] = Some(leaf_g.recontext(&ctxs[leaf]));
        component[leaf] = root;
    }
    let elements: Vec<Mat2> = g.into_iter().map(|m| m.expect("every element assigned")).collect();

    let mut checks = Vec::new();
    for e in &edges {
        let (u0, u1) = if parity[e.a] == 0 { (e.a, e.b) } else { (e.b, e.a) };
        let s_ctx = circle(radii[e.point])?;
        let prod = elements[u0].recontext(&s_ctx).mul(&elements[u1].recontext(&s_ctx).adjugate());
        checks.push(IdentityCheck {
            point: points[e.point].clone(),
            sides: (u0, u1),
            residual_valuation: prod.sub(&g_s[e.point]).valuation(),
        });
    }
    Ok(PatchResult { elements, parity, checks })
}

/// Half the window, the precision to which identities are asserted.
pub fn half_window(window: i64) -> Exponent {
    Exponent::rational(q(window, 2))
}
