use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exponent::{q, Exponent};
use crate::padic::{check_prime, pow_p};

use super::point::{distance, BerkPoint, LogNorm, PointType};

/// A disc `{|T - c| <= p^(-log_radius)}`, or the open disc with `<`.
#[derive(Clone, Debug)]
pub struct Disc {
    pub center: BigRational,
    pub log_radius: Exponent,
}

impl Disc {
    pub fn new(center: BigRational, log_radius: Exponent) -> Self {
        Disc { center, log_radius }
    }

    fn e(&self) -> LogNorm {
        LogNorm::Finite(self.log_radius)
    }

    fn dist(&self, other: &Disc, p: u64) -> LogNorm {
        distance(&self.center, &other.center, p)
    }

    pub fn shilov_point(&self) -> BerkPoint {
        BerkPoint::eta(self.center.clone(), self.log_radius)
    }

    pub fn closed_contains(&self, pt: &BerkPoint, p: u64) -> bool {
        pt.log_norm_at(&self.center, p) >= self.e()
    }

    pub fn open_contains(&self, pt: &BerkPoint, p: u64) -> bool {
        pt.log_norm_at(&self.center, p) > self.e()
    }

    pub fn closed_in_closed(&self, other: &Disc, p: u64) -> bool {
        self.log_radius >= other.log_radius && self.dist(other, p) >= other.e()
    }

    pub fn open_in_open(&self, other: &Disc, p: u64) -> bool {
        self.log_radius >= other.log_radius && self.dist(other, p) > other.e()
    }

    pub fn open_in_closed(&self, other: &Disc, p: u64) -> bool {
        self.log_radius >= other.log_radius && self.dist(other, p) >= other.e()
    }

    pub fn closed_in_open(&self, other: &Disc, p: u64) -> bool {
        self.log_radius > other.log_radius && self.dist(other, p) > other.e()
    }

    pub fn same_closed(&self, other: &Disc, p: u64) -> bool {
        self.closed_in_closed(other, p) && other.closed_in_closed(self, p)
    }

    pub fn same_open(&self, other: &Disc, p: u64) -> bool {
        self.open_in_open(other, p) && other.open_in_open(self, p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    OnBoundary,
    Outside,
}

/// A closed disc (or the whole line) with finitely many disjoint open discs
/// removed. These are the connected affinoid domains of the line with
/// rational centers.
#[derive(Clone, Debug)]
pub struct SwissCheese {
    pub prime: u64,
    pub outer: Option<Disc>,
    pub holes: Vec<Disc>,
}

impl SwissCheese {
    pub fn new(prime: u64, outer: Option<Disc>, holes: Vec<Disc>) -> Result<Self> {
        check_prime(prime)?;
        if let Some(o) = &outer {
            if let Some(h) = holes.iter().find(|h| !h.open_in_closed(o, prime)) {
                return Err(Error::BadDomain(format!("hole around {} is not inside the outer disc", h.center)));
            }
        }
        for (i, a) in holes.iter().enumerate() {
            for b in &holes[i + 1..] {
                if a.open_in_open(b, prime) || b.open_in_open(a, prime) {
                    return Err(Error::BadDomain(format!("holes around {} and {} overlap", a.center, b.center)));
                }
            }
        }
        Ok(SwissCheese { prime, outer, holes })
    }

    pub fn whole(prime: u64) -> Result<Self> {
        SwissCheese::new(prime, None, vec![])
    }

    pub fn disc(prime: u64, center: BigRational, log_radius: Exponent) -> Result<Self> {
        SwissCheese::new(prime, Some(Disc::new(center, log_radius)), vec![])
    }

    /// `{|T - c| >= p^(-log_radius)}`: the line minus an open disc.
    pub fn outside(prime: u64, center: BigRational, log_radius: Exponent) -> Result<Self> {
        SwissCheese::new(prime, None, vec![Disc::new(center, log_radius)])
    }

    /// `{p^(-inner) <= |T - c| <= p^(-outer)}`.
    pub fn annulus(prime: u64, center: BigRational, inner: Exponent, outer: Exponent) -> Result<Self> {
        if inner < outer {
            return Err(Error::BadDomain("inner radius exceeds outer radius".into()));
        }
        SwissCheese::new(prime, Some(Disc::new(center.clone(), outer)), vec![Disc::new(center, inner)])
    }

    pub fn contains(&self, pt: &BerkPoint) -> bool {
        let p = self.prime;
        self.outer.as_ref().is_none_or(|o| o.closed_contains(pt, p)) && !self.holes.iter().any(|h| h.open_contains(pt, p))
    }

    pub fn membership(&self, pt: &BerkPoint) -> Membership {
        if !self.contains(pt) {
            Membership::Outside
        } else if self.boundary().iter().any(|b| b.same_point(pt, self.prime)) {
            Membership::OnBoundary
        } else {
            Membership::Inside
        }
    }

    /// Shilov points of the outer disc and of each hole.
    pub fn boundary(&self) -> Vec<BerkPoint> {
        let mut out: Vec<BerkPoint> = Vec::new();
        for d in self.outer.iter().chain(&self.holes) {
            let pt = d.shilov_point();
            if !out.iter().any(|b| b.same_point(&pt, self.prime)) {
                out.push(pt);
            }
        }
        out
    }

    pub fn has_type3_boundary(&self) -> bool {
        self.boundary().iter().all(|b| b.kind() == PointType::Three)
    }

    /// The single point this domain reduces to, for `D(c, r)` minus the open
    /// disc `D(c, r)` with `r` of type 3.
    pub fn as_point(&self) -> Option<BerkPoint> {
        let o = self.outer.as_ref()?;
        if o.log_radius.is_rational() {
            return None;
        }
        self.holes.iter().any(|h| h.same_open(o, self.prime)).then(|| o.shilov_point())
    }

    pub fn is_whole(&self) -> bool {
        self.outer.is_none() && self.holes.is_empty()
    }

    pub fn same_set(&self, other: &SwissCheese) -> bool {
        let p = self.prime;
        let outers = match (&self.outer, &other.outer) {
            (None, None) => true,
            (Some(a), Some(b)) => a.same_closed(b, p),
            _ => false,
        };
        outers
            && self.holes.len() == other.holes.len()
            && self.holes.iter().all(|h| other.holes.iter().any(|g| h.same_open(g, p)))
    }

    pub fn is_subset_of(&self, other: &SwissCheese) -> bool {
        meet(self, other).is_some_and(|m| m.same_set(self))
    }

    /// The closed pieces of the complement of the interior; each meets this
    /// domain in one boundary point.
    pub fn complement_pieces(&self) -> Result<Vec<SwissCheese>> {
        if !self.has_type3_boundary() {
            return Err(Error::NotNice("boundary point not of type 3".into()));
        }
        let mut out = Vec::new();
        if let Some(o) = &self.outer {
            out.push(SwissCheese::outside(self.prime, o.center.clone(), o.log_radius)?);
        }
        for h in &self.holes {
            out.push(SwissCheese::disc(self.prime, h.center.clone(), h.log_radius)?);
        }
        Ok(out)
    }

    fn discs(&self) -> impl Iterator<Item = &Disc> {
        self.outer.iter().chain(&self.holes)
    }
}

impl fmt::Display for SwissCheese {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outer {
            None => f.write_str("P1")?,
            Some(o) => write!(f, "D[{}, p^-({})]", o.center, o.log_radius)?,
        }
        for h in &self.holes {
            write!(f, " \\ D({}, p^-({}))", h.center, h.log_radius)?;
        }
        Ok(())
    }
}

/// Intersection of two connected domains, `None` when empty.
pub fn meet(a: &SwissCheese, b: &SwissCheese) -> Option<SwissCheese> {
    let p = a.prime;
    let outer = match (&a.outer, &b.outer) {
        (None, o) | (o, None) => o.clone(),
        (Some(x), Some(y)) => {
            if x.closed_in_closed(y, p) {
                Some(x.clone())
            } else if y.closed_in_closed(x, p) {
                Some(y.clone())
            } else {
                return None;
            }
        }
    };
    let mut holes: Vec<Disc> = Vec::new();
    for h in a.holes.iter().chain(&b.holes) {
        if let Some(o) = &outer {
            if o.closed_in_open(h, p) {
                return None;
            }
            if !h.open_in_closed(o, p) {
                continue;
            }
        }
        if holes.iter().any(|g| h.open_in_open(g, p)) {
            continue;
        }
        holes.retain(|g| !g.open_in_open(h, p));
        holes.push(h.clone());
    }
    Some(SwissCheese { prime: p, outer, holes })
}

/// A possibly disconnected affinoid domain given by disjoint pieces.
#[derive(Clone, Debug)]
pub struct AffinoidDomain {
    pub pieces: Vec<SwissCheese>,
}

impl AffinoidDomain {
    pub fn new(pieces: Vec<SwissCheese>) -> Result<Self> {
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                if meet(a, b).is_some() {
                    return Err(Error::BadDomain(format!("pieces {} and {} meet", a, b)));
                }
            }
        }
        Ok(AffinoidDomain { pieces })
    }

    pub fn connected(piece: SwissCheese) -> Self {
        AffinoidDomain { pieces: vec![piece] }
    }

    pub fn membership(&self, pt: &BerkPoint) -> Membership {
        self.pieces
            .iter()
            .map(|c| c.membership(pt))
            .find(|m| *m != Membership::Outside)
            .unwrap_or(Membership::Outside)
    }

    pub fn contains(&self, pt: &BerkPoint) -> bool {
        self.pieces.iter().any(|c| c.contains(pt))
    }

    pub fn boundary(&self) -> Vec<BerkPoint> {
        let mut out: Vec<BerkPoint> = Vec::new();
        for pt in self.pieces.iter().flat_map(|c| c.boundary()) {
            if !out.iter().any(|b| b.same_point(&pt, self.pieces[0].prime)) {
                out.push(pt);
            }
        }
        out
    }
}

pub fn membership(pt: &BerkPoint, dom: &AffinoidDomain) -> Membership {
    dom.membership(pt)
}

pub fn boundary(dom: &AffinoidDomain) -> Vec<BerkPoint> {
    dom.boundary()
}

/// Test points for comparing domains built from the given discs: centers
/// of the discs shifted into neighbouring residue classes at every level,
/// crossed with the critical radii, the midpoints between consecutive
/// ones, radii beyond both ends, and radius zero; plus the point at
/// infinity.
pub fn sample_points<'a>(prime: u64, domains: impl IntoIterator<Item = &'a SwissCheese>) -> Vec<BerkPoint> {
    let mut centers: Vec<BigRational> = Vec::new();
    let mut radii: Vec<Exponent> = Vec::new();
    for d in domains.into_iter().flat_map(|c| c.discs()) {
        if !centers.contains(&d.center) {
            centers.push(d.center.clone());
        }
        if !radii.contains(&d.log_radius) {
            radii.push(d.log_radius);
        }
    }
    if centers.is_empty() {
        centers.push(BigRational::from_integer(0.into()));
    }
    radii.sort();
    let (lo, hi) = match (radii.first(), radii.last()) {
        (Some(a), Some(b)) => (a.floor() - 1, b.ceil() + 1),
        _ => (-1, 1),
    };
    let mut levels: Vec<Exponent> = radii.clone();
    for w in radii.windows(2) {
        levels.push((w[0] + w[1]).scale(q(1, 2)));
    }
    levels.push(Exponent::integer(lo));
    levels.push(Exponent::integer(hi));
    let mut all_centers = centers.clone();
    for c in &centers {
        for k in lo..=hi {
            for unit in [1i64, 2] {
                let shifted = c + pow_p(prime, k) * BigRational::from_integer(unit.into());
                if !all_centers.contains(&shifted) {
                    all_centers.push(shifted);
                }
            }
        }
    }
    let mut out = vec![BerkPoint::Infinity];
    for c in &all_centers {
        out.push(BerkPoint::rigid(c.clone()));
        for e in &levels {
            out.push(BerkPoint::eta(c.clone(), *e));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::ratio;

    fn e(n: i64) -> Exponent {
        Exponent::integer(n)
    }

    fn t3(k: i64) -> Exponent {
        Exponent::new(q(k, 1), q(1, 4))
    }

    fn z() -> BigRational {
        ratio(0, 1)
    }

    #[test]
    fn membership_examples() {
        let d = AffinoidDomain::connected(SwissCheese::disc(3, z(), e(1)).unwrap());
        assert_eq!(membership(&BerkPoint::eta(z(), e(2)), &d), Membership::Inside);
        assert_eq!(membership(&BerkPoint::eta(z(), e(1)), &d), Membership::OnBoundary);
        assert_eq!(membership(&BerkPoint::eta(ratio(1, 1), e(1)), &d), Membership::Outside);
        assert_eq!(membership(&BerkPoint::eta(ratio(3, 1), e(1)), &d), Membership::OnBoundary);
        assert_eq!(membership(&BerkPoint::Infinity, &d), Membership::Outside);
        assert_eq!(membership(&BerkPoint::rigid(ratio(9, 2)), &d), Membership::Inside);
    }

    #[test]
    fn boundary_examples() {
        let b = boundary(&AffinoidDomain::connected(SwissCheese::disc(5, z(), t3(0)).unwrap()));
        assert_eq!(b.len(), 1);
        assert!(b[0].same_point(&BerkPoint::eta(z(), t3(0)), 5));
        let ann = SwissCheese::annulus(5, z(), t3(2), t3(0)).unwrap();
        let b = ann.boundary();
        assert_eq!(b.len(), 2);
        assert!(b[1].same_point(&BerkPoint::eta(z(), t3(2)), 5));
        let out = SwissCheese::outside(5, z(), t3(1)).unwrap();
        assert_eq!(out.boundary().len(), 1);
        assert!(out.contains(&BerkPoint::Infinity));
    }

    #[test]
    fn rejects_malformed() {
        assert!(SwissCheese::new(3, Some(Disc::new(z(), e(1))), vec![Disc::new(ratio(1, 1), e(2))]).is_err());
        assert!(SwissCheese::new(3, None, vec![Disc::new(z(), e(1)), Disc::new(ratio(9, 1), e(2))]).is_err());
        assert!(SwissCheese::annulus(3, z(), e(0), e(1)).is_err());
    }

    #[test]
    fn meets() {
        let a = SwissCheese::disc(3, z(), t3(0)).unwrap();
        let b = SwissCheese::outside(3, z(), t3(0)).unwrap();
        let m = meet(&a, &b).unwrap();
        assert!(m.as_point().unwrap().same_point(&BerkPoint::eta(z(), t3(0)), 3));
        let c = SwissCheese::disc(3, ratio(1, 1), t3(1)).unwrap();
        assert!(meet(&a, &c).is_none());
        let d = SwissCheese::disc(3, ratio(1, 1), t3(-1)).unwrap();
        assert!(meet(&a, &d).unwrap().same_set(&a));
        assert!(a.is_subset_of(&d) && !d.is_subset_of(&a));
        // A hole around 1/3 lies outside D(0, 1).
        let holed = SwissCheese::new(3, None, vec![Disc::new(ratio(1, 3), t3(-1))]).unwrap();
        assert!(meet(&a, &holed).unwrap().same_set(&a));
        assert!(meet(&SwissCheese::outside(3, z(), t3(-2)).unwrap(), &a).is_none());
    }

    #[test]
    fn type2_circle_is_not_a_point() {
        let a = SwissCheese::disc(3, z(), e(0)).unwrap();
        let b = SwissCheese::outside(3, z(), e(0)).unwrap();
        let m = meet(&a, &b).unwrap();
        assert!(m.as_point().is_none());
        assert!(m.contains(&BerkPoint::rigid(ratio(1, 1))));
    }
}
