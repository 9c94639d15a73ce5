use std::fmt;

use crate::error::{Error, Result};

use super::domain::{meet, sample_points, AffinoidDomain, Membership, SwissCheese};
use super::point::{BerkPoint, PointType};

#[derive(Clone, Debug)]
pub struct NiceCover {
    pub prime: u64,
    pub elements: Vec<SwissCheese>,
    pub intersection_points: Vec<BerkPoint>,
    pub parity: Option<Vec<u8>>,
}

impl NiceCover {
    pub fn from_elements(prime: u64, elements: Vec<SwissCheese>) -> Self {
        let intersection_points = intersection_points(&elements);
        NiceCover { prime, elements, intersection_points, parity: None }
    }

    pub fn domains(&self) -> Vec<AffinoidDomain> {
        self.elements.iter().cloned().map(AffinoidDomain::connected).collect()
    }

    /// Indices of the elements containing `pt`.
    pub fn elements_containing(&self, pt: &BerkPoint) -> Vec<usize> {
        (0..self.elements.len()).filter(|i| self.elements[*i].contains(pt)).collect()
    }
}

#[derive(Clone, Debug)]
pub enum Violation {
    NotCovered { point: BerkPoint },
    Disconnected { element: usize },
    BoundaryType { element: usize, point: BerkPoint },
    Overlap { pair: (usize, usize) },
    Containment { pair: (usize, usize) },
}

impl Violation {
    /// The clause of the definition that fails; 0 for the covering condition.
    pub fn clause(&self) -> u8 {
        match self {
            Violation::NotCovered { .. } => 0,
            Violation::Disconnected { .. } | Violation::BoundaryType { .. } => 1,
            Violation::Overlap { .. } => 2,
            Violation::Containment { .. } => 3,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotCovered { point } => write!(f, "{} is not covered", point),
            Violation::Disconnected { element } => write!(f, "element {} is not connected", element),
            Violation::BoundaryType { element, point } => {
                write!(f, "element {} has boundary point {} of {}", element, point, point.kind())
            }
            Violation::Overlap { pair } => {
                write!(f, "elements {} and {} meet outside their common boundary", pair.0, pair.1)
            }
            Violation::Containment { pair } => write!(f, "element {} is contained in element {}", pair.0, pair.1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NiceReport {
    pub nice: bool,
    pub violation: Option<Violation>,
}

/// Checks the three clauses on connected elements, without covering. The
/// boundary type check is skipped when only the pairwise clauses matter.
fn check_clauses(elements: &[SwissCheese], boundary_types: bool) -> Option<Violation> {
    for (i, e) in elements.iter().enumerate().filter(|_| boundary_types) {
        if let Some(b) = e.boundary().into_iter().find(|b| b.kind() != PointType::Three) {
            return Some(Violation::BoundaryType { element: i, point: b });
        }
    }
    for i in 0..elements.len() {
        for j in 0..elements.len() {
            if i != j && elements[i].is_subset_of(&elements[j]) {
                return Some(Violation::Containment { pair: (i, j) });
            }
        }
    }
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            let Some(m) = meet(&elements[i], &elements[j]) else { continue };
            let on_both = m.as_point().is_some_and(|pt| {
                elements[i].membership(&pt) == Membership::OnBoundary
                    && elements[j].membership(&pt) == Membership::OnBoundary
            });
            if !on_both {
                return Some(Violation::Overlap { pair: (i, j) });
            }
        }
    }
    None
}

pub fn is_nice_cover(cover: &[AffinoidDomain], target: &AffinoidDomain) -> NiceReport {
    let mut elements = Vec::new();
    for (i, d) in cover.iter().enumerate() {
        if d.pieces.len() != 1 {
            return NiceReport { nice: false, violation: Some(Violation::Disconnected { element: i }) };
        }
        elements.push(d.pieces[0].clone());
    }
    if let Some(v) = check_clauses(&elements, true) {
        return NiceReport { nice: false, violation: Some(v) };
    }
    if let Some(prime) = target.pieces.first().map(|c| c.prime) {
        let grid = sample_points(prime, elements.iter().chain(&target.pieces));
        if let Some(pt) = grid.into_iter().find(|pt| target.contains(pt) && !elements.iter().any(|e| e.contains(pt))) {
            return NiceReport { nice: false, violation: Some(Violation::NotCovered { point: pt }) };
        }
    }
    NiceReport { nice: true, violation: None }
}

/// Pairwise intersection points of the elements.
pub fn intersection_points(elements: &[SwissCheese]) -> Vec<BerkPoint> {
    let mut out: Vec<BerkPoint> = Vec::new();
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            if let Some(pt) = meet(&elements[i], &elements[j]).and_then(|m| m.as_point()) {
                if !out.iter().any(|q| q.same_point(&pt, elements[i].prime)) {
                    out.push(pt);
                }
            }
        }
    }
    out
}

/// The components of `C` minus the interior of `D` that are not single
/// points, followed by `D`.
pub fn refine_pair(c: &SwissCheese, d: &SwissCheese) -> Result<Vec<SwissCheese>> {
    let mut out = Vec::new();
    for k in d.complement_pieces()? {
        if let Some(piece) = meet(c, &k) {
            if piece.as_point().is_none() {
                out.push(piece);
            }
        }
    }
    out.push(d.clone());
    Ok(out)
}

/// Refines a list of connected domains with type 3 boundaries into a cover
/// of the same union in which two elements meet in at most one type 3
/// point and no point lies in three elements.
pub fn nice_refinement(domains: &[SwissCheese]) -> Result<NiceCover> {
    let prime = domains.first().ok_or(Error::ZeroInput)?.prime;
    if let Some(d) = domains.iter().find(|d| !d.has_type3_boundary()) {
        return Err(Error::NotNice(format!("{} has a boundary point not of type 3", d)));
    }
    let (points, solid): (Vec<&SwissCheese>, Vec<&SwissCheese>) = domains.iter().partition(|d| d.as_point().is_some());
    let mut elements: Vec<SwissCheese> = Vec::new();
    for d in solid {
        let mut next = Vec::new();
        for e in &elements {
            let mut pieces = refine_pair(e, d)?;
            pieces.pop();
            next.extend(pieces);
        }
        next.push(d.clone());
        elements = next;
    }
    for pt_dom in points {
        let pt = pt_dom.as_point().expect("partitioned on as_point");
        if !elements.iter().any(|e| e.contains(&pt)) {
            elements.push(pt_dom.clone());
        }
    }
    Ok(NiceCover::from_elements(prime, elements))
}

/// Splits `A` at the given type 3 points of its interior so that the
/// intersection points of the resulting cover are exactly those points.
pub fn cover_with_intersections(a: &SwissCheese, s: &[BerkPoint]) -> Result<NiceCover> {
    let prime = a.prime;
    let mut elements = vec![a.clone()];
    let mut seen: Vec<BerkPoint> = Vec::new();
    for pt in s {
        let BerkPoint::Finite { center, log_radius: Some(e) } = pt else {
            return Err(Error::BadPoint(format!("{} is not of type 3", pt)));
        };
        if pt.kind() != PointType::Three {
            return Err(Error::BadPoint(format!("{} is not of type 3", pt)));
        }
        if a.membership(pt) != Membership::Inside {
            return Err(Error::BadPoint(format!("{} is not interior to the domain", pt)));
        }
        if seen.iter().any(|q| q.same_point(pt, prime)) {
            continue;
        }
        seen.push(pt.clone());
        let idx = elements
            .iter()
            .position(|el| el.membership(pt) == Membership::Inside)
            .ok_or_else(|| Error::BadPoint(format!("{} lies on an earlier split", pt)))?;
        let el = elements.remove(idx);
        let inner = meet(&el, &SwissCheese::disc(prime, center.clone(), *e)?);
        let outer = meet(&el, &SwissCheese::outside(prime, center.clone(), *e)?);
        let (Some(inner), Some(outer)) = (inner, outer) else {
            return Err(Error::BadPoint(format!("{} does not split its element", pt)));
        };
        elements.insert(idx, outer);
        elements.insert(idx, inner);
    }
    Ok(NiceCover::from_elements(prime, elements))
}

/// Assigns bits so that intersecting elements get different bits, by
/// peeling leaves off each component of the intersection graph.
pub fn parity_function(cover: &NiceCover) -> Result<Vec<u8>> {
    // Intersection points are type 3 by construction of `as_point`; the
    // outer boundary of the covered domain may be of any type.
    if let Some(v) = check_clauses(&cover.elements, false) {
        return Err(Error::NotNice(v.to_string()));
    }
    let n = cover.elements.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if meet(&cover.elements[i], &cover.elements[j]).is_some() {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut alive = vec![true; n];
    let mut bits: Vec<Option<u8>> = vec![None; n];
    let mut peeled: Vec<(usize, Option<usize>)> = Vec::new();
    loop {
        let live_deg = |i: usize, alive: &[bool]| adj[i].iter().filter(|j| alive[**j]).count();
        // A leaf whose removal keeps its component connected; isolated
        // elements are roots.
        let leaf = (0..n).rev().find(|i| alive[*i] && live_deg(*i, &alive) == 1);
        match leaf {
            Some(i) => {
                let nb = adj[i].iter().copied().find(|j| alive[*j]);
                alive[i] = false;
                peeled.push((i, nb));
            }
            None => {
                if let Some(i) = (0..n).find(|i| alive[*i] && live_deg(*i, &alive) > 1) {
                    return Err(Error::NotNice(format!("intersection graph has a cycle through element {}", i)));
                }
                break;
            }
        }
    }
    for i in 0..n {
        if alive[i] {
            bits[i] = Some(0);
        }
    }
    for (i, nb) in peeled.into_iter().rev() {
        let b = nb.and_then(|j| bits[j]).unwrap_or(1);
        bits[i] = Some(1 - b);
    }
    let bits: Vec<u8> = bits.into_iter().map(|b| b.expect("every element is assigned")).collect();
    for i in 0..n {
        if adj[i].iter().any(|j| bits[*j] == bits[i]) {
            return Err(Error::NotNice(format!("parity clash at element {}", i)));
        }
    }
    Ok(bits)
}
