//! Oriented normal multicurves (cycles).
//!
//! Isotopy here is taken relative to the vertices of the triangulation, so
//! normal coordinates are a complete invariant. On one-vertex surfaces this
//! agrees with isotopy in the closed surface for single essential curves.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, RegionData};
pub use crate::arrangement::Side;
use crate::error::CurveError;
use crate::homology::HomologyClass;
use crate::overlay::{build_overlay, Overlay};
use crate::surface::CombinatorialSurface;

/// JSON form: edge weights plus one sign per traced component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticurveData {
    pub weights: Vec<usize>,
    pub orientations: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Region {
    pub id: usize,
    pub euler_char: i64,
    pub genus: i64,
    /// `(component, side)`; `Positive` means the normal points into the region.
    pub boundary: Vec<(usize, Side)>,
}

impl Region {
    /// No boundary on one of the two sides.
    pub fn is_null(&self) -> bool {
        let pos = self.boundary.iter().any(|b| b.1 == Side::Positive);
        let neg = self.boundary.iter().any(|b| b.1 == Side::Negative);
        !(pos && neg)
    }
}

/// Parallel copies of one traced curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParallelFamily {
    /// Normal coordinates of a single copy.
    pub weights: Vec<usize>,
    /// Components in the family, in strand order.
    pub members: Vec<usize>,
    pub orientations: Vec<i8>,
}

/// Isotopy key: weights plus, per family, `(weights, multiplicity, sorted signs)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveKey {
    pub weights: Vec<usize>,
    pub families: Vec<(Vec<usize>, usize, Vec<i8>)>,
}

#[derive(Debug, Clone)]
pub struct OrientedMulticurve {
    surface: Arc<CombinatorialSurface>,
    pub(crate) arr: Arrangement,
    orient: Vec<i8>,
}

impl PartialEq for OrientedMulticurve {
    fn eq(&self, other: &Self) -> bool {
        self.weights() == other.weights() && self.orient == other.orient
    }
}

impl OrientedMulticurve {
    /// Validates weights, traces components and attaches orientations.
    pub fn new(
        surface: Arc<CombinatorialSurface>,
        weights: &[usize],
        orientations: &[i64],
    ) -> Result<Self, CurveError> {
        let arr = Arrangement::from_weights(&surface, weights)?;
        if arr.curves.is_empty() {
            return Err(CurveError::EmptyCurve);
        }
        if orientations.len() != arr.curves.len() {
            return Err(CurveError::OrientationCount { expected: arr.curves.len(), got: orientations.len() });
        }
        let mut orient = Vec::with_capacity(orientations.len());
        for &o in orientations {
            match o {
                1 => orient.push(1),
                -1 => orient.push(-1),
                other => return Err(CurveError::BadOrientation(other)),
            }
        }
        Ok(OrientedMulticurve { surface, arr, orient })
    }

    /// Every component oriented along its canonical direction.
    pub fn positive(surface: Arc<CombinatorialSurface>, weights: &[usize]) -> Result<Self, CurveError> {
        let n = Arrangement::from_weights(&surface, weights)?.curves.len();
        Self::new(surface, weights, &vec![1; n])
    }

    pub fn from_data(surface: Arc<CombinatorialSurface>, data: &MulticurveData) -> Result<Self, CurveError> {
        Self::new(surface, &data.weights, &data.orientations)
    }

    pub fn to_data(&self) -> MulticurveData {
        MulticurveData { weights: self.weights(), orientations: self.orient.iter().map(|&o| o as i64).collect() }
    }

    /// Rebuilds a canonical multicurve from a crossing-free normal
    /// arrangement; `orient[c]` is relative to the traced direction of `c`.
    /// Returns the map from arrangement curves to components.
    pub(crate) fn from_arrangement(
        surface: Arc<CombinatorialSurface>,
        old: &Arrangement,
        orient: &[i8],
    ) -> Result<(Self, Vec<Option<usize>>), CurveError> {
        let w = old.weights();
        let arr = Arrangement::from_weights(&surface, &w)?;
        if arr.curves.is_empty() {
            return Err(CurveError::EmptyCurve);
        }
        let mut new_orient = vec![0i8; arr.curves.len()];
        let mut map = vec![None; old.curves.len()];
        for c in old.live_curves() {
            let st = old.curves[c][0];
            let e = old.strand_edge[st.strand];
            let z = arr.edge_strands[e][old.index(st.strand)];
            let nc = arr.strand_curve[z];
            let same = arr.curves[nc]
                .iter()
                .find(|s| s.strand == z)
                .map(|s| s.enter == st.enter)
                .ok_or_else(|| CurveError::Internal("strand missing after rebuild".into()))?;
            let o = if same { orient[c] } else { -orient[c] };
            if new_orient[nc] != 0 && new_orient[nc] != o {
                return Err(CurveError::Internal("two curves mapped to one component".into()));
            }
            new_orient[nc] = o;
            map[c] = Some(nc);
        }
        if new_orient.iter().any(|&o| o == 0) {
            return Err(CurveError::Internal("component without preimage".into()));
        }
        Ok((OrientedMulticurve { surface, arr, orient: new_orient }, map))
    }

    pub fn surface(&self) -> &Arc<CombinatorialSurface> {
        &self.surface
    }

    pub fn weights(&self) -> Vec<usize> {
        self.arr.weights()
    }

    pub fn total_weight(&self) -> usize {
        self.weights().iter().sum()
    }

    pub fn orientations(&self) -> &[i8] {
        &self.orient
    }

    pub fn num_components(&self) -> usize {
        self.arr.curves.len()
    }

    /// Normal coordinates of component `i`.
    pub fn component_weights(&self, i: usize) -> Vec<usize> {
        self.arr.curve_weights(i)
    }

    pub fn reversed(&self) -> Self {
        OrientedMulticurve {
            surface: self.surface.clone(),
            arr: self.arr.clone(),
            orient: self.orient.iter().map(|o| -o).collect(),
        }
    }

    /// Same curves with new orientation signs.
    pub fn with_orientations(&self, orientations: &[i8]) -> Result<Self, CurveError> {
        if orientations.len() != self.orient.len() {
            return Err(CurveError::OrientationCount { expected: self.orient.len(), got: orientations.len() });
        }
        Ok(OrientedMulticurve { surface: self.surface.clone(), arr: self.arr.clone(), orient: orientations.to_vec() })
    }

    /// Groups components into families of parallel copies.
    pub fn families(&self) -> Vec<ParallelFamily> {
        let mut by_w: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut fams: Vec<ParallelFamily> = Vec::new();
        // strand order on the first edge each curve uses
        let mut order: Vec<(usize, usize, usize)> = (0..self.arr.curves.len())
            .map(|c| {
                let z = self.arr.curves[c].iter().map(|s| s.strand).min_by_key(|&z| (self.arr.strand_edge[z], self.arr.index(z))).unwrap();
                (self.arr.strand_edge[z], self.arr.index(z), c)
            })
            .collect();
        order.sort();
        for (_, _, c) in order {
            let w = self.arr.curve_weights(c);
            let f = *by_w.entry(w.clone()).or_insert_with(|| {
                fams.push(ParallelFamily { weights: w, members: Vec::new(), orientations: Vec::new() });
                fams.len() - 1
            });
            fams[f].members.push(c);
            fams[f].orientations.push(self.orient[c]);
        }
        fams
    }

    pub(crate) fn region_data(&self) -> RegionData {
        self.arr.regions(&self.surface, &self.orient)
    }

    pub fn complementary_regions(&self) -> Vec<Region> {
        regions_from_data(&self.region_data())
    }

    /// True iff no complementary region is a null cobordism.
    pub fn is_reduced(&self) -> bool {
        self.complementary_regions().iter().all(|r| !r.is_null())
    }

    /// Discards null-bounding subcycles until reduced; `None` when nothing
    /// survives, which happens exactly for null-homologous input.
    pub fn reduced_subcycle(&self) -> Option<Self> {
        let mut arr = self.arr.clone();
        loop {
            if arr.live_curves().next().is_none() {
                return None;
            }
            let rd = arr.regions(&self.surface, &self.orient);
            let null = (0..rd.euler.len()).find(|&r| {
                let b = &rd.boundary[r];
                !b.is_empty() && (b.iter().all(|x| x.1 == Side::Positive) || b.iter().all(|x| x.1 == Side::Negative))
            });
            match null {
                None => break,
                Some(r) => {
                    let doomed: Vec<usize> = rd.boundary[r].iter().map(|x| x.0).collect();
                    for c in doomed {
                        if !arr.curves[c].is_empty() {
                            arr.remove_curve(c);
                        }
                    }
                }
            }
        }
        let (m, _) = Self::from_arrangement(self.surface.clone(), &arr, &self.orient).ok()?;
        Some(m)
    }

    /// Class of component `i` in its traced direction, before orientation.
    fn traced_class(&self, i: usize) -> HomologyClass {
        match self.surface.homology_basis() {
            Ok(b) => b.class_of_crossings(&self.arr.curve_crossings(&self.surface, i)),
            Err(_) => HomologyClass(Vec::new()),
        }
    }

    pub fn component_class(&self, i: usize) -> HomologyClass {
        self.traced_class(i).scale(self.orient[i] as i64)
    }

    pub fn homology_class(&self) -> HomologyClass {
        let mut x = HomologyClass::zero(self.surface.genus());
        for i in 0..self.num_components() {
            x = x.add(&self.component_class(i));
        }
        x
    }

    pub fn canonical_key(&self) -> CurveKey {
        let mut families: Vec<(Vec<usize>, usize, Vec<i8>)> = self
            .families()
            .into_iter()
            .map(|f| {
                let mut o = f.orientations.clone();
                o.sort();
                (f.weights, f.members.len(), o)
            })
            .collect();
        families.sort();
        CurveKey { weights: self.weights(), families }
    }

    /// Overlay with `b` after removing all bigons.
    pub fn minimal_position(&self, b: &OrientedMulticurve) -> Result<Overlay, CurveError> {
        if !Arc::ptr_eq(&self.surface, &b.surface) && self.surface.to_gluings() != b.surface.to_gluings() {
            return Err(CurveError::SurfaceMismatch);
        }
        Ok(build_overlay(&self.surface, &self.arr, &self.orient, &b.arr, &b.orient))
    }

    /// Signed count of minimal-position crossings, `sum det(c', b')`.
    pub fn algebraic_intersection(&self, b: &OrientedMulticurve) -> Result<i64, CurveError> {
        Ok(self.minimal_position(b)?.algebraic_intersection())
    }

    pub fn geometric_intersection(&self, b: &OrientedMulticurve) -> Result<usize, CurveError> {
        Ok(self.minimal_position(b)?.num_crossings())
    }

    /// Disjoint union, if the two systems can be made disjoint.
    pub fn disjoint_union(&self, other: &OrientedMulticurve) -> Result<Self, CurveError> {
        let ov = self.minimal_position(other)?;
        if ov.num_crossings() > 0 {
            return Err(CurveError::Internal("curves cannot be made disjoint".into()));
        }
        // the overlay already carries orientation in the traced direction
        let orient = vec![1i8; ov.arr.curves.len()];
        Ok(Self::from_arrangement(self.surface.clone(), &ov.arr, &orient)?.0)
    }
}

pub(crate) fn regions_from_data(rd: &RegionData) -> Vec<Region> {
    (0..rd.euler.len())
        .map(|r| {
            let mut boundary = rd.boundary[r].clone();
            boundary.sort();
            Region { id: r, euler_char: rd.euler[r], genus: rd.genus(r), boundary }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> Arc<CombinatorialSurface> {
        Arc::new(CombinatorialSurface::standard(1))
    }

    #[test]
    fn empty_and_parity() {
        let s = torus();
        assert_eq!(OrientedMulticurve::positive(s.clone(), &[0, 0, 0]).unwrap_err(), CurveError::EmptyCurve);
        assert!(matches!(
            OrientedMulticurve::positive(s.clone(), &[1, 1, 1]),
            Err(CurveError::ParityViolation { .. })
        ));
        assert!(matches!(
            OrientedMulticurve::positive(s, &[3, 1, 0]),
            Err(CurveError::TriangleInequalityViolation { .. })
        ));
    }

    #[test]
    fn simple_torus_curve() {
        let s = torus();
        let c = OrientedMulticurve::positive(s, &[1, 0, 1]).unwrap();
        assert_eq!(c.num_components(), 1);
        let regions = c.complementary_regions();
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].euler_char, 0);
        assert!(c.is_reduced());
        assert!(!c.homology_class().is_zero());
    }

    #[test]
    fn opposite_parallel_copies_are_null() {
        let s = torus();
        let c = OrientedMulticurve::new(s, &[2, 0, 2], &[1, -1]).unwrap();
        assert!(!c.is_reduced());
        assert!(c.homology_class().is_zero());
        assert!(c.reduced_subcycle().is_none());
    }

    #[test]
    fn vertex_link_bounds_a_disk() {
        let s = torus();
        let c = OrientedMulticurve::positive(s, &[2, 2, 2]).unwrap();
        assert_eq!(c.num_components(), 1);
        let regions = c.complementary_regions();
        assert_eq!(regions.len(), 2);
        assert!(regions.iter().any(|r| r.euler_char == 1));
        assert!(!c.is_reduced());
    }

    #[test]
    fn basic_intersections() {
        let s = torus();
        let a = OrientedMulticurve::positive(s.clone(), &[1, 0, 1]).unwrap();
        let b = OrientedMulticurve::positive(s, &[0, 1, 1]).unwrap();
        assert_eq!(a.geometric_intersection(&b).unwrap(), 1);
        assert_eq!(a.algebraic_intersection(&b).unwrap(), a.homology_class().pairing(&b.homology_class()));
        assert_eq!(a.geometric_intersection(&a).unwrap(), 0);
        assert_eq!(a.algebraic_intersection(&a.reversed()).unwrap(), 0);
    }

    fn all_weights(s: &CombinatorialSurface, max_total: usize) -> Vec<Vec<usize>> {
        let ne = s.num_edges();
        let mut out = Vec::new();
        let mut cur = vec![0usize; ne];
        fn rec(s: &CombinatorialSurface, i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == cur.len() {
                if cur.iter().any(|&x| x > 0) && crate::arrangement::check_weights(s, cur).is_ok() {
                    out.push(cur.clone());
                }
                return;
            }
            for w in 0..=left {
                cur[i] = w;
                rec(s, i + 1, left - w, cur, out);
            }
            cur[i] = 0;
        }
        rec(s, 0, max_total, &mut cur, &mut out);
        out
    }

    #[test]
    fn torus_intersections_match_determinant() {
        let s = torus();
        let curves: Vec<OrientedMulticurve> = all_weights(&s, 10)
            .into_iter()
            .filter_map(|w| OrientedMulticurve::positive(s.clone(), &w).ok())
            .filter(|c| c.num_components() == 1 && c.is_reduced())
            .collect();
        assert!(curves.len() > 5);
        for a in &curves {
            for b in &curves {
                let x = a.homology_class();
                let y = b.homology_class();
                let det = x.0[0] * y.0[1] - x.0[1] * y.0[0];
                assert_eq!(a.geometric_intersection(b).unwrap() as i64, det.abs(), "{:?} {:?}", a.weights(), b.weights());
                assert_eq!(a.algebraic_intersection(b).unwrap(), x.pairing(&y));
            }
        }
    }

    #[test]
    fn genus_two_algebraic_matches_pairing() {
        let s = Arc::new(CombinatorialSurface::standard(2));
        let curves: Vec<OrientedMulticurve> = all_weights(&s, 6)
            .into_iter()
            .filter_map(|w| OrientedMulticurve::positive(s.clone(), &w).ok())
            .filter(|c| c.num_components() <= 2)
            .take(60)
            .collect();
        for a in &curves {
            for b in &curves {
                assert_eq!(a.algebraic_intersection(b).unwrap(), a.homology_class().pairing(&b.homology_class()));
            }
        }
    }
}
