//! Weighted cycles of cycles realized by disjoint curves on a surface.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, Side};
use crate::cobordism::{CobordismCycle, CobordismPiece, ValidationReport};
use crate::dual_graph::{self, EventLog, WeightedConfiguration};
use crate::error::{CobordismError, ReductionError};
use crate::homology::HomologyClass;
use crate::multicurve::{MulticurveData, OrientedMulticurve};
use crate::rational::{self, Rational};
use crate::surface::CombinatorialSurface;

/// JSON form of an embedded configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedData {
    pub curves: MulticurveData,
    pub cycle_of_component: Vec<usize>,
    #[serde(with = "rational::vec")]
    pub weights: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedConfiguration {
    curves: OrientedMulticurve,
    cycle_of: Vec<usize>,
    weights: Vec<Rational>,
}

/// Circle name used for component `k` in abstract views.
pub fn circle_name(k: usize) -> String {
    format!("e{k}")
}

fn circle_index(name: &str) -> Option<usize> {
    name.strip_prefix('e')?.parse().ok()
}

impl EmbeddedConfiguration {
    pub fn new(curves: OrientedMulticurve, cycle_of: Vec<usize>, weights: Vec<Rational>) -> Result<Self, ReductionError> {
        if cycle_of.len() != curves.num_components() {
            return Err(CobordismError::WiringMismatch(format!(
                "{} components but {} cycle labels",
                curves.num_components(),
                cycle_of.len()
            ))
            .into());
        }
        let n = weights.len();
        if let Some(&bad) = cycle_of.iter().find(|&&i| i >= n) {
            return Err(ReductionError::WeightCount { expected: bad + 1, got: n });
        }
        let c = EmbeddedConfiguration { curves, cycle_of, weights };
        WeightedConfiguration::new(c.abstract_cycle()?, c.weights.clone())?;
        Ok(c)
    }

    pub fn from_data(surface: Arc<CombinatorialSurface>, d: &EmbeddedData) -> Result<Self, ReductionError> {
        let curves = OrientedMulticurve::from_data(surface, &d.curves)?;
        Self::new(curves, d.cycle_of_component.clone(), d.weights.clone())
    }

    pub fn to_data(&self) -> EmbeddedData {
        EmbeddedData { curves: self.curves.to_data(), cycle_of_component: self.cycle_of.clone(), weights: self.weights.clone() }
    }

    /// A single reduced cycle with weight 1.
    pub fn vertex(curves: OrientedMulticurve) -> Result<Self, ReductionError> {
        let n = curves.num_components();
        Self::new(curves, vec![0; n], vec![Rational::from_integer(1)])
    }

    pub fn curves(&self) -> &OrientedMulticurve {
        &self.curves
    }

    pub fn surface(&self) -> &Arc<CombinatorialSurface> {
        self.curves.surface()
    }

    pub fn cycle_of_component(&self) -> &[usize] {
        &self.cycle_of
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn num_cycles(&self) -> usize {
        self.weights.len()
    }

    /// Components of cycle `i`.
    pub fn components_of(&self, i: usize) -> Vec<usize> {
        (0..self.cycle_of.len()).filter(|&k| self.cycle_of[k] == i).collect()
    }

    /// Cycle `i` on its own.
    pub fn cycle(&self, i: usize) -> OrientedMulticurve {
        let keep = self.components_of(i);
        let mut arr = self.curves.arr.clone();
        for k in 0..arr.curves.len() {
            if !keep.contains(&k) {
                arr.remove_curve(k);
            }
        }
        OrientedMulticurve::from_arrangement(self.surface().clone(), &arr, self.curves.orientations())
            .expect("subsystem of a valid multicurve")
            .0
    }

    pub fn cycle_class(&self, i: usize) -> HomologyClass {
        let mut x = HomologyClass::zero(self.surface().genus());
        for k in self.components_of(i) {
            x = x.add(&self.curves.component_class(k));
        }
        x
    }

    /// Complementary regions as cobordism pieces, grouped into levels.
    pub fn abstract_cycle(&self) -> Result<CobordismCycle, CobordismError> {
        let n = self.weights.len();
        let rd = self.curves.region_data();
        let mut levels: Vec<Vec<CobordismPiece>> = vec![Vec::new(); n];
        for r in 0..rd.euler.len() {
            let mut ins = Vec::new();
            let mut outs = Vec::new();
            for &(k, side) in &rd.boundary[r] {
                match side {
                    Side::Positive => ins.push(k),
                    Side::Negative => outs.push(k),
                }
            }
            let in_level: Vec<usize> = ins.iter().map(|&k| self.cycle_of[k]).collect();
            let out_level: Vec<usize> = outs.iter().map(|&k| (self.cycle_of[k] + n - 1) % n).collect();
            let mut all = in_level.clone();
            all.extend(out_level.iter().copied());
            all.sort();
            all.dedup();
            if all.len() != 1 {
                return Err(CobordismError::WiringMismatch(format!("region {r} touches cycles out of order")));
            }
            let b = (ins.len() + outs.len()) as i64;
            let twice = 2 - rd.euler[r] - b;
            levels[all[0]].push(CobordismPiece {
                genus: twice / 2,
                in_circles: ins.iter().map(|&k| circle_name(k)).collect(),
                out_circles: outs.iter().map(|&k| circle_name(k)).collect(),
            });
        }
        CobordismCycle::new(levels)
    }

    pub fn to_weighted(&self) -> WeightedConfiguration {
        WeightedConfiguration { cycle: self.abstract_cycle().expect("checked on construction"), weights: self.weights.clone() }
    }

    /// Simplex test: no null pieces, no all-annuli level, Euler count.
    pub fn validate(&self) -> Result<ValidationReport, CobordismError> {
        self.abstract_cycle()?.validate(self.surface().genus() as i64)
    }

    /// Sink/source elimination carried out on the curves themselves.
    pub fn reduce(&self) -> Result<(EmbeddedConfiguration, EventLog), ReductionError> {
        let (out, log) = dual_graph::reduce(&self.to_weighted())?;
        let surf = self.surface().clone();
        let mut arr = self.curves.arr.clone();
        let mut orient: Vec<i8> = self.curves.orientations().to_vec();
        let mut names: Vec<Option<String>> = vec![None; arr.curves.len()];
        for k in 0..self.curves.num_components() {
            let segs = &log.segments[&circle_name(k)];
            if segs.is_empty() {
                arr.remove_curve(k);
                continue;
            }
            names[k] = Some(segs[0].clone());
            let mut prev = k;
            for s in &segs[1..] {
                // copies stack up toward the head, on the normal side
                prev = arr.push_parallel(&surf, prev, orient[k] > 0, 0);
                names.push(Some(s.clone()));
                orient.push(orient[k]);
            }
        }
        let (curves, map) = OrientedMulticurve::from_arrangement(surf, &arr, &orient)?;
        let mut level_of: BTreeMap<String, usize> = BTreeMap::new();
        for i in 0..out.cycle.levels().len() {
            for c in out.cycle.circle_set(i) {
                level_of.insert(c, i);
            }
        }
        let mut cycle_of = vec![usize::MAX; curves.num_components()];
        for (old, new) in map.iter().enumerate() {
            if let (Some(new), Some(name)) = (new, &names[old]) {
                cycle_of[*new] = level_of[name];
            }
        }
        if cycle_of.contains(&usize::MAX) {
            return Err(ReductionError::Invariant("reduced curve without a cycle".into()));
        }
        let res = EmbeddedConfiguration::new(curves, cycle_of, out.weights.clone())?;
        if res.abstract_cycle()?.canonical_form() != out.cycle.canonical_form() {
            return Err(ReductionError::Invariant("embedded and abstract reductions disagree".into()));
        }
        Ok((res, log))
    }

    /// Rebuilds from a crossing-free arrangement whose curve `c` belongs to
    /// cycle `cycle_of[c]` and is oriented by `orient[c]`.
    pub(crate) fn from_arrangement(
        surface: Arc<CombinatorialSurface>,
        arr: &Arrangement,
        orient: &[i8],
        cycle_of: &[usize],
        weights: Vec<Rational>,
    ) -> Result<Self, ReductionError> {
        let (curves, map) = OrientedMulticurve::from_arrangement(surface, arr, orient)?;
        let mut cyc = vec![usize::MAX; curves.num_components()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                cyc[*new] = cycle_of[old];
            }
        }
        Self::new(curves, cyc, weights)
    }
}

/// Component index behind an abstract circle name.
pub fn component_of_circle(name: &str) -> Option<usize> {
    circle_index(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_of_torus() {
        let s = Arc::new(CombinatorialSurface::standard(1));
        let c = OrientedMulticurve::positive(s, &[1, 0, 1]).unwrap();
        let v = EmbeddedConfiguration::vertex(c).unwrap();
        let a = v.abstract_cycle().unwrap();
        assert_eq!(a.levels().len(), 1);
        assert!(a.levels()[0][0].is_annulus());
        let (r, log) = v.reduce().unwrap();
        assert!(log.events.is_empty());
        assert_eq!(r, v);
    }

    #[test]
    fn deleted_copies_leave_no_segments() {
        let s = Arc::new(CombinatorialSurface::standard(1));
        let c = OrientedMulticurve::new(s, &[0, 3, 3], &[1, -1, -1]).unwrap();
        let (r, log) = EmbeddedConfiguration::vertex(c).unwrap().reduce().unwrap();
        assert_eq!(r.curves().num_components(), 1);
        assert_eq!(log.segments.values().filter(|v| v.is_empty()).count(), 2);
        assert!(r.cycle(0).is_reduced());
    }

    #[test]
    fn opposite_copies_vanish() {
        let s = Arc::new(CombinatorialSurface::standard(1));
        let c = OrientedMulticurve::new(s, &[2, 0, 2], &[1, -1]).unwrap();
        let v = EmbeddedConfiguration::vertex(c).unwrap();
        assert_eq!(v.reduce().unwrap_err(), ReductionError::VanishedConfiguration);
    }
}
