//! Surgery of a weighted cycle of cycles along innermost arcs of a base
//! curve, until the configuration is disjoint from the base.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::arrangement::{Arrangement, Side, Step};
use crate::configuration::{EmbeddedConfiguration, EmbeddedData};
use crate::error::SurgeryError;
use crate::multicurve::OrientedMulticurve;
use crate::overlay::{crossings_along, Along, Overlay};
use crate::rational::{self, Rational};
use crate::surface::{CombinatorialSurface, Slot};

/// A point of `c ∩ b`, in order along `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateCrossing {
    pub component: usize,
    pub cycle: usize,
    /// +1 when the normal of `c` points forward along `b`
    pub sign: i8,
}

/// Arc of `b` from crossing `start` to crossing `end` (indices into the
/// crossing list) with both normals pointing into it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InnermostArc {
    pub start: usize,
    pub end: usize,
    pub cycle: usize,
}

#[derive(Debug, Clone)]
pub struct SurgeryState {
    config: EmbeddedConfiguration,
    base: OrientedMulticurve,
    overlay: Overlay,
    along_b: Vec<Along>,
    b_curve: usize,
    crossings: Vec<StateCrossing>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathSegment {
    #[serde(with = "rational::single")]
    pub start: Rational,
    #[serde(with = "rational::single")]
    pub end: Rational,
    /// configuration at the midpoint of the segment
    pub config: EmbeddedData,
    pub k: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub crossings_before: usize,
    pub crossings_after: usize,
    pub innermost_arcs: usize,
    pub surgered_cycles: Vec<usize>,
    #[serde(with = "rational::single")]
    pub duration: Rational,
    pub segments: Vec<PathSegment>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RetractionPath {
    pub steps: Vec<StepRecord>,
    pub initial_crossings: usize,
    #[serde(with = "rational::single")]
    pub duration: Rational,
    pub final_config: EmbeddedData,
    pub star: StarInsertion,
}

#[derive(Debug, Clone, Serialize)]
pub struct StarInsertion {
    pub config: EmbeddedData,
    /// index of `b` in the extended simplex; `None` when `b` was already a vertex
    pub inserted_at: Option<usize>,
    pub kappa_values: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub tail: usize,
    pub head: usize,
    /// crossing indices joined by this edge
    pub crossings: (usize, usize),
    pub cycle: usize,
    #[serde(with = "rational::single")]
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryTree {
    pub num_nodes: usize,
    pub edges: Vec<TreeEdge>,
    /// longest chain of nested arcs
    pub depth: usize,
    /// time to shrink every outward extremal edge at unit speed
    #[serde(with = "rational::single")]
    pub shrink_time: Rational,
    /// sum over nesting heights of the longest edge at that height
    #[serde(with = "rational::single")]
    pub leveled_shrink_time: Rational,
    /// times at which edges vanish, sorted
    #[serde(with = "rational::vec")]
    pub event_times: Vec<Rational>,
}

impl SurgeryTree {
    pub fn total_length(&self) -> Rational {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph tree {\n");
        for i in 0..self.num_nodes {
            let _ = writeln!(s, "  g{i};");
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  g{} -> g{} [label=\"{} c{}\"];",
                e.tail,
                e.head,
                rational::to_string(&e.length),
                e.cycle
            );
        }
        s.push_str("}\n");
        s
    }
}

fn check_base(base: &OrientedMulticurve) -> Result<(), SurgeryError> {
    if base.num_components() != 1 {
        return Err(SurgeryError::MultiComponentBase(base.num_components()));
    }
    if !base.is_reduced() {
        return Err(SurgeryError::BaseNotReduced);
    }
    Ok(())
}

impl SurgeryState {
    pub fn new(config: EmbeddedConfiguration, base: OrientedMulticurve) -> Result<Self, SurgeryError> {
        check_base(&base)?;
        config.validate().map_err(|e| SurgeryError::InvalidConfiguration(e.to_string()))?;
        for i in 0..config.num_cycles() {
            if config.cycle_class(i) != base.homology_class() {
                return Err(SurgeryError::ClassMismatch);
            }
        }
        let (config, overlay) = settle(config, &base)?;
        let b_curve = base_curve(&overlay)?;
        let along_b: Vec<Along> = crossings_along(config.surface(), &overlay.arr)[b_curve].clone();
        let crossings: Vec<StateCrossing> = along_b
            .iter()
            .map(|a| {
                let component = overlay.component[a.other];
                StateCrossing { component, cycle: config.cycle_of_component()[component], sign: if a.right_to_left { 1 } else { -1 } }
            })
            .collect();
        if crossings.iter().map(|x| x.sign as i64).sum::<i64>() != 0 {
            return Err(SurgeryError::Invariant("signed crossing count is not zero".into()));
        }
        Ok(SurgeryState { config, base, overlay, along_b, b_curve, crossings })
    }

    pub fn config(&self) -> &EmbeddedConfiguration {
        &self.config
    }

    pub fn base(&self) -> &OrientedMulticurve {
        &self.base
    }

    pub fn crossings(&self) -> &[StateCrossing] {
        &self.crossings
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn find_innermost(&self) -> Result<Vec<InnermostArc>, SurgeryError> {
        let n = self.crossings.len();
        let mut out = Vec::new();
        for p in 0..n {
            let q = (p + 1) % n;
            if n < 2 || self.crossings[p].sign != 1 || self.crossings[q].sign != -1 {
                continue;
            }
            if self.crossings[p].cycle != self.crossings[q].cycle {
                return Err(SurgeryError::Invariant("innermost arc joins two different cycles".into()));
            }
            out.push(InnermostArc { start: p, end: q, cycle: self.crossings[p].cycle });
        }
        if n > 0 && out.is_empty() {
            return Err(SurgeryError::Invariant("crossings but no innermost arc".into()));
        }
        Ok(out)
    }

    /// Pairs crossings as nested parentheses along `b` and builds the metric tree.
    pub fn build_tree(&self) -> Result<SurgeryTree, SurgeryError> {
        let n = self.crossings.len();
        if n == 0 {
            return Err(SurgeryError::NoCrossings);
        }
        let signs: Vec<i64> = self.crossings.iter().map(|x| x.sign as i64).collect();
        // start just after the lowest prefix sum so no prefix goes negative
        let mut run = 0;
        let mut low = (0, 0);
        for (i, s) in signs.iter().enumerate() {
            run += s;
            if run < low.0 {
                low = (run, i + 1);
            }
        }
        let start = low.1 % n;
        let mut stack: Vec<usize> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut open_pair: Vec<usize> = Vec::new();
        let mut pair_of_open: HashMap<usize, usize> = HashMap::new();
        for off in 0..n {
            let p = (start + off) % n;
            if signs[p] > 0 {
                stack.push(p);
                pair_of_open.insert(p, pairs.len());
                pairs.push((p, usize::MAX));
                parent.push(open_pair.last().copied());
                open_pair.push(pairs.len() - 1);
            } else {
                let o = stack.pop().ok_or_else(|| SurgeryError::Invariant("unbalanced crossings".into()))?;
                let k = pair_of_open[&o];
                pairs[k].1 = p;
                open_pair.pop();
            }
        }
        // gap p lies between crossing p and p + 1
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let union = |a: usize, b: usize, uf: &mut Vec<usize>| {
            let (x, y) = (find(uf, a), find(uf, b));
            if x != y {
                uf[x.max(y)] = x.min(y);
            }
        };
        for &(p, q) in &pairs {
            union((p + n - 1) % n, q, &mut uf);
            union(p, (q + n - 1) % n, &mut uf);
        }
        let mut ids = BTreeMap::new();
        for g in 0..n {
            let r = find(&mut uf, g);
            let next = ids.len();
            ids.entry(r).or_insert(next);
        }
        let weights = self.config.weights();
        let mut edges = Vec::new();
        for &(p, q) in &pairs {
            let cyc = self.crossings[p].cycle;
            edges.push(TreeEdge {
                tail: ids[&find(&mut uf, (p + n - 1) % n)],
                head: ids[&find(&mut uf, p)],
                crossings: (p, q),
                cycle: cyc,
                length: weights[cyc],
            });
        }
        let num_nodes = ids.len();
        if num_nodes != edges.len() + 1 {
            return Err(SurgeryError::Invariant("crossing pairing does not give a tree".into()));
        }
        // heights and finish times, children before parents
        let m = pairs.len();
        let mut height = vec![1usize; m];
        let mut finish: Vec<Rational> = edges.iter().map(|e| e.length).collect();
        let mut child_finish = vec![Rational::zero(); m];
        for k in (0..m).rev() {
            finish[k] = edges[k].length + child_finish[k];
            if let Some(par) = parent[k] {
                height[par] = height[par].max(height[k] + 1);
                if finish[k] > child_finish[par] {
                    child_finish[par] = finish[k];
                }
            }
        }
        let depth = height.iter().copied().max().unwrap_or(0);
        let shrink_time = (0..m).filter(|&k| parent[k].is_none()).map(|k| finish[k]).max().unwrap_or_else(Rational::zero);
        let mut leveled = Rational::zero();
        for h in 1..=depth {
            leveled += (0..m).filter(|&k| height[k] == h).map(|k| edges[k].length).max().unwrap_or_else(Rational::zero);
        }
        let mut event_times: Vec<Rational> = finish.clone();
        event_times.sort();
        event_times.dedup();
        Ok(SurgeryTree { num_nodes, edges, depth, shrink_time, leveled_shrink_time: leveled, event_times })
    }

    /// Surgers every cycle that hosts innermost arcs, all at once.
    pub fn surger_step(&self) -> Result<(SurgeryState, StepRecord), SurgeryError> {
        if self.crossings.is_empty() {
            return Err(SurgeryError::NoCrossings);
        }
        let arcs = self.find_innermost()?;
        let surf = self.config.surface().clone();
        let n_cycles = self.config.num_cycles();
        let cycle_of = self.config.cycle_of_component();
        let mut arr = self.overlay.arr.clone();
        let n_old = arr.curves.len();
        let surgering: BTreeSet<usize> = arcs.iter().map(|a| a.cycle).collect();

        // pushoffs into C_i of every surgered cycle
        let mut copy_of: BTreeMap<usize, usize> = BTreeMap::new();
        for c in 0..n_old {
            if arr.label[c] == 0 && surgering.contains(&cycle_of[self.overlay.component[c]]) {
                let cp = arr.push_parallel(&surf, c, true, 2);
                copy_of.insert(c, cp);
            }
        }
        let cuts: Vec<(Along, Along, bool)> =
            arcs.iter().map(|a| (self.along_b[a.start], self.along_b[a.end], false)).collect();
        let traced = band_surgery(&surf, &mut arr, self.b_curve, &cuts, &copy_of)?;
        let new_curves: Vec<(Vec<Step>, usize)> =
            traced.into_iter().map(|(st, c)| (st, cycle_of[self.overlay.component[c]])).collect();
        // role: Some(cycle) for surgered curves, None for old ones
        let mut new_cycle: Vec<Option<usize>> = vec![None; arr.curves.len()];
        for (steps, host) in new_curves {
            let c = arr.push_curve(steps, 2);
            new_cycle.push(Some(host));
            debug_assert_eq!(c + 1, new_cycle.len());
        }
        arr.remove_curve(self.b_curve);
        arr.normalize(&surf);
        if !arr.crossings(&surf).is_empty() {
            return Err(SurgeryError::Invariant("surgered cycle crosses the configuration".into()));
        }
        let cmap = arr.compact();
        let mut role_new: Vec<Option<usize>> = vec![None; arr.curves.len()];
        let mut role_old: Vec<Option<usize>> = vec![None; arr.curves.len()];
        for (old, m) in cmap.iter().enumerate() {
            if let Some(m) = m {
                if old < n_old {
                    role_old[*m] = Some(self.overlay.component[old]);
                } else if let Some(h) = new_cycle.get(old).copied().flatten() {
                    role_new[*m] = Some(h);
                }
            }
        }
        let cycle_of_old = |c: usize| role_old[c].map(|k| cycle_of[k]);

        // absorb null pieces beyond c'_i, then detect c'_i parallel to c_{i+1}
        loop {
            let orient = vec![1i8; arr.curves.len()];
            let rd = arr.regions(&surf, &orient);
            let doomed = (0..rd.euler.len()).find_map(|r| {
                let b = &rd.boundary[r];
                let all_new_in = !b.is_empty()
                    && b.iter().all(|&(c, s)| s == Side::Positive && role_new[c].is_some() && !arr.curves[c].is_empty());
                all_new_in.then(|| b.iter().map(|x| x.0).collect::<Vec<_>>())
            });
            match doomed {
                Some(list) => {
                    for c in list {
                        arr.remove_curve(c);
                    }
                }
                None => break,
            }
        }
        let orient = vec![1i8; arr.curves.len()];
        let rd = arr.regions(&surf, &orient);
        let mut merged: BTreeSet<usize> = BTreeSet::new();
        for &i in &surgering {
            let next = (i + 1) % n_cycles;
            let mine: Vec<usize> = arr.live_curves().filter(|&c| role_new[c] == Some(i)).collect();
            if mine.is_empty() {
                return Err(SurgeryError::Invariant(format!("surgery on cycle {i} left nothing")));
            }
            let all_annuli = (0..rd.euler.len())
                .filter(|&r| rd.boundary[r].iter().any(|&(c, s)| s == Side::Positive && role_new[c] == Some(i)))
                .all(|r| {
                    let b = &rd.boundary[r];
                    rd.euler[r] == 0
                        && b.len() == 2
                        && b.iter().any(|&(c, s)| s == Side::Negative && cycle_of_old(c) == Some(next) && role_new[c].is_none())
                });
            if all_annuli {
                if surgering.contains(&next) && next != i {
                    return Err(SurgeryError::Invariant("surgered cycle is parallel to a cycle being surgered".into()));
                }
                merged.insert(i);
            }
        }
        for &i in &merged {
            let mine: Vec<usize> = arr.live_curves().filter(|&c| role_new[c] == Some(i)).collect();
            for c in mine {
                arr.remove_curve(c);
            }
        }

        // weight schedule: every t_i drains into t'_i at unit speed
        let weights = self.config.weights().to_vec();
        let mut times: Vec<Rational> = surgering.iter().map(|&i| weights[i]).collect();
        times.sort();
        times.dedup();
        let mut segments = Vec::new();
        let mut prev = Rational::zero();
        let two = Rational::from_integer(2);
        for &t_end in &times {
            let mid = (prev + t_end) / two;
            let cfg = self.snapshot(&surf, &arr, &role_old, &role_new, &surgering, &merged, &weights, mid, prev)?;
            segments.push(PathSegment { start: prev, end: t_end, config: cfg.to_data(), k: cfg.num_cycles() - 1 });
            prev = t_end;
        }
        let after = self.snapshot(&surf, &arr, &role_old, &role_new, &surgering, &merged, &weights, prev, prev)?;
        let next = SurgeryState::new(after, self.base.clone())?;
        if next.num_crossings() >= self.num_crossings() {
            return Err(SurgeryError::Invariant("crossing count did not drop".into()));
        }
        let record = StepRecord {
            crossings_before: self.num_crossings(),
            crossings_after: next.num_crossings(),
            innermost_arcs: arcs.len(),
            surgered_cycles: surgering.iter().copied().collect(),
            duration: prev,
            segments,
        };
        Ok((next, record))
    }

    /// Configuration at time `tau` of the transfer; `since` is the start of
    /// the current segment, used to decide which cycles are exhausted.
    #[allow(clippy::too_many_arguments)]
    fn snapshot(
        &self,
        surf: &Arc<CombinatorialSurface>,
        arr: &Arrangement,
        role_old: &[Option<usize>],
        role_new: &[Option<usize>],
        surgering: &BTreeSet<usize>,
        merged: &BTreeSet<usize>,
        weights: &[Rational],
        tau: Rational,
        since: Rational,
    ) -> Result<EmbeddedConfiguration, SurgeryError> {
        let n = weights.len();
        let cycle_of = self.config.cycle_of_component();
        // slot order: c_0, c'_0, c_1, c'_1, ...
        let mut w: Vec<Rational> = vec![Rational::zero(); 2 * n];
        for i in 0..n {
            if !surgering.contains(&i) {
                w[2 * i] += weights[i];
                continue;
            }
            let moved = if tau < weights[i] { tau } else { weights[i] };
            let alive = since < weights[i];
            if alive {
                w[2 * i] += weights[i] - moved;
            }
            if merged.contains(&i) {
                w[2 * ((i + 1) % n)] += moved;
            } else {
                w[2 * i + 1] += moved;
            }
        }
        let present: Vec<bool> = w.iter().map(|x| !x.is_zero()).collect();
        let mut index = vec![usize::MAX; 2 * n];
        let mut out_w = Vec::new();
        for s in 0..2 * n {
            if present[s] {
                index[s] = out_w.len();
                out_w.push(w[s]);
            }
        }
        let mut sub = arr.clone();
        let mut cyc = vec![usize::MAX; sub.curves.len()];
        for c in 0..sub.curves.len() {
            if sub.curves[c].is_empty() {
                continue;
            }
            let s = match (role_old[c], role_new[c]) {
                (Some(k), _) => 2 * cycle_of[k],
                (None, Some(i)) => 2 * i + 1,
                _ => return Err(SurgeryError::Invariant("curve without a role".into())),
            };
            if present[s] {
                cyc[c] = index[s];
            } else {
                sub.remove_curve(c);
            }
        }
        let orient = vec![1i8; sub.curves.len()];
        let cfg = EmbeddedConfiguration::from_arrangement(surf.clone(), &sub, &orient, &cyc, out_w)
            .map_err(|e| SurgeryError::Invariant(format!("snapshot is not a configuration: {e}")))?;
        cfg.validate().map_err(|e| SurgeryError::Invariant(format!("snapshot is not a simplex: {e}")))?;
        for i in 0..cfg.num_cycles() {
            if !cfg.cycle(i).is_reduced() {
                return Err(SurgeryError::Invariant(format!("snapshot cycle {i} is not reduced")));
            }
        }
        Ok(cfg)
    }

    /// Surgers until the configuration misses `b`, then inserts `b`.
    pub fn retract_to_star(&self) -> Result<RetractionPath, SurgeryError> {
        let initial = self.num_crossings();
        let mut state = self.clone();
        let mut steps = Vec::new();
        let mut duration = Rational::zero();
        while state.num_crossings() > 0 {
            if steps.len() >= initial / 2 {
                return Err(SurgeryError::Invariant("too many surgery steps".into()));
            }
            let (next, rec) = state.surger_step()?;
            duration += rec.duration;
            steps.push(rec);
            state = next;
        }
        let star = star_insertion(&state.config, &state.base)?;
        Ok(RetractionPath { steps, initial_crossings: initial, duration, final_config: state.config.to_data(), star })
    }
}

/// True when curve `c` alone cuts off a disk of the closed surface.
fn bounds_disk(surf: &CombinatorialSurface, arr: &Arrangement, c: usize) -> bool {
    let mut one = arr.clone();
    for k in 0..one.curves.len() {
        if k != c && !one.curves[k].is_empty() {
            one.remove_curve(k);
        }
    }
    let orient = vec![1i8; one.curves.len()];
    one.regions(surf, &orient).euler.contains(&1)
}

fn base_curve(ov: &Overlay) -> Result<usize, SurgeryError> {
    (0..ov.arr.curves.len())
        .find(|&c| ov.arr.label[c] == 1 && !ov.arr.curves[c].is_empty())
        .ok_or_else(|| SurgeryError::Invariant("base missing from overlay".into()))
}

/// Minimal position in the closed surface: besides ordinary bigons, slides
/// curves of the configuration across vertices of the triangulation while an
/// arc of `b` and an arc of the configuration cut off a disk around them.
pub(crate) fn settle(
    mut config: EmbeddedConfiguration,
    base: &OrientedMulticurve,
) -> Result<(EmbeddedConfiguration, Overlay), SurgeryError> {
    let surf = config.surface().clone();
    'outer: loop {
        let ov = config.curves().minimal_position(base)?;
        let all_along = crossings_along(&surf, &ov.arr);
        let b_curves: Vec<usize> = ov.arr.live_curves().filter(|&c| ov.arr.label[c] == 1).collect();
        let candidates = b_curves.iter().flat_map(|&bc| {
            let along = &all_along[bc];
            let n = along.len();
            (0..n).map(move |p| (bc, along[p], along[(p + 1) % n], n))
        });
        for (b_curve, a, q, n) in candidates {
            if n < 2 || a.other != q.other || a.right_to_left == q.right_to_left {
                continue;
            }
            let flip = !a.right_to_left;
            let mut arr = ov.arr.clone();
            let cp = arr.push_parallel(&surf, a.other, !flip, 2);
            let copy_of = BTreeMap::from([(a.other, cp)]);
            let traced = band_surgery(&surf, &mut arr, b_curve, &[(a, q, flip)], &copy_of)?;
            let first_new = arr.curves.len();
            for (st, _) in traced {
                arr.push_curve(st, 2);
            }
            for &bc in &b_curves {
                arr.remove_curve(bc);
            }
            arr.normalize(&surf);
            let Some(d) = (first_new..arr.curves.len())
                .find(|&c| !arr.curves[c].is_empty() && bounds_disk(&surf, &arr, c))
            else {
                continue;
            };
            arr.remove_curve(d);
            arr.remove_curve(a.other);
            let cycle_of = config.cycle_of_component();
            let host = cycle_of[ov.component[a.other]];
            let cyc: Vec<usize> = (0..arr.curves.len())
                .map(|c| if c >= first_new { host } else if arr.label[c] == 0 { cycle_of[ov.component[c]] } else { usize::MAX })
                .collect();
            let orient = vec![1i8; arr.curves.len()];
            config = EmbeddedConfiguration::from_arrangement(surf.clone(), &arr, &orient, &cyc, config.weights().to_vec())
                .map_err(|e| SurgeryError::Invariant(format!("sliding across a vertex broke the configuration: {e}")))?;
            continue 'outer;
        }
        return Ok((config, ov));
    }
}

/// Cuts the pushoffs `copy_of` at the crossings right inside each arc of `b`
/// from `p` to `q` and reconnects them along the arc. Pushoffs sit to the
/// right of their curves when the flag is set. Returns the traced curves with
/// the curve each one came from; the pushoffs are emptied.
fn band_surgery(
    surf: &CombinatorialSurface,
    arr: &mut Arrangement,
    b_curve: usize,
    cuts: &[(Along, Along, bool)],
    copy_of: &BTreeMap<usize, usize>,
) -> Result<Vec<(Vec<Step>, usize)>, SurgeryError> {
    let along = crossings_along(&surf, &arr)[b_curve].clone();
    let nb = along.len();
    if nb == 0 {
        return Err(SurgeryError::NoCrossings);
    }
    let locate = |a: &Along| -> Result<usize, SurgeryError> {
        along
            .iter()
            .position(|x| x.step == a.step && x.other == a.other && x.other_step == a.other_step)
            .ok_or_else(|| SurgeryError::Invariant("crossing lost after pushoff".into()))
    };

    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
    enum Pt {
        Real(Slot, usize),
        Virt(usize),
    }
    // (copy curve, step) -> [(key, in port, out port)]
    let mut attach: HashMap<(usize, usize), Vec<(usize, Pt, Pt)>> = HashMap::new();
    let mut chords: Vec<(Pt, Pt, Option<usize>)> = Vec::new();
    let b_steps = arr.curves[b_curve].clone();
    let n_b = b_steps.len();
    let mut virt = 0;
    for (p0, q0, flip) in cuts {
        let ip = locate(p0)?;
        let iq = locate(q0)?;
        let pp = along[(ip + 1) % nb];
        let qq = along[(iq + nb - 1) % nb];
        if copy_of.get(&p0.other) != Some(&pp.other) || copy_of.get(&q0.other) != Some(&qq.other) {
            return Err(SurgeryError::Invariant("pushoff does not follow its curve along b".into()));
        }
        let d = if pp.step == qq.step && pp.key < qq.key {
            0
        } else {
            let k = (qq.step + n_b - pp.step) % n_b;
            if k == 0 {
                n_b
            } else {
                k
            }
        };
        let (in_p, out_p, in_q, out_q);
        if d == 0 {
            in_p = Pt::Virt(virt);
            out_q = Pt::Virt(virt);
            in_q = Pt::Virt(virt + 1);
            out_p = Pt::Virt(virt + 1);
            virt += 2;
        } else {
            let mut left = Vec::with_capacity(d);
            let mut right = Vec::with_capacity(d);
            let mut slot = Vec::with_capacity(d);
            for j in 1..=d {
                let st = b_steps[(pp.step + j) % n_b];
                let e = arr.strand_edge[st.strand];
                let first = surf.is_first_slot(st.enter);
                let i = arr.index(st.strand);
                let l = arr.add_strand(e, if first { i } else { i + 1 });
                let i = arr.index(st.strand);
                let r = arr.add_strand(e, if first { i + 1 } else { i });
                left.push(l);
                right.push(r);
                slot.push(st.enter);
            }
            if *flip {
                std::mem::swap(&mut left, &mut right);
            }
            for j in 0..d - 1 {
                let exit = surf.partner(slot[j + 1]);
                chords.push((Pt::Real(slot[j], left[j]), Pt::Real(exit, left[j + 1]), None));
                chords.push((Pt::Real(exit, right[j + 1]), Pt::Real(slot[j], right[j]), None));
            }
            let exit1 = surf.partner(slot[0]);
            in_p = Pt::Real(exit1, left[0]);
            out_p = Pt::Real(exit1, right[0]);
            in_q = Pt::Real(slot[d - 1], right[d - 1]);
            out_q = Pt::Real(slot[d - 1], left[d - 1]);
        }
        attach.entry((pp.other, pp.other_step)).or_default().push((pp.other_key, in_p, out_p));
        attach.entry((qq.other, qq.other_step)).or_default().push((qq.other_key, in_q, out_q));
    }
    // rewire every arc of every pushoff
    for (&orig, &cp) in copy_of {
        let steps = arr.curves[cp].clone();
        let n = steps.len();
        for k in 0..n {
            let st = steps[k];
            let nx = steps[(k + 1) % n];
            let mut cur = Pt::Real(st.enter, st.strand);
            if let Some(list) = attach.get_mut(&(cp, k)) {
                list.sort_by_key(|x| x.0);
                for &(_, i, o) in list.iter() {
                    chords.push((cur, i, Some(orig)));
                    cur = o;
                }
            }
            chords.push((cur, Pt::Real(surf.partner(nx.enter), nx.strand), Some(orig)));
        }
    }
    // splice virtual ports
    let mut from_virt: HashMap<usize, usize> = HashMap::new();
    for (k, c) in chords.iter().enumerate() {
        if let Pt::Virt(v) = c.0 {
            from_virt.insert(v, k);
        }
    }
    let mut real: HashMap<(Slot, usize), (Slot, usize)> = HashMap::new();
    let mut chord_host: HashMap<(Slot, usize), usize> = HashMap::new();
    for c in &chords {
        let Pt::Real(s0, z0) = c.0 else { continue };
        let mut end = c.1;
        let mut host = c.2;
        let mut guard = 0;
        while let Pt::Virt(v) = end {
            end = chords[from_virt[&v]].1;
            host = host.or(chords[from_virt[&v]].2);
            guard += 1;
            if guard > chords.len() {
                return Err(SurgeryError::Invariant("virtual ports form a loop".into()));
            }
        }
        let Pt::Real(s1, z1) = end else { unreachable!() };
        if real.insert((s0, z0), (s1, z1)).is_some() {
            return Err(SurgeryError::Invariant("two chords leave one point".into()));
        }
        if let Some(h) = host {
            chord_host.insert((s0, z0), h);
        }
    }
    // trace the surgered curves
    let copies: BTreeSet<usize> = copy_of.values().copied().collect();
    let mut seen: BTreeSet<(Slot, usize)> = BTreeSet::new();
    let mut starts: Vec<(Slot, usize)> = real.keys().copied().collect();
    starts.sort();
    let mut new_curves: Vec<(Vec<Step>, usize)> = Vec::new();
    for s in starts {
        if seen.contains(&s) {
            continue;
        }
        let mut steps = Vec::new();
        let mut cur = s;
        let mut host = None;
        loop {
            if !seen.insert(cur) {
                return Err(SurgeryError::Invariant("surgered curve revisits a point".into()));
            }
            steps.push(Step { strand: cur.1, enter: cur.0 });
            if let Some(&h) = chord_host.get(&cur) {
                host = Some(h);
            }
            let (es, ez) = real[&cur];
            let next = (surf.partner(es), ez);
            if next == s {
                break;
            }
            if !real.contains_key(&next) {
                return Err(SurgeryError::Invariant("surgered curve is not closed".into()));
            }
            cur = next;
        }
        let host = host.ok_or_else(|| SurgeryError::Invariant("band without a host curve".into()))?;
        new_curves.push((steps, host));
    }
    for &cp in &copies {
        arr.curves[cp].clear();
    }
    Ok(new_curves)
}

/// Adds `b` to a configuration it misses, as a new cycle inside the
/// cobordism that contains it.
pub fn star_insertion(config: &EmbeddedConfiguration, b: &OrientedMulticurve) -> Result<StarInsertion, SurgeryError> {
    check_base(b)?;
    let x = b.homology_class();
    for i in 0..config.num_cycles() {
        if config.cycle_class(i) != x {
            return Err(SurgeryError::ClassMismatch);
        }
    }
    let (config, ov) = settle(config.clone(), b)?;
    let config = &config;
    if ov.num_crossings() > 0 {
        return Err(SurgeryError::NotDisjoint);
    }
    let surf = config.surface().clone();
    let arr = &ov.arr;
    let b_curve = base_curve(&ov)?;
    let cycle_of = config.cycle_of_component();
    let n = config.num_cycles();
    let comp = |c: usize| ov.component[c];
    let orient = vec![1i8; arr.curves.len()];
    let rd = arr.regions(&surf, &orient);
    let right = rd.right[b_curve];
    let left = rd.left[b_curve];
    let mut host: Option<usize> = None;
    for &(c, s) in &rd.boundary[right] {
        if c != b_curve && s == Side::Positive {
            host = Some(cycle_of[comp(c)]);
        }
    }
    if host.is_none() {
        for &(c, s) in &rd.boundary[left] {
            if c != b_curve && s == Side::Negative {
                host = Some((cycle_of[comp(c)] + n - 1) % n);
            }
        }
    }
    let i = host.ok_or_else(|| SurgeryError::Invariant("base lies in no cobordism".into()))?;

    // kappa on the regions of c_i ∪ b
    let mut sub = arr.clone();
    for c in 0..sub.curves.len() {
        if c != b_curve && !sub.curves[c].is_empty() && cycle_of[comp(c)] != i {
            sub.remove_curve(c);
        }
    }
    let so = vec![1i8; sub.curves.len()];
    let srd = sub.regions(&surf, &so);
    let nr = srd.euler.len();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nr];
    for c in sub.live_curves() {
        let (pos, neg) = (srd.left[c], srd.right[c]);
        let jump = if c == b_curve { -1 } else { 1 };
        adj[neg].push((pos, jump));
        adj[pos].push((neg, -jump));
    }
    let mut kappa: Vec<Option<i64>> = vec![None; nr];
    for s in 0..nr {
        if kappa[s].is_some() {
            continue;
        }
        kappa[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(r) = q.pop_front() {
            let kr = kappa[r].unwrap();
            for &(t, j) in &adj[r] {
                match kappa[t] {
                    None => {
                        kappa[t] = Some(kr + j);
                        q.push_back(t);
                    }
                    Some(v) if v != kr + j => return Err(SurgeryError::ClassMismatch),
                    _ => {}
                }
            }
        }
    }
    let values: BTreeSet<i64> = kappa.iter().map(|k| k.unwrap()).collect();
    if values.len() > 2 {
        return Err(SurgeryError::KappaOverflow(values.len()));
    }

    let unchanged = StarInsertion { config: config.to_data(), inserted_at: None, kappa_values: values.len(), k: n - 1 };
    let bkey = b.canonical_key();
    if (0..n).any(|j| config.cycle(j).canonical_key() == bkey) {
        return Ok(unchanged);
    }

    // b becomes cycle i + 1 and takes half of t_i
    let mut weights: Vec<Rational> = Vec::with_capacity(n + 1);
    let half = config.weights()[i] / Rational::from_integer(2);
    for j in 0..n {
        weights.push(if j == i { half } else { config.weights()[j] });
        if j == i {
            weights.push(half);
        }
    }
    let shift = |j: usize| if j > i { j + 1 } else { j };
    let cyc: Vec<usize> =
        (0..arr.curves.len()).map(|c| if c == b_curve { i + 1 } else { shift(cycle_of[comp(c)]) }).collect();
    let out = EmbeddedConfiguration::from_arrangement(surf, arr, &orient, &cyc, weights)
        .map_err(|e| SurgeryError::InvalidConfiguration(e.to_string()))?;
    // parallel to a neighbour through a vertex of the triangulation
    let levels = out.abstract_cycle()?;
    let all_annuli = |l: usize| levels.levels()[l].iter().all(|p| p.is_annulus());
    if all_annuli(i) || all_annuli((i + 1) % (n + 1)) {
        return Ok(unchanged);
    }
    let rep = out.validate().map_err(|e| SurgeryError::InvalidConfiguration(e.to_string()))?;
    Ok(StarInsertion { config: out.to_data(), inserted_at: Some(i + 1), kappa_values: values.len(), k: rep.k })
}
