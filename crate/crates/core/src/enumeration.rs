//! Finite pieces of the complex of reduced cycles in a fixed class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arrangement::check_weights;
use crate::cobordism::CobordismCycle;
use crate::configuration::EmbeddedConfiguration;
use crate::error::{EnumerationError, SurgeryError};
use crate::homology::HomologyClass;
use crate::multicurve::{CurveKey, OrientedMulticurve};
use crate::rational::Rational;
use crate::surface::{CombinatorialSurface, GluingData};
use crate::surgery::settle;

/// Outcome of an adjacency test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Adjacency {
    Adjacent { witness: CobordismCycle },
    NotAdjacent { reason: String },
    /// the curves could not be placed together; nothing is claimed
    Unknown { reason: String },
}

impl Adjacency {
    pub fn is_adjacent(&self) -> bool {
        matches!(self, Adjacency::Adjacent { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotStats {
    pub vertices: usize,
    pub edges: usize,
    pub dimension: usize,
    pub components: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcomplexSnapshot {
    pub surface: GluingData,
    pub class: HomologyClass,
    pub bound: usize,
    pub vertices: Vec<CurveKey>,
    /// positions in `vertices`, in cyclic order, one list per simplex of
    /// dimension at least 1
    pub simplices: Vec<Vec<usize>>,
    /// vertex sets whose status could not be decided
    pub unknown: Vec<Vec<usize>>,
    pub stats: SnapshotStats,
}

fn check_class(surface: &CombinatorialSurface, x: &HomologyClass) -> Result<(), EnumerationError> {
    let n = 2 * surface.genus();
    if x.0.len() != n {
        return Err(EnumerationError::ClassLength { expected: n, got: x.0.len() });
    }
    if x.is_zero() {
        return Err(EnumerationError::ZeroClass);
    }
    Ok(())
}

/// Every nonzero weight vector with total at most `bound` that passes the
/// triangle and parity conditions.
fn normal_vectors(surface: &CombinatorialSurface, bound: usize) -> Vec<Vec<usize>> {
    let ne = surface.num_edges();
    let nt = surface.num_triangles();
    // triangles become checkable once their last edge is assigned
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for t in 0..nt {
        let last = (0..3).map(|s| surface.edge((t, s))).max().unwrap();
        ready[last].push(t);
    }
    let mut out = Vec::new();
    let mut w = vec![0usize; ne];
    fn rec(
        e: usize,
        left: usize,
        w: &mut Vec<usize>,
        s: &CombinatorialSurface,
        ready: &[Vec<usize>],
        out: &mut Vec<Vec<usize>>,
    ) {
        if e == w.len() {
            if w.iter().any(|&v| v > 0) && check_weights(s, w).is_ok() {
                out.push(w.clone());
            }
            return;
        }
        for v in 0..=left {
            w[e] = v;
            let ok = ready[e].iter().all(|&t| {
                let x: [usize; 3] = std::array::from_fn(|i| w[s.edge((t, i))]);
                (x[0] + x[1] + x[2]) % 2 == 0 && x[0] <= x[1] + x[2] && x[1] <= x[0] + x[2] && x[2] <= x[0] + x[1]
            });
            if ok {
                rec(e + 1, left - v, w, s, ready, out);
            }
        }
        w[e] = 0;
    }
    rec(0, bound, &mut w, surface, &ready, &mut out);
    out
}

/// Reduced cycles in class `x` with total weight at most `bound`, one per
/// isotopy class, sorted by key.
pub fn enumerate_cycles(
    surface: &Arc<CombinatorialSurface>,
    x: &HomologyClass,
    bound: usize,
) -> Result<Vec<OrientedMulticurve>, EnumerationError> {
    check_class(surface, x)?;
    surface.homology_basis()?;
    let mut found: BTreeMap<CurveKey, OrientedMulticurve> = BTreeMap::new();
    for w in normal_vectors(surface, bound) {
        let base = OrientedMulticurve::positive(surface.clone(), &w)?;
        let fams = base.families();
        let fam_class: Vec<HomologyClass> = fams
            .iter()
            .map(|f| f.members.iter().fold(HomologyClass::zero(surface.genus()), |a, &c| a.add(&base.component_class(c))))
            .collect();
        // reduced cycles orient each family of parallel copies the same way
        for mask in 0u64..(1 << fams.len()) {
            let sign = |f: usize| if mask >> f & 1 == 1 { -1i8 } else { 1 };
            let class = (0..fams.len()).fold(HomologyClass::zero(surface.genus()), |a, f| a.add(&fam_class[f].scale(sign(f) as i64)));
            if &class != x {
                continue;
            }
            let mut orient = vec![1i8; base.num_components()];
            for (f, fam) in fams.iter().enumerate() {
                for &c in &fam.members {
                    orient[c] = sign(f);
                }
            }
            let m = base.with_orientations(&orient)?;
            if m.is_reduced() {
                found.insert(m.canonical_key(), m);
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Keys of [`enumerate_cycles`].
pub fn enumerate_vertices(
    surface: &Arc<CombinatorialSurface>,
    x: &HomologyClass,
    bound: usize,
) -> Result<Vec<CurveKey>, EnumerationError> {
    Ok(enumerate_cycles(surface, x, bound)?.iter().map(|m| m.canonical_key()).collect())
}

/// Rebuilds the multicurve behind a key.
pub fn from_key(surface: Arc<CombinatorialSurface>, key: &CurveKey) -> Result<OrientedMulticurve, EnumerationError> {
    let base = OrientedMulticurve::positive(surface, &key.weights)?;
    let mut orient = vec![1i8; base.num_components()];
    let mut used = BTreeSet::new();
    for f in base.families() {
        let (_, _, signs) = key
            .families
            .iter()
            .find(|(w, n, _)| *w == f.weights && *n == f.members.len())
            .ok_or_else(|| EnumerationError::Malformed("key does not match its weights".into()))?;
        used.insert(f.weights.clone());
        for (&c, &o) in f.members.iter().zip(signs) {
            orient[c] = o;
        }
    }
    if used.len() != key.families.len() {
        return Err(EnumerationError::Malformed("key lists families that are not there".into()));
    }
    Ok(base.with_orientations(&orient)?)
}

/// Places `cycles[..]` disjointly in the given cyclic order with equal
/// weights. `Ok(None)` when two of them cannot be made disjoint or the
/// regions do not wire up cyclically.
pub fn realize(cycles: &[&OrientedMulticurve]) -> Result<Option<EmbeddedConfiguration>, SurgeryError> {
    let n = cycles.len();
    let mut cfg = EmbeddedConfiguration::vertex(cycles[0].clone())
        .map_err(|e| SurgeryError::InvalidConfiguration(e.to_string()))?;
    for (j, b) in cycles.iter().enumerate().skip(1) {
        let (placed, ov) = settle(cfg, b)?;
        if ov.num_crossings() > 0 {
            // pairwise this is decisive; beyond that only one placement was tried
            return if j == 1 { Ok(None) } else { Err(SurgeryError::NotDisjoint) };
        }
        let mut cyc: Vec<usize> = vec![0; ov.arr.curves.len()];
        for c in 0..ov.arr.curves.len() {
            cyc[c] = if ov.arr.label[c] == 1 { j } else { placed.cycle_of_component()[ov.component[c]] };
        }
        let orient = vec![1i8; ov.arr.curves.len()];
        let w = vec![Rational::new(1, (j + 1) as i64); j + 1];
        match EmbeddedConfiguration::from_arrangement(placed.surface().clone(), &ov.arr, &orient, &cyc, w) {
            Ok(c) => cfg = c,
            Err(_) => return Ok(None),
        }
    }
    debug_assert_eq!(cfg.num_cycles(), n);
    Ok(Some(cfg))
}

/// Whether `c0` and `c1` span an edge, with the two-level cycle as witness.
pub fn are_adjacent(c0: &OrientedMulticurve, c1: &OrientedMulticurve) -> Result<Adjacency, EnumerationError> {
    if c0.surface().to_gluings() != c1.surface().to_gluings() {
        return Err(EnumerationError::Precondition("curves live on different surfaces".into()));
    }
    let x = c0.homology_class();
    if x.is_zero() || x != c1.homology_class() {
        return Err(EnumerationError::Precondition("curves must share a nonzero class".into()));
    }
    if c0.canonical_key() == c1.canonical_key() {
        return Err(EnumerationError::Precondition("curves are isotopic".into()));
    }
    if !c0.is_reduced() || !c1.is_reduced() {
        return Err(EnumerationError::Precondition("curves must be reduced".into()));
    }
    let g = c0.surface().genus() as i64;
    match realize(&[c0, c1]) {
        Err(e) => Ok(Adjacency::Unknown { reason: e.to_string() }),
        Ok(None) => Ok(Adjacency::NotAdjacent { reason: "no disjoint realization with cyclic wiring".into() }),
        Ok(Some(cfg)) => {
            let witness = cfg.abstract_cycle().map_err(|e| EnumerationError::Precondition(e.to_string()))?;
            match witness.validate(g) {
                Ok(_) => Ok(Adjacency::Adjacent { witness }),
                Err(e) => Ok(Adjacency::NotAdjacent { reason: e.to_string() }),
            }
        }
    }
}

enum Joint {
    Simplex(Vec<usize>),
    No,
    Unknown,
}

/// Tries every cyclic order of `set` (first element fixed).
fn joint_simplex(set: &[usize], cycles: &[OrientedMulticurve], g: i64) -> Joint {
    let mut rest: Vec<usize> = set[1..].to_vec();
    let mut unknown = false;
    let mut any = true;
    while any {
        let mut order = vec![set[0]];
        order.extend(rest.iter().copied());
        let refs: Vec<&OrientedMulticurve> = order.iter().map(|&i| &cycles[i]).collect();
        match realize(&refs) {
            Ok(Some(cfg)) => {
                if cfg.abstract_cycle().map(|a| a.validate(g).is_ok()).unwrap_or(false) {
                    return Joint::Simplex(order);
                }
            }
            Ok(None) => {}
            Err(_) => unknown = true,
        }
        any = next_permutation(&mut rest);
    }
    if unknown {
        Joint::Unknown
    } else {
        Joint::No
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Vertices, edges and higher simplices among reduced cycles of weight at
/// most `bound` in class `x`.
pub fn build_subcomplex(
    surface: &Arc<CombinatorialSurface>,
    x: &HomologyClass,
    bound: usize,
) -> Result<SubcomplexSnapshot, EnumerationError> {
    let cycles = enumerate_cycles(surface, x, bound)?;
    let n = cycles.len();
    let g = surface.genus() as i64;
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    let mut unknown: Vec<Vec<usize>> = Vec::new();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            match are_adjacent(&cycles[i], &cycles[j])? {
                Adjacency::Adjacent { .. } => {
                    adj[i][j] = true;
                    adj[j][i] = true;
                    simplices.push(vec![i, j]);
                }
                Adjacency::NotAdjacent { .. } => {}
                Adjacency::Unknown { .. } => unknown.push(vec![i, j]),
            }
        }
    }
    // grow simplices one vertex at a time, keeping every face listed
    let mut layer: Vec<Vec<usize>> = simplices.iter().map(|s| s.clone()).collect();
    let mut listed: BTreeSet<Vec<usize>> = layer.iter().map(|s| sorted(s)).collect();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for s in &layer {
            let top = *s.iter().max().unwrap();
            for v in top + 1..n {
                if !s.iter().all(|&u| adj[u][v]) {
                    continue;
                }
                let mut set = sorted(s);
                set.push(v);
                let faces_listed = (0..set.len()).all(|k| {
                    let mut f = set.clone();
                    f.remove(k);
                    f.len() < 2 || listed.contains(&f)
                });
                if !faces_listed {
                    continue;
                }
                match joint_simplex(&set, &cycles, g) {
                    Joint::Simplex(order) => next.push(order),
                    Joint::No => {}
                    Joint::Unknown => unknown.push(set),
                }
            }
        }
        for s in &next {
            listed.insert(sorted(s));
        }
        simplices.extend(next.iter().cloned());
        layer = next;
    }
    let dimension = simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0);
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut a: usize) -> usize {
        while uf[a] != a {
            uf[a] = uf[uf[a]];
            a = uf[a];
        }
        a
    }
    for s in simplices.iter().filter(|s| s.len() == 2) {
        let (a, b) = (find(&mut uf, s[0]), find(&mut uf, s[1]));
        uf[a.max(b)] = a.min(b);
    }
    let components = (0..n).filter(|&v| find(&mut uf, v) == v).count();
    let edges = simplices.iter().filter(|s| s.len() == 2).count();
    let stats = SnapshotStats { vertices: n, edges, dimension, components, unknown: unknown.len() };
    Ok(SubcomplexSnapshot {
        surface: surface.to_gluings(),
        class: x.clone(),
        bound,
        vertices: cycles.iter().map(|c| c.canonical_key()).collect(),
        simplices,
        unknown,
        stats,
    })
}

fn sorted(s: &[usize]) -> Vec<usize> {
    let mut v = s.to_vec();
    v.sort();
    v
}

fn key_label(k: &CurveKey) -> String {
    let w: Vec<String> = k.weights.iter().map(|v| v.to_string()).collect();
    let signs: Vec<String> = k
        .families
        .iter()
        .map(|(_, m, o)| {
            let s: String = o.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
            if *m > 1 {
                format!("{m}{s}")
            } else {
                s
            }
        })
        .collect();
    format!("[{}] {}", w.join(","), signs.join(" "))
}

impl SubcomplexSnapshot {
    /// 1-skeleton in DOT.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph subcomplex {\n");
        for (i, k) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{}\"];", key_label(k));
        }
        for e in self.simplices.iter().filter(|e| e.len() == 2) {
            let _ = writeln!(s, "  v{} -- v{};", e[0], e[1]);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, EnumerationError> {
        let snap: SubcomplexSnapshot = serde_json::from_str(text).map_err(|e| EnumerationError::Malformed(e.to_string()))?;
        snap.check()?;
        Ok(snap)
    }

    /// Structural checks: indices in range, faces listed, dimension bound.
    pub fn check(&self) -> Result<(), EnumerationError> {
        let surface = CombinatorialSurface::from_gluings(&self.surface)?;
        let g = surface.genus();
        let n = self.vertices.len();
        let listed: BTreeSet<Vec<usize>> = self.simplices.iter().map(|s| sorted(s)).collect();
        for s in &self.simplices {
            if s.len() < 2 || s.iter().any(|&v| v >= n) {
                return Err(EnumerationError::Malformed(format!("bad simplex {s:?}")));
            }
            if s.len() > 1 && s.len() as i64 - 1 > 2 * g as i64 - 3 {
                return Err(EnumerationError::Malformed(format!("simplex {s:?} exceeds dimension {}", 2 * g as i64 - 3)));
            }
            for k in 0..s.len() {
                let mut f = sorted(s);
                f.remove(k);
                if f.len() >= 2 && !listed.contains(&f) {
                    return Err(EnumerationError::Malformed(format!("face {f:?} of {s:?} missing")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> Arc<CombinatorialSurface> {
        Arc::new(CombinatorialSurface::standard(1))
    }

    #[test]
    fn torus_classes_have_one_vertex() {
        let s = torus();
        let v = enumerate_cycles(&s, &HomologyClass(vec![2, 0]), 12).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].num_components(), 2);
        assert_eq!(v[0].families().len(), 1);
    }

    #[test]
    fn zero_class_is_rejected() {
        assert_eq!(enumerate_vertices(&torus(), &HomologyClass(vec![0, 0]), 5), Err(EnumerationError::ZeroClass));
    }

    #[test]
    fn keys_rebuild() {
        let s = torus();
        for c in enumerate_cycles(&s, &HomologyClass(vec![1, 2]), 12).unwrap() {
            assert_eq!(from_key(s.clone(), &c.canonical_key()).unwrap(), c);
        }
    }

    #[test]
    fn genus2_snapshot_has_edges_only() {
        let s = Arc::new(CombinatorialSurface::standard(2));
        let snap = build_subcomplex(&s, &HomologyClass(vec![1, 0, 0, 0]), 12).unwrap();
        assert!(snap.stats.edges >= 1);
        assert_eq!(snap.stats.dimension, 1);
        assert!(snap.simplices.iter().all(|f| f.len() == 2));
        let back = SubcomplexSnapshot::from_json(&snap.to_json()).unwrap();
        assert_eq!(back, snap);
        let e = &snap.simplices[0];
        let c0 = from_key(s.clone(), &snap.vertices[e[0]]).unwrap();
        let c1 = from_key(s.clone(), &snap.vertices[e[1]]).unwrap();
        match are_adjacent(&c0, &c1).unwrap() {
            Adjacency::Adjacent { witness } => {
                witness.validate(2).unwrap();
                assert_eq!(witness.levels().len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn torus_dot_has_one_node() {
        let snap = build_subcomplex(&torus(), &HomologyClass(vec![1, 1]), 10).unwrap();
        let dot = snap.to_dot();
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(!dot.contains("--"));
    }

    #[test]
    fn adjacency_preconditions() {
        let s = torus();
        let v = enumerate_cycles(&s, &HomologyClass(vec![1, 0]), 8).unwrap();
        assert!(matches!(are_adjacent(&v[0], &v[0]), Err(EnumerationError::Precondition(_))));
    }

    #[test]
    fn permutations_cover_all_orders() {
        let mut v = vec![1, 2, 3];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
    }
}
