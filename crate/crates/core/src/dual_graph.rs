//! Weighted cycle-of-cycles, its oriented dual graph, and sink/source
//! elimination.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cobordism::{CobordismCycle, CobordismPiece};
use crate::error::{CobordismError, ReductionError};
use crate::rational::{self, Rational};

/// A point in the open simplex of a cycle of cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedConfiguration {
    #[serde(flatten)]
    pub cycle: CobordismCycle,
    #[serde(with = "rational::vec")]
    pub weights: Vec<Rational>,
}

impl WeightedConfiguration {
    pub fn new(cycle: CobordismCycle, weights: Vec<Rational>) -> Result<Self, ReductionError> {
        let c = WeightedConfiguration { cycle, weights };
        c.check()?;
        Ok(c)
    }

    pub fn check(&self) -> Result<(), ReductionError> {
        let n = self.cycle.levels().len();
        if self.weights.len() != n {
            return Err(ReductionError::WeightCount { expected: n, got: self.weights.len() });
        }
        if self.weights.iter().any(|w| *w <= Rational::zero())
            || self.weights.iter().copied().sum::<Rational>() != Rational::one()
        {
            return Err(ReductionError::BadWeights);
        }
        Ok(())
    }

    /// Weight of the cycle containing each circle.
    pub fn circle_weights(&self) -> BTreeMap<String, Rational> {
        let mut m = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            for c in self.cycle.circle_set(i) {
                m.insert(c, *w);
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualNode {
    pub euler: i64,
    /// original piece indices (level-major order) merged into this node
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualEdge {
    pub name: String,
    /// piece on the negative side
    pub tail: usize,
    /// piece the normal points into
    pub head: usize,
    #[serde(with = "rational::single")]
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub nodes: Vec<DualNode>,
    pub edges: Vec<DualEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct VertexClasses {
    pub sinks: Vec<usize>,
    pub sources: Vec<usize>,
    pub interior: Vec<usize>,
}

impl DualGraph {
    pub fn build(config: &WeightedConfiguration) -> DualGraph {
        let mut nodes = Vec::new();
        let mut head = BTreeMap::new();
        let mut tail = BTreeMap::new();
        for p in config.cycle.levels().iter().flatten() {
            let id = nodes.len();
            nodes.push(DualNode { euler: p.euler_characteristic(), members: vec![id] });
            for c in &p.in_circles {
                head.insert(c.clone(), id);
            }
            for c in &p.out_circles {
                tail.insert(c.clone(), id);
            }
        }
        let cw = config.circle_weights();
        let edges = head
            .iter()
            .map(|(name, &h)| DualEdge { name: name.clone(), tail: tail[name], head: h, length: cw[name] })
            .collect();
        DualGraph { nodes, edges }
    }

    /// Loops never count; isolated vertices are interior.
    pub fn classify(&self) -> VertexClasses {
        let mut ins = vec![0usize; self.nodes.len()];
        let mut outs = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            if e.tail != e.head {
                outs[e.tail] += 1;
                ins[e.head] += 1;
            }
        }
        let mut v = VertexClasses::default();
        for i in 0..self.nodes.len() {
            if ins[i] > 0 && outs[i] == 0 {
                v.sinks.push(i);
            } else if outs[i] > 0 && ins[i] == 0 {
                v.sources.push(i);
            } else {
                v.interior.push(i);
            }
        }
        v
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dual {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{i} chi={}\"];", n.euler);
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -> n{} [label=\"{} {}\"];", e.tail, e.head, e.name, rational::to_string(&e.length));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    Sink,
    Source,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionEvent {
    pub phase: Phase,
    #[serde(with = "rational::single")]
    pub time: Rational,
    pub deleted: Vec<String>,
    /// original pieces of every node touched by the amalgamation
    pub merged: Vec<usize>,
    pub sinks_before: usize,
    pub sinks_after: usize,
    pub sources_after: usize,
    #[serde(with = "rational::map")]
    pub lengths: BTreeMap<String, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct EventLog {
    pub events: Vec<ReductionEvent>,
    /// raw length of every input circle when elimination stops (0 if deleted)
    #[serde(with = "rational::map")]
    pub final_lengths: BTreeMap<String, Rational>,
    /// output circles carrying each input circle, from its tail to its head
    pub segments: BTreeMap<String, Vec<String>>,
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

struct Work {
    euler: Vec<i64>,
    uf: Vec<usize>,
    edges: Vec<(String, usize, usize, Rational)>,
}

impl Work {
    fn graph(&mut self) -> (DualGraph, Vec<usize>) {
        let n = self.uf.len();
        let mut reps = Vec::new();
        let mut idx = vec![usize::MAX; n];
        for v in 0..n {
            if find(&mut self.uf, v) == v {
                idx[v] = reps.len();
                reps.push(v);
            }
        }
        let mut nodes: Vec<DualNode> =
            reps.iter().map(|&r| DualNode { euler: self.euler[r], members: Vec::new() }).collect();
        for v in 0..n {
            let r = find(&mut self.uf, v);
            nodes[idx[r]].members.push(v);
        }
        let edges = self
            .edges
            .iter()
            .map(|(name, t, h, l)| DualEdge {
                name: name.clone(),
                tail: idx[find(&mut self.uf, *t)],
                head: idx[find(&mut self.uf, *h)],
                length: *l,
            })
            .collect();
        (DualGraph { nodes, edges }, reps)
    }

    /// One batch of simultaneous shrinking. Returns `None` when the phase is over.
    fn step(&mut self, phase: Phase, clock: &mut Rational) -> Result<Option<ReductionEvent>, ReductionError> {
        let (g, reps) = self.graph();
        let cls = g.classify();
        let targets: BTreeSet<usize> =
            match phase { Phase::Sink => cls.sinks.iter(), Phase::Source => cls.sources.iter() }.map(|&i| reps[i]).collect();
        if targets.is_empty() {
            return Ok(None);
        }
        let sinks_before = cls.sinks.len();
        let mut active = Vec::new();
        for (k, (_, t, h, _)) in self.edges.iter().enumerate() {
            let (t, h) = (find(&mut self.uf, *t), find(&mut self.uf, *h));
            if t == h {
                continue;
            }
            let end = match phase {
                Phase::Sink => h,
                Phase::Source => t,
            };
            if targets.contains(&end) {
                active.push(k);
            }
        }
        let delta = active.iter().map(|&k| self.edges[k].3).min().expect("sink has an edge");
        *clock += delta;
        let mut dead = Vec::new();
        for &k in &active {
            self.edges[k].3 -= delta;
            if self.edges[k].3.is_zero() {
                dead.push(k);
            }
        }
        let mut deleted = Vec::new();
        let mut touched = BTreeSet::new();
        for &k in &dead {
            let (_, t, h, _) = self.edges[k].clone();
            let (a, b) = (find(&mut self.uf, t), find(&mut self.uf, h));
            touched.insert(a);
            touched.insert(b);
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                self.uf[hi] = lo;
                self.euler[lo] += self.euler[hi];
            }
        }
        for k in dead.into_iter().rev() {
            deleted.push(self.edges.remove(k).0);
        }
        deleted.sort();
        if self.edges.is_empty() {
            return Err(ReductionError::VanishedConfiguration);
        }
        // genus of every amalgamated piece must stay a non-negative integer
        let (g2, reps2) = self.graph();
        for (i, node) in g2.nodes.iter().enumerate() {
            let b = g2.edges.iter().filter(|e| e.tail == i).count() + g2.edges.iter().filter(|e| e.head == i).count();
            let twice = 2 - node.euler - b as i64;
            if twice < 0 || twice % 2 != 0 {
                return Err(ReductionError::Invariant(format!("piece {} has chi={} with {b} boundary circles", reps2[i], node.euler)));
            }
        }
        let cls2 = g2.classify();
        let mut merged: Vec<usize> = Vec::new();
        for v in 0..self.uf.len() {
            let r = find(&mut self.uf, v);
            if touched.iter().any(|&t| find(&mut self.uf, t) == r) {
                merged.push(v);
            }
        }
        Ok(Some(ReductionEvent {
            phase,
            time: *clock,
            deleted,
            merged,
            sinks_before,
            sinks_after: cls2.sinks.len(),
            sources_after: cls2.sources.len(),
            lengths: self.edges.iter().map(|e| (e.0.clone(), e.3)).collect(),
        }))
    }
}

/// Eliminates sinks, then sources, by unit-speed shrinking; returns the
/// reduced configuration and the event log.
pub fn reduce(config: &WeightedConfiguration) -> Result<(WeightedConfiguration, EventLog), ReductionError> {
    config.check()?;
    let g = DualGraph::build(config);
    let mut work = Work {
        euler: g.nodes.iter().map(|n| n.euler).collect(),
        uf: (0..g.nodes.len()).collect(),
        edges: g.edges.iter().map(|e| (e.name.clone(), e.tail, e.head, e.length)).collect(),
    };
    let mut log = EventLog::default();
    let mut clock = Rational::zero();
    for phase in [Phase::Sink, Phase::Source] {
        while let Some(ev) = work.step(phase, &mut clock)? {
            if phase == Phase::Sink && ev.sinks_after > ev.sinks_before {
                return Err(ReductionError::Invariant("sink count increased".into()));
            }
            if phase == Phase::Source && ev.sinks_after > 0 {
                return Err(ReductionError::Invariant("source elimination created a sink".into()));
            }
            log.events.push(ev);
            if log.events.len() > g.edges.len() {
                return Err(ReductionError::Invariant("more events than edges".into()));
            }
        }
    }
    let lengths: BTreeMap<String, Rational> = work.edges.iter().map(|e| (e.0.clone(), e.3)).collect();
    log.final_lengths =
        g.edges.iter().map(|e| (e.name.clone(), lengths.get(&e.name).copied().unwrap_or_else(Rational::zero))).collect();
    let (out, mut segments) = rebuild(&mut work)?;
    for e in &g.edges {
        segments.entry(e.name.clone()).or_default();
    }
    log.segments = segments;
    Ok((out, log))
}

/// Reads levels off the potential `R -> R/Z` defined by the edge lengths.
fn rebuild(work: &mut Work) -> Result<(WeightedConfiguration, BTreeMap<String, Vec<String>>), ReductionError> {
    let (g, reps) = work.graph();
    let n = g.nodes.len();
    let one = Rational::one();
    let wrap = |x: Rational| x - x.floor();
    let mut pot: Vec<Option<Rational>> = vec![None; n];
    pot[0] = Some(Rational::zero());
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for e in &g.edges {
            let (w, val) = if e.tail == v {
                (e.head, wrap(pot[v].unwrap() + e.length))
            } else if e.head == v {
                (e.tail, wrap(pot[v].unwrap() - e.length))
            } else {
                continue;
            };
            match pot[w] {
                None => {
                    pot[w] = Some(val);
                    queue.push_back(w);
                }
                Some(p) if p != val => {
                    return Err(ReductionError::Invariant("edge lengths admit no potential".into()));
                }
                _ => {}
            }
        }
    }
    if pot.iter().any(|p| p.is_none()) {
        return Err(ReductionError::Invariant("dual graph is disconnected".into()));
    }
    let pot: Vec<Rational> = pot.into_iter().map(Option::unwrap).collect();
    let mut values: Vec<Rational> = pot.clone();
    values.sort();
    values.dedup();
    let m = values.len();
    let level_of = |p: Rational| values.binary_search(&p).unwrap();
    let gap_into = |j: usize| -> Rational {
        if m == 1 {
            one
        } else {
            wrap(values[j] - values[(j + m - 1) % m])
        }
    };

    let mut used: BTreeSet<String> = g.edges.iter().map(|e| e.name.clone()).collect();
    let fresh = |base: &str, used: &mut BTreeSet<String>| -> String {
        let mut k = 1;
        loop {
            let s = format!("{base}.{k}");
            if used.insert(s.clone()) {
                return s;
            }
            k += 1;
        }
    };
    let mut node_in: Vec<BTreeSet<String>> = vec![BTreeSet::new(); n];
    let mut node_out: Vec<BTreeSet<String>> = vec![BTreeSet::new(); n];
    let mut annuli: Vec<Vec<CobordismPiece>> = vec![Vec::new(); m];
    let mut segments = BTreeMap::new();
    for e in &g.edges {
        let mut j = level_of(pot[e.tail]);
        let mut remaining = e.length;
        let mut names = Vec::new();
        loop {
            let nj = (j + 1) % m;
            remaining -= gap_into(nj);
            if remaining.is_zero() {
                if level_of(pot[e.head]) != nj {
                    return Err(ReductionError::Invariant(format!("edge {} misses its head", e.name)));
                }
                break;
            }
            if remaining < Rational::zero() {
                return Err(ReductionError::Invariant(format!("edge {} overshoots", e.name)));
            }
            names.push(fresh(&e.name, &mut used));
            j = nj;
        }
        names.push(e.name.clone());
        node_out[e.tail].insert(names[0].clone());
        node_in[e.head].insert(names[names.len() - 1].clone());
        let mut lv = level_of(pot[e.tail]);
        for w in names.windows(2) {
            lv = (lv + 1) % m;
            annuli[lv].push(CobordismPiece::new(0, [w[0].clone()], [w[1].clone()]));
        }
        segments.insert(e.name.clone(), names);
    }
    let mut levels: Vec<Vec<CobordismPiece>> = vec![Vec::new(); m];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| reps[v]);
    for v in order {
        let b = (node_in[v].len() + node_out[v].len()) as i64;
        let twice = 2 - g.nodes[v].euler - b;
        if twice < 0 || twice % 2 != 0 {
            return Err(ReductionError::Invariant("non-integral genus while rebuilding".into()));
        }
        levels[level_of(pot[v])].push(CobordismPiece {
            genus: twice / 2,
            in_circles: std::mem::take(&mut node_in[v]),
            out_circles: std::mem::take(&mut node_out[v]),
        });
    }
    for (l, extra) in levels.iter_mut().zip(annuli) {
        l.extend(extra);
    }
    let weights: Vec<Rational> = (0..m).map(gap_into).collect();
    let mut cycle = CobordismCycle::new(levels)?;
    let mut weights = weights;
    // parallel cycles are one vertex: fold all-annuli levels into a neighbour
    while cycle.levels().len() > 1 {
        let Some(j) = cycle.levels().iter().position(|l| l.iter().all(|p| p.is_annulus())) else {
            break;
        };
        let k = cycle.levels().len();
        cycle = cycle.face(j).map_err(|e| match e {
            CobordismError::NegativeGenus { .. } => ReductionError::Invariant(e.to_string()),
            other => other.into(),
        })?;
        let next = (j + 1) % k;
        let wj = weights[j];
        weights[next] += wj;
        weights.remove(j);
    }
    let live: BTreeSet<String> = (0..cycle.levels().len()).flat_map(|i| cycle.circle_set(i)).collect();
    for v in segments.values_mut() {
        v.retain(|s| live.contains(s));
    }
    Ok((WeightedConfiguration::new(cycle, weights)?, segments))
}
