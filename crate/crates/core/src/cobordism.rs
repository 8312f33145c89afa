//! Abstract cycles of cobordisms.
//!
//! A cycle with `k + 1` levels models a `k`-simplex. Level `i` has in-circles
//! `c_i` and out-circles `c_{i+1}`, indices mod `k + 1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::CobordismError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CobordismPiece {
    pub genus: i64,
    #[serde(rename = "in")]
    pub in_circles: BTreeSet<String>,
    #[serde(rename = "out")]
    pub out_circles: BTreeSet<String>,
}

impl CobordismPiece {
    pub fn new<I: IntoIterator<Item = S>, O: IntoIterator<Item = S>, S: Into<String>>(genus: i64, ins: I, outs: O) -> Self {
        CobordismPiece {
            genus,
            in_circles: ins.into_iter().map(Into::into).collect(),
            out_circles: outs.into_iter().map(Into::into).collect(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus - self.in_circles.len() as i64 - self.out_circles.len() as i64
    }

    pub fn is_null(&self) -> bool {
        self.in_circles.is_empty() || self.out_circles.is_empty()
    }

    pub fn is_annulus(&self) -> bool {
        self.genus == 0 && self.in_circles.len() == 1 && self.out_circles.len() == 1
    }

    pub fn is_pants(&self) -> bool {
        self.euler_characteristic() == -1 && !self.is_null()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CycleData", into = "CycleData")]
pub struct CobordismCycle {
    levels: Vec<Vec<CobordismPiece>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleData {
    pub levels: Vec<Vec<CobordismPiece>>,
}

impl TryFrom<CycleData> for CobordismCycle {
    type Error = CobordismError;
    fn try_from(d: CycleData) -> Result<Self, Self::Error> {
        CobordismCycle::new(d.levels)
    }
}

impl From<CobordismCycle> for CycleData {
    fn from(c: CobordismCycle) -> Self {
        CycleData { levels: c.levels }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub k: usize,
    pub genus: i64,
    pub level_euler: Vec<i64>,
    pub max_dimension: i64,
    pub within_bound: bool,
}

fn union_set(pieces: &[CobordismPiece], ins: bool) -> Result<BTreeSet<String>, String> {
    let mut s = BTreeSet::new();
    for p in pieces {
        for c in if ins { &p.in_circles } else { &p.out_circles } {
            if !s.insert(c.clone()) {
                return Err(format!("circle {c} used twice on one side of a level"));
            }
        }
    }
    Ok(s)
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

/// Glues `first` to `second` along `shared`.
pub fn compose(
    first: &[CobordismPiece],
    second: &[CobordismPiece],
    shared: &BTreeSet<String>,
) -> Result<Vec<CobordismPiece>, CobordismError> {
    let outs = union_set(first, false).map_err(CobordismError::WiringMismatch)?;
    let ins = union_set(second, true).map_err(CobordismError::WiringMismatch)?;
    if &outs != shared || &ins != shared {
        return Err(CobordismError::WiringMismatch("shared circles differ from the glued boundaries".into()));
    }
    let n1 = first.len();
    let all: Vec<&CobordismPiece> = first.iter().chain(second.iter()).collect();
    let mut uf: Vec<usize> = (0..all.len()).collect();
    let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, p) in first.iter().enumerate() {
        for c in &p.out_circles {
            owner.insert(c, i);
        }
    }
    for (j, p) in second.iter().enumerate() {
        for c in &p.in_circles {
            let a = find(&mut uf, owner[c.as_str()]);
            let b = find(&mut uf, n1 + j);
            uf[a.max(b)] = a.min(b);
        }
    }
    let mut comps: BTreeMap<usize, (i64, BTreeSet<String>, BTreeSet<String>)> = BTreeMap::new();
    for (i, p) in all.iter().enumerate() {
        let r = find(&mut uf, i);
        let e = comps.entry(r).or_default();
        e.0 += p.euler_characteristic();
        if i < n1 {
            e.1.extend(p.in_circles.iter().cloned());
        } else {
            e.2.extend(p.out_circles.iter().cloned());
        }
    }
    let mut out = Vec::new();
    for (_, (chi, ins, outs)) in comps {
        let boundary = ins.len() + outs.len();
        let twice = 2 - chi - boundary as i64;
        if twice < 0 || twice % 2 != 0 {
            return Err(CobordismError::NegativeGenus { chi, boundary });
        }
        out.push(CobordismPiece { genus: twice / 2, in_circles: ins, out_circles: outs });
    }
    Ok(out)
}

/// Logical circle of a single piece's pants chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Slot {
    In(usize),
    Out(usize),
    Mid(usize),
}

struct Schedule {
    /// boundary j lists the circles between stage j-1 and stage j
    boundaries: Vec<Vec<Slot>>,
    /// stage j: (genus, ins, outs); circles not listed are carried
    pants: Vec<(Vec<Slot>, Vec<Slot>)>,
}

fn schedule(piece: &CobordismPiece) -> Result<Schedule, CobordismError> {
    if piece.is_null() {
        return Err(CobordismError::NullInput);
    }
    if piece.is_annulus() {
        return Err(CobordismError::AnnulusInput);
    }
    let (m, n, h) = (piece.in_circles.len(), piece.out_circles.len(), piece.genus as usize);
    let mut mid = 0;
    let mut fresh = || {
        mid += 1;
        Slot::Mid(mid - 1)
    };
    let mut cur: Vec<Slot> = (0..m).map(Slot::In).collect();
    let mut boundaries = vec![cur.clone()];
    let mut pants = Vec::new();
    let mut step = |cur: &mut Vec<Slot>, take: usize, give: usize, fresh: &mut dyn FnMut() -> Slot| {
        let ins: Vec<Slot> = cur.drain(0..take).collect();
        let outs: Vec<Slot> = (0..give).map(|_| fresh()).collect();
        let mut next = outs.clone();
        next.extend(cur.iter().map(|_| fresh()));
        pants.push((ins, outs));
        *cur = next;
        boundaries.push(cur.clone());
    };
    for _ in 1..m {
        step(&mut cur, 2, 1, &mut fresh);
    }
    for _ in 0..h {
        step(&mut cur, 1, 2, &mut fresh);
        step(&mut cur, 2, 1, &mut fresh);
    }
    for _ in 1..n {
        step(&mut cur, 1, 2, &mut fresh);
    }
    // final boundary is the out-circles
    let last: Vec<Slot> = boundaries.last().unwrap().clone();
    let rename: BTreeMap<Slot, Slot> = last.iter().enumerate().map(|(k, &s)| (s, Slot::Out(k))).collect();
    let fix = |v: &mut Vec<Slot>| {
        for s in v.iter_mut() {
            if let Some(&r) = rename.get(s) {
                *s = r;
            }
        }
    };
    for b in boundaries.iter_mut() {
        fix(b);
    }
    for (i, o) in pants.iter_mut() {
        fix(i);
        fix(o);
    }
    Ok(Schedule { boundaries, pants })
}

/// Splits a piece into a chain of levels, one pants each, carrying the other
/// circles as annuli. Intermediate circles get fresh names.
pub fn pants_schedule(piece: &CobordismPiece) -> Result<Vec<Vec<CobordismPiece>>, CobordismError> {
    let sch = schedule(piece)?;
    let ins: Vec<&String> = piece.in_circles.iter().collect();
    let outs: Vec<&String> = piece.out_circles.iter().collect();
    let mut used: BTreeSet<String> = piece.in_circles.union(&piece.out_circles).cloned().collect();
    let mut names: BTreeMap<Slot, String> = BTreeMap::new();
    let mut name = |s: Slot, used: &mut BTreeSet<String>| -> String {
        match s {
            Slot::In(k) => ins[k].clone(),
            Slot::Out(k) => outs[k].clone(),
            Slot::Mid(_) => names.entry(s).or_insert_with(|| fresh_name(used)).clone(),
        }
    };
    let mut levels = Vec::new();
    for (j, (pi, po)) in sch.pants.iter().enumerate() {
        let here = &sch.boundaries[j];
        let next = &sch.boundaries[j + 1];
        let mut level = vec![CobordismPiece {
            genus: 0,
            in_circles: pi.iter().map(|&s| name(s, &mut used)).collect(),
            out_circles: po.iter().map(|&s| name(s, &mut used)).collect(),
        }];
        let carried_in: Vec<Slot> = here.iter().filter(|s| !pi.contains(s)).copied().collect();
        let carried_out: Vec<Slot> = next.iter().filter(|s| !po.contains(s)).copied().collect();
        for (a, b) in carried_in.iter().zip(carried_out.iter()) {
            level.push(CobordismPiece::new(0, [name(*a, &mut used)], [name(*b, &mut used)]));
        }
        levels.push(level);
    }
    Ok(levels)
}

fn fresh_name(used: &mut BTreeSet<String>) -> String {
    let mut i = used.len();
    loop {
        let s = format!("x{i}");
        if used.insert(s.clone()) {
            return s;
        }
        i += 1;
    }
}

impl CobordismCycle {
    /// Checks the wiring: level `i` out-circles equal level `i+1` in-circles,
    /// levels and circle sets nonempty.
    pub fn new(levels: Vec<Vec<CobordismPiece>>) -> Result<Self, CobordismError> {
        if levels.is_empty() {
            return Err(CobordismError::WiringMismatch("no levels".into()));
        }
        let n = levels.len();
        let mut ins = Vec::new();
        let mut outs = Vec::new();
        for (i, l) in levels.iter().enumerate() {
            if l.is_empty() {
                return Err(CobordismError::WiringMismatch(format!("level {i} is empty")));
            }
            ins.push(union_set(l, true).map_err(CobordismError::WiringMismatch)?);
            outs.push(union_set(l, false).map_err(CobordismError::WiringMismatch)?);
            if n > 1 {
                for p in l {
                    if !p.in_circles.is_disjoint(&p.out_circles) {
                        return Err(CobordismError::WiringMismatch(format!("piece on level {i} uses a circle twice")));
                    }
                }
            }
            if l.iter().any(|p| p.genus < 0) {
                return Err(CobordismError::WiringMismatch(format!("negative genus on level {i}")));
            }
        }
        for i in 0..n {
            if ins[i].is_empty() {
                return Err(CobordismError::WiringMismatch(format!("circle set {i} is empty")));
            }
            if outs[i] != ins[(i + 1) % n] {
                return Err(CobordismError::WiringMismatch(format!(
                    "out-circles of level {i} differ from in-circles of level {}",
                    (i + 1) % n
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for s in &ins {
            for c in s {
                if !seen.insert(c) {
                    return Err(CobordismError::WiringMismatch(format!("circle {c} lies in two circle sets")));
                }
            }
        }
        Ok(CobordismCycle { levels })
    }

    pub fn levels(&self) -> &[Vec<CobordismPiece>] {
        &self.levels
    }

    /// Simplex dimension `k`.
    pub fn k(&self) -> usize {
        self.levels.len() - 1
    }

    /// Circle set `c_i`.
    pub fn circle_set(&self, i: usize) -> BTreeSet<String> {
        self.levels[i].iter().flat_map(|p| p.in_circles.iter().cloned()).collect()
    }

    pub fn level_euler(&self, i: usize) -> i64 {
        self.levels[i].iter().map(|p| p.euler_characteristic()).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.levels.len()).map(|i| self.level_euler(i)).sum()
    }

    pub fn is_connected(&self) -> bool {
        let pieces: Vec<&CobordismPiece> = self.levels.iter().flatten().collect();
        let mut uf: Vec<usize> = (0..pieces.len()).collect();
        let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, p) in pieces.iter().enumerate() {
            for c in &p.out_circles {
                owner.insert(c, i);
            }
        }
        for (i, p) in pieces.iter().enumerate() {
            for c in &p.in_circles {
                let a = find(&mut uf, owner[c.as_str()]);
                let b = find(&mut uf, i);
                uf[a.max(b)] = a.min(b);
            }
        }
        (0..pieces.len()).all(|i| find(&mut uf, i) == 0)
    }

    /// Simplex test for a closed surface of genus `g`.
    pub fn validate(&self, g: i64) -> Result<ValidationReport, CobordismError> {
        for p in self.levels.iter().flatten() {
            if p.is_null() {
                return Err(CobordismError::NullPiece {
                    in_circles: p.in_circles.iter().cloned().collect(),
                    out_circles: p.out_circles.iter().cloned().collect(),
                });
            }
        }
        for (i, l) in self.levels.iter().enumerate() {
            if l.iter().all(|p| p.is_annulus()) {
                return Err(CobordismError::AllAnnuliLevel { level: i });
            }
        }
        if !self.is_connected() {
            return Err(CobordismError::DisconnectedGluing);
        }
        let found = self.euler_characteristic();
        let expected = 2 - 2 * g;
        if found != expected {
            return Err(CobordismError::EulerMismatch { genus: g, expected, found });
        }
        let k = self.k();
        Ok(ValidationReport {
            k,
            genus: g,
            level_euler: (0..self.levels.len()).map(|i| self.level_euler(i)).collect(),
            max_dimension: 2 * g - 3,
            within_bound: k as i64 <= 2 * g - 3,
        })
    }

    /// Deletes `c_i`, composing the two levels that meet along it.
    pub fn face(&self, i: usize) -> Result<Self, CobordismError> {
        let n = self.levels.len();
        if n == 1 {
            return Err(CobordismError::VertexHasNoFaces);
        }
        if i >= n {
            return Err(CobordismError::FaceOutOfRange { index: i, levels: n });
        }
        let prev = (i + n - 1) % n;
        let composite = compose(&self.levels[prev], &self.levels[i], &self.circle_set(i))?;
        let mut levels = Vec::with_capacity(n - 1);
        if i == 0 {
            levels.extend(self.levels[1..n - 1].iter().cloned());
            levels.push(composite);
        } else {
            levels.extend(self.levels[..prev].iter().cloned());
            levels.push(composite);
            levels.extend(self.levels[i + 1..].iter().cloned());
        }
        CobordismCycle::new(levels)
    }

    /// Refines every level into pants levels, giving `2g - 2` levels in total.
    pub fn extend_to_top(&self, g: i64) -> Result<Self, CobordismError> {
        if g < 2 {
            return Err(CobordismError::GenusTooSmall(g));
        }
        self.validate(g)?;
        let mut used: BTreeSet<String> =
            self.levels.iter().flatten().flat_map(|p| p.in_circles.iter().cloned()).collect();
        let mut out_levels = Vec::new();
        for level in &self.levels {
            let mut order: Vec<&CobordismPiece> = level.iter().collect();
            order.sort_by(|a, b| {
                let ka = a.in_circles.iter().chain(a.out_circles.iter()).min();
                let kb = b.in_circles.iter().chain(b.out_circles.iter()).min();
                ka.cmp(&kb)
            });
            let mut sched: Vec<Option<Schedule>> = Vec::new();
            let mut offset = Vec::new();
            let mut total = 0usize;
            for p in &order {
                offset.push(total);
                if p.is_annulus() {
                    sched.push(None);
                } else {
                    let s = schedule(p)?;
                    total += s.pants.len();
                    sched.push(Some(s));
                }
            }
            // logical circles of piece p at sublevel boundary j
            let at = |p: usize, j: usize| -> Vec<Slot> {
                let piece = order[p];
                let (m, n) = (piece.in_circles.len(), piece.out_circles.len());
                match &sched[p] {
                    None => vec![if j < total { Slot::In(0) } else { Slot::Out(0) }],
                    Some(s) => {
                        if j <= offset[p] {
                            (0..m).map(Slot::In).collect()
                        } else if j >= offset[p] + s.pants.len() {
                            (0..n).map(Slot::Out).collect()
                        } else {
                            s.boundaries[j - offset[p]].clone()
                        }
                    }
                }
            };
            let mut names: BTreeMap<(usize, Slot, usize), String> = BTreeMap::new();
            let mut name = |p: usize, s: Slot, j: usize, used: &mut BTreeSet<String>| -> String {
                let piece = order[p];
                match s {
                    Slot::In(k) if j == 0 => piece.in_circles.iter().nth(k).unwrap().clone(),
                    Slot::Out(k) if j == total => piece.out_circles.iter().nth(k).unwrap().clone(),
                    _ => names.entry((p, s, j)).or_insert_with(|| fresh_name(used)).clone(),
                }
            };
            for j in 0..total {
                let mut lvl = Vec::new();
                for p in 0..order.len() {
                    let active = match &sched[p] {
                        Some(s) if j >= offset[p] && j < offset[p] + s.pants.len() => Some(s),
                        _ => None,
                    };
                    let here = at(p, j);
                    let next = at(p, j + 1);
                    if let Some(s) = active {
                        let (pi, po) = &s.pants[j - offset[p]];
                        lvl.push(CobordismPiece {
                            genus: 0,
                            in_circles: pi.iter().map(|&x| name(p, x, j, &mut used)).collect(),
                            out_circles: po.iter().map(|&x| name(p, x, j + 1, &mut used)).collect(),
                        });
                        let ci: Vec<Slot> = here.iter().filter(|x| !pi.contains(x)).copied().collect();
                        let co: Vec<Slot> = next.iter().filter(|x| !po.contains(x)).copied().collect();
                        for (a, b) in ci.into_iter().zip(co) {
                            lvl.push(CobordismPiece::new(0, [name(p, a, j, &mut used)], [name(p, b, j + 1, &mut used)]));
                        }
                    } else {
                        for (a, b) in here.into_iter().zip(next) {
                            lvl.push(CobordismPiece::new(0, [name(p, a, j, &mut used)], [name(p, b, j + 1, &mut used)]));
                        }
                    }
                }
                out_levels.push(lvl);
            }
        }
        let out = CobordismCycle::new(out_levels)?;
        out.validate(g)?;
        Ok(out)
    }

    /// Relabels circles `c0, c1, ...` and rotates levels so that cycles equal
    /// up to relabeling and rotation have equal canonical forms.
    pub fn canonical_form(&self) -> CobordismCycle {
        let n = self.levels.len();
        let mut best: Option<(Vec<PieceCert>, Vec<Vec<CobordismPiece>>)> = None;
        for r in 0..n {
            let rotated: Vec<Vec<CobordismPiece>> = (0..n).map(|i| self.levels[(i + r) % n].clone()).collect();
            let (cert, levels) = canonical_rotation(&rotated);
            if best.as_ref().map(|b| cert < b.0).unwrap_or(true) {
                best = Some((cert, levels));
            }
        }
        CobordismCycle { levels: best.unwrap().1 }
    }
}

type PieceCert = (usize, i64, Vec<usize>);

struct PieceGraph {
    level: Vec<usize>,
    genus: Vec<i64>,
    /// out-edges as target piece indices, one per circle
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

fn refine(g: &PieceGraph, mut colour: Vec<usize>) -> Vec<usize> {
    loop {
        let sig: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..colour.len())
            .map(|v| {
                let mut o: Vec<usize> = g.out[v].iter().map(|&w| colour[w]).collect();
                let mut i: Vec<usize> = g.inn[v].iter().map(|&w| colour[w]).collect();
                o.sort();
                i.sort();
                (colour[v], o, i)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>, Vec<usize>)> = sig.iter().collect();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sig.iter().map(|s| distinct.binary_search(&s).unwrap()).collect();
        let before = colour.iter().collect::<BTreeSet<_>>().len();
        if distinct.len() == before {
            return next;
        }
        colour = next;
    }
}

fn certificate(g: &PieceGraph, colour: &[usize]) -> Vec<PieceCert> {
    let mut order: Vec<usize> = (0..colour.len()).collect();
    order.sort_by_key(|&v| colour[v]);
    order
        .iter()
        .map(|&v| {
            let mut t: Vec<usize> = g.out[v].iter().map(|&w| colour[w]).collect();
            t.sort();
            (g.level[v], g.genus[v], t)
        })
        .collect()
}

fn search(g: &PieceGraph, colour: Vec<usize>, best: &mut Option<(Vec<PieceCert>, Vec<usize>)>) {
    let colour = refine(g, colour);
    let n = colour.len();
    let mut counts = vec![0usize; n];
    for &c in &colour {
        counts[c] += 1;
    }
    let cell = (0..n).find(|&c| counts[c] > 1);
    let Some(cell) = cell else {
        let cert = certificate(g, &colour);
        if best.as_ref().map(|b| cert < b.0).unwrap_or(true) {
            *best = Some((cert, colour));
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&v| colour[v] == cell).collect();
    let mut tried: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for &v in &members {
        // twins have identical neighbourhoods; one representative suffices
        let mut o = g.out[v].clone();
        let mut i = g.inn[v].clone();
        o.sort();
        i.sort();
        let key = (o, i);
        if tried.contains(&key) {
            continue;
        }
        tried.push(key);
        let next: Vec<usize> =
            colour.iter().enumerate().map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 }).collect();
        search(g, next, best);
    }
}

fn canonical_rotation(levels: &[Vec<CobordismPiece>]) -> (Vec<PieceCert>, Vec<Vec<CobordismPiece>>) {
    let pieces: Vec<(usize, &CobordismPiece)> =
        levels.iter().enumerate().flat_map(|(i, l)| l.iter().map(move |p| (i, p))).collect();
    let mut in_owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (v, (_, p)) in pieces.iter().enumerate() {
        for c in &p.in_circles {
            in_owner.insert(c, v);
        }
    }
    let mut g = PieceGraph {
        level: pieces.iter().map(|x| x.0).collect(),
        genus: pieces.iter().map(|x| x.1.genus).collect(),
        out: vec![Vec::new(); pieces.len()],
        inn: vec![Vec::new(); pieces.len()],
    };
    let mut circle_ends = Vec::new();
    for (v, (_, p)) in pieces.iter().enumerate() {
        for c in &p.out_circles {
            let w = in_owner[c.as_str()];
            g.out[v].push(w);
            g.inn[w].push(v);
            circle_ends.push((v, w));
        }
    }
    let init: Vec<(usize, i64, usize, usize)> =
        (0..pieces.len()).map(|v| (g.level[v], g.genus[v], g.out[v].len(), g.inn[v].len())).collect();
    let mut distinct = init.clone();
    distinct.sort();
    distinct.dedup();
    let colour: Vec<usize> = init.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
    let mut best = None;
    search(&g, colour, &mut best);
    let (cert, colour) = best.unwrap();
    // name circles by (source rank, target rank)
    let mut ends: Vec<(usize, usize)> = circle_ends.iter().map(|&(v, w)| (colour[v], colour[w])).collect();
    ends.sort();
    let mut names: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (k, e) in ends.iter().enumerate() {
        names.entry(*e).or_default().push(format!("c{k}"));
    }
    let mut rank_to_piece = vec![0; pieces.len()];
    for (v, &c) in colour.iter().enumerate() {
        rank_to_piece[c] = v;
    }
    let mut out_levels: Vec<Vec<CobordismPiece>> = vec![Vec::new(); levels.len()];
    let mut ins: Vec<BTreeSet<String>> = vec![BTreeSet::new(); pieces.len()];
    let mut outs: Vec<BTreeSet<String>> = vec![BTreeSet::new(); pieces.len()];
    for ((a, b), list) in &names {
        for nm in list {
            outs[*a].insert(nm.clone());
            ins[*b].insert(nm.clone());
        }
    }
    for (r, &v) in rank_to_piece.iter().enumerate() {
        out_levels[g.level[v]].push(CobordismPiece {
            genus: g.genus[v],
            in_circles: std::mem::take(&mut ins[r]),
            out_circles: std::mem::take(&mut outs[r]),
        });
    }
    (cert, out_levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: i64, i: &[&str], o: &[&str]) -> CobordismPiece {
        CobordismPiece::new(g, i.iter().copied(), o.iter().copied())
    }

    fn two_pants() -> CobordismCycle {
        CobordismCycle::new(vec![vec![p(0, &["A", "B"], &["C"])], vec![p(0, &["C"], &["A", "B"])]]).unwrap()
    }

    #[test]
    fn null_pieces() {
        assert!(p(0, &[], &["1"]).is_null());
        assert!(!p(0, &["1"], &["2"]).is_null());
        assert!(p(1, &["1"], &[]).is_null());
    }

    #[test]
    fn genus_two_edge() {
        let c = two_pants();
        let r = c.validate(2).unwrap();
        assert_eq!(r.k, 1);
        assert!(r.within_bound);
        let bad = CobordismCycle::new(vec![
            vec![p(0, &["A"], &["C"]), p(0, &["B"], &["D"])],
            vec![p(1, &["C", "D"], &["A", "B"])],
        ])
        .unwrap();
        assert_eq!(bad.validate(2).unwrap_err(), CobordismError::AllAnnuliLevel { level: 0 });
    }

    #[test]
    fn composition() {
        let a = compose(&[p(0, &["1"], &["2"])], &[p(0, &["2"], &["3"])], &["2".to_string()].into()).unwrap();
        assert_eq!(a, vec![p(0, &["1"], &["3"])]);
        let b = compose(&[p(0, &["1", "2"], &["3"])], &[p(0, &["3"], &["4", "5"])], &["3".to_string()].into()).unwrap();
        assert_eq!(b, vec![p(0, &["1", "2"], &["4", "5"])]);
        let d = compose(&[p(0, &[], &["1"])], &[p(0, &["1"], &["2"])], &["1".to_string()].into()).unwrap();
        assert!(d[0].is_null());
    }

    #[test]
    fn faces() {
        let v = two_pants().face(1).unwrap();
        assert_eq!(v.levels(), &[vec![p(0, &["A", "B"], &["A", "B"])]]);
        assert_eq!(v.validate(2).unwrap().k, 0);
        assert_eq!(v.face(0).unwrap_err(), CobordismError::VertexHasNoFaces);
        assert!(two_pants().face(0).unwrap().validate(2).is_ok());
    }

    #[test]
    fn schedules() {
        assert_eq!(pants_schedule(&p(0, &["a", "b"], &["c"])).unwrap().len(), 1);
        let h = pants_schedule(&p(1, &["a"], &["b"])).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h[0][0].out_circles.len(), 2);
        assert_eq!(pants_schedule(&p(0, &["a", "b", "c"], &["d", "e"])).unwrap().len(), 3);
        assert_eq!(pants_schedule(&p(0, &["a"], &["b"])).unwrap_err(), CobordismError::AnnulusInput);
        assert_eq!(pants_schedule(&p(2, &[], &["b"])).unwrap_err(), CobordismError::NullInput);
    }

    #[test]
    fn extension() {
        let v = two_pants().face(1).unwrap();
        let top = v.extend_to_top(2).unwrap();
        assert_eq!(top.canonical_form(), two_pants().canonical_form());
        let g3 = CobordismCycle::new(vec![vec![p(2, &["A"], &["A"])]]).unwrap();
        let t3 = g3.extend_to_top(3).unwrap();
        assert_eq!(t3.k(), 3);
        for i in 0..4 {
            assert_eq!(t3.level_euler(i), -1);
        }
    }

    #[test]
    fn canonical_form_ignores_names_and_rotation() {
        let a = two_pants();
        let b = CobordismCycle::new(vec![vec![p(0, &["z"], &["x", "y"])], vec![p(0, &["y", "x"], &["z"])]]).unwrap();
        assert_eq!(a.canonical_form(), b.canonical_form());
        let c = CobordismCycle::new(vec![vec![p(0, &["A"], &["C", "D"])], vec![p(0, &["C", "D"], &["A"])]]).unwrap();
        assert_eq!(a.canonical_form(), c.canonical_form());
        assert_ne!(a.canonical_form(), a.face(1).unwrap().canonical_form());
    }

    #[test]
    fn json_round_trip() {
        let a = two_pants();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"in\""));
        let b: CobordismCycle = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
