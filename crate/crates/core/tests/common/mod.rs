#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cyclecx::cobordism::CobordismPiece;
use cyclecx::surface::CombinatorialSurface;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Levels = Vec<Vec<CobordismPiece>>;

pub fn piece(genus: i64, ins: &[String], outs: &[String]) -> CobordismPiece {
    CobordismPiece::new(genus, ins.iter().cloned(), outs.iter().cloned())
}

fn chi(p: &CobordismPiece) -> i64 {
    2 - 2 * p.genus - (p.in_circles.len() + p.out_circles.len()) as i64
}

pub fn level_chi(l: &[CobordismPiece]) -> i64 {
    l.iter().map(chi).sum()
}

struct Uf(Vec<usize>);

impl Uf {
    fn new(n: usize) -> Self {
        Uf((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }
    fn join(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Pieces glued along every circle that is an out-circle of one piece and
/// an in-circle of another; returns the component of each piece.
fn glue(pieces: &[&CobordismPiece]) -> Vec<usize> {
    let mut uf = Uf::new(pieces.len());
    let mut out_of = BTreeMap::new();
    for (i, p) in pieces.iter().enumerate() {
        for c in &p.out_circles {
            out_of.insert(c.clone(), i);
        }
    }
    for (i, p) in pieces.iter().enumerate() {
        for c in &p.in_circles {
            if let Some(&j) = out_of.get(c) {
                uf.join(i, j);
            }
        }
    }
    (0..pieces.len()).map(|i| uf.find(i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Simplex(usize),
    Null,
    Annuli,
    Disconnected,
    Euler,
}

/// Simplex test written from the definitions, in the same order of checks.
pub fn oracle_validate(levels: &Levels, g: i64) -> Verdict {
    let all: Vec<&CobordismPiece> = levels.iter().flatten().collect();
    if all.iter().any(|p| p.in_circles.is_empty() || p.out_circles.is_empty()) {
        return Verdict::Null;
    }
    let annulus = |p: &CobordismPiece| p.genus == 0 && p.in_circles.len() == 1 && p.out_circles.len() == 1;
    if levels.iter().any(|l| l.iter().all(|p| annulus(p))) {
        return Verdict::Annuli;
    }
    let comp = glue(&all);
    if comp.iter().collect::<BTreeSet<_>>().len() != 1 {
        return Verdict::Disconnected;
    }
    if all.iter().map(|p| chi(p)).sum::<i64>() != 2 - 2 * g {
        return Verdict::Euler;
    }
    Verdict::Simplex(levels.len() - 1)
}

/// Composite of two levels along the circles they share.
pub fn oracle_compose(first: &[CobordismPiece], second: &[CobordismPiece]) -> Vec<CobordismPiece> {
    let mut pieces: Vec<&CobordismPiece> = first.iter().collect();
    pieces.extend(second.iter());
    let n1 = first.len();
    // glue only across the seam
    let mut uf = Uf::new(pieces.len());
    let mut owner = BTreeMap::new();
    for (i, p) in first.iter().enumerate() {
        for c in &p.out_circles {
            owner.insert(c.clone(), i);
        }
    }
    for (j, p) in second.iter().enumerate() {
        for c in &p.in_circles {
            uf.join(n1 + j, owner[c]);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..pieces.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in groups.values() {
        let mut ins = BTreeSet::new();
        let mut outs = BTreeSet::new();
        let mut euler = 0;
        for &i in members {
            euler += chi(pieces[i]);
            if i < n1 {
                ins.extend(pieces[i].in_circles.iter().cloned());
            } else {
                outs.extend(pieces[i].out_circles.iter().cloned());
            }
        }
        // gluing along circles does not change chi
        let b = (ins.len() + outs.len()) as i64;
        let twice = 2 - euler - b;
        assert!(twice >= 0 && twice % 2 == 0, "oracle composite has bad genus");
        out.push(CobordismPiece { genus: twice / 2, in_circles: ins, out_circles: outs });
    }
    out
}

/// Random top simplex on genus `g`: `2g - 2` levels, one pants each.
pub fn random_top<R: Rng>(rng: &mut R, g: usize) -> Levels {
    loop {
        let mut steps: Vec<i64> = vec![1; g - 1];
        steps.extend(vec![-1; g - 1]);
        steps.shuffle(rng);
        let mut s = 0i64;
        let mut lo = 0i64;
        for &d in &steps {
            s += d;
            lo = lo.min(s);
        }
        let s0 = (1 - lo + rng.gen_range(0..2)) as usize;
        let n = steps.len();
        let mut sets: Vec<Vec<String>> = vec![(0..s0).map(|j| format!("c0_{j}")).collect()];
        let mut levels = Vec::new();
        for (i, &d) in steps.iter().enumerate() {
            let cur = sets[i].clone();
            let next_len = (cur.len() as i64 + d) as usize;
            let next: Vec<String> = if i + 1 == n {
                sets[0].clone()
            } else {
                (0..next_len).map(|j| format!("c{}_{j}", i + 1)).collect()
            };
            let mut a = cur.clone();
            a.shuffle(rng);
            let mut b = next.clone();
            b.shuffle(rng);
            let mut level = Vec::new();
            if d > 0 {
                level.push(piece(0, &a[..1], &b[..2]));
                for (x, y) in a[1..].iter().zip(&b[2..]) {
                    level.push(piece(0, &[x.clone()], &[y.clone()]));
                }
            } else {
                level.push(piece(0, &a[..2], &b[..1]));
                for (x, y) in a[2..].iter().zip(&b[1..]) {
                    level.push(piece(0, &[x.clone()], &[y.clone()]));
                }
            }
            levels.push(level);
            sets.push(next);
        }
        if oracle_validate(&levels, g as i64) == Verdict::Simplex(2 * g - 3) {
            return levels;
        }
    }
}

/// Deletes circle set `i` by composing the two levels that meet along it.
pub fn merge_at(levels: &Levels, i: usize) -> Levels {
    let n = levels.len();
    let prev = (i + n - 1) % n;
    let comp = oracle_compose(&levels[prev], &levels[i]);
    let mut out = Vec::new();
    for j in 0..n {
        if j == prev {
            out.push(comp.clone());
        } else if j != i {
            out.push(levels[j].clone());
        }
    }
    out
}

/// Random simplex of random dimension, obtained by faces of a top one.
pub fn random_simplex<R: Rng>(rng: &mut R, g: usize) -> Levels {
    let mut levels = random_top(rng, g);
    let k = rng.gen_range(0..=2 * g - 3);
    while levels.len() > k + 1 {
        let i = rng.gen_range(0..levels.len());
        levels = merge_at(&levels, i);
    }
    levels
}

/// Wired but otherwise arbitrary cycle: random circle sets split at random
/// into pieces of genus 0..=2, null pieces allowed.
pub fn random_wired<R: Rng>(rng: &mut R, max_levels: usize) -> Levels {
    let n = rng.gen_range(1..=max_levels);
    let sets: Vec<Vec<String>> = (0..n).map(|i| (0..rng.gen_range(1..=3)).map(|j| format!("r{i}_{j}")).collect()).collect();
    let mut levels = Vec::new();
    for i in 0..n {
        let ins = &sets[i];
        let outs = &sets[(i + 1) % n];
        let m = rng.gen_range(1..=ins.len().max(outs.len()));
        let mut pin: Vec<Vec<String>> = vec![Vec::new(); m];
        let mut pout: Vec<Vec<String>> = vec![Vec::new(); m];
        for c in ins {
            pin[rng.gen_range(0..m)].push(c.clone());
        }
        for c in outs {
            pout[rng.gen_range(0..m)].push(c.clone());
        }
        let level: Vec<CobordismPiece> = (0..m)
            .filter(|&j| !pin[j].is_empty() || !pout[j].is_empty())
            .map(|j| piece(rng.gen_range(0..=2), &pin[j], &pout[j]))
            .collect();
        levels.push(level);
    }
    levels
}

/// Hand-built cycles with `2g - 1` levels, each level connected across,
/// null-free and not all annuli.
pub fn overfull<R: Rng>(rng: &mut R, g: usize) -> Levels {
    loop {
        let n = 2 * g - 1;
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let sets: Vec<Vec<String>> = (0..n).map(|i| (0..sizes[i]).map(|j| format!("o{i}_{j}")).collect()).collect();
        let mut levels = Vec::new();
        for i in 0..n {
            let ins = &sets[i];
            let outs = &sets[(i + 1) % n];
            // one big piece plus annuli
            let extra = rng.gen_range(0..ins.len().min(outs.len()));
            let a = ins.len() - extra;
            let b = outs.len() - extra;
            let mut genus = rng.gen_range(0..=1);
            if genus == 0 && a + b < 3 {
                genus = 1;
            }
            let mut level = vec![piece(genus, &ins[..a], &outs[..b])];
            for (x, y) in ins[a..].iter().zip(&outs[b..]) {
                level.push(piece(0, &[x.clone()], &[y.clone()]));
            }
            levels.push(level);
        }
        if let Verdict::Euler = oracle_validate(&levels, g as i64) {
            return levels;
        }
    }
}

/// Levels with pieces sorted, rotated to start at the level holding the
/// smallest in-circle name.
pub fn normalized(levels: &Levels) -> Levels {
    let mut ls: Levels = levels
        .iter()
        .map(|l| {
            let mut l = l.clone();
            l.sort();
            l
        })
        .collect();
    let start = (0..ls.len())
        .min_by_key(|&i| ls[i].iter().flat_map(|p| p.in_circles.iter()).min().cloned())
        .unwrap();
    ls.rotate_left(start);
    ls
}

/// Oriented dual graph of a cycle: `(sinks, sources)`, loops ignored.
pub fn sinks_and_sources(levels: &Levels) -> (usize, usize) {
    let all: Vec<&CobordismPiece> = levels.iter().flatten().collect();
    let mut tail = BTreeMap::new();
    for (i, p) in all.iter().enumerate() {
        for c in &p.out_circles {
            tail.insert(c.clone(), i);
        }
    }
    let mut ins = vec![0; all.len()];
    let mut outs = vec![0; all.len()];
    for (h, p) in all.iter().enumerate() {
        for c in &p.in_circles {
            let t = tail[c];
            if t != h {
                outs[t] += 1;
                ins[h] += 1;
            }
        }
    }
    let sinks = (0..all.len()).filter(|&i| ins[i] > 0 && outs[i] == 0).count();
    let sources = (0..all.len()).filter(|&i| outs[i] > 0 && ins[i] == 0).count();
    (sinks, sources)
}

/// Every normal-coordinate vector with total weight in `1..=max`.
pub fn weight_vectors(s: &CombinatorialSurface, max: usize) -> Vec<Vec<usize>> {
    fn rec(s: &CombinatorialSurface, e: usize, left: usize, w: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if e == w.len() {
            let ok = (0..s.num_triangles()).all(|t| {
                let x: Vec<usize> = (0..3).map(|i| w[s.edge((t, i))]).collect();
                (x[0] + x[1] + x[2]) % 2 == 0 && x[0] <= x[1] + x[2] && x[1] <= x[0] + x[2] && x[2] <= x[0] + x[1]
            });
            if ok && w.iter().any(|&v| v > 0) {
                out.push(w.clone());
            }
            return;
        }
        for v in 0..=left {
            w[e] = v;
            rec(s, e + 1, left - v, w, out);
        }
        w[e] = 0;
    }
    let mut out = Vec::new();
    rec(s, 0, max, &mut vec![0; s.num_edges()], &mut out);
    out
}

/// All sign vectors of length `n`.
pub fn sign_vectors(n: usize) -> Vec<Vec<i64>> {
    (0..1u32 << n).map(|m| (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
}
