//! Strand-level model of curve systems in normal position.
//!
//! Every edge carries an ordered list of strands (crossing points), ordered
//! along the direction of its first slot. A curve is a cyclic list of steps;
//! step `k` enters triangle `enter.0` through side `enter.1` at its strand,
//! and the arc it starts leaves through the partner of the next step's slot.

use std::collections::HashMap;

use crate::error::CurveError;
use crate::surface::{prev_side, CombinatorialSurface, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Step {
    pub strand: usize,
    pub enter: Slot,
}

#[derive(Debug, Clone)]
pub(crate) struct Arrangement {
    pub edge_strands: Vec<Vec<usize>>,
    pub strand_edge: Vec<usize>,
    strand_index: Vec<usize>,
    /// usize::MAX marks a deleted strand
    pub strand_curve: Vec<usize>,
    pub curves: Vec<Vec<Step>>,
    pub label: Vec<usize>,
}

pub(crate) const DEAD: usize = usize::MAX;

/// Side of a region boundary record: the curve's normal points into the
/// region (`Positive`) or out of it (`Negative`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Positive,
    Negative,
}

#[derive(Debug, Clone)]
pub(crate) struct RegionData {
    pub euler: Vec<i64>,
    /// (curve, side) records per region
    pub boundary: Vec<Vec<(usize, Side)>>,
    /// region to the left / right of each curve's traced direction
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl RegionData {
    pub fn genus(&self, r: usize) -> i64 {
        (2 - self.euler[r] - self.boundary[r].len() as i64) / 2
    }
}

/// One crossing between two arcs inside a triangle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ArcCrossing {
    pub curve_a: usize,
    pub step_a: usize,
    pub curve_b: usize,
    pub step_b: usize,
    /// `a` passes from the right of `b` to its left
    pub a_right_to_left: bool,
    /// ccw distance keys used to order crossings along each arc
    pub key_a: usize,
    pub key_b: usize,
}

pub(crate) fn check_weights(surf: &CombinatorialSurface, w: &[usize]) -> Result<(), CurveError> {
    if w.len() != surf.num_edges() {
        return Err(CurveError::WeightCount { expected: surf.num_edges(), got: w.len() });
    }
    for t in 0..surf.num_triangles() {
        let x: [usize; 3] = std::array::from_fn(|s| w[surf.edge((t, s))]);
        if (x[0] + x[1] + x[2]) % 2 == 1 {
            return Err(CurveError::ParityViolation { triangle: t });
        }
        for s in 0..3 {
            if 2 * x[s] > x[0] + x[1] + x[2] {
                return Err(CurveError::TriangleInequalityViolation { triangle: t });
            }
        }
    }
    Ok(())
}

impl Arrangement {
    pub fn empty(surf: &CombinatorialSurface) -> Self {
        Arrangement {
            edge_strands: vec![Vec::new(); surf.num_edges()],
            strand_edge: Vec::new(),
            strand_index: Vec::new(),
            strand_curve: Vec::new(),
            curves: Vec::new(),
            label: Vec::new(),
        }
    }

    /// Traces the unique disjoint normal system with the given edge weights.
    /// Curves come out in order of their first strand, each in its
    /// canonical direction.
    pub fn from_weights(surf: &CombinatorialSurface, w: &[usize]) -> Result<Self, CurveError> {
        check_weights(surf, w)?;
        let mut arr = Arrangement::empty(surf);
        for (e, &we) in w.iter().enumerate() {
            for i in 0..we {
                let id = arr.strand_edge.len();
                arr.strand_edge.push(e);
                arr.strand_index.push(i);
                arr.strand_curve.push(DEAD);
                arr.edge_strands[e].push(id);
            }
        }
        // other[t][s][p] = (side, pos) joined to position p of side s
        let mut other: Vec<[Vec<(usize, usize)>; 3]> = Vec::with_capacity(surf.num_triangles());
        for t in 0..surf.num_triangles() {
            let x: [usize; 3] = std::array::from_fn(|s| w[surf.edge((t, s))]);
            let mut o: [Vec<(usize, usize)>; 3] = std::array::from_fn(|s| vec![(9, 0); x[s]]);
            for s in 0..3 {
                let p = prev_side(s);
                let corner = (x[p] + x[s] - x[(s + 1) % 3]) / 2;
                for j in 0..corner {
                    o[s][j] = (p, x[p] - 1 - j);
                    o[p][x[p] - 1 - j] = (s, j);
                }
            }
            other.push(o);
        }
        for e in 0..w.len() {
            for i in 0..w[e] {
                let start = arr.edge_strands[e][i];
                if arr.strand_curve[start] != DEAD {
                    continue;
                }
                let cid = arr.curves.len();
                let mut steps = Vec::new();
                let first = surf.edge_slots(e)[0];
                let (mut z, mut enter) = (start, first);
                loop {
                    arr.strand_curve[z] = cid;
                    steps.push(Step { strand: z, enter });
                    let p = arr.pos(surf, enter, z);
                    let (s2, p2) = other[enter.0][enter.1][p];
                    let exit = (enter.0, s2);
                    let e2 = surf.edge(exit);
                    let idx = if surf.is_first_slot(exit) { p2 } else { w[e2] - 1 - p2 };
                    z = arr.edge_strands[e2][idx];
                    enter = surf.partner(exit);
                    if z == start {
                        debug_assert_eq!(enter, first);
                        break;
                    }
                }
                arr.curves.push(steps);
                arr.label.push(0);
            }
        }
        for c in 0..arr.curves.len() {
            if arr.prefers_reverse(surf, c) {
                arr.reverse_curve(surf, c);
            }
        }
        Ok(arr)
    }

    #[inline]
    pub fn width(&self, e: usize) -> usize {
        self.edge_strands[e].len()
    }

    pub fn weights(&self) -> Vec<usize> {
        self.edge_strands.iter().map(|v| v.len()).collect()
    }

    /// Position of a strand measured along `slot`'s direction.
    #[inline]
    pub fn pos(&self, surf: &CombinatorialSurface, slot: Slot, z: usize) -> usize {
        let i = self.strand_index[z];
        if surf.is_first_slot(slot) {
            i
        } else {
            self.width(self.strand_edge[z]) - 1 - i
        }
    }

    #[inline]
    pub fn index(&self, z: usize) -> usize {
        self.strand_index[z]
    }

    pub fn reindex_edge(&mut self, e: usize) {
        for (i, &z) in self.edge_strands[e].iter().enumerate() {
            self.strand_index[z] = i;
        }
    }

    pub fn live_curves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.curves.len()).filter(move |&c| !self.curves[c].is_empty())
    }

    /// Exit slot of arc `k` of curve `c`.
    #[inline]
    pub fn exit(&self, surf: &CombinatorialSurface, c: usize, k: usize) -> Slot {
        let n = self.curves[c].len();
        surf.partner(self.curves[c][(k + 1) % n].enter)
    }

    /// Entry and exit perimeter points `(side, pos)` of arc `k` of curve `c`.
    pub fn arc_points(&self, surf: &CombinatorialSurface, c: usize, k: usize) -> ((usize, usize), (usize, usize)) {
        let steps = &self.curves[c];
        let n = steps.len();
        let st = steps[k];
        let nx = steps[(k + 1) % n];
        let exit = surf.partner(nx.enter);
        ((st.enter.1, self.pos(surf, st.enter, st.strand)), (exit.1, self.pos(surf, exit, nx.strand)))
    }

    pub fn add_strand(&mut self, e: usize, at: usize) -> usize {
        let id = self.strand_edge.len();
        self.strand_edge.push(e);
        self.strand_index.push(0);
        self.strand_curve.push(DEAD);
        self.edge_strands[e].insert(at, id);
        self.reindex_edge(e);
        id
    }

    fn remove_strand(&mut self, z: usize) {
        let e = self.strand_edge[z];
        let i = self.strand_index[z];
        debug_assert_eq!(self.edge_strands[e][i], z);
        self.edge_strands[e].remove(i);
        self.strand_curve[z] = DEAD;
        self.reindex_edge(e);
    }

    pub fn push_curve(&mut self, steps: Vec<Step>, label: usize) -> usize {
        let cid = self.curves.len();
        for st in &steps {
            self.strand_curve[st.strand] = cid;
        }
        self.curves.push(steps);
        self.label.push(label);
        cid
    }

    /// Adds a parallel copy of curve `c` immediately to its left (or right).
    pub fn push_parallel(&mut self, surf: &CombinatorialSurface, c: usize, left: bool, label: usize) -> usize {
        let steps = self.curves[c].clone();
        let mut new_steps = Vec::with_capacity(steps.len());
        for st in steps {
            let e = self.strand_edge[st.strand];
            let i = self.strand_index[st.strand];
            // left of a strand is the lower position in entry-slot order
            let before = surf.is_first_slot(st.enter) == left;
            let z = self.add_strand(e, if before { i } else { i + 1 });
            new_steps.push(Step { strand: z, enter: st.enter });
        }
        self.push_curve(new_steps, label)
    }

    pub fn remove_curve(&mut self, c: usize) {
        let steps = std::mem::take(&mut self.curves[c]);
        for st in steps {
            self.remove_strand(st.strand);
        }
    }

    pub fn reversed_steps(surf: &CombinatorialSurface, steps: &[Step]) -> Vec<Step> {
        let n = steps.len();
        (0..n)
            .rev()
            .map(|k| {
                let nx = steps[(k + 1) % n];
                Step { strand: nx.strand, enter: surf.partner(nx.enter) }
            })
            .collect()
    }

    pub fn reverse_curve(&mut self, surf: &CombinatorialSurface, c: usize) {
        self.curves[c] = Self::reversed_steps(surf, &self.curves[c]);
    }

    fn slot_code(s: Slot) -> usize {
        3 * s.0 + s.1
    }

    /// Forward entry-slot word in minimal rotation.
    pub fn slot_word(steps: &[Step]) -> Vec<usize> {
        let w: Vec<usize> = steps.iter().map(|s| Self::slot_code(s.enter)).collect();
        min_rotation(&w)
    }

    fn prefers_reverse(&self, surf: &CombinatorialSurface, c: usize) -> bool {
        let fwd = Self::slot_word(&self.curves[c]);
        let rev = Self::slot_word(&Self::reversed_steps(surf, &self.curves[c]));
        rev < fwd
    }

    /// Signed edge crossings of curve `c` in its traced direction.
    pub fn curve_crossings(&self, surf: &CombinatorialSurface, c: usize) -> Vec<(usize, i64)> {
        let n = self.curves[c].len();
        (0..n)
            .map(|k| {
                let x = self.exit(surf, c, k);
                (surf.edge(x), crate::homology::exit_sign(surf, x))
            })
            .collect()
    }

    /// Per-edge strand counts of a single curve.
    pub fn curve_weights(&self, c: usize) -> Vec<usize> {
        let mut w = vec![0; self.edge_strands.len()];
        for st in &self.curves[c] {
            w[self.strand_edge[st.strand]] += 1;
        }
        w
    }

    /// Removes every innermost return (an arc leaving through the side it
    /// entered, with nothing in between) until none is left. Curves that
    /// collapse entirely are deleted. Returns the number of removals.
    pub fn normalize(&mut self, surf: &CombinatorialSurface) -> usize {
        let mut removed = 0;
        loop {
            let mut progress = false;
            for c in 0..self.curves.len() {
                let mut k = 0;
                while k < self.curves[c].len() {
                    let n = self.curves[c].len();
                    let st = self.curves[c][k];
                    let nx = self.curves[c][(k + 1) % n];
                    if surf.partner(nx.enter) == st.enter {
                        let (i, j) = (self.strand_index[st.strand], self.strand_index[nx.strand]);
                        if i.abs_diff(j) == 1 {
                            let kk = (k + 1) % n;
                            self.remove_strand(st.strand);
                            self.remove_strand(nx.strand);
                            let steps = &mut self.curves[c];
                            if n == 2 {
                                steps.clear();
                            } else if kk == 0 {
                                steps.remove(k);
                                steps.remove(0);
                            } else {
                                steps.drain(k..=kk);
                            }
                            removed += 1;
                            progress = true;
                            k = k.saturating_sub(1);
                            continue;
                        }
                    }
                    k += 1;
                }
            }
            if !progress {
                break;
            }
        }
        removed
    }

    /// Drops deleted curves and strands, renumbering everything. Returns the
    /// old-to-new curve map.
    pub fn compact(&mut self) -> Vec<Option<usize>> {
        let mut smap = vec![DEAD; self.strand_edge.len()];
        let mut strand_edge = Vec::new();
        for e in 0..self.edge_strands.len() {
            for &z in &self.edge_strands[e] {
                smap[z] = strand_edge.len();
                strand_edge.push(e);
            }
        }
        let mut cmap = vec![None; self.curves.len()];
        let mut curves = Vec::new();
        let mut label = Vec::new();
        for (c, steps) in self.curves.iter().enumerate() {
            if steps.is_empty() {
                continue;
            }
            cmap[c] = Some(curves.len());
            curves.push(steps.iter().map(|s| Step { strand: smap[s.strand], enter: s.enter }).collect::<Vec<_>>());
            label.push(self.label[c]);
        }
        let mut strand_curve = vec![DEAD; strand_edge.len()];
        for (c, steps) in curves.iter().enumerate() {
            for s in steps {
                strand_curve[s.strand] = c;
            }
        }
        self.edge_strands = self
            .edge_strands
            .iter()
            .map(|v| v.iter().map(|&z| smap[z]).collect())
            .collect();
        self.strand_edge = strand_edge;
        self.strand_index = vec![0; self.strand_edge.len()];
        for e in 0..self.edge_strands.len() {
            self.reindex_edge(e);
        }
        self.strand_curve = strand_curve;
        self.curves = curves;
        self.label = label;
        cmap
    }

    /// Union of two arrangements; strands of `other` follow ours on each edge.
    pub fn merge(&self, other: &Arrangement) -> (Arrangement, usize) {
        let mut a = self.clone();
        a.compact();
        let mut b = other.clone();
        b.compact();
        let off_s = a.strand_edge.len();
        let off_c = a.curves.len();
        for e in 0..a.edge_strands.len() {
            let extra: Vec<usize> = b.edge_strands[e].iter().map(|&z| z + off_s).collect();
            a.edge_strands[e].extend(extra);
        }
        a.strand_edge.extend(b.strand_edge.iter().copied());
        a.strand_index.extend(std::iter::repeat(0).take(b.strand_edge.len()));
        a.strand_curve.extend(b.strand_curve.iter().map(|&c| if c == DEAD { DEAD } else { c + off_c }));
        for steps in &b.curves {
            a.curves.push(steps.iter().map(|s| Step { strand: s.strand + off_s, enter: s.enter }).collect());
        }
        a.label.extend(b.label.iter().copied());
        for e in 0..a.edge_strands.len() {
            a.reindex_edge(e);
        }
        (a, off_c)
    }

    /// Swaps two strands that are adjacent on their edge.
    pub fn swap_adjacent(&mut self, z1: usize, z2: usize) {
        let e = self.strand_edge[z1];
        assert_eq!(e, self.strand_edge[z2], "swap across different edges");
        let (i, j) = (self.strand_index[z1], self.strand_index[z2]);
        assert_eq!(i.abs_diff(j), 1, "swapped strands must be adjacent");
        self.edge_strands[e].swap(i, j);
        self.strand_index[z1] = j;
        self.strand_index[z2] = i;
    }

    /// Perimeter layout of triangle `t`: offsets of each side.
    fn perimeter(&self, surf: &CombinatorialSurface, t: usize) -> ([usize; 3], usize) {
        let w: [usize; 3] = std::array::from_fn(|s| self.width(surf.edge((t, s))));
        ([0, w[0], w[0] + w[1]], w[0] + w[1] + w[2])
    }

    /// Arcs of each triangle as (curve, step, from-point, to-point) with
    /// perimeter point indices.
    fn triangle_arcs(&self, surf: &CombinatorialSurface) -> Vec<Vec<(usize, usize, usize, usize)>> {
        let mut out = vec![Vec::new(); surf.num_triangles()];
        let offs: Vec<[usize; 3]> = (0..surf.num_triangles()).map(|t| self.perimeter(surf, t).0).collect();
        for c in self.live_curves() {
            for k in 0..self.curves[c].len() {
                let t = self.curves[c][k].enter.0;
                let ((s1, p1), (s2, p2)) = self.arc_points(surf, c, k);
                out[t].push((c, k, offs[t][s1] + p1, offs[t][s2] + p2));
            }
        }
        out
    }

    /// All crossings between arcs of different curves.
    pub fn crossings(&self, surf: &CombinatorialSurface) -> Vec<ArcCrossing> {
        let arcs = self.triangle_arcs(surf);
        let mut out = Vec::new();
        for t in 0..surf.num_triangles() {
            let m = self.perimeter(surf, t).1;
            let list = &arcs[t];
            // ccw distance from x to y
            let d = |x: usize, y: usize| (y + m - x) % m;
            for i in 0..list.len() {
                for j in 0..list.len() {
                    if i == j {
                        continue;
                    }
                    let (ca, ka, xa, ya) = list[i];
                    let (cb, kb, xb, yb) = list[j];
                    if (ca, ka) > (cb, kb) {
                        continue;
                    }
                    let inside = |p: usize| d(xb, p) < d(xb, yb) && p != xb;
                    if inside(xa) == inside(ya) {
                        continue;
                    }
                    // right side of a chord x->y is the ccw arc from x to y
                    let a_right_to_left = inside(xa);
                    let ua = if inside(xa) { xa } else { ya };
                    // along a: key is ccw distance from its start of the b-endpoint on a's right
                    let b_right = if d(xa, xb) < d(xa, ya) { xb } else { yb };
                    out.push(ArcCrossing {
                        curve_a: ca,
                        step_a: ka,
                        curve_b: cb,
                        step_b: kb,
                        a_right_to_left,
                        key_a: d(xa, b_right),
                        key_b: d(xb, ua),
                    });
                }
            }
        }
        out
    }

    /// Complementary regions of a crossing-free arrangement, with the given
    /// orientation sign per curve.
    pub fn regions(&self, surf: &CombinatorialSurface, orient: &[i8]) -> RegionData {
        let nt = surf.num_triangles();
        let arcs = self.triangle_arcs(surf);
        let mut seg_piece: Vec<Vec<usize>> = Vec::with_capacity(nt);
        let mut piece_keys: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut piece_corners: Vec<Vec<usize>> = Vec::new();
        for t in 0..nt {
            let (off, m) = self.perimeter(surf, t);
            let w: [usize; 3] = std::array::from_fn(|s| self.width(surf.edge((t, s))));
            let side_of = |p: usize| -> (usize, usize) {
                if p < off[1] {
                    (0, p)
                } else if p < off[2] {
                    (1, p - off[1])
                } else {
                    (2, p - off[2])
                }
            };
            let key = |s: usize, q: usize| -> (usize, usize) {
                let e = surf.edge((t, s));
                if surf.is_first_slot((t, s)) {
                    (e, q)
                } else {
                    (e, w[s] - q)
                }
            };
            if m == 0 {
                seg_piece.push(Vec::new());
                piece_keys.push((0..3).map(|s| key(s, 0)).collect());
                piece_corners.push((0..3).map(|i| surf.vertex(t, i)).collect());
                continue;
            }
            let mut other = vec![usize::MAX; m];
            for &(_, _, x, y) in &arcs[t] {
                other[x] = y;
                other[y] = x;
            }
            let mut sp = vec![usize::MAX; m];
            for start in 0..m {
                if sp[start] != usize::MAX {
                    continue;
                }
                let pid = piece_keys.len();
                let mut keys = Vec::new();
                let mut corners = Vec::new();
                let mut i = start;
                loop {
                    sp[i] = pid;
                    let j = (i + 1) % m;
                    let (s0, p0) = side_of(i);
                    let (s1, p1) = side_of(j);
                    if s1 == s0 && p1 == p0 + 1 {
                        keys.push(key(s0, p0 + 1));
                    } else {
                        keys.push(key(s0, p0 + 1));
                        let mut s = s0;
                        loop {
                            s = (s + 1) % 3;
                            corners.push(surf.vertex(t, s));
                            keys.push(key(s, 0));
                            if s == s1 {
                                debug_assert_eq!(p1, 0);
                                break;
                            }
                        }
                    }
                    i = other[j];
                    if i == start {
                        break;
                    }
                }
                piece_keys.push(keys);
                piece_corners.push(corners);
            }
            seg_piece.push(sp);
        }

        let np = piece_keys.len();
        let mut uf: Vec<usize> = (0..np).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let mut first_seen: HashMap<(usize, usize), usize> = HashMap::new();
        for p in 0..np {
            for &k in &piece_keys[p] {
                if let Some(&q) = first_seen.get(&k) {
                    let (a, b) = (find(&mut uf, p), find(&mut uf, q));
                    if a != b {
                        uf[a.max(b)] = a.min(b);
                    }
                } else {
                    first_seen.insert(k, p);
                }
            }
        }
        let mut rid = vec![usize::MAX; np];
        let mut nr = 0;
        for p in 0..np {
            let r = find(&mut uf, p);
            if rid[r] == usize::MAX {
                rid[r] = nr;
                nr += 1;
            }
            rid[p] = rid[r];
        }
        let mut verts: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); nr];
        let mut keys: Vec<std::collections::BTreeSet<(usize, usize)>> = vec![Default::default(); nr];
        let mut faces = vec![0i64; nr];
        for p in 0..np {
            let r = rid[p];
            faces[r] += 1;
            for &v in &piece_corners[p] {
                verts[r].insert(v);
            }
            for &k in &piece_keys[p] {
                keys[r].insert(k);
            }
        }
        let euler: Vec<i64> = (0..nr)
            .map(|r| verts[r].len() as i64 - keys[r].len() as i64 + faces[r])
            .collect();

        let mut boundary = vec![Vec::new(); nr];
        let mut left = vec![usize::MAX; self.curves.len()];
        let mut right = vec![usize::MAX; self.curves.len()];
        for c in self.live_curves() {
            let t = self.curves[c][0].enter.0;
            let off = self.perimeter(surf, t).0;
            let ((s1, p1), (s2, p2)) = self.arc_points(surf, c, 0);
            let x = off[s1] + p1;
            let y = off[s2] + p2;
            let l = rid[seg_piece[t][y]];
            let r = rid[seg_piece[t][x]];
            left[c] = l;
            right[c] = r;
            let (pos_r, neg_r) = if orient[c] >= 0 { (l, r) } else { (r, l) };
            boundary[pos_r].push((c, Side::Positive));
            boundary[neg_r].push((c, Side::Negative));
        }
        RegionData { euler, boundary, left, right }
    }
}

/// Lexicographically minimal rotation of a word.
pub(crate) fn min_rotation(w: &[usize]) -> Vec<usize> {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best = 0;
    for r in 1..n {
        for k in 0..n {
            let a = w[(r + k) % n];
            let b = w[(best + k) % n];
            if a != b {
                if a < b {
                    best = r;
                }
                break;
            }
        }
    }
    (0..n).map(|k| w[(best + k) % n]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation() {
        assert_eq!(min_rotation(&[3, 1, 2, 1, 1]), vec![1, 1, 3, 1, 2]);
        assert_eq!(min_rotation(&[]), Vec::<usize>::new());
    }

    #[test]
    fn trace_torus_curves() {
        let s = CombinatorialSurface::standard(1);
        for w in [[1, 1, 0], [1, 0, 1], [0, 1, 1], [2, 2, 0], [1, 2, 1]] {
            let a = Arrangement::from_weights(&s, &w).unwrap();
            let total: usize = a.curves.iter().map(|c| c.len()).sum();
            assert_eq!(total, w.iter().sum::<usize>());
        }
        let a = Arrangement::from_weights(&s, &[2, 2, 0]).unwrap();
        assert_eq!(a.curves.len(), 2);
    }

    #[test]
    fn regions_sum_to_euler_characteristic() {
        let s = CombinatorialSurface::standard(2);
        let a = Arrangement::from_weights(&s, &vec![2; s.num_edges()]).unwrap();
        let orient = vec![1; a.curves.len()];
        let r = a.regions(&s, &orient);
        assert_eq!(r.euler.iter().sum::<i64>(), s.euler_characteristic());
    }

    #[test]
    fn parallel_copies_sit_on_the_requested_side() {
        let s = CombinatorialSurface::standard(2);
        let mut a = Arrangement::from_weights(&s, &[1, 0, 1, 0, 0, 0, 0, 0, 0]).unwrap_or_else(|_| {
            Arrangement::from_weights(&s, &vec![2; s.num_edges()]).unwrap()
        });
        let c = 0;
        let l = a.push_parallel(&s, c, true, 0);
        let r = a.push_parallel(&s, c, false, 0);
        assert!(a.crossings(&s).is_empty());
        let rd = a.regions(&s, &vec![1; a.curves.len()]);
        // annulus between c and its left copy
        assert_eq!(rd.left[c], rd.right[l]);
        assert_eq!(rd.right[c], rd.left[r]);
        assert_eq!(rd.euler[rd.left[c]], 0);
        assert_eq!(rd.euler[rd.right[c]], 0);
    }
}
