//! Integral homology basis built from a tree-cotree decomposition.
//!
//! Algebraic intersection follows `c . z = sum det(c', z')`, so a curve
//! leaving a triangle through the first slot of an edge meets that edge
//! with sign +1.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::surface::{next_side, CombinatorialSurface, Slot};

/// Class in `H_1(S; Z)`, coordinates `(a_1, b_1, ..., a_g, b_g)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyClass(pub Vec<i64>);

impl HomologyClass {
    pub fn zero(genus: usize) -> Self {
        HomologyClass(vec![0; 2 * genus])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn genus(&self) -> usize {
        self.0.len() / 2
    }

    pub fn add(&self, other: &Self) -> Self {
        HomologyClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        HomologyClass(self.0.iter().map(|a| a * k).collect())
    }

    /// Symplectic pairing, `omega(a_i, b_i) = 1`.
    pub fn pairing(&self, other: &Self) -> i64 {
        self.0
            .chunks(2)
            .zip(other.0.chunks(2))
            .map(|(x, y)| x[0] * y[1] - x[1] * y[0])
            .sum()
    }
}

impl std::fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct HomologyBasis {
    /// `2g` integral 1-cycles on the edges, ordered `a_1, b_1, ..., a_g, b_g`.
    chains: Vec<Vec<i64>>,
}

/// Crossing sign for a path that leaves triangle `slot.0` through `slot`.
#[inline]
pub(crate) fn exit_sign(surf: &CombinatorialSurface, slot: Slot) -> i64 {
    if surf.is_first_slot(slot) {
        1
    } else {
        -1
    }
}

/// Walk of directed edges, each given by the slot lying on its left.
pub(crate) type EdgeWalk = Vec<Slot>;

/// Edge crossings of the left pushoff of a closed edge walk.
pub(crate) fn pushoff_crossings(surf: &CombinatorialSurface, walk: &EdgeWalk) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for k in 0..walk.len() {
        let (t, s) = walk[k];
        let leave = walk[(k + 1) % walk.len()];
        let mut cur = (t, next_side(s));
        while cur != leave {
            out.push((surf.edge(cur), exit_sign(surf, cur)));
            let (t2, q) = surf.partner(cur);
            cur = (t2, next_side(q));
        }
    }
    out
}

pub(crate) fn chain_of_walk(surf: &CombinatorialSurface, walk: &EdgeWalk) -> Vec<i64> {
    let mut z = vec![0; surf.num_edges()];
    for &slot in walk {
        z[surf.edge(slot)] += if surf.is_first_slot(slot) { 1 } else { -1 };
    }
    z
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl HomologyBasis {
    pub(crate) fn compute(surf: &CombinatorialSurface) -> Self {
        let ne = surf.num_edges();
        let nv = surf.num_vertices();
        let ends = |e: usize| {
            let (t, s) = surf.edge_slots(e)[0];
            (surf.vertex(t, s), surf.vertex(t, next_side(s)))
        };

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for e in 0..ne {
            let (u, v) = ends(e);
            adj[u].push(e);
            if v != u {
                adj[v].push(e);
            }
        }
        // parent[v] = slot traversed from the parent towards v
        let mut parent: Vec<Option<Slot>> = vec![None; nv];
        let mut in_tree = vec![false; ne];
        let mut seen = vec![false; nv];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &e in &adj[u] {
                let (a, b) = ends(e);
                let [fwd, bwd] = surf.edge_slots(e);
                let (v, slot) = if a == u { (b, fwd) } else { (a, bwd) };
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(slot);
                    in_tree[e] = true;
                    queue.push_back(v);
                }
            }
        }

        let mut in_cotree = vec![false; ne];
        let mut visited = vec![false; surf.num_triangles()];
        fn dual_dfs(
            surf: &CombinatorialSurface,
            t: usize,
            in_tree: &[bool],
            in_cotree: &mut [bool],
            visited: &mut [bool],
        ) {
            visited[t] = true;
            for s in [2, 1, 0] {
                let e = surf.edge((t, s));
                let (u, _) = surf.partner((t, s));
                if !in_tree[e] && !visited[u] {
                    in_cotree[e] = true;
                    dual_dfs(surf, u, in_tree, in_cotree, visited);
                }
            }
        }
        dual_dfs(surf, 0, &in_tree, &mut in_cotree, &mut visited);

        let root_path = |v: usize| -> Vec<Slot> {
            let mut path = Vec::new();
            let mut cur = v;
            while let Some(slot) = parent[cur] {
                path.push(slot);
                cur = surf.vertex(slot.0, slot.1);
            }
            path.reverse();
            path
        };
        let mut walks: Vec<EdgeWalk> = Vec::new();
        for e in 0..ne {
            if in_tree[e] || in_cotree[e] {
                continue;
            }
            let (u, v) = ends(e);
            let mut walk = root_path(u);
            walk.push(surf.edge_slots(e)[0]);
            let back: Vec<Slot> = root_path(v).into_iter().rev().map(|s| surf.partner(s)).collect();
            walk.extend(back);
            walks.push(walk);
        }
        let n = walks.len();
        assert_eq!(n, 2 * surf.genus(), "tree-cotree leftover count");

        let gamma: Vec<Vec<i64>> = walks.iter().map(|w| chain_of_walk(surf, w)).collect();
        let crossings: Vec<Vec<(usize, i64)>> = walks.iter().map(|w| pushoff_crossings(surf, w)).collect();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = crossings[i].iter().map(|&(e, sg)| sg * gamma[j][e]).sum();
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(m[i][j], -m[j][i], "intersection form must be antisymmetric");
            }
        }

        let coeffs = symplectic_reduce(&m);
        let chains = coeffs
            .iter()
            .map(|c| {
                let mut z = vec![0i64; ne];
                for (j, &k) in c.iter().enumerate() {
                    if k != 0 {
                        for e in 0..ne {
                            z[e] += k * gamma[j][e];
                        }
                    }
                }
                z
            })
            .collect();
        HomologyBasis { chains }
    }

    pub fn genus(&self) -> usize {
        self.chains.len() / 2
    }

    /// Basis cycles as integer edge coefficients, `a_1, b_1, ..., a_g, b_g`.
    pub fn chains(&self) -> &[Vec<i64>] {
        &self.chains
    }

    /// Coordinates of a closed curve given its signed edge crossings.
    pub fn class_of_crossings(&self, crossings: &[(usize, i64)]) -> HomologyClass {
        let omega = |z: &Vec<i64>| -> i64 { crossings.iter().map(|&(e, s)| s * z[e]).sum() };
        let mut x = Vec::with_capacity(self.chains.len());
        for pair in self.chains.chunks(2) {
            x.push(omega(&pair[1]));
            x.push(-omega(&pair[0]));
        }
        HomologyClass(x)
    }

    /// Pairwise intersection numbers of the basis cycles.
    pub fn intersection_matrix(&self, surf: &CombinatorialSurface) -> Vec<Vec<i64>> {
        let walks: Vec<Vec<(usize, i64)>> = self
            .chains
            .iter()
            .map(|z| chain_pushoff_crossings(surf, z))
            .collect();
        self.chains
            .iter()
            .enumerate()
            .map(|(i, _)| self.chains.iter().map(|z| walks[i].iter().map(|&(e, s)| s * z[e]).sum()).collect())
            .collect()
    }
}

/// Pushoff crossings of an integral cycle, decomposed into closed walks.
fn chain_pushoff_crossings(surf: &CombinatorialSurface, z: &[i64]) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for walk in decompose_cycle(surf, z) {
        out.extend(pushoff_crossings(surf, &walk));
    }
    out
}

/// Splits an integral 1-cycle into closed edge walks.
pub(crate) fn decompose_cycle(surf: &CombinatorialSurface, z: &[i64]) -> Vec<EdgeWalk> {
    let mut remaining: Vec<i64> = z.to_vec();
    // outgoing directed slots at each vertex
    let tail = |slot: Slot| surf.vertex(slot.0, slot.1);
    let head = |slot: Slot| surf.vertex(slot.0, next_side(slot.1));
    let mut walks = Vec::new();
    loop {
        let start = match (0..remaining.len()).find(|&e| remaining[e] != 0) {
            Some(e) => e,
            None => break,
        };
        let [a, b] = surf.edge_slots(start);
        let first = if remaining[start] > 0 { a } else { b };
        let mut walk = vec![first];
        remaining[start] -= if remaining[start] > 0 { 1 } else { -1 };
        let origin = tail(first);
        let mut at = head(first);
        while at != origin {
            let mut found = None;
            for e in 0..remaining.len() {
                if remaining[e] == 0 {
                    continue;
                }
                let [a, b] = surf.edge_slots(e);
                let slot = if remaining[e] > 0 { a } else { b };
                if tail(slot) == at {
                    found = Some((e, slot));
                    break;
                }
            }
            let (e, slot) = found.expect("integral cycle has a balanced boundary");
            remaining[e] -= if remaining[e] > 0 { 1 } else { -1 };
            walk.push(slot);
            at = head(slot);
        }
        walks.push(walk);
    }
    walks
}

/// Integral symplectic basis for a unimodular antisymmetric form, as
/// coefficient vectors over the input generators.
fn symplectic_reduce(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let form = |u: &[i64], v: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..n {
            if u[i] != 0 {
                s += u[i] * dot(&m[i], v);
            }
        }
        s
    };
    let mut pool: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    while !pool.is_empty() {
        let a = pool.remove(0);
        let bi = loop {
            let vals: Vec<i64> = pool.iter().map(|r| form(&a, r)).collect();
            let nz: Vec<usize> = (0..vals.len()).filter(|&j| vals[j] != 0).collect();
            assert!(!nz.is_empty(), "intersection form is degenerate");
            let piv = *nz.iter().min_by_key(|&&j| (vals[j].abs(), j)).unwrap();
            if nz.len() == 1 {
                assert_eq!(vals[piv].abs(), 1, "intersection form is not unimodular");
                break piv;
            }
            let pv = pool[piv].clone();
            for &j in &nz {
                if j != piv {
                    let q = vals[j] / vals[piv];
                    for (x, y) in pool[j].iter_mut().zip(&pv) {
                        *x -= q * y;
                    }
                }
            }
        };
        let mut b = pool.remove(bi);
        if form(&a, &b) < 0 {
            b.iter_mut().for_each(|x| *x = -*x);
        }
        for r in pool.iter_mut() {
            let rb = form(r, &b);
            let ra = form(r, &a);
            for i in 0..n {
                r[i] += -rb * a[i] + ra * b[i];
            }
        }
        out.push(a);
        out.push(b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard_form(g: usize) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; 2 * g]; 2 * g];
        for i in 0..g {
            m[2 * i][2 * i + 1] = 1;
            m[2 * i + 1][2 * i] = -1;
        }
        m
    }

    #[test]
    fn basis_is_symplectic() {
        for g in 1..=4 {
            let s = CombinatorialSurface::standard(g);
            let basis = s.homology_basis().unwrap();
            assert_eq!(basis.intersection_matrix(&s), standard_form(g));
        }
    }

    #[test]
    fn basis_cycles_are_closed() {
        let s = CombinatorialSurface::standard(2);
        for z in s.homology_basis().unwrap().chains() {
            let mut bal = vec![0i64; s.num_vertices()];
            for (e, &k) in z.iter().enumerate() {
                let (t, sd) = s.edge_slots(e)[0];
                bal[s.vertex(t, sd)] -= k;
                bal[s.vertex(t, next_side(sd))] += k;
            }
            assert!(bal.iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn reduction_handles_scrambled_forms() {
        let m = vec![
            vec![0, 1, 1, 1],
            vec![-1, 0, 1, 2],
            vec![-1, -1, 0, 2],
            vec![-1, -2, -2, 0],
        ];
        let c = symplectic_reduce(&m);
        let f = |u: &[i64], v: &[i64]| -> i64 {
            (0..4).map(|i| u[i] * (0..4).map(|j| m[i][j] * v[j]).sum::<i64>()).sum()
        };
        let got: Vec<Vec<i64>> = c.iter().map(|u| c.iter().map(|v| f(u, v)).collect()).collect();
        assert_eq!(got, standard_form(2));
    }

    #[test]
    fn pairing_is_antisymmetric() {
        let x = HomologyClass(vec![1, 2, -1, 3]);
        let y = HomologyClass(vec![0, 1, 4, -2]);
        assert_eq!(x.pairing(&y), -y.pairing(&x));
        assert_eq!(x.pairing(&x), 0);
    }
}
