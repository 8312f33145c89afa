//! Minimal position of two curve systems by bigon removal.

use serde::Serialize;

use crate::arrangement::{Arrangement, Step};
use crate::surface::{CombinatorialSurface, Slot};

/// Intersection point of `c` with a component of `b`, listed in order along `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OverlayCrossing {
    /// Component of `c` passing through the point.
    pub c_component: usize,
    /// +1 when the normal of `c` points forward along `b`.
    pub sign: i8,
}

/// Both systems drawn on one surface with all bigons removed.
#[derive(Debug, Clone)]
pub struct Overlay {
    pub(crate) arr: Arrangement,
    /// arrangement curve -> component of its own system
    pub(crate) component: Vec<usize>,
    crossings: Vec<Vec<OverlayCrossing>>,
    pub(crate) removed_bigons: usize,
}

impl Overlay {
    /// Crossing lists, one per component of `b`.
    pub fn crossings_along_b(&self) -> &[Vec<OverlayCrossing>] {
        &self.crossings
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.iter().map(|v| v.len()).sum()
    }

    pub fn algebraic_intersection(&self) -> i64 {
        self.crossings.iter().flatten().map(|x| x.sign as i64).sum()
    }

    pub fn bigons_removed(&self) -> usize {
        self.removed_bigons
    }
}

/// A crossing seen from one curve: (step, ordering key, other curve, other step, other key).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Along {
    pub step: usize,
    pub key: usize,
    pub other: usize,
    pub other_step: usize,
    pub other_key: usize,
    /// this curve passes from the other's right to its left
    pub right_to_left: bool,
}

/// Crossings of every curve, sorted along the curve.
pub(crate) fn crossings_along(surf: &CombinatorialSurface, arr: &Arrangement) -> Vec<Vec<Along>> {
    let mut along: Vec<Vec<Along>> = vec![Vec::new(); arr.curves.len()];
    for x in arr.crossings(surf) {
        along[x.curve_a].push(Along {
            step: x.step_a,
            key: x.key_a,
            other: x.curve_b,
            other_step: x.step_b,
            other_key: x.key_b,
            right_to_left: x.a_right_to_left,
        });
        along[x.curve_b].push(Along {
            step: x.step_b,
            key: x.key_b,
            other: x.curve_a,
            other_step: x.step_a,
            other_key: x.key_a,
            right_to_left: !x.a_right_to_left,
        });
    }
    for v in along.iter_mut() {
        v.sort_by_key(|a| (a.step, a.key));
    }
    along
}

fn forward_len(n: usize, from: (usize, usize), to: (usize, usize)) -> usize {
    if to > from {
        to.0 - from.0
    } else {
        to.0 + n - from.0
    }
}

/// Strands and entry slots met walking from arc `k1` to arc `k2`.
fn forward_path(steps: &[Step], k1: usize, len: usize) -> Vec<Step> {
    let n = steps.len();
    (1..=len).map(|i| steps[(k1 + i) % n]).collect()
}

fn backward_path(surf: &CombinatorialSurface, steps: &[Step], k1: usize, len: usize) -> Vec<Step> {
    let n = steps.len();
    (0..len)
        .map(|i| {
            let st = steps[(k1 + n * len - i) % n];
            Step { strand: st.strand, enter: surf.partner(st.enter) }
        })
        .collect()
}

/// Removes one bigon between a curve of `a_side` and one outside it.
/// Returns false when there is none.
pub(crate) fn remove_one_bigon(
    surf: &CombinatorialSurface,
    arr: &mut Arrangement,
    a_side: &dyn Fn(usize) -> bool,
) -> bool {
    let along = crossings_along(surf, arr);
    let live: Vec<usize> = arr.live_curves().collect();
    for y in live {
        if a_side(y) {
            continue;
        }
        let ly = &along[y];
        let ny = arr.curves[y].len();
        let cnt = ly.len();
        if cnt < 2 {
            continue;
        }
        for i in 0..cnt {
            let p = ly[i];
            let q = ly[(i + 1) % cnt];
            if p.other != q.other || !a_side(p.other) {
                continue;
            }
            let x = p.other;
            let nx = arr.curves[x].len();
            let lenb = forward_len(ny, (p.step, p.key), (q.step, q.key));
            if lenb == 0 {
                continue;
            }
            let bpath = forward_path(&arr.curves[y], p.step, lenb);
            let lx = &along[x];
            let ip = lx
                .iter()
                .position(|a| a.step == p.other_step && a.key == p.other_key)
                .expect("crossing listed on both curves");
            let iq = lx
                .iter()
                .position(|a| a.step == q.other_step && a.key == q.other_key)
                .expect("crossing listed on both curves");
            let m = lx.len();
            let mut cpath: Option<Vec<Step>> = None;
            if (ip + 1) % m == iq {
                let len = forward_len(nx, (lx[ip].step, lx[ip].key), (lx[iq].step, lx[iq].key));
                if len == lenb {
                    cpath = Some(forward_path(&arr.curves[x], lx[ip].step, len));
                }
            }
            let slots = |v: &Vec<Step>| -> Vec<Slot> { v.iter().map(|s| s.enter).collect() };
            if cpath.as_ref().map(|c| slots(c) != slots(&bpath)).unwrap_or(true) {
                cpath = None;
                if (iq + 1) % m == ip {
                    let len = forward_len(nx, (lx[iq].step, lx[iq].key), (lx[ip].step, lx[ip].key));
                    if len == lenb {
                        let c = backward_path(surf, &arr.curves[x], lx[ip].step, len);
                        if slots(&c) == slots(&bpath) {
                            cpath = Some(c);
                        }
                    }
                }
            }
            if let Some(cp) = cpath {
                for (bs, cs) in bpath.iter().zip(cp.iter()) {
                    arr.swap_adjacent(bs.strand, cs.strand);
                }
                return true;
            }
        }
    }
    false
}

pub(crate) fn remove_all_bigons(
    surf: &CombinatorialSurface,
    arr: &mut Arrangement,
    a_side: &dyn Fn(usize) -> bool,
) -> usize {
    let mut n = 0;
    while remove_one_bigon(surf, arr, a_side) {
        n += 1;
    }
    n
}

/// Builds the overlay of `c` (curves labelled 0) and `b` (labelled 1), both
/// already oriented by traced direction.
pub(crate) fn build_overlay(
    surf: &CombinatorialSurface,
    c: &Arrangement,
    c_orient: &[i8],
    b: &Arrangement,
    b_orient: &[i8],
) -> Overlay {
    let orient = |arr: &Arrangement, o: &[i8], label: usize| -> (Arrangement, Vec<usize>) {
        let mut a = arr.clone();
        let mut comp = Vec::new();
        let mut idx = 0;
        for k in 0..a.curves.len() {
            if a.curves[k].is_empty() {
                continue;
            }
            if o[k] < 0 {
                a.reverse_curve(surf, k);
            }
            a.label[k] = label;
            comp.push(idx);
            idx += 1;
        }
        a.compact();
        (a, comp)
    };
    let (ca, ccomp) = orient(c, c_orient, 0);
    let (ba, bcomp) = orient(b, b_orient, 1);
    let (mut arr, _) = ca.merge(&ba);
    let mut component = ccomp;
    component.extend(bcomp);
    let labels = arr.label.clone();
    let removed = remove_all_bigons(surf, &mut arr, &|k| labels[k] == 0);
    let along = crossings_along(surf, &arr);
    let mut crossings = Vec::new();
    for y in 0..arr.curves.len() {
        if arr.label[y] != 1 {
            continue;
        }
        crossings.push(
            along[y]
                .iter()
                .filter(|a| arr.label[a.other] == 0)
                .map(|a| OverlayCrossing {
                    c_component: component[a.other],
                    // b crossing c from right to left means c goes left to right
                    sign: if a.right_to_left { 1 } else { -1 },
                })
                .collect(),
        );
    }
    Overlay { arr, component, crossings, removed_bigons: removed }
}
