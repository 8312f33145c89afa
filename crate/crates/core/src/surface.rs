//! Closed oriented triangulated surfaces given by side gluings.
//!
//! Triangle `t` has corners `v0, v1, v2` in counterclockwise order and side
//! `s` runs from `v_s` to `v_{s+1}`. A gluing of `(t, s)` with `(t', s')` is
//! orientation reversing: `v_s(t)` meets `v_{s'+1}(t')`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::SurfaceError;
use crate::homology::HomologyBasis;

/// A side of a triangle: `(triangle, side)`.
pub type Slot = (usize, usize);

#[inline]
pub(crate) fn next_side(s: usize) -> usize {
    (s + 1) % 3
}

#[inline]
pub(crate) fn prev_side(s: usize) -> usize {
    (s + 2) % 3
}

/// One entry of the JSON gluing list. A third `true` entry marks an
/// orientation preserving identification, which is fixed up by flipping
/// triangles when possible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gluing {
    Plain([usize; 2], [usize; 2]),
    Flagged([usize; 2], [usize; 2], bool),
}

impl Gluing {
    fn parts(&self) -> (Slot, Slot, bool) {
        match *self {
            Gluing::Plain(a, b) => ((a[0], a[1]), (b[0], b[1]), false),
            Gluing::Flagged(a, b, twisted) => ((a[0], a[1]), (b[0], b[1]), twisted),
        }
    }
}

/// Serialized surface description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingData {
    pub triangles: usize,
    pub gluings: Vec<Gluing>,
}

#[derive(Debug, Clone)]
pub struct CombinatorialSurface {
    partner: Vec<[Slot; 3]>,
    edge_of: Vec<[usize; 3]>,
    edge_slots: Vec<[Slot; 2]>,
    vertex_of: Vec<[usize; 3]>,
    n_vertices: usize,
    flipped: Vec<bool>,
    basis: Option<HomologyBasis>,
}

impl CombinatorialSurface {
    pub fn from_gluings(data: &GluingData) -> Result<Self, SurfaceError> {
        let n = data.triangles;
        if n == 0 {
            return Err(SurfaceError::NoTriangles);
        }
        let mut raw: Vec<[Option<(Slot, bool)>; 3]> = vec![[None; 3]; n];
        for g in &data.gluings {
            let (a, b, twisted) = g.parts();
            for &(t, s) in &[a, b] {
                if t >= n || s > 2 {
                    return Err(SurfaceError::InvalidSide { triangle: t, side: s });
                }
            }
            if a == b {
                return Err(SurfaceError::OrientationConflict { triangle: a.0, side: a.1 });
            }
            for &(x, y) in &[(a, b), (b, a)] {
                if raw[x.0][x.1].is_some() {
                    return Err(SurfaceError::SideGluedTwice { triangle: x.0, side: x.1 });
                }
                raw[x.0][x.1] = Some((y, twisted));
            }
        }
        for (t, sides) in raw.iter().enumerate() {
            for (s, p) in sides.iter().enumerate() {
                if p.is_none() {
                    return Err(SurfaceError::UnpairedSide { triangle: t, side: s });
                }
            }
        }

        // propagate orientation flips along the gluing graph
        let mut flipped: Vec<Option<bool>> = vec![None; n];
        flipped[0] = Some(false);
        let mut queue = VecDeque::from([0usize]);
        let mut seen = 1;
        while let Some(t) = queue.pop_front() {
            let ft = flipped[t].unwrap();
            for s in 0..3 {
                let ((u, q), twisted) = raw[t][s].unwrap();
                let want = ft ^ twisted;
                match flipped[u] {
                    None => {
                        flipped[u] = Some(want);
                        seen += 1;
                        queue.push_back(u);
                    }
                    Some(fu) if fu != want => {
                        return Err(SurfaceError::OrientationConflict { triangle: u, side: q });
                    }
                    _ => {}
                }
            }
        }
        if seen < n {
            return Err(SurfaceError::Disconnected);
        }
        let flipped: Vec<bool> = flipped.into_iter().map(|f| f.unwrap()).collect();
        let fix = |(t, s): Slot| if flipped[t] { (t, 2 - s) } else { (t, s) };

        let mut partner = vec![[(0, 0); 3]; n];
        for t in 0..n {
            for s in 0..3 {
                let (other, _) = raw[t][s].unwrap();
                let (ft, fs) = fix((t, s));
                partner[ft][fs] = fix(other);
            }
        }
        Ok(Self::from_partner(partner, flipped))
    }

    fn from_partner(partner: Vec<[Slot; 3]>, flipped: Vec<bool>) -> Self {
        let n = partner.len();
        let mut edge_of = vec![[usize::MAX; 3]; n];
        let mut edge_slots = Vec::with_capacity(3 * n / 2);
        for t in 0..n {
            for s in 0..3 {
                if edge_of[t][s] == usize::MAX {
                    let p = partner[t][s];
                    let e = edge_slots.len();
                    edge_of[t][s] = e;
                    edge_of[p.0][p.1] = e;
                    edge_slots.push([(t, s), p]);
                }
            }
        }

        // corners (t, i) are identified across gluings
        let mut uf: Vec<usize> = (0..3 * n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for t in 0..n {
            for s in 0..3 {
                let (u, q) = partner[t][s];
                for (a, b) in [(3 * t + s, 3 * u + next_side(q)), (3 * t + next_side(s), 3 * u + q)] {
                    let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                    if ra != rb {
                        uf[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let mut label = vec![usize::MAX; 3 * n];
        let mut vertex_of = vec![[0; 3]; n];
        let mut nv = 0;
        for c in 0..3 * n {
            let r = find(&mut uf, c);
            if label[r] == usize::MAX {
                label[r] = nv;
                nv += 1;
            }
            vertex_of[c / 3][c % 3] = label[r];
        }

        let mut surf = CombinatorialSurface {
            partner,
            edge_of,
            edge_slots,
            vertex_of,
            n_vertices: nv,
            flipped,
            basis: None,
        };
        if surf.genus() > 0 {
            surf.basis = Some(HomologyBasis::compute(&surf));
        }
        surf
    }

    /// One-vertex triangulation of the closed surface of genus `g >= 1`,
    /// obtained by fanning the standard `4g`-gon from its first corner.
    pub fn standard(g: usize) -> Self {
        assert!(g >= 1, "standard surfaces start at genus 1");
        Self::from_gluings(&standard_gluings(g)).expect("standard gluing is valid")
    }

    pub fn num_triangles(&self) -> usize {
        self.partner.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_slots.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.num_edges() as i64 + self.num_triangles() as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    /// Side glued to `slot`, in the oriented labelling.
    #[inline]
    pub fn partner(&self, (t, s): Slot) -> Slot {
        self.partner[t][s]
    }

    #[inline]
    pub fn edge(&self, (t, s): Slot) -> usize {
        self.edge_of[t][s]
    }

    /// The two sides of edge `e`; the first one fixes its direction.
    #[inline]
    pub fn edge_slots(&self, e: usize) -> [Slot; 2] {
        self.edge_slots[e]
    }

    #[inline]
    pub fn is_first_slot(&self, slot: Slot) -> bool {
        self.edge_slots[self.edge(slot)][0] == slot
    }

    /// Vertex at corner `i` of triangle `t`.
    #[inline]
    pub fn vertex(&self, t: usize, i: usize) -> usize {
        self.vertex_of[t][i]
    }

    /// Whether triangle `t` was reflected to make the gluings coherent.
    /// Sides of a flipped input triangle are relabelled `s -> 2 - s`.
    pub fn is_flipped(&self, t: usize) -> bool {
        self.flipped[t]
    }

    pub fn homology_basis(&self) -> Result<&HomologyBasis, SurfaceError> {
        self.basis.as_ref().ok_or(SurfaceError::GenusZero)
    }

    /// Gluing list in the oriented labelling, one entry per edge.
    pub fn to_gluings(&self) -> GluingData {
        GluingData {
            triangles: self.num_triangles(),
            gluings: self
                .edge_slots
                .iter()
                .map(|[a, b]| Gluing::Plain([a.0, a.1], [b.0, b.1]))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SurfaceJsonError> {
        let data: GluingData = serde_json::from_str(text)?;
        Ok(Self::from_gluings(&data)?)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SurfaceJsonError {
    #[error(transparent)]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Gluing data for the fan triangulation of `a1 b1 a1^-1 b1^-1 ... `.
pub fn standard_gluings(g: usize) -> GluingData {
    let n = 4 * g - 2;
    // polygon side j sits at this slot
    let side_slot = |j: usize| -> Slot {
        if j == 0 {
            (0, 0)
        } else if j == 4 * g - 1 {
            (n - 1, 2)
        } else {
            (j - 1, 1)
        }
    };
    let mut gluings = Vec::new();
    for k in 0..g {
        for (x, y) in [(4 * k, 4 * k + 2), (4 * k + 1, 4 * k + 3)] {
            let (a, b) = (side_slot(x), side_slot(y));
            gluings.push(Gluing::Plain([a.0, a.1], [b.0, b.1]));
        }
    }
    for t in 0..n - 1 {
        gluings.push(Gluing::Plain([t, 2], [t + 1, 0]));
    }
    GluingData { triangles: n, gluings }
}
