//! Boundary faces, their connected components, and the surface walks used to
//! cut the boundary along a tunnel loop.

use std::collections::{BTreeMap, HashMap};

use super::chains::{sort3, EdgeChain};
use crate::error::{Error, Result};

/// Boundary faces oriented with outward normal, grouped into components.
#[derive(Clone, Debug)]
pub struct BoundaryExtraction {
    pub faces: Vec<[usize; 3]>,
    /// Indices into `faces`; component 0 is the outer one.
    pub components: Vec<Vec<usize>>,
}

impl BoundaryExtraction {
    pub fn component_faces(&self, i: usize) -> Vec<[usize; 3]> {
        self.components[i].iter().map(|&f| self.faces[f]).collect()
    }
}

/// The four faces of a positively oriented tet, each with outward orientation.
pub fn outward_faces(t: [usize; 4]) -> [[usize; 3]; 4] {
    let [p0, p1, p2, p3] = t;
    [[p1, p2, p3], [p0, p3, p2], [p0, p1, p3], [p0, p2, p1]]
}

pub fn extract_boundary(vertices: &[[f64; 3]], tets: &[[usize; 4]]) -> Result<BoundaryExtraction> {
    let mut seen: HashMap<[usize; 3], (usize, [usize; 3])> = HashMap::new();
    for &t in tets {
        for f in outward_faces(t) {
            let (key, _) = sort3(f);
            let entry = seen.entry(key).or_insert((0, f));
            entry.0 += 1;
            if entry.0 > 2 {
                return Err(Error::NonManifold {
                    face: key,
                    count: entry.0,
                });
            }
        }
    }
    let mut faces: Vec<([usize; 3], [usize; 3])> = seen
        .into_iter()
        .filter(|(_, (count, _))| *count == 1)
        .map(|(key, (_, f))| (key, f))
        .collect();
    faces.sort_unstable();
    let faces: Vec<[usize; 3]> = faces.into_iter().map(|(_, f)| f).collect();

    // union faces sharing an edge
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut by_edge: HashMap<[usize; 2], usize> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            let e = [a.min(b), a.max(b)];
            if let Some(&j) = by_edge.get(&e) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            } else {
                by_edge.insert(e, i);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..faces.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut components: Vec<Vec<usize>> = groups.into_values().collect();

    let extent = |comp: &Vec<usize>| {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for &fi in comp {
            for &v in &faces[fi] {
                for d in 0..3 {
                    lo[d] = lo[d].min(vertices[v][d]);
                    hi[d] = hi[d].max(vertices[v][d]);
                }
            }
        }
        (0..3).map(|d| hi[d] - lo[d]).product::<f64>()
    };
    let min_vertex = |comp: &Vec<usize>| comp.iter().flat_map(|&f| faces[f]).min().unwrap_or(0);
    if !components.is_empty() {
        let outer = (0..components.len())
            .max_by(|&a, &b| {
                extent(&components[a])
                    .total_cmp(&extent(&components[b]))
                    .then(min_vertex(&components[b]).cmp(&min_vertex(&components[a])))
            })
            .unwrap();
        let s0 = components.remove(outer);
        components.sort_by_key(|c| min_vertex(c));
        components.insert(0, s0);
    }
    Ok(BoundaryExtraction { faces, components })
}

/// Adjacency of an outward-oriented boundary surface.
#[derive(Clone, Debug)]
pub struct BoundarySurface {
    faces: Vec<[usize; 3]>,
    vertex_faces: HashMap<usize, Vec<usize>>,
    edge_faces: HashMap<[usize; 2], Vec<usize>>,
}

impl BoundarySurface {
    pub fn new(faces: Vec<[usize; 3]>) -> Self {
        let mut vertex_faces: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut edge_faces: HashMap<[usize; 2], Vec<usize>> = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for k in 0..3 {
                vertex_faces.entry(f[k]).or_default().push(i);
                let (a, b) = (f[k], f[(k + 1) % 3]);
                edge_faces.entry([a.min(b), a.max(b)]).or_default().push(i);
            }
        }
        Self {
            faces,
            vertex_faces,
            edge_faces,
        }
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn has_edge(&self, e: [usize; 2]) -> bool {
        self.edge_faces.contains_key(&[e[0].min(e[1]), e[0].max(e[1])])
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertex_faces.contains_key(&v)
    }

    /// Sorted boundary edges.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut e: Vec<_> = self.edge_faces.keys().copied().collect();
        e.sort_unstable();
        e
    }

    /// Cuts the surface along the loop and returns, for every boundary edge
    /// touching the loop, the jump `û(head) − û(tail)` of the cut potential
    /// (sorted edge orientation). `û` is 1 on the loop's right-hand copy.
    pub fn cut_potential_jumps(&self, loop_index: usize, chain: &EdgeChain) -> Result<BTreeMap<[usize; 2], i32>> {
        let first = chain.edges.first().map(|e| e.tail()).unwrap_or(0);
        if !chain.is_simple_cycle() {
            return Err(Error::SideAmbiguity {
                loop_index,
                vertex: first,
            });
        }
        let mut prev = HashMap::new();
        let mut next = HashMap::new();
        for e in &chain.edges {
            next.insert(e.tail(), e.head());
            prev.insert(e.head(), e.tail());
        }
        let on_loop: std::collections::HashSet<[usize; 2]> = chain.edges.iter().map(|e| e.vertices).collect();
        for e in self.edges() {
            if next.contains_key(&e[0]) && next.contains_key(&e[1]) && !on_loop.contains(&e) {
                return Err(Error::ChordViolation { loop_index, edge: e });
            }
        }

        // value of û at (face, vertex) corners; absent means 0
        let mut right: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
        for (&p, &o) in &next {
            let i = prev[&p];
            let ambiguous = Error::SideAmbiguity { loop_index, vertex: p };
            let star = self.vertex_faces.get(&p).ok_or(Error::SideAmbiguity { loop_index, vertex: p })?;
            let mut ccw: HashMap<usize, (usize, usize)> = HashMap::new();
            for &fi in star {
                let f = self.faces[fi];
                let k = f.iter().position(|&v| v == p).unwrap();
                let (x, y) = (f[(k + 1) % 3], f[(k + 2) % 3]);
                if ccw.insert(x, (y, fi)).is_some() {
                    return Err(ambiguous);
                }
            }
            let mut cur = o;
            let mut left_side = true;
            for step in 0..star.len() {
                if step > 0 && cur == o {
                    return Err(ambiguous);
                }
                let &(y, fi) = ccw.get(&cur).ok_or(Error::SideAmbiguity { loop_index, vertex: p })?;
                if !left_side {
                    right.insert((fi, p));
                }
                if y == i {
                    left_side = false;
                }
                cur = y;
            }
            if cur != o || left_side {
                return Err(ambiguous);
            }
        }

        let mut jumps = BTreeMap::new();
        for (&e, adjacent) in &self.edge_faces {
            if !next.contains_key(&e[0]) && !next.contains_key(&e[1]) {
                continue;
            }
            let mut value: Option<i32> = None;
            for &fi in adjacent {
                let u = |v: usize| right.contains(&(fi, v)) as i32;
                let d = u(e[1]) - u(e[0]);
                match value {
                    None => value = Some(d),
                    Some(prev) if prev != d => {
                        return Err(Error::SideAmbiguity {
                            loop_index,
                            vertex: if next.contains_key(&e[0]) { e[0] } else { e[1] },
                        })
                    }
                    _ => {}
                }
            }
            if let Some(d) = value.filter(|&d| d != 0) {
                jumps.insert(e, d);
            }
        }
        Ok(jumps)
    }
}
