//! Integer chains of oriented edges and faces.

use std::collections::BTreeMap;

/// An edge with an integer coefficient. `vertices` is sorted; a positive
/// coefficient means the edge is traversed from `vertices[0]` to `vertices[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedEdge {
    pub vertices: [usize; 2],
    pub coeff: i32,
}

impl SignedEdge {
    /// The directed edge `from → to`.
    pub fn directed(from: usize, to: usize) -> Self {
        assert_ne!(from, to, "degenerate edge");
        if from < to {
            Self {
                vertices: [from, to],
                coeff: 1,
            }
        } else {
            Self {
                vertices: [to, from],
                coeff: -1,
            }
        }
    }

    pub fn tail(&self) -> usize {
        if self.coeff > 0 {
            self.vertices[0]
        } else {
            self.vertices[1]
        }
    }

    pub fn head(&self) -> usize {
        if self.coeff > 0 {
            self.vertices[1]
        } else {
            self.vertices[0]
        }
    }

    pub fn reversed(&self) -> Self {
        Self {
            vertices: self.vertices,
            coeff: -self.coeff,
        }
    }
}

/// A face with an integer coefficient; `vertices` is sorted and the
/// coefficient is relative to that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedFace {
    pub vertices: [usize; 3],
    pub coeff: i32,
}

impl SignedFace {
    /// The face oriented as `(a, b, c)`.
    pub fn oriented(a: usize, b: usize, c: usize) -> Self {
        let (vertices, parity) = sort3([a, b, c]);
        Self {
            vertices,
            coeff: parity,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            vertices: self.vertices,
            coeff: -self.coeff,
        }
    }
}

/// Sorts three indices, returning the permutation sign.
pub fn sort3(mut v: [usize; 3]) -> ([usize; 3], i32) {
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}

/// Sorts four indices, returning the permutation sign.
pub fn sort4(mut v: [usize; 4]) -> ([usize; 4], i32) {
    let mut sign = 1;
    for i in 0..4 {
        for j in 0..3 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeChain {
    pub edges: Vec<SignedEdge>,
}

impl EdgeChain {
    pub fn new(edges: Vec<SignedEdge>) -> Self {
        Self { edges }
    }

    /// Closed walk through the listed vertices (last joins back to first).
    pub fn closed_walk(vertices: &[usize]) -> Self {
        let n = vertices.len();
        Self {
            edges: (0..n)
                .map(|i| SignedEdge::directed(vertices[i], vertices[(i + 1) % n]))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self {
            edges: self.edges.iter().rev().map(SignedEdge::reversed).collect(),
        }
    }

    /// Net vertex coefficients of the boundary (head minus tail).
    pub fn boundary(&self) -> BTreeMap<usize, i32> {
        let mut acc = BTreeMap::new();
        for e in &self.edges {
            *acc.entry(e.vertices[1]).or_insert(0) += e.coeff;
            *acc.entry(e.vertices[0]).or_insert(0) -= e.coeff;
        }
        acc.retain(|_, v| *v != 0);
        acc
    }

    pub fn is_closed(&self) -> bool {
        self.boundary().is_empty()
    }

    /// True when every vertex has exactly one incoming and one outgoing unit
    /// edge and the edges form a single cycle.
    pub fn is_simple_cycle(&self) -> bool {
        if self.edges.is_empty() || self.edges.iter().any(|e| e.coeff.abs() != 1) {
            return false;
        }
        let mut next = BTreeMap::new();
        for e in &self.edges {
            if next.insert(e.tail(), e.head()).is_some() {
                return false;
            }
        }
        let start = self.edges[0].tail();
        let mut v = start;
        for _ in 0..self.edges.len() {
            match next.get(&v) {
                Some(&w) => v = w,
                None => return false,
            }
        }
        v == start && next.len() == self.edges.len()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().flat_map(|e| e.vertices).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaceChain {
    pub faces: Vec<SignedFace>,
}

impl FaceChain {
    pub fn new(faces: Vec<SignedFace>) -> Self {
        Self { faces }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Net boundary with cancellation, as sorted edges with nonzero coefficients.
    pub fn boundary(&self) -> EdgeChain {
        let mut acc: BTreeMap<[usize; 2], i32> = BTreeMap::new();
        for f in &self.faces {
            let [a, b, c] = f.vertices;
            *acc.entry([a, b]).or_insert(0) += f.coeff;
            *acc.entry([a, c]).or_insert(0) -= f.coeff;
            *acc.entry([b, c]).or_insert(0) += f.coeff;
        }
        EdgeChain {
            edges: acc
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(vertices, coeff)| SignedEdge { vertices, coeff })
                .collect(),
        }
    }

    pub fn edge_set(&self) -> Vec<[usize; 2]> {
        let mut v: Vec<[usize; 2]> = self
            .faces
            .iter()
            .flat_map(|f| {
                let [a, b, c] = f.vertices;
                [[a, b], [a, c], [b, c]]
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_edges_round_trip() {
        let e = SignedEdge::directed(5, 2);
        assert_eq!(e.vertices, [2, 5]);
        assert_eq!((e.tail(), e.head()), (5, 2));
        assert_eq!(e.reversed().tail(), 2);
    }

    #[test]
    fn square_walk_is_closed_and_simple() {
        let c = EdgeChain::closed_walk(&[0, 1, 2, 3]);
        assert!(c.is_closed());
        assert!(c.is_simple_cycle());
        let open = EdgeChain::new(c.edges[..3].to_vec());
        assert!(!open.is_closed());
    }

    #[test]
    fn boundary_of_two_triangles_cancels_the_diagonal() {
        let chain = FaceChain::new(vec![SignedFace::oriented(0, 1, 3), SignedFace::oriented(0, 3, 2)]);
        let b = chain.boundary();
        assert_eq!(b.len(), 4);
        assert!(b.is_closed());
        assert!(!b.edges.iter().any(|e| e.vertices == [0, 3]));
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(sort3([2, 0, 1]), ([0, 1, 2], 1));
        assert_eq!(sort3([1, 0, 2]), ([0, 1, 2], -1));
        assert_eq!(sort4([3, 2, 1, 0]), ([0, 1, 2, 3], 1));
        assert_eq!(sort4([1, 0, 2, 3]), ([0, 1, 2, 3], -1));
    }
}
