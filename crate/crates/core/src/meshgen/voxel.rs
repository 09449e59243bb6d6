//! Voxel occupancy and grid-level marker geometry of the canonical domains.

use super::DomainKind;

pub(crate) type GridPoint = [usize; 3];

/// A unit square of the grid plane `x[axis] = origin[axis]`, oriented along
/// `sign · e_axis`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Square {
    pub axis: usize,
    pub origin: GridPoint,
    pub sign: i32,
}

pub(crate) struct VoxelDomain {
    pub n: usize,
    occupied: Vec<bool>,
    pub loops: Vec<Vec<GridPoint>>,
    pub surfaces: Vec<Vec<Square>>,
}

impl VoxelDomain {
    pub fn is_solid(&self, x: usize, y: usize, z: usize) -> bool {
        x < self.n && y < self.n && z < self.n && self.occupied[(x * self.n + y) * self.n + z]
    }

    /// Both voxels adjacent to the square are solid.
    fn square_is_interior(&self, s: &Square) -> bool {
        let p = s.origin;
        if p[s.axis] == 0 {
            return false;
        }
        let mut q = p;
        q[s.axis] -= 1;
        self.is_solid(p[0], p[1], p[2]) && self.is_solid(q[0], q[1], q[2])
    }
}

pub(crate) fn minimum_resolution(kind: DomainKind) -> usize {
    match kind {
        DomainKind::Box | DomainKind::BoxWithTunnel | DomainKind::BoxWithCavity => 4,
        DomainKind::HollowTorus | DomainKind::Fig1Domain => 8,
    }
}

/// Closed walk around the rectangle `[a0,a1] × [b0,b1]` in the plane
/// `x[fixed] = value`, where `a` and `b` are the other two axes in order.
fn rect_loop(fixed: usize, value: usize, (a0, a1): (usize, usize), (b0, b1): (usize, usize)) -> Vec<GridPoint> {
    let (ax, bx) = match fixed {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let point = |a: usize, b: usize| {
        let mut p = [0; 3];
        p[fixed] = value;
        p[ax] = a;
        p[bx] = b;
        p
    };
    let mut walk = Vec::new();
    for a in a0..a1 {
        walk.push(point(a, b0));
    }
    for b in b0..b1 {
        walk.push(point(a1, b));
    }
    for a in (a0 + 1..=a1).rev() {
        walk.push(point(a, b1));
    }
    for b in (b0 + 1..=b1).rev() {
        walk.push(point(a0, b));
    }
    walk
}

/// Squares of the plane `x[axis] = value` with in-plane lower corners in the
/// given ranges (other two axes in increasing order).
fn plane_squares(
    axis: usize,
    value: usize,
    ra: std::ops::Range<usize>,
    rb: std::ops::Range<usize>,
    keep: impl Fn(usize, usize) -> bool,
) -> Vec<Square> {
    let (ax, bx) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut out = Vec::new();
    for a in ra {
        for b in rb.clone() {
            if keep(a, b) {
                let mut origin = [0; 3];
                origin[axis] = value;
                origin[ax] = a;
                origin[bx] = b;
                out.push(Square { axis, origin, sign: 1 });
            }
        }
    }
    out
}

pub(crate) fn build(kind: DomainKind, n: usize) -> VoxelDomain {
    let c = n / 2;
    let solid: Box<dyn Fn(usize, usize, usize) -> bool> = match kind {
        DomainKind::Box => Box::new(|_, _, _| true),
        DomainKind::BoxWithTunnel => Box::new(move |x, y, _| !(in_range(x, c - 1, c + 1) && in_range(y, c - 1, c + 1))),
        DomainKind::BoxWithCavity => Box::new(move |x, y, z| {
            !(in_range(x, c - 1, c + 1) && in_range(y, c - 1, c + 1) && in_range(z, c - 1, c + 1))
        }),
        DomainKind::HollowTorus => Box::new(move |x, y, z| {
            let d = ring_depth(n, x, y);
            d <= 2 && !(d == 1 && in_range(z, 1, n - 1))
        }),
        DomainKind::Fig1Domain => {
            let s = c - 3;
            Box::new(move |x, y, z| {
                let channel = in_range(x, c - 1, c + 1) && in_range(y, c - 1, c + 1);
                let outer = in_range(x, c - 3, c + 3) && in_range(y, c - 3, c + 3);
                let inner = in_range(x, c - 2, c + 2) && in_range(y, c - 2, c + 2);
                let ring = outer && !inner && in_range(z, n - 3, n - 1);
                let cube = in_range(x, 1, 1 + s) && in_range(y, 1, 1 + s) && in_range(z, 1, 1 + s);
                !(channel || ring || cube)
            })
        }
    };
    let mut occupied = vec![false; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                occupied[(x * n + y) * n + z] = solid(x, y, z);
            }
        }
    }
    let mut dom = VoxelDomain {
        n,
        occupied,
        loops: vec![],
        surfaces: vec![],
    };

    let (loops, surfaces): (Vec<Vec<GridPoint>>, Vec<Vec<Square>>) = match kind {
        DomainKind::Box | DomainKind::BoxWithCavity => (vec![], vec![]),
        DomainKind::BoxWithTunnel => {
            let gamma = rect_loop(2, c, (c - 1, c + 1), (c - 1, c + 1));
            let sigma = plane_squares(0, c, c + 1..n, 0..n, |_, _| true);
            (vec![gamma], vec![sigma])
        }
        DomainKind::HollowTorus => {
            // Σ_1 is a poloidal cross-section of the top arm; Σ_2 is the outer
            // ring at height z_hi for x < x0 stepping down to z_lo for x ≥ x0,
            // so the step shares faces with Σ_1.
            let x0 = c;
            let (z_lo, z_hi, z_loop) = (2, c, n - 2);
            let gamma1 = rect_loop(2, z_loop, (0, n), (0, n));
            let gamma2 = rect_loop(1, c, (0, 3), (0, n));
            let sigma1 = plane_squares(0, x0, n - 3..n, 0..n, |_, _| true);
            let mut sigma2 = plane_squares(2, z_hi, 0..x0, 0..n, |x, y| ring_depth(n, x, y) == 0);
            sigma2.extend(plane_squares(2, z_lo, x0..n, 0..n, |x, y| ring_depth(n, x, y) == 0));
            sigma2.extend(plane_squares(0, x0, 0..n, z_lo..z_hi, |y, _| ring_depth(n, x0, y) == 0));
            (vec![gamma1, gamma2], vec![sigma1, sigma2])
        }
        DomainKind::Fig1Domain => {
            let (z_loop, z_cut) = (2, n - 2);
            let gamma1 = rect_loop(2, z_loop, (c - 1, c + 1), (c - 1, c + 1));
            let gamma2 = rect_loop(1, c, (c - 3, c - 2), (n - 3, n - 1));
            let sigma1 = plane_squares(0, c, c + 1..n, 0..n, |_, _| true);
            let sigma2 = plane_squares(2, z_cut, c - 2..c + 2, c - 2..c + 2, |x, y| {
                !(in_range(x, c - 1, c + 1) && in_range(y, c - 1, c + 1))
            });
            (vec![gamma1, gamma2], vec![sigma1, sigma2])
        }
    };
    dom.loops = loops;
    dom.surfaces = surfaces
        .into_iter()
        .map(|s| s.into_iter().filter(|q| dom.square_is_interior(q)).collect())
        .collect();
    dom
}

fn in_range(v: usize, lo: usize, hi: usize) -> bool {
    v >= lo && v < hi
}

/// Chebyshev distance of a voxel column from the outer wall.
fn ring_depth(n: usize, x: usize, y: usize) -> usize {
    x.min(y).min(n - 1 - x).min(n - 1 - y)
}

/// Kuhn split of the unit voxel at `p` into six positively oriented tets.
pub(crate) fn kuhn_tets(p: GridPoint) -> [[GridPoint; 4]; 6] {
    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], true),
        ([1, 2, 0], true),
        ([2, 0, 1], true),
        ([0, 2, 1], false),
        ([2, 1, 0], false),
        ([1, 0, 2], false),
    ];
    let mut out = [[[0; 3]; 4]; 6];
    for (k, (perm, even)) in PERMS.iter().enumerate() {
        let v0 = p;
        let mut v1 = v0;
        v1[perm[0]] += 1;
        let mut v2 = v1;
        v2[perm[1]] += 1;
        let v3 = [p[0] + 1, p[1] + 1, p[2] + 1];
        out[k] = if *even { [v0, v1, v2, v3] } else { [v0, v2, v1, v3] };
    }
    out
}

/// The two Kuhn triangles of a square, each as grid points oriented along `+e_axis`.
pub(crate) fn square_triangles(s: &Square) -> [[GridPoint; 3]; 2] {
    let (a, b) = match s.axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let p = s.origin;
    let mut pa = p;
    pa[a] += 1;
    let mut pb = p;
    pb[b] += 1;
    let mut pab = pa;
    pab[b] += 1;
    // (p, pa, pab) has normal e_a × e_b, which is −e_axis only for axis 1
    if s.axis == 1 {
        [[p, pab, pa], [p, pb, pab]]
    } else {
        [[p, pa, pab], [p, pab, pb]]
    }
}
