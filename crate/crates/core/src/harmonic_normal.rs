//! Normal harmonic fields as gradients of potentials that are constant on
//! every boundary component, zero on the outer one.

use crate::complex::{Cochain, DeRhamComplex};
use crate::error::{Error, Result};
use crate::solvers::{cg_solve, norm_inf, snap_to_dyadic_grid, SolverConfig, SparseMatrix};

/// Guard bits used when snapping potentials, see [`snap_to_dyadic_grid`].
pub(crate) const SNAP_GUARD_BITS: i32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexClass {
    Interior,
    /// On the outer boundary component, where the potential is 0.
    Outer,
    /// On cavity surface `S_i`, i ≥ 1.
    Cavity(usize),
}

/// Which vertex of a cavity surface carries the shared unknown.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MasterChoice {
    #[default]
    Smallest,
    Largest,
}

#[derive(Clone, Debug)]
pub struct CavityConstrainedSpace {
    pub classes: Vec<VertexClass>,
    /// Unknown carrying each vertex value; `None` on the outer component.
    pub dof: Vec<Option<usize>>,
    /// Master vertex of each cavity surface `S_1 …`.
    pub masters: Vec<usize>,
    pub n_dofs: usize,
}

impl CavityConstrainedSpace {
    pub fn n_cavities(&self) -> usize {
        self.masters.len()
    }

    pub fn dimension(&self) -> usize {
        self.n_dofs
    }

    pub fn master_dof(&self, i: usize) -> usize {
        self.dof[self.masters[i - 1]].unwrap()
    }

    /// `R` mapping unknowns to vertex values.
    pub fn prolongation(&self) -> SparseMatrix {
        let trip: Vec<_> = self
            .dof
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|d| (v, d, 1.0)))
            .collect();
        SparseMatrix::from_triplets(self.dof.len(), self.n_dofs, &trip)
    }

    /// `Rᵀ (D⁰)ᵀ M¹ D⁰ R`
    pub fn reduced_stiffness(&self, complex: &DeRhamComplex) -> SparseMatrix {
        let grad = complex.d(0).matmul(&self.prolongation());
        grad.congruence(complex.mass(1))
    }
}

pub fn build_constrained_space(complex: &DeRhamComplex) -> CavityConstrainedSpace {
    build_constrained_space_with(complex, MasterChoice::Smallest)
}

pub fn build_constrained_space_with(complex: &DeRhamComplex, choice: MasterChoice) -> CavityConstrainedSpace {
    let mesh = complex.mesh();
    let nv = complex.count(0);
    let mut classes = vec![VertexClass::Interior; nv];
    for (i, _) in mesh.boundary_components.iter().enumerate() {
        for v in mesh.component_vertices(i) {
            classes[v] = if i == 0 { VertexClass::Outer } else { VertexClass::Cavity(i) };
        }
    }
    let masters: Vec<usize> = (1..mesh.boundary_components.len())
        .map(|i| {
            let vs = mesh.component_vertices(i);
            match choice {
                MasterChoice::Smallest => vs[0],
                MasterChoice::Largest => *vs.last().unwrap(),
            }
        })
        .collect();
    // unknowns are numbered by the vertex that carries them
    let mut dof = vec![None; nv];
    let mut cavity_dof = vec![0; masters.len()];
    let mut n = 0;
    for v in 0..nv {
        match classes[v] {
            VertexClass::Interior => {
                dof[v] = Some(n);
                n += 1;
            }
            VertexClass::Cavity(i) if masters[i - 1] == v => {
                cavity_dof[i - 1] = n;
                n += 1;
            }
            _ => {}
        }
    }
    for v in 0..nv {
        if let VertexClass::Cavity(i) = classes[v] {
            dof[v] = Some(cavity_dof[i - 1]);
        }
    }
    CavityConstrainedSpace {
        classes,
        dof,
        masters,
        n_dofs: n,
    }
}

/// Sharp indicator of cavity surface `S_j`: 1 on its vertices, 0 elsewhere.
pub fn cavity_indicator(complex: &DeRhamComplex, j: usize) -> Result<Cochain> {
    let n_cav = complex.mesh().boundary_components.len().saturating_sub(1);
    if j == 0 || j > n_cav {
        return Err(Error::IndexOutOfRange { index: j, max: n_cav });
    }
    let mut values = vec![0.0; complex.count(0)];
    for v in complex.mesh().component_vertices(j) {
        values[v] = 1.0;
    }
    Ok(Cochain::new(0, values))
}

#[derive(Clone, Debug)]
pub struct CavityPotential {
    pub phi: Cochain,
    /// Relative residual of the reduced system.
    pub residual: f64,
    pub iterations: usize,
}

/// Solves `K x = e_i` on the constrained space and returns `φ = R x`.
///
/// The potential is snapped to a dyadic grid so that `D¹ D⁰ φ` vanishes in
/// floating point as well.
pub fn solve_cavity_potential(
    complex: &DeRhamComplex,
    space: &CavityConstrainedSpace,
    i: usize,
    config: &SolverConfig,
) -> Result<CavityPotential> {
    if i == 0 || i > space.n_cavities() {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: space.n_cavities(),
        });
    }
    let k = space.reduced_stiffness(complex);
    let mut rhs = vec![0.0; space.n_dofs];
    rhs[space.master_dof(i)] = 1.0;
    let sol = cg_solve(&k, &rhs, config)?;
    let mut phi = space.prolongation().mul_vec(&sol.x);
    snap_to_dyadic_grid(&mut phi, SNAP_GUARD_BITS);
    Ok(CavityPotential {
        phi: Cochain::new(0, phi),
        residual: sol.residual,
        iterations: sol.iterations,
    })
}

#[derive(Clone, Debug)]
pub struct NormalHarmonicBasis {
    pub potentials: Vec<Cochain>,
    /// `v_i = D⁰ φ_i`
    pub fields: Vec<Cochain>,
    pub indicators: Vec<Cochain>,
    /// `G[j][i] = ⟨D⁰ψ_j, v_i⟩_{M¹}`
    pub duality: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: Vec<usize>,
}

impl NormalHarmonicBasis {
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }
}

pub fn normal_harmonic_basis(complex: &DeRhamComplex, config: &SolverConfig) -> Result<NormalHarmonicBasis> {
    normal_harmonic_basis_with(complex, config, MasterChoice::Smallest)
}

pub fn normal_harmonic_basis_with(
    complex: &DeRhamComplex,
    config: &SolverConfig,
    choice: MasterChoice,
) -> Result<NormalHarmonicBasis> {
    let space = build_constrained_space_with(complex, choice);
    let m = space.n_cavities();
    let mut basis = NormalHarmonicBasis {
        potentials: vec![],
        fields: vec![],
        indicators: vec![],
        duality: vec![vec![0.0; m]; m],
        residuals: vec![],
        iterations: vec![],
    };
    for i in 1..=m {
        let pot = solve_cavity_potential(complex, &space, i, config)?;
        basis.fields.push(complex.apply_d(&pot.phi)?);
        basis.potentials.push(pot.phi);
        basis.residuals.push(pot.residual);
        basis.iterations.push(pot.iterations);
        basis.indicators.push(cavity_indicator(complex, i)?);
    }
    let m1 = complex.mass(1);
    for j in 0..m {
        let gpsi = complex.apply_d(&basis.indicators[j])?;
        for i in 0..m {
            basis.duality[j][i] = m1.bilinear(&gpsi.values, &basis.fields[i].values);
        }
    }
    Ok(basis)
}

/// Membership of a 1-cochain in the normal harmonic space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalMembership {
    pub max_boundary_dof: f64,
    pub max_curl: f64,
    /// `max_τ |⟨D⁰τ, v⟩_{M¹}| / ‖v‖_{M¹}` over interior nodal functions τ.
    pub weak_divergence: f64,
}

pub fn normal_membership(complex: &DeRhamComplex, v: &Cochain) -> Result<NormalMembership> {
    if v.degree != 1 {
        return Err(Error::DegreeOutOfRange(v.degree));
    }
    let max_boundary_dof = complex
        .boundary_indices(1)
        .iter()
        .fold(0.0f64, |m, &e| m.max(v.values[e].abs()));
    let max_curl = norm_inf(&complex.apply_d(v)?.values);
    let m1v = complex.mass(1).mul_vec(&v.values);
    let div = complex.d(0).mul_vec_transposed(&m1v);
    let norm = complex.mass_norm(v);
    let worst = complex
        .interior_indices(0)
        .iter()
        .fold(0.0f64, |m, &i| m.max(div[i].abs()));
    Ok(NormalMembership {
        max_boundary_dof,
        max_curl,
        weak_divergence: if norm > 0.0 { worst / norm } else { worst },
    })
}
