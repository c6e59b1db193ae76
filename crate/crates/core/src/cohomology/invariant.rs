use num_traits::Zero;

use crate::linalg::{self, Matrix};
use crate::rational::{int, Rational};

use super::action::SimplicialGroupAction;
use super::cochain::{pair, push_chain, Cochain, CohomologyData};
use super::CohomologyError;

/// The matrix of `g^*` on `H^p` in the cocycle basis:
/// `G[j][i] = ⟨h_i, g_* z_j⟩`.
pub fn induced_matrix(data: &CohomologyData, p: usize, perm: &[usize]) -> Result<Matrix, CohomologyError> {
    let basis = data.basis(p);
    let mut g = linalg::zeros(basis.cycles.len(), basis.cocycles.len());
    for (j, z) in basis.cycles.iter().enumerate() {
        let pushed = push_chain(data.complex(), p, perm, z)
            .ok_or_else(|| CohomologyError::NotSimplicial(format!("{perm:?}")))?;
        for (i, h) in basis.cocycles.iter().enumerate() {
            g[j][i] = pair(h, &pushed);
        }
    }
    Ok(g)
}

#[derive(Clone, Debug)]
pub struct InvariantDegree {
    /// `P = (1/|Γ|) Σ g^*` on `H^p`.
    pub projector: Matrix,
    /// Coordinates (in the cocycle basis) of a basis of the invariant part.
    pub basis: Vec<Vec<Rational>>,
    /// Cocycles representing `basis`.
    pub cocycles: Vec<Cochain>,
}

impl InvariantDegree {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an invariant class in `basis`, or `None` if the class
    /// is not invariant.
    pub fn express(&self, coords: &[Rational]) -> Option<Vec<Rational>> {
        if self.basis.is_empty() {
            return coords.iter().all(Zero::is_zero).then(Vec::new);
        }
        let b = linalg::transpose(&self.basis);
        linalg::solve(&b, coords)
    }
}

#[derive(Clone, Debug)]
pub struct InvariantCohomology {
    pub degrees: Vec<InvariantDegree>,
}

impl InvariantCohomology {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(InvariantDegree::dim).collect()
    }
}

pub fn invariant_projection(
    data: &CohomologyData,
    action: &SimplicialGroupAction,
    p: usize,
) -> Result<InvariantDegree, CohomologyError> {
    let b = data.basis(p).cycles.len();
    let mut sum = linalg::zeros(b, b);
    for g in action.elements() {
        let m = induced_matrix(data, p, g)?;
        for (srow, mrow) in sum.iter_mut().zip(m) {
            for (s, x) in srow.iter_mut().zip(mrow) {
                *s += x;
            }
        }
    }
    let inv = Rational::new(1.into(), (action.order() as i64).into());
    let projector: Matrix = sum.into_iter().map(|r| r.into_iter().map(|x| x * &inv).collect()).collect();
    let basis = linalg::column_space_basis(&projector);
    let cocycles = basis.iter().map(|c| data.cocycle(p, c)).collect();
    Ok(InvariantDegree { projector, basis, cocycles })
}

pub fn invariant_cohomology(data: &CohomologyData, action: &SimplicialGroupAction) -> Result<InvariantCohomology, CohomologyError> {
    let degrees = (0..=data.dim()).map(|p| invariant_projection(data, action, p)).collect::<Result<_, _>>()?;
    Ok(InvariantCohomology { degrees })
}

/// `P² = P` and `rank P = trace P`.
pub fn projector_is_idempotent(p: &Matrix) -> bool {
    let sq = linalg::mul(p, p);
    sq == *p && int(linalg::rank(p) as i64) == linalg::trace(p)
}
