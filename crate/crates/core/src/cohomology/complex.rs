use std::collections::{BTreeSet, HashMap};

use crate::linalg::Matrix;
use crate::rational::int;

use super::CohomologyError;

pub type Simplex = Vec<usize>;

/// A finite simplicial complex with lexicographically ordered simplex lists
/// per degree.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Simplex>,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    /// Downward closure of the facets. Vertices are `0..vertex_count`; when
    /// `vertex_count` is `None` it is one more than the largest label.
    pub fn build(vertex_count: Option<usize>, facets: &[Vec<usize>]) -> Result<Self, CohomologyError> {
        if facets.is_empty() || facets.iter().any(Vec::is_empty) {
            return Err(CohomologyError::EmptyComplex);
        }
        let mut sorted_facets = Vec::with_capacity(facets.len());
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(CohomologyError::DuplicateVertexInFacet(f.clone()));
            }
            sorted_facets.push(s);
        }
        let max_label = sorted_facets.iter().filter_map(|f| f.last()).max().copied().unwrap_or(0);
        let vertex_count = vertex_count.unwrap_or(max_label + 1);
        if max_label >= vertex_count {
            return Err(CohomologyError::VertexOutOfRange { vertex: max_label, count: vertex_count });
        }
        let dim = sorted_facets.iter().map(Vec::len).max().unwrap_or(1) - 1;
        let mut sets: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 1];
        for f in &sorted_facets {
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let face: Simplex = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| f[i]).collect();
                sets[face.len() - 1].insert(face);
            }
        }
        let simplices: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut facets_out: Vec<Simplex> = sorted_facets.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        facets_out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(Self { vertex_count, facets: facets_out, simplices, index })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Number of `p`-simplices (zero outside `0..=dim`).
    pub fn count(&self, p: usize) -> usize {
        self.simplices.get(p).map_or(0, Vec::len)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, p: usize) -> &[Simplex] {
        self.simplices.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let p = s.len().checked_sub(1)?;
        self.index.get(p)?.get(s).copied()
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().all(|f| f.len() == self.dim() + 1)
    }

    /// Boundary of each `p`-simplex as sparse signed `(p−1)`-face indices.
    pub fn boundary_columns(&self, p: usize) -> Vec<Vec<(usize, i64)>> {
        if p == 0 {
            return vec![Vec::new(); self.count(0)];
        }
        self.simplices(p)
            .iter()
            .map(|s| {
                let mut col: Vec<(usize, i64)> = (0..s.len())
                    .map(|i| {
                        let mut face = s.clone();
                        face.remove(i);
                        let idx = self.index_of(&face).expect("complex is closed under faces");
                        (idx, if i % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect()
    }

    /// Dense coboundary `δ_p : C^p → C^{p+1}` (rows are `(p+1)`-simplices).
    pub fn coboundary_dense(&self, p: usize) -> Matrix {
        let rows = self.count(p + 1);
        let cols = self.count(p);
        let mut m = crate::linalg::zeros(rows, cols);
        for (r, col) in self.boundary_columns(p + 1).into_iter().enumerate() {
            for (c, s) in col {
                m[r][c] = int(s);
            }
        }
        m
    }

    /// The same complex with vertex `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, CohomologyError> {
        if perm.len() != self.vertex_count {
            return Err(CohomologyError::BadPermutation(format!("length {} for {} vertices", perm.len(), self.vertex_count)));
        }
        let facets: Vec<Vec<usize>> = self.facets.iter().map(|f| f.iter().map(|&v| perm[v]).collect()).collect();
        Self::build(Some(self.vertex_count), &facets)
    }
}

/// Sorts the image of an ordered simplex, returning it with the sign of the
/// sorting permutation, or `None` if two vertices collide.
pub fn sort_with_sign(mut s: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for i in 1..s.len() {
        let mut j = i;
        while j > 0 && s[j - 1] > s[j] {
            s.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if s.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((s, sign))
}

/// A sparse chain: `(simplex index, coefficient)`.
pub type SparseChain = Vec<(usize, crate::rational::Rational)>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn octahedron() -> SimplicialComplex {
        let mut facets = Vec::new();
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    facets.push(vec![a, b, c]);
                }
            }
        }
        SimplicialComplex::build(None, &facets).unwrap()
    }

    fn torus7() -> SimplicialComplex {
        let mut facets = Vec::new();
        for i in 0..7 {
            facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
            facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
        }
        SimplicialComplex::build(Some(7), &facets).unwrap()
    }

    #[test]
    fn closure_counts() {
        let t = SimplicialComplex::build(None, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(t.f_vector(), vec![3, 3, 1]);
        assert_eq!(octahedron().f_vector(), vec![6, 12, 8]);
        assert_eq!(torus7().f_vector(), vec![7, 21, 14]);
    }

    #[test]
    fn duplicate_vertex_rejected() {
        assert!(matches!(
            SimplicialComplex::build(None, &[vec![0, 1, 1]]),
            Err(CohomologyError::DuplicateVertexInFacet(_))
        ));
    }

    #[test]
    fn coboundary_squares_to_zero() {
        for k in [octahedron(), torus7()] {
            let d0 = k.coboundary_dense(0);
            let d1 = k.coboundary_dense(1);
            assert!(linalg::is_zero_matrix(&linalg::mul(&d1, &d0)));
        }
        let t = SimplicialComplex::build(None, &[vec![0, 1, 2]]).unwrap();
        let d0 = t.coboundary_dense(0);
        assert_eq!(d0.len(), 3);
        assert!(linalg::is_zero_matrix(&linalg::mul(&t.coboundary_dense(1), &d0)));
    }

    #[test]
    fn dense_ranks_match_known_values() {
        let o = octahedron();
        assert_eq!(linalg::rank(&o.coboundary_dense(0)), 5);
        assert_eq!(linalg::rank(&o.coboundary_dense(1)), 7);
        let t = torus7();
        assert_eq!(linalg::rank(&t.coboundary_dense(0)), 6);
        assert_eq!(linalg::rank(&t.coboundary_dense(1)), 13);
    }

    #[test]
    fn sorting_sign() {
        assert_eq!(sort_with_sign(vec![2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(vec![1, 0, 2]), Some((vec![0, 1, 2], -1)));
        assert_eq!(sort_with_sign(vec![1, 1]), None);
    }
}
