use num_traits::Zero;

use crate::rational::Rational;

use super::cochain::Cochain;
use super::complex::SimplicialComplex;
use super::CohomologyError;

/// The staircase triangulation of `|K| × |L|` on the vertex order
/// `(v, w) ↦ v·|L| + w`, with its two coordinate projections.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    pub complex: SimplicialComplex,
    pub left: SimplicialComplex,
    pub right: SimplicialComplex,
}

/// Monotone lattice paths from `(0,0)` to `(a,b)`.
fn staircases(a: usize, b: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut path = vec![(0, 0)];
    fn walk(i: usize, j: usize, a: usize, b: usize, path: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if i == a && j == b {
            out.push(path.clone());
            return;
        }
        if i < a {
            path.push((i + 1, j));
            walk(i + 1, j, a, b, path, out);
            path.pop();
        }
        if j < b {
            path.push((i, j + 1));
            walk(i, j + 1, a, b, path, out);
            path.pop();
        }
    }
    walk(0, 0, a, b, &mut path, &mut out);
    out
}

pub fn product_complex(left: &SimplicialComplex, right: &SimplicialComplex) -> Result<ProductComplex, CohomologyError> {
    let nl = right.vertex_count();
    let mut facets = Vec::new();
    for s in left.facets() {
        for t in right.facets() {
            for path in staircases(s.len() - 1, t.len() - 1) {
                facets.push(path.iter().map(|&(i, j)| s[i] * nl + t[j]).collect());
            }
        }
    }
    let complex = SimplicialComplex::build(Some(left.vertex_count() * nl), &facets)?;
    Ok(ProductComplex { complex, left: left.clone(), right: right.clone() })
}

impl ProductComplex {
    pub fn vertex(&self, v: usize, w: usize) -> usize {
        v * self.right.vertex_count() + w
    }

    fn pullback(&self, factor: &SimplicialComplex, project: impl Fn(usize) -> usize, p: usize, c: &[Rational]) -> Cochain {
        self.complex
            .simplices(p)
            .iter()
            .map(|s| {
                let image: Vec<usize> = s.iter().map(|&x| project(x)).collect();
                if image.windows(2).any(|w| w[0] >= w[1]) {
                    return Rational::zero();
                }
                factor.index_of(&image).map_or_else(Rational::zero, |i| c[i].clone())
            })
            .collect()
    }

    /// Pullback along the projection to `K`.
    pub fn pullback_left(&self, p: usize, c: &[Rational]) -> Cochain {
        let nl = self.right.vertex_count();
        self.pullback(&self.left, |x| x / nl, p, c)
    }

    /// Pullback along the projection to `L`.
    pub fn pullback_right(&self, p: usize, c: &[Rational]) -> Cochain {
        let nl = self.right.vertex_count();
        self.pullback(&self.right, |x| x % nl, p, c)
    }

    /// The product of vertex maps, `(v, w) ↦ (f v, g w)`.
    pub fn product_map(&self, f: &[usize], g: &[usize]) -> Vec<usize> {
        let nl = self.right.vertex_count();
        (0..self.complex.vertex_count()).map(|x| f[x / nl] * nl + g[x % nl]).collect()
    }
}
