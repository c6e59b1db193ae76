use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::linalg::{self, Matrix};
use crate::rational::{int, Rational};

use super::complex::{sort_with_sign, SimplicialComplex};
use super::reduction::{reduce, IntColumn};
use super::CohomologyError;

/// A dense rational cochain indexed by the simplices of one degree.
pub type Cochain = Vec<Rational>;

/// A sparse chain: `(simplex index, coefficient)`.
pub type Chain = Vec<(usize, i64)>;

/// Cohomology of one degree: homology cycles `z_j` and cocycles `h_i` with
/// `⟨h_i, z_j⟩ = δ_ij`, so class coordinates are pairings with the cycles.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    pub cycles: Vec<Chain>,
    pub cocycles: Vec<Cochain>,
}

#[derive(Clone, Debug)]
pub struct CohomologyData {
    complex: Arc<SimplicialComplex>,
    degrees: Vec<DegreeBasis>,
    /// `rank δ_p` for `p = 0..=dim`.
    coboundary_ranks: Vec<usize>,
    offsets: Vec<usize>,
    pub max_entry: i64,
}

impl CohomologyData {
    pub fn compute(complex: Arc<SimplicialComplex>) -> Result<Self, CohomologyError> {
        let dim = complex.dim();
        let mut offsets = vec![0; dim + 2];
        for p in 0..=dim {
            offsets[p + 1] = offsets[p] + complex.count(p);
        }
        let total = offsets[dim + 1];
        let locate = |g: usize| -> (usize, usize) {
            let p = offsets.partition_point(|&o| o <= g) - 1;
            (p, g - offsets[p])
        };

        // homology: columns are boundaries in global order, top degree first
        let mut hom_cols: Vec<IntColumn> = Vec::with_capacity(total);
        let mut co_entries: Vec<Vec<(usize, i64)>> = vec![Vec::new(); total];
        for p in 0..=dim {
            for (local, col) in complex.boundary_columns(p).into_iter().enumerate() {
                let g = offsets[p] + local;
                let gcol: IntColumn = col.iter().map(|&(r, s)| (offsets[p - 1] + r, s)).collect();
                for &(r, s) in &gcol {
                    co_entries[r].push((g, s));
                }
                hom_cols.push(gcol);
            }
        }
        let hom_batches: Vec<Vec<usize>> = (0..=dim).rev().map(|p| (offsets[p]..offsets[p + 1]).collect()).collect();
        let hom = reduce(&hom_cols, &hom_batches)?;

        // cohomology: anti-transposed coboundary, lowest degree first
        let rev = |g: usize| total - 1 - g;
        let mut co_cols: Vec<IntColumn> = vec![Vec::new(); total];
        for (g, entries) in co_entries.into_iter().enumerate() {
            let mut col: IntColumn = entries.into_iter().map(|(r, s)| (rev(r), s)).collect();
            col.sort_unstable();
            co_cols[rev(g)] = col;
        }
        let co_batches: Vec<Vec<usize>> =
            (0..=dim).map(|p| (offsets[p]..offsets[p + 1]).rev().map(rev).collect()).collect();
        let co = reduce(&co_cols, &co_batches)?;

        let mut coboundary_ranks = vec![0; dim + 1];
        for &row in hom.pivots.keys() {
            // a pivot row of degree p comes from a boundary column of degree p + 1
            coboundary_ranks[locate(row).0] += 1;
        }

        let mut degrees = Vec::with_capacity(dim + 1);
        for p in 0..=dim {
            let hom_ess: BTreeSet<usize> =
                hom.zero_columns.keys().copied().filter(|&g| locate(g).0 == p).collect();
            let co_ess: BTreeSet<usize> =
                co.zero_columns.keys().map(|&r| rev(r)).filter(|&g| locate(g).0 == p).collect();
            if hom_ess != co_ess {
                return Err(CohomologyError::Internal(format!("essential simplices differ in degree {p}")));
            }
            let n_p = complex.count(p);
            let cycles: Vec<Chain> = hom_ess
                .iter()
                .map(|g| hom.zero_columns[g].iter().map(|&(r, c)| (r - offsets[p], c)).collect())
                .collect();
            let raw: Vec<Cochain> = hom_ess
                .iter()
                .map(|g| {
                    let mut c = vec![Rational::zero(); n_p];
                    for &(r, v) in &co.zero_columns[&rev(*g)] {
                        c[rev(r) - offsets[p]] = int(v);
                    }
                    c
                })
                .collect();
            let pairing: Matrix = raw.iter().map(|h| cycles.iter().map(|z| pair(h, z)).collect()).collect();
            let inv = linalg::inverse(&pairing)
                .ok_or_else(|| CohomologyError::Internal(format!("singular cycle pairing in degree {p}")))?;
            let cocycles = combine_rows(&inv, &raw);
            degrees.push(DegreeBasis { cycles, cocycles });
        }
        Ok(Self { complex, degrees, coboundary_ranks, offsets, max_entry: hom.max_entry.max(co.max_entry) })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn complex_arc(&self) -> Arc<SimplicialComplex> {
        Arc::clone(&self.complex)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.cycles.len()).collect()
    }

    pub fn coboundary_rank(&self, p: usize) -> usize {
        self.coboundary_ranks.get(p).copied().unwrap_or(0)
    }

    pub fn basis(&self, p: usize) -> &DegreeBasis {
        &self.degrees[p]
    }

    pub fn total_simplices(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Coordinates of the class of a cocycle in the cocycle basis.
    pub fn coordinates(&self, p: usize, c: &[Rational]) -> Vec<Rational> {
        self.degrees[p].cycles.iter().map(|z| pair(c, z)).collect()
    }

    /// The cocycle `Σ coords_i h_i`.
    pub fn cocycle(&self, p: usize, coords: &[Rational]) -> Cochain {
        let basis = &self.degrees[p].cocycles;
        let mut out = vec![Rational::zero(); self.complex.count(p)];
        for (coef, h) in coords.iter().zip(basis) {
            if coef.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(h) {
                if !x.is_zero() {
                    *o += coef * x;
                }
            }
        }
        out
    }

    /// `δc` for a `p`-cochain.
    pub fn coboundary(&self, p: usize, c: &[Rational]) -> Cochain {
        coboundary(&self.complex, p, c)
    }

    pub fn is_cocycle(&self, p: usize, c: &[Rational]) -> bool {
        self.coboundary(p, c).iter().all(Zero::is_zero)
    }

    /// Some `η` with `δη = c`, by dense elimination (small complexes).
    pub fn solve_coboundary(&self, p: usize, c: &[Rational]) -> Option<Cochain> {
        if p == 0 {
            return c.iter().all(Zero::is_zero).then(Vec::new);
        }
        linalg::solve(&self.complex.coboundary_dense(p - 1), c)
    }
}

/// `⟨c, z⟩`.
pub fn pair(c: &[Rational], z: &[(usize, i64)]) -> Rational {
    let mut acc = Rational::zero();
    for &(i, v) in z {
        if !c[i].is_zero() {
            acc += &c[i] * int(v);
        }
    }
    acc
}

fn combine_rows(coeffs: &Matrix, rows: &[Cochain]) -> Vec<Cochain> {
    coeffs
        .iter()
        .map(|cr| {
            let n = rows.first().map_or(0, Vec::len);
            let mut out = vec![Rational::zero(); n];
            for (a, row) in cr.iter().zip(rows) {
                if a.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(row) {
                    if !x.is_zero() {
                        *o += a * x;
                    }
                }
            }
            out
        })
        .collect()
}

pub fn coboundary(complex: &SimplicialComplex, p: usize, c: &[Rational]) -> Cochain {
    complex
        .boundary_columns(p + 1)
        .into_iter()
        .map(|col| {
            col.into_iter().fold(Rational::zero(), |acc, (i, s)| if c[i].is_zero() { acc } else { acc + &c[i] * int(s) })
        })
        .collect()
}

/// Alexander–Whitney cup product `(α ∪ β)(v_0…v_{p+q}) = α(v_0…v_p) β(v_p…v_{p+q})`.
pub fn cup_product(complex: &SimplicialComplex, p: usize, alpha: &[Rational], q: usize, beta: &[Rational]) -> Cochain {
    complex
        .simplices(p + q)
        .iter()
        .map(|s| {
            let a = &alpha[complex.index_of(&s[..=p]).expect("front face")];
            if a.is_zero() {
                return Rational::zero();
            }
            let b = &beta[complex.index_of(&s[p..]).expect("back face")];
            a * b
        })
        .collect()
}

/// Pushforward of a chain by a vertex map, `f_*σ = ±sorted(f(σ))` (zero on
/// collapsed simplices).
pub fn push_chain(complex: &SimplicialComplex, p: usize, perm: &[usize], z: &[(usize, i64)]) -> Option<Chain> {
    let mut acc: HashMap<usize, i64> = HashMap::new();
    for &(i, v) in z {
        let image: Vec<usize> = complex.simplices(p)[i].iter().map(|&x| perm[x]).collect();
        let Some((sorted, sign)) = sort_with_sign(image) else { continue };
        let j = complex.index_of(&sorted)?;
        *acc.entry(j).or_insert(0) += sign * v;
    }
    let mut out: Chain = acc.into_iter().filter(|&(_, v)| v != 0).collect();
    out.sort_unstable();
    Some(out)
}

/// Pullback of a cochain by a vertex permutation, `(g^*c)(σ) = c(g·σ)`.
pub fn pull_cochain(complex: &SimplicialComplex, p: usize, perm: &[usize], c: &[Rational]) -> Option<Cochain> {
    complex
        .simplices(p)
        .iter()
        .map(|s| {
            let image: Vec<usize> = s.iter().map(|&x| perm[x]).collect();
            let (sorted, sign) = sort_with_sign(image)?;
            let j = complex.index_of(&sorted)?;
            Some(&c[j] * int(sign))
        })
        .collect()
}
