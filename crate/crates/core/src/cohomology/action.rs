use std::collections::{BTreeSet, HashMap};

use super::complex::SimplicialComplex;
use super::CohomologyError;

pub type Permutation = Vec<usize>;

/// A finite group acting on vertices, with its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialGroupAction {
    /// `elements[0]` is the identity.
    elements: Vec<Permutation>,
    /// `table[a][b]` is the index of `a·b` (apply `b` first).
    table: Vec<Vec<usize>>,
}

/// `(a ∘ b)(v) = a(b(v))`.
pub fn compose(a: &[usize], b: &[usize]) -> Permutation {
    b.iter().map(|&v| a[v]).collect()
}

pub fn inverse(a: &[usize]) -> Permutation {
    let mut inv = vec![0; a.len()];
    for (i, &v) in a.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| v < p.len() && !std::mem::replace(&mut seen[v], true))
}

impl SimplicialGroupAction {
    pub fn trivial(n: usize) -> Self {
        Self { elements: vec![(0..n).collect()], table: vec![vec![0]] }
    }

    /// Closure of the generators under composition; `cap` bounds the order.
    pub fn generated(n: usize, generators: &[Permutation], cap: usize) -> Result<Self, CohomologyError> {
        for g in generators {
            if g.len() != n || !is_permutation(g) {
                return Err(CohomologyError::BadPermutation(format!("{g:?} on {n} vertices")));
            }
        }
        let mut elements: Vec<Permutation> = vec![(0..n).collect()];
        let mut index: HashMap<Permutation, usize> = HashMap::from([(elements[0].clone(), 0)]);
        let mut frontier = 0;
        while frontier < elements.len() {
            let cur = elements[frontier].clone();
            frontier += 1;
            for g in generators {
                let next = compose(g, &cur);
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(CohomologyError::GroupTooLarge(cap));
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
        }
        Self::from_elements(elements)
    }

    /// Full element list; the multiplication table is derived and closure
    /// checked.
    pub fn from_elements(elements: Vec<Permutation>) -> Result<Self, CohomologyError> {
        let n = elements.first().map_or(0, Vec::len);
        if elements.iter().any(|g| g.len() != n || !is_permutation(g)) {
            return Err(CohomologyError::BadPermutation("elements must be permutations of one vertex set".into()));
        }
        let identity: Permutation = (0..n).collect();
        let Some(id_pos) = elements.iter().position(|g| *g == identity) else {
            return Err(CohomologyError::NotAGroup("identity missing".into()));
        };
        let mut elements = elements;
        elements.swap(0, id_pos);
        let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
        if index.len() != elements.len() {
            return Err(CohomologyError::NotAGroup("repeated element".into()));
        }
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (a, ga) in elements.iter().enumerate() {
            for (b, gb) in elements.iter().enumerate() {
                table[a][b] = *index
                    .get(&compose(ga, gb))
                    .ok_or_else(|| CohomologyError::NotAGroup(format!("product of elements {a} and {b} missing")))?;
            }
        }
        Ok(Self { elements, table })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.elements[0].len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// The same group acting after relabelling vertices by `perm`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let inv = inverse(perm);
        let elements = self.elements.iter().map(|g| compose(perm, &compose(g, &inv))).collect();
        Self { elements, table: self.table.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionVerdict {
    pub homomorphism: bool,
    pub simplicial: bool,
    pub witness: Option<String>,
}

impl ActionVerdict {
    pub fn passed(&self) -> bool {
        self.homomorphism && self.simplicial
    }
}

/// Homomorphism against the stored table and facet-set preservation.
pub fn verify_action(complex: &SimplicialComplex, action: &SimplicialGroupAction) -> ActionVerdict {
    let mut witness = None;
    if action.vertex_count() != complex.vertex_count() {
        return ActionVerdict {
            homomorphism: false,
            simplicial: false,
            witness: Some(format!("action on {} vertices, complex has {}", action.vertex_count(), complex.vertex_count())),
        };
    }
    let els = action.elements();
    let mut homomorphism = true;
    'outer: for (a, ga) in els.iter().enumerate() {
        for (b, gb) in els.iter().enumerate() {
            if compose(ga, gb) != els[action.table()[a][b]] {
                homomorphism = false;
                witness = Some(format!("elements {a}, {b} violate the table"));
                break 'outer;
            }
        }
    }
    let facets: BTreeSet<Vec<usize>> = complex.facets().iter().cloned().collect();
    let mut simplicial = true;
    'facets: for g in els {
        for f in complex.facets() {
            let mut image: Vec<usize> = f.iter().map(|&v| g[v]).collect();
            image.sort_unstable();
            if !facets.contains(&image) {
                simplicial = false;
                witness.get_or_insert_with(|| format!("{g:?} maps facet {f:?} to non-facet {image:?}"));
                break 'facets;
            }
        }
    }
    ActionVerdict { homomorphism, simplicial, witness }
}
