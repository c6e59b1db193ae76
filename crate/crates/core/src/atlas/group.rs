use super::matrix::{CycloMatrix, UnitaryMatrix};
use super::AtlasError;
use crate::cyclotomic::Cyclotomic;

/// A finite subgroup of U(n) given by its exact elements.
///
/// The identity is always stored first; elements are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMatrixGroup {
    dim: usize,
    elements: Vec<UnitaryMatrix>,
}

impl FiniteMatrixGroup {
    pub fn trivial(n: usize) -> Self {
        Self { dim: n, elements: vec![UnitaryMatrix::identity(n)] }
    }

    /// Validates a full element list: identity present, no duplicates,
    /// closed under products.
    pub fn from_elements(elements: Vec<UnitaryMatrix>) -> Result<Self, AtlasError> {
        let dim = elements.first().ok_or(AtlasError::EmptyGenerators)?.dim();
        if elements.iter().any(|g| g.dim() != dim) {
            return Err(AtlasError::DimensionMismatch);
        }
        for (i, g) in elements.iter().enumerate() {
            if elements[..i].contains(g) {
                return Err(AtlasError::DuplicateElement(g.to_string()));
            }
        }
        let id_pos = elements
            .iter()
            .position(|g| g.is_identity())
            .ok_or(AtlasError::NotAGroup("identity missing".into()))?;
        for a in &elements {
            for b in &elements {
                if !elements.contains(&a.compose(b)) {
                    return Err(AtlasError::NotAGroup(format!("{a} * {b} not in set")));
                }
            }
        }
        let mut elements = elements;
        elements.swap(0, id_pos);
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[UnitaryMatrix] {
        &self.elements
    }

    pub fn identity(&self) -> &UnitaryMatrix {
        &self.elements[0]
    }

    pub fn contains(&self, g: &CycloMatrix) -> bool {
        self.elements.iter().any(|e| e.matrix() == g)
    }

    /// Non-identity elements.
    pub fn nontrivial(&self) -> &[UnitaryMatrix] {
        &self.elements[1..]
    }
}

/// Smallest multiplicatively closed set containing the generators and the
/// identity. Fails once more than `cap` elements have been found.
pub fn group_closure(generators: &[CycloMatrix], cap: usize) -> Result<FiniteMatrixGroup, AtlasError> {
    let first = generators.first().ok_or(AtlasError::EmptyGenerators)?;
    let dim = first.rows();
    let mut gens = Vec::with_capacity(generators.len());
    for (index, g) in generators.iter().enumerate() {
        if g.rows() != dim || g.cols() != dim {
            return Err(AtlasError::DimensionMismatch);
        }
        gens.push(UnitaryMatrix::new(g.clone()).map_err(|_| AtlasError::NonUnitaryGenerator { index })?);
    }
    let mut elements = vec![UnitaryMatrix::identity(dim)];
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        for g in &gens {
            let next = current.compose(g);
            if !elements.contains(&next) {
                elements.push(next);
                if elements.len() > cap {
                    return Err(AtlasError::ClosureExceedsCap { cap });
                }
            }
        }
    }
    Ok(FiniteMatrixGroup { dim, elements })
}

/// `{g : g·point = point}`.
pub fn stabilizer(group: &FiniteMatrixGroup, point: &[Cyclotomic]) -> FiniteMatrixGroup {
    let elements: Vec<UnitaryMatrix> =
        group.elements.iter().filter(|g| g.apply(point) == point).cloned().collect();
    FiniteMatrixGroup { dim: group.dim, elements }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(c: Cyclotomic) -> CycloMatrix {
        CycloMatrix::scalar(1, c)
    }

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn closure_of_minus_one() {
        let g = group_closure(&[scalar(c(-1))], 16).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.identity().is_identity());
    }

    #[test]
    fn closure_of_cube_root() {
        let g = group_closure(&[scalar(Cyclotomic::root_of_unity(3, 1))], 16).unwrap();
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn closure_errors() {
        assert!(matches!(group_closure(&[], 4), Err(AtlasError::EmptyGenerators)));
        assert!(matches!(
            group_closure(&[scalar(c(2))], 4),
            Err(AtlasError::NonUnitaryGenerator { index: 0 })
        ));
        let z12 = scalar(Cyclotomic::root_of_unity(12, 1));
        assert!(matches!(group_closure(&[z12], 8), Err(AtlasError::ClosureExceedsCap { cap: 8 })));
    }

    #[test]
    fn stabilizer_examples() {
        let g = group_closure(&[scalar(c(-1))], 16).unwrap();
        assert_eq!(stabilizer(&g, &[c(0)]).order(), 2);
        assert_eq!(stabilizer(&g, &[c(1)]).order(), 1);
        let refl = CycloMatrix::diagonal(vec![c(-1), c(1)]);
        let h = group_closure(&[refl], 16).unwrap();
        assert_eq!(stabilizer(&h, &[c(0), c(1)]).order(), 2);
    }

    #[test]
    fn from_elements_rejects_duplicates() {
        let id = UnitaryMatrix::identity(1);
        assert!(matches!(
            FiniteMatrixGroup::from_elements(vec![id.clone(), id]),
            Err(AtlasError::DuplicateElement(_))
        ));
        let minus = UnitaryMatrix::new(scalar(c(-1))).unwrap();
        assert!(FiniteMatrixGroup::from_elements(vec![minus.clone()]).is_err());
        let ok = FiniteMatrixGroup::from_elements(vec![minus, UnitaryMatrix::identity(1)]).unwrap();
        assert!(ok.identity().is_identity());
    }
}
