use std::fmt;

use serde::Serialize;

use super::{FiniteAlgebra, UalgError};
use crate::check::Check;

/// An operation on which a map fails to commute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomLawWitness {
    pub symbol: String,
    pub args: Vec<usize>,
    /// `h(op(args))`.
    pub image_of_result: usize,
    /// `op(h(args))`.
    pub result_of_images: usize,
}

impl fmt::Display for HomLawWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "h({}{:?}) = {} but {}(h(..)) = {}",
            self.symbol, self.args, self.image_of_result, self.symbol, self.result_of_images
        )
    }
}

/// Checks `h(op(a_1..a_k)) = op(h(a_1)..h(a_k))` for every operation and
/// every argument tuple; the first failure in table order is the witness.
pub fn check_hom_law(
    domain: &FiniteAlgebra,
    codomain: &FiniteAlgebra,
    map: &[usize],
) -> Result<Check<HomLawWitness>, UalgError> {
    if domain.signature() != codomain.signature() {
        return Err(UalgError::SignatureMismatch);
    }
    if map.len() != domain.size() {
        return Err(UalgError::MapLength { expected: domain.size(), found: map.len() });
    }
    for &v in map {
        codomain.check_element(v)?;
    }
    let n = domain.size();
    for (op, sym) in domain.signature().symbols().iter().enumerate() {
        let mut args = vec![0usize; sym.arity];
        let mut images = vec![0usize; sym.arity];
        for (index, &result) in domain.table(op).iter().enumerate() {
            let mut rest = index;
            for (a, im) in args.iter_mut().zip(images.iter_mut()) {
                *a = rest % n;
                *im = map[*a];
                rest /= n;
            }
            let lhs = map[result];
            let rhs = codomain.apply(op, &images);
            if lhs != rhs {
                return Ok(Check::Fails(HomLawWitness {
                    symbol: sym.name.clone(),
                    args,
                    image_of_result: lhs,
                    result_of_images: rhs,
                }));
            }
        }
    }
    Ok(Check::Holds)
}

/// A total map between carriers that commutes with every operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomTable {
    domain: FiniteAlgebra,
    codomain: FiniteAlgebra,
    map: Vec<usize>,
}

impl HomTable {
    pub fn new(domain: FiniteAlgebra, codomain: FiniteAlgebra, map: Vec<usize>) -> Result<Self, UalgError> {
        match check_hom_law(&domain, &codomain, &map)? {
            Check::Holds => Ok(HomTable { domain, codomain, map }),
            Check::Fails(w) => Err(UalgError::NotHomomorphism(w)),
        }
    }

    pub fn domain(&self) -> &FiniteAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteAlgebra {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.size()];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &HomTable) -> Result<HomTable, UalgError> {
        if self.codomain != other.domain {
            return Err(UalgError::SignatureMismatch);
        }
        let map = self.map.iter().map(|&v| other.map[v]).collect();
        HomTable::new(self.domain.clone(), other.codomain.clone(), map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn reduction_mod_two_is_a_homomorphism() {
        let z4 = corpus::cyclic_group(4);
        let z2 = corpus::cyclic_group(2);
        let h = HomTable::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(h.is_surjective());
        let err = HomTable::new(z4, z2, vec![0, 1, 1, 0]).unwrap_err();
        match err {
            UalgError::NotHomomorphism(w) => assert_eq!(w.symbol, "mul"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_length_and_range() {
        let z2 = corpus::cyclic_group(2);
        assert!(matches!(
            check_hom_law(&z2, &z2, &[0]),
            Err(UalgError::MapLength { expected: 2, found: 1 })
        ));
        assert!(matches!(check_hom_law(&z2, &z2, &[0, 5]), Err(UalgError::ElementOutOfRange { .. })));
    }
}
