//! Named data used by tests, examples and the bundled datum files.

use crate::datum::{BondSpec, CoxeterDatum};
use crate::error::Result;
use crate::scalar::Scalar;

/// Rank-two datum with a single finite bond `m`.
pub fn dihedral<S: Scalar>(m: u32) -> Result<CoxeterDatum<S>> {
    CoxeterDatum::new(2, [BondSpec::finite(0, 1, m)])
}

pub fn a2<S: Scalar>() -> Result<CoxeterDatum<S>> {
    dihedral(3)
}

pub fn b2<S: Scalar>() -> Result<CoxeterDatum<S>> {
    dihedral(4)
}

pub fn g2<S: Scalar>() -> Result<CoxeterDatum<S>> {
    dihedral(6)
}

/// Infinite dihedral group with form value `-1`.
pub fn affine_a1<S: Scalar>() -> Result<CoxeterDatum<S>> {
    CoxeterDatum::new(2, [BondSpec::infinite(0, 1)])
}

/// Infinite dihedral group with form value `value <= -1`.
pub fn infinite_dihedral<S: Scalar>(value: S) -> Result<CoxeterDatum<S>> {
    CoxeterDatum::new(2, [BondSpec::infinite_with(0, 1, value)])
}

/// Triangle group with bonds `(1,2) = p`, `(2,3) = q`, `(1,3) = r`.
pub fn triangle<S: Scalar>(p: u32, q: u32, r: u32) -> Result<CoxeterDatum<S>> {
    CoxeterDatum::new(
        3,
        [BondSpec::finite(0, 1, p), BondSpec::finite(1, 2, q), BondSpec::finite(0, 2, r)],
    )
}

pub fn affine_a2<S: Scalar>() -> Result<CoxeterDatum<S>> {
    triangle(3, 3, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::BondOrder;
    use crate::error::Error;
    use crate::scalar::Rational;

    #[test]
    fn catalog_builds() {
        assert_eq!(affine_a2::<Rational>().unwrap().rank(), 3);
        assert_eq!(triangle::<f64>(3, 3, 7).unwrap().bond(0, 2), BondOrder::Finite(7));
        assert!(matches!(dihedral::<Rational>(5), Err(Error::IrrationalEntry { .. })));
        assert_eq!(*affine_a1::<f64>().unwrap().form(0, 1), -1.0);
    }
}
