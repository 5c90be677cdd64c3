//! Exact combinatorics of veering triangulations: dual and flow graphs, the veering
//! polynomial, cones of homology directions, restricted flow graphs, orbit growth
//! rates and bounded patches of dynamic planes.

pub mod analysis;
pub mod cones;
pub mod dynamic_planes;
pub mod error;
pub mod graphs;
pub mod growth;
pub mod homology;
pub mod ingest;
pub mod kernel;
pub mod perm;
pub mod polyring;
pub mod restriction;
pub mod veering_poly;

pub use analysis::Analysis;
pub use error::{Error, ErrorClass, Result};
pub use ingest::{RawTriangulation, Veer, VeeringTriangulation};
pub use polyring::IntPoly;

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
/// Outcome of the exact simplex method over the rationals.
pub type ExactSimplex = cones::simplex::LpOutcome<Rational>;
/// Univariate polynomials with exact rational coefficients.
pub type RationalPoly = growth::univariate::UniPoly<Rational>;
/// Homology classes in `Z^b`, as coordinates in the chosen basis.
pub type ClassCoords = Vec<i64>;

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    #[test]
    fn aliases_name_exact_types() {
        let lp: ExactSimplex = cones::simplex::solve(&[vec![q(1), q(1)]], &[q(2)], &[q(1), q(0)]);
        assert!(matches!(lp, cones::simplex::LpOutcome::Optimal { .. }));
        let p = RationalPoly::new(vec![q(-2), q(0), q(1)]);
        assert_eq!(p.eval(&q(2)), q(2));
        let coords: ClassCoords = vec![1, -1];
        assert_eq!(IntPoly::one_in(coords.len()).num_vars(), 2);
    }
}
