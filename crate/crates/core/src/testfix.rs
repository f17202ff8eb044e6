//! Shared fixtures for the unit tests.

use crate::exactla::{rat_int, Mat, Rational, Vector};
use crate::structures::{LieAlgebra, LinearMap, Representation3, ThreeLieAlgebra, TwoCocycle3};
use crate::twistop::{nijenhuis_package, NijenhuisPackage, TwistedContext, TwistedOperator};

pub fn e(dim: usize, i: usize) -> Vector {
    Vector::unit(dim, i)
}

pub fn vec_i64(v: Vec<i64>) -> Vector {
    Vector::new(v.into_iter().map(rat_int).collect())
}

pub fn mat_i64(rows: Vec<Vec<i64>>) -> Mat {
    Mat::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(rat_int).collect())
            .collect(),
    )
}

/// dim 3, [e1,e2,e3] = e2.
pub fn a3() -> ThreeLieAlgebra {
    ThreeLieAlgebra::new(3, vec![([0, 1, 2], e(3, 1))]).unwrap()
}

/// dim 3 Lie algebra, [e1,e2] = e2, e3 central.
pub fn l3() -> LieAlgebra {
    LieAlgebra::new(3, vec![([0, 1], e(3, 1))]).unwrap()
}

/// The triangular operator with parameters (d, c, f) on a 3-dim space.
pub fn n_dcf(d: i64, c: i64, f: i64) -> LinearMap {
    LinearMap::new(mat_i64(vec![vec![d, 0, 0], vec![0, c, f], vec![0, 0, c]]))
}

/// Nijenhuis package of a3 with N(2, 3, 5).
pub fn package_235() -> NijenhuisPackage {
    nijenhuis_package(&a3(), &n_dcf(2, 3, 5)).unwrap()
}

/// Zero operator in the (a3, adjoint, 0) context.
pub fn zero_op_adjoint() -> TwistedOperator {
    let g = a3();
    let rho = Representation3::adjoint(&g);
    TwistedOperator::new(
        TwistedContext::new(g, rho, TwoCocycle3::zero(3, 3)).unwrap(),
        LinearMap::zero(3, 3),
    )
    .unwrap()
}

/// Projection of a3 onto the line through e2: a genuine operator with
/// vanishing cocycle, because its image is central enough to kill every term.
pub fn proj_e2_op() -> TwistedOperator {
    let g = a3();
    let rho = Representation3::adjoint(&g);
    TwistedOperator::new(
        TwistedContext::new(g, rho, TwoCocycle3::zero(3, 3)).unwrap(),
        LinearMap::new(mat_i64(vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 0]])),
    )
    .unwrap()
}

/// Abelian context of dimensions (g, V) with zero representation and zero
/// cocycle, carrying the given operator matrix.
pub fn abelian_op(g_dim: usize, v_dim: usize, t: Mat) -> TwistedOperator {
    TwistedOperator::new(
        TwistedContext::new(
            ThreeLieAlgebra::abelian(g_dim),
            Representation3::zero(g_dim, v_dim),
            TwoCocycle3::zero(g_dim, v_dim),
        )
        .unwrap(),
        LinearMap::new(t),
    )
    .unwrap()
}

pub fn half() -> Rational {
    crate::exactla::rat(1, 2)
}
