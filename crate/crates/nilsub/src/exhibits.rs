//! Named objects used as worked examples: the one-parameter family in
//! `S_3(k[T]/T^7)`, the mouths of its exceptional tubes, distinguished objects
//! of `S_3(k[T]/T^6)`, `S_4(k[T]/T^5)` and `S_4(k[T]/T^6)`.
//!
//! Every object is given by a box diagram; column indices in the generator
//! terms are 1-based.

use crate::rep::{BoxDiagram, RepError, RepObject, Shape};

fn build(shape: Shape, d: BoxDiagram) -> Result<RepObject, RepError> {
    RepObject::from_box_diagram(&d, shape)
}

/// Diagram of `A_λ ⊆ B` in `S_3(k[T]/T^7)`:
/// `B` has columns `7, 6, 4, 3, 1` and the subspace is generated by
/// `u1 = T^4x1 + Tx4 + x5`, `u2 = T^3x2 + T^2x3 + x5`, `u3 = T^3x3 + λT^2x4`.
pub fn a_lambda_diagram(lambda: i64) -> BoxDiagram {
    BoxDiagram::from_triples(&[7, 6, 4, 3, 1], &[&[(1, 4, 1), (4, 1, 1), (5, 0, 1)], &[(2, 3, 1), (3, 2, 1), (5, 0, 1)], &[(3, 3, 1), (4, 2, lambda)]])
}

/// `A_λ` over `F_p` in `S_3(k[T]/T^7)`.
pub fn a_lambda(p: u64, lambda: i64) -> Result<RepObject, RepError> {
    build(Shape::new(p, 3, 7)?, a_lambda_diagram(lambda))
}

/// The member of the family at `λ = ∞`: the third generator becomes `T^2x4`.
pub fn a_infinity(p: u64) -> Result<RepObject, RepError> {
    let d = BoxDiagram::from_triples(&[7, 6, 4, 3, 1], &[&[(1, 4, 1), (4, 1, 1), (5, 0, 1)], &[(2, 3, 1), (3, 2, 1), (5, 0, 1)], &[(4, 2, 1)]]);
    build(Shape::new(p, 3, 7)?, d)
}

/// The normalised object at the end of the chain of base changes applied to
/// `A_{-1}`: columns `6, 3, 7, 4, 1` with generators `T^3x1 + Tx2`,
/// `Tx2 + T^4x3 + T^2x4 + x5` and `T^2x2`.
pub fn a_chain_end(p: u64) -> Result<RepObject, RepError> {
    let d = BoxDiagram::from_triples(&[6, 3, 7, 4, 1], &[&[(1, 3, 1), (2, 1, 1)], &[(2, 1, 1), (3, 4, 1), (4, 2, 1), (5, 0, 1)], &[(2, 2, 1)]]);
    build(Shape::new(p, 3, 7)?, d)
}

/// Mouth objects of the exceptional tube of circumference 5 in `S_3(k[T]/T^7)`.
pub fn s3n7_tube5_mouth(p: u64) -> Result<Vec<RepObject>, RepError> {
    let s = Shape::new(p, 3, 7)?;
    [
        BoxDiagram::from_triples(&[2], &[]),
        BoxDiagram::from_triples(&[5], &[&[(1, 2, 1)]]),
        BoxDiagram::from_triples(&[5], &[]),
        BoxDiagram::from_triples(&[7], &[&[(1, 5, 1)]]),
        BoxDiagram::from_triples(&[2], &[&[(1, 0, 1)]]),
    ]
    .into_iter()
    .map(|d| build(s, d))
    .collect()
}

/// Mouth objects of the exceptional tube of circumference 3 in `S_3(k[T]/T^7)`.
pub fn s3n7_tube3_mouth(p: u64) -> Result<Vec<RepObject>, RepError> {
    let s = Shape::new(p, 3, 7)?;
    [
        BoxDiagram::from_triples(&[4], &[&[(1, 3, 1)]]),
        BoxDiagram::from_triples(&[6, 1], &[&[(1, 3, 1), (2, 0, 1)]]),
        BoxDiagram::from_triples(&[7, 3], &[&[(1, 4, 1), (2, 1, 1)]]),
    ]
    .into_iter()
    .map(|d| build(s, d))
    .collect()
}

/// Mouth objects of the exceptional tube of circumference 2 in `S_3(k[T]/T^7)`.
pub fn s3n7_tube2_mouth(p: u64) -> Result<Vec<RepObject>, RepError> {
    let s = Shape::new(p, 3, 7)?;
    [BoxDiagram::from_triples(&[6, 3], &[&[(1, 3, 1), (2, 1, 1)], &[(2, 2, 1)]]), BoxDiagram::from_triples(&[7, 4, 1], &[&[(1, 4, 1), (2, 2, 1), (3, 0, 1)]])]
        .into_iter()
        .map(|d| build(s, d))
        .collect()
}

/// Mouth objects of the tube of circumference 5 in `S_4(k[T]/T^6)`.
pub fn s4n6_tube5_mouth(p: u64) -> Result<Vec<RepObject>, RepError> {
    let s = Shape::new(p, 4, 6)?;
    [
        BoxDiagram::from_triples(&[1], &[&[(1, 0, 1)]]),
        BoxDiagram::from_triples(&[1], &[]),
        BoxDiagram::from_triples(&[5], &[&[(1, 1, 1)]]),
        BoxDiagram::from_triples(&[5], &[]),
        BoxDiagram::from_triples(&[6], &[&[(1, 5, 1)]]),
    ]
    .into_iter()
    .map(|d| build(s, d))
    .collect()
}

/// Birkhoff's family in `S_4(k[T]/T^6)`: columns `6, 4, 2`, generators
/// `T^2x1 + Tx2 + x3` and `T^2x2 + λTx3`.
pub fn birkhoff_diagram(lambda: i64) -> BoxDiagram {
    BoxDiagram::from_triples(&[6, 4, 2], &[&[(1, 2, 1), (2, 1, 1), (3, 0, 1)], &[(2, 2, 1), (3, 1, lambda)]])
}

/// A member of Birkhoff's family over `F_p`.
pub fn birkhoff(p: u64, lambda: i64) -> Result<RepObject, RepError> {
    build(Shape::new(p, 4, 6)?, birkhoff_diagram(lambda))
}

/// `X_1` in `S_3(k[T]/T^6)`: columns `4, 2, 6`, generators `Tx1 + x2`, `Tx2 + T^3x3`.
pub fn x1(p: u64) -> Result<RepObject, RepError> {
    build(Shape::new(p, 3, 6)?, BoxDiagram::from_triples(&[4, 2, 6], &[&[(1, 1, 1), (2, 0, 1)], &[(2, 1, 1), (3, 3, 1)]]))
}

/// `X_2` in `S_3(k[T]/T^6)`: columns `1, 5, 3, 6`, generators `x1 + T^2x2`, `T^2x2 + Tx3 + T^3x4`.
pub fn x2(p: u64) -> Result<RepObject, RepError> {
    build(Shape::new(p, 3, 6)?, BoxDiagram::from_triples(&[1, 5, 3, 6], &[&[(1, 0, 1), (2, 2, 1)], &[(2, 2, 1), (3, 1, 1), (4, 3, 1)]]))
}

/// `Z_1` in `S_3(k[T]/T^6)`.
pub fn z1(p: u64) -> Result<RepObject, RepError> {
    build(
        Shape::new(p, 3, 6)?,
        BoxDiagram::from_triples(&[3, 5, 6, 1, 3], &[&[(1, 1, 1), (2, 2, 1)], &[(2, 2, 1), (3, 3, 1), (4, 0, 1), (5, 1, 1)], &[(5, 2, 1)]]),
    )
}

/// `Z_2` in `S_3(k[T]/T^6)`.
pub fn z2(p: u64) -> Result<RepObject, RepError> {
    build(
        Shape::new(p, 3, 6)?,
        BoxDiagram::from_triples(&[6, 1, 3, 6, 4], &[&[(1, 3, 1), (2, 0, 1), (3, 1, 1)], &[(3, 1, 1), (4, 3, 1), (5, 2, 1)], &[(3, 2, 1)]]),
    )
}

/// `Z_3` in `S_4(k[T]/T^5)`.
pub fn z3(p: u64) -> Result<RepObject, RepError> {
    build(Shape::new(p, 4, 5)?, BoxDiagram::from_triples(&[5, 2, 5], &[&[(1, 1, 1), (2, 0, 1)], &[(2, 1, 1), (3, 3, 1)]]))
}
