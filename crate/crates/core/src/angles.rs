//! Generalised angle structures, rotational holonomy of peripheral curves and
//! the Euler characteristic of Q-normal classes by combinatorial Gauss–Bonnet.
//!
//! Angles are exact rationals in units of π.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{
    lp_feasible_strict, primitive_from_rational, rational_solve, IntMatrix, Solve, StrictFeasibility,
};
use crate::tri::GluingData;

/// Angles in π-units, one per quad, ordered `(a_j, b_j, c_j)`.
pub type AngleVector = Vec<BigRational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnglesError {
    #[error("gluing data has no cusp rows")]
    MissingCuspRows,
    #[error("angle equations are inconsistent: {0}")]
    InternalInconsistency(String),
    #[error("vector length {got}, expected {expected}")]
    Shape { got: usize, expected: usize },
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn rat_dot(a: &[BigRational], b: &[i64]) -> BigRational {
    a.iter().zip(b).map(|(x, &y)| x * q(y)).sum()
}

/// Rows `E_i` (= 2), `T_j` (= 1) and, if asked, `M_k`, `L_k` (= 0).
fn system(g: &GluingData, holonomy: bool) -> Result<(Vec<Vec<i64>>, Vec<BigRational>), AnglesError> {
    let mut rows = g.edge_rows.clone();
    let mut rhs = vec![q(2); rows.len()];
    for j in 0..g.n {
        rows.push(g.tet_solution(j));
        rhs.push(q(1));
    }
    if holonomy {
        let cusp = g.cusp_rows.as_ref().ok_or(AnglesError::MissingCuspRows)?;
        for r in cusp {
            rows.push(r.clone());
            rhs.push(q(0));
        }
    }
    Ok((rows, rhs))
}

fn solve(g: &GluingData, holonomy: bool) -> Result<AngleVector, AnglesError> {
    let (rows, rhs) = system(g, holonomy)?;
    match rational_solve(&IntMatrix::from_i64(&rows), &rhs) {
        Solve::Solution(x) => Ok(x),
        Solve::NoSolution(z) => Err(AnglesError::InternalInconsistency(format!("certificate {z:?}"))),
    }
}

/// A generalised angle structure: edge sums 2, tetrahedron sums 1.
pub fn solve_generalized(g: &GluingData) -> Result<AngleVector, AnglesError> {
    solve(g, false)
}

/// A generalised angle structure whose rotational holonomy vanishes on every
/// meridian and longitude.
pub fn solve_vanishing_holonomy(g: &GluingData) -> Result<AngleVector, AnglesError> {
    solve(g, true)
}

/// Whether `alpha` satisfies the edge and tetrahedron equations, and also the
/// vanishing-holonomy equations when `holonomy` is set.
pub fn is_angle_structure(g: &GluingData, alpha: &[BigRational], holonomy: bool) -> bool {
    match system(g, holonomy) {
        Ok((rows, rhs)) => alpha.len() == 3 * g.n && rows.iter().zip(&rhs).all(|(r, b)| rat_dot(alpha, r) == *b),
        Err(_) => false,
    }
}

/// `ρ_α(γ)` in π-units for `γ = Σ_k (γ_{2k} μ_k + γ_{2k+1} λ_k)`.
pub fn rotational_holonomy(
    g: &GluingData,
    alpha: &[BigRational],
    gamma: &[BigRational],
) -> Result<BigRational, AnglesError> {
    let cusp = g.cusp_rows.as_ref().ok_or(AnglesError::MissingCuspRows)?;
    if gamma.len() != cusp.len() {
        return Err(AnglesError::Shape { got: gamma.len(), expected: cusp.len() });
    }
    Ok(cusp.iter().zip(gamma).map(|(row, c)| c * rat_dot(alpha, row)).sum())
}

/// `χ(S) = -α·S + ρ_α(∂S)/2`, where `boundary` holds the coefficients of
/// `∂S` on `(μ_1, λ_1, …)`. Independent of the angle structure `α`.
pub fn euler_via_angles(
    g: &GluingData,
    alpha: &[BigRational],
    s: &[i64],
    boundary: &[i64],
) -> Result<BigRational, AnglesError> {
    if s.len() != 3 * g.n {
        return Err(AnglesError::Shape { got: s.len(), expected: 3 * g.n });
    }
    let interior = -rat_dot(alpha, s);
    if boundary.iter().all(|&b| b == 0) {
        return Ok(interior);
    }
    let gamma: Vec<BigRational> = boundary.iter().map(|&b| q(b)).collect();
    Ok(interior + rotational_holonomy(g, alpha, &gamma)? / q(2))
}

/// Either a strictly positive angle structure, or a nonzero nonnegative
/// Q-normal class with `χ ≥ 0` obstructing one.
#[derive(Clone, Debug, PartialEq)]
pub enum StrictOutcome {
    Strict(AngleVector),
    Witness { class: Vec<i64>, chi: BigRational },
}

fn strict(g: &GluingData, holonomy: bool) -> Result<StrictOutcome, AnglesError> {
    let (rows, rhs) = system(g, holonomy)?;
    let m = IntMatrix::from_i64(&rows);
    match lp_feasible_strict(&m, &rhs) {
        StrictFeasibility::Strict(x) => Ok(StrictOutcome::Strict(x)),
        StrictFeasibility::Inconsistent(z) => Err(AnglesError::InternalInconsistency(format!("certificate {z:?}"))),
        StrictFeasibility::Farkas(z) => {
            // S = Σ z_i row_i; scaling z to make S primitive scales χ = -z·b alike.
            let s: Vec<BigRational> = (0..3 * g.n).map(|c| rows.iter().zip(&z).map(|(r, zi)| zi * q(r[c])).sum()).collect();
            let class = primitive_from_rational(&s);
            let pivot = (0..s.len()).find(|&c| !s[c].is_zero()).expect("Farkas witness is nonzero");
            let scale = BigRational::from_integer(class[pivot].clone()) / &s[pivot];
            let zb: BigRational = z.iter().zip(&rhs).map(|(a, b)| a * b).sum();
            let chi = -zb * scale;
            let class = class.iter().map(|x| i64::try_from(x).expect("witness fits in i64")).collect();
            Ok(StrictOutcome::Witness { class, chi })
        }
    }
}

/// Strict angle structure with vanishing peripheral rotational holonomy, or
/// a class `S ≥ 0` in the span of the edge, tetrahedral and peripheral
/// solutions with `χ(S) ≥ 0`.
pub fn strict_exists_vanishing_holonomy(g: &GluingData) -> Result<StrictOutcome, AnglesError> {
    strict(g, true)
}

/// Strict angle structure (no holonomy condition), or a closed class
/// `S ≥ 0` in the span of the edge and tetrahedral solutions with `χ(S) ≥ 0`.
pub fn strict_exists(g: &GluingData) -> Result<StrictOutcome, AnglesError> {
    strict(g, false)
}

/// Checks every claim a [`StrictOutcome`] makes.
pub fn verify_strict_outcome(g: &GluingData, out: &StrictOutcome, holonomy: bool) -> bool {
    match out {
        StrictOutcome::Strict(a) => is_angle_structure(g, a, holonomy) && a.iter().all(Signed::is_positive),
        StrictOutcome::Witness { class, chi } => {
            let b = crate::tri::qmatching_matrix(g);
            let qn = b.iter().all(|r| r.iter().zip(class).map(|(x, y)| x * y).sum::<i64>() == 0);
            qn && class.iter().all(|&x| x >= 0) && class.iter().any(|&x| x != 0) && !chi.is_negative()
        }
    }
}

/// Renders an angle vector as a space-separated rational list.
pub fn render_angles(a: &[BigRational]) -> String {
    a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
