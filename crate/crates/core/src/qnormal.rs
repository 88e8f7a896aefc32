//! Q-normal classes: Q-matching equations, the Neumann–Zagier form, the
//! boundary map, Euler characteristic, double-arc function, minimal coset
//! representatives, index degrees and the integer structure of the class
//! group modulo edge and tetrahedral solutions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::angles::{self, AnglesError};
use crate::linalg::{
    hermite_normal_form, integer_kernel, integer_membership, rational_solve, smith_normal_form, to_big, IntMatrix,
    Snf, Solve,
};
use crate::series::HalfInt;
use crate::tri::{apply_c, qmatching_matrix, GluingData};

/// Quad coordinates `(a_1, b_1, c_1, a_2, …)`.
pub type QuadVector = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QNormalError {
    #[error("gluing data has no cusp rows")]
    MissingCuspRows,
    #[error("vector is not a Q-normal class")]
    NotQNormal,
    #[error("edge-solution image has rank {got}, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("Euler characteristic {0} is not an integer")]
    NonIntegralEuler(String),
    #[error("vector length {got}, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error(transparent)]
    Angles(#[from] AnglesError),
}

fn check_len(g: &GluingData, s: &[i64]) -> Result<(), QNormalError> {
    if s.len() != 3 * g.n {
        return Err(QNormalError::Shape { got: s.len(), expected: 3 * g.n });
    }
    Ok(())
}

fn idot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `B·S = 0`.
pub fn is_qnormal(g: &GluingData, s: &[i64]) -> bool {
    s.len() == 3 * g.n && qmatching_matrix(g).iter().all(|r| idot(r, s) == 0)
}

/// `ω(x, y) = C(x)·y`.
pub fn symplectic(x: &[i64], y: &[i64]) -> i64 {
    idot(&apply_c(x), y)
}

/// Coefficients of `∂S = Σ_k (-ω(S, L_k) μ_k + ω(S, M_k) λ_k)` on
/// `(μ_1, λ_1, μ_2, …)`.
pub fn boundary(g: &GluingData, s: &[i64]) -> Result<Vec<i64>, QNormalError> {
    check_len(g, s)?;
    let cusp = g.cusp_rows.as_ref().ok_or(QNormalError::MissingCuspRows)?;
    let cs = apply_c(s);
    Ok((0..g.r).flat_map(|k| [-idot(&cs, &cusp[2 * k + 1]), idot(&cs, &cusp[2 * k])]).collect())
}

/// `δ(S) = Σ_j (a_j b_j + b_j c_j + c_j a_j)`.
pub fn double_arc(s: &[i64]) -> i64 {
    s.chunks(3).map(|t| t[0] * t[1] + t[1] * t[2] + t[2] * t[0]).sum()
}

/// The symmetric bilinear form with `δ(S + S') = δ(S) + δ(S') + 2δ(S, S')`.
pub fn double_arc_bilinear(s: &[i64], t: &[i64]) -> BigRational {
    let twice: i64 = s
        .chunks(3)
        .zip(t.chunks(3))
        .map(|(a, b)| a[0] * (b[1] + b[2]) + a[1] * (b[0] + b[2]) + a[2] * (b[0] + b[1]))
        .sum();
    BigRational::new(twice.into(), 2.into())
}

/// Subtracts each tetrahedron's minimum; returns the representative and the
/// subtracted minima `m_j`.
pub fn minimal_rep(s: &[i64]) -> (QuadVector, Vec<i64>) {
    let mut out = Vec::with_capacity(s.len());
    let mut mins = Vec::with_capacity(s.len() / 3);
    for t in s.chunks(3) {
        let m = t[0].min(t[1]).min(t[2]);
        out.extend(t.iter().map(|x| x - m));
        mins.push(m);
    }
    (out, mins)
}

/// `χ` from a decomposition `S = Σ x_i E_i + Σ y_j T_j + Σ (p_k M_k + q_k L_k)`
/// with rational coefficients, using `χ(E_i) = -2`, `χ(T_j) = -1` and
/// `χ(M_k) = χ(L_k) = 0`. `None` if `S` is outside that span.
pub fn chi_decomposition(g: &GluingData, s: &[i64]) -> Option<BigRational> {
    let mut gens: Vec<Vec<i64>> = g.edge_rows.clone();
    let weights: Vec<i64> = std::iter::repeat_n(-2, g.edge_rows.len())
        .chain(std::iter::repeat_n(-1, g.n))
        .chain(std::iter::repeat_n(0, g.cusp_rows.as_ref().map_or(0, Vec::len)))
        .collect();
    gens.extend((0..g.n).map(|j| g.tet_solution(j)));
    gens.extend(g.cusp_rows.iter().flatten().cloned());
    let m = IntMatrix::from_i64(&gens).transpose();
    let rhs: Vec<BigRational> = s.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    match rational_solve(&m, &rhs) {
        Solve::Solution(c) => {
            Some(c.iter().zip(&weights).map(|(x, &w)| x * BigRational::from_integer(w.into())).sum())
        }
        Solve::NoSolution(_) => None,
    }
}

/// Formal Euler characteristic via an angle structure.
///
/// With cusp rows, uses a vanishing-holonomy structure (so the boundary term
/// drops out) on any Q-normal class. Without them, only classes in the
/// rational span of edge and tetrahedral solutions are accepted; these are
/// closed, so any generalised angle structure gives `χ = -α·S`.
pub fn chi(g: &GluingData, s: &[i64]) -> Result<BigRational, QNormalError> {
    check_len(g, s)?;
    if !is_qnormal(g, s) {
        return Err(QNormalError::NotQNormal);
    }
    if g.cusp_rows.is_some() {
        let alpha = angles::solve_vanishing_holonomy(g)?;
        let b = boundary(g, s)?;
        return Ok(angles::euler_via_angles(g, &alpha, s, &b)?);
    }
    if chi_decomposition(g, s).is_none() {
        return Err(QNormalError::MissingCuspRows);
    }
    let alpha = angles::solve_generalized(g)?;
    Ok(angles::euler_via_angles(g, &alpha, s, &vec![0; 2 * g.r])?)
}

/// Integer-valued [`chi`].
pub fn chi_int(g: &GluingData, s: &[i64]) -> Result<i64, QNormalError> {
    let c = chi(g, s)?;
    if !c.is_integer() {
        return Err(QNormalError::NonIntegralEuler(c.to_string()));
    }
    Ok(c.to_integer().to_i64().expect("Euler characteristic fits in i64"))
}

/// Lowest exponent of the index term of `S` and the sign of its coefficient.
///
/// The exponent is `d(S)/2` where `d(S) = -χ(S*) + δ(S*)` counts powers of
/// `q^{1/2}`; it is returned as a [`HalfInt`] q-exponent so that
/// `degree.twice == d(S)`. The sign is `(-1)^{χ(S*)}`.
pub fn degree(g: &GluingData, s: &[i64]) -> Result<(HalfInt, i8), QNormalError> {
    let c = chi_int(g, s)?;
    Ok(degree_with_chi(s, c))
}

/// [`degree`] when `χ(S)` is already known.
pub fn degree_with_chi(s: &[i64], chi_s: i64) -> (HalfInt, i8) {
    let (star, mins) = minimal_rep(s);
    let chi_star = chi_s + mins.iter().sum::<i64>();
    let d = -chi_star + double_arc(&star);
    (HalfInt::from_twice(d), if chi_star.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// Projection `Z^{3n} → Z^{2n}`, `(a, b, c) ↦ (a - c, b - c)`, whose kernel
/// is spanned by the tetrahedral solutions.
pub fn project_mod_t(s: &[i64]) -> Vec<i64> {
    s.chunks(3).flat_map(|t| [t[0] - t[2], t[1] - t[2]]).collect()
}

/// Integer structure of the Q-normal classes.
#[derive(Clone, Debug)]
pub struct LatticeStructure {
    /// Z-basis of `Q(T; Z) = ker B`.
    pub qnormal_basis: Vec<Vec<BigInt>>,
    /// HNF basis of the image of the edge solutions in `Z^{3n}/T`.
    pub edge_image_basis: Vec<Vec<BigInt>>,
    /// Each edge-image basis vector as an integer combination of the `E_i`.
    pub edge_coeffs: Vec<Vec<BigInt>>,
    /// Lifts `Σ_i coeff_i E_i` in quad coordinates.
    pub edge_lifts: Vec<QuadVector>,
    /// `χ` of each lift, `-2 Σ_i coeff_i`.
    pub edge_lift_chi: Vec<i64>,
    /// Torsion invariants (all `> 1`) of `Q(T; Z)/(E + T)`.
    pub torsion: Vec<BigInt>,
    /// Free rank of `Q(T; Z)/(E + T)`.
    pub free_rank: usize,
    snf: Snf,
    rank_et: usize,
}

impl LatticeStructure {
    /// Invariant factors of the quotient, torsion first, then `0` per free
    /// summand.
    pub fn quotient_invariants(&self) -> Vec<BigInt> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        v
    }
}

fn et_generators(g: &GluingData) -> Vec<Vec<BigInt>> {
    g.edge_rows.iter().map(|r| to_big(r)).chain((0..g.n).map(|j| to_big(&g.tet_solution(j)))).collect()
}

/// Computes `ker B`, the edge-image lattice in `Z^{3n}/T` (rank `n - r`
/// is checked) and the Smith invariants of `Q(T; Z)/(E + T)`.
pub fn lattice_structure(g: &GluingData) -> Result<LatticeStructure, QNormalError> {
    let b = IntMatrix::from_i64(&qmatching_matrix(g));
    let qbasis = integer_kernel(&b);

    let proj: Vec<Vec<i64>> = g.edge_rows.iter().map(|r| project_mod_t(r)).collect();
    let (h, u) = hermite_normal_form(&IntMatrix::from_i64(&proj));
    let rank = (0..h.rows()).filter(|&i| !h.is_zero_row(i)).count();
    let expected = g.n.saturating_sub(g.r);
    if rank != expected {
        return Err(QNormalError::RankMismatch { expected, got: rank });
    }
    let edge_image_basis: Vec<Vec<BigInt>> = (0..rank).map(|i| h.row(i).to_vec()).collect();
    let edge_coeffs: Vec<Vec<BigInt>> = (0..rank).map(|i| u.row(i).to_vec()).collect();
    let edge_lifts: Vec<QuadVector> = edge_coeffs
        .iter()
        .map(|c| {
            (0..3 * g.n)
                .map(|col| {
                    c.iter()
                        .zip(&g.edge_rows)
                        .map(|(k, row)| k.to_i64().expect("small coefficient") * row[col])
                        .sum()
                })
                .collect()
        })
        .collect();
    let edge_lift_chi = edge_coeffs
        .iter()
        .map(|c| -2 * c.iter().map(|k| k.to_i64().expect("small coefficient")).sum::<i64>())
        .collect();

    // Coordinates of the E and T generators in the ker B basis.
    let coords: Vec<Vec<BigInt>> = et_generators(g)
        .iter()
        .map(|v| integer_membership(v, &qbasis).expect("edge and tetrahedral solutions are Q-normal"))
        .collect();
    let k = qbasis.len();
    let snf = smith_normal_form(&IntMatrix::from_rows(k, &coords));
    let rank_et = snf.invariants.iter().filter(|d| !d.is_zero()).count();
    let torsion = snf.invariants.iter().filter(|d| *d > &BigInt::one()).cloned().collect();
    Ok(LatticeStructure {
        qnormal_basis: qbasis,
        edge_image_basis,
        edge_coeffs,
        edge_lifts,
        edge_lift_chi,
        torsion,
        free_rank: k - rank_et,
        snf,
        rank_et,
    })
}

/// A class modulo `E + T`: its boundary and its coordinates in the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDescriptor {
    pub boundary: Vec<i64>,
    /// `(residue, modulus)` for each torsion factor.
    pub torsion: Vec<(BigInt, BigInt)>,
    /// Coordinates on the free part.
    pub free: Vec<BigInt>,
}

/// Describes the coset `S + E + T`.
pub fn class_of(g: &GluingData, ls: &LatticeStructure, s: &[i64]) -> Result<ClassDescriptor, QNormalError> {
    if !is_qnormal(g, s) {
        return Err(QNormalError::NotQNormal);
    }
    let boundary = boundary(g, s)?;
    let c = integer_membership(&to_big(s), &ls.qnormal_basis).ok_or(QNormalError::NotQNormal)?;
    // Rows of U·G·V = D span the same lattice as rows of G·V, so quotient
    // coordinates are c·V reduced by the diagonal.
    let cv = ls.snf.v.vec_mul(&c);
    let mut torsion = Vec::new();
    let mut free = Vec::new();
    for (i, x) in cv.iter().enumerate() {
        let d = ls.snf.invariants.get(i).cloned().unwrap_or_else(BigInt::zero);
        if i >= ls.rank_et || d.is_zero() {
            free.push(x.clone());
        } else if d > BigInt::one() {
            torsion.push((x.mod_floor(&d), d));
        }
    }
    Ok(ClassDescriptor { boundary, torsion, free })
}

/// `S - S' ∈ E + T`.
pub fn same_class(g: &GluingData, s: &[i64], t: &[i64]) -> bool {
    let diff: Vec<BigInt> = s.iter().zip(t).map(|(a, b)| BigInt::from(a - b)).collect();
    integer_membership(&diff, &et_generators(g)).is_some()
}

/// Sign helper: `(-1)^k`.
pub fn sign_pow(k: i64) -> i8 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Whether `S` has at most one nonzero quad per tetrahedron.
pub fn is_admissible(s: &[i64]) -> bool {
    s.chunks(3).all(|t| t.iter().filter(|&&x| x != 0).count() <= 1)
}

/// Whether every coordinate is nonnegative.
pub fn is_nonnegative(s: &[i64]) -> bool {
    s.iter().all(|&x| x >= 0)
}

#[doc(hidden)]
pub fn abs_max(s: &[BigInt]) -> BigInt {
    s.iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::load_gluing_matrix;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn m009() -> GluingData {
        load_gluing_matrix(
            "3 1\n2 0 0 2 1 0 2 1 0\n0 2 0 0 0 2 0 0 2\n0 0 2 0 1 0 0 1 0\n0 -1 1 0 1 -1 0 0 -1\n-1 0 0 1 0 0 -2 0 1\n",
        )
        .unwrap()
    }

    fn fig8() -> GluingData {
        load_gluing_matrix("2 1\n2 1 0 2 1 0\n0 1 2 0 1 2\n0 0 1 -1 0 0\n0 0 0 2 0 -2\n").unwrap()
    }

    #[test]
    fn m009_classes() {
        let g = m009();
        let s1 = [0, 1, 0, 0, 0, 1, 0, 0, 1];
        let s2 = [0, 0, 1, 0, 0, -1, -1, 0, 0];
        assert!(is_qnormal(&g, &s1) && is_qnormal(&g, &s2));
        assert_eq!(chi(&g, &s1).unwrap(), q(-1));
        assert_eq!(chi(&g, &s2).unwrap(), q(0));
        assert_eq!(boundary(&g, &s2).unwrap(), vec![1, 1]);
        assert_eq!(boundary(&g, g.meridian(0).unwrap()).unwrap(), vec![2, 0]);
        assert_eq!(boundary(&g, g.longitude(0).unwrap()).unwrap(), vec![0, 2]);
        let ls = lattice_structure(&g).unwrap();
        assert_eq!(ls.qnormal_basis.len(), 7);
        assert_eq!(ls.torsion, vec![BigInt::from(2)]);
        assert_eq!(ls.free_rank, 2);
        let d = class_of(&g, &ls, &s1).unwrap();
        assert_eq!(d.boundary, vec![0, 0]);
        assert_eq!(d.torsion, vec![(BigInt::one(), BigInt::from(2))]);
        let z = class_of(&g, &ls, &g.edge_rows[0]).unwrap();
        assert_eq!(z.torsion[0].0, BigInt::zero());
        assert!(!same_class(&g, g.meridian(0).unwrap(), &[0; 9]));
    }

    #[test]
    fn fig8_degrees() {
        let g = fig8();
        let e1 = g.edge_rows[0].clone();
        assert_eq!(double_arc(&e1), 4);
        assert_eq!(degree(&g, &e1).unwrap(), (HalfInt::from_int(3), 1));
        let neg: Vec<i64> = e1.iter().map(|x| -x).collect();
        let (d, _) = degree(&g, &neg).unwrap();
        assert_eq!(d.twice, 6);
        assert_eq!(degree(&g, &[0; 6]).unwrap(), (HalfInt::ZERO, 1));
        let ls = lattice_structure(&g).unwrap();
        assert_eq!(ls.edge_image_basis.len(), 1);
        assert_eq!(ls.qnormal_basis.len(), 5);
        assert_eq!(minimal_rep(&[-2, -1, 0]).0, vec![0, 1, 2]);
        assert_eq!(double_arc(&[1, 1, 1]), 3);
        assert_eq!(symplectic(g.longitude(0).unwrap(), g.meridian(0).unwrap()), 2);
    }

    #[test]
    fn chi_without_cusp_rows() {
        let mut g = fig8();
        g.cusp_rows = None;
        assert_eq!(chi(&g, &g.edge_rows[1].clone()).unwrap(), q(-2));
        assert_eq!(chi(&g, &[1, 1, 1, 0, 0, 0]).unwrap(), q(-1));
        assert!(matches!(chi(&g, &[0, 0, 1, -1, 0, 0]), Err(QNormalError::MissingCuspRows)));
    }
}
