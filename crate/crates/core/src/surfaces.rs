//! Extreme rays of the closed and spun Q-normal cones, 1-efficiency reports
//! and the degree formula for generalised normal surfaces.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::angles::{self, AnglesError, StrictOutcome};
use crate::linalg::{dd_vertex_enumeration, integer_kernel, to_i64, IntMatrix, LinalgError, DD_DEFAULT_CAP};
use crate::qnormal::{self, double_arc, is_admissible, symplectic, QNormalError, QuadVector};
use crate::series::HalfInt;
use crate::tri::{apply_c, qmatching_matrix, GluingData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfacesError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Angles(#[from] AnglesError),
    #[error(transparent)]
    QNormal(#[from] QNormalError),
}

/// An extreme ray with its Euler characteristic and double-arc value.
#[derive(Clone, Debug, PartialEq)]
pub struct RayInfo {
    pub ray: QuadVector,
    pub chi: BigRational,
    pub delta: i64,
    pub admissible: bool,
}

impl RayInfo {
    /// Admissible with `χ ≥ 0`.
    pub fn violates(&self) -> bool {
        self.admissible && !self.chi.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EfficiencyVerdict {
    /// An admissible extreme ray with `χ ≥ 0`.
    Violator(QuadVector),
    /// No violating ray, and a strict angle structure rules out any class
    /// with `χ ≥ 0`.
    Certified,
    /// No violating ray; no strict angle structure was found.
    CleanAtVertexResolution,
}

impl EfficiencyVerdict {
    pub fn is_clean(&self) -> bool {
        !matches!(self, EfficiencyVerdict::Violator(_))
    }
}

impl fmt::Display for EfficiencyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EfficiencyVerdict::Violator(v) => write!(f, "violator {}", render(v)),
            EfficiencyVerdict::Certified => write!(f, "certified"),
            EfficiencyVerdict::CleanAtVertexResolution => write!(f, "clean at vertex resolution"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyReport {
    pub closed_rays: Vec<RayInfo>,
    /// `None` without cusp rows.
    pub spun_rays: Option<Vec<RayInfo>>,
    pub verdict_closed: EfficiencyVerdict,
    pub verdict_spun: Option<EfficiencyVerdict>,
}

fn render(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

/// Equations cutting out the closed classes inside `R^{3n}`.
///
/// With cusp rows these are `B x = 0` and `ω(M_k, x) = ω(L_k, x) = 0`.
/// Without them, the closed classes are the span of the edge and tetrahedral
/// solutions, so the equations are a basis of its orthogonal complement.
pub fn closed_equations(g: &GluingData) -> Vec<Vec<i64>> {
    match &g.cusp_rows {
        Some(cusp) => {
            let mut rows = qmatching_matrix(g);
            rows.extend(cusp.iter().map(|r| apply_c(r)));
            rows
        }
        None => span_complement(g),
    }
}

/// Integer basis of the orthogonal complement of `span(E, T)`.
pub fn span_complement(g: &GluingData) -> Vec<Vec<i64>> {
    let gens: Vec<Vec<i64>> = g.edge_rows.iter().cloned().chain((0..g.n).map(|j| g.tet_solution(j))).collect();
    integer_kernel(&IntMatrix::from_i64(&gens)).iter().map(|v| to_i64(v)).collect()
}

fn rays(eq: &[Vec<i64>], dim: usize) -> Result<Vec<QuadVector>, SurfacesError> {
    let m = if eq.is_empty() { IntMatrix::zeros(0, dim) } else { IntMatrix::from_i64(eq) };
    Ok(dd_vertex_enumeration(&m, DD_DEFAULT_CAP)?.iter().map(|r| to_i64(r)).collect())
}

/// Extreme rays of the closed cone `{x ≥ 0 closed}`.
pub fn closed_cone_rays(g: &GluingData) -> Result<Vec<QuadVector>, SurfacesError> {
    rays(&closed_equations(g), 3 * g.n)
}

/// Extreme rays of the spun cone `{x ≥ 0, B x = 0}`.
pub fn spun_cone_rays(g: &GluingData) -> Result<Vec<QuadVector>, SurfacesError> {
    rays(&qmatching_matrix(g), 3 * g.n)
}

fn rat_dot(a: &[BigRational], s: &[i64]) -> BigRational {
    a.iter().zip(s).map(|(x, &y)| x * BigRational::from_integer(y.into())).sum()
}

fn describe(ray: QuadVector, chi: BigRational) -> RayInfo {
    RayInfo { delta: double_arc(&ray), admissible: is_admissible(&ray), ray, chi }
}

/// Closed and (with cusp rows) spun rays, with a three-state verdict each.
pub fn efficiency_report(g: &GluingData) -> Result<EfficiencyReport, SurfacesError> {
    // Closed classes have zero boundary, so any generalised angle structure
    // gives χ = -α·S.
    let alpha = angles::solve_generalized(g)?;
    let closed_rays: Vec<RayInfo> =
        closed_cone_rays(g)?.into_iter().map(|r| { let c = -rat_dot(&alpha, &r); describe(r, c) }).collect();
    let verdict_closed = match closed_rays.iter().find(|r| r.violates()) {
        Some(r) => EfficiencyVerdict::Violator(r.ray.clone()),
        None => match angles::strict_exists(g)? {
            StrictOutcome::Strict(_) => EfficiencyVerdict::Certified,
            StrictOutcome::Witness { .. } => EfficiencyVerdict::CleanAtVertexResolution,
        },
    };
    let (spun_rays, verdict_spun) = if g.cusp_rows.is_some() {
        let mut out = Vec::new();
        for r in spun_cone_rays(g)? {
            let c = qnormal::chi(g, &r)?;
            out.push(describe(r, c));
        }
        let v = match out.iter().find(|r| r.violates()) {
            Some(r) => EfficiencyVerdict::Violator(r.ray.clone()),
            None => match angles::strict_exists_vanishing_holonomy(g)? {
                StrictOutcome::Strict(_) => EfficiencyVerdict::Certified,
                StrictOutcome::Witness { .. } => EfficiencyVerdict::CleanAtVertexResolution,
            },
        };
        (Some(out), Some(v))
    } else {
        (None, None)
    };
    Ok(EfficiencyReport { closed_rays, spun_rays, verdict_closed, verdict_spun })
}

/// Renders a report as a table followed by the verdicts.
pub fn render_report(r: &EfficiencyReport) -> String {
    let mut out = String::new();
    let mut table = |title: &str, rows: &[RayInfo]| {
        out.push_str(&format!("{title} rays: {}\n", rows.len()));
        for ray in rows {
            out.push_str(&format!(
                "  [{}]  chi={}  delta={}  admissible={}\n",
                render(&ray.ray),
                ray.chi,
                ray.delta,
                if ray.admissible { "yes" } else { "no" }
            ));
        }
    };
    table("closed", &r.closed_rays);
    if let Some(s) = &r.spun_rays {
        table("spun", s);
    }
    out.push_str(&format!("closed: {}\n", r.verdict_closed));
    if let Some(v) = &r.verdict_spun {
        out.push_str(&format!("spun: {v}\n"));
    }
    out
}

/// `d = -χ̃ + Σ_i (p_i q_i - p_i - q_i + gcd(p_i, q_i))`, counted in powers of
/// `q^{1/2}` (so the result's `twice` field is `d`). Terms with `p_i = 0` or
/// `q_i = 0` contribute nothing.
pub fn gen_surface_degree(p: &[u64], q: &[u64], chi_tilde: i64) -> HalfInt {
    assert_eq!(p.len(), q.len(), "profile lengths differ");
    let sum: i64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            if a == 0 || b == 0 {
                0
            } else {
                let (a, b) = (a as i64, b as i64);
                a * b - a - b + a.gcd(&b)
            }
        })
        .sum();
    HalfInt::from_twice(-chi_tilde + sum)
}

/// `ω(M_k, x)` and `ω(L_k, x)` for every cusp.
pub fn peripheral_pairings(g: &GluingData, x: &[i64]) -> Option<Vec<i64>> {
    g.cusp_rows.as_ref().map(|c| c.iter().map(|r| symplectic(r, x)).collect())
}

#[doc(hidden)]
pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[doc(hidden)]
pub fn is_zero(v: &[i64]) -> bool {
    v.iter().all(|x| x.is_zero())
}
