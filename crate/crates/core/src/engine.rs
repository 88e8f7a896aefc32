//! The index sum over Q-normal classes.
//!
//! For a base class `S₀` the engine sums `I(S₀ + v)` over `v` in the image
//! lattice of the edge solutions modulo tetrahedral solutions, where
//! `I(S) = (-q^{1/2})^{-χ(S*)} Π_j J_Δ(S*_j)`. Lattice points are visited in
//! L∞ shells of growing radius and a term is only expanded when its lowest
//! degree lies below the requested order.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::ToPrimitive;
use parking_lot::Mutex;
use rayon::prelude::*;
use thiserror::Error;

use crate::qnormal::{self, double_arc, minimal_rep, LatticeStructure, QNormalError, QuadVector};
use crate::series::{HalfInt, TruncatedSeries};
use crate::tetindex::j_product;
use crate::tri::GluingData;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("gluing data has no cusp rows")]
    MissingCuspRows,
    #[error("peripheral class {0} has no integral representative")]
    NonIntegerBaseClass(String),
    #[error("base class is not Q-normal")]
    NotQNormal,
    #[error(transparent)]
    QNormal(#[from] QNormalError),
}

impl EngineError {
    fn from_qn(e: QNormalError) -> Self {
        match e {
            QNormalError::MissingCuspRows => EngineError::MissingCuspRows,
            QNormalError::NotQNormal => EngineError::NotQNormal,
            other => EngineError::QNormal(other),
        }
    }
}

/// Shell enumeration settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub initial_radius: u32,
    pub max_radius: u32,
    pub stabilization_shells: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { initial_radius: 4, max_radius: 24, stabilization_shells: 2 }
    }
}

/// The coset to sum over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseClass {
    /// An explicit Q-normal class `S₀`.
    Class(QuadVector),
    /// Coefficients `(p_1, q_1, p_2, …)` of `Σ (p_k M_k + q_k L_k)`.
    Peripheral(Vec<HalfInt>),
}

#[derive(Clone, Debug)]
pub struct IndexRequest {
    pub gluing: GluingData,
    pub base: BaseClass,
    pub order: HalfInt,
    pub limits: Limits,
}

impl IndexRequest {
    /// `S₀ = 0` with default limits.
    pub fn zero(gluing: GluingData, order: HalfInt) -> Self {
        let base = BaseClass::Class(vec![0; 3 * gluing.n]);
        IndexRequest { gluing, base, order, limits: Limits::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    /// Shells kept contributing low-degree terms up to the maximum radius
    /// without the minimal degree growing; `direction` is in lattice
    /// coordinates and `lift` is the corresponding quad vector.
    DivergenceSuspected { direction: Vec<i64>, lift: QuadVector },
    /// Shells still contributed at the maximum radius but degrees were growing.
    RadiusExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Converged => write!(f, "converged"),
            Verdict::DivergenceSuspected { direction, .. } => {
                let d: Vec<String> = direction.iter().map(i64::to_string).collect();
                write!(f, "divergence suspected along ({})", d.join(", "))
            }
            Verdict::RadiusExhausted => write!(f, "radius exhausted"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IndexResult {
    pub series: TruncatedSeries,
    pub terms_included: usize,
    pub shells_explored: u32,
    pub verdict: Verdict,
    pub limits: Limits,
    /// The integral base class actually summed over.
    pub base_class: QuadVector,
    /// Smallest term degree encountered (q-exponent), if any term was expanded.
    pub min_term_degree: Option<HalfInt>,
}

type Cache = Mutex<HashMap<String, Arc<LatticeStructure>>>;

fn cache() -> &'static Cache {
    static CACHE: std::sync::OnceLock<Cache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// [`qnormal::lattice_structure`] memoised on the gluing matrix.
pub fn lattice(g: &GluingData) -> Result<Arc<LatticeStructure>, EngineError> {
    let key = g.to_text();
    if let Some(ls) = cache().lock().get(&key) {
        return Ok(ls.clone());
    }
    let ls = Arc::new(qnormal::lattice_structure(g).map_err(EngineError::from_qn)?);
    cache().lock().insert(key, ls.clone());
    Ok(ls)
}

/// Points of `Z^k` with L∞ norm exactly `r`, in lexicographic order.
pub fn shell_points(k: usize, r: i64) -> Vec<Vec<i64>> {
    if k == 0 {
        return if r == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut cur = vec![-r; k];
    loop {
        if cur.iter().any(|c| c.abs() == r) {
            out.push(cur.clone());
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                cur[i + 1..].fill(-r);
                break;
            }
        }
    }
}

struct Summand<'a> {
    base: &'a [i64],
    chi0: i64,
    lifts: &'a [QuadVector],
    lift_chi: &'a [i64],
}

impl Summand<'_> {
    fn point(&self, c: &[i64]) -> (QuadVector, i64) {
        let mut s = self.base.to_vec();
        let mut chi = self.chi0;
        for ((&k, lift), &lc) in c.iter().zip(self.lifts).zip(self.lift_chi) {
            for (x, y) in s.iter_mut().zip(lift) {
                *x += k * y;
            }
            chi += k * lc;
        }
        (s, chi)
    }
}

/// `I(S) = (-q^{1/2})^{-χ(S*)} j_product(S*)` truncated at `order`.
pub fn term(s: &[i64], chi: i64, order: HalfInt) -> TruncatedSeries {
    let (star, mins) = minimal_rep(s);
    let chi_star = chi + mins.iter().sum::<i64>();
    let inner = j_product(&star, HalfInt::from_twice(order.twice + chi_star));
    inner.mul_sign_power(-chi_star)
}

/// Integral representative of `Σ (p_k M_k + q_k L_k)`.
///
/// When the peripheral combination has half-integer entries, half-multiples
/// of edge solutions (and, failing that, pairs of tetrahedral solutions with
/// opposite signs) are added. Returns the class together with the number of
/// half edge solutions used.
pub fn peripheral_base(g: &GluingData, coeffs: &[HalfInt]) -> Result<(QuadVector, usize), EngineError> {
    let cusp = g.cusp_rows.as_ref().ok_or(EngineError::MissingCuspRows)?;
    if coeffs.len() != cusp.len() {
        return Err(EngineError::QNormal(QNormalError::Shape { got: coeffs.len(), expected: cusp.len() }));
    }
    // Doubled class.
    let twice: Vec<i64> =
        (0..3 * g.n).map(|c| coeffs.iter().zip(cusp).map(|(p, row)| p.twice * row[c]).sum()).collect();
    let describe = || {
        let parts: Vec<String> = coeffs.iter().map(|h| h.to_string()).collect();
        format!("({})", parts.join(", "))
    };
    let ne = g.edge_rows.len();
    let mut best: Option<(usize, u64, u64)> = None;
    // Search subsets of half edge solutions and an even set of half
    // tetrahedral solutions, fewest tetrahedral halves first.
    for tmask in 0u64..(1 << g.n) {
        if tmask.count_ones() % 2 == 1 {
            continue;
        }
        for emask in 0u64..(1 << ne) {
            let ok = (0..3 * g.n).all(|c| {
                let e: i64 = (0..ne).filter(|i| emask >> i & 1 == 1).map(|i| g.edge_rows[i][c]).sum();
                let t = i64::from(tmask >> (c / 3) & 1 == 1);
                (twice[c] + e + t).rem_euclid(2) == 0
            });
            if !ok {
                continue;
            }
            let key = (tmask.count_ones() as usize, emask.count_ones() as u64, emask);
            let better = best.is_none_or(|(bt, be, bm)| (key.0, key.1, key.2) < (bt, be, bm));
            if better {
                best = Some((key.0, key.1, (tmask << 32) | emask));
            }
        }
        if best.is_some() {
            break;
        }
    }
    let (_, halves_e, masks) = best.ok_or_else(|| EngineError::NonIntegerBaseClass(describe()))?;
    let (tmask, emask) = (masks >> 32, masks & 0xffff_ffff);
    let mut sign = 1;
    let mut s = twice.clone();
    for (i, row) in g.edge_rows.iter().enumerate() {
        if emask >> i & 1 == 1 {
            s.iter_mut().zip(row).for_each(|(x, y)| *x += y);
        }
    }
    for j in 0..g.n {
        if tmask >> j & 1 == 1 {
            s[3 * j..3 * j + 3].iter_mut().for_each(|x| *x += sign);
            sign = -sign;
        }
    }
    Ok((s.iter().map(|x| x / 2).collect(), halves_e as usize))
}

fn base_class(req: &IndexRequest) -> Result<(QuadVector, usize), EngineError> {
    match &req.base {
        BaseClass::Class(s) => {
            if s.len() != 3 * req.gluing.n {
                return Err(EngineError::QNormal(QNormalError::Shape { got: s.len(), expected: 3 * req.gluing.n }));
            }
            Ok((s.clone(), 0))
        }
        BaseClass::Peripheral(p) => peripheral_base(&req.gluing, p),
    }
}

/// Evaluates the index sum. Every term carries the weight `(-q^{1/2})^{-χ}`,
/// also when half edge solutions were needed to make a peripheral base class
/// integral.
pub fn index(req: &IndexRequest) -> Result<IndexResult, EngineError> {
    let g = &req.gluing;
    let (base, _) = base_class(req)?;
    if !qnormal::is_qnormal(g, &base) {
        return Err(EngineError::NotQNormal);
    }
    let chi0 = qnormal::chi_int(g, &base).map_err(EngineError::from_qn)?;
    let ls = lattice(g)?;
    let summand = Summand { base: &base, chi0, lifts: &ls.edge_lifts, lift_chi: &ls.edge_lift_chi };
    let rank = ls.edge_lifts.len();
    let order = req.order;
    let lim = req.limits;

    let mut series = TruncatedSeries::zero(order);
    let mut terms = 0usize;
    let mut empty_run = 0u32;
    let mut min_degree: Option<HalfInt> = None;
    // Per shell: minimal degree and where it was attained.
    let mut shell_min: Vec<Option<(HalfInt, Vec<i64>)>> = Vec::new();
    let mut radius = 0u32;
    let verdict = loop {
        let pts = shell_points(rank, i64::from(radius));
        let evaluated: Vec<(Vec<i64>, HalfInt, Option<TruncatedSeries>)> = pts
            .into_par_iter()
            .map(|c| {
                let (s, chi) = summand.point(&c);
                let (deg, _) = qnormal::degree_with_chi(&s, chi);
                let t = (deg < order).then(|| term(&s, chi, order));
                (c, deg, t)
            })
            .collect();
        let mut contributed = false;
        let mut smin: Option<(HalfInt, Vec<i64>)> = None;
        for (c, deg, t) in evaluated {
            if smin.as_ref().is_none_or(|(d, _)| deg < *d) {
                smin = Some((deg, c.clone()));
            }
            if let Some(t) = t {
                contributed = true;
                terms += 1;
                min_degree = Some(min_degree.map_or(deg, |m: HalfInt| m.min(deg)));
                series = series.add(&t);
            }
        }
        shell_min.push(smin);
        empty_run = if contributed { 0 } else { empty_run + 1 };
        if rank == 0 {
            break Verdict::Converged;
        }
        if radius >= lim.initial_radius && empty_run >= lim.stabilization_shells {
            break Verdict::Converged;
        }
        if radius >= lim.max_radius {
            let back = (lim.stabilization_shells.max(1) as usize).min(shell_min.len() - 1);
            let last = shell_min.last().cloned().flatten();
            let earlier = shell_min[shell_min.len() - 1 - back].clone();
            break match (last, earlier) {
                (Some((dl, c)), Some((de, _))) if dl <= de => {
                    let g = c.iter().fold(0i64, |a, &b| a.gcd(&b)).max(1);
                    let direction: Vec<i64> = c.iter().map(|x| x / g).collect();
                    let zero = vec![0; base.len()];
                    let origin = Summand { base: &zero, chi0: 0, ..summand };
                    let (lift, _) = origin.point(&direction);
                    Verdict::DivergenceSuspected { direction, lift }
                }
                _ => Verdict::RadiusExhausted,
            };
        }
        radius += 1;
    };
    Ok(IndexResult {
        series,
        terms_included: terms,
        shells_explored: radius + 1,
        verdict,
        limits: lim,
        base_class: base,
        min_term_degree: min_degree,
    })
}

/// `I_T(Σ_k p_k μ_k + q_k λ_k)` with default limits.
pub fn index_peripheral(g: &GluingData, coeffs: &[HalfInt], order: HalfInt) -> Result<IndexResult, EngineError> {
    index(&IndexRequest {
        gluing: g.clone(),
        base: BaseClass::Peripheral(coeffs.to_vec()),
        order,
        limits: Limits::default(),
    })
}

/// Sum over an explicit class with default limits.
pub fn index_class(g: &GluingData, s: &[i64], order: HalfInt) -> Result<IndexResult, EngineError> {
    index(&IndexRequest { gluing: g.clone(), base: BaseClass::Class(s.to_vec()), order, limits: Limits::default() })
}

/// Outcome of [`divergence_probe`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probe {
    Converges,
    /// Doubled degrees `d(S₀ + k v)` for `k = 1..=K` are non-increasing.
    Witness { direction: Vec<i64>, lift: QuadVector, degrees: Vec<i64> },
}

pub const PROBE_STEPS: i64 = 8;
pub const PROBE_COEFF_BOUND: i64 = 2;

/// Looks for a lattice direction `v` with `δ(v*) = 0` along which the term
/// degrees of `S₀ + kv` do not grow over `k = 1..=8`. Directions are tried
/// in lexicographic order over coefficients in `[-2, 2]`.
pub fn divergence_probe(g: &GluingData, s0: &[i64]) -> Result<Probe, EngineError> {
    if !qnormal::is_qnormal(g, s0) {
        return Err(EngineError::NotQNormal);
    }
    let chi0 = qnormal::chi_int(g, s0).map_err(EngineError::from_qn)?;
    let ls = lattice(g)?;
    let summand = Summand { base: s0, chi0, lifts: &ls.edge_lifts, lift_chi: &ls.edge_lift_chi };
    let zero = vec![0; s0.len()];
    let origin = Summand { base: &zero, chi0: 0, lifts: &ls.edge_lifts, lift_chi: &ls.edge_lift_chi };
    let rank = ls.edge_lifts.len();
    for r in 1..=PROBE_COEFF_BOUND {
        for c in shell_points(rank, r) {
            let (v, _) = origin.point(&c);
            if double_arc(&minimal_rep(&v).0) != 0 {
                continue;
            }
            let degrees: Vec<i64> = (1..=PROBE_STEPS)
                .map(|k| {
                    let ck: Vec<i64> = c.iter().map(|x| k * x).collect();
                    let (s, chi) = summand.point(&ck);
                    qnormal::degree_with_chi(&s, chi).0.twice
                })
                .collect();
            if degrees.windows(2).all(|w| w[1] <= w[0]) {
                return Ok(Probe::Witness { direction: c, lift: v, degrees });
            }
        }
    }
    Ok(Probe::Converges)
}

/// Doubled lowest degree over the first shells, for diagnostics.
pub fn min_degree_in_radius(g: &GluingData, s0: &[i64], radius: u32) -> Result<i64, EngineError> {
    let chi0 = qnormal::chi_int(g, s0).map_err(EngineError::from_qn)?;
    let ls = lattice(g)?;
    let summand = Summand { base: s0, chi0, lifts: &ls.edge_lifts, lift_chi: &ls.edge_lift_chi };
    let rank = ls.edge_lifts.len();
    let mut best = i64::MAX;
    for r in 0..=i64::from(radius) {
        for c in shell_points(rank, r) {
            let (s, chi) = summand.point(&c);
            best = best.min(qnormal::degree_with_chi(&s, chi).0.twice);
        }
    }
    Ok(best)
}

#[doc(hidden)]
pub fn to_small(x: &num_bigint::BigInt) -> i64 {
    x.to_i64().expect("small integer")
}
