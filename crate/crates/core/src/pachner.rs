//! Pachner moves (2-3, 3-2, 0-2, 2-0) on ideal triangulations, path
//! verification and index-invariance checks.
//!
//! Face and edge indices follow the skeleton numbering of
//! [`Triangulation::triangles`] and [`Triangulation::edge_classes`] on the
//! labelling produced by decoding a signature.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::engine::{index, EngineError, IndexRequest, Verdict};
use crate::series::{HalfInt, TruncatedSeries};
use crate::surfaces::{efficiency_report, EfficiencyVerdict, SurfacesError};
use crate::tri::{decode_isosig, encode_isosig, Perm4, TriError, Triangulation, EDGE_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PachnerError {
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("step {step}: got `{got}`, expected `{expected}`")]
    StepMismatch { step: usize, got: String, expected: String },
    #[error("path file line {line}: {msg}")]
    PathParse { line: usize, msg: String },
    #[error(transparent)]
    Tri(#[from] TriError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Surfaces(#[from] SurfacesError),
}

/// A move together with its target.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MoveSpec {
    /// 2-3 move on a triangle.
    TwoThree { face: usize },
    /// 3-2 move on an edge of degree three.
    ThreeTwo { edge: usize },
    /// 0-2 move on the faces at positions `i` and `j` around `edge`
    /// (see [`edge_walk`]).
    ZeroTwo { edge: usize, i: usize, j: usize },
    /// 2-0 move on an edge of degree two.
    TwoZero { edge: usize },
}

impl MoveSpec {
    /// Decodes the path-table convention: `v ≥ 0` is a 2-3 move on face `v`,
    /// `v < 0` a 3-2 move on edge `-v - 1`.
    pub fn from_table(v: i64) -> MoveSpec {
        if v >= 0 {
            MoveSpec::TwoThree { face: v as usize }
        } else {
            MoveSpec::ThreeTwo { edge: (-v - 1) as usize }
        }
    }

    /// The path-table code of a 2-3 or 3-2 move.
    pub fn table_code(&self) -> Option<i64> {
        match *self {
            MoveSpec::TwoThree { face } => Some(face as i64),
            MoveSpec::ThreeTwo { edge } => Some(-(edge as i64) - 1),
            _ => None,
        }
    }
}

impl fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MoveSpec::TwoThree { face } => write!(f, "2-3:{face}"),
            MoveSpec::ThreeTwo { edge } => write!(f, "3-2:{edge}"),
            MoveSpec::ZeroTwo { edge, i, j } => write!(f, "0-2:{edge}:{i}:{j}"),
            MoveSpec::TwoZero { edge } => write!(f, "2-0:{edge}"),
        }
    }
}

impl FromStr for MoveSpec {
    type Err = String;

    /// Accepts a bare table code (`2`, `-3`) or `2-3:F`, `3-2:E`,
    /// `0-2:E:I:J`, `2-0:E`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(v) = s.parse::<i64>() {
            return Ok(MoveSpec::from_table(v));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let num = |k: usize| -> Result<usize, String> {
            parts.get(k).ok_or(format!("missing field in `{s}`"))?.parse().map_err(|e| format!("`{s}`: {e}"))
        };
        match (parts[0], parts.len()) {
            ("2-3", 2) => Ok(MoveSpec::TwoThree { face: num(1)? }),
            ("3-2", 2) => Ok(MoveSpec::ThreeTwo { edge: num(1)? }),
            ("2-0", 2) => Ok(MoveSpec::TwoZero { edge: num(1)? }),
            ("0-2", 4) => Ok(MoveSpec::ZeroTwo { edge: num(1)?, i: num(2)?, j: num(3)? }),
            _ => Err(format!("unrecognised move `{s}`")),
        }
    }
}

/// One step of the walk around an edge: tetrahedron `tet` with the edge
/// running from vertex `u` to `v`; the walk leaves through facet `w` (into
/// the next tetrahedron) and arrived through facet `x`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WalkStep {
    pub tet: usize,
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub x: usize,
}

/// The cyclic sequence of tetrahedra around edge class `edge`, starting from
/// its first embedding. Face `k` of the walk is facet `w` of step `k`, glued
/// to facet `x` of step `k + 1`.
pub fn edge_walk(t: &Triangulation, edge: usize) -> Result<Vec<WalkStep>, PachnerError> {
    let classes = t.edge_classes()?;
    let class = classes
        .classes
        .get(edge)
        .ok_or_else(|| PachnerError::IllegalMove(format!("no edge {edge}")))?;
    let first = class[0];
    let (u, v) = EDGE_VERTICES[first.edge];
    let mut rest = (0..4).filter(|&k| k != u && k != v);
    let (w, x) = (rest.next().unwrap(), rest.next().unwrap());
    let start = WalkStep { tet: first.tet, u, v, w, x };
    let mut out = vec![start];
    let mut cur = start;
    loop {
        let (next, p) = t.adjacent(cur.tet, cur.w);
        let step = WalkStep { tet: next, u: p.apply(cur.u), v: p.apply(cur.v), w: p.apply(cur.x), x: p.apply(cur.w) };
        if step == start {
            break;
        }
        out.push(step);
        cur = step;
        if out.len() > class.len() {
            return Err(PachnerError::IllegalMove(format!("edge {edge} walk does not close")));
        }
    }
    Ok(out)
}

/// A facet of a new tetrahedron lying on the boundary of the replaced region,
/// with the map from its vertices to those of the old tetrahedron it faces.
struct Port {
    new_tet: usize,
    new_facet: usize,
    old_tet: usize,
    phi: Perm4,
}

impl Port {
    fn old_facet(&self) -> usize {
        self.phi.apply(self.new_facet)
    }
}

/// Replaces the tetrahedra `removed` by `count` new ones. `internal` lists
/// gluings among new tetrahedra (each direction given once, the reverse is
/// added); `ports` say how the new tetrahedra meet the old region boundary.
fn replace_region(
    t: &Triangulation,
    removed: &[usize],
    count: usize,
    internal: &[(usize, usize, usize, Perm4)],
    ports: &[Port],
) -> Result<Triangulation, PachnerError> {
    let n = t.size();
    let mut keep = vec![usize::MAX; n];
    let mut k = 0;
    for (i, slot) in keep.iter_mut().enumerate() {
        if !removed.contains(&i) {
            *slot = k;
            k += 1;
        }
    }
    let base = k;
    let total = base + count;
    let mut adj: Vec<[Option<(usize, Perm4)>; 4]> = vec![[None; 4]; total];
    for i in (0..n).filter(|i| keep[*i] != usize::MAX) {
        for f in 0..4 {
            let (u, p) = t.adjacent(i, f);
            if keep[u] != usize::MAX {
                adj[keep[i]][f] = Some((keep[u], p));
            }
        }
    }
    for &(a, fa, b, p) in internal {
        adj[base + a][fa] = Some((base + b, p));
        adj[base + b][p.apply(fa)] = Some((base + a, p.inverse()));
    }
    for port in ports {
        let of = port.old_facet();
        let (x, q) = t.adjacent(port.old_tet, of);
        let xf = q.apply(of);
        let me = base + port.new_tet;
        if keep[x] == usize::MAX {
            let other = ports
                .iter()
                .find(|o| o.old_tet == x && o.old_facet() == xf)
                .ok_or_else(|| PachnerError::IllegalMove("region boundary is not closed".into()))?;
            let g = other.phi.inverse().compose(q).compose(port.phi);
            adj[me][port.new_facet] = Some((base + other.new_tet, g));
        } else {
            let g = q.compose(port.phi);
            adj[me][port.new_facet] = Some((keep[x], g));
            adj[keep[x]][xf] = Some((me, g.inverse()));
        }
    }
    let adj = adj
        .into_iter()
        .map(|row| {
            let mut out = [(0, Perm4::IDENTITY); 4];
            for (o, x) in out.iter_mut().zip(row) {
                *o = x.ok_or_else(|| PachnerError::IllegalMove("unglued facet after move".into()))?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, PachnerError>>()?;
    Ok(Triangulation::from_adjacency(adj)?)
}

fn perm(images: [u8; 4]) -> Perm4 {
    Perm4::new(images).expect("valid permutation")
}

/// Replaces the two tetrahedra meeting at `face` by three around a new edge.
pub fn move_23(t: &Triangulation, face: usize) -> Result<Triangulation, PachnerError> {
    let tris = t.triangles();
    let &(t0, f0) = tris
        .get(face)
        .ok_or_else(|| PachnerError::IllegalMove(format!("no face {face}")))?;
    let (t1, p) = t.adjacent(t0, f0);
    if t1 == t0 {
        return Err(PachnerError::IllegalMove(format!("face {face} joins a tetrahedron to itself")));
    }
    let g = p.apply(f0);
    let vs: Vec<usize> = (0..4).filter(|&v| v != f0).collect();
    let mut ports = Vec::with_capacity(6);
    let mut internal = Vec::with_capacity(3);
    for k in 0..3 {
        let (vk, v1, v2) = (vs[k], vs[(k + 1) % 3], vs[(k + 2) % 3]);
        // New tetrahedron k: vertices (apex0, apex1, v_{k+1}, v_{k+2}).
        let phi = perm([f0 as u8, vk as u8, v1 as u8, v2 as u8]);
        ports.push(Port { new_tet: k, new_facet: 1, old_tet: t0, phi });
        let psi = perm([p.apply(vk) as u8, g as u8, p.apply(v1) as u8, p.apply(v2) as u8]);
        ports.push(Port { new_tet: k, new_facet: 0, old_tet: t1, phi: psi });
        internal.push((k, 2, (k + 1) % 3, perm([0, 1, 3, 2])));
    }
    let mut removed = [t0, t1];
    removed.sort_unstable();
    replace_region(t, &removed, 3, &internal, &ports)
}

/// Replaces the three distinct tetrahedra around a degree-three edge by two.
pub fn move_32(t: &Triangulation, edge: usize) -> Result<Triangulation, PachnerError> {
    let walk = edge_walk(t, edge)?;
    if walk.len() != 3 {
        return Err(PachnerError::IllegalMove(format!("edge {edge} has degree {}", walk.len())));
    }
    let tets: Vec<usize> = walk.iter().map(|s| s.tet).collect();
    if tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2] {
        return Err(PachnerError::IllegalMove(format!("edge {edge} meets a tetrahedron twice")));
    }
    // Step i holds (u, v, e_{i-1}, e_i) with e_{i-1} = w_i and e_i = x_i.
    // Top = (e0, e1, e2, u), bottom = (e0, e1, e2, v); facet j of each faces
    // step j + 2.
    let mut ports = Vec::with_capacity(6);
    for j in 0..3 {
        let s = walk[(j + 2) % 3];
        let mut top = [0u8; 4];
        let mut bottom = [0u8; 4];
        top[j] = s.v as u8;
        top[(j + 1) % 3] = s.w as u8;
        top[(j + 2) % 3] = s.x as u8;
        top[3] = s.u as u8;
        bottom[j] = s.u as u8;
        bottom[(j + 1) % 3] = s.w as u8;
        bottom[(j + 2) % 3] = s.x as u8;
        bottom[3] = s.v as u8;
        ports.push(Port { new_tet: 0, new_facet: j, old_tet: s.tet, phi: perm(top) });
        ports.push(Port { new_tet: 1, new_facet: j, old_tet: s.tet, phi: perm(bottom) });
    }
    let mut removed = tets.clone();
    removed.sort_unstable();
    replace_region(t, &removed, 2, &[(0, 3, 1, Perm4::IDENTITY)], &ports)
}

/// Inserts a pillow of two tetrahedra between faces `i` and `j` of the walk
/// around `edge`, creating a new edge of degree two.
pub fn move_02(t: &Triangulation, edge: usize, i: usize, j: usize) -> Result<Triangulation, PachnerError> {
    let walk = edge_walk(t, edge)?;
    let d = walk.len();
    if i >= d || j >= d || i == j {
        return Err(PachnerError::IllegalMove(format!("faces {i}, {j} around edge {edge} of degree {d}")));
    }
    let side = |k: usize| {
        let a = walk[k];
        let b = walk[(k + 1) % d];
        ((a.tet, a.w), (b.tet, b.x))
    };
    let (li, ri) = side(i);
    let (lj, rj) = side(j);
    if li == lj || li == rj {
        return Err(PachnerError::IllegalMove("the two faces coincide".into()));
    }
    let n = t.size();
    let (a, b) = (n, n + 1);
    let mut adj: Vec<[(usize, Perm4); 4]> = t.adjacency().to_vec();
    adj.push([(b, Perm4::IDENTITY); 4]);
    adj.push([(a, Perm4::IDENTITY); 4]);
    let si = walk[i];
    let si1 = walk[(i + 1) % d];
    let sj = walk[j];
    let sj1 = walk[(j + 1) % d];
    // Pillow vertices: 0 = u, 1 = v, 2 = apex of face i, 3 = apex of face j.
    let glue = |adj: &mut Vec<[(usize, Perm4); 4]>, new: usize, facet: usize, old: (usize, usize), phi: Perm4| {
        debug_assert_eq!(phi.apply(facet), old.1);
        adj[new][facet] = (old.0, phi);
        adj[old.0][old.1] = (new, phi.inverse());
    };
    glue(&mut adj, a, 3, ri, perm([si1.u as u8, si1.v as u8, si1.w as u8, si1.x as u8]));
    glue(&mut adj, a, 2, lj, perm([sj.u as u8, sj.v as u8, sj.w as u8, sj.x as u8]));
    glue(&mut adj, b, 3, li, perm([si.u as u8, si.v as u8, si.x as u8, si.w as u8]));
    glue(&mut adj, b, 2, rj, perm([sj1.u as u8, sj1.v as u8, sj1.x as u8, sj1.w as u8]));
    Ok(Triangulation::from_adjacency(adj)?)
}

/// Removes the pillow of two distinct tetrahedra around a degree-two edge.
pub fn move_20(t: &Triangulation, edge: usize) -> Result<Triangulation, PachnerError> {
    let walk = edge_walk(t, edge)?;
    if walk.len() != 2 {
        return Err(PachnerError::IllegalMove(format!("edge {edge} has degree {}", walk.len())));
    }
    let (sa, sb) = (walk[0], walk[1]);
    let (ta, tb) = (sa.tet, sb.tet);
    if ta == tb {
        return Err(PachnerError::IllegalMove(format!("edge {edge} meets one tetrahedron twice")));
    }
    // Vertex correspondence across the pillow, from A to B.
    let mut img = [0u8; 4];
    img[sa.u] = sb.u as u8;
    img[sa.v] = sb.v as u8;
    img[sa.x] = sb.w as u8;
    img[sa.w] = sb.x as u8;
    let psi = perm(img);
    let pillow = [ta, tb];
    // Collapsing identifies each outer facet of A with its twin in B. Trace
    // each outer facet glued outside the pillow through these
    // identifications until the chain exits the pillow again.
    let twin = |tet: usize, f: usize| -> (usize, usize, Perm4) {
        if tet == ta {
            (tb, psi.apply(f), psi)
        } else {
            (ta, psi.pre_image(f), psi.inverse())
        }
    };
    let outer = [(ta, sa.u), (ta, sa.v), (tb, sb.u), (tb, sb.v)];
    let mut pairs = Vec::new();
    for &(tet, f) in &outer {
        let (x, alpha) = t.adjacent(tet, f);
        if pillow.contains(&x) {
            continue;
        }
        // Map from the current pillow facet's vertices back to x's.
        let mut map = alpha.inverse();
        let (mut cur, mut cf) = (tet, f);
        let mut hops = 0;
        let (y, g) = loop {
            let (nt, nf, tw) = twin(cur, cf);
            map = tw.compose(map);
            let (y, beta) = t.adjacent(nt, nf);
            if !pillow.contains(&y) {
                break (y, beta.compose(map));
            }
            if !outer.contains(&(y, beta.apply(nf))) {
                return Err(PachnerError::IllegalMove(format!("edge {edge}: pillow is not a clean bigon")));
            }
            map = beta.compose(map);
            cur = y;
            cf = beta.apply(nf);
            hops += 1;
            if hops > 4 {
                return Err(PachnerError::IllegalMove(format!("edge {edge}: pillow closes up on itself")));
            }
        };
        pairs.push((x, alpha.apply(f), y, g));
    }
    let n = t.size();
    let renum = |i: usize| i - pillow.iter().filter(|&&p| p < i).count();
    let mut adj: Vec<[(usize, Perm4); 4]> = Vec::with_capacity(n - 2);
    for i in (0..n).filter(|i| !pillow.contains(i)) {
        let mut row = t.adjacency()[i];
        for e in row.iter_mut() {
            if !pillow.contains(&e.0) {
                e.0 = renum(e.0);
            }
        }
        adj.push(row);
    }
    for (x, xf, y, g) in pairs {
        let yf = g.apply(xf);
        if x == y && xf == yf {
            return Err(PachnerError::IllegalMove(format!("edge {edge}: move would fold a face onto itself")));
        }
        adj[renum(x)][xf] = (renum(y), g);
        adj[renum(y)][yf] = (renum(x), g.inverse());
    }
    Ok(Triangulation::from_adjacency(adj)?)
}

/// Applies `m`, then checks the result is a valid ideal triangulation.
pub fn apply_move(t: &Triangulation, m: MoveSpec) -> Result<Triangulation, PachnerError> {
    let out = match m {
        MoveSpec::TwoThree { face } => move_23(t, face)?,
        MoveSpec::ThreeTwo { edge } => move_32(t, edge)?,
        MoveSpec::ZeroTwo { edge, i, j } => move_02(t, edge, i, j)?,
        MoveSpec::TwoZero { edge } => move_20(t, edge)?,
    };
    out.validate()?;
    Ok(out)
}

/// One step of a path file: a signature and the move leaving it (`None` on
/// the final line).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathStep {
    pub isosig: String,
    pub mv: Option<MoveSpec>,
}

/// Parses path files: lines `isoSig move`, each path closed by a line whose
/// move is `end`. Blank lines and `#` comments are skipped. Returns every
/// path in the file.
pub fn parse_paths(text: &str) -> Result<Vec<Vec<PathStep>>, PachnerError> {
    let mut paths = Vec::new();
    let mut cur = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let err = |msg: String| PachnerError::PathParse { line: ln + 1, msg };
        if toks.len() != 2 {
            return Err(err("expected `isoSig move`".into()));
        }
        if toks[1] == "end" {
            cur.push(PathStep { isosig: toks[0].to_string(), mv: None });
            paths.push(std::mem::take(&mut cur));
        } else {
            let mv = toks[1].parse::<MoveSpec>().map_err(err)?;
            cur.push(PathStep { isosig: toks[0].to_string(), mv: Some(mv) });
        }
    }
    if !cur.is_empty() {
        return Err(PachnerError::PathParse { line: text.lines().count(), msg: "missing `end` line".into() });
    }
    Ok(paths)
}

/// Outcome of replaying one path.
#[derive(Clone, PartialEq, Debug)]
pub struct PathReport {
    pub steps: usize,
    pub signatures: Vec<String>,
    /// Closed 1-efficiency verdict for each signature, when computed.
    pub efficiency: Vec<EfficiencyVerdict>,
}

impl PathReport {
    /// Whether every triangulation on the path is 1-efficient at vertex
    /// resolution (or certified).
    pub fn all_one_efficient(&self) -> bool {
        !self.efficiency.is_empty() && self.efficiency.iter().all(EfficiencyVerdict::is_clean)
    }
}

/// Closed 1-efficiency verdict of a triangulation.
pub fn one_efficiency(t: &Triangulation) -> Result<EfficiencyVerdict, PachnerError> {
    Ok(efficiency_report(&t.gluing_data()?)?.verdict_closed)
}

/// [`verify_path`] followed by a closed 1-efficiency verdict per signature.
pub fn verify_path_with_efficiency(path: &[PathStep]) -> Result<PathReport, PachnerError> {
    let mut report = verify_path(path)?;
    report.efficiency = report
        .signatures
        .iter()
        .map(|s| one_efficiency(&decode_isosig(s)?))
        .collect::<Result<_, _>>()?;
    Ok(report)
}

/// Replays a path, checking every produced signature against the next line.
pub fn verify_path(path: &[PathStep]) -> Result<PathReport, PachnerError> {
    let mut signatures = Vec::with_capacity(path.len());
    for (k, step) in path.iter().enumerate() {
        signatures.push(step.isosig.clone());
        let Some(mv) = step.mv else { break };
        let t = decode_isosig(&step.isosig)?;
        let got = encode_isosig(&apply_move(&t, mv)?);
        let expected = path
            .get(k + 1)
            .map(|s| s.isosig.clone())
            .ok_or_else(|| PachnerError::PathParse { line: k + 1, msg: "move after the last signature".into() })?;
        if got != expected {
            return Err(PachnerError::StepMismatch { step: k, got, expected });
        }
    }
    Ok(PathReport { steps: path.len().saturating_sub(1), signatures, efficiency: Vec::new() })
}

/// Result of comparing `I⁰(0)` across a move.
#[derive(Clone, Debug, PartialEq)]
pub enum Invariance {
    Agree(TruncatedSeries),
    Disagree { before: TruncatedSeries, after: TruncatedSeries },
    /// Side 0 (before) or 1 (after) is not 1-efficient at vertex resolution,
    /// so no equality is predicted.
    NotOneEfficient { side: usize, verdict: EfficiencyVerdict },
    /// The index sum on one side did not converge under the default limits.
    NotConverged { side: usize, verdict: Verdict },
}

impl Invariance {
    pub fn holds(&self) -> bool {
        matches!(self, Invariance::Agree(_))
    }
}

/// `I⁰(0)` of a triangulation, from its edge equation matrix.
pub fn index_zero(t: &Triangulation, order: HalfInt) -> Result<(TruncatedSeries, Verdict), PachnerError> {
    let r = index(&IndexRequest::zero(t.gluing_data()?, order))?;
    Ok((r.series, r.verdict))
}

/// Applies `m` and compares `I⁰(0)` on both sides to `order`, after checking
/// that both sides are 1-efficient.
pub fn invariance_check(t: &Triangulation, m: MoveSpec, order: HalfInt) -> Result<Invariance, PachnerError> {
    let after = apply_move(t, m)?;
    for (side, tri) in [t, &after].into_iter().enumerate() {
        let verdict = one_efficiency(tri)?;
        if !verdict.is_clean() {
            return Ok(Invariance::NotOneEfficient { side, verdict });
        }
    }
    let mut series = Vec::new();
    for (side, tri) in [t, &after].into_iter().enumerate() {
        let (s, verdict) = index_zero(tri, order)?;
        if verdict != Verdict::Converged {
            return Ok(Invariance::NotConverged { side, verdict });
        }
        series.push(s);
    }
    let after = series.pop().expect("two sides");
    let before = series.pop().expect("two sides");
    Ok(if before == after { Invariance::Agree(before) } else { Invariance::Disagree { before, after } })
}
