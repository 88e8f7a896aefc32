//! Ideal triangulations: the gluing data model, skeleton (vertices, edges,
//! triangles), orientation, isomorphism signatures and gluing matrices.

mod gluing;
mod isosig;
pub mod perm;

use std::collections::HashMap;

use thiserror::Error;

pub use gluing::{apply_c, load_gluing_matrix, qmatching_matrix, GluingData};
pub use isosig::{decode_isosig, encode_isosig};
pub use perm::Perm4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriError {
    #[error("malformed signature: {0}")]
    MalformedSignature(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("shape error: {0}")]
    Shape(String),
}

/// Vertex pairs of the six edges of a tetrahedron, in the standard order.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Quad slot of each edge: 0 for 01/23, 1 for 02/13, 2 for 03/12.
pub const EDGE_SLOT: [usize; 6] = [0, 1, 2, 2, 1, 0];

/// Edge number of the edge joining vertices `a` and `b`.
pub fn edge_number(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTICES.iter().position(|&e| e == (a, b)).expect("distinct vertices")
}

/// `n` tetrahedra with every facet glued: `adj[t][f] = (u, p)` glues facet
/// `f` of `t` to facet `p(f)` of `u`, sending vertex `i` of `t` to `p(i)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triangulation {
    adj: Vec<[(usize, Perm4); 4]>,
}

/// One appearance of an edge class inside a tetrahedron.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EdgeEmbedding {
    pub tet: usize,
    /// Edge number 0..6 (see [`EDGE_VERTICES`]).
    pub edge: usize,
    /// Quad slot 0..3 of that edge.
    pub slot: usize,
    /// `true` when the edge runs against the class's reference direction.
    pub reversed: bool,
}

/// Edge classes, numbered by first appearance over tetrahedra then edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeClassTable {
    pub classes: Vec<Vec<EdgeEmbedding>>,
}

impl EdgeClassTable {
    pub fn degrees(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Class index of edge `e` of tetrahedron `t`.
    pub fn class_of(&self, t: usize, e: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.iter().any(|x| x.tet == t && x.edge == e))
            .expect("every edge lies in a class")
    }
}

struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (r, p) = self.find(self.parent[x]);
        self.parent[x] = r;
        self.parity[x] ^= p;
        (r, self.parity[x])
    }

    /// Joins `a` and `b` with relative parity `rel`; `false` on contradiction.
    fn union(&mut self, a: usize, b: usize, rel: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.parity[hi] = pa ^ pb ^ rel;
        true
    }
}

impl Triangulation {
    /// Validates that the gluing is an involution without self-glued facets.
    pub fn from_adjacency(adj: Vec<[(usize, Perm4); 4]>) -> Result<Self, TriError> {
        let n = adj.len();
        for (t, row) in adj.iter().enumerate() {
            for (f, &(u, p)) in row.iter().enumerate() {
                if u >= n {
                    return Err(TriError::InvalidTriangulation(format!("tetrahedron {u} out of range")));
                }
                let g = p.apply(f);
                if u == t && g == f {
                    return Err(TriError::InvalidTriangulation(format!("facet {t}:{f} glued to itself")));
                }
                let (back, q) = adj[u][g];
                if back != t || q != p.inverse() {
                    return Err(TriError::InvalidTriangulation(format!(
                        "gluing of facet {t}:{f} is not an involution"
                    )));
                }
            }
        }
        Ok(Triangulation { adj })
    }

    pub fn size(&self) -> usize {
        self.adj.len()
    }

    /// Gluing table: a line `n`, then per tetrahedron four `u:ijkl` entries
    /// giving the adjacent tetrahedron and the images of vertices 0..3.
    pub fn to_table(&self) -> String {
        let mut out = format!("{}\n", self.size());
        for row in &self.adj {
            let cells: Vec<String> = row
                .iter()
                .map(|(u, p)| {
                    let im = p.images();
                    format!("{u}:{}{}{}{}", im[0], im[1], im[2], im[3])
                })
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`Triangulation::to_table`].
    pub fn from_table(text: &str) -> Result<Self, TriError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, col: usize, msg: &str| TriError::Parse { line, col, msg: msg.to_string() };
        let (hl, header) = lines.next().ok_or_else(|| err(1, 1, "empty gluing table"))?;
        let n: usize = header.parse().map_err(|_| err(hl, 1, "expected tetrahedron count"))?;
        let mut adj = Vec::with_capacity(n);
        for (ln, line) in lines {
            let mut row = [(0, Perm4::IDENTITY); 4];
            let cells: Vec<&str> = line.split_whitespace().collect();
            if cells.len() != 4 {
                return Err(err(ln, 1, "expected four `u:ijkl` entries"));
            }
            for (f, cell) in cells.iter().enumerate() {
                let col = line.find(cell).unwrap_or(0) + 1;
                let (u, p) = cell.split_once(':').ok_or_else(|| err(ln, col, "expected `u:ijkl`"))?;
                let u: usize = u.parse().map_err(|_| err(ln, col, "bad tetrahedron index"))?;
                let digits: Vec<u8> = p.bytes().map(|b| b.wrapping_sub(b'0')).collect();
                let images: [u8; 4] = digits.try_into().map_err(|_| err(ln, col, "permutation needs four digits"))?;
                let p = Perm4::new(images).ok_or_else(|| err(ln, col, "not a permutation"))?;
                row[f] = (u, p);
            }
            adj.push(row);
        }
        if adj.len() != n {
            return Err(TriError::Shape(format!("{} rows for {n} tetrahedra", adj.len())));
        }
        Triangulation::from_adjacency(adj)
    }

    #[inline]
    pub fn adjacent(&self, t: usize, f: usize) -> (usize, Perm4) {
        self.adj[t][f]
    }

    pub fn adjacency(&self) -> &[[(usize, Perm4); 4]] {
        &self.adj
    }

    /// Relabels tetrahedron `t` as `tet_map[t]` with vertex `i` becoming
    /// `vert_maps[t](i)`.
    pub fn relabel(&self, tet_map: &[usize], vert_maps: &[Perm4]) -> Triangulation {
        let n = self.size();
        let mut adj = vec![[(0, Perm4::IDENTITY); 4]; n];
        for t in 0..n {
            for f in 0..4 {
                let (u, p) = self.adj[t][f];
                let g = vert_maps[u].compose(p).compose(vert_maps[t].inverse());
                adj[tet_map[t]][vert_maps[t].apply(f)] = (tet_map[u], g);
            }
        }
        Triangulation { adj }
    }

    /// Per-tetrahedron signs making every gluing orientation-reversing, with
    /// tetrahedron 0 positive; `None` if the triangulation is non-orientable.
    pub fn orientation(&self) -> Option<Vec<i8>> {
        let n = self.size();
        let mut sign = vec![0i8; n];
        if n == 0 {
            return Some(sign);
        }
        sign[0] = 1;
        let mut stack = vec![0];
        while let Some(t) = stack.pop() {
            for f in 0..4 {
                let (u, p) = self.adj[t][f];
                let want = -sign[t] * p.sign() as i8;
                if sign[u] == 0 {
                    sign[u] = want;
                    stack.push(u);
                } else if sign[u] != want {
                    return None;
                }
            }
        }
        Some(sign)
    }

    /// Vertex classes: `class[t][v]` and the class count.
    pub fn vertex_classes(&self) -> (Vec<[usize; 4]>, usize) {
        let n = self.size();
        let mut uf = ParityUnionFind::new(4 * n);
        for t in 0..n {
            for f in 0..4 {
                let (u, p) = self.adj[t][f];
                for v in (0..4).filter(|&v| v != f) {
                    uf.union(4 * t + v, 4 * u + p.apply(v), false);
                }
            }
        }
        let mut label: HashMap<usize, usize> = HashMap::new();
        let mut out = vec![[0usize; 4]; n];
        for t in 0..n {
            for v in 0..4 {
                let r = uf.find(4 * t + v).0;
                let k = label.len();
                out[t][v] = *label.entry(r).or_insert(k);
            }
        }
        (out, label.len())
    }

    pub fn num_cusps(&self) -> usize {
        self.vertex_classes().1
    }

    /// Edge classes with orientation tracking.
    pub fn edge_classes(&self) -> Result<EdgeClassTable, TriError> {
        let n = self.size();
        let mut uf = ParityUnionFind::new(6 * n);
        for t in 0..n {
            for f in 0..4 {
                let (u, p) = self.adj[t][f];
                for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                    if a == f || b == f {
                        continue;
                    }
                    let (pa, pb) = (p.apply(a), p.apply(b));
                    if !uf.union(6 * t + e, 6 * u + edge_number(pa, pb), pa > pb) {
                        return Err(TriError::InvalidTriangulation(format!(
                            "edge {e} of tetrahedron {t} is identified with itself in reverse"
                        )));
                    }
                }
            }
        }
        let mut label: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<Vec<EdgeEmbedding>> = Vec::new();
        for t in 0..n {
            for e in 0..6 {
                let (r, par) = uf.find(6 * t + e);
                let k = *label.entry(r).or_insert_with(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
                classes[k].push(EdgeEmbedding { tet: t, edge: e, slot: EDGE_SLOT[e], reversed: par });
            }
        }
        for c in classes.iter_mut() {
            let flip = c[0].reversed;
            for x in c.iter_mut() {
                x.reversed ^= flip;
            }
        }
        Ok(EdgeClassTable { classes })
    }

    /// Triangles numbered by scanning tetrahedra in order and, within each,
    /// facets from 3 down to 0. Each entry is one side `(tet, facet)`.
    pub fn triangles(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut seen = vec![[false; 4]; n];
        let mut out = Vec::new();
        for t in 0..n {
            for f in (0..4).rev() {
                if seen[t][f] {
                    continue;
                }
                let (u, p) = self.adj[t][f];
                seen[t][f] = true;
                seen[u][p.apply(f)] = true;
                out.push((t, f));
            }
        }
        out
    }

    /// Euler characteristic of each vertex link.
    pub fn vertex_link_euler(&self) -> Result<Vec<i64>, TriError> {
        let (vc, k) = self.vertex_classes();
        let edges = self.edge_classes()?;
        let mut faces = vec![0i64; k];
        for row in &vc {
            for &c in row {
                faces[c] += 1;
            }
        }
        let mut verts = vec![0i64; k];
        for class in &edges.classes {
            let x = class[0];
            let (a, b) = EDGE_VERTICES[x.edge];
            verts[vc[x.tet][a]] += 1;
            verts[vc[x.tet][b]] += 1;
        }
        Ok((0..k).map(|i| verts[i] - 3 * faces[i] / 2 + faces[i]).collect())
    }

    /// Checks the ideal-triangulation invariants: orientable, every vertex
    /// link a torus or Klein bottle, and as many edges as tetrahedra.
    pub fn validate(&self) -> Result<(), TriError> {
        if self.orientation().is_none() {
            return Err(TriError::InvalidTriangulation("non-orientable".into()));
        }
        let euler = self.vertex_link_euler()?;
        if let Some(c) = euler.iter().find(|&&c| c != 0) {
            return Err(TriError::InvalidTriangulation(format!("vertex link with Euler characteristic {c}")));
        }
        let e = self.edge_classes()?.classes.len();
        if e != self.size() {
            return Err(TriError::InvalidTriangulation(format!("{e} edges for {} tetrahedra", self.size())));
        }
        Ok(())
    }

    /// The `n × 3n` edge-equation matrix: entry `(i, 3j + s)` counts edges of
    /// tetrahedron `j` in slot `s` lying in class `i`. Negatively oriented
    /// tetrahedra have their second and third slots exchanged so that the
    /// slot order is the same cyclic order in every tetrahedron.
    pub fn edge_equation_matrix(&self) -> Result<Vec<Vec<i64>>, TriError> {
        let n = self.size();
        let signs = self
            .orientation()
            .ok_or_else(|| TriError::InvalidTriangulation("non-orientable".into()))?;
        let classes = self.edge_classes()?;
        let mut rows = vec![vec![0i64; 3 * n]; classes.classes.len()];
        for (i, c) in classes.classes.iter().enumerate() {
            for x in c {
                let slot = if signs[x.tet] < 0 && x.slot > 0 { 3 - x.slot } else { x.slot };
                rows[i][3 * x.tet + slot] += 1;
            }
        }
        Ok(rows)
    }

    /// Gluing data with edge rows only.
    pub fn gluing_data(&self) -> Result<GluingData, TriError> {
        let rows = self.edge_equation_matrix()?;
        GluingData::new(self.size(), self.num_cusps(), rows, None)
    }
}
