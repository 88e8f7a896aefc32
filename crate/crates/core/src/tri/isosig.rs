//! Isomorphism signatures.
//!
//! A signature lists, for a canonical relabelling, the number of tetrahedra,
//! one action per unglued facet (packed three base-3 digits per character,
//! lowest digit first: 0 = boundary, 1 = glued to the next new tetrahedron
//! by the identity, 2 = glued to an already seen tetrahedron), then the
//! destination tetrahedra and gluing permutations of the type-2 actions.
//! The canonical signature is the bytewise smallest over all starting
//! tetrahedra and starting vertex labellings.

use super::perm::Perm4;
use super::{TriError, Triangulation};

const ALPHABET: &[u8; 64] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

fn schar(v: usize) -> u8 {
    ALPHABET[v]
}

fn sval(c: u8) -> Option<usize> {
    ALPHABET.iter().position(|&a| a == c)
}

fn push_int(out: &mut Vec<u8>, mut v: usize, nchars: usize) {
    for _ in 0..nchars {
        out.push(schar(v & 0x3f));
        v >>= 6;
    }
}

fn chars_needed(n: usize) -> usize {
    if n < 63 {
        1
    } else {
        let mut k = 0;
        let mut t = n;
        while t > 0 {
            t >>= 6;
            k += 1;
        }
        k
    }
}

struct Reader<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Result<usize, TriError> {
        let c = *self
            .s
            .get(self.pos)
            .ok_or_else(|| TriError::MalformedSignature("truncated signature".into()))?;
        self.pos += 1;
        sval(c).ok_or_else(|| TriError::MalformedSignature(format!("bad character `{}`", c as char)))
    }

    fn int(&mut self, nchars: usize) -> Result<usize, TriError> {
        let mut v = 0usize;
        for k in 0..nchars {
            v |= self.next()? << (6 * k);
        }
        Ok(v)
    }
}

/// Decodes a signature into the labelled triangulation it describes.
pub fn decode_isosig(sig: &str) -> Result<Triangulation, TriError> {
    let bad = |m: &str| TriError::MalformedSignature(format!("{m} in `{sig}`"));
    let mut r = Reader { s: sig.trim().as_bytes(), pos: 0 };
    let first = r.next()?;
    let (n, nchars) = if first < 63 {
        (first, 1)
    } else {
        let k = r.next()?;
        (r.int(k)?, k)
    };
    if n == 0 {
        return Err(bad("empty triangulation"));
    }
    let mut actions = Vec::new();
    let mut consumed = 0;
    while consumed < 4 * n {
        let v = r.next()?;
        for k in 0..3 {
            if consumed >= 4 * n {
                break;
            }
            let trit = (v >> (2 * k)) & 3;
            if trit == 3 {
                return Err(bad("invalid facet action"));
            }
            actions.push(trit);
            consumed += if trit == 0 { 1 } else { 2 };
        }
    }
    if consumed != 4 * n {
        return Err(bad("facet actions overrun"));
    }
    let joins = actions.iter().filter(|&&a| a == 2).count();
    let mut dests = Vec::with_capacity(joins);
    for _ in 0..joins {
        dests.push(r.int(nchars)?);
    }
    let mut perms = Vec::with_capacity(joins);
    for _ in 0..joins {
        perms.push(Perm4::from_index(r.next()?).ok_or_else(|| bad("permutation index out of range"))?);
    }
    if r.pos != r.s.len() {
        return Err(bad("trailing characters"));
    }

    let mut adj: Vec<[Option<(usize, Perm4)>; 4]> = vec![[None; 4]; n];
    let mut next_new = 1;
    let (mut ai, mut ji) = (0, 0);
    for t in 0..n {
        if t >= next_new {
            return Err(bad("disconnected triangulation"));
        }
        for f in 0..4 {
            if adj[t][f].is_some() {
                continue;
            }
            let act = *actions.get(ai).ok_or_else(|| bad("too few facet actions"))?;
            ai += 1;
            match act {
                0 => return Err(bad("boundary facet in an ideal triangulation")),
                1 => {
                    if next_new >= n {
                        return Err(bad("too many new tetrahedra"));
                    }
                    let u = next_new;
                    next_new += 1;
                    adj[t][f] = Some((u, Perm4::IDENTITY));
                    adj[u][f] = Some((t, Perm4::IDENTITY));
                }
                _ => {
                    let (u, p) = (dests[ji], perms[ji]);
                    ji += 1;
                    if u >= next_new {
                        return Err(bad("join to an unseen tetrahedron"));
                    }
                    let g = p.apply(f);
                    if adj[u][g].is_some() || (u == t && g == f) {
                        return Err(bad("non-involutive gluing"));
                    }
                    adj[t][f] = Some((u, p));
                    adj[u][g] = Some((t, p.inverse()));
                }
            }
        }
    }
    if ai != actions.len() {
        return Err(bad("unused facet actions"));
    }
    let adj = adj
        .into_iter()
        .map(|row| {
            let mut out = [(0, Perm4::IDENTITY); 4];
            for (o, x) in out.iter_mut().zip(row) {
                *o = x.expect("all facets glued");
            }
            out
        })
        .collect();
    Triangulation::from_adjacency(adj)
}

/// Signature of `t` relabelled so that tetrahedron `start` becomes 0 with its
/// vertex `i` becoming `vmap(i)`.
fn isosig_from(t: &Triangulation, start: usize, vmap: Perm4) -> Vec<u8> {
    let n = t.size();
    let mut image = vec![usize::MAX; n];
    let mut pre = vec![usize::MAX; n];
    let mut vertex_map = vec![Perm4::IDENTITY; n];
    image[start] = 0;
    pre[0] = start;
    vertex_map[start] = vmap;
    let mut next = 1;
    let mut actions: Vec<usize> = Vec::with_capacity(2 * n);
    let mut join_dest = Vec::new();
    let mut join_perm = Vec::new();
    for img in 0..n {
        let src = pre[img];
        for facet_img in 0..4 {
            let facet = vertex_map[src].pre_image(facet_img);
            let (dest, g) = t.adjacent(src, facet);
            if image[dest] != usize::MAX {
                let adj_facet = g.apply(facet);
                if image[dest] < image[src]
                    || (dest == src && vertex_map[src].apply(adj_facet) < vertex_map[src].apply(facet))
                {
                    continue;
                }
            }
            if image[dest] == usize::MAX {
                image[dest] = next;
                pre[next] = dest;
                next += 1;
                vertex_map[dest] = vertex_map[src].compose(g.inverse());
                actions.push(1);
                continue;
            }
            actions.push(2);
            join_dest.push(image[dest]);
            join_perm.push(vertex_map[dest].compose(g).compose(vertex_map[src].inverse()));
        }
    }
    let nchars = chars_needed(n);
    let mut out = Vec::new();
    if n >= 63 {
        out.push(schar(63));
        out.push(schar(nchars));
    }
    push_int(&mut out, n, nchars);
    for chunk in actions.chunks(3) {
        let v = chunk.iter().enumerate().fold(0, |acc, (k, &a)| acc | (a << (2 * k)));
        out.push(schar(v));
    }
    for &d in &join_dest {
        push_int(&mut out, d, nchars);
    }
    for p in &join_perm {
        out.push(schar(p.index()));
    }
    out
}

/// The canonical signature of `t`.
pub fn encode_isosig(t: &Triangulation) -> String {
    let mut best: Option<Vec<u8>> = None;
    for start in 0..t.size() {
        for p in super::perm::S4 {
            let s = isosig_from(t, start, p);
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    }
    String::from_utf8(best.unwrap_or_default()).expect("ascii signature")
}
