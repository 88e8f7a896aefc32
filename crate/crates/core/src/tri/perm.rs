//! Permutations of `{0, 1, 2, 3}`.

use std::fmt;

/// A permutation of the four vertices of a tetrahedron, stored as images.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Perm4([u8; 4]);

/// All 24 permutations in lexicographic order of their image strings; the
/// position in this table is the index used by isomorphism signatures.
pub const S4: [Perm4; 24] = {
    let mut out = [Perm4([0, 1, 2, 3]); 24];
    let mut k = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && b != c && a != c {
                    let d = 6 - a - b - c;
                    out[k] = Perm4([a as u8, b as u8, c as u8, d as u8]);
                    k += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    #[inline]
    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn pre_image(self, i: usize) -> usize {
        self.0.iter().position(|&x| x as usize == i).expect("permutation")
    }

    pub fn inverse(self) -> Self {
        let mut out = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u8;
        }
        Perm4(out)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4([
            self.0[other.0[0] as usize],
            self.0[other.0[1] as usize],
            self.0[other.0[2] as usize],
            self.0[other.0[3] as usize],
        ])
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(self) -> i32 {
        let mut inv = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn index(self) -> usize {
        S4.iter().position(|&p| p == self).expect("permutation")
    }

    pub fn from_index(i: usize) -> Option<Self> {
        S4.get(i).copied()
    }

    /// The transposition of `a` and `b`.
    pub fn swap(a: usize, b: usize) -> Self {
        let mut p = [0u8, 1, 2, 3];
        p.swap(a, b);
        Perm4(p)
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_lexicographic_and_complete() {
        for w in S4.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(S4[8].images(), [1, 2, 0, 3]);
        assert_eq!(S4[19].images(), [3, 0, 2, 1]);
        for (i, p) in S4.iter().enumerate() {
            assert_eq!(p.index(), i);
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
        }
    }

    #[test]
    fn composition_order() {
        let p = Perm4::new([1, 2, 3, 0]).unwrap();
        let q = Perm4::swap(0, 1);
        assert_eq!(p.compose(q).images(), [2, 1, 3, 0]);
        assert_eq!(Perm4::swap(2, 3).sign(), -1);
        assert_eq!(p.sign(), -1);
    }
}
