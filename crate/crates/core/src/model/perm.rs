//! Permutations of `{1..n}` acting on cycles, systems, trades, and paths.
//!
//! Composition convention: `p.then(q)` applies `p` first, then `q`, and the
//! group action satisfies `x.relabel(p).relabel(q) == x.relabel(p.then(q))`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    /// `images[i]` is the image of vertex `i + 1`.
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: u8) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Build from the image array (`images[i]` = image of `i + 1`), checking
    /// bijectivity.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        if n > u8::MAX as usize {
            return Err(Error::InvalidInput {
                what: "permutation degree exceeds 255".into(),
            });
        }
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x as usize > n || seen[x as usize] {
                return Err(Error::InvalidInput {
                    what: format!("images {images:?} are not a bijection on 1..={n}"),
                });
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn transposition(n: u8, a: u8, b: u8) -> Result<Self> {
        let mut p = Self::identity(n);
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::OutOfRange { label: a.max(b), n });
        }
        p.images[a as usize - 1] = b;
        p.images[b as usize - 1] = a;
        Ok(p)
    }

    /// Build from disjoint cycles in the usual `(a b c)` notation, meaning
    /// `a -> b -> c -> a`.
    pub fn from_cycles(n: u8, cycles: &[&[u8]]) -> Result<Self> {
        let mut p = Self::identity(n);
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                let y = cyc[(i + 1) % cyc.len()];
                if x == 0 || x > n {
                    return Err(Error::OutOfRange { label: x, n });
                }
                p.images[x as usize - 1] = y;
            }
        }
        // disjointness and bijectivity check
        Self::from_images(p.images)
    }

    pub fn degree(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn apply(&self, label: u8) -> u8 {
        self.images[label as usize - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.images.len(), other.images.len());
        Permutation {
            images: self.images.iter().map(|&x| other.apply(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize - 1] = (i + 1) as u8;
        }
        Permutation { images }
    }

    /// Disjoint cycle decomposition; fixed points are omitted.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let n = self.images.len() as u8;
        let mut seen = vec![false; n as usize + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start as usize] || self.apply(start) == start {
                seen[start as usize] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start as usize] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x as usize] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (i, x) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Types that a permutation of vertex labels acts on.
pub trait Relabel {
    fn relabel(&self, p: &Permutation) -> Self;
}

impl Relabel for super::cycle::FourCycle {
    fn relabel(&self, p: &Permutation) -> Self {
        let v = self.vertices();
        Self::canonical_from([p.apply(v[0]), p.apply(v[1]), p.apply(v[2]), p.apply(v[3])])
    }
}

/// Visit every permutation of `{1..n}` by Heap's algorithm. The closure
/// receives the image array (`images[i]` = image of `i + 1`).
pub fn for_each_permutation<F: FnMut(&[u8])>(n: u8, mut f: F) {
    let mut a: Vec<u8> = (1..=n).collect();
    let n = n as usize;
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
