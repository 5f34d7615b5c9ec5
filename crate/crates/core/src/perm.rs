//! Permutations of `0..n`, composed left to right: `(g*h)(x) = h(g(x))`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::is_bijection;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        if !is_bijection(&images) {
            return Err(Error::NotBijection(format!("{images:?}")));
        }
        Ok(Perm(images))
    }

    /// Product of the given cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (i, &a) in cyc.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(Error::NotBijection(format!("bad cycle {cyc:?}")));
                }
                touched[a] = true;
                images[a] = cyc[(i + 1) % cyc.len()];
            }
        }
        Ok(Perm(images))
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Perm::identity(n);
        p.0.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn into_images(self) -> Vec<usize> {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `self^-1 * g * self`, i.e. `g` transported along `self`.
    pub fn conjugate(&self, g: &Perm) -> Perm {
        self.inverse().then(g).then(self)
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().position(|(i, &x)| i != x)
    }

    pub fn fixes_set(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        set.iter().all(|&x| s.binary_search(&self.0[x]).is_ok())
    }

    /// Action on the positions of `set` (which must be invariant).
    pub fn restrict(&self, set: &[usize]) -> Result<Perm> {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &x) in set.iter().enumerate() {
            pos[x] = i;
        }
        let imgs: Vec<usize> = set.iter().map(|&x| pos[self.0[x]]).collect();
        if imgs.iter().any(|&i| i == usize::MAX) {
            return Err(Error::NotInvariant);
        }
        Perm::from_images(imgs)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] || self.0[s] == s {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.0[s];
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x];
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
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
