use std::cmp::Ordering;
use std::fmt;

/// `w^w · z^z`, where `w` plays the role of `z̄`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub w: u32,
    pub z: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { w: 0, z: 0 };
    pub const Z: Monomial = Monomial { w: 0, z: 1 };
    pub const W: Monomial = Monomial { w: 1, z: 0 };

    pub const fn new(w: u32, z: u32) -> Self {
        Monomial { w, z }
    }

    pub fn degree(&self) -> u32 {
        self.w + self.z
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.w + other.w, self.z + other.z)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.w <= other.w && self.z <= other.z
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other).then(|| Monomial::new(other.w - self.w, other.z - self.z))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.w.max(other.w), self.z.max(other.z))
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (self.w == 0 || other.w == 0) && (self.z == 0 || other.z == 0)
    }

    pub fn swap(&self) -> Monomial {
        Monomial::new(self.z, self.w)
    }

    pub fn is_pure_z(&self) -> bool {
        self.w == 0 && self.z > 0
    }

    pub fn is_pure_w(&self) -> bool {
        self.z == 0 && self.w > 0
    }

    /// All monomials of exactly degree `d`, largest first: `z^d, z^{d-1}w, ..., w^d`.
    pub fn of_degree(d: u32) -> impl Iterator<Item = Monomial> {
        (0..=d).map(move |w| Monomial::new(w, d - w))
    }
}

/// Degree-lexicographic comparison: total degree first, then the power of `z`.
pub fn monomial_compare(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then(a.z.cmp(&b.z))
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        monomial_compare(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Row and column labels of the moment matrix `M(k)`:
/// `1, Z, Z̄, Z², Z̄Z, Z̄², ...`, i.e. ascending degree and, within a degree,
/// descending power of `z`.
pub fn labels_up_to(k: u32) -> Vec<Monomial> {
    (0..=k).flat_map(Monomial::of_degree).collect()
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        for (name, e) in [("z", self.z), ("w", self.w)] {
            match e {
                0 => {}
                1 => write!(f, "{name}")?,
                _ => write!(f, "{name}^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
