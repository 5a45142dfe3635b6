use std::cmp::Ordering;
use std::fmt;

/// Index of a variable in a [`crate::field::FieldContext`] variable table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Exponent vector indexed by variable id.
///
/// Trailing zero exponents are never stored, so a monomial is independent of how many
/// variables the surrounding context declares. Ordering is graded lexicographic: total
/// degree first, then the earliest declared variable with the larger exponent wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut exps = vec![0; v.index() + 1];
        exps[v.index()] = e;
        Monomial { exps }
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.exps.get(v.index()).copied().unwrap_or(0)
    }

    /// Variables with a nonzero exponent, in id order.
    pub fn vars(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Var(i as u32), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (&self.exps, &other.exps)
        } else {
            (&other.exps, &self.exps)
        };
        let mut exps = long.clone();
        for (e, s) in exps.iter_mut().zip(short.iter()) {
            *e += s;
        }
        Monomial { exps }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.exps.len() > self.exps.len() {
            return None;
        }
        let mut exps = self.exps.clone();
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            if *e < *o {
                return None;
            }
            *e -= o;
        }
        Some(Monomial::from_exponents(exps))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() <= other.exps.len()
            && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.min(b))
            .collect();
        Monomial::from_exponents(exps)
    }

    /// The same monomial with the exponent of `v` replaced.
    pub fn with_exp(&self, v: Var, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        if exps.len() <= v.index() {
            if e == 0 {
                return self.clone();
            }
            exps.resize(v.index() + 1, 0);
        }
        exps[v.index()] = e;
        Monomial::from_exponents(exps)
    }

    /// Splits into the part over variables selected by `keep` and the rest.
    pub fn split(&self, keep: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let mut kept = vec![0; self.exps.len()];
        let mut rest = vec![0; self.exps.len()];
        for (i, &e) in self.exps.iter().enumerate() {
            if keep(Var(i as u32)) {
                kept[i] = e;
            } else {
                rest[i] = e;
            }
        }
        (Monomial::from_exponents(kept), Monomial::from_exponents(rest))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // Trimmed vectors compare lexicographically as if padded with zeros.
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x = Monomial::var(Var(0));
        let y = Monomial::var(Var(1));
        let x2 = Monomial::var_pow(Var(0), 2);
        let xy = x.mul(&y);
        let y2 = Monomial::var_pow(Var(1), 2);
        assert!(x > y);
        assert!(y2 > x);
        assert!(x2 > xy && xy > y2);
        assert!(Monomial::one() < y);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let m = Monomial::from_exponents(vec![1, 0, 0]);
        assert_eq!(m, Monomial::var(Var(0)));
        let xy = Monomial::from_exponents(vec![1, 1]);
        assert_eq!(xy.div(&Monomial::var(Var(1))).unwrap(), Monomial::var(Var(0)));
        assert!(Monomial::var(Var(0)).div(&Monomial::var(Var(1))).is_none());
    }
}
