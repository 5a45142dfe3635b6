use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Var};
use super::Rational;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted by descending graded-lex order with no zero coefficients, so
/// structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(map: BTreeMap<Monomial, Rational>) -> Self {
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    /// Total degree counting only the variables selected by `sel`.
    pub fn degree_over(&self, sel: impl Fn(Var) -> bool) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.vars().filter(|(v, _)| sel(*v)).map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    /// Sorted list of variables occurring in the polynomial.
    pub fn vars(&self) -> Vec<Var> {
        let mut max_len = 0;
        for (m, _) in &self.terms {
            max_len = max_len.max(m.exponents().len());
        }
        let mut seen = vec![false; max_len];
        for (m, _) in &self.terms {
            for (v, _) in m.vars() {
                seen[v.index()] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| Var(i as u32))
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // Multiplying by a monomial preserves grlex order.
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, k)| (t.mul(m), k * c))
                .collect(),
        }
    }

    /// Normalizes so the leading coefficient is 1; the zero polynomial is unchanged.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            (e > 0).then(|| {
                (
                    m.with_exp(v, e - 1),
                    c * Rational::from_integer(BigInt::from(e)),
                )
            })
        });
        Poly::from_terms(terms)
    }

    /// Exact division. Returns `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (dm, dc) = d.leading_term().unwrap();
        if d.is_monomial() {
            let inv = dc.recip();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((m.div(dm)?, c * &inv));
            }
            return Some(Poly { terms });
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let dc_inv = dc.recip();
        let mut rem: BTreeMap<Monomial, Rational> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((lm, lc)) = rem.pop_last() {
            let qm = lm.div(dm)?;
            let qc = lc * &dc_inv;
            for (m, c) in d.terms.iter().skip(1) {
                let key = m.mul(&qm);
                let delta = c * &qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly { terms: quot })
    }

    /// Coefficients with respect to `v`: `self = sum_i coeffs[i] * v^i`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            buckets[e].push((m.with_exp(v, 0), c.clone()));
        }
        // Removing one variable keeps the relative grlex order of the remaining terms
        // only up to ties in degree, so re-sort.
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    /// Inverse of [`Poly::coeffs_in`].
    pub fn from_coeffs_in(v: Var, coeffs: &[Poly]) -> Poly {
        let terms = coeffs.iter().enumerate().flat_map(|(i, p)| {
            let vm = Monomial::var_pow(v, i as u32);
            p.terms
                .iter()
                .map(move |(m, c)| (m.mul(&vm), c.clone()))
                .collect::<Vec<_>>()
        });
        Poly::from_terms(terms)
    }

    /// Groups terms by their monomial over the variables selected by `sel`; each group's
    /// coefficient is a polynomial in the remaining variables.
    pub fn coefficients_over(&self, sel: impl Fn(Var) -> bool) -> BTreeMap<Monomial, Poly> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest) = m.split(&sel);
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, ts)| (k, Poly::from_terms(ts)))
            .collect()
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        l
    }

    /// Gcd of the integer numerators after clearing denominators, as a positive rational
    /// `c` such that `self / c` has coprime integer coefficients.
    pub fn rational_content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let l = self.denominator_lcm();
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&l / c.denom());
            g = num_integer::Integer::gcd(&g, &n);
        }
        Rational::new(g.abs(), l)
    }

    /// Evaluates at an assignment of all variables to rationals; unassigned variables
    /// are treated as zero.
    pub fn eval(&self, point: &dyn Fn(Var) -> Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                t *= num_traits::pow(point(v), e as usize);
            }
            acc += t;
        }
        acc
    }
}

fn merge(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        let (ma, ca) = &a.terms[i];
        let (mb, cb) = &b.terms[j];
        match ma.cmp(mb) {
            std::cmp::Ordering::Greater => {
                out.push((ma.clone(), ca.clone()));
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((mb.clone(), if negate_b { -cb } else { cb.clone() }));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { ca - cb } else { ca + cb };
                if !c.is_zero() {
                    out.push((ma.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(
        b.terms[j..]
            .iter()
            .map(|(m, c)| (m.clone(), if negate_b { -c } else { c.clone() })),
    );
    Poly { terms: out }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        merge(self, rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        merge(self, rhs, true)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.is_monomial() {
            let (m, c) = &rhs.terms[0];
            return self.mul_monomial(m, c);
        }
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            return rhs.mul_monomial(m, c);
        }
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Poly::from_map(acc)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(Var(0))
    }
    fn y() -> Poly {
        Poly::var(Var(1))
    }

    #[test]
    fn arithmetic_and_exact_division() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let expect = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(p, expect);
        assert_eq!(p.div_exact(&(&x() - &y())).unwrap(), &x() + &y());
        assert!(p.div_exact(&(&x() + &Poly::one())).is_none());
    }

    #[test]
    fn univariate_view_round_trips() {
        let p = &(&x() * &x()) * &y() + (&x() + &y().pow(3));
        let cs = p.coeffs_in(Var(0));
        assert_eq!(cs.len(), 3);
        assert_eq!(Poly::from_coeffs_in(Var(0), &cs), p);
    }

    #[test]
    fn content_and_derivative() {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let p = &x().scale(&half) + &Poly::from_int(3);
        assert_eq!(p.rational_content(), half);
        assert_eq!(x().pow(3).derivative(Var(0)), x().pow(2).scale(&Rational::from_integer(3.into())));
    }
}
