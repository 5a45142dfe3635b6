use std::fmt;

use num_traits::{One, Zero};

use super::gcd::poly_gcd_cofactors;
use super::monomial::Var;
use super::poly::Poly;
use super::{ArithError, Rational};

/// Element of the rational function field over the rationals, kept in normal form:
/// `gcd(num, den) = 1` and the leading coefficient of `den` is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        Poly::zero().into()
    }

    pub fn one() -> Self {
        Poly::one().into()
    }

    pub fn from_int(n: i64) -> Self {
        Poly::from_int(n).into()
    }

    pub fn constant(c: Rational) -> Self {
        Poly::constant(c).into()
    }

    pub fn var(v: Var) -> Self {
        Poly::var(v).into()
    }

    /// Normalized quotient `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let (_, n, d) = poly_gcd_cofactors(&num, &den);
            (n, d)
        };
        Self::with_monic_den(num, den)
    }

    fn with_monic_den(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// Re-normalizes an arbitrary representative; idempotent on values already in normal form.
    pub fn renormalize(&self) -> Self {
        Self::normalize(self.num.clone(), self.den.clone())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::normalize(&self.num + &other.num, self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc {
                num: &(&self.num * &other.den) + &other.num,
                den: other.den.clone(),
            };
        }
        if other.den.is_one() {
            return RatFunc {
                num: &self.num + &(&other.num * &self.den),
                den: self.den.clone(),
            };
        }
        let (g, d1, d2) = poly_gcd_cofactors(&self.den, &other.den);
        if g.is_one() {
            // Coprime reduced denominators give a reduced sum.
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            if num.is_zero() {
                return Self::zero();
            }
            return Self::with_monic_den(num, &self.den * &other.den);
        }
        let num = &(&self.num * &d2) + &(&other.num * &d1);
        if num.is_zero() {
            return Self::zero();
        }
        let (_, num, g) = poly_gcd_cofactors(&num, &g);
        Self::with_monic_den(num, &(&d1 * &d2) * &g)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (_, n1, d2) = poly_gcd_cofactors(&self.num, &other.den);
        let (_, n2, d1) = poly_gcd_cofactors(&other.num, &self.den);
        Self::with_monic_den(&n1 * &n2, &d1 * &d2)
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, ArithError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Substitutes each variable `v` by `image(v)`; variables mapped to `None` are kept.
    pub fn substitute(
        &self,
        image: &dyn Fn(Var) -> Option<RatFunc>,
    ) -> Result<RatFunc, ArithError> {
        let n = substitute_poly(&self.num, image);
        let d = substitute_poly(&self.den, image);
        if d.is_zero() {
            return Err(ArithError::SubstitutedDenominatorVanishes);
        }
        n.div(&d)
    }

    /// Partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> RatFunc {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalize(num, &self.den * &self.den)
    }

    /// Evaluation at a rational point; `None` if the denominator vanishes there.
    pub fn eval(&self, point: &dyn Fn(Var) -> Rational) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }
}

/// Evaluates `p` at rational-function images by clearing each variable's denominator to
/// its maximal power, so only polynomial arithmetic happens before the final quotient.
fn substitute_poly(p: &Poly, image: &dyn Fn(Var) -> Option<RatFunc>) -> RatFunc {
    if p.is_constant() {
        return p.clone().into();
    }
    let vars = p.vars();
    let mut imgs: Vec<(Var, RatFunc, u32)> = Vec::new();
    for v in vars {
        if let Some(img) = image(v) {
            imgs.push((v, img, p.degree_in(v)));
        }
    }
    if imgs.is_empty() {
        return p.clone().into();
    }
    // Power tables for numerators and denominators of each image.
    let tables: Vec<(Vec<Poly>, Vec<Poly>)> = imgs
        .iter()
        .map(|(_, img, d)| (powers(img.num(), *d), powers(img.den(), *d)))
        .collect();
    let mut total = Poly::zero();
    for (m, c) in p.terms() {
        let mut rest = m.clone();
        let mut t = Poly::one();
        for (k, (v, _, dmax)) in imgs.iter().enumerate() {
            let e = m.exp(*v);
            rest = rest.with_exp(*v, 0);
            let (np, dp) = &tables[k];
            if e > 0 {
                t = &t * &np[e as usize];
            }
            if *dmax > e {
                t = &t * &dp[(*dmax - e) as usize];
            }
        }
        total = &total + &t.mul_monomial(&rest, c);
    }
    let mut den = Poly::one();
    for (k, (_, _, dmax)) in imgs.iter().enumerate() {
        den = &den * &tables[k].1[*dmax as usize];
    }
    RatFunc::normalize(total, den)
}

fn powers(p: &Poly, n: u32) -> Vec<Poly> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Poly::one());
    for i in 1..=n as usize {
        let next = &out[i - 1] * p;
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> RatFunc {
        RatFunc::var(Var(i))
    }

    #[test]
    fn like_denominators_cancel() {
        let x = v(0);
        let xp1 = x.add(&RatFunc::one());
        let f = x.div(&xp1).unwrap();
        let g = RatFunc::one().div(&xp1).unwrap();
        assert!(f.add(&g).is_one());
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(RatFunc::zero().inv(), Err(ArithError::DivisionByZero));
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn substitution_with_vanishing_denominator() {
        // 1/(x - y) with x -> y
        let f = v(0).sub(&v(1)).inv().unwrap();
        let r = f.substitute(&|w| (w == Var(0)).then(|| v(1)));
        assert_eq!(r, Err(ArithError::SubstitutedDenominatorVanishes));
    }

    #[test]
    fn quotient_rule() {
        // d/dx (x-1)/x = 1/x^2
        let x = v(0);
        let f = x.sub(&RatFunc::one()).div(&x).unwrap();
        assert_eq!(f.partial(Var(0)), x.pow(2).inv().unwrap());
    }
}
