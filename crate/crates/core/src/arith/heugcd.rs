//! Heuristic gcd over `Z[x1..xn]`: evaluate one variable at a large integer, recurse,
//! and rebuild candidates by balanced base-`xi` expansion. Every candidate is confirmed by
//! exact division, so a returned gcd is always correct; `None` means the heuristic gave up.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Var};
use super::poly::Poly;
use super::Rational;

const MAX_TRIES: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZPoly {
    /// Descending graded-lex order, no zero coefficients.
    terms: Vec<(Monomial, BigInt)>,
}

impl ZPoly {
    fn from_map(map: BTreeMap<Monomial, BigInt>) -> ZPoly {
        ZPoly {
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Splits `p` as `content * primitive` with an integer primitive part.
    pub(crate) fn from_poly(p: &Poly) -> (Rational, ZPoly) {
        let content = p.rational_content();
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let q = c / &content;
                debug_assert!(q.is_integer());
                (m.clone(), q.to_integer())
            })
            .collect();
        (content, ZPoly { terms })
    }

    pub(crate) fn to_poly(&self) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()))),
        )
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn constant(c: BigInt) -> ZPoly {
        if c.is_zero() {
            ZPoly { terms: Vec::new() }
        } else {
            ZPoly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    fn constant_value(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    fn max_norm(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn div_ground(&self, c: &BigInt) -> ZPoly {
        ZPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k / c)).collect(),
        }
    }

    fn mul_ground(&self, c: &BigInt) -> ZPoly {
        ZPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    fn primitive(&self) -> ZPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            self.clone()
        } else {
            self.div_ground(&c)
        }
    }

    fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.vars().map(|(v, _)| v).collect::<Vec<_>>())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    fn eval(&self, v: Var, x: &BigInt) -> ZPoly {
        let deg = self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0);
        let mut pows = Vec::with_capacity(deg as usize + 1);
        pows.push(BigInt::one());
        for i in 1..=deg as usize {
            let next = &pows[i - 1] * x;
            pows.push(next);
        }
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            *acc.entry(m.with_exp(v, 0)).or_insert_with(BigInt::zero) += c * &pows[e];
        }
        ZPoly::from_map(acc)
    }

    /// Exact division in `Z[x]`; `None` if not divisible.
    fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        let (dm, dc) = d.terms.first()?;
        let mut rem: BTreeMap<Monomial, BigInt> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((lm, lc)) = rem.pop_last() {
            let qm = lm.div(dm)?;
            let (qc, r) = lc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            for (m, c) in d.terms.iter().skip(1) {
                let key = m.mul(&qm);
                let delta = c * &qc;
                let e = rem.entry(key).or_insert_with(BigInt::zero);
                *e -= delta;
                if e.is_zero() {
                    let key = m.mul(&qm);
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        Some(ZPoly { terms: quot })
    }

    fn lc_abs(&self) -> BigInt {
        self.terms
            .first()
            .map(|(_, c)| c.abs())
            .unwrap_or_else(BigInt::one)
    }
}

/// Balanced base-`x` expansion of each coefficient of `h` into powers of `v`.
fn interpolate(h: &ZPoly, v: Var, x: &BigInt) -> ZPoly {
    let half = x / 2;
    let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    for (m, c) in &h.terms {
        let mut c = c.clone();
        let mut e = 0u32;
        while !c.is_zero() {
            let mut r = c.mod_floor(x);
            if r > half {
                r -= x;
            }
            if !r.is_zero() {
                *out.entry(m.with_exp(v, e)).or_insert_with(BigInt::zero) += &r;
            }
            c = (c - r) / x;
            e += 1;
        }
    }
    let z = ZPoly::from_map(out);
    match z.terms.first() {
        Some((_, c)) if c.is_negative() => z.mul_ground(&BigInt::from(-1)),
        _ => z,
    }
}

/// Returns `(gcd, f / gcd, g / gcd)` for nonzero integer polynomials.
pub(crate) fn heu_gcd(f: &ZPoly, g: &ZPoly) -> Option<(ZPoly, ZPoly, ZPoly)> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    if let (Some(a), Some(b)) = (f.constant_value(), g.constant_value()) {
        let h = a.gcd(&b);
        return Some((
            ZPoly::constant(h.clone()),
            ZPoly::constant(a / &h),
            ZPoly::constant(b / &h),
        ));
    }
    let cf = f.content();
    let cg = g.content();
    let common = cf.gcd(&cg);
    let f = f.div_ground(&common);
    let g = g.div_ground(&common);
    if f.constant_value().is_some() || g.constant_value().is_some() {
        let h = ZPoly::constant(common.clone());
        return Some((h, f, g));
    }

    let mut vars = f.vars();
    vars.extend(g.vars());
    vars.sort();
    vars.dedup();
    let v = *vars.last().unwrap();

    let f_norm = f.max_norm();
    let g_norm = g.max_norm();
    let b: BigInt = BigInt::from(2) * f_norm.clone().min(g_norm.clone()) + 29;
    let mut x = b
        .clone()
        .min(BigInt::from(99) * b.sqrt())
        .max(BigInt::from(2) * (&f_norm / f.lc_abs()).min(&g_norm / g.lc_abs()) + 4);

    for _ in 0..MAX_TRIES {
        let ff = f.eval(v, &x);
        let gg = g.eval(v, &x);
        if !ff.is_zero() && !gg.is_zero() {
            if let Some((h, cff, cfg)) = heu_gcd(&ff, &gg) {
                let h = interpolate(&h, v, &x).primitive();
                if !h.is_zero() {
                    if let Some(cff_) = f.div_exact(&h) {
                        if let Some(cfg_) = g.div_exact(&h) {
                            return Some((h.mul_ground(&common), cff_, cfg_));
                        }
                    }
                }
                let cff = interpolate(&cff, v, &x);
                if !cff.is_zero() {
                    if let Some(h) = f.div_exact(&cff) {
                        if let Some(cfg_) = g.div_exact(&h) {
                            return Some((h.mul_ground(&common), cff, cfg_));
                        }
                    }
                }
                let cfg = interpolate(&cfg, v, &x);
                if !cfg.is_zero() {
                    if let Some(h) = g.div_exact(&cfg) {
                        if let Some(cff_) = f.div_exact(&h) {
                            return Some((h.mul_ground(&common), cff_, cfg));
                        }
                    }
                }
            }
        }
        // x <- 73794 * x * x^(1/4) / 27011
        x = BigInt::from(73794) * &x * x.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u32) -> Poly {
        Poly::var(Var(i))
    }

    #[test]
    fn finds_common_factor() {
        let (a, b, c) = (p(0), p(1), p(2));
        let f1 = &(&a * &b) - &c;
        let f2 = &(&a + &Poly::from_int(3)) * &c;
        let f3 = &b - &Poly::from_int(7);
        let (_, zf) = ZPoly::from_poly(&(&f1 * &f2));
        let (_, zg) = ZPoly::from_poly(&(&f1 * &f3));
        let (h, cf, cg) = heu_gcd(&zf, &zg).unwrap();
        assert_eq!(h.to_poly().monic(), f1.monic());
        assert_eq!((&h.to_poly() * &cf.to_poly()), zf.to_poly());
        assert_eq!((&h.to_poly() * &cg.to_poly()), zg.to_poly());
    }
}
