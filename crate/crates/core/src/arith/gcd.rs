//! Multivariate polynomial gcd over the rationals.
//!
//! The integer-evaluation heuristic handles almost every input. When it gives up we fall
//! back to recursive content / primitive-part reduction: a polynomial is viewed as
//! univariate in a main variable, contents are computed by recursion, and primitive parts
//! are combined with the subresultant remainder sequence.

use super::heugcd::{heu_gcd, ZPoly};
use super::monomial::{Monomial, Var};
use super::poly::Poly;
use super::Rational;
use num_traits::One;

/// Greatest common divisor, normalized to leading coefficient 1. `gcd(0, 0) = 0`.
pub fn poly_gcd(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return Poly::one();
    }
    if p.is_monomial() {
        return monomial_gcd(&p.terms()[0].0, q);
    }
    if q.is_monomial() {
        return monomial_gcd(&q.terms()[0].0, p);
    }
    if p == q {
        return p.monic();
    }
    let (_, zp) = ZPoly::from_poly(p);
    let (_, zq) = ZPoly::from_poly(q);
    if let Some((h, _, _)) = heu_gcd(&zp, &zq) {
        return h.to_poly().monic();
    }
    prs_gcd(p, q)
}

fn prs_gcd(p: &Poly, q: &Poly) -> Poly {

    let vp = p.vars();
    let vq = q.vars();
    if let Some(&v) = vp.iter().find(|v| !vq.contains(v)) {
        return gcd_with_coeffs(p, v, q);
    }
    if let Some(&v) = vq.iter().find(|v| !vp.contains(v)) {
        return gcd_with_coeffs(q, v, p);
    }

    // Same variable set: recurse on the variable of smallest combined degree.
    let main = *vp
        .iter()
        .min_by_key(|&&v| p.degree_in(v).max(q.degree_in(v)))
        .unwrap();
    let pc = p.coeffs_in(main);
    let qc = q.coeffs_in(main);
    let cont_p = content(&pc);
    let cont_q = content(&qc);
    let pp: Vec<Poly> = pc.iter().map(|c| c.div_exact(&cont_p).unwrap()).collect();
    let qp: Vec<Poly> = qc.iter().map(|c| c.div_exact(&cont_q).unwrap()).collect();
    let g_cont = poly_gcd(&cont_p, &cont_q);
    let g = if pp.len() >= qp.len() {
        subresultant_gcd(pp, qp)
    } else {
        subresultant_gcd(qp, pp)
    };
    let g_cont_part = content(&g);
    let g: Vec<Poly> = g.iter().map(|c| c.div_exact(&g_cont_part).unwrap()).collect();
    (&g_cont * &Poly::from_coeffs_in(main, &g)).monic()
}

/// `(g, p / g, q / g)` with `g = poly_gcd(p, q)`; both operands must be nonzero.
pub(crate) fn poly_gcd_cofactors(p: &Poly, q: &Poly) -> (Poly, Poly, Poly) {
    let trivial = p.is_constant() || q.is_constant() || p.is_monomial() || q.is_monomial();
    if !trivial && p != q {
        let (cp, zp) = ZPoly::from_poly(p);
        let (cq, zq) = ZPoly::from_poly(q);
        if let Some((h, cf, cg)) = heu_gcd(&zp, &zq) {
            let h = h.to_poly();
            let lc = h.leading_coeff();
            return (
                h.monic(),
                cf.to_poly().scale(&(&cp * &lc)),
                cg.to_poly().scale(&(&cq * &lc)),
            );
        }
    }
    let g = poly_gcd(p, q);
    if g.is_one() {
        return (g, p.clone(), q.clone());
    }
    let pc = p.div_exact(&g).expect("gcd divides");
    let qc = q.div_exact(&g).expect("gcd divides");
    (g, pc, qc)
}

pub fn poly_lcm(p: &Poly, q: &Poly) -> Poly {
    if p.is_zero() || q.is_zero() {
        return Poly::zero();
    }
    let g = poly_gcd(p, q);
    (p * &q.div_exact(&g).expect("gcd divides")).monic()
}

/// gcd of `p` with `q` where `v` occurs in `p` but not in `q`.
fn gcd_with_coeffs(p: &Poly, v: Var, q: &Poly) -> Poly {
    let mut g = q.monic();
    for c in p.coeffs_in(v).iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = poly_gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn monomial_gcd(m: &Monomial, p: &Poly) -> Poly {
    let mut g = m.clone();
    for (t, _) in p.terms() {
        g = g.gcd(t);
        if g.is_one() {
            break;
        }
    }
    Poly::term(g, Rational::one())
}

/// Monic gcd of a list of coefficient polynomials.
fn content(coeffs: &[Poly]) -> Poly {
    let mut nonzero: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    nonzero.sort_by_key(|c| (c.len(), c.total_degree()));
    let mut g = Poly::zero();
    for c in nonzero {
        g = poly_gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        Poly::one()
    } else {
        g
    }
}

type Upoly = Vec<Poly>;

fn deg(a: &Upoly) -> usize {
    a.len() - 1
}

fn trim(mut a: Upoly) -> Upoly {
    while a.len() > 1 && a.last().unwrap().is_zero() {
        a.pop();
    }
    if a.is_empty() {
        a.push(Poly::zero());
    }
    a
}

fn is_zero(a: &Upoly) -> bool {
    a.len() == 1 && a[0].is_zero()
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &Upoly, b: &Upoly) -> Upoly {
    let db = deg(b);
    let lcb = b.last().unwrap().clone();
    let mut r = a.clone();
    let mut e = deg(a) as i64 - db as i64 + 1;
    while !is_zero(&r) && deg(&r) >= db {
        let shift = deg(&r) - db;
        let lr = r.last().unwrap().clone();
        let mut next: Upoly = r.iter().map(|c| c * &lcb).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(&lr * bc);
        }
        next.pop();
        r = trim(next);
        e -= 1;
    }
    if e > 0 {
        let f = lcb.pow(e as u32);
        r = r.iter().map(|c| c * &f).collect();
    }
    r
}

fn subresultant_gcd(mut a: Upoly, mut b: Upoly) -> Upoly {
    if is_zero(&b) {
        return a;
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        let delta = deg(&a) - deg(&b);
        let r = prem(&a, &b);
        if is_zero(&r) {
            return b;
        }
        if deg(&r) == 0 {
            return vec![Poly::one()];
        }
        let divisor = &g * &h.pow(delta as u32);
        a = b;
        b = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        g = a.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta as u32)
                .div_exact(&h.pow(delta as u32 - 1))
                .expect("subresultant division is exact"),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Poly {
        Poly::var(Var(i))
    }

    #[test]
    fn univariate() {
        let x = v(0);
        let p = &(&x * &x) - &Poly::one();
        let q = &x - &Poly::one();
        assert_eq!(poly_gcd(&p, &q), q);
        assert_eq!(poly_gcd(&Poly::zero(), &Poly::zero()), Poly::zero());
        assert_eq!(poly_gcd(&p, &Poly::zero()), p);
    }

    #[test]
    fn multivariate_common_factor() {
        let (a, b, c) = (v(0), v(1), v(2));
        let ac = &a - &c;
        let bc = &b - &c;
        let p = &(&ac * &ac) * &bc;
        let q = &(&ac * &bc) * &bc;
        assert_eq!(poly_gcd(&p, &q), (&ac * &bc).monic());
    }

    #[test]
    fn coprime() {
        let (x, y) = (v(0), v(1));
        let p = &(&x * &y) + &Poly::one();
        let q = &x + &y;
        assert!(poly_gcd(&p, &q).is_one());
    }
}
