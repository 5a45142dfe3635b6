//! Linear algebra kernels: fraction-free determinants over polynomial rings and
//! Gauss-Jordan elimination over the rational function field.

use crate::arith::{poly_gcd, poly_lcm, Poly, RatFunc};
use crate::matrix::{Mat, MatrixError};

/// Determinant of a square polynomial matrix by Bareiss elimination.
pub(crate) fn bareiss_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    let mut prev = Poly::one();
    let mut sign = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Poly::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

pub(crate) fn gauss_jordan_inverse(a: &Mat) -> Result<Mat, MatrixError> {
    let n = a.rows();
    let mut m: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend((0..n).map(|j| {
                if i == j {
                    RatFunc::one()
                } else {
                    RatFunc::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = pick_pivot(&m, c, c).ok_or(MatrixError::Singular)?;
        m.swap(c, p);
        let inv = m[c][c].inv()?;
        for e in m[c].iter_mut() {
            *e = e.mul(&inv);
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let pivot = m[c].clone();
            for (e, p) in m[i].iter_mut().zip(&pivot) {
                *e = e.sub(&f.mul(p));
            }
        }
    }
    Mat::from_rows(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn entry_size(e: &RatFunc) -> usize {
    e.num().len() + e.den().len()
}

fn pick_pivot(m: &[Vec<RatFunc>], col: usize, from: usize) -> Option<usize> {
    (from..m.len())
        .filter(|&i| !m[i][col].is_zero())
        .min_by_key(|&i| entry_size(&m[i][col]))
}

/// Reduced row echelon form over the rational function field. Returns the pivot columns.
pub fn rref(m: &mut [Vec<RatFunc>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = pick_pivot(m, c, r) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for e in m[r].iter_mut() {
            *e = e.mul(&inv);
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..m[i].len() {
                if m[r][j].is_zero() {
                    continue;
                }
                let t = f.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `cols * x = rhs` where `cols[t]` is the t-th column. Returns `None` when the
/// system is inconsistent; free unknowns are set to zero.
pub fn solve_columns(cols: &[Vec<RatFunc>], rhs: &[RatFunc]) -> Option<Vec<RatFunc>> {
    let d = cols.len();
    let n = rhs.len();
    let mut m: Vec<Vec<RatFunc>> = (0..n)
        .map(|i| {
            let mut row: Vec<RatFunc> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, d + 1);
    if pivots.last() == Some(&d) {
        return None;
    }
    let mut x = vec![RatFunc::zero(); d];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][d].clone();
    }
    Some(x)
}

/// Kernel of a polynomial coefficient matrix over the fraction field of its coefficient
/// ring, via Gauss-Jordan elimination with sparse (Markowitz) pivot selection.
///
/// Each returned vector has a 1 at its free column and 0 at the other free columns.
pub fn nullspace(rows: Vec<Vec<Poly>>, ncols: usize) -> Vec<Vec<RatFunc>> {
    let mut polys: Vec<Vec<Poly>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|e| !e.is_zero()))
        .map(primitive_row)
        .collect();
    dedup_rows(&mut polys);
    let mut m: Vec<Vec<RatFunc>> = polys
        .into_iter()
        .map(|r| r.into_iter().map(RatFunc::from).collect())
        .collect();
    // (row, column) of each pivot; reduced rows stay in place.
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used_row = vec![false; m.len()];
    let mut used_col = vec![false; ncols];
    loop {
        let col_count: Vec<usize> = (0..ncols)
            .map(|c| (0..m.len()).filter(|&i| !used_row[i] && !m[i][c].is_zero()).count())
            .collect();
        let mut best: Option<((usize, usize, usize), usize, usize)> = None;
        for (i, row) in m.iter().enumerate() {
            if used_row[i] {
                continue;
            }
            let nnz = row.iter().filter(|e| !e.is_zero()).count();
            for c in (0..ncols).filter(|&c| !used_col[c] && !row[c].is_zero()) {
                let key = (
                    entry_size(&row[c]),
                    (nnz - 1) * (col_count[c] - 1),
                    row[c].num().total_degree() as usize + row[c].den().total_degree() as usize,
                );
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, i, c));
                }
            }
        }
        let Some((_, r, c)) = best else { break };
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for e in m[r].iter_mut() {
            if !e.is_zero() {
                *e = e.mul(&inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = std::mem::take(&mut row[c]);
            for j in 0..ncols {
                if j != c && !pivot_row[j].is_zero() {
                    row[j] = row[j].sub(&f.mul(&pivot_row[j]));
                }
            }
        }
        used_row[r] = true;
        used_col[c] = true;
        pivots.push((r, c));
    }
    let free: Vec<usize> = (0..ncols).filter(|&c| !used_col[c]).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![RatFunc::zero(); ncols];
            x[f] = RatFunc::one();
            for &(r, c) in &pivots {
                x[c] = m[r][f].neg();
            }
            x
        })
        .collect()
}

fn primitive_row(row: Vec<Poly>) -> Vec<Poly> {
    let mut g = Poly::zero();
    for e in row.iter().filter(|e| !e.is_zero()) {
        g = poly_gcd(&g, e);
        if g.is_one() {
            break;
        }
    }
    let lead = row.iter().find(|e| !e.is_zero()).map(|e| e.leading_coeff());
    let Some(lead) = lead else { return row };
    let g = if g.is_one() { Poly::one() } else { g };
    let g = g.scale(&(lead / g.leading_coeff()));
    if g.is_one() {
        return row;
    }
    row.into_iter()
        .map(|e| e.div_exact(&g).expect("content divides row"))
        .collect()
}

fn dedup_rows(m: &mut Vec<Vec<Poly>>) {
    let mut seen = std::collections::HashSet::new();
    m.retain(|r| seen.insert(r.clone()));
}

/// Clears denominators of a vector of rational functions: returns polynomials `p_i` and a
/// common denominator `l` with `v_i = p_i / l`.
pub fn common_denominator(v: &[RatFunc]) -> (Vec<Poly>, Poly) {
    let l = v.iter().fold(Poly::one(), |acc, e| poly_lcm(&acc, e.den()));
    let nums = v
        .iter()
        .map(|e| e.num() * &l.div_exact(e.den()).expect("lcm of denominators"))
        .collect();
    (nums, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Var;

    fn p(i: u32) -> Poly {
        Poly::var(Var(i))
    }

    #[test]
    fn nullspace_of_parametric_system() {
        // [a, 1, 0; 0, b, 1] has kernel spanned by (1/(ab), -1/b, 1)
        let (a, b) = (p(0), p(1));
        let rows = vec![
            vec![a.clone(), Poly::one(), Poly::zero()],
            vec![Poly::zero(), b.clone(), Poly::one()],
        ];
        let ns = nullspace(rows.clone(), 3);
        assert_eq!(ns.len(), 1);
        for row in &rows {
            let s = row
                .iter()
                .zip(&ns[0])
                .fold(RatFunc::zero(), |acc, (c, x)| acc.add(&RatFunc::from(c.clone()).mul(x)));
            assert!(s.is_zero());
        }
        assert!(ns[0].iter().any(RatFunc::is_one));
    }

    #[test]
    fn nullspace_with_skipped_columns() {
        // Column 0 is zero, rows dependent.
        let (a, b) = (p(0), p(1));
        let rows = vec![
            vec![Poly::zero(), a.clone(), b.clone(), Poly::one()],
            vec![Poly::zero(), &a * &b, &b * &b, b.clone()],
            vec![Poly::zero(), Poly::zero(), a.clone(), &a + &b],
        ];
        let ns = nullspace(rows.clone(), 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &rows {
                let s = row.iter().zip(v).fold(RatFunc::zero(), |acc, (c, x)| {
                    acc.add(&RatFunc::from(c.clone()).mul(x))
                });
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let one = RatFunc::one();
        let cols = vec![vec![one.clone(), one.clone()]];
        assert!(solve_columns(&cols, &[one.clone(), RatFunc::from_int(2)]).is_none());
        assert_eq!(
            solve_columns(&cols, &[RatFunc::from_int(3), RatFunc::from_int(3)]).unwrap(),
            vec![RatFunc::from_int(3)]
        );
    }
}
