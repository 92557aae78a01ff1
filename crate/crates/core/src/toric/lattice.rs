//! Exact integer linear algebra over i128 with overflow detection.

use crate::error::{Error, Result};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type IMat = Vec<Vec<i128>>;

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub fn gcd_all(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| g.gcd(&x))
}

pub fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    let mut s = 0i128;
    for (x, y) in a.iter().zip(b) {
        s = s.checked_add(mul(*x, *y)?).ok_or(Error::Overflow)?;
    }
    Ok(s)
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_vec(a: &IMat, v: &[i128]) -> Result<Vec<i128>> {
    a.iter().map(|r| dot(r, v)).collect()
}

/// Smith normal form U·A·V = D with U, V unimodular.
pub struct Smith {
    pub u: IMat,
    pub v: IMat,
    /// the non-zero diagonal entries d₁ | d₂ | …, all positive
    pub diag: Vec<i128>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

pub fn smith(a: &IMat) -> Result<Smith> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut diag = Vec::new();
    let row_op = |d: &mut IMat, u: &mut IMat, i: usize, j: usize, q: i128| -> Result<()> {
        // row_i -= q * row_j
        for c in 0..d[i].len() {
            d[i][c] = sub(d[i][c], mul(q, d[j][c])?)?;
        }
        for c in 0..u[i].len() {
            u[i][c] = sub(u[i][c], mul(q, u[j][c])?)?;
        }
        Ok(())
    };
    let col_op = |d: &mut IMat, v: &mut IMat, i: usize, j: usize, q: i128| -> Result<()> {
        // col_i -= q * col_j
        for r in 0..d.len() {
            d[r][i] = sub(d[r][i], mul(q, d[r][j])?)?;
        }
        for r in 0..v.len() {
            v[r][i] = sub(v[r][i], mul(q, v[r][j])?)?;
        }
        Ok(())
    };
    for t in 0..m.min(n) {
        loop {
            // pivot: smallest non-zero |entry| in the lower-right block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j] != 0 && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, v, diag);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            for r in d.iter_mut() {
                r.swap(t, pj);
            }
            for r in v.iter_mut() {
                r.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..m {
                let q = Integer::div_floor(&d[i][t], &d[t][t]);
                if q != 0 {
                    row_op(&mut d, &mut u, i, t, q)?;
                }
                if d[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = Integer::div_floor(&d[t][j], &d[t][t]);
                if q != 0 {
                    col_op(&mut d, &mut v, j, t, q)?;
                }
                if d[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let p = d[t][t];
            let mut bad = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if d[i][j] % p != 0 {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            if let Some(i) = bad {
                // row_t += row_i, then re-reduce
                row_op(&mut d, &mut u, t, i, -1)?;
                continue;
            }
            if p < 0 {
                for c in 0..n {
                    d[t][c] = -d[t][c];
                }
                for c in 0..m {
                    u[t][c] = -u[t][c];
                }
            }
            diag.push(d[t][t]);
            break;
        }
    }
    finish(u, v, diag)
}

fn finish(u: IMat, v: IMat, diag: Vec<i128>) -> Result<Smith> {
    Ok(Smith { u, v, diag })
}

pub fn rank(a: &IMat) -> Result<usize> {
    Ok(smith(a)?.rank())
}

/// Canonical integer solution of A·x = b: in Smith coordinates x = V·y the
/// kernel coordinates of y are zero. None if no integer solution exists.
pub fn solve_integer(a: &IMat, b: &[i128]) -> Result<Option<Vec<i128>>> {
    let s = smith(a)?;
    let ub = mat_vec(&s.u, b)?;
    let n = s.v.len();
    let mut y = vec![0i128; n];
    for (i, &di) in s.diag.iter().enumerate() {
        if ub[i] % di != 0 {
            return Ok(None);
        }
        y[i] = ub[i] / di;
    }
    if ub.iter().skip(s.rank()).any(|&x| x != 0) {
        return Ok(None);
    }
    Ok(Some(mat_vec(&s.v, &y)?))
}

/// Basis of the integer kernel {x : A·x = 0} (columns of V past the rank).
pub fn integer_kernel(a: &IMat) -> Result<Vec<Vec<i128>>> {
    let s = smith(a)?;
    let n = s.v.len();
    Ok((s.rank()..n).map(|j| s.v.iter().map(|r| r[j]).collect()).collect())
}

/// True iff the rows of `rows` extend to a Z-basis of Z^m.
pub fn completes_to_basis(rows: &IMat) -> Result<bool> {
    let s = smith(rows)?;
    Ok(s.rank() == rows.len() && s.diag.iter().all(|&x| x == 1))
}

/// Extended gcd: (g, coefficients) with Σ cᵢvᵢ = g ≥ 0.
pub fn ext_gcd_vec(v: &[i128]) -> Result<(i128, Vec<i128>)> {
    let row = vec![v.to_vec()];
    let s = smith(&row)?;
    if s.rank() == 0 {
        return Ok((0, vec![0; v.len()]));
    }
    // U·v·V = [g, 0, …] ⇒ v·(V e₁) = g·U⁻¹ = ±g
    let sign = s.u[0][0];
    let g = s.diag[0];
    let x: Vec<i128> = s.v.iter().map(|r| r[0] * sign).collect();
    debug_assert_eq!(dot(v, &x)?, g);
    Ok((g, x))
}

/// Exact inverse over Q.
pub fn rational_inverse(a: &IMat) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(pivot.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Exact inverse of a unimodular integer matrix.
pub fn unimodular_inverse(a: &IMat) -> Result<IMat> {
    let inv = rational_inverse(a).ok_or(Error::DegenerateEdgeBasis)?;
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    if !x.is_integer() {
                        return Err(Error::DegenerateEdgeBasis);
                    }
                    x.to_integer().to_i128().ok_or(Error::Overflow)
                })
                .collect()
        })
        .collect()
}

/// Primitive generator of the 1-dimensional integer kernel of a rank-(m−1)
/// matrix with m columns; None when the kernel is not 1-dimensional.
pub fn primitive_kernel_line(rows: &IMat) -> Result<Option<Vec<i128>>> {
    let k = integer_kernel(rows)?;
    if k.len() != 1 {
        return Ok(None);
    }
    let mut v = k.into_iter().next().unwrap();
    let g = gcd_all(&v);
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
    Ok(Some(v))
}

pub fn is_primitive(v: &[i128]) -> bool {
    gcd_all(v) == 1
}

