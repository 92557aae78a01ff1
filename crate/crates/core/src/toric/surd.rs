//! Exact arithmetic in the Q-span of {1, √p₁, √p₂, …} for distinct
//! square-free p. Only Q-linear operations are needed; signs are decided by
//! interval refinement, which terminates because the square roots are
//! linearly independent over Q.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Σ c_p √p with rational c_p; the key 1 carries the rational part.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Surd {
    terms: BTreeMap<u64, BigRational>,
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_squarefree(p: u64) -> bool {
    if p == 0 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn rational(q: BigRational) -> Self {
        let mut s = Surd::zero();
        s.add_term(1, q);
        s
    }

    pub fn integer(k: i128) -> Self {
        Surd::rational(BigRational::from_integer(BigInt::from(k)))
    }

    /// c·√p for square-free p.
    pub fn sqrt_term(c: BigRational, p: u64) -> Self {
        assert!(is_squarefree(p), "radicand must be square-free");
        let mut s = Surd::zero();
        s.add_term(p, c);
        s
    }

    fn add_term(&mut self, p: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&p| p == 1)
    }

    pub fn rational_part(&self) -> BigRational {
        self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn add(&self, o: &Surd) -> Surd {
        let mut s = self.clone();
        for (p, c) in &o.terms {
            s.add_term(*p, c.clone());
        }
        s
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, q: &BigRational) -> Surd {
        let mut s = Surd::zero();
        for (p, c) in &self.terms {
            s.add_term(*p, c * q);
        }
        s
    }

    pub fn scale_int(&self, k: i128) -> Surd {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Rational enclosure [lo, hi] of the value using √p to within 2^-bits.
    fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        let den = BigInt::one() << bits;
        for (p, c) in &self.terms {
            if *p == 1 {
                lo += c;
                hi += c;
                continue;
            }
            let r = (BigInt::from(*p) << (2 * bits)).sqrt();
            let l = BigRational::new(r.clone(), den.clone());
            let u = BigRational::new(r + 1, den.clone());
            if c.is_positive() {
                lo += c * &l;
                hi += c * &u;
            } else {
                lo += c * &u;
                hi += c * &l;
            }
        }
        (lo, hi)
    }

    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    pub fn cmp_value(&self, o: &Surd) -> Ordering {
        self.sub(o).signum()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| c.to_f64().unwrap_or(f64::NAN) * (*p as f64).sqrt())
            .sum()
    }

    /// ⌊x / y⌋ for y > 0, exactly.
    pub fn floor_div(x: &Surd, y: &Surd) -> Result<i128> {
        if y.signum() != Ordering::Greater {
            return Err(Error::PreconditionViolated("floor_div needs a positive divisor".into()));
        }
        let approx = (x.to_f64() / y.to_f64()).floor();
        let mut m = if approx.is_finite() { approx as i128 } else { 0 };
        // adjust until m·y ≤ x < (m+1)·y
        loop {
            if x.sub(&y.scale_int(m)).signum() == Ordering::Less {
                m -= 1;
                continue;
            }
            if x.sub(&y.scale_int(m + 1)).signum() != Ordering::Less {
                m += 1;
                continue;
            }
            return Ok(m);
        }
    }

    /// x / y when it is an integer.
    pub fn exact_quotient(x: &Surd, y: &Surd) -> Result<Option<i128>> {
        let m = Surd::floor_div(x, y)?;
        Ok(x.sub(&y.scale_int(m)).is_zero().then_some(m))
    }

    /// Coefficient vector over the given radicand basis.
    pub fn coordinates(&self, basis: &[u64]) -> Vec<BigRational> {
        basis
            .iter()
            .map(|p| self.terms.get(p).cloned().unwrap_or_else(BigRational::zero))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Surd> {
        parse_surd(text)
    }
}

/// Rank over Q of a family of surds.
pub fn q_rank(v: &[Surd]) -> usize {
    let mut basis: Vec<u64> = v.iter().flat_map(|s| s.terms.keys().copied()).collect();
    basis.sort_unstable();
    basis.dedup();
    let mut rows: Vec<Vec<BigRational>> = v.iter().map(|s| s.coordinates(&basis)).collect();
    let mut rank = 0;
    let cols = basis.len();
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot[c];
                for (x, y) in rows[r].iter_mut().zip(pivot.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// True iff x / y is rational (y ≠ 0).
pub fn ratio_is_rational(x: &Surd, y: &Surd) -> bool {
    q_rank(&[x.clone(), y.clone()]) < 2
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if *p == 1 {
                write!(f, "{}", fmt_rat(&a))?;
            } else if a.is_one() {
                write!(f, "sqrt({p})")?;
            } else {
                write!(f, "{}*sqrt({p})", fmt_rat(&a))?;
            }
        }
        Ok(())
    }
}

/// Parses a rational "p/q" (or integer or finite decimal).
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.trim_start().starts_with('-');
        let ip_val: BigInt = if ip.is_empty() || ip == "-" || ip == "+" { BigInt::zero() } else { ip.parse().map_err(|_| bad())? };
        let fp_val: BigInt = fp.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let frac = BigRational::new(fp_val, den);
        let ipr = BigRational::from_integer(ip_val);
        return Ok(if neg { ipr - frac } else { ipr + frac });
    }
    Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?))
}

/// Grammar: term (('+'|'-') term)*, term = rational | [rational '*'] 'sqrt(' int ')'.
fn parse_surd(text: &str) -> Result<Surd> {
    let bad = || Error::Parse(format!("not a surd expression: {text:?}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    let mut out = Surd::zero();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigRational::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        // a term ends at the next top-level sign
        let mut depth = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start => break,
                _ => {}
            }
            i += 1;
        }
        let term = &s[start..i];
        if term.is_empty() {
            return Err(bad());
        }
        let (coef, rad) = match term.find("sqrt(") {
            None => (parse_rational(term)?, 1u64),
            Some(pos) => {
                if !term.ends_with(')') {
                    return Err(bad());
                }
                let rad: u64 = term[pos + 5..term.len() - 1].parse().map_err(|_| bad())?;
                if !is_squarefree(rad) {
                    return Err(Error::Parse(format!("radicand {rad} is not square-free")));
                }
                let c = if pos == 0 {
                    BigRational::one()
                } else {
                    let head = &term[..pos];
                    let head = head.strip_suffix('*').ok_or_else(bad)?;
                    parse_rational(head)?
                };
                (c, rad)
            }
        };
        out.add_term(rad, sign * coef);
    }
    Ok(out)
}
