use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{IntPoly, PolyError};

/// Dense polynomial in two named variables with integer coefficients.
///
/// Stored as a list of rows: `rows[i]` is the coefficient of `outer^i`, itself a
/// polynomial in `inner`. Top rows are never zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BiPoly {
    outer: String,
    inner: String,
    rows: Vec<IntPoly>,
}

impl BiPoly {
    pub fn new(outer: impl Into<String>, inner: impl Into<String>, rows: Vec<IntPoly>) -> Self {
        let inner = inner.into();
        let mut rows: Vec<IntPoly> = rows
            .into_iter()
            .map(|r| r.with_var(inner.clone()))
            .collect();
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly {
            outer: outer.into(),
            inner,
            rows,
        }
    }

    pub fn zero(outer: impl Into<String>, inner: impl Into<String>) -> Self {
        Self::new(outer, inner, Vec::new())
    }

    pub fn one(outer: impl Into<String>, inner: impl Into<String>) -> Self {
        let inner = inner.into();
        Self::new(outer, inner.clone(), vec![IntPoly::one(inner)])
    }

    /// Embeds a polynomial in the inner variable (constant in `outer`).
    pub fn from_inner(outer: impl Into<String>, p: &IntPoly) -> Self {
        Self::new(outer, p.var().to_string(), vec![p.clone()])
    }

    /// Embeds a polynomial in the outer variable (constant in `inner`).
    pub fn from_outer(p: &IntPoly, inner: impl Into<String>) -> Self {
        let inner = inner.into();
        let rows = p
            .coeffs()
            .iter()
            .map(|c| IntPoly::constant(inner.clone(), c.clone()))
            .collect();
        Self::new(p.var().to_string(), inner, rows)
    }

    pub fn outer_var(&self) -> &str {
        &self.outer
    }

    pub fn inner_var(&self) -> &str {
        &self.inner
    }

    pub fn rows(&self) -> &[IntPoly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn coeff(&self, outer_pow: usize, inner_pow: usize) -> BigInt {
        self.rows
            .get(outer_pow)
            .map(|r| r.coeff(inner_pow))
            .unwrap_or_default()
    }

    pub fn deg_outer(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_inner(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    /// Degree in the named variable.
    pub fn degree_in(&self, var: &str) -> Option<usize> {
        if var == self.outer {
            self.deg_outer()
        } else if var == self.inner {
            self.deg_inner()
        } else {
            self.rows.iter().any(|r| !r.is_zero()).then_some(0)
        }
    }

    /// Swaps the roles of the two variables.
    pub fn transpose(&self) -> Self {
        let mut cols: Vec<Vec<BigInt>> = vec![Vec::new(); self.deg_inner().map_or(0, |d| d + 1)];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let col = &mut cols[j];
                if col.len() <= i {
                    col.resize(i + 1, BigInt::zero());
                }
                col[i] = c.clone();
            }
        }
        let rows = cols
            .into_iter()
            .map(|c| IntPoly::new(self.outer.clone(), c))
            .collect();
        Self::new(self.inner.clone(), self.outer.clone(), rows)
    }

    /// Coefficient list with respect to `var`; entries are polynomials in the other variable.
    pub fn coefficients_in(&self, var: &str) -> Result<Vec<IntPoly>, PolyError> {
        if var == self.outer {
            Ok(self.rows.clone())
        } else if var == self.inner {
            Ok(self.transpose().rows)
        } else {
            Err(PolyError::UnknownVariable(var.to_string()))
        }
    }

    /// Leading coefficient with respect to `var`, as a polynomial in the other variable.
    pub fn leading_coeff_in(&self, var: &str) -> Result<IntPoly, PolyError> {
        let c = self.coefficients_in(var)?;
        Ok(c.last()
            .cloned()
            .unwrap_or_else(|| IntPoly::zero(self.other_var(var))))
    }

    pub fn is_monic_in(&self, var: &str) -> bool {
        self.leading_coeff_in(var).is_ok_and(|l| l.is_one())
    }

    pub fn other_var(&self, var: &str) -> String {
        if var == self.outer {
            self.inner.clone()
        } else {
            self.outer.clone()
        }
    }

    /// Substitutes an integer for `var`, leaving a polynomial in the other variable.
    pub fn specialize(&self, var: &str, value: &BigInt) -> Result<IntPoly, PolyError> {
        if var == self.outer {
            let mut acc = IntPoly::zero(self.inner.clone());
            for r in self.rows.iter().rev() {
                acc = &acc.scale(value) + r;
            }
            Ok(acc.with_var(self.inner.clone()))
        } else if var == self.inner {
            let coeffs = self.rows.iter().map(|r| r.eval(value)).collect();
            Ok(IntPoly::new(self.outer.clone(), coeffs))
        } else {
            Err(PolyError::UnknownVariable(var.to_string()))
        }
    }

    pub fn eval(&self, outer: &BigInt, inner: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for r in self.rows.iter().rev() {
            acc = acc * outer + r.eval(inner);
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let rows = self.rows.iter().map(|r| r.scale(k)).collect();
        Self::new(self.outer.clone(), self.inner.clone(), rows)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.outer.clone(), self.inner.clone());
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

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: &str) -> Self {
        if var == self.outer {
            let rows = self
                .rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, r)| r.scale(&BigInt::from(i)))
                .collect();
            Self::new(self.outer.clone(), self.inner.clone(), rows)
        } else if var == self.inner {
            let rows = self.rows.iter().map(|r| r.derivative()).collect();
            Self::new(self.outer.clone(), self.inner.clone(), rows)
        } else {
            Self::zero(self.outer.clone(), self.inner.clone())
        }
    }

    /// Exact quotient in Z[outer, inner], or `None` if the division leaves a remainder.
    pub fn exact_div(&self, d: &BiPoly) -> Option<Self> {
        let d = d.aligned_to(self)?;
        let dd = d.deg_outer()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        let sd = self.deg_outer().unwrap();
        if sd < dd {
            return None;
        }
        let lc = &d.rows[dd];
        let mut rem = self.rows.clone();
        let mut q = vec![IntPoly::zero(self.inner.clone()); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            if rem[k + dd].is_zero() {
                continue;
            }
            let qk = if lc.is_one() {
                rem[k + dd].clone()
            } else {
                rem[k + dd].exact_div(lc)?
            };
            for (j, dr) in d.rows.iter().enumerate() {
                if !dr.is_zero() {
                    rem[k + j] = &rem[k + j] - &(&qk * dr);
                }
            }
            q[k] = qk;
        }
        if rem.iter().any(|r| !r.is_zero()) {
            return None;
        }
        Some(Self::new(self.outer.clone(), self.inner.clone(), q))
    }

    /// Remainder modulo `d`, which must be monic in the outer variable.
    pub fn rem_monic_outer(&self, d: &BiPoly) -> Self {
        let d = d
            .aligned_to(self)
            .expect("variable mismatch in BiPoly remainder");
        let dd = d.deg_outer().expect("division by zero polynomial");
        assert!(
            d.rows[dd].is_one(),
            "divisor must be monic in {}",
            self.outer
        );
        let mut rem = self.rows.clone();
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let top = rem.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            for (j, dr) in d.rows.iter().enumerate().take(dd) {
                if !dr.is_zero() {
                    rem[k + j] = &rem[k + j] - &(&top * dr);
                }
            }
        }
        Self::new(self.outer.clone(), self.inner.clone(), rem)
    }

    /// Re-expresses `self` with the variable layout of `like`, if the names match.
    fn aligned_to(&self, like: &BiPoly) -> Option<BiPoly> {
        if self.outer == like.outer && self.inner == like.inner {
            Some(self.clone())
        } else if self.outer == like.inner && self.inner == like.outer {
            Some(self.transpose())
        } else if self.deg_outer().unwrap_or(0) == 0 && self.inner == like.inner {
            Some(Self::new(
                like.outer.clone(),
                like.inner.clone(),
                self.rows.clone(),
            ))
        } else {
            None
        }
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for r in &self.rows {
            g = num_integer::Integer::gcd(&g, &r.content());
        }
        g
    }

    /// Total number of stored coefficients, a size measure for resource guards.
    pub fn term_count(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs().len()).sum()
    }
}

fn combine(a: &BiPoly, b: &BiPoly, sub: bool) -> BiPoly {
    let b = b.aligned_to(a).unwrap_or_else(|| {
        panic!(
            "variable mismatch: ({}, {}) vs ({}, {})",
            a.outer, a.inner, b.outer, b.inner
        )
    });
    let n = a.rows.len().max(b.rows.len());
    let zero = IntPoly::zero(a.inner.clone());
    let rows = (0..n)
        .map(|i| {
            let x = a.rows.get(i).unwrap_or(&zero);
            let y = b.rows.get(i).unwrap_or(&zero);
            if sub {
                x - y
            } else {
                x + y
            }
        })
        .collect();
    BiPoly::new(a.outer.clone(), a.inner.clone(), rows)
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        combine(self, rhs, false)
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        combine(self, rhs, true)
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let rhs = rhs
            .aligned_to(self)
            .expect("variable mismatch in BiPoly product");
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero(self.outer.clone(), self.inner.clone());
        }
        if self.rows.len().min(rhs.rows.len()) >= 4 {
            return kronecker_product(self, &rhs);
        }
        let mut rows =
            vec![IntPoly::zero(self.inner.clone()); self.rows.len() + rhs.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.rows.iter().enumerate() {
                if !b.is_zero() {
                    rows[i + j] = &rows[i + j] + &(a * b);
                }
            }
        }
        BiPoly::new(self.outer.clone(), self.inner.clone(), rows)
    }
}

/// Flattens both factors to one variable with a stride wide enough to avoid overlap.
fn kronecker_product(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let stride = a.deg_inner().unwrap_or(0) + b.deg_inner().unwrap_or(0) + 1;
    let flat = |p: &BiPoly| {
        let mut c = vec![BigInt::zero(); p.rows.len() * stride];
        for (i, r) in p.rows.iter().enumerate() {
            for (j, x) in r.coeffs().iter().enumerate() {
                c[i * stride + j] = x.clone();
            }
        }
        IntPoly::new(p.inner.clone(), c)
    };
    let prod = &flat(a) * &flat(b);
    let rows = prod
        .coeffs()
        .chunks(stride)
        .map(|ch| IntPoly::new(a.inner.clone(), ch.to_vec()))
        .collect();
    BiPoly::new(a.outer.clone(), a.inner.clone(), rows)
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        let rows = self.rows.iter().map(|r| -r).collect();
        BiPoly::new(self.outer.clone(), self.inner.clone(), rows)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, r) in self.rows.iter().enumerate().rev() {
            if r.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({r})")?,
                1 => write!(f, "({r})*{}", self.outer)?,
                _ => write!(f, "({r})*{}^{i}", self.outer)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly[{}, {}]({self})", self.outer, self.inner)
    }
}
