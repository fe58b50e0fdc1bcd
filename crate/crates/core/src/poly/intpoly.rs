use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::PolyError;

/// Dense univariate polynomial with arbitrary-precision integer coefficients.
///
/// Coefficients are stored in ascending degree order and the highest stored
/// coefficient is always nonzero (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
    var: String,
}

/// Wire form: `{ "var": "c", "coeffs": ["2", "2", "2", "1"] }`.
#[derive(Serialize, Deserialize)]
struct PolyRepr {
    var: String,
    coeffs: Vec<String>,
}

impl From<IntPoly> for PolyRepr {
    fn from(p: IntPoly) -> Self {
        PolyRepr {
            coeffs: p.coeffs.iter().map(|c| c.to_string()).collect(),
            var: p.var,
        }
    }
}

impl TryFrom<PolyRepr> for IntPoly {
    type Error = PolyError;

    fn try_from(r: PolyRepr) -> Result<Self, PolyError> {
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| PolyError::Parse(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p = IntPoly::new(r.var, coeffs);
        Ok(p)
    }
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(var: impl Into<String>, mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly {
            coeffs,
            var: var.into(),
        }
    }

    pub fn from_i64s(var: impl Into<String>, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(var: impl Into<String>) -> Self {
        IntPoly {
            coeffs: Vec::new(),
            var: var.into(),
        }
    }

    pub fn one(var: impl Into<String>) -> Self {
        Self::constant(var, BigInt::one())
    }

    pub fn constant(var: impl Into<String>, c: BigInt) -> Self {
        Self::new(var, vec![c])
    }

    /// `c * var^k`
    pub fn monomial(var: impl Into<String>, c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(var, coeffs)
    }

    /// The polynomial `var` itself.
    pub fn x(var: impl Into<String>) -> Self {
        Self::monomial(var, BigInt::one(), 1)
    }

    /// Parses an expanded sum such as `c^3 + 2c^2 - 2*c + 2`.
    pub fn parse(s: &str) -> Result<Self, PolyError> {
        s.parse()
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn with_var(mut self, var: impl Into<String>) -> Self {
        self.var = var.into();
        self
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::new(self.var.clone(), coeffs)
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading_coeff().is_negative() {
            g = -g;
        }
        if g.is_one() {
            return self.clone();
        }
        Self::new(
            self.var.clone(),
            self.coeffs.iter().map(|c| c / &g).collect(),
        )
    }

    /// Same polynomial with a positive leading coefficient.
    pub fn with_positive_lead(self) -> Self {
        if self.leading_coeff().is_negative() {
            -self
        } else {
            self
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.var.clone());
        }
        Self::new(
            self.var.clone(),
            self.coeffs.iter().map(|c| c * k).collect(),
        )
    }

    /// Divides every coefficient by `k`, or `None` if some division is inexact.
    pub fn div_scalar_exact(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(self.var.clone(), out))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.var.clone());
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

    /// `self(inner(x))`, keeping the variable of `inner`.
    pub fn compose(&self, inner: &IntPoly) -> Self {
        let mut acc = Self::zero(inner.var.clone());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(inner.var.clone(), c.clone());
        }
        acc
    }

    /// `self(x^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1, "substitute_power needs k >= 1");
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(self.var.clone(), coeffs)
    }

    /// Multiplicity of the root 0.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `x^k`; the caller guarantees `k <= trailing_zeros()`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(k <= self.trailing_zeros() || self.is_zero());
        Self::new(
            self.var.clone(),
            self.coeffs.iter().skip(k).cloned().collect(),
        )
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(self.var.clone(), coeffs)
    }

    /// Largest coefficient magnitude.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Sum of coefficient magnitudes.
    pub fn norm1(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Bit length of the Euclidean norm, rounded up.
    pub fn norm2_bits(&self) -> u64 {
        let sq: BigInt = self.coeffs.iter().map(|c| c * c).sum();
        sq.bits().div_ceil(2) + 1
    }

    /// Exact quotient `self / d` in Z[x], or `None` if `d` does not divide.
    pub fn exact_div(&self, d: &IntPoly) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        // Constant terms must divide unless d vanishes at 0.
        if let (Some(a0), Some(b0)) = (self.coeffs.first(), d.coeffs.first()) {
            if !b0.is_zero() && !a0.is_zero() && !(a0 % b0).is_zero() {
                return None;
            }
        }
        let lc = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + j] -= &qk * dc;
                }
            }
            q[k] = qk;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.var.clone(), q))
    }

    /// Division by a divisor whose leading coefficient is ±1.
    pub fn div_rem_monic(&self, d: &IntPoly) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading_coeff();
        assert!(
            lc.abs().is_one(),
            "div_rem_monic needs a unit leading coefficient"
        );
        let Some(sd) = self.degree().filter(|&s| s >= dd) else {
            return (Self::zero(self.var.clone()), self.clone());
        };
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let top = std::mem::take(&mut rem[k + dd]);
            if top.is_zero() {
                continue;
            }
            let qk = if lc.is_one() { top } else { -top };
            for (j, dc) in d.coeffs.iter().enumerate().take(dd) {
                if !dc.is_zero() {
                    rem[k + j] -= &qk * dc;
                }
            }
            q[k] = qk;
        }
        rem.truncate(dd);
        (
            Self::new(self.var.clone(), q),
            Self::new(self.var.clone(), rem),
        )
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let Some(sd) = self.degree().filter(|&s| s >= dd) else {
            return self.clone();
        };
        let lc = d.leading_coeff();
        let mut rem = self.coeffs.clone();
        let mut steps = sd - dd + 1;
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let top = rem.pop().unwrap();
            for c in rem.iter_mut() {
                *c *= &lc;
            }
            for (j, dc) in d.coeffs.iter().enumerate().take(dd) {
                rem[k + j] -= &top * dc;
            }
            trim(&mut rem);
            steps -= 1;
        }
        if steps > 0 {
            let f = num_traits::pow(lc, steps);
            for c in rem.iter_mut() {
                *c *= &f;
            }
        }
        Self::new(self.var.clone(), rem)
    }

    /// Ordering key: degree first, then coefficients in ascending order.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

fn combine(a: &IntPoly, b: &IntPoly, sub: bool) -> IntPoly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.coeffs.get(i);
        let y = b.coeffs.get(i);
        out.push(match (x, y, sub) {
            (Some(x), Some(y), false) => x + y,
            (Some(x), Some(y), true) => x - y,
            (Some(x), None, _) => x.clone(),
            (None, Some(y), false) => y.clone(),
            (None, Some(y), true) => -y,
            (None, None, _) => unreachable!(),
        });
    }
    let var = if a.is_zero() && !b.is_zero() {
        b.var.clone()
    } else {
        a.var.clone()
    };
    IntPoly::new(var, out)
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        combine(self, rhs, false)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        combine(self, rhs, true)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero(self.var.clone());
        }
        if self.coeffs.len().min(rhs.coeffs.len()) >= super::kronecker::THRESHOLD {
            return IntPoly::new(
                self.var.clone(),
                super::kronecker::mul(&self.coeffs, &rhs.coeffs),
            );
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        let var = if self.is_constant() && !rhs.is_constant() {
            rhs.var.clone()
        } else {
            self.var.clone()
        };
        IntPoly::new(var, out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.var.clone(), self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(mut self) -> IntPoly {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "{}", self.var)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl FromStr for IntPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let err = |m: &str| PolyError::Parse(format!("{m} in {s:?}"));
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err("empty input"));
        }
        let mut var: Option<String> = None;
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let mut sign = BigInt::one();
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                if chars[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut coef = if i > start {
                chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse::<BigInt>()
                    .unwrap()
            } else {
                BigInt::one()
            };
            let had_number = i > start;
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            }
            let mut power = 0usize;
            if i < chars.len() && (chars[i].is_alphabetic() || chars[i] == '_') {
                let vs = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[vs..i].iter().collect();
                match &var {
                    Some(v) if *v != name => return Err(err("more than one variable")),
                    _ => var = Some(name),
                }
                power = 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let es = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if es == i {
                        return Err(err("missing exponent"));
                    }
                    power = chars[es..i].iter().collect::<String>().parse().unwrap();
                }
            } else if !had_number {
                return Err(err("expected a term"));
            }
            coef *= sign;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += coef;
            if i < chars.len() && chars[i] != '+' && chars[i] != '-' {
                return Err(err("unexpected character"));
            }
        }
        Ok(IntPoly::new(var.unwrap_or_else(|| "x".into()), coeffs))
    }
}
