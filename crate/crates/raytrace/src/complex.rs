//! Complex numbers over `astro_float::BigFloat` with an explicit working precision.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) fn consts() -> Consts {
    Consts::new().expect("constant cache allocation")
}

pub(crate) fn real(x: f64, bits: usize) -> BigFloat {
    BigFloat::from_f64(x, bits)
}

pub(crate) fn from_bigint(x: &BigInt, bits: usize, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(&x.to_string(), Radix::Dec, bits, RM, cc)
}

/// Nearest `f64`; out-of-range magnitudes saturate to infinity or zero.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().expect("finite value");
    // mantissa is normalized with its top bit set: value = 0.m * 2^exp
    let top = *words.last().expect("nonempty mantissa") as f64;
    let next = if words.len() > 1 {
        words[words.len() - 2] as f64 / 2f64.powi(64)
    } else {
        0.0
    };
    let mag = (top + next) * 2f64.powi(exp - 64);
    if sign.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Decimal text of a real value.
pub fn decimal(x: &BigFloat) -> String {
    let mut cc = consts();
    x.format(Radix::Dec, RM, &mut cc)
        .unwrap_or_else(|_| "NaN".into())
}

#[derive(Clone, Debug)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: usize) -> Self {
        Complex::from_f64(0.0, 0.0, bits)
    }

    pub fn one(bits: usize) -> Self {
        Complex::from_f64(1.0, 0.0, bits)
    }

    pub fn from_f64(re: f64, im: f64, bits: usize) -> Self {
        Complex {
            re: real(re, bits),
            im: real(im, bits),
        }
    }

    pub fn from_real(re: BigFloat, bits: usize) -> Self {
        Complex {
            re,
            im: real(0.0, bits),
        }
    }

    /// `e^(2 pi i x)` for `x = num / den`.
    pub fn unit_root(num: u64, den: u64, bits: usize, cc: &mut Consts) -> Self {
        let w = bits + 32;
        let two_pi = cc.pi(w, RM).mul(&real(2.0, w), w, RM);
        let x = BigFloat::from_u64(num, w).div(&BigFloat::from_u64(den, w), w, RM);
        let arg = two_pi.mul(&x, w, RM);
        Complex {
            re: arg.cos(bits, RM, cc),
            im: arg.sin(bits, RM, cc),
        }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    pub fn is_finite(&self) -> bool {
        let ok = |x: &BigFloat| !x.is_nan() && !x.is_inf();
        ok(&self.re) && ok(&self.im)
    }

    pub fn with_precision(&self, bits: usize) -> Self {
        let mut out = self.clone();
        // a failure leaves the old precision, which is still a valid value
        let _ = out.re.set_precision(bits, RM);
        let _ = out.im.set_precision(bits, RM);
        out
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        Complex {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
        }
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        Complex {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
        }
    }

    pub fn neg(&self) -> Self {
        Complex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        Complex {
            re: ac.sub(&bd, p, RM),
            im: ad.add(&bc, p, RM),
        }
    }

    pub fn sqr(&self, p: usize) -> Self {
        let a2 = self.re.mul(&self.re, p, RM);
        let b2 = self.im.mul(&self.im, p, RM);
        let ab = self.re.mul(&self.im, p, RM);
        Complex {
            re: a2.sub(&b2, p, RM),
            im: ab.add(&ab, p, RM),
        }
    }

    pub fn scale(&self, k: &BigFloat, p: usize) -> Self {
        Complex {
            re: self.re.mul(k, p, RM),
            im: self.im.mul(k, p, RM),
        }
    }

    pub fn scale_u64(&self, k: u64, p: usize) -> Self {
        self.scale(&BigFloat::from_u64(k, p), p)
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        self.norm_sqr(p).sqrt(p, RM)
    }

    /// `|z|` as `f64`; safe for magnitudes beyond the `f64` range only up to saturation.
    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_c64();
        re.hypot(im)
    }

    pub fn recip(&self, p: usize) -> Self {
        let d = self.norm_sqr(p);
        Complex {
            re: self.re.div(&d, p, RM),
            im: self.im.neg().div(&d, p, RM),
        }
    }

    pub fn div(&self, o: &Self, p: usize) -> Self {
        let d = o.norm_sqr(p);
        let num = self.mul(&o.conj(), p);
        Complex {
            re: num.re.div(&d, p, RM),
            im: num.im.div(&d, p, RM),
        }
    }

    pub fn powu(&self, k: u32, p: usize) -> Self {
        let mut acc = Complex::one(p);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr(p);
            }
        }
        acc
    }

    /// `|self - o|` in double precision.
    pub fn dist(&self, o: &Self, p: usize) -> f64 {
        to_f64(&self.sub(o, p).abs(p))
    }
}

impl PartialEq for Complex {
    fn eq(&self, o: &Self) -> bool {
        self.re == o.re && self.im == o.im
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_c64();
        if im < 0.0 {
            write!(f, "{re:.12} - {:.12}i", -im)
        } else {
            write!(f, "{re:.12} + {im:.12}i")
        }
    }
}

/// Wire form `{ "re": "<decimal>", "im": "<decimal>", "bits": <int> }`.
impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Complex", 3)?;
        st.serialize_field("re", &decimal(&self.re))?;
        st.serialize_field("im", &decimal(&self.im))?;
        st.serialize_field("bits", &self.re.precision().unwrap_or(0))?;
        st.end()
    }
}
