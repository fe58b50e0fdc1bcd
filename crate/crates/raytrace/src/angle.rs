use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::RayError;

/// Reduced fraction `p/q` in `[0, 1)`, read modulo 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "AngleWire", into = "AngleWire")]
pub struct Angle {
    p: u64,
    q: u64,
}

#[derive(Serialize, Deserialize)]
struct AngleWire {
    p: u64,
    q: u64,
}

impl TryFrom<AngleWire> for Angle {
    type Error = RayError;
    fn try_from(w: AngleWire) -> Result<Self, RayError> {
        Angle::new(w.p, w.q)
    }
}

impl From<Angle> for AngleWire {
    fn from(a: Angle) -> Self {
        AngleWire { p: a.p, q: a.q }
    }
}

/// Preperiod and period of an angle under multiplication by `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngleOrbit {
    pub preperiod: u32,
    pub period: u32,
}

impl AngleOrbit {
    pub fn is_periodic(&self) -> bool {
        self.preperiod == 0
    }
}

impl Angle {
    /// Requires `p < q`; the fraction is reduced.
    pub fn new(p: u64, q: u64) -> Result<Self, RayError> {
        if q == 0 || p >= q {
            return Err(RayError::InvalidAngle(format!("{p}/{q}: need 0 <= p < q")));
        }
        let g = p.gcd(&q);
        Ok(Angle { p: p / g, q: q / g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `1 - angle` (mod 1): the angle of the complex-conjugate ray.
    pub fn conjugate(&self) -> Angle {
        Angle {
            p: (self.q - self.p) % self.q,
            q: self.q,
        }
        .reduced()
    }

    fn reduced(self) -> Angle {
        Angle::new(self.p, self.q).expect("in range")
    }

    /// `n^k * angle` mod 1, exactly.
    pub fn times_power(&self, n: u64, k: u32) -> Angle {
        let q = self.q as u128;
        let mut acc = self.p as u128 % q;
        let mut base = n as u128 % q;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        Angle::new(acc as u64, self.q).expect("reduced residue")
    }
}

/// Preperiod `a` and period `r` of `t -> n t mod 1`, by exact iteration on numerators.
pub fn angle_orbit(angle: Angle, n: u64) -> AngleOrbit {
    let q = angle.q as u128;
    let mut seen: HashMap<u64, u32> = HashMap::new();
    let mut x = angle.p;
    let mut k = 0u32;
    loop {
        if let Some(&first) = seen.get(&x) {
            return AngleOrbit {
                preperiod: first,
                period: k - first,
            };
        }
        seen.insert(x, k);
        x = (x as u128 * n as u128 % q) as u64;
        k += 1;
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Angle {
    type Err = RayError;
    fn from_str(s: &str) -> Result<Self, RayError> {
        let bad = || RayError::InvalidAngle(format!("expected p/q, got {s:?}"));
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        Angle::new(
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
        )
    }
}
