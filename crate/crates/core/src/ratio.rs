//! Exact non-negative rationals for parameters such as `ε = 1/3`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Option<Ratio> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        Some(Ratio { num: num / g, den: den / g })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `floor(self * k)`.
    pub fn floor_mul(self, k: u64) -> u64 {
        ((self.num as u128 * k as u128) / self.den as u128) as u64
    }

    /// `self * k` when it is an integer.
    pub fn exact_mul(self, k: u64) -> Option<u64> {
        let p = self.num as u128 * k as u128;
        p.is_multiple_of(self.den as u128).then(|| (p / self.den as u128) as u64)
    }

    pub fn div_int(self, k: u64) -> Option<Ratio> {
        Ratio::new(self.num, self.den.checked_mul(k)?)
    }

    /// Strictly between 0 and 1.
    pub fn is_proper(self) -> bool {
        self.num > 0 && self.num < self.den
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Ratio {
    type Err = String;

    /// Accepts `a/b`, decimals such as `0.25`, and integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("'{s}' is not a non-negative rational");
        if let Some((a, b)) = s.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            return Ratio::new(a, b).ok_or_else(bad);
        }
        match s.split_once('.') {
            Some((int, frac)) => {
                if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(bad());
                }
                let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
                let den = 10u64.pow(frac.len() as u32);
                let f: u64 = frac.parse().map_err(|_| bad())?;
                let num = int.checked_mul(den).and_then(|x| x.checked_add(f)).ok_or_else(bad)?;
                Ratio::new(num, den).ok_or_else(bad)
            }
            None => Ok(Ratio { num: s.parse().map_err(|_| bad())?, den: 1 }),
        }
    }
}

impl TryFrom<String> for Ratio {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Ratio> for String {
    fn from(r: Ratio) -> String {
        r.to_string()
    }
}
