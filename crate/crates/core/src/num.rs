//! Exact numeric carriers.
//!
//! Attribute values are scaled decimals compared exactly, so `1.30` and
//! `1.3` are the same value and no floating-point noise can flip an order
//! relation. Dominance degrees are kept as exact rationals.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("empty numeric literal")]
    EmptyLiteral,
    #[error("invalid numeric literal `{0}`")]
    BadLiteral(String),
    #[error("numeric value out of range: {0}")]
    OutOfRange(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

/// Largest supported number of decimal places.
pub const MAX_SCALE: u32 = 18;

/// Exact decimal `mantissa / 10^scale`.
///
/// Values are normalized (no trailing zeros in the fractional part), so
/// `Eq` and `Hash` agree with numeric equality across scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decimal {
    mantissa: i64,
    scale: u32,
}

impl Decimal {
    pub const ZERO: Decimal = Decimal { mantissa: 0, scale: 0 };
    pub const ONE: Decimal = Decimal { mantissa: 1, scale: 0 };

    /// Builds `mantissa / 10^scale`.
    ///
    /// Panics if `scale > MAX_SCALE` or `mantissa == i64::MIN`; parse user
    /// input with [`str::parse`] instead, which reports [`NumError`].
    pub fn new(mantissa: i64, scale: u32) -> Decimal {
        assert!(scale <= MAX_SCALE, "scale {scale} exceeds {MAX_SCALE}");
        assert!(mantissa != i64::MIN, "mantissa out of range");
        let mut mantissa = mantissa;
        let mut scale = scale;
        while scale > 0 && mantissa % 10 == 0 {
            mantissa /= 10;
            scale -= 1;
        }
        if mantissa == 0 {
            scale = 0;
        }
        Decimal { mantissa, scale }
    }

    pub fn mantissa(self) -> i64 {
        self.mantissa
    }

    pub fn scale(self) -> u32 {
        self.scale
    }

    pub fn is_negative(self) -> bool {
        self.mantissa < 0
    }

    pub fn to_f64(self) -> f64 {
        self.mantissa as f64 / pow10(self.scale) as f64
    }

    /// `self - other`, exact; fails if the result needs more than an `i64`
    /// mantissa at the common scale.
    pub fn checked_sub(self, other: Decimal) -> Result<Decimal, NumError> {
        let scale = self.scale.max(other.scale);
        let a = self.mantissa as i128 * pow10_i128(scale - self.scale);
        let b = other.mantissa as i128 * pow10_i128(scale - other.scale);
        let m = a - b;
        let m = i64::try_from(m)
            .map_err(|_| NumError::OutOfRange(format!("{self} - {other}")))?;
        if m == i64::MIN {
            return Err(NumError::OutOfRange(format!("{self} - {other}")));
        }
        Ok(Decimal::new(m, scale))
    }

    pub fn neg(self) -> Decimal {
        Decimal { mantissa: -self.mantissa, scale: self.scale }
    }

    pub fn abs(self) -> Decimal {
        Decimal { mantissa: self.mantissa.abs(), scale: self.scale }
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Decimal) -> Ordering {
        let scale = self.scale.max(other.scale);
        let a = self.mantissa as i128 * pow10_i128(scale - self.scale);
        let b = other.mantissa as i128 * pow10_i128(scale - other.scale);
        a.cmp(&b)
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Decimal) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.mantissa);
        }
        let sign = if self.mantissa < 0 { "-" } else { "" };
        let abs = self.mantissa.unsigned_abs();
        let div = pow10(self.scale);
        write!(
            f,
            "{sign}{}.{:0width$}",
            abs / div,
            abs % div,
            width = self.scale as usize
        )
    }
}

impl FromStr for Decimal {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Decimal, NumError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(NumError::EmptyLiteral);
        }
        let bad = || NumError::BadLiteral(s.to_string());
        let (negative, rest) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_part.is_empty()
            || (frac_part.is_empty() && rest.contains('.'))
            || !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        if frac_part.len() as u32 > MAX_SCALE {
            return Err(NumError::OutOfRange(s.to_string()));
        }
        let mut mantissa: i128 = 0;
        for b in int_part.bytes().chain(frac_part.bytes()) {
            mantissa = mantissa * 10 + (b - b'0') as i128;
            if mantissa > i64::MAX as i128 {
                return Err(NumError::OutOfRange(s.to_string()));
            }
        }
        let mantissa = if negative { -(mantissa as i64) } else { mantissa as i64 };
        Ok(Decimal::new(mantissa, frac_part.len() as u32))
    }
}

/// Exact rational with positive denominator, always stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Ratio, NumError> {
        Ratio::from_i128(num as i128, den as i128)
    }

    pub fn from_integer(n: i64) -> Ratio {
        Ratio { num: n, den: 1 }
    }

    fn from_i128(num: i128, den: i128) -> Result<Ratio, NumError> {
        if den == 0 {
            return Err(NumError::ZeroDenominator);
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        let (num, den) = (num / g, den / g);
        let num = i64::try_from(num)
            .map_err(|_| NumError::OutOfRange(format!("{num}/{den}")))?;
        let den = i64::try_from(den)
            .map_err(|_| NumError::OutOfRange(format!("{num}/{den}")))?;
        Ok(Ratio { num, den })
    }

    pub fn numer(self) -> i64 {
        self.num
    }

    pub fn denom(self) -> i64 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, other: Ratio) -> Result<Ratio, NumError> {
        Ratio::from_i128(
            self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128,
            self.den as i128 * other.den as i128,
        )
    }

    pub fn checked_div_int(self, k: i64) -> Result<Ratio, NumError> {
        Ratio::from_i128(self.num as i128, self.den as i128 * k as i128)
    }

    /// Rounds to two decimal places, half away from zero.
    pub fn round2(self) -> Decimal {
        let n = self.num.unsigned_abs() as i128;
        let d = self.den as i128;
        let cents = (200 * n + d) / (2 * d);
        let cents = if self.num < 0 { -(cents as i64) } else { cents as i64 };
        Decimal::new(cents, 2)
    }
}

/// Arithmetic mean, `None` for an empty slice or on overflow.
pub fn mean(ratios: &[Ratio]) -> Option<Ratio> {
    let mut sum = Ratio::ZERO;
    for &r in ratios {
        sum = sum.checked_add(r).ok()?;
    }
    sum.checked_div_int(ratios.len() as i64).ok()
}

impl TryFrom<Decimal> for Ratio {
    type Error = NumError;

    fn try_from(d: Decimal) -> Result<Ratio, NumError> {
        Ratio::new(d.mantissa(), pow10(d.scale()) as i64)
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Ratio) -> Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Ratio) -> Option<Ordering> {
        Some(self.cmp(other))
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

fn pow10(exp: u32) -> u64 {
    10u64.pow(exp)
}

fn pow10_i128(exp: u32) -> i128 {
    10i128.pow(exp)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
