//! The weight parameter `a` of the weighted size `a·f2 + f1`, and exact
//! comparisons of weighted quantities.
//!
//! Rational weights compare with plain rational arithmetic. A weight of the
//! form `log2(k)` is irrational unless `k` is a power of two; those compare
//! exactly by reducing `a·x ≷ y` to `k^x ≷ 2^y` over big integers, so no
//! verdict ever depends on floating-point rounding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i64>;

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, an integer, or a finite decimal (`1.25`) exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("`{s}` is not an exact rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = int
            .abs()
            .checked_mul(scale)
            .and_then(|x| x.checked_add(frac))
            .ok_or_else(bad)?;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(numer, scale));
    }
    let p: i64 = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// The weight `a ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    Rational(Rational),
    /// `log2(k)` for an integer `k ≥ 3` that is not a power of two.
    Log2(u32),
}

impl Weight {
    pub fn integer(a: i64) -> Result<Weight> {
        Weight::rational(Rational::from_integer(a))
    }

    pub fn rational(a: Rational) -> Result<Weight> {
        if a < Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "weight a={} must be at least 1",
                ratio_string(&a)
            )));
        }
        Ok(Weight::Rational(a))
    }

    /// `log2(k)`, normalised to a rational when `k` is a power of two.
    pub fn log2(k: u32) -> Result<Weight> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "weight log2({k}) must be at least 1"
            )));
        }
        if k.is_power_of_two() {
            return Weight::integer(k.trailing_zeros() as i64);
        }
        Ok(Weight::Log2(k))
    }

    /// The weight that counts oriented subgraphs.
    pub fn log2_3() -> Weight {
        Weight::Log2(3)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Weight::Rational(r) => Some(*r),
            Weight::Log2(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            Weight::Log2(k) => (*k as f64).log2(),
        }
    }

    /// Exact comparison of `a·x` against `y`.
    pub fn cmp_scaled(&self, x: i64, y: i64) -> Ordering {
        match self {
            Weight::Rational(a) => (a * Rational::from_integer(x)).cmp(&Rational::from_integer(y)),
            Weight::Log2(k) => cmp_log2_scaled(*k, x, y),
        }
    }

    /// Exact comparison of `a·x` against the rational `y`.
    pub fn cmp_scaled_rational(&self, x: i64, y: Rational) -> Ordering {
        match self {
            Weight::Rational(a) => (a * Rational::from_integer(x)).cmp(&y),
            Weight::Log2(k) => {
                // a·x ≷ p/q  ⇔  a·(x·q) ≷ p   (q > 0)
                cmp_log2_scaled(*k, x * y.denom(), *y.numer())
            }
        }
    }

    pub fn compare(&self, lhs: EdgeProfile, rhs: EdgeProfile) -> Ordering {
        let x = lhs.doubles as i64 - rhs.doubles as i64;
        let y = rhs.singles as i64 - lhs.singles as i64;
        self.cmp_scaled(x, y)
    }

    pub fn value(&self, profile: EdgeProfile) -> WeightedValue {
        WeightedValue {
            weight: self.clone(),
            profile,
        }
    }

    /// Text form accepted back by [`Weight::from_str`].
    pub fn to_param_string(&self) -> String {
        match self {
            Weight::Rational(r) if r.is_integer() => r.numer().to_string(),
            Weight::Rational(r) => ratio_string(r),
            Weight::Log2(k) => format!("log2({k})"),
        }
    }
}

fn cmp_log2_scaled(k: u32, x: i64, y: i64) -> Ordering {
    // log2(k)·x ≷ y with k not a power of two: equality only at x = y = 0.
    match (x.signum(), y.signum()) {
        (0, _) => 0.cmp(&y),
        (1, s) if s <= 0 => Ordering::Greater,
        (-1, s) if s >= 0 => Ordering::Less,
        (1, _) => pow(k, x as u64).cmp(&pow(2, y as u64)),
        _ => pow(k, x.unsigned_abs()).cmp(&pow(2, y.unsigned_abs())).reverse(),
    }
}

fn pow(base: u32, exp: u64) -> BigUint {
    let exp = u32::try_from(exp).expect("exponent fits u32");
    BigUint::from(base).pow(exp)
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_param_string())
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Accepts `2`, `5/2`, `1.5`, `log2(3)` and `log2_3`.
    fn from_str(s: &str) -> Result<Weight> {
        let t = s.trim();
        let log_arg = t
            .strip_prefix("log2(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("log2_"));
        if let Some(arg) = log_arg {
            let k: u32 = arg
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad weight `{s}`")))?;
            return Weight::log2(k);
        }
        Weight::rational(parse_rational(t)?)
    }
}

/// The pair counts `(f2, f1)` that determine every weighted size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeProfile {
    pub doubles: u32,
    pub singles: u32,
}

impl EdgeProfile {
    pub fn new(doubles: u32, singles: u32) -> Self {
        EdgeProfile { doubles, singles }
    }

    pub fn of(g: &Digraph) -> Self {
        EdgeProfile::new(g.f2() as u32, g.f1() as u32)
    }
}

/// An exactly represented weighted size `a·f2 + f1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedValue {
    pub weight: Weight,
    pub profile: EdgeProfile,
}

impl WeightedValue {
    /// The value as a rational, when the weight is rational.
    pub fn exact(&self) -> Option<Rational> {
        self.weight.as_rational().map(|a| {
            a * Rational::from_integer(self.profile.doubles as i64)
                + Rational::from_integer(self.profile.singles as i64)
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.weight.to_f64() * self.profile.doubles as f64 + self.profile.singles as f64
    }

    /// `p/q` for rational weights, `f2*log2(k)+f1` otherwise.
    pub fn exact_string(&self) -> String {
        match self.exact() {
            Some(r) => ratio_string(&r),
            None => format!(
                "{}*{}+{}",
                self.profile.doubles, self.weight, self.profile.singles
            ),
        }
    }

    /// Exact comparison against `bound`, which may be any rational.
    pub fn cmp_rational(&self, bound: Rational) -> Ordering {
        // a·f2 + f1 ≷ b  ⇔  a·f2 ≷ b - f1
        let rhs = bound - Rational::from_integer(self.profile.singles as i64);
        self.weight.cmp_scaled_rational(self.profile.doubles as i64, rhs)
    }

    pub fn is_zero(&self) -> bool {
        self.profile == EdgeProfile::default()
    }
}

/// `a·f2(G) + f1(G)`.
pub fn weighted_size(g: &Digraph, weight: &Weight) -> WeightedValue {
    weight.value(EdgeProfile::of(g))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{zoo, Digraph};

    #[test]
    fn weighted_size_examples() {
        let two = Weight::integer(2).unwrap();
        let v = weighted_size(&zoo::two_cycle(), &two);
        assert_eq!(v.exact(), Some(Rational::from_integer(2)));

        let empty = Digraph::empty(4);
        assert!(weighted_size(&empty, &Weight::log2_3()).is_zero());
        assert_eq!(weighted_size(&empty, &two).exact(), Some(Rational::from_integer(0)));

        let g = Digraph::parse("n=3; 0 1; 1 0; 1 2").unwrap();
        let v = weighted_size(&g, &Weight::log2_3());
        assert!((v.to_f64() - (3f64.log2() + 1.0)).abs() < 1e-12);
        assert_eq!(v.exact_string(), "1*log2(3)+1");
    }

    #[test]
    fn parse_weights() {
        assert_eq!("2".parse::<Weight>().unwrap(), Weight::integer(2).unwrap());
        assert_eq!(
            "5/2".parse::<Weight>().unwrap(),
            Weight::Rational(Rational::new(5, 2))
        );
        assert_eq!(
            "1.25".parse::<Weight>().unwrap(),
            Weight::Rational(Rational::new(5, 4))
        );
        assert_eq!("log2(3)".parse::<Weight>().unwrap(), Weight::Log2(3));
        assert_eq!("log2_3".parse::<Weight>().unwrap(), Weight::Log2(3));
        assert_eq!("log2(4)".parse::<Weight>().unwrap(), Weight::integer(2).unwrap());
        assert!("0.5".parse::<Weight>().is_err());
        assert!("log2(1)".parse::<Weight>().is_err());
        assert!("x".parse::<Weight>().is_err());
        assert!("1/0".parse::<Weight>().is_err());
    }

    #[test]
    fn log2_comparisons_are_exact() {
        let w = Weight::log2_3();
        // log2(3) ≈ 1.58496
        assert_eq!(w.cmp_scaled(1, 1), Ordering::Greater);
        assert_eq!(w.cmp_scaled(1, 2), Ordering::Less);
        // 12·log2(3) ≈ 19.0196 vs 19
        assert_eq!(w.cmp_scaled(12, 19), Ordering::Greater);
        // 53·log2(3) ≈ 84.0030 vs 84
        assert_eq!(w.cmp_scaled(53, 84), Ordering::Greater);
        assert_eq!(w.cmp_scaled(-53, -84), Ordering::Less);
        assert_eq!(w.cmp_scaled(-1, 0), Ordering::Less);
        assert_eq!(w.cmp_scaled(0, 0), Ordering::Equal);
        // 3·log2(3) ≈ 4.7549 sits between 19/4 and 24/5
        assert_eq!(w.cmp_scaled_rational(3, Rational::new(19, 4)), Ordering::Greater);
        assert_eq!(w.cmp_scaled_rational(3, Rational::new(24, 5)), Ordering::Less);
        assert_eq!(w.cmp_scaled_rational(3, Rational::new(9, 2)), Ordering::Greater);
    }

    #[test]
    fn compare_profiles() {
        let two = Weight::integer(2).unwrap();
        // one double edge equals two single edges at a = 2
        assert_eq!(
            two.compare(EdgeProfile::new(1, 0), EdgeProfile::new(0, 2)),
            Ordering::Equal
        );
        let w = Weight::log2_3();
        assert_eq!(
            w.compare(EdgeProfile::new(1, 0), EdgeProfile::new(0, 2)),
            Ordering::Less
        );
        assert_eq!(
            w.compare(EdgeProfile::new(1, 0), EdgeProfile::new(0, 1)),
            Ordering::Greater
        );
    }

    #[test]
    fn value_vs_rational_bound() {
        let w = Weight::log2_3();
        let v = w.value(EdgeProfile::new(2, 1)); // ≈ 4.17
        assert_eq!(v.cmp_rational(Rational::new(9, 2)), Ordering::Less);
        assert_eq!(v.cmp_rational(Rational::from_integer(4)), Ordering::Greater);
    }
}
