//! Truncated formal power series over exact rationals.
//!
//! A [`PowerSeries`] stores coefficients `c_0 .. c_order` of a series in one
//! formal variable, truncated inclusively at `order`. All arithmetic is exact:
//! coefficients are arbitrary-precision rationals and results carry
//! `min(order)` of the inputs, so truncation never happens silently.
//!
//! Division requires a unit (nonzero constant term). A series divisible by a
//! power of the variable must be shifted down explicitly with
//! [`PowerSeries::divide_by_x`] before dividing; this keeps order bookkeeping
//! visible at the call site instead of losing degrees inside a division.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational};

/// Default truncation order used by callers that do not pick one.
///
/// Deep enough to expose genus coefficients through x^28 while keeping
/// big-rational growth tractable.
pub const DEFAULT_ORDER: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// Division by a series whose constant term is zero.
    DivisionByNonUnit,
    /// `exp` of a series with a nonzero constant term.
    NonzeroConstantTerm,
    /// `divide_by_x(k)` would drop a nonzero coefficient at this index.
    NonzeroShiftedCoefficient(u32),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::DivisionByNonUnit => {
                write!(f, "division by a series with zero constant term")
            }
            SeriesError::NonzeroConstantTerm => {
                write!(f, "exponential requires a zero constant term")
            }
            SeriesError::NonzeroShiftedCoefficient(k) => {
                write!(f, "cannot shift down past nonzero coefficient at degree {k}")
            }
        }
    }
}

impl std::error::Error for SeriesError {}

/// Formal power series `c_0 + c_1 x + ... + c_order x^order` with exact
/// rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Series from its coefficient list; the order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty list (order would be negative).
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least its constant term");
        PowerSeries { coeffs }
    }

    pub fn zero(order: u32) -> Self {
        PowerSeries {
            coeffs: vec![Rational::zero(); order as usize + 1],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(value: Rational, order: u32) -> Self {
        let mut coeffs = vec![Rational::zero(); order as usize + 1];
        coeffs[0] = value;
        PowerSeries { coeffs }
    }

    /// The identity series `x` (or the constant 0 at order 0).
    pub fn x(order: u32) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// `c * x^k`, truncated if `k > order`.
    pub fn monomial(coeff: Rational, k: u32, order: u32) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k as usize] = coeff;
        }
        s
    }

    pub fn order(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    /// Coefficient of `x^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: u32) -> Rational {
        self.coeffs
            .get(k as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// True when the series is invertible, i.e. the constant term is nonzero.
    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Drops coefficients above `order`; extending instead pads with zeros.
    pub fn truncate(&self, order: u32) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order as usize + 1, Rational::zero());
        PowerSeries { coeffs }
    }

    /// Coefficient-wise sum at the shared (minimum) order.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| &self.coeffs[k] + &other.coeffs[k])
            .collect();
        PowerSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Cauchy product truncated at the shared (minimum) order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Long division by a unit series, exact to the shared order.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        if !other.is_unit() {
            return Err(SeriesError::DivisionByNonUnit);
        }
        let n = self.coeffs.len().min(other.coeffs.len());
        let lead = &other.coeffs[0];
        let mut q = vec![Rational::zero(); n];
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                if !other.coeffs[j].is_zero() {
                    acc -= &other.coeffs[j] * &q[k - j];
                }
            }
            q[k] = acc / lead;
        }
        Ok(PowerSeries { coeffs: q })
    }

    /// Formal exponential `sum a^k / k!`; requires a zero constant term so the
    /// sum terminates at the truncation order.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order();
        let mut acc = Self::one(order);
        let mut term = Self::one(order);
        for k in 1..=order as u64 {
            term = term.mul(self).scale(&Rational::new(1.into(), k.into()));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Argument substitution `x -> c x`: coefficient `k` is multiplied by `c^k`.
    pub fn scale_arg(&self, c: &Rational) -> Self {
        let mut pow = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if k > 0 {
                    pow *= c;
                }
                a * &pow
            })
            .collect();
        PowerSeries { coeffs }
    }

    /// Exact shift-down by `x^k`. The first `k` coefficients must vanish;
    /// the result has order reduced by `k`.
    pub fn divide_by_x(&self, k: u32) -> Result<Self, SeriesError> {
        let k = k as usize;
        if k >= self.coeffs.len() {
            return Err(SeriesError::NonzeroShiftedCoefficient(self.order()));
        }
        for (i, c) in self.coeffs.iter().take(k).enumerate() {
            if !c.is_zero() {
                return Err(SeriesError::NonzeroShiftedCoefficient(i as u32));
            }
        }
        Ok(PowerSeries {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Horner evaluation in binary64. The series algebra itself stays exact;
    /// this is the one conversion point to floating-point consumers.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational::to_f64(c).unwrap_or(f64::INFINITY);
        }
        acc
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for PowerSeries {
    /// Compact polynomial rendering, e.g. `1 + 1/12*x^2 - 1/720*x^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut printed = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = rational::format_rational(&c.abs());
            let sign = c.is_negative();
            if printed {
                write!(f, " {} ", if sign { "-" } else { "+" })?;
            } else if sign {
                write!(f, "-")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "x")?,
                1 => write!(f, "{mag}*x")?,
                _ if mag == "1" => write!(f, "x^{k}")?,
                _ => write!(f, "{mag}*x^{k}")?,
            }
            printed = true;
        }
        if !printed {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for PowerSeries {
    /// `{"order": n, "coeffs": ["p/q", ...]}` with exact fraction strings.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PowerSeries", 2)?;
        st.serialize_field("order", &self.order())?;
        let coeffs: Vec<String> = self.coeffs.iter().map(rational::format_rational).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            order: u32,
            coeffs: Vec<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.coeffs.len() != raw.order as usize + 1 {
            return Err(D::Error::custom(format!(
                "order {} requires {} coefficients, got {}",
                raw.order,
                raw.order + 1,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| rational::parse_rational(s).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PowerSeries { coeffs })
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::add(self, rhs)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::sub(self, rhs)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries::neg(self)
    }
}

/// `exp(x) - 1` shifted down by one power: the series `sum x^k / (k+1)!`,
/// i.e. `(e^x - 1)/x` at the requested order. Shared helper for the
/// denominators `e^x - 1` and `e^{x/2} - e^{-x/2}` that carry a factor `x`.
pub fn expm1_div_x(order: u32) -> PowerSeries {
    let x = PowerSeries::x(order + 1);
    let em1 = x.exp().expect("x has zero constant term").sub(&PowerSeries::one(order + 1));
    em1.divide_by_x(1).expect("e^x - 1 vanishes at 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn s(coeffs: &[(i64, i64)]) -> PowerSeries {
        PowerSeries::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn add_cancels_and_respects_identity() {
        // (1 + x) + (1 - x) = 2
        let a = s(&[(1, 1), (1, 1)]);
        let b = s(&[(1, 1), (-1, 1)]);
        assert_eq!(a.add(&b), s(&[(2, 1), (0, 1)]));

        let z = PowerSeries::zero(4);
        let any = s(&[(3, 2), (0, 1), (5, 7), (0, 1), (-1, 3)]);
        assert_eq!(z.add(&any), any);
    }

    #[test]
    fn add_truncates_to_min_order() {
        let a = PowerSeries::one(5);
        let b = PowerSeries::one(2);
        assert_eq!(a.add(&b).order(), 2);
    }

    #[test]
    fn mul_identity_and_difference_of_squares() {
        let any = s(&[(2, 3), (-1, 4), (7, 1)]);
        assert_eq!(any.mul(&PowerSeries::one(2)), any);

        // (1+x)(1-x) at order 2 -> 1 - x^2
        let a = s(&[(1, 1), (1, 1), (0, 1)]);
        let b = s(&[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(a.mul(&b), s(&[(1, 1), (0, 1), (-1, 1)]));
    }

    #[test]
    fn div_self_is_one() {
        let a = s(&[(3, 1), (1, 2), (-4, 7), (1, 1)]);
        assert_eq!(a.div(&a).unwrap(), PowerSeries::one(3));
    }

    #[test]
    fn div_rejects_non_unit() {
        let a = PowerSeries::one(3);
        let b = PowerSeries::x(3);
        assert_eq!(a.div(&b), Err(SeriesError::DivisionByNonUnit));
    }

    #[test]
    fn x_over_expm1_leading_coefficients() {
        // x / (e^x - 1) after the explicit shift-down: constant 1, then -1/2.
        let g = expm1_div_x(8);
        let inv = PowerSeries::one(8).div(&g).unwrap();
        assert_eq!(inv.coeff(0), rat(1, 1));
        assert_eq!(inv.coeff(1), rat(-1, 2));
        // Bernoulli numbers over factorials: x^2 coefficient B_2/2! = 1/12.
        assert_eq!(inv.coeff(2), rat(1, 12));
    }

    #[test]
    fn coth_construction_gives_minus_one_over_720_at_x4() {
        // (x/2)(e^{x/2} + e^{-x/2}) / (e^{x/2} - e^{-x/2}) by long division,
        // with the common factor x cancelled explicitly.
        let order = 8;
        let half_x = PowerSeries::monomial(rat(1, 2), 1, order + 1);
        let ep = half_x.exp().unwrap();
        let em = half_x.neg().exp().unwrap();
        let numer = half_x.mul(&ep.add(&em)).divide_by_x(1).unwrap();
        let denom = ep.sub(&em).divide_by_x(1).unwrap();
        let l = numer.div(&denom).unwrap();
        assert_eq!(l.coeff(0), rat(1, 1));
        assert_eq!(l.coeff(2), rat(1, 12));
        assert_eq!(l.coeff(4), rat(-1, 720));
        assert_eq!(l.coeff(6), rat(1, 30240));
    }

    #[test]
    fn exp_basics() {
        assert_eq!(PowerSeries::zero(5).exp().unwrap(), PowerSeries::one(5));
        let e = PowerSeries::x(6).exp().unwrap();
        assert_eq!(e.coeff(2), rat(1, 2));
        assert_eq!(e.coeff(6), rat(1, 720));
        assert_eq!(
            PowerSeries::one(3).exp(),
            Err(SeriesError::NonzeroConstantTerm)
        );
    }

    #[test]
    fn exp_sum_gives_cosh() {
        // exp(x/2) + exp(-x/2) = 2 cosh(x/2); x^2 coefficient 2 * 1/8 = 1/4.
        let half_x = PowerSeries::monomial(rat(1, 2), 1, 6);
        let sum = half_x.exp().unwrap().add(&half_x.neg().exp().unwrap());
        assert_eq!(sum.coeff(0), rat(2, 1));
        assert_eq!(sum.coeff(1), rat(0, 1));
        assert_eq!(sum.coeff(2), rat(1, 4));
    }

    #[test]
    fn scale_arg_by_one_zero_and_half() {
        let a = s(&[(1, 1), (2, 1), (1, 3)]);
        assert_eq!(a.scale_arg(&rat(1, 1)), a);
        assert_eq!(a.scale_arg(&rat(0, 1)), s(&[(1, 1), (0, 1), (0, 1)]));
        // x coth x has x^2 coefficient 1/3; halving the argument gives 1/12.
        let xcothx = s(&[(1, 1), (0, 1), (1, 3)]);
        assert_eq!(xcothx.scale_arg(&rat(1, 2)).coeff(2), rat(1, 12));
    }

    #[test]
    fn divide_by_x_checks_dropped_coefficients() {
        let a = PowerSeries::monomial(rat(5, 1), 2, 4);
        let shifted = a.divide_by_x(2).unwrap();
        assert_eq!(shifted.order(), 2);
        assert_eq!(shifted.coeff(0), rat(5, 1));

        let b = PowerSeries::one(4);
        assert_eq!(
            b.divide_by_x(1),
            Err(SeriesError::NonzeroShiftedCoefficient(0))
        );
    }

    #[test]
    fn eval_rational_is_horner_exact() {
        let a = s(&[(1, 1), (-1, 2), (1, 3)]);
        // at x = 2/5: 1 - 1/5 + 4/75 = 64/75
        assert_eq!(a.eval_rational(&rat(2, 5)), rat(64, 75));
    }

    #[test]
    fn display_matches_expected_layout() {
        assert_eq!(PowerSeries::one(0).to_string(), "1");
        assert_eq!(PowerSeries::zero(3).to_string(), "0");
        let a = s(&[(1, 1), (0, 1), (1, 12), (0, 1), (-1, 720)]);
        assert_eq!(a.to_string(), "1 + 1/12*x^2 - 1/720*x^4");
    }

    #[test]
    fn json_round_trip_uses_fraction_strings() {
        let a = s(&[(1, 1), (0, 1), (-7, 45)]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"order":2,"coeffs":["1","0","-7/45"]}"#);
        let back: PowerSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);

        let bad = r#"{"order":3,"coeffs":["1","0"]}"#;
        assert!(serde_json::from_str::<PowerSeries>(bad).is_err());
    }
}
