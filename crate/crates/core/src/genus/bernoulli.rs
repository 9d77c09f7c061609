//! Exact Bernoulli numbers, `B_1 = -1/2` convention.

use num_traits::{One, Zero};

use crate::rational::{binomial, Rational};

/// `B_0 .. B_n` by the defining recurrence
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0` for `m >= 1`.
pub fn bernoulli_numbers(n: u32) -> Vec<Rational> {
    let mut b = Vec::with_capacity(n as usize + 1);
    b.push(Rational::one());
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            // Odd Bernoulli numbers past B_1 vanish; skip the summation.
            b.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += binomial(m + 1, j as u32) * bj;
            }
        }
        b.push(-acc / binomial(m + 1, m));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn first_values_match_the_classical_table() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], rat(1, 1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat(0, 1));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
        assert_eq!(b[8], rat(-1, 30));
        assert_eq!(b[10], rat(5, 66));
        assert_eq!(b[12], rat(-691, 2730));
    }

    #[test]
    fn generating_function_identity_x_over_expm1() {
        // sum B_k x^k / k! must reproduce x/(e^x - 1) term by term.
        use crate::rational::factorial;
        use crate::series::{expm1_div_x, PowerSeries};
        let order = 16;
        let direct = PowerSeries::one(order)
            .div(&expm1_div_x(order))
            .unwrap();
        let b = bernoulli_numbers(order);
        let via_bernoulli = PowerSeries::from_coeffs(
            (0..=order as usize)
                .map(|k| &b[k] / factorial(k as u32))
                .collect(),
        );
        assert_eq!(direct, via_bernoulli);
    }
}
