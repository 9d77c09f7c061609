//! Symmetric-function expansion of a product of one-variable series over
//! formal roots, rewritten in the elementary symmetric basis.
//!
//! Everything here is degree-truncated multivariate polynomial arithmetic over
//! exact rationals. The basis rewrite solves, per weighted degree, the linear
//! system expressing the symmetric expansion in products of elementary
//! symmetric polynomials; the transition matrix between the two bases is
//! invertible, so exact Gaussian elimination recovers the coefficients
//! deterministically.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::Rational;

/// Polynomial in `nvars` variables truncated at total degree `max_deg`.
/// Keys are exponent vectors of length `nvars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct MultiPoly {
    nvars: usize,
    max_deg: u32,
    terms: BTreeMap<Vec<u8>, Rational>,
}

impl MultiPoly {
    pub(crate) fn one(nvars: usize, max_deg: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0u8; nvars], Rational::from_integer(1.into()));
        MultiPoly {
            nvars,
            max_deg,
            terms,
        }
    }

    fn insert_add(&mut self, expo: Vec<u8>, value: Rational) {
        if value.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(expo) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += value;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(value);
            }
        }
    }

    /// Multiplies in place by the univariate series
    /// `sum_k coeffs[k] * t_var^k`, truncating at the total-degree bound.
    pub(crate) fn mul_univariate(&self, var: usize, coeffs: &[Rational]) -> Self {
        let mut out = MultiPoly {
            nvars: self.nvars,
            max_deg: self.max_deg,
            terms: BTreeMap::new(),
        };
        for (expo, c) in &self.terms {
            let total: u32 = expo.iter().map(|&e| e as u32).sum();
            for (k, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if total + k as u32 > self.max_deg {
                    break;
                }
                let mut e2 = expo.clone();
                e2[var] += k as u8;
                out.insert_add(e2, c * a);
            }
        }
        out
    }

    /// Truncated product of two polynomials on the same variable set.
    pub(crate) fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly {
            nvars: self.nvars,
            max_deg: self.max_deg.min(other.max_deg),
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().map(|&e| e as u32).sum();
            for (eb, cb) in &other.terms {
                let db: u32 = eb.iter().map(|&e| e as u32).sum();
                if da + db > out.max_deg {
                    continue;
                }
                let expo: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(expo, ca * cb);
            }
        }
        out
    }

    pub(crate) fn coeff(&self, expo: &[u8]) -> Rational {
        self.terms.get(expo).cloned().unwrap_or_else(Rational::zero)
    }

    /// Exact evaluation at a rational point.
    #[cfg(test)]
    pub(crate) fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (expo, c) in &self.terms {
            let mut term = c.clone();
            for (e, p) in expo.iter().zip(point) {
                for _ in 0..*e {
                    term *= p;
                }
            }
            acc += term;
        }
        acc
    }
}

/// Product over `nvars` formal roots of the series `q(t_i)`, truncated at
/// total degree `max_deg`. `q` is given by its coefficient list in the root
/// variable `t` (constant term first).
pub(crate) fn product_over_roots(q: &[Rational], nvars: usize, max_deg: u32) -> MultiPoly {
    let mut acc = MultiPoly::one(nvars, max_deg);
    for var in 0..nvars {
        acc = acc.mul_univariate(var, q);
    }
    acc
}

/// Elementary symmetric polynomials `e_0 .. e_max` in `nvars` variables,
/// built by the standard one-variable-at-a-time recurrence
/// `e_k(t_1..t_j) = e_k(t_1..t_{j-1}) + t_j e_{k-1}(t_1..t_{j-1})`.
pub(crate) fn elementary_symmetric(nvars: usize, max: u32, max_deg: u32) -> Vec<MultiPoly> {
    let mut table: Vec<MultiPoly> = (0..=max as usize)
        .map(|_| MultiPoly {
            nvars,
            max_deg,
            terms: BTreeMap::new(),
        })
        .collect();
    table[0] = MultiPoly::one(nvars, max_deg);
    let unit = [Rational::zero(), Rational::from_integer(1.into())];
    for var in 0..nvars {
        for k in (1..=max as usize).rev() {
            let bump = table[k - 1].mul_univariate(var, &unit);
            let mut merged = table[k].clone();
            for (expo, c) in bump.terms {
                merged.insert_add(expo, c);
            }
            table[k] = merged;
        }
    }
    table
}

/// All partitions of `d` as descending part lists (e.g. 3 -> [3], [2,1], [1,1,1]).
pub(crate) fn partitions(d: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d.max(1), &mut Vec::new(), &mut out);
    out
}

/// Solves `matrix * x = rhs` exactly. Panics if the system is singular,
/// which cannot happen for basis-transition matrices.
fn solve_exact(mut matrix: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Vec<Rational> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !matrix[r][col].is_zero())
            .expect("transition matrix between symmetric bases is invertible");
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let lead = matrix[col][col].clone();
        for r in 0..n {
            if r == col || matrix[r][col].is_zero() {
                continue;
            }
            let factor = &matrix[r][col] / &lead;
            let pivot_row = matrix[col].clone();
            for (entry, pivot) in matrix[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= &factor * pivot;
            }
            let sub = &factor * &rhs[col];
            rhs[r] -= sub;
        }
    }
    (0..n).map(|i| &rhs[i] / &matrix[i][i]).collect()
}

/// Rewrites the product expansion degree by degree in the elementary
/// symmetric basis. Returns, for each weighted degree `d <= max_deg`, the map
/// partition -> coefficient, where the partition lists the indices of the
/// elementary symmetric factors (so `[2, 1]` stands for `e_2 e_1`).
pub(crate) fn rewrite_in_elementary_basis(
    q: &[Rational],
    nvars: usize,
    max_deg: u32,
) -> Vec<BTreeMap<Vec<u32>, Rational>> {
    let prod = product_over_roots(q, nvars, max_deg);
    let elem = elementary_symmetric(nvars, max_deg, max_deg);
    let mut out = Vec::with_capacity(max_deg as usize + 1);
    for d in 0..=max_deg {
        let parts = partitions(d);
        // Representative monomial for partition lambda: t_0^l0 t_1^l1 ...
        let monomial = |lambda: &[u32]| -> Vec<u8> {
            let mut expo = vec![0u8; nvars];
            for (i, &p) in lambda.iter().enumerate() {
                expo[i] = p as u8;
            }
            expo
        };
        let e_product = |mu: &[u32]| -> MultiPoly {
            let mut acc = MultiPoly::one(nvars, max_deg);
            for &k in mu {
                acc = acc.mul(&elem[k as usize]);
            }
            acc
        };
        let e_polys: Vec<MultiPoly> = parts.iter().map(|mu| e_product(mu)).collect();
        let matrix: Vec<Vec<Rational>> = parts
            .iter()
            .map(|lambda| {
                let expo = monomial(lambda);
                e_polys.iter().map(|ep| ep.coeff(&expo)).collect()
            })
            .collect();
        let rhs: Vec<Rational> = parts.iter().map(|l| prod.coeff(&monomial(l))).collect();
        let solution = solve_exact(matrix, rhs);
        let mut layer = BTreeMap::new();
        for (mu, c) in parts.into_iter().zip(solution) {
            if !c.is_zero() {
                layer.insert(mu, c);
            }
        }
        out.push(layer);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn partitions_of_small_integers() {
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
        assert_eq!(partitions(1), vec![vec![1]]);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(5).len(), 7);
    }

    #[test]
    fn elementary_symmetric_in_three_variables() {
        let e = elementary_symmetric(3, 3, 3);
        // e_2 = t0 t1 + t0 t2 + t1 t2
        assert_eq!(e[2].coeff(&[1, 1, 0]), rat_int(1));
        assert_eq!(e[2].coeff(&[1, 0, 1]), rat_int(1));
        assert_eq!(e[2].coeff(&[0, 1, 1]), rat_int(1));
        assert_eq!(e[2].coeff(&[2, 0, 0]), rat_int(0));
        // e_3 = t0 t1 t2
        assert_eq!(e[3].coeff(&[1, 1, 1]), rat_int(1));
    }

    #[test]
    fn product_over_roots_collects_cross_terms() {
        // q = 1 + t: product over 3 roots = 1 + e1 + e2 + e3.
        let q = [rat_int(1), rat_int(1)];
        let p = product_over_roots(&q, 3, 3);
        assert_eq!(p.coeff(&[0, 0, 0]), rat_int(1));
        assert_eq!(p.coeff(&[1, 0, 0]), rat_int(1));
        assert_eq!(p.coeff(&[1, 1, 0]), rat_int(1));
        assert_eq!(p.coeff(&[1, 1, 1]), rat_int(1));
        assert_eq!(p.coeff(&[2, 0, 0]), rat_int(0));
    }

    #[test]
    fn rewrite_recovers_power_sum_identity() {
        // q = 1 + a t + b t^2 over enough roots: degree-2 layer must be
        // b*(e1^2 - 2 e2) + a^2 e2, i.e. the Newton rewrite of sum t_i^2.
        let a = rat(1, 3);
        let b = rat(-1, 45);
        let q = [rat_int(1), a.clone(), b.clone()];
        let layers = rewrite_in_elementary_basis(&q, 4, 2);
        assert_eq!(layers[0].get(&vec![]), Some(&rat_int(1)));
        assert_eq!(layers[1].get(&vec![1]), Some(&a));
        let e11 = layers[2].get(&vec![1, 1]).cloned().unwrap();
        let e2 = layers[2].get(&vec![2]).cloned().unwrap();
        assert_eq!(e11, b.clone());
        assert_eq!(e2, &a * &a - rat_int(2) * &b);
    }

    #[test]
    fn eval_matches_direct_substitution() {
        let q = [rat_int(1), rat(1, 2), rat(1, 12)];
        let p = product_over_roots(&q, 2, 4);
        let t0 = rat(2, 3);
        let t1 = rat(-1, 5);
        let direct = (rat_int(1) + rat(1, 2) * &t0 + rat(1, 12) * &t0 * &t0)
            * (rat_int(1) + rat(1, 2) * &t1 + rat(1, 12) * &t1 * &t1);
        assert_eq!(p.eval(&[t0, t1]), direct);
    }
}
