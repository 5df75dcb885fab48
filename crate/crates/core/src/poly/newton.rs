//! Newton's identities between power sums and coefficients.

use super::Poly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Power sums `s_1..s_m` of the roots of monic `p`, root-free.
pub fn power_sums<S: Scalar>(p: &Poly<S>, m: usize) -> Result<Vec<S>> {
    if !p.is_monic() {
        return Err(Error::invalid("power sums need a monic polynomial"));
    }
    let n = p.degree();
    // c[k] = a_k in x^n + a_1 x^{n-1} + ... + a_n
    let c: Vec<S> = (0..=n).map(|k| p.a(k)).collect();
    let mut s: Vec<S> = Vec::with_capacity(m);
    for k in 1..=m {
        let mut acc = if k <= n { c[k].clone() * S::from_i64(k as i64) } else { S::zero() };
        // i runs to min(k - 1, n)
        for i in 1..k.min(n + 1) {
            acc = acc + c[i].clone() * s[k - i - 1].clone();
        }
        s.push(-acc);
    }
    Ok(s)
}

/// The unique monic degree-`n` polynomial whose first `n` power sums are `s`.
pub fn from_power_sums<S: Scalar>(s: &[S], n: usize) -> Result<Poly<S>> {
    if s.len() < n {
        return Err(Error::invalid(format!("need {n} power sums, got {}", s.len())));
    }
    // elementary symmetric e_k via k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} s_i
    let mut e = vec![S::one()];
    for k in 1..=n {
        let mut acc = S::zero();
        for i in 1..=k {
            let term = e[k - i].clone() * s[i - 1].clone();
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        e.push(acc / S::from_i64(k as i64));
    }
    // a_k = (-1)^k e_k; ascending coefficient of x^{n-k}
    let mut coeffs = vec![S::zero(); n + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[n - k] = if k % 2 == 0 { ek } else { -ek };
    }
    Ok(Poly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalPoly;
    use crate::scalar::{rat_int, Rational};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    /// Direct summation over known integer roots.
    fn direct(roots: &[i64], m: usize) -> Vec<Rational> {
        (1..=m as u32).map(|k| rat_int(roots.iter().map(|r| r.pow(k)).sum())).collect()
    }

    #[test]
    fn sums_of_two_and_three() {
        let p = RationalPoly::from_i64s_descending(&[1, -5, 6]);
        assert_eq!(power_sums(&p, 3).unwrap(), ints(&[5, 13, 35]));
        assert_eq!(direct(&[2, 3], 3), ints(&[5, 13, 35]));
    }

    #[test]
    fn beyond_degree_matches_direct() {
        let roots = [1, -2, 3, 5];
        let p = Poly::from_roots(&ints(&roots));
        assert_eq!(power_sums(&p, 9).unwrap(), direct(&roots, 9));
    }

    #[test]
    fn zero_and_double_roots() {
        let p = RationalPoly::from_i64s_descending(&[1, 0, 0, 0]);
        assert_eq!(power_sums(&p, 5).unwrap(), ints(&[0; 5]));
        let q = RationalPoly::from_i64s_descending(&[1, -2, 1]);
        assert_eq!(power_sums(&q, 2).unwrap(), ints(&[2, 2]));
    }

    #[test]
    fn inverse_identities() {
        assert_eq!(from_power_sums(&ints(&[5, 13, 35]), 2).unwrap(), RationalPoly::from_i64s_descending(&[1, -5, 6]));
        assert_eq!(from_power_sums(&ints(&[0, 0, 0]), 3).unwrap(), RationalPoly::from_i64s_descending(&[1, 0, 0, 0]));
        assert_eq!(from_power_sums(&ints(&[2, 2]), 2).unwrap(), RationalPoly::from_i64s_descending(&[1, -2, 1]));
        assert!(from_power_sums(&ints(&[1]), 2).is_err());
    }

    #[test]
    fn non_monic_rejected() {
        let p = RationalPoly::from_i64s_descending(&[2, 1]);
        assert!(power_sums(&p, 2).is_err());
    }
}
