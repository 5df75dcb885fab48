//! Sylvester resultants and discriminants.

use super::Poly;
use crate::error::{Error, Result};
use crate::linalg::{det, Mat};
use crate::scalar::Scalar;

/// Sylvester matrix of `p` (degree m) and `q` (degree k): `k` shifted rows
/// of `p` followed by `m` shifted rows of `q`, coefficients highest first.
pub fn sylvester_matrix<S: Scalar>(p: &Poly<S>, q: &Poly<S>) -> Mat<S> {
    let m = p.degree();
    let k = q.degree();
    let size = m + k;
    let pd = p.descending();
    let qd = q.descending();
    let mut rows = Vec::with_capacity(size);
    for i in 0..k {
        let mut r = vec![S::zero(); size];
        for (j, c) in pd.iter().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![S::zero(); size];
        for (j, c) in qd.iter().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    rows
}

/// `det(Sylvester(p, q))`.
pub fn resultant<S: Scalar>(p: &Poly<S>, q: &Poly<S>) -> Result<S> {
    if p.degree() == 0 && q.degree() == 0 {
        return Err(Error::invalid("resultant of two constants"));
    }
    if p.is_zero() || q.is_zero() {
        return Ok(S::zero());
    }
    Ok(det(&sylvester_matrix(p, q)))
}

/// `(-1)^{n(n-1)/2} Res(p, p') / lc(p)`.
pub fn discriminant<S: Scalar>(p: &Poly<S>) -> Result<S> {
    let n = p.degree();
    if n < 2 {
        return Err(Error::invalid("discriminant needs degree >= 2"));
    }
    let r = resultant(p, &p.derivative())? / p.leading();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RationalPoly;
    use crate::scalar::rat_int;

    fn q(desc: &[i64]) -> RationalPoly {
        Poly::from_i64s_descending(desc)
    }

    #[test]
    fn small_resultants() {
        assert_eq!(resultant(&q(&[1, -1]), &q(&[1, -1])).unwrap(), rat_int(0));
        assert_eq!(resultant(&q(&[1, -2]), &q(&[1, -3])).unwrap(), rat_int(-1));
        // (1-2)(1+2)(-1-2)(-1+2) = 9
        assert_eq!(resultant(&q(&[1, 0, -1]), &q(&[1, 0, -4])).unwrap(), rat_int(9));
        assert!(resultant(&q(&[2]), &q(&[3])).is_err());
    }

    #[test]
    fn quadratic_and_cubic_discriminants() {
        for (b, c) in [(3, 1), (-4, 4), (0, 5)] {
            assert_eq!(discriminant(&q(&[1, b, c])).unwrap(), rat_int(b * b - 4 * c));
        }
        for (pp, qq) in [(1, 1), (-3, 2), (2, -7)] {
            assert_eq!(discriminant(&q(&[1, 0, pp, qq])).unwrap(), rat_int(-4 * pp * pp * pp - 27 * qq * qq));
        }
        assert_eq!(discriminant(&q(&[1, -4, 5, -2])).unwrap(), rat_int(0)); // (x-1)^2(x-2)
        assert!(discriminant(&q(&[1, 1])).is_err());
    }
}
