use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Number of rational plane curves of degree `d` through `3d - 1` general
/// points, by Kontsevich's recursion from `n_1 = 1`.
pub fn kontsevich_nd(d: u64) -> Result<BigInt> {
    if d == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    let mut n: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for e in 2..=d {
        let mut total = BigInt::zero();
        for d1 in 1..e {
            let d2 = e - d1;
            let a = BigInt::from(d1 * d1 * d2 * d2) * binomial(3 * e - 4, 3 * d1 - 2);
            let b = BigInt::from(d1 * d1 * d1 * d2) * binomial(3 * e - 4, 3 * d1 - 1);
            total += &n[d1 as usize] * &n[d2 as usize] * (a - b);
        }
        n.push(total);
    }
    Ok(n.swap_remove(d as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_degrees() {
        let v: Vec<BigInt> = (1..=4).map(|d| kontsevich_nd(d).unwrap()).collect();
        assert_eq!(v, [1, 1, 12, 620].map(BigInt::from));
        assert!(kontsevich_nd(0).is_err());
    }

    #[test]
    fn positive_through_twelve() {
        for d in 1..=12 {
            assert!(kontsevich_nd(d).unwrap() > BigInt::zero());
        }
    }
}
