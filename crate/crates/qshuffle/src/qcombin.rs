//! q-combinatorics for the (p,1) specialization.
//!
//! Conventions: q = zeta^2 for zeta a fixed primitive 4p-th root of unity,
//! so q = exp(i pi / p), q^p = -1, and half-integer powers q^(k/2) = zeta^k
//! stay inside Q(zeta_{4p}).  The q-integer is the division-free sum
//! [n] = 1 + q^2 + ... + q^(2(n-1)), which vanishes at n = p.

use num::bigint::BigInt;
use num::Zero;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

/// Integer power of q inside Q(zeta_{4p}).
pub fn q_pow(p: u64, k: i64) -> Cyclotomic {
    Cyclotomic::zeta_pow(4 * p, 2 * k)
}

/// Half-integer power q^(k/2) = zeta^k.
pub fn q_half_pow(p: u64, k: i64) -> Cyclotomic {
    Cyclotomic::zeta_pow(4 * p, k)
}

/// The q-integer [n] = sum_{a=0}^{n-1} q^(2a), evaluated in Q(zeta_{4p}).
pub fn q_int(n: u64, p: u64) -> Cyclotomic {
    let mut acc = Cyclotomic::zero(4 * p);
    for a in 0..n {
        acc = acc.add(&q_pow(p, 2 * a as i64));
    }
    acc
}

/// The q-factorial [n]! = [1][2]...[n].
pub fn q_fac(n: u64, p: u64) -> Cyclotomic {
    let mut acc = Cyclotomic::one(4 * p);
    for k in 1..=n {
        acc = acc.mul(&q_int(k, p));
    }
    acc
}

/// Gaussian binomial coefficient as an integer polynomial in v = q^2,
/// lowest degree first, built from the Pascal recursion
/// C(r,s) = C(r-1,s-1) + v^s C(r-1,s).  Division-free by construction.
pub fn gaussian_binomial_poly(r: u64, s: u64) -> Result<Vec<BigInt>> {
    if s > r {
        return Err(Error::InvalidArgument(format!(
            "binomial lower index {s} exceeds upper index {r}"
        )));
    }
    let r = r as usize;
    let s = s as usize;
    // row[k] = C(n, k) as polynomial in v, for the current n.
    let mut row: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
    for _n in 1..=r {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(vec![BigInt::from(1)]);
        for k in 1..row.len() {
            // C(n-1, k-1) + v^k * C(n-1, k)
            let a = &row[k - 1];
            let b = &row[k];
            let mut out = vec![BigInt::zero(); (b.len() + k).max(a.len())];
            for (i, c) in a.iter().enumerate() {
                out[i] += c;
            }
            for (i, c) in b.iter().enumerate() {
                out[i + k] += c;
            }
            next.push(out);
        }
        next.push(vec![BigInt::from(1)]);
        row = next;
    }
    Ok(row[s].clone())
}

/// The Gaussian binomial evaluated at v = q^2 inside Q(zeta_{4p}).
///
/// Never divides by factorials, so the specialization [p] = 0 is safe.
pub fn q_binom(r: u64, s: u64, p: u64) -> Result<Cyclotomic> {
    let poly = gaussian_binomial_poly(r, s)?;
    let v = q_pow(p, 2);
    let mut acc = Cyclotomic::zero(4 * p);
    let mut vk = Cyclotomic::one(4 * p);
    for c in &poly {
        if !c.is_zero() {
            acc = acc.add(&vk.scale(&num::BigRational::from(c.clone())));
        }
        vk = vk.mul(&v);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_int_basics() {
        for p in [2u64, 3, 5] {
            assert!(q_int(0, p).is_zero());
            assert!(q_int(1, p).is_one());
            assert!(q_int(p, p).is_zero(), "[p] = 0 at p={p}");
        }
    }

    #[test]
    fn q_binom_3_1_at_p_3() {
        // Symbolic oracle: C(3,1)_v = 1 + v + v^2; at v = q^2 with
        // q = exp(i pi / 3) this is 1 + q^2 + q^4, reduced mod Phi_12.
        let p = 3;
        let got = q_binom(3, 1, p).unwrap();
        let expect = Cyclotomic::one(4 * p)
            .add(&q_pow(p, 2))
            .add(&q_pow(p, 4));
        assert_eq!(got, expect);
        let poly = gaussian_binomial_poly(3, 1).unwrap();
        assert_eq!(poly, vec![1, 1, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn q_binom_p_1_vanishes() {
        for p in [2u64, 3, 5] {
            assert!(q_binom(p, 1, p).unwrap().is_zero());
        }
    }

    #[test]
    fn lower_index_above_upper_errors() {
        assert!(q_binom(2, 3, 3).is_err());
    }

    #[test]
    fn pascal_identity() {
        // C(r,s) = C(r-1,s-1) + q^(2s) C(r-1,s) wherever defined.
        for p in [2u64, 3, 5] {
            for r in 1..=(2 * p).min(8) {
                for s in 1..r {
                    let lhs = q_binom(r, s, p).unwrap();
                    let rhs = q_binom(r - 1, s - 1, p)
                        .unwrap()
                        .add(&q_pow(p, 2 * s as i64).mul(&q_binom(r - 1, s, p).unwrap()));
                    assert_eq!(lhs, rhs, "pascal fails at p={p} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn vanishing_matches_symbolic_oracle() {
        // q_binom(r,s) = 0 exactly when the Gaussian polynomial in v is
        // divisible by Phi_p(v), since v = q^2 is a primitive p-th root.
        use crate::cyclotomic::cyclotomic_polynomial;
        for p in [2u64, 3, 5] {
            let phi_p: Vec<num::BigRational> = cyclotomic_polynomial(p)
                .into_iter()
                .map(num::BigRational::from)
                .collect();
            for r in 0..=2 * p {
                for s in 0..=r {
                    let value = q_binom(r, s, p).unwrap();
                    let poly: Vec<num::BigRational> = gaussian_binomial_poly(r, s)
                        .unwrap()
                        .into_iter()
                        .map(num::BigRational::from)
                        .collect();
                    let rem = poly_rem(&poly, &phi_p);
                    let divisible = rem.iter().all(|c| c.is_zero());
                    assert_eq!(
                        value.is_zero(),
                        divisible,
                        "vanishing mismatch at p={p} r={r} s={s}"
                    );
                }
            }
        }
    }

    fn poly_rem(num: &[num::BigRational], den: &[num::BigRational]) -> Vec<num::BigRational> {
        let mut rem = num.to_vec();
        let dlead = den.last().unwrap().clone();
        while rem.len() >= den.len() {
            let k = rem.len() - den.len();
            let coef = rem.last().unwrap() / &dlead;
            for (i, d) in den.iter().enumerate() {
                let t = &coef * d;
                rem[k + i] -= t;
            }
            while rem.len() > 1 && rem.last().unwrap().is_zero() {
                rem.pop();
            }
            if rem.len() < den.len() {
                break;
            }
            if rem.iter().all(|c| c.is_zero()) {
                break;
            }
        }
        rem
    }

    #[test]
    fn factorial_vs_binomial_product_where_nonsingular() {
        // For r + s < p no cancellation is needed and
        // [r+s]! = C(r+s, r) [r]! [s]!.
        for p in [3u64, 5] {
            for r in 0..p {
                for s in 0..(p - r) {
                    let lhs = q_fac(r + s, p);
                    let rhs = q_binom(r + s, r, p)
                        .unwrap()
                        .mul(&q_fac(r, p))
                        .mul(&q_fac(s, p));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
