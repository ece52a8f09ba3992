//! Exact integer and rational arithmetic: extended Euclid, Hirzebruch-Jung
//! continued fractions, lcm, and the multi-variable Bezout solver used to
//! force Chern-class primitivity.
//!
//! Everything here is exact. No floating point appears anywhere in the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision exact fraction, always stored in lowest terms with a
/// positive denominator (`num_rational` maintains both invariants).
pub type Rational = num_rational::BigRational;

/// Rational from machine-integer numerator and denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Extended Euclidean algorithm: returns `(g, x, y)` with
/// `g = gcd(a, b) >= 1` and `a*x + b*y = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidArgument(
            "ext_gcd(0, 0) is undefined".into(),
        ));
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut x0, mut x1) = (BigInt::one(), BigInt::zero());
    let (mut y0, mut y1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let x2 = &x0 - &q * &x1;
        x0 = std::mem::replace(&mut x1, x2);
        let y2 = &y0 - &q * &y1;
        y0 = std::mem::replace(&mut y1, y2);
    }
    if r0.is_negative() {
        r0 = -r0;
        x0 = -x0;
        y0 = -y0;
    }
    Ok((r0, x0, y0))
}

/// Inverse of `a` modulo `m`, normalized into `(0, m)`. `None` when
/// `gcd(a, m) != 1`.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m <= 1 {
        return None;
    }
    let (g, x, _) = ext_gcd(&BigInt::from(a), &BigInt::from(m)).ok()?;
    if !g.is_one() {
        return None;
    }
    let m_big = BigInt::from(m);
    let inv = ((x % &m_big) + &m_big) % &m_big;
    i64::try_from(inv).ok()
}

/// A Hirzebruch-Jung continued fraction `m/r = [b_1, ..., b_l]` with every
/// entry `b_i >= 2`. The entries are the negated self-intersections of the
/// exceptional chain resolving the cyclic quotient singularity of type
/// `(m, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HjFraction {
    pub m: i64,
    pub r: i64,
    pub entries: Vec<i64>,
}

fn check_hj_pair(m: i64, r: i64) -> Result<()> {
    if m < 2 || r <= 0 || r >= m {
        return Err(Error::InvalidArgument(format!(
            "HJ expansion needs 0 < r < m, got (m, r) = ({m}, {r})"
        )));
    }
    if r.gcd(&m) != 1 {
        return Err(Error::InvalidArgument(format!(
            "HJ expansion needs gcd(m, r) = 1, got gcd({m}, {r}) = {}",
            m.gcd(&r)
        )));
    }
    Ok(())
}

/// Expand `m/r` into its unique HJ continued fraction with all entries >= 2,
/// via the ceiling recursion `b = ceil(m/r)`, next pair `(r, b*r - m)`.
pub fn hj_expand(m: i64, r: i64) -> Result<HjFraction> {
    check_hj_pair(m, r)?;
    let (orig_m, orig_r) = (m, r);
    let (mut m, mut r) = (m as i128, r as i128);
    let mut entries = Vec::new();
    while r > 0 {
        let b = (m + r - 1) / r; // ceil(m/r)
        entries.push(b as i64);
        let next_r = b * r - m;
        m = r;
        r = next_r;
    }
    Ok(HjFraction {
        m: orig_m,
        r: orig_r,
        entries,
    })
}

/// Evaluate `[b_1, ..., b_l] = b_1 - 1/(b_2 - 1/(...))` exactly, returning
/// the coprime pair `(m, r)` with `m/r` equal to the fraction. Exact inverse
/// of [`hj_expand`].
pub fn hj_value(entries: &[i64]) -> Result<(i64, i64)> {
    if entries.is_empty() {
        return Err(Error::InvalidArgument("empty HJ entry list".into()));
    }
    if let Some(&bad) = entries.iter().find(|&&b| b < 2) {
        return Err(Error::InvalidArgument(format!(
            "HJ entries must be >= 2 (chains contain no (-1)-curves), got {bad}"
        )));
    }
    // Fold from the right: [b, rest] = b - r/m = (b*m - r)/m.
    let mut p: i128 = 0;
    let mut q: i128 = 1;
    for &b in entries.iter().rev() {
        let next = (b as i128)
            .checked_mul(q)
            .and_then(|bq| bq.checked_sub(p))
            .ok_or_else(|| Error::InvalidArgument("HJ value overflow".into()))?;
        p = q;
        q = next;
    }
    let (m, r) = (q, p);
    let m = i64::try_from(m)
        .map_err(|_| Error::InvalidArgument("HJ value exceeds i64".into()))?;
    let r = i64::try_from(r)
        .map_err(|_| Error::InvalidArgument("HJ value exceeds i64".into()))?;
    debug_assert!(entries.len() == 1 || (0 < r && r < m));
    Ok((m, if entries.len() == 1 { 1 } else { r }))
}

/// Residue of the reversed chain: expands `m/r`, reverses the entry list and
/// re-evaluates. Used for curves meeting the tail `E_l` of a chain. Satisfies
/// `r * hj_reverse_residue(m, r) == 1 (mod m)`.
pub fn hj_reverse_residue(m: i64, r: i64) -> Result<i64> {
    let expansion = hj_expand(m, r)?;
    let reversed: Vec<i64> = expansion.entries.iter().rev().copied().collect();
    let (m_back, r_rev) = hj_value(&reversed)?;
    debug_assert_eq!(m_back, m);
    Ok(r_rev)
}

/// Exact lcm of a non-empty list of positive integers.
pub fn lcm_list(values: &[i64]) -> Result<BigInt> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("lcm of empty list".into()));
    }
    let mut acc = BigInt::one();
    for &v in values {
        if v <= 0 {
            return Err(Error::InvalidArgument(format!(
                "lcm needs positive integers, got {v}"
            )));
        }
        acc = acc.lcm(&BigInt::from(v));
    }
    Ok(acc)
}

/// Solution of a ranged Bezout system, see [`solve_bezout_product`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutSolution {
    /// One value per modulus, normalized into `0 < b_j < m_j`.
    pub b: Vec<i64>,
    /// Free integer multiplying `mu`.
    pub q: BigInt,
}

/// Solve `sum_j c_j * b_j + mu * q = 1` with `0 < b_j < m_j` for every `j`.
///
/// The normalization into range shifts each `b_j` by multiples of `m_j`,
/// compensating through `q`; this requires `mu | c_j * m_j`, which holds for
/// every system assembled in this crate (each `c_j` is `mu / m_j` times an
/// integer expansion coefficient). `gcd(b_j, m_j) = 1` then follows by
/// reducing the identity mod any common divisor; it is re-checked on every
/// returned solution.
pub fn solve_bezout_product(
    coeffs: &[BigInt],
    moduli: &[i64],
    mu: &BigInt,
) -> Result<BezoutSolution> {
    if coeffs.len() != moduli.len() {
        return Err(Error::InvalidArgument(format!(
            "coefficient/modulus length mismatch: {} vs {}",
            coeffs.len(),
            moduli.len()
        )));
    }
    if mu.sign() != num_bigint::Sign::Plus {
        return Err(Error::InvalidArgument("mu must be positive".into()));
    }
    for &m in moduli {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "modulus must exceed 1, got {m}"
            )));
        }
    }

    // Cheap gcd obstruction first: search mode skips bad parameters here.
    let mut joint = mu.clone();
    for c in coeffs {
        joint = joint.gcd(c);
    }
    if !joint.is_one() {
        return Err(Error::Unsolvable(format!(
            "joint gcd of Bezout coefficients is {joint}, not 1"
        )));
    }

    for (c, &m) in coeffs.iter().zip(moduli) {
        if !(c * BigInt::from(m) % mu).is_zero() {
            return Err(Error::InvalidArgument(format!(
                "range normalization needs mu | c_j * m_j, violated by c_j = {c}, m_j = {m}"
            )));
        }
    }

    // Iterated two-variable extended Euclid over [c_1, ..., c_k, mu].
    let mut g = BigInt::zero();
    let mut weights: Vec<BigInt> = Vec::with_capacity(coeffs.len() + 1);
    for c in coeffs.iter().chain(std::iter::once(mu)) {
        if g.is_zero() && c.is_zero() {
            weights.push(BigInt::zero());
            continue;
        }
        let (g_new, u, v) = ext_gcd(&g, c)?;
        for w in weights.iter_mut() {
            *w *= &u;
        }
        weights.push(v);
        g = g_new;
    }
    if !g.is_one() {
        return Err(Error::Unsolvable(format!(
            "joint gcd of Bezout coefficients is {g}, not 1"
        )));
    }

    let q_raw = weights.pop().expect("mu weight present");
    let mut q = q_raw;
    let mut b = Vec::with_capacity(coeffs.len());
    for ((raw, c), &m) in weights.into_iter().zip(coeffs).zip(moduli) {
        let m_big = BigInt::from(m);
        let reduced = ((&raw % &m_big) + &m_big) % &m_big;
        // c_j * (raw - reduced) = t * c_j * m_j = t * s_j * mu folds into q.
        let shift = (&raw - &reduced) / &m_big;
        q += shift * (c * &m_big / mu);
        let b_j = i64::try_from(reduced).expect("reduced residue fits i64");
        if b_j == 0 {
            return Err(Error::Unsolvable(format!(
                "normalized b_j = 0 for modulus {m}; system lacks the product structure"
            )));
        }
        if b_j.gcd(&m) != 1 {
            return Err(Error::Unsolvable(format!(
                "normalized b_j = {b_j} shares a factor with modulus {m}"
            )));
        }
        b.push(b_j);
    }

    // Exact verification of the identity.
    let mut total = mu * &q;
    for (c, &b_j) in coeffs.iter().zip(&b) {
        total += c * BigInt::from(b_j);
    }
    if !total.is_one() {
        return Err(Error::Unsolvable(format!(
            "internal: Bezout identity check failed, got {total}"
        )));
    }
    Ok(BezoutSolution { b, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ext_gcd_identity_case() {
        let (g, x, y) = ext_gcd(&BigInt::from(1), &BigInt::from(0)).unwrap();
        assert_eq!((g, x, y), (BigInt::from(1), BigInt::from(1), BigInt::from(0)));
    }

    #[test]
    fn ext_gcd_coprime_pair() {
        let (a, b) = (BigInt::from(6), BigInt::from(35));
        let (g, x, y) = ext_gcd(&a, &b).unwrap();
        assert_eq!(g, BigInt::one());
        assert_eq!(&a * &x + &b * &y, BigInt::one());
    }

    #[test]
    fn ext_gcd_common_factor() {
        let (g, _, _) = ext_gcd(&BigInt::from(4), &BigInt::from(6)).unwrap();
        assert_eq!(g, BigInt::from(2));
    }

    #[test]
    fn ext_gcd_rejects_double_zero() {
        assert!(ext_gcd(&BigInt::zero(), &BigInt::zero()).is_err());
    }

    #[test]
    fn hj_expand_two_minus_two_chain() {
        assert_eq!(hj_expand(3, 2).unwrap().entries, vec![2, 2]);
    }

    #[test]
    fn hj_expand_single_curve() {
        for m in 2..12 {
            assert_eq!(hj_expand(m, 1).unwrap().entries, vec![m]);
        }
    }

    #[test]
    fn hj_expand_elliptic_chain_shape() {
        // d/n = [N, 2, ..., 2] with n-1 twos, d = (N-1)n + 1.
        assert_eq!(hj_expand(5, 2).unwrap().entries, vec![3, 2]);
        for big_n in 2..8 {
            for n in 1..20 {
                let d = (big_n - 1) * n + 1;
                let exp = hj_expand(d, n).unwrap();
                let mut want = vec![big_n];
                want.extend(std::iter::repeat(2).take((n - 1) as usize));
                assert_eq!(exp.entries, want, "N={big_n}, n={n}");
            }
        }
    }

    #[test]
    fn hj_expand_rejects_bad_pairs() {
        assert!(hj_expand(4, 2).is_err());
        assert!(hj_expand(5, 0).is_err());
        assert!(hj_expand(5, 5).is_err());
        assert!(hj_expand(5, 7).is_err());
    }

    #[test]
    fn hj_value_examples() {
        assert_eq!(hj_value(&[2, 2]).unwrap(), (3, 2));
        assert_eq!(hj_value(&[7]).unwrap(), (7, 1));
        // 3 - 1/(2 - 1/3) = 3 - 3/5 = 12/5, evaluated by hand.
        assert_eq!(hj_value(&[3, 2, 3]).unwrap(), (12, 5));
        assert!(hj_value(&[]).is_err());
        assert!(hj_value(&[2, 1, 2]).is_err());
    }

    #[test]
    fn hj_round_trip_small() {
        for m in 2..=60 {
            for r in 1..m {
                if r.gcd(&m) != 1 {
                    continue;
                }
                let exp = hj_expand(m, r).unwrap();
                assert!(exp.entries.iter().all(|&b| b >= 2));
                assert_eq!(hj_value(&exp.entries).unwrap(), (m, r));
            }
        }
    }

    #[test]
    fn reverse_residue_examples() {
        assert_eq!(hj_reverse_residue(5, 2).unwrap(), 3);
        assert_eq!(hj_reverse_residue(7, 1).unwrap(), 1);
        assert_eq!(hj_reverse_residue(12, 5).unwrap(), 5); // palindromic chain
    }

    #[test]
    fn reverse_residue_is_modular_inverse() {
        for m in 2..=60 {
            for r in 1..m {
                if r.gcd(&m) != 1 {
                    continue;
                }
                let r_rev = hj_reverse_residue(m, r).unwrap();
                assert_eq!((r as i128 * r_rev as i128).rem_euclid(m as i128), 1);
            }
        }
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_list(&[2, 3, 5]).unwrap(), BigInt::from(30));
        assert_eq!(lcm_list(&[7]).unwrap(), BigInt::from(7));
        assert!(lcm_list(&[]).is_err());
        assert!(lcm_list(&[0]).is_err());
    }

    #[test]
    fn bezout_trivial() {
        let sol =
            solve_bezout_product(&[BigInt::one()], &[2], &BigInt::from(2)).unwrap();
        assert_eq!(sol.b, vec![1]);
        assert_eq!(sol.q, BigInt::zero());
    }

    #[test]
    fn bezout_hirzebruch_instance() {
        // F_1 family, m = beta = 2, m_i = (3, 5):
        // 45 b + 10 b1 + 6 b2 + 30 q = 1, verified against brute force below.
        let coeffs = [BigInt::from(45), BigInt::from(10), BigInt::from(6)];
        let moduli = [2, 3, 5];
        let mu = BigInt::from(30);
        let sol = solve_bezout_product(&coeffs, &moduli, &mu).unwrap();
        let total: BigInt = coeffs
            .iter()
            .zip(&sol.b)
            .map(|(c, &b)| c * BigInt::from(b))
            .sum::<BigInt>()
            + &mu * &sol.q;
        assert_eq!(total, BigInt::one());

        // Brute-force oracle over the stated ranges.
        let mut found = Vec::new();
        for b in 1..2i64 {
            for b1 in 1..3i64 {
                for b2 in 1..5i64 {
                    for q in -50..=50i64 {
                        if 45 * b + 10 * b1 + 6 * b2 + 30 * q == 1 {
                            found.push((b, b1, b2, q));
                        }
                    }
                }
            }
        }
        assert!(found.contains(&(
            sol.b[0],
            sol.b[1],
            sol.b[2],
            i64::try_from(sol.q.clone()).unwrap()
        )));
    }

    #[test]
    fn bezout_parity_obstruction() {
        let coeffs = [BigInt::from(4), BigInt::from(6)];
        let err = solve_bezout_product(&coeffs, &[2, 3], &BigInt::from(12));
        match err {
            Err(Error::Unsolvable(msg)) => assert!(msg.contains("2")),
            other => panic!("expected Unsolvable, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn rational_field_axioms(
            (an, ad) in (-50i64..50, 1i64..20),
            (bn, bd) in (-50i64..50, 1i64..20),
            (cn, cd) in (-50i64..50, 1i64..20),
        ) {
            let a = rat(an, ad);
            let b = rat(bn, bd);
            let c = rat(cn, cd);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            if !b.is_integer() || b != rat_int(0) {
                prop_assert_eq!(&a + &b - &b, a.clone());
            }
        }

        #[test]
        fn lcm_of_coprime_triple_is_product(idx in proptest::collection::vec(0usize..8, 3)) {
            let primes = [2i64, 3, 5, 7, 11, 13, 17, 19];
            let picks: Vec<i64> = idx.iter().map(|&i| primes[i]).collect();
            if picks[0] != picks[1] && picks[1] != picks[2] && picks[0] != picks[2] {
                let product: i64 = picks.iter().product();
                prop_assert_eq!(lcm_list(&picks).unwrap(), BigInt::from(product));
            }
        }

        #[test]
        fn hj_round_trip_random(m in 2i64..200, k in 1i64..200) {
            let r = 1 + k % (m - 1);
            if r.gcd(&m) == 1 {
                let exp = hj_expand(m, r).unwrap();
                prop_assert!(exp.entries.iter().all(|&b| b >= 2));
                prop_assert_eq!(hj_value(&exp.entries).unwrap(), (m, r));
            }
        }
    }
}
