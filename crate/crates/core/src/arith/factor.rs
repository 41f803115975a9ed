//! Square-part extraction for radicands.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Splits `n = s^2 * d` with `d` squarefree. `n = 0` gives `(0, 0)`.
pub fn square_part(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut d = BigUint::one();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            s *= pb.pow(e / 2);
            if e % 2 == 1 {
                d *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return (s, d);
    }
    // Every remaining prime factor exceeds the trial limit (or rest is prime).
    let mut exps: Vec<(BigUint, u32)> = Vec::new();
    factor_into(&rest, &mut exps);
    for (q, e) in exps {
        s *= q.pow(e / 2);
        if e % 2 == 1 {
            d *= q;
        }
    }
    (s, d)
}

fn factor_into(n: &BigUint, out: &mut Vec<(BigUint, u32)>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(n) {
        match out.iter_mut().find(|(q, _)| q == n) {
            Some(entry) => entry.1 += 1,
            None => out.push((n.clone(), 1)),
        }
        return;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        factor_into(&r, out);
        factor_into(&r, out);
        return;
    }
    let f = pollard_rho(n);
    factor_into(&f, out);
    factor_into(&(n / &f), out);
}

fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    const BASES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    for b in BASES {
        let bb = BigUint::from(b);
        if n == &bb {
            return true;
        }
        if (n % &bb).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let tz = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> tz;
    'witness: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..tz {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of a composite `n` (Brent's variant).
fn pollard_rho(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// Convenience for small inputs.
pub fn square_part_u64(n: u64) -> (u64, u64) {
    let (s, d) = square_part(&BigUint::from(n));
    (
        s.to_u64().expect("fits: s <= n"),
        d.to_u64().expect("fits: d <= n"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(square_part_u64(1), (1, 1));
        assert_eq!(square_part_u64(8), (2, 2));
        assert_eq!(square_part_u64(12), (2, 3));
        assert_eq!(square_part_u64(3), (1, 3));
        assert_eq!(square_part_u64(3600), (60, 1));
        assert_eq!(square_part_u64(2 * 3 * 5 * 7 * 49), (7, 210));
    }

    #[test]
    fn large_prime_factors_beyond_trial_limit() {
        // 1_000_003 and 1_000_033 are primes above the trial-division bound.
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(1_000_033u64);
        let n = &p * &p * &q * 12u32;
        let (s, d) = square_part(&n);
        assert_eq!(s, &p * 2u32);
        assert_eq!(d, &q * 3u32);
        let (s2, d2) = square_part(&(&p * &q));
        assert_eq!(s2, BigUint::one());
        assert_eq!(d2, &p * &q);
    }

    #[test]
    fn brute_force_agreement() {
        for n in 1u64..2000 {
            let (s, d) = square_part_u64(n);
            assert_eq!(s * s * d, n);
            for k in 2..=((d as f64).sqrt() as u64 + 1) {
                assert!(d % (k * k) != 0, "{d} not squarefree");
            }
        }
    }
}
