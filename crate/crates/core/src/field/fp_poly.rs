//! Bare dense polynomials over F_p (`Vec<u64>`, low degree first), used only
//! to select and verify field moduli.

use crate::arith::{inv_mod, mul_mod};

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out: Vec<u64> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Remainder of `a` by nonzero `b`.
fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p).expect("nonzero leading coefficient");
    while r.len() > db {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, p);
        if c != 0 {
            let shift = top - db;
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - mul_mod(c, bj, p)) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn mul_rem(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    rem(&prod, f, p)
}

fn pow_rem(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_rem(&acc, &b, f, p);
        }
        b = mul_rem(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv_mod(lead, p).expect("nonzero");
        for c in x.iter_mut() {
            *c = mul_mod(*c, li, p);
        }
    }
    x
}

/// Irreducibility of a monic `f` over F_p: `x^{p^D} ≡ x (mod f)` and
/// `gcd(x^{p^d} - x, f) = 1` for every proper divisor `d` of `D = deg f`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = rem(&x, f, p);
    for d in 1..=deg {
        h = pow_rem(&h, p, f, p);
        let diff = sub(&h, &x, p);
        if d == deg {
            return diff.is_empty();
        }
        if deg.is_multiple_of(d) && gcd(&diff, f, p).len() != 1 {
            return false;
        }
    }
    unreachable!()
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `index` (coefficient of `x^0` least significant).
pub(crate) fn monic_from_index(mut index: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut f = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        f.push(index % p);
        index /= p;
    }
    f.push(1);
    f
}

/// First monic irreducible of degree `deg` in increasing index order.
pub(crate) fn smallest_irreducible(deg: usize, p: u64) -> Vec<u64> {
    let mut index = 0u64;
    loop {
        let f = monic_from_index(index, deg, p);
        if is_irreducible(&f, p) {
            return f;
        }
        index += 1;
    }
}

/// Evaluate `f` at the point `x` of F_p.
#[cfg(test)]
pub(crate) fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_cubic_over_f2() {
        assert_eq!(smallest_irreducible(3, 2), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(4, 2), vec![1, 1, 0, 0, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(1, 3), vec![0, 1]);
    }

    #[test]
    fn low_degree_irreducibility_matches_root_test() {
        // degrees 2 and 3 are irreducible iff they have no root
        for p in [2u64, 3, 5, 7] {
            for deg in 2..=3usize {
                for idx in 0..p.pow(deg as u32) {
                    let f = monic_from_index(idx, deg, p);
                    let rootless = (0..p).all(|x| eval(&f, x, p) != 0);
                    assert_eq!(is_irreducible(&f, p), rootless, "p={p} f={f:?}");
                }
            }
        }
    }

    #[test]
    fn quartic_count_over_f2() {
        // there are (2^4 - 2^2)/4 = 3 monic irreducible quartics over F_2
        let count = (0..16)
            .filter(|&i| is_irreducible(&monic_from_index(i, 4, 2), 2))
            .count();
        assert_eq!(count, 3);
    }
}
