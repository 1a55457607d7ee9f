//! Small Galois fields GF(p^k), k ≤ 3, as addition and multiplication tables.
//!
//! Elements are coefficient vectors `c_0 + c_1 t + c_2 t^2` encoded base `p`
//! with `c_0` least significant, so `0` and `1` are the field's zero and one
//! and the prime subfield is `0..p`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime power of exponent at most 3")]
    Unsupported(u64),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^k` for prime `p`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: usize,
    degree: u32,
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl GaloisField {
    pub fn new(q: u64) -> Result<Self, GfError> {
        let (p, degree) = prime_power(q).filter(|&(_, k)| k <= 3).ok_or(GfError::Unsupported(q))?;
        let (p, q) = (p as usize, q as usize);
        let modulus = if degree == 1 { vec![0, 1] } else { irreducible(p, degree as usize) };
        let digits = |mut e: usize| -> Vec<usize> {
            (0..degree)
                .map(|_| {
                    let d = e % p;
                    e /= p;
                    d
                })
                .collect()
        };
        let encode = |c: &[usize]| c.iter().rev().fold(0, |acc, &d| acc * p + d);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a + q * b] = encode(&sum);
                mul[a + q * b] = encode(&poly_mul_mod(&da, &db, &modulus, p));
            }
        }
        Ok(GaloisField { p, degree, q, add, mul })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a + self.q * b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a + self.q * b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }
}

/// Product of two polynomials reduced modulo a monic `modulus` of degree
/// `modulus.len() - 1`.
fn poly_mul_mod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0usize; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (deg..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (k, &m) in modulus.iter().enumerate() {
            let idx = top - deg + k;
            prod[idx] = (prod[idx] + p * p - c * m % p) % p;
        }
    }
    prod.truncate(deg);
    prod.resize(deg, 0);
    prod
}

/// Least monic irreducible polynomial of degree 2 or 3 over F_p (no roots
/// suffices at these degrees). Coefficients low to high.
fn irreducible(p: usize, degree: usize) -> Vec<usize> {
    let eval = |c: &[usize], x: usize| c.iter().rev().fold(0, |acc, &d| (acc * x + d) % p);
    for code in 0..p.pow(degree as u32) {
        let mut c: Vec<usize> = (0..degree).map(|i| (code / p.pow(i as u32)) % p).collect();
        c.push(1);
        if (0..p).all(|x| eval(&c, x) != 0) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = GaloisField::new(q).unwrap();
            let n = f.order();
            for a in 0..n {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert!((1..n).any(|b| f.mul(a, b) == 1), "q={q} a={a} has no inverse");
                }
                for b in 0..n {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..n {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_orders() {
        assert!(GaloisField::new(6).is_err());
        assert!(GaloisField::new(16).is_err());
        assert!(GaloisField::new(1).is_err());
        assert_eq!(prime_power(9), Some((3, 2)));
        assert!(is_prime(257));
        assert!(!is_prime(1));
    }
}
