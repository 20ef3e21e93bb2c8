//! GF(p^n) with exact arithmetic.
//!
//! Scalars are `u32` handles: the coefficient vector of the element in the
//! modulus basis, packed little-endian base p. Multiplication goes through
//! exp/log tables built from an explicit multiplicative generator; for small
//! fields an addition table is precomputed as well. The modulus is the
//! smallest monic primitive polynomial of its degree, found by deterministic
//! search, so `x` itself is the generator and scalars print stably as powers
//! `g^k`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffla::gfp;

pub type Scalar = u32;

const MAX_FIELD_SIZE: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u64 = 1 << 11;

#[derive(Debug)]
pub struct FieldInner {
    p: u32,
    n: u32,
    size: u32,
    /// Monic modulus, little-endian coefficients over GF(p), length n+1.
    modulus: Vec<u32>,
    /// Packed representation of the chosen multiplicative generator.
    generator: Scalar,
    /// exp[i] = generator^i for i in [0, 2(size-1)).
    exp: Vec<Scalar>,
    /// log[s] for s != 0; log[0] is a sentinel.
    log: Vec<u32>,
    neg: Vec<Scalar>,
    add: Option<Vec<Scalar>>,
}

/// Cheap-to-clone handle to a finite field.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.n == other.0.n && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl Field {
    /// Builds GF(p^n). Errors on non-prime p, n = 0, or p^n > 2^20.
    pub fn new(p: u32, n: u32) -> Result<Field> {
        Self::with_modulus(p, n, None)
    }

    /// Builds GF(p^n) with an explicit monic modulus (little-endian, length
    /// n+1) overriding the default choice.
    pub fn with_modulus(p: u32, n: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !gfp::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let size = match (p as u64).checked_pow(n) {
            Some(s) if s <= MAX_FIELD_SIZE => s as u32,
            Some(s) => return Err(Error::FieldTooLarge(s)),
            None => return Err(Error::FieldTooLarge(u64::MAX)),
        };

        let modulus = match modulus {
            Some(m) => {
                let m = gfp::monic(&m, p);
                if gfp::deg(&m) != Some(n as usize) || !gfp::is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                m
            }
            None => {
                if n == 1 {
                    let r = gfp::primitive_root(p);
                    vec![(p - r) % p, 1] // x - r
                } else {
                    gfp::find_primitive_poly(p, n as usize)
                }
            }
        };

        let inner = FieldInner::build(p, n, size, modulus)?;
        Ok(Field(Arc::new(inner)))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn n(&self) -> u32 {
        self.0.n
    }
    pub fn size(&self) -> u32 {
        self.0.size
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn generator(&self) -> Scalar {
        self.0.generator
    }
    pub fn zero(&self) -> Scalar {
        0
    }
    pub fn one(&self) -> Scalar {
        1
    }

    pub fn iter(&self) -> impl Iterator<Item = Scalar> {
        0..self.0.size
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        let f = &*self.0;
        if let Some(tab) = &f.add {
            tab[(a as usize) * f.size as usize + b as usize]
        } else if f.p == 2 {
            a ^ b
        } else {
            f.add_slow(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
    }

    #[inline]
    pub fn inv(&self, a: Scalar) -> Scalar {
        debug_assert!(a != 0, "inverse of zero");
        let f = &*self.0;
        let ord = f.size - 1;
        f.exp[((ord - f.log[a as usize]) % ord) as usize]
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Scalar {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Scalar, e: i64) -> Scalar {
        if a == 0 {
            assert!(e > 0, "0^e needs e > 0");
            return 0;
        }
        let f = &*self.0;
        let ord = (f.size - 1) as i64;
        let k = (f.log[a as usize] as i64 * (e % ord)).rem_euclid(ord);
        f.exp[k as usize]
    }

    /// Multiplicative order of a nonzero scalar.
    pub fn order(&self, a: Scalar) -> u64 {
        assert!(a != 0);
        let f = &*self.0;
        let ord = (f.size - 1) as u64;
        let l = f.log[a as usize] as u64;
        ord / num_gcd(ord, l)
    }

    /// generator^((p^n - 1)/m): a scalar of multiplicative order exactly m.
    pub fn root_of_unity(&self, m: u64) -> Result<Scalar> {
        let ord = (self.0.size - 1) as u64;
        if m == 0 || ord % m != 0 {
            return Err(Error::NoRootOfUnity { m, order: ord });
        }
        Ok(self.0.exp[(ord / m) as usize])
    }

    /// Embeds a prime-field digit c in [0, p) as c * 1.
    pub fn from_prime(&self, c: u32) -> Scalar {
        debug_assert!(c < self.0.p);
        c
    }

    /// Coefficients of a scalar in the modulus basis, length n.
    pub fn digits(&self, mut s: Scalar) -> Vec<u32> {
        let f = &*self.0;
        let mut out = Vec::with_capacity(f.n as usize);
        for _ in 0..f.n {
            out.push(s % f.p);
            s /= f.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> Scalar {
        let f = &*self.0;
        let mut s = 0u32;
        for &d in digits.iter().rev() {
            debug_assert!(d < f.p);
            s = s * f.p + d;
        }
        s
    }

    /// Prints a scalar as "0", "1" or "g^k".
    pub fn format_scalar(&self, s: Scalar) -> String {
        if s == 0 {
            "0".into()
        } else if s == 1 {
            "1".into()
        } else {
            format!("g^{}", self.0.log[s as usize])
        }
    }

    /// Parses "0", "1" or "g^k".
    pub fn parse_scalar(&self, tok: &str) -> Option<Scalar> {
        let tok = tok.trim();
        match tok {
            "0" => Some(0),
            "1" => Some(1),
            _ => {
                let k: u64 = tok.strip_prefix("g^")?.parse().ok()?;
                let ord = (self.0.size - 1) as u64;
                Some(self.0.exp[(k % ord) as usize])
            }
        }
    }

    /// Exhaustive field-axiom check; intended for sizes up to 2^10.
    pub fn verify_axioms_exhaustive(&self) -> Result<()> {
        let sz = self.0.size;
        for a in 0..sz {
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return Err(Error::Invariant(format!("inverse fails at {a}")));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(Error::Invariant(format!("negation fails at {a}")));
            }
            for b in 0..sz {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::Invariant("commutativity fails".into()));
                }
                for c in 0..sz {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::Invariant("mul associativity fails".into()));
                    }
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(Error::Invariant("add associativity fails".into()));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(Error::Invariant("distributivity fails".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.n)
    }
}

impl FieldInner {
    fn build(p: u32, n: u32, size: u32, modulus: Vec<u32>) -> Result<FieldInner> {
        // Multiply-by-x in packed form, reducing by the modulus.
        let mul_by_x = |s: Scalar| -> Scalar {
            let mut digits = vec![0u32; n as usize + 1];
            let mut v = s;
            for d in digits.iter_mut().take(n as usize) {
                *d = v % p;
                v /= p;
            }
            digits.rotate_right(1);
            let lead = digits[n as usize];
            if lead != 0 {
                for i in 0..n as usize {
                    digits[i] = (digits[i] + (p - 1) * ((lead * modulus[i]) % p)) % p;
                }
            }
            let mut out = 0u32;
            for i in (0..n as usize).rev() {
                out = out * p + digits[i];
            }
            out
        };

        // Find the generator: try x first (packed p for n >= 2), then other
        // elements, by computing the order of each candidate inside the group
        // generated by x-free polynomial multiplication. We build the powers
        // of a candidate via repeated slow multiplication.
        let slow_mul = |a: Scalar, b: Scalar| -> Scalar {
            // digit convolution + reduction, only used during construction
            let da: Vec<u32> = {
                let mut v = a;
                (0..n).map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                }).collect()
            };
            let mut acc = 0u32;
            // acc = sum_i da[i] * (b * x^i)
            let mut shifted = b;
            let add_packed = |x: Scalar, y: Scalar, times: u32| -> Scalar {
                // x + times*y digit-wise
                let mut mx = x;
                let mut my = y;
                let mut digits = Vec::with_capacity(n as usize);
                for _ in 0..n {
                    digits.push((mx % p + times * (my % p)) % p);
                    mx /= p;
                    my /= p;
                }
                let mut out = 0u32;
                for &d in digits.iter().rev() {
                    out = out * p + d;
                }
                out
            };
            for i in 0..n as usize {
                if da[i] != 0 {
                    acc = add_packed(acc, shifted, da[i]);
                }
                if i + 1 < n as usize {
                    shifted = mul_by_x(shifted);
                }
            }
            acc
        };

        let ord = (size - 1) as u64;
        let prime_factors = gfp::factor(ord);
        let order_of = |g: Scalar| -> u64 {
            let mut o = ord;
            for &q in &prime_factors {
                while o % q == 0 {
                    // g^(o/q) == 1 ?
                    let mut acc = 1u32;
                    let mut base = g;
                    let mut e = o / q;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = slow_mul(acc, base);
                        }
                        base = slow_mul(base, base);
                        e >>= 1;
                    }
                    if acc == 1 {
                        o /= q;
                    } else {
                        break;
                    }
                }
            }
            o
        };

        let x_packed: Scalar = if n == 1 {
            // x ≡ r where modulus is x - r
            (p - modulus[0]) % p
        } else {
            p
        };
        let generator = if order_of(x_packed) == ord {
            x_packed
        } else {
            // Modulus irreducible but not primitive (user override); scan.
            (1..size)
                .find(|&c| order_of(c) == ord)
                .ok_or_else(|| Error::Invariant("no multiplicative generator found".into()))?
        };

        let mut exp = vec![0u32; 2 * ord as usize];
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = 1u32;
        for i in 0..ord as usize {
            exp[i] = cur;
            exp[i + ord as usize] = cur;
            if log[cur as usize] != u32::MAX {
                return Err(Error::Invariant("generator order too small".into()));
            }
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, generator);
        }
        if cur != 1 {
            return Err(Error::Invariant("generator order mismatch".into()));
        }

        let mut neg = vec![0u32; size as usize];
        let negate = |s: Scalar| -> Scalar {
            let mut out = 0u32;
            let mut v = s;
            let mut digits = Vec::with_capacity(n as usize);
            for _ in 0..n {
                digits.push((p - v % p) % p);
                v /= p;
            }
            for &d in digits.iter().rev() {
                out = out * p + d;
            }
            out
        };
        for s in 0..size {
            neg[s as usize] = negate(s);
        }

        let inner_no_add = FieldInner {
            p,
            n,
            size,
            modulus,
            generator,
            exp,
            log,
            neg,
            add: None,
        };

        let add = if (size as u64) <= ADD_TABLE_LIMIT {
            let mut tab = vec![0u32; size as usize * size as usize];
            for a in 0..size {
                for b in 0..size {
                    tab[(a * size + b) as usize] = inner_no_add.add_slow(a, b);
                }
            }
            Some(tab)
        } else {
            None
        };

        Ok(FieldInner { add, ..inner_no_add })
    }

    fn add_slow(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0u32;
        let mut ma = a;
        let mut mb = b;
        let mut digits = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            digits.push((ma % self.p + mb % self.p) % self.p);
            ma /= self.p;
            mb /= self.p;
        }
        for &d in digits.iter().rev() {
            out = out * self.p + d;
        }
        out
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_has_seventh_roots() {
        let f = Field::new(2, 3).unwrap();
        assert_eq!(f.size(), 8);
        let z = f.root_of_unity(7).unwrap();
        assert_eq!(f.order(z), 7);
        assert_ne!(z, 1);
        assert_eq!(f.pow(z, 7), 1);
    }

    #[test]
    fn gf2_prime_field() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn gf64_orders() {
        let f = Field::new(2, 6).unwrap();
        // brute-force order scan of powers of the generator
        let g = f.generator();
        let mut found7 = false;
        let mut found3 = false;
        for k in 0..63u32 {
            let e = f.pow(g, k as i64);
            match f.order(e) {
                7 => found7 = true,
                3 => found3 = true,
                _ => {}
            }
        }
        assert!(found7 && found3);
    }

    #[test]
    fn gf64_cube_root_satisfies_quadratic() {
        let f = Field::new(2, 6).unwrap();
        let w = f.root_of_unity(3).unwrap();
        // w^2 + w + 1 = 0
        let lhs = f.add(f.add(f.mul(w, w), w), 1);
        assert_eq!(lhs, 0);
    }

    #[test]
    fn gf8_has_no_cube_roots() {
        let f = Field::new(2, 3).unwrap();
        assert!(f.root_of_unity(3).is_err());
    }

    #[test]
    fn trivial_root() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.root_of_unity(1).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(Field::new(2, 21).is_err());
    }

    #[test]
    fn axioms_small_fields() {
        for (p, n) in [(2, 1), (2, 3), (3, 2), (5, 1), (7, 1)] {
            Field::new(p, n).unwrap().verify_axioms_exhaustive().unwrap();
        }
    }

    #[test]
    fn scalar_round_trip_format() {
        let f = Field::new(2, 6).unwrap();
        for s in f.iter() {
            let txt = f.format_scalar(s);
            assert_eq!(f.parse_scalar(&txt), Some(s));
        }
    }

    #[test]
    fn generator_order_is_full() {
        for (p, n) in [(2, 3), (2, 6), (3, 4), (5, 2)] {
            let f = Field::new(p, n).unwrap();
            assert_eq!(f.order(f.generator()), (f.size() - 1) as u64);
        }
    }
}
