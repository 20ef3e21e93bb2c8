//! Polynomial arithmetic over the prime field GF(p), used to select and
//! verify field moduli. Coefficients are little-endian `u32` digits in [0, p).

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn trim(c: &mut Vec<u32>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

pub fn deg(c: &[u32]) -> Option<usize> {
    if c.is_empty() {
        None
    } else {
        Some(c.len() - 1)
    }
}

pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    assert!(*m.last().unwrap() == 1, "modulus must be monic");
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for i in 0..m.len() {
            let sub = (lead as u64 * m[i] as u64) % p as u64;
            let idx = shift + i;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let bm = monic(&b, p);
        let r = rem(&a, &bm, p);
        a = bm;
        b = r;
    }
    monic(&a, p)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat
    pow_mod(a, p as u64 - 2, p)
}

fn pow_mod(a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1u64;
    let mut base = a as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    r as u32
}

pub fn monic(a: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    trim(&mut a);
    if let Some(&lead) = a.last() {
        if lead != 1 {
            let inv = inv_mod(lead, p);
            for c in a.iter_mut() {
                *c = ((*c as u64 * inv as u64) % p as u64) as u32;
            }
        }
    }
    a
}

/// x^e mod m, with m monic.
pub fn x_pow_mod(e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut base = rem(&[0, 1], m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &base, p), m, p);
        }
        base = rem(&mul(&base, &base, p), m, p);
        e >>= 1;
    }
    result
}

/// Irreducibility via the Rabin test: x^(p^n) ≡ x mod f and
/// gcd(x^(p^(n/q)) - x, f) = 1 for every prime q | n.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = match deg(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let f = monic(f, p);
    let q_end = (p as u64).checked_pow(n as u32);
    let xp = match q_end {
        Some(q) => x_pow_mod(q, &f, p),
        None => return false,
    };
    let mut diff = xp;
    // subtract x
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    for q in factor(n as u64) {
        let e = (p as u64).pow((n as u64 / q) as u32);
        let mut d = x_pow_mod(e, &f, p);
        if d.len() < 2 {
            d.resize(2, 0);
        }
        d[1] = (d[1] + p - 1) % p;
        trim(&mut d);
        if gcd(&d, &f, p).len() != 1 {
            return false;
        }
    }
    true
}

/// True when x generates the unit group of GF(p)[x]/(f), i.e. f is primitive.
pub fn is_primitive(f: &[u32], p: u32) -> bool {
    let n = deg(f).unwrap();
    let order = (p as u64).pow(n as u32) - 1;
    for q in factor(order) {
        let e = order / q;
        let r = x_pow_mod(e, f, p);
        if r == vec![1u32] {
            return false;
        }
    }
    true
}

/// Deterministic search for the smallest monic primitive polynomial of
/// degree n over GF(p), ordering candidates by their packed coefficient value.
pub fn find_primitive_poly(p: u32, n: usize) -> Vec<u32> {
    assert!(n >= 2);
    let bound = (p as u64).pow(n as u32);
    for packed in 0..bound {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut v = packed;
        for _ in 0..n {
            coeffs.push((v % p as u64) as u32);
            v /= p as u64;
        }
        coeffs.push(1);
        if coeffs[0] == 0 {
            continue; // divisible by x
        }
        if is_irreducible(&coeffs, p) && is_primitive(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("a primitive polynomial of every degree exists")
}

/// Smallest primitive root modulo p.
pub fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let order = p as u64 - 1;
    let primes = factor(order);
    'outer: for g in 2..p {
        for &q in &primes {
            if pow_mod(g, order / q, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(7));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }

    #[test]
    fn irreducibility_gf2() {
        // x^2 + x + 1 irreducible, x^2 + 1 = (x+1)^2 not
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 1], 2)); // x^3 + x + 1
    }

    #[test]
    fn primitive_search_gf8() {
        let f = find_primitive_poly(2, 3);
        assert!(is_irreducible(&f, 2) && is_primitive(&f, 2));
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(7), 3);
    }

    #[test]
    fn gcd_of_coprime() {
        // gcd(x^2+x+1, x) = 1 over GF(2)
        let g = gcd(&[1, 1, 1], &[0, 1], 2);
        assert_eq!(g, vec![1]);
    }
}
