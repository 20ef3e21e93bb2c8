//! Univariate polynomials over a `Field`, with Berlekamp-style factorization
//! and matrix minimal polynomials. Used by the module-decomposition code to
//! split along the primary decomposition of an endomorphism.

use rand::Rng;

use crate::ffla::field::{Field, Scalar};
use crate::ffla::matrix::{Echelon, Matrix};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FPoly {
    pub field: Field,
    /// little-endian coefficients, no trailing zeros
    pub coeffs: Vec<Scalar>,
}

impl FPoly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> FPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> FPoly {
        FPoly {
            field,
            coeffs: vec![],
        }
    }

    pub fn one(field: Field) -> FPoly {
        FPoly {
            field,
            coeffs: vec![1],
        }
    }

    pub fn x(field: Field) -> FPoly {
        FPoly {
            field,
            coeffs: vec![0, 1],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn lead(&self) -> Scalar {
        *self.coeffs.last().unwrap()
    }

    pub fn monic(&self) -> FPoly {
        if self.is_zero() || self.lead() == 1 {
            return self.clone();
        }
        let inv = self.field.inv(self.lead());
        let coeffs = self.coeffs.iter().map(|&c| self.field.mul(inv, c)).collect();
        FPoly::new(self.field.clone(), coeffs)
    }

    pub fn add(&self, other: &FPoly) -> FPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u32; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = f.add(a, b);
        }
        FPoly::new(f.clone(), out)
    }

    pub fn sub(&self, other: &FPoly) -> FPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u32; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = f.sub(a, b);
        }
        FPoly::new(f.clone(), out)
    }

    pub fn mul(&self, other: &FPoly) -> FPoly {
        if self.is_zero() || other.is_zero() {
            return FPoly::zero(self.field.clone());
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        FPoly::new(f.clone(), out)
    }

    pub fn divrem(&self, div: &FPoly) -> (FPoly, FPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let f = &self.field;
        let dlead_inv = f.inv(div.lead());
        let mut rem = self.coeffs.clone();
        if rem.len() < div.coeffs.len() {
            return (FPoly::zero(f.clone()), self.clone());
        }
        let qlen = rem.len() - div.coeffs.len() + 1;
        let mut quot = vec![0u32; qlen];
        for k in (0..qlen).rev() {
            let c = f.mul(rem[k + div.coeffs.len() - 1], dlead_inv);
            quot[k] = c;
            if c != 0 {
                for (i, &d) in div.coeffs.iter().enumerate() {
                    rem[k + i] = f.sub(rem[k + i], f.mul(c, d));
                }
            }
        }
        (FPoly::new(f.clone(), quot), FPoly::new(f.clone(), rem))
    }

    pub fn rem(&self, div: &FPoly) -> FPoly {
        self.divrem(div).1
    }

    pub fn gcd(&self, other: &FPoly) -> FPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FPoly {
        let f = &self.field;
        if self.coeffs.len() <= 1 {
            return FPoly::zero(f.clone());
        }
        let p = f.p();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                let k = (i as u32) % p;
                let mut acc = 0u32;
                for _ in 0..k {
                    acc = f.add(acc, c);
                }
                acc
            })
            .collect();
        FPoly::new(f.clone(), coeffs)
    }

    pub fn pow_mod(&self, mut e: u64, m: &FPoly) -> FPoly {
        let mut result = FPoly::one(self.field.clone());
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        result
    }

    /// Evaluates the polynomial at a square matrix.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let f = a.field().clone();
        let n = a.rows();
        let mut acc = Matrix::zero(f.clone(), n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(a);
            if c != 0 {
                let mut ci = Matrix::identity(f.clone(), n).scale(c);
                ci = acc.add(&ci);
                acc = ci;
            }
        }
        acc
    }

    /// q-th root of each coefficient's p-th-power structure: for f(x) = g(x^p)
    /// returns g with coefficients taken to their p-th roots.
    fn pth_root_decimate(&self) -> FPoly {
        let f = &self.field;
        let p = f.p() as usize;
        let q = f.size() as u64;
        // p-th root of c is c^(q/p)
        let e = q / f.p() as u64;
        let coeffs: Vec<Scalar> = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| if c == 0 { 0 } else { f.pow(c, e as i64) })
            .collect();
        FPoly::new(f.clone(), coeffs)
    }

    /// True when the polynomial is a power of a single irreducible factor.
    pub fn is_primary(&self, rng: &mut impl Rng) -> bool {
        self.factor(rng).len() == 1
    }

    /// Full factorization into monic irreducibles with multiplicities.
    /// Randomized (equal-degree splitting) but seeded by the caller.
    pub fn factor(&self, rng: &mut impl Rng) -> Vec<(FPoly, usize)> {
        assert!(!self.is_zero() && self.deg() >= 1);
        let f = self.monic();
        let mut irreducibles: Vec<FPoly> = Vec::new();
        collect_irreducibles(&f, rng, &mut irreducibles);
        irreducibles.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
        irreducibles.dedup();
        // multiplicities by trial division
        let mut out = Vec::with_capacity(irreducibles.len());
        let mut rest = f;
        for irr in irreducibles {
            let mut mult = 0usize;
            loop {
                let (q, r) = rest.divrem(&irr);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            debug_assert!(mult >= 1);
            out.push((irr, mult));
        }
        debug_assert_eq!(rest.deg(), 0);
        out
    }
}

/// Appends every distinct monic irreducible factor of `f` (monic) to `out`,
/// possibly with repeats.
fn collect_irreducibles(f: &FPoly, rng: &mut impl Rng, out: &mut Vec<FPoly>) {
    if f.deg() == 0 {
        return;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = h^p in characteristic p; h shares exactly f's irreducible factors
        let h = f.pth_root_decimate();
        collect_irreducibles(&h.monic(), rng, out);
        return;
    }
    let g = f.gcd(&d);
    let (w, _) = f.divrem(&g);
    let w = w.monic(); // product of the factors of f with multiplicity prime to p
    if w.deg() >= 1 {
        for (dd, prod) in distinct_degree(&w) {
            out.extend(equal_degree(&prod, dd, rng));
        }
    }
    if g.deg() >= 1 {
        collect_irreducibles(&g.monic(), rng, out);
    }
}

/// Distinct-degree factorization of a squarefree monic polynomial: returns
/// (d, product of irreducible factors of degree d).
fn distinct_degree(f: &FPoly) -> Vec<(usize, FPoly)> {
    let field = f.field.clone();
    let q = field.size() as u64;
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = FPoly::x(field.clone());
    let mut d = 0usize;
    while rest.deg() >= 1 {
        d += 1;
        if 2 * d > rest.deg() {
            out.push((rest.deg(), rest.clone()));
            break;
        }
        h = h.pow_mod(q, &rest);
        let diff = h.sub(&FPoly::x(field.clone()));
        let g = rest.gcd(&diff);
        if g.deg() >= 1 {
            out.push((d, g.clone()));
            let (qq, _) = rest.divrem(&g);
            rest = qq.monic();
            h = h.rem(&rest);
        }
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus; trace construction in
/// characteristic 2) of a squarefree product of degree-d irreducibles.
fn equal_degree(f: &FPoly, d: usize, rng: &mut impl Rng) -> Vec<FPoly> {
    let field = f.field.clone();
    if f.deg() == d {
        return vec![f.monic()];
    }
    let q = field.size() as u64;
    loop {
        // random polynomial of degree < deg f
        let coeffs: Vec<Scalar> = (0..f.deg()).map(|_| rng.gen_range(0..field.size())).collect();
        let h = FPoly::new(field.clone(), coeffs);
        if h.is_zero() {
            continue;
        }
        let g0 = f.gcd(&h);
        if g0.deg() >= 1 && g0.deg() < f.deg() {
            let (rest, _) = f.divrem(&g0);
            let mut out = equal_degree(&g0, d, rng);
            out.extend(equal_degree(&rest.monic(), d, rng));
            return out;
        }
        let split = if field.p() == 2 {
            // trace map over GF(2): T(h) = h + h^2 + h^4 + ... (d*n terms)
            let rounds = d as u32 * field.n();
            let mut acc = FPoly::zero(field.clone());
            let mut cur = h.rem(f);
            for _ in 0..rounds {
                acc = acc.add(&cur);
                cur = cur.mul(&cur).rem(f);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - 1) / 2;
            let he = h.pow_mod(e, f);
            he.sub(&FPoly::one(field.clone()))
        };
        if split.is_zero() {
            continue;
        }
        let g = f.gcd(&split);
        if g.deg() >= 1 && g.deg() < f.deg() {
            let (rest, _) = f.divrem(&g);
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&rest.monic(), d, rng));
            return out;
        }
    }
}

/// Minimal polynomial of a square matrix, via Krylov chains with lcm
/// accumulation over start vectors.
pub fn min_poly(a: &Matrix) -> FPoly {
    let field = a.field().clone();
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return FPoly::one(field);
    }
    let mut m = FPoly::one(field.clone());
    let mut seen = Echelon::new(field.clone(), n);
    for start in 0..n {
        let mut v = vec![0u32; n];
        v[start] = 1;
        {
            let mut w = v.clone();
            seen.reduce(&mut w);
            if w.iter().all(|&x| x == 0) {
                continue;
            }
        }
        // Krylov chain with coefficient bookkeeping
        let mut chain = Echelon::new(field.clone(), n);
        let mut vecs: Vec<Vec<Scalar>> = Vec::new();
        let mut cur = v.clone();
        let local = loop {
            if !chain.insert(cur.clone()) {
                // cur is a combination of earlier chain vectors: solve
                let k = vecs.len();
                let mut sys = Matrix::zero(field.clone(), n, k);
                for (j, w) in vecs.iter().enumerate() {
                    for i in 0..n {
                        sys.set(i, j, w[i]);
                    }
                }
                let sol = sys.solve(&cur).unwrap().expect("dependence must be solvable");
                // minimal poly of a on v: x^k - sum sol_j x^j
                let mut coeffs = vec![0u32; k + 1];
                for (j, &c) in sol.iter().enumerate() {
                    coeffs[j] = field.neg(c);
                }
                coeffs[k] = 1;
                break FPoly::new(field.clone(), coeffs);
            }
            vecs.push(cur.clone());
            cur = a.mul_vec(&cur);
        };
        let g = m.gcd(&local);
        let (q, _) = local.divrem(&g);
        m = m.mul(&q);
        for w in vecs {
            seen.insert(w);
        }
        if m.deg() == n {
            break;
        }
    }
    m.monic()
}
