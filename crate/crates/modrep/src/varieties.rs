//! Rank-variety lines for an elementary abelian p-subgroup E of rank r:
//! a point α = (α₁, …, α_r) over k defines the shifted unit
//! u_α = 1 + Σ αᵢ(xᵢ − 1), whose nilpotent part measures freeness of a
//! module over the cyclic shifted subgroup. Also here: the action of the
//! normalizer on lines, the character cut out by a stable line, the
//! χ-equivariant lift of u_α − 1 inside kE, and the cyclic quotient modules
//! it generates.

use crate::error::{Error, Result};
use crate::ffla::{Echelon, Field, Matrix, Scalar};
use crate::groups::{ElementaryAbelian, Group, Subgroup};
use crate::rep::Module;

/// A line in k^r: coordinates normalized so the first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    coords: Vec<Scalar>,
}

impl Line {
    pub fn new(field: &Field, coords: Vec<Scalar>) -> Result<Line> {
        let lead = coords.iter().position(|&c| c != 0).ok_or(Error::ZeroLine)?;
        let inv = field.inv(coords[lead]);
        let coords = coords.iter().map(|&c| field.mul(inv, c)).collect();
        Ok(Line { coords })
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// True when the coordinates are linearly independent over the prime
    /// field, i.e. no proper subgroup of E supports the line.
    pub fn fp_independent(&self, field: &Field) -> bool {
        let n = field.n() as usize;
        let mut ech = Echelon::new(
            Field::new(field.p(), 1).expect("the characteristic is prime"),
            n,
        );
        for &c in &self.coords {
            let digits: Vec<Scalar> = field.digits(c);
            if !ech.insert(digits) {
                return false;
            }
        }
        true
    }

    pub fn require_fp_independent(&self, field: &Field) -> Result<()> {
        if self.fp_independent(field) {
            Ok(())
        } else {
            Err(Error::FpDependentLine)
        }
    }
}

/// The conjugation matrix of g on E, with entries embedded into k.
pub fn conj_matrix_over(field: &Field, e: &ElementaryAbelian, g: usize) -> Result<Matrix> {
    let rows = e.conj_matrix(g)?;
    let r = rows.len();
    Ok(Matrix::from_fn(field.clone(), r, r, |i, j| rows[i][j]))
}

/// The image of a line under conjugation by g: the line through M(g)·α.
pub fn line_image(field: &Field, e: &ElementaryAbelian, g: usize, line: &Line) -> Result<Line> {
    let m = conj_matrix_over(field, e, g)?;
    Line::new(field, m.mul_vec(line.coords()))
}

/// The value χ(g) with M(g)·α = χ(g)·α; errors when g moves the line.
pub fn chi_value(field: &Field, e: &ElementaryAbelian, g: usize, line: &Line) -> Result<Scalar> {
    let m = conj_matrix_over(field, e, g)?;
    let img = m.mul_vec(line.coords());
    let lead = line
        .coords()
        .iter()
        .position(|&c| c != 0)
        .expect("lines are nonzero");
    let lambda = field.div(img[lead], line.coords()[lead]);
    for (a, b) in img.iter().zip(line.coords()) {
        if *a != field.mul(lambda, *b) {
            return Err(Error::UnstableLine);
        }
    }
    Ok(lambda)
}

/// The orbit of a line under the normalizer of E.
pub fn line_orbit(field: &Field, e: &ElementaryAbelian, line: &Line) -> Result<Vec<Line>> {
    let big = e.sub.ambient();
    let norm = big.normalizer_set(e.sub.elements());
    let mut orbit: Vec<Line> = Vec::new();
    for g in norm {
        let img = line_image(field, e, g, line)?;
        if !orbit.contains(&img) {
            orbit.push(img);
        }
    }
    Ok(orbit)
}

/// The stabilizer of a line inside the full group: elements that normalize E
/// and fix the line.
pub fn line_stabilizer(field: &Field, e: &ElementaryAbelian, line: &Line) -> Result<Subgroup> {
    let big = e.sub.ambient();
    let norm = big.normalizer_set(e.sub.elements());
    let mut stab = Vec::new();
    for g in norm {
        if line_image(field, e, g, line)? == *line {
            stab.push(g);
        }
    }
    Subgroup::from_elements(big, &stab)
}

/// The nilpotent part Σ αᵢ(ρ(xᵢ) − 1) of the shifted unit, on any module of
/// the ambient group of E.
pub fn nilpotent_part(m: &Module, e: &ElementaryAbelian, line: &Line) -> Matrix {
    let d = m.dim();
    let f = m.field().clone();
    let id = Matrix::identity(f, d);
    let mut acc = Matrix::zero(m.field().clone(), d, d);
    for (&x, &a) in e.basis.iter().zip(line.coords()) {
        if a != 0 {
            acc = acc.add(&m.mat(x).sub(&id).scale(a));
        }
    }
    acc
}

/// The shifted unit u_α = 1 + Σ αᵢ(ρ(xᵢ) − 1) itself.
pub fn shifted_unit(m: &Module, e: &ElementaryAbelian, line: &Line) -> Matrix {
    let id = Matrix::identity(m.field().clone(), m.dim());
    id.add(&nilpotent_part(m, e, line))
}

/// Freeness over the cyclic shifted subgroup: every Jordan block of the
/// nilpotent operator has full size p.
pub fn is_free_nilpotent(a: &Matrix, p: u32) -> bool {
    let d = a.rows();
    if d % p as usize != 0 {
        return false;
    }
    a.pow(p as usize - 1).rank() == d / p as usize
}

/// Whether the line lies in the rank variety of M: M fails to be free over
/// the shifted cyclic subgroup of α.
pub fn line_in_module_variety(m: &Module, e: &ElementaryAbelian, line: &Line) -> bool {
    !is_free_nilpotent(&nilpotent_part(m, e, line), m.field().p())
}

// ---- elements of the group algebra kE -------------------------------------

/// u_α − 1 = Σ αᵢ(xᵢ − 1) as a kE coefficient vector over the local indices
/// of E.
pub fn u_alpha_minus_one(e: &ElementaryAbelian, field: &Field, line: &Line) -> Vec<Scalar> {
    let mut v = vec![0u32; e.sub.order()];
    for (&x, &a) in e.basis.iter().zip(line.coords()) {
        let lx = e.sub.to_local(x).expect("basis elements lie in E");
        v[lx] = field.add(v[lx], a);
        v[0] = field.sub(v[0], a);
    }
    v
}

/// Convolution product in kE.
pub fn algebra_mul(e: &ElementaryAbelian, field: &Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let g = e.sub.group();
    let mut out = vec![0u32; g.order()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                let k = g.mul(i, j);
                out[k] = field.add(out[k], field.mul(ai, bj));
            }
        }
    }
    out
}

/// Conjugation g·v·g⁻¹ on kE coefficients, for g normalizing E.
pub fn algebra_conj(e: &ElementaryAbelian, g: usize, v: &[Scalar]) -> Result<Vec<Scalar>> {
    let big = e.sub.ambient();
    let mut out = vec![0u32; v.len()];
    for (i, &c) in v.iter().enumerate() {
        if c != 0 {
            let x = e.sub.to_parent(i);
            let y = big.conj(g, x);
            let ly = e.sub.to_local(y).ok_or(Error::OutsideNormalizer(g))?;
            out[ly] = c;
        }
    }
    Ok(out)
}

/// An echelon basis of Rad²(kE): the span of all products (g−1)(h−1).
pub fn rad2_span(e: &ElementaryAbelian, field: &Field) -> Echelon {
    let n = e.sub.order();
    let mut ech = Echelon::new(field.clone(), n);
    for g in 1..n {
        let mut a = vec![0u32; n];
        a[g] = 1;
        a[0] = field.neg(1);
        for h in 1..n {
            let mut b = vec![0u32; n];
            b[h] = 1;
            b[0] = field.neg(1);
            ech.insert(algebra_mul(e, field, &a, &b));
        }
    }
    ech
}

/// The χ-equivariant lift of u_α − 1 inside kE: averaging conjugates over a
/// transversal of the centralizer of E in the stabilizer H,
///   𝔲 = m⁻¹ Σ χ(t)⁻¹ · t (u_α − 1) t⁻¹,
/// so that g 𝔲 g⁻¹ = χ(g) 𝔲 for every g ∈ H. Postconditions verified here:
/// equivariance, 𝔲 ≡ u_α − 1 mod Rad²(kE), 𝔲 ∉ Rad², and 𝔲^p = 0.
pub fn equivariant_lift(
    e: &ElementaryAbelian,
    field: &Field,
    line: &Line,
    h: &Subgroup,
) -> Result<Vec<Scalar>> {
    let big = e.sub.ambient();
    // centralizer of E inside H, and a coset transversal
    let centralizes = |g: usize| e.basis.iter().all(|&x| big.conj(g, x) == x);
    let cent: Vec<usize> = h
        .elements()
        .iter()
        .copied()
        .filter(|&g| centralizes(g))
        .collect();
    let mut seen = vec![false; big.order()];
    let mut transversal = Vec::new();
    for &g in h.elements() {
        if !seen[g] {
            transversal.push(g);
            for &c in &cent {
                seen[big.mul(g, c)] = true;
            }
        }
    }
    let m = transversal.len();
    if m as u32 % field.p() == 0 {
        return Err(Error::QuotientOrderDivisible(m));
    }
    let m_inv = field.inv((m as u32 % field.p()) as Scalar);
    let u = u_alpha_minus_one(e, field, line);
    let n = e.sub.order();
    let mut lift = vec![0u32; n];
    for &t in &transversal {
        let chi = chi_value(field, e, t, line)?;
        let coef = field.mul(m_inv, field.inv(chi));
        let conj = algebra_conj(e, t, &u)?;
        for (o, c) in lift.iter_mut().zip(conj) {
            *o = field.add(*o, field.mul(coef, c));
        }
    }
    // postcondition: χ-equivariance over all of H
    for &g in h.elements() {
        let chi = chi_value(field, e, g, line)?;
        let conj = algebra_conj(e, g, &lift)?;
        let scaled: Vec<Scalar> = lift.iter().map(|&c| field.mul(chi, c)).collect();
        if conj != scaled {
            return Err(Error::Invariant(
                "lift fails χ-equivariance under the stabilizer".into(),
            ));
        }
    }
    // postcondition: lift ≡ u_α − 1 mod Rad², and lift itself is not in Rad²
    let rad2 = rad2_span(e, field);
    let diff: Vec<Scalar> = lift.iter().zip(&u).map(|(&a, &b)| field.sub(a, b)).collect();
    if !rad2.contains(&diff) {
        return Err(Error::Invariant(
            "lift differs from u_α − 1 outside Rad²(kE)".into(),
        ));
    }
    if rad2.contains(&lift) {
        return Err(Error::Invariant("lift degenerates into Rad²(kE)".into()));
    }
    // postcondition: p-th power vanishes in kE
    let mut pw = lift.clone();
    for _ in 1..field.p() {
        pw = algebra_mul(e, field, &pw, &lift);
    }
    if pw.iter().any(|&c| c != 0) {
        return Err(Error::Invariant("lift has a nonzero p-th power".into()));
    }
    Ok(lift)
}

/// Right multiplication by a group-algebra element on the regular module of
/// the given group: e_g ↦ Σ_h u[h]·e_{gh}. It commutes with the left action,
/// so its image is a left submodule.
pub fn right_mult_matrix(group: &Group, field: &Field, u: &[Scalar]) -> Matrix {
    let n = group.order();
    let mut m = Matrix::zero(field.clone(), n, n);
    for g in 0..n {
        for (h, &c) in u.iter().enumerate() {
            if c != 0 {
                let gh = group.mul(g, h);
                m.set(gh, g, field.add(m.get(gh, g), c));
            }
        }
    }
    m
}

/// The cyclic quotient kE/kE·u as a module over the abstract group of E.
pub fn cyclic_quotient_module(e: &ElementaryAbelian, field: &Field, u: &[Scalar]) -> Result<Module> {
    let local = e.sub.group().clone();
    let reg = Module::regular(local.clone(), field.clone());
    let rm = right_mult_matrix(&local, field, u);
    let (_, basis) = reg.image_of(&rm)?;
    let (quot, _) = reg.quotient_by(&basis)?;
    Ok(quot)
}

/// The matrix of a kE element on any module of the ambient group.
pub fn algebra_element_on(m: &Module, e: &ElementaryAbelian, u: &[Scalar]) -> Matrix {
    let terms: Vec<(usize, Scalar)> = u
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (e.sub.to_parent(i), c))
        .collect();
    m.algebra_element(&terms)
}

/// The quotient of M by the image of an equivariant (or χ-equivariant)
/// operator; fails if the image is not an invariant subspace.
pub fn quotient_by_image(m: &Module, op: &Matrix) -> Result<Module> {
    let (_, basis) = m.image_of(op)?;
    let (quot, _) = m.quotient_by(&basis)?;
    Ok(quot)
}

/// The one-dimensional module carrying the character χ of a group whose
/// every element stabilizes the line.
pub fn character_module(
    group: &Group,
    field: &Field,
    e: &ElementaryAbelian,
    line: &Line,
) -> Result<Module> {
    let values = group
        .generators()
        .iter()
        .map(|&g| chi_value(field, e, g, line))
        .collect::<Result<Vec<_>>>()?;
    Module::one_dimensional(group.clone(), field.clone(), &values)
}
