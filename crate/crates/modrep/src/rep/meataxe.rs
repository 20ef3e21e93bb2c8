//! Irreducibility testing and composition series.
//!
//! The test picks an algebra element θ and an irreducible factor f of its
//! minimal polynomial with small nullity. A proper submodule W either meets
//! ker f(θ) (so some kernel line spins to a proper subspace) or, after
//! dualizing, its perpendicular meets ker f(θ)ᵀ (so some transpose-kernel
//! line spins to a proper subspace under the transposed action, whose
//! perpendicular is a proper submodule). Spinning every line of both kernels
//! therefore decides irreducibility; elements whose kernels carry too many
//! lines are skipped in favor of a fresh θ.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ffla::fpoly::min_poly;
use crate::ffla::{Echelon, Matrix, Scalar};
use crate::rep::{hom, Module};

const MAX_ATTEMPTS: usize = 150;
/// Largest number of kernel lines worth enumerating before drawing a new
/// algebra element.
const MAX_KERNEL_LINES: u64 = 8192;

/// Number of lines (1-dimensional subspaces) in GF(q)^nullity.
fn line_count(q: u64, nullity: u32) -> u64 {
    if nullity == 0 {
        return 0;
    }
    let mut total = 0u64;
    let mut power = 1u64;
    for _ in 0..nullity {
        total = total.saturating_add(power);
        power = power.saturating_mul(q);
    }
    total
}

/// One representative per line of the column space of `basis`: coefficient
/// tuples whose first nonzero entry is 1.
fn line_representatives(field: &crate::ffla::Field, basis: &Matrix) -> Vec<Vec<Scalar>> {
    let nu = basis.cols();
    let d = basis.rows();
    let q = field.size();
    let mut out = Vec::new();
    // leading index k: coefficient k is 1, coefficients > k range over GF(q)
    for k in 0..nu {
        let free = nu - k - 1;
        let total = (q as u64).pow(free as u32);
        for code in 0..total {
            let mut coeffs = vec![0u32; nu];
            coeffs[k] = 1;
            let mut c = code;
            for t in (k + 1)..nu {
                coeffs[t] = (c % q as u64) as u32;
                c /= q as u64;
            }
            let mut v = vec![0u32; d];
            for (t, &ct) in coeffs.iter().enumerate() {
                if ct != 0 {
                    for i in 0..d {
                        let b = basis.get(i, t);
                        if b != 0 {
                            v[i] = field.add(v[i], field.mul(ct, b));
                        }
                    }
                }
            }
            out.push(v);
        }
    }
    out
}

/// Outcome of the structure probe: either a proof of irreducibility or a
/// basis (as matrix columns) of a proper nonzero submodule.
pub enum Structure {
    Irreducible,
    ProperSubmodule(Matrix),
}

/// Spins seed vectors under an explicit set of matrices; returns a basis of
/// the closure as matrix columns.
fn spin_under(mats: &[Matrix], field: &crate::ffla::Field, dim: usize, seed: &[Scalar]) -> Matrix {
    let mut ech = Echelon::new(field.clone(), dim);
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    if ech.insert(seed.to_vec()) {
        basis.push(seed.to_vec());
    }
    let mut head = 0usize;
    while head < basis.len() && basis.len() < dim {
        let v = basis[head].clone();
        head += 1;
        for m in mats {
            let w = m.mul_vec(&v);
            if ech.insert(w.clone()) {
                basis.push(w);
            }
        }
    }
    Matrix::from_fn(field.clone(), dim, basis.len(), |i, j| basis[j][i])
}

/// Probes the submodule structure of `m`.
pub fn find_structure(m: &Module, rng: &mut impl Rng) -> Result<Structure> {
    let d = m.dim();
    if d <= 1 {
        return Ok(Structure::Irreducible);
    }
    let f = m.field().clone();
    let gens = m.generator_matrices();
    let gens_t: Vec<Matrix> = gens.iter().map(|g| g.transpose()).collect();
    let q = f.size() as u64;
    for _ in 0..MAX_ATTEMPTS {
        let theta = m.algebra_sample(rng);
        let mp = min_poly(&theta);
        if mp.deg() == 0 {
            continue;
        }
        // the factor whose kernel carries the fewest lines
        let mut best: Option<(Matrix, usize)> = None;
        for (factor, _) in mp.factor(rng) {
            let n = factor.eval_matrix(&theta);
            let nullity = d - n.rank();
            if best.as_ref().map_or(true, |(_, b)| nullity < *b) {
                best = Some((n, nullity));
            }
        }
        let (n, nullity) = best.expect("a nonconstant minimal polynomial has a factor");
        let lines = line_count(q, nullity as u32);
        let ker = n.nullspace();
        let kt = n.transpose().nullspace();
        // quick reducibility probes, useful even when the kernel carries too
        // many lines to certify: kernel basis vectors plus random kernel
        // combinations very likely meet a proper submodule when one exists
        let sample = |basis: &Matrix, rng: &mut dyn rand::RngCore| -> Vec<Vec<Scalar>> {
            let mut out: Vec<Vec<Scalar>> = (0..basis.cols()).map(|j| basis.col_vec(j)).collect();
            for _ in 0..20 {
                let mut v = vec![0u32; d];
                for j in 0..basis.cols() {
                    let c = rng.gen_range(0..f.size());
                    if c != 0 {
                        crate::ffla::matrix::axpy_slice(&f, &mut v, &basis.col_vec(j), c);
                    }
                }
                if v.iter().any(|&x| x != 0) {
                    out.push(v);
                }
            }
            out
        };
        for v in sample(&ker, rng) {
            let span = m.spin_subspace(&[v]);
            if span.cols() < d {
                return Ok(Structure::ProperSubmodule(span));
            }
        }
        for w in sample(&kt, rng) {
            let span_t = spin_under(&gens_t, &f, d, &w);
            if span_t.cols() < d {
                let perp = span_t.transpose().nullspace();
                debug_assert_eq!(perp.cols(), d - span_t.cols());
                return Ok(Structure::ProperSubmodule(perp));
            }
        }
        if lines > MAX_KERNEL_LINES {
            // no proper submodule found, but the kernel is too big to
            // certify irreducibility; draw a new algebra element
            continue;
        }
        // certification: a proper submodule would meet ker f(θ) in a line
        // spinning to a proper subspace, or dually meet ker f(θ)ᵀ, whose
        // transposed spin closure has a proper-submodule perpendicular
        for v in line_representatives(&f, &ker) {
            let span = m.spin_subspace(&[v]);
            if span.cols() < d {
                return Ok(Structure::ProperSubmodule(span));
            }
        }
        for w in line_representatives(&f, &kt) {
            let span_t = spin_under(&gens_t, &f, d, &w);
            if span_t.cols() < d {
                let perp = span_t.transpose().nullspace();
                debug_assert_eq!(perp.cols(), d - span_t.cols());
                return Ok(Structure::ProperSubmodule(perp));
            }
        }
        return Ok(Structure::Irreducible);
    }
    Err(Error::SearchExhausted {
        what: format!("algebra element certifying the structure of a {d}-dimensional module"),
        attempts: MAX_ATTEMPTS,
        seed: 0,
    })
}

pub fn is_irreducible(m: &Module, rng: &mut impl Rng) -> Result<bool> {
    Ok(matches!(find_structure(m, rng)?, Structure::Irreducible))
}

/// Composition factors with multiplicity, by repeated splitting along proper
/// submodules.
pub fn composition_factors(m: &Module, rng: &mut impl Rng) -> Result<Vec<Module>> {
    if m.dim() == 0 {
        return Ok(vec![]);
    }
    match find_structure(m, rng)? {
        Structure::Irreducible => Ok(vec![m.clone()]),
        Structure::ProperSubmodule(basis) => {
            let sub = m.submodule_on_basis(&basis)?;
            let (quot, _) = m.quotient_by(&basis)?;
            let mut out = composition_factors(&sub, rng)?;
            out.extend(composition_factors(&quot, rng)?);
            Ok(out)
        }
    }
}

/// Two irreducible modules are isomorphic exactly when a nonzero
/// homomorphism exists between them.
pub fn simple_isomorphic(a: &Module, b: &Module) -> Result<bool> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    Ok(hom::hom_dim(a, b)? > 0)
}

/// The simple modules of kG up to isomorphism: deduplicated composition
/// factors of the regular module.
pub fn simples(
    group: &crate::groups::Group,
    field: &crate::ffla::Field,
    rng: &mut impl Rng,
) -> Result<Vec<Module>> {
    let reg = Module::regular(group.clone(), field.clone());
    let factors = composition_factors(&reg, rng)?;
    let mut out: Vec<Module> = Vec::new();
    for f in factors {
        let mut seen = false;
        for s in &out {
            if simple_isomorphic(&f, s)? {
                seen = true;
                break;
            }
        }
        if !seen {
            out.push(f);
        }
    }
    out.sort_by_key(|s| s.dim());
    Ok(out)
}
