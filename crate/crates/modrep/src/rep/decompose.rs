//! Direct-sum decomposition into indecomposables and isomorphism testing.
//!
//! Decomposition works through the endomorphism ring: an endomorphism whose
//! minimal polynomial has two coprime factors splits the module into the
//! corresponding generalized kernels. A module is declared indecomposable
//! once the endomorphism basis, all pairwise sums, and a batch of random
//! combinations all have primary minimal polynomials.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ffla::fpoly::min_poly;
use crate::ffla::{Matrix, Scalar};
use crate::rep::{hom, Module};

const RANDOM_SPLIT_SAMPLES: usize = 60;
const RANDOM_ISO_SAMPLES: usize = 120;

/// Splits M along an endomorphism with a non-primary minimal polynomial;
/// returns None when θ does not split.
fn split_along(m: &Module, theta: &Matrix, rng: &mut impl Rng) -> Result<Option<Vec<Module>>> {
    let mp = min_poly(theta);
    if mp.deg() == 0 {
        return Ok(None);
    }
    let factors = mp.factor(rng);
    if factors.len() < 2 {
        return Ok(None);
    }
    let mut parts = Vec::with_capacity(factors.len());
    let mut total = 0usize;
    for (f, e) in &factors {
        let n = f.eval_matrix(theta).pow(*e);
        let ker = n.nullspace();
        total += ker.cols();
        parts.push(m.submodule_on_basis(&ker)?);
    }
    if total != m.dim() {
        return Err(Error::Invariant(
            "generalized kernels of an endomorphism fail to fill the module".into(),
        ));
    }
    Ok(Some(parts))
}

/// Decomposes into indecomposable summands (with repeats). The summands are
/// presented as modules in their own right, not as subspaces.
pub fn decompose(m: &Module, rng: &mut impl Rng) -> Result<Vec<Module>> {
    if m.dim() == 0 {
        return Ok(vec![]);
    }
    let ends = hom::hom_basis(m, m)?;
    if ends.len() == 1 {
        return Ok(vec![m.clone()]);
    }
    // candidate endomorphisms: the basis, pairwise sums, then random combos
    let f = m.field().clone();
    let mut candidates: Vec<Matrix> = ends.clone();
    for i in 0..ends.len() {
        for j in (i + 1)..ends.len() {
            candidates.push(ends[i].add(&ends[j]));
        }
    }
    let mut tried = 0usize;
    let mut idx = 0usize;
    loop {
        let theta = if idx < candidates.len() {
            let t = candidates[idx].clone();
            idx += 1;
            t
        } else if tried < RANDOM_SPLIT_SAMPLES {
            tried += 1;
            let mut acc = Matrix::zero(f.clone(), m.dim(), m.dim());
            for e in &ends {
                let c: Scalar = rng.gen_range(0..f.size());
                if c != 0 {
                    acc = acc.add(&e.scale(c));
                }
            }
            acc
        } else {
            // every sampled endomorphism has a primary minimal polynomial
            return Ok(vec![m.clone()]);
        };
        if let Some(parts) = split_along(m, &theta, rng)? {
            let mut out = Vec::new();
            for p in parts {
                out.extend(decompose(&p, rng)?);
            }
            return Ok(out);
        }
    }
}

/// Searches Hom(M, N) for an invertible element; such an element certifies
/// an isomorphism. For indecomposable modules the non-isomorphisms form a
/// proper subspace, so a uniform sample is invertible with probability at
/// least 1 − 1/q per draw when the modules are isomorphic.
fn find_invertible_hom(m: &Module, n: &Module, rng: &mut impl Rng) -> Result<Option<Matrix>> {
    if m.dim() != n.dim() {
        return Ok(None);
    }
    let basis = hom::hom_basis(m, n)?;
    if basis.is_empty() {
        return Ok(None);
    }
    for t in &basis {
        if t.inverse().is_some() {
            return Ok(Some(t.clone()));
        }
    }
    let f = m.field().clone();
    // exhaust the hom space when it is small, otherwise sample
    let space: u64 = (f.size() as u64)
        .checked_pow(basis.len() as u32)
        .unwrap_or(u64::MAX);
    if space <= 1 << 14 {
        let mut coeffs = vec![0u32; basis.len()];
        loop {
            // increment base-q counter
            let mut k = 0;
            loop {
                if k == coeffs.len() {
                    return Ok(None);
                }
                coeffs[k] += 1;
                if coeffs[k] < f.size() {
                    break;
                }
                coeffs[k] = 0;
                k += 1;
            }
            let mut acc = Matrix::zero(f.clone(), n.dim(), m.dim());
            for (c, b) in coeffs.iter().zip(&basis) {
                if *c != 0 {
                    acc = acc.add(&b.scale(*c));
                }
            }
            if acc.inverse().is_some() {
                return Ok(Some(acc));
            }
        }
    }
    for _ in 0..RANDOM_ISO_SAMPLES {
        let mut acc = Matrix::zero(f.clone(), n.dim(), m.dim());
        for b in &basis {
            let c: Scalar = rng.gen_range(0..f.size());
            if c != 0 {
                acc = acc.add(&b.scale(c));
            }
        }
        if acc.inverse().is_some() {
            return Ok(Some(acc));
        }
    }
    Ok(None)
}

/// Isomorphism test. Certified positive answers (an explicit invertible
/// intertwiner is found); negative answers follow from dimension counts,
/// vanishing hom spaces, or failed matching of indecomposable summands.
pub fn are_isomorphic(m: &Module, n: &Module, rng: &mut impl Rng) -> Result<bool> {
    if !m.same_algebra(n) || m.dim() != n.dim() {
        return Ok(false);
    }
    if m.dim() == 0 {
        return Ok(true);
    }
    if hom::hom_dim(m, n)? == 0 {
        return Ok(false);
    }
    if find_invertible_hom(m, n, rng)?.is_some() {
        return Ok(true);
    }
    // match indecomposable summands pairwise
    let parts_m = decompose(m, rng)?;
    let parts_n = decompose(n, rng)?;
    if parts_m.len() != parts_n.len() {
        return Ok(false);
    }
    let mut used = vec![false; parts_n.len()];
    for a in &parts_m {
        let mut matched = false;
        for (j, b) in parts_n.iter().enumerate() {
            if used[j] || a.dim() != b.dim() {
                continue;
            }
            if find_invertible_hom(a, b, rng)?.is_some() {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_indecomposable(m: &Module, rng: &mut impl Rng) -> Result<bool> {
    Ok(decompose(m, rng)?.len() == 1)
}

/// Checks the Krull–Schmidt postcondition: the direct sum of the claimed
/// summands is isomorphic to the module itself.
pub fn verify_resum(m: &Module, summands: &[Module], rng: &mut impl Rng) -> Result<bool> {
    if summands.is_empty() {
        return Ok(m.dim() == 0);
    }
    let total = Module::direct_sum_all(summands)?;
    are_isomorphic(m, &total, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffla::Field;
    use crate::groups::Group;
    use crate::rep::meataxe;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s3() -> Group {
        Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap()
    }

    #[test]
    fn semisimple_regular_module_splits_fully() {
        // |S₃| invertible in characteristic 7: kS₃ = k ⊕ sgn ⊕ V² with V
        // 2-dimensional
        let g = s3();
        let f = Field::new(7, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let reg = Module::regular(g, f);
        let parts = decompose(&reg, &mut rng).unwrap();
        let mut dims: Vec<usize> = parts.iter().map(|m| m.dim()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2, 2]);
        assert!(verify_resum(&reg, &parts, &mut rng).unwrap());
    }

    #[test]
    fn modular_regular_module_of_s3() {
        // characteristic 3: kS₃ = P(k) ⊕ P(sgn), both of dimension 3
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let reg = Module::regular(g, f);
        let parts = decompose(&reg, &mut rng).unwrap();
        let dims: Vec<usize> = parts.iter().map(|m| m.dim()).collect();
        assert_eq!(dims, vec![3, 3]);
        assert!(!are_isomorphic(&parts[0], &parts[1], &mut rng).unwrap());
        assert!(verify_resum(&reg, &parts, &mut rng).unwrap());
    }

    #[test]
    fn cyclic_p_group_regular_module_is_indecomposable() {
        let c9 = Group::cyclic(9).unwrap();
        let f = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let reg = Module::regular(c9, f);
        assert!(is_indecomposable(&reg, &mut rng).unwrap());
    }

    #[test]
    fn iso_of_equal_and_distinct_modules() {
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let s = meataxe::simples(&g, &f, &mut rng).unwrap();
        assert_eq!(s.len(), 2);
        let (triv, sgn) = (&s[0], &s[1]);
        assert!(are_isomorphic(triv, triv, &mut rng).unwrap());
        assert!(!are_isomorphic(triv, sgn, &mut rng).unwrap());
        // X ⊕ Y ≅ Y ⊕ X even though the matrices differ
        let a = triv.direct_sum(sgn).unwrap();
        let b = sgn.direct_sum(triv).unwrap();
        assert!(are_isomorphic(&a, &b, &mut rng).unwrap());
        // and tensoring with the sign character twists back
        let twice = sgn.tensor(sgn).unwrap();
        assert!(are_isomorphic(&twice, triv, &mut rng).unwrap());
    }

    #[test]
    fn direct_sum_multiplicities_are_recovered() {
        let g = s3();
        let f = Field::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let s = meataxe::simples(&g, &f, &mut rng).unwrap();
        let two = s.iter().find(|m| m.dim() == 2).unwrap();
        let big = two.direct_sum(two).unwrap().direct_sum(two).unwrap();
        let parts = decompose(&big, &mut rng).unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|p| p.dim() == 2));
        assert!(verify_resum(&big, &parts, &mut rng).unwrap());
    }
}
