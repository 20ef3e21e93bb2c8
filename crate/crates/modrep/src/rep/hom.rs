//! Spaces of module homomorphisms, computed with a standard-basis method:
//! spin a minimal generating set of the source, record the dependence
//! relations met along the way, and solve for the images of the generators
//! only. This keeps the linear system at `s·dim N` unknowns instead of
//! `dim M · dim N`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffla::{Echelon, Field, Matrix, Scalar};
use crate::rep::Module;

/// One vector of the spin basis of the source module.
pub struct SpinVec {
    pub vec: Vec<Scalar>,
    /// index of the seed this vector descends from
    pub seed: usize,
    /// (basis index, generator index) with vec = ρ(gen)·basis[parent]
    pub parent: Option<(usize, usize)>,
}

/// A dependence ρ(gen)·basis[at] = Σ coeffs[i]·basis[i] discovered while
/// spinning; each one becomes a block of linear constraints on a candidate
/// homomorphism.
pub struct Relation {
    pub gen: usize,
    pub at: usize,
    pub coeffs: Vec<Scalar>,
}

/// Spinning data for a module: a minimal-by-greedy set of generating vectors,
/// the full basis they spin to, and all dependence relations.
pub struct SpinData {
    pub seeds: Vec<Vec<Scalar>>,
    pub basis: Vec<SpinVec>,
    pub relations: Vec<Relation>,
    /// inverse of the matrix whose columns are the basis vectors
    pub binv: Matrix,
}

/// Row-echelon structure that also tracks, for every inserted vector, its
/// expression in terms of the raw (unreduced) inserted vectors. Rejected
/// vectors come back with their dependence coefficients.
struct AugEchelon {
    field: Field,
    width: usize,
    rows: Vec<(Vec<Scalar>, Vec<Scalar>)>,
    row_with_lead: Vec<usize>,
}

impl AugEchelon {
    fn new(field: Field, width: usize) -> AugEchelon {
        AugEchelon {
            field,
            width,
            rows: Vec::new(),
            row_with_lead: vec![usize::MAX; width],
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts raw vector number `tag`; on dependence returns the
    /// coefficients c with v = Σ c[i]·raw[i] over earlier raw vectors.
    fn insert(&mut self, mut v: Vec<Scalar>, tag: usize) -> std::result::Result<(), Vec<Scalar>> {
        let f = self.field.clone();
        let mut coeffs = vec![0u32; tag + 1];
        coeffs[tag] = 1;
        let mut col = 0;
        while col < self.width {
            if v[col] == 0 {
                col += 1;
                continue;
            }
            let holder = self.row_with_lead[col];
            if holder == usize::MAX {
                let inv = f.inv(v[col]);
                if inv != 1 {
                    for x in v.iter_mut() {
                        *x = f.mul(inv, *x);
                    }
                    for x in coeffs.iter_mut() {
                        *x = f.mul(inv, *x);
                    }
                }
                self.row_with_lead[col] = self.rows.len();
                self.rows.push((v, coeffs));
                return Ok(());
            }
            let c = f.neg(v[col]);
            let (rv, rc) = &self.rows[holder];
            crate::ffla::matrix::axpy_slice(&f, &mut v[col..], &rv[col..], c);
            for (i, &x) in rc.iter().enumerate() {
                if x != 0 {
                    coeffs[i] = f.add(coeffs[i], f.mul(c, x));
                }
            }
            col += 1;
        }
        // v reduced to zero: 0 = Σ coeffs[i] raw[i] with coeffs[tag] = 1,
        // so raw[tag] = -Σ_{i<tag} coeffs[i] raw[i]
        let mut dep = vec![0u32; tag];
        for i in 0..tag {
            dep[i] = f.neg(coeffs[i]);
        }
        Err(dep)
    }
}

/// Computes (or returns the cached) spin data of a module.
pub fn spin_data(m: &Module) -> Arc<SpinData> {
    if let Some(d) = m.spin_cache().get() {
        return Arc::clone(d);
    }
    let data = Arc::new(build_spin_data(m));
    let _ = m.spin_cache().set(Arc::clone(&data));
    Arc::clone(m.spin_cache().get().unwrap())
}

fn build_spin_data(m: &Module) -> SpinData {
    let d = m.dim();
    let f = m.field().clone();
    let gens = m.generator_matrices();
    let mut ech = AugEchelon::new(f.clone(), d);
    let mut basis: Vec<SpinVec> = Vec::new();
    let mut seeds: Vec<Vec<Scalar>> = Vec::new();
    let mut relations: Vec<Relation> = Vec::new();
    let mut head = 0usize; // next basis vector whose images are unexplored
    let mut next_standard = 0usize;
    while ech.rank() < d {
        // find a standard basis vector outside the current span
        let seed = loop {
            let mut e = vec![0u32; d];
            e[next_standard] = 1;
            next_standard += 1;
            match ech.insert(e.clone(), basis.len()) {
                Ok(()) => break e,
                Err(_) => continue,
            }
        };
        basis.push(SpinVec {
            vec: seed.clone(),
            seed: seeds.len(),
            parent: None,
        });
        seeds.push(seed);
        // exhaust the action from the current frontier
        while head < basis.len() {
            let j = head;
            head += 1;
            for (gi, gm) in gens.iter().enumerate() {
                let w = gm.mul_vec(&basis[j].vec);
                match ech.insert(w.clone(), basis.len()) {
                    Ok(()) => {
                        let seed = basis[j].seed;
                        basis.push(SpinVec {
                            vec: w,
                            seed,
                            parent: Some((j, gi)),
                        });
                    }
                    Err(coeffs) => relations.push(Relation {
                        gen: gi,
                        at: j,
                        coeffs,
                    }),
                }
            }
        }
    }
    debug_assert_eq!(basis.len(), d);
    let bmat = Matrix::from_fn(f.clone(), d, d, |i, j| basis[j].vec[i]);
    let binv = bmat.inverse().expect("spin basis spans the module");
    SpinData {
        seeds,
        basis,
        relations,
        binv,
    }
}

/// The word matrices W_j = ρ_N(word of basis vector j); a homomorphism T is
/// determined by the seed images u, with T(b_j) = W_j·u_{seed(j)}.
fn word_matrices(data: &SpinData, n: &Module) -> Vec<Matrix> {
    let dn = n.dim();
    let f = n.field().clone();
    let gens = n.generator_matrices();
    let mut out: Vec<Matrix> = Vec::with_capacity(data.basis.len());
    for sv in &data.basis {
        let w = match sv.parent {
            None => Matrix::identity(f.clone(), dn),
            Some((parent, gi)) => gens[gi].mul(&out[parent]),
        };
        out.push(w);
    }
    out
}

/// The constraint row space on the stacked seed images; its nullspace is
/// (isomorphic to) Hom(M, N).
fn constraint_space(m: &Module, n: &Module) -> Result<(Arc<SpinData>, Vec<Matrix>, Echelon)> {
    if !m.same_algebra(n) {
        return Err(Error::ModuleMismatch);
    }
    let data = spin_data(m);
    let words = word_matrices(&data, n);
    let s = data.seeds.len();
    let dn = n.dim();
    let f = n.field().clone();
    let gens = n.generator_matrices();
    let mut ech = Echelon::new(f.clone(), s * dn);
    for rel in &data.relations {
        // ρ_N(gen)·W_at·u_{seed(at)} = Σ_i coeffs[i]·W_i·u_{seed(i)}
        let lhs = gens[rel.gen].mul(&words[rel.at]);
        let mut blocks = vec![Matrix::zero(f.clone(), dn, dn); s];
        let at_seed = data.basis[rel.at].seed;
        blocks[at_seed] = blocks[at_seed].add(&lhs);
        for (i, &c) in rel.coeffs.iter().enumerate() {
            if c != 0 {
                let si = data.basis[i].seed;
                blocks[si] = blocks[si].sub(&words[i].scale(c));
            }
        }
        for r in 0..dn {
            let mut row = Vec::with_capacity(s * dn);
            for b in &blocks {
                row.extend_from_slice(b.row(r));
            }
            ech.insert(row);
        }
        if ech.rank() == s * dn {
            break;
        }
    }
    Ok((data, words, ech))
}

/// Dimension of the space of module homomorphisms M → N.
pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    let (data, _, ech) = constraint_space(m, n)?;
    Ok(data.seeds.len() * n.dim() - ech.rank())
}

/// A basis of Hom(M, N) as dim N × dim M matrices acting on column vectors.
pub fn hom_basis(m: &Module, n: &Module) -> Result<Vec<Matrix>> {
    let (data, words, ech) = constraint_space(m, n)?;
    let (dm, dn) = (m.dim(), n.dim());
    let f = n.field().clone();
    let null = ech.nullspace();
    let mut out = Vec::with_capacity(null.cols());
    for k in 0..null.cols() {
        let u = null.col_vec(k);
        // β_j = W_j · u_{seed(j)}; T·B = β, so T = β·B⁻¹
        let mut beta = Matrix::zero(f.clone(), dn, dm);
        for (j, sv) in data.basis.iter().enumerate() {
            let seg = &u[sv.seed * dn..(sv.seed + 1) * dn];
            let col = words[j].mul_vec(seg);
            for i in 0..dn {
                beta.set(i, j, col[i]);
            }
        }
        out.push(beta.mul(&data.binv));
    }
    Ok(out)
}

/// Dimension of End(M).
pub fn end_dim(m: &Module) -> usize {
    hom_dim(m, m).expect("a module shares its own algebra")
}

/// Checks that T intertwines the generator actions: T·ρ_M(g) = ρ_N(g)·T.
pub fn is_homomorphism(m: &Module, n: &Module, t: &Matrix) -> bool {
    m.same_algebra(n)
        && t.rows() == n.dim()
        && t.cols() == m.dim()
        && m.generator_matrices()
            .iter()
            .zip(n.generator_matrices())
            .all(|(gm, gn)| t.mul(gm) == gn.mul(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffla::Field;
    use crate::groups::Group;

    fn s3() -> Group {
        Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap()
    }

    /// Oracle: solve the full intertwiner system T·ρ(g) = ρ(g)·T naively.
    fn hom_dim_naive(m: &Module, n: &Module) -> usize {
        let (dm, dn) = (m.dim(), n.dim());
        let f = m.field().clone();
        let unknowns = dm * dn;
        let mut ech = Echelon::new(f.clone(), unknowns);
        for (gm, gn) in m.generator_matrices().iter().zip(n.generator_matrices()) {
            // (T·gm - gn·T)[i][j] = Σ_k T[i][k] gm[k][j] - gn[i][k] T[k][j]
            for i in 0..dn {
                for j in 0..dm {
                    let mut row = vec![0u32; unknowns];
                    for k in 0..dm {
                        let idx = i * dm + k;
                        row[idx] = f.add(row[idx], gm.get(k, j));
                    }
                    for k in 0..dn {
                        let idx = k * dm + j;
                        row[idx] = f.sub(row[idx], gn.get(i, k));
                    }
                    ech.insert(row);
                }
            }
        }
        unknowns - ech.rank()
    }

    #[test]
    fn hom_dims_match_naive_oracle() {
        let g = s3();
        for f in [Field::new(3, 1).unwrap(), Field::new(2, 2).unwrap()] {
            let reg = Module::regular(g.clone(), f.clone());
            let triv = Module::trivial(g.clone(), f.clone());
            let pairs = [
                (reg.clone(), reg.clone()),
                (reg.clone(), triv.clone()),
                (triv.clone(), reg.clone()),
                (triv.clone(), triv.clone()),
                (reg.clone(), reg.tensor(&triv).unwrap()),
            ];
            for (a, b) in pairs {
                assert_eq!(hom_dim(&a, &b).unwrap(), hom_dim_naive(&a, &b));
            }
        }
    }

    #[test]
    fn end_of_regular_module_has_group_order_dimension() {
        // End_kG(kG) ≅ kG as a vector space
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let reg = Module::regular(g.clone(), f);
        assert_eq!(end_dim(&reg), g.order());
    }

    #[test]
    fn hom_basis_elements_are_homomorphisms() {
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let reg = Module::regular(g.clone(), f.clone());
        let triv = Module::trivial(g, f);
        for (a, b) in [(&reg, &triv), (&triv, &reg), (&reg, &reg)] {
            let basis = hom_basis(a, b).unwrap();
            assert_eq!(basis.len(), hom_dim(a, b).unwrap());
            for t in &basis {
                assert!(is_homomorphism(a, b, t));
                assert!(!t.is_zero());
            }
            // basis elements are linearly independent
            let mut ech = Echelon::new(a.field().clone(), a.dim() * b.dim());
            for t in &basis {
                assert!(ech.insert(t.data().to_vec()));
            }
        }
    }

    #[test]
    fn regular_module_spins_from_one_seed() {
        let g = s3();
        let f = Field::new(2, 1).unwrap();
        let reg = Module::regular(g, f);
        let data = spin_data(&reg);
        assert_eq!(data.seeds.len(), 1);
        assert_eq!(data.basis.len(), 6);
    }
}
