//! Modules over a group algebra kG, given by invertible generator matrices.
//! Element matrices are memoized along BFS words. Functors: direct sum,
//! tensor product, dual, restriction, induction; plus submodule and quotient
//! construction on invariant subspaces.

pub mod covers;
pub mod decompose;
pub mod hom;
pub mod meataxe;

use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::ffla::{Field, Matrix, Scalar};
use crate::groups::{Group, Subgroup};

struct ModuleInner {
    group: Group,
    field: Field,
    dim: usize,
    /// one invertible matrix per group generator
    gens: Vec<Matrix>,
    /// memoized element matrices, indexed by group element
    mats: Mutex<Vec<Option<Arc<Matrix>>>>,
    /// cached spinning data for hom computations
    spin: OnceLock<Arc<hom::SpinData>>,
}

/// A finite-dimensional kG-module. Cheap to clone; element matrices are
/// shared and computed on demand.
#[derive(Clone)]
pub struct Module {
    inner: Arc<ModuleInner>,
}

impl std::fmt::Debug for Module {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Module(dim={}, |G|={}, GF({}^{}))",
            self.dim(),
            self.group().order(),
            self.field().p(),
            self.field().n()
        )
    }
}

impl Module {
    /// Builds a module from one matrix per group generator and verifies that
    /// the assignment extends to a homomorphism on the whole group.
    pub fn new(group: Group, field: Field, gens: Vec<Matrix>) -> Result<Module> {
        let m = Module::new_unchecked(group, field, gens)?;
        m.verify_homomorphism()?;
        Ok(m)
    }

    fn new_unchecked(group: Group, field: Field, gens: Vec<Matrix>) -> Result<Module> {
        if gens.len() != group.generators().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} generator matrices for {} group generators",
                gens.len(),
                group.generators().len()
            )));
        }
        let dim = if let Some(g) = gens.first() {
            g.rows()
        } else {
            // a generator-free group is trivial; the dimension is free, so
            // modules over it are built through `from_element_matrices`
            0
        };
        for g in &gens {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::ShapeMismatch("generator matrices differ in size".into()));
            }
            if g.field() != &field {
                return Err(Error::FieldMismatch);
            }
        }
        let order = group.order();
        Ok(Module {
            inner: Arc::new(ModuleInner {
                group,
                field,
                dim,
                gens,
                mats: Mutex::new(vec![None; order]),
                spin: OnceLock::new(),
            }),
        })
    }

    /// Builds a module of explicit dimension over a group whose generator
    /// list may be empty (the trivial group).
    fn with_dim(group: Group, field: Field, dim: usize, gens: Vec<Matrix>) -> Module {
        let order = group.order();
        Module {
            inner: Arc::new(ModuleInner {
                group,
                field,
                dim,
                gens,
                mats: Mutex::new(vec![None; order]),
                spin: OnceLock::new(),
            }),
        }
    }

    fn verify_homomorphism(&self) -> Result<()> {
        // ρ(a)·ρ(g) = ρ(a·g) for all a and generators g implies the full
        // homomorphism property by induction on word length; generator
        // invertibility follows since each permutes {ρ(a)}.
        let g = self.group();
        for a in 0..g.order() {
            let ma = self.mat(a);
            for (gi, &gen) in g.generators().iter().enumerate() {
                let prod = ma.mul(&self.inner.gens[gi]);
                let target = self.mat(g.mul(a, gen));
                if prod != *target {
                    return Err(Error::Invariant(format!(
                        "matrices do not respect the product at ({a}, generator {gi})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Group {
        &self.inner.group
    }

    pub fn field(&self) -> &Field {
        &self.inner.field
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    /// Stable identity of the underlying allocation, for caching.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.inner) as usize
    }

    pub fn generator_matrices(&self) -> &[Matrix] {
        &self.inner.gens
    }

    pub(crate) fn spin_cache(&self) -> &OnceLock<Arc<hom::SpinData>> {
        &self.inner.spin
    }

    pub fn same_algebra(&self, other: &Module) -> bool {
        // generator lists must agree too: hom computations pair off the
        // generator matrices positionally
        self.group() == other.group()
            && self.group().generators() == other.group().generators()
            && self.field() == other.field()
    }

    /// The matrix of a group element, memoized via BFS-word prefix products.
    pub fn mat(&self, g: usize) -> Arc<Matrix> {
        {
            let mats = self.inner.mats.lock().unwrap();
            if let Some(m) = &mats[g] {
                return Arc::clone(m);
            }
        }
        let m = match self.group().bfs_parent(g) {
            None => Arc::new(Matrix::identity(self.field().clone(), self.dim())),
            Some((parent, gi)) => {
                let pm = self.mat(parent);
                Arc::new(pm.mul(&self.inner.gens[gi]))
            }
        };
        let mut mats = self.inner.mats.lock().unwrap();
        mats[g].get_or_insert_with(|| Arc::clone(&m));
        Arc::clone(&m)
    }

    pub fn act(&self, g: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.mat(g).mul_vec(v)
    }

    /// Σ c_g ρ(g) for the given sparse element of the group algebra.
    pub fn algebra_element(&self, terms: &[(usize, Scalar)]) -> Matrix {
        let mut out = Matrix::zero(self.field().clone(), self.dim(), self.dim());
        for &(g, c) in terms {
            if c == 0 {
                continue;
            }
            out = out.add(&self.mat(g).scale(c));
        }
        out
    }

    /// A random element of the image of kG in End(M): a combination of a few
    /// random group elements, occasionally multiplied together.
    pub fn algebra_sample(&self, rng: &mut impl Rng) -> Matrix {
        let g = self.group();
        let f = self.field();
        let terms: Vec<(usize, Scalar)> = (0..4)
            .map(|_| (rng.gen_range(0..g.order()), rng.gen_range(1..f.size())))
            .collect();
        let a = self.algebra_element(&terms);
        if rng.gen_bool(0.3) {
            let terms2: Vec<(usize, Scalar)> = (0..3)
                .map(|_| (rng.gen_range(0..g.order()), rng.gen_range(1..f.size())))
                .collect();
            a.mul(&self.algebra_element(&terms2))
        } else {
            a
        }
    }

    /// The one-dimensional trivial module.
    pub fn trivial(group: Group, field: Field) -> Module {
        let gens = group
            .generators()
            .iter()
            .map(|_| Matrix::identity(field.clone(), 1))
            .collect();
        Module::with_dim(group, field, 1, gens)
    }

    /// The regular module kG under left translation: ρ(g)·e_h = e_{gh}.
    pub fn regular(group: Group, field: Field) -> Module {
        let n = group.order();
        let gens = group
            .generators()
            .iter()
            .map(|&g| {
                Matrix::from_fn(field.clone(), n, n, |i, j| {
                    u32::from(group.mul(g, j) == i)
                })
            })
            .collect();
        Module::with_dim(group, field, n, gens)
    }

    /// A one-dimensional module from a multiplicative character on the
    /// generators; each value must respect the generator's order.
    pub fn one_dimensional(group: Group, field: Field, values: &[Scalar]) -> Result<Module> {
        if values.len() != group.generators().len() {
            return Err(Error::ShapeMismatch("one value per generator required".into()));
        }
        let gens: Vec<Matrix> = values
            .iter()
            .map(|&v| Matrix::from_rows(field.clone(), vec![vec![v]]))
            .collect();
        let m = Module::with_dim(group, field, 1, gens);
        m.verify_homomorphism()?;
        Ok(m)
    }

    pub fn direct_sum(&self, other: &Module) -> Result<Module> {
        if !self.same_algebra(other) {
            return Err(Error::ModuleMismatch);
        }
        let f = self.field().clone();
        let (da, db) = (self.dim(), other.dim());
        let gens = self
            .inner
            .gens
            .iter()
            .zip(&other.inner.gens)
            .map(|(a, b)| {
                Matrix::from_fn(f.clone(), da + db, da + db, |i, j| match (i < da, j < da) {
                    (true, true) => a.get(i, j),
                    (false, false) => b.get(i - da, j - da),
                    _ => 0,
                })
            })
            .collect();
        Ok(Module::with_dim(
            self.group().clone(),
            f,
            da + db,
            gens,
        ))
    }

    pub fn direct_sum_all(summands: &[Module]) -> Result<Module> {
        let mut it = summands.iter();
        let first = it.next().ok_or_else(|| {
            Error::ShapeMismatch("direct sum of an empty family".into())
        })?;
        let mut acc = first.clone();
        for m in it {
            acc = acc.direct_sum(m)?;
        }
        Ok(acc)
    }

    /// Tensor product over k with the diagonal action.
    pub fn tensor(&self, other: &Module) -> Result<Module> {
        if !self.same_algebra(other) {
            return Err(Error::ModuleMismatch);
        }
        let gens = self
            .inner
            .gens
            .iter()
            .zip(&other.inner.gens)
            .map(|(a, b)| a.kron(b))
            .collect();
        Ok(Module::with_dim(
            self.group().clone(),
            self.field().clone(),
            self.dim() * other.dim(),
            gens,
        ))
    }

    /// The contragredient dual: ρ*(g) = ρ(g⁻¹)ᵀ.
    pub fn dual(&self) -> Module {
        let gens = self
            .inner
            .gens
            .iter()
            .map(|a| {
                a.inverse()
                    .expect("generator matrices are invertible")
                    .transpose()
            })
            .collect();
        Module::with_dim(
            self.group().clone(),
            self.field().clone(),
            self.dim(),
            gens,
        )
    }

    /// Restriction along a subgroup: a module over `h.group()`.
    pub fn restrict(&self, h: &Subgroup) -> Result<Module> {
        if h.ambient() != self.group() {
            return Err(Error::ModuleMismatch);
        }
        let gens = h
            .group()
            .generators()
            .iter()
            .map(|&lg| (*self.mat(h.to_parent(lg))).clone())
            .collect();
        Ok(Module::with_dim(
            h.group().clone(),
            self.field().clone(),
            self.dim(),
            gens,
        ))
    }

    /// Induction to the ambient group: `self` is a module over `h.group()`;
    /// the result has dimension [G : H]·dim, with basis t_r ⊗ m_i over the
    /// left transversal, and g·(t_r ⊗ m) = t_{r'} ⊗ s·m where g·t_r = t_{r'}·s.
    pub fn induce(&self, h: &Subgroup) -> Result<Module> {
        if h.group() != self.group() {
            return Err(Error::ModuleMismatch);
        }
        let big = h.ambient().clone();
        let k = h.transversal().len();
        let d = self.dim();
        let f = self.field().clone();
        let gens = big
            .generators()
            .iter()
            .map(|&g| {
                let mut m = Matrix::zero(f.clone(), k * d, k * d);
                for r in 0..k {
                    let gt = big.mul(g, h.transversal()[r]);
                    let (rp, s) = h.coset_of(gt);
                    let block = self.mat(s);
                    for i in 0..d {
                        for j in 0..d {
                            let v = block.get(i, j);
                            if v != 0 {
                                m.set(rp * d + i, r * d + j, v);
                            }
                        }
                    }
                }
                m
            })
            .collect();
        Ok(Module::with_dim(big, f, k * d, gens))
    }

    /// Spins a set of seed vectors to the smallest invariant subspace
    /// containing them; returns a matrix whose columns form a basis.
    pub fn spin_subspace(&self, seeds: &[Vec<Scalar>]) -> Matrix {
        let d = self.dim();
        let mut ech = crate::ffla::Echelon::new(self.field().clone(), d);
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        for s in seeds {
            if ech.insert(s.clone()) {
                basis.push(s.clone());
            }
        }
        let mut head = 0usize;
        while head < basis.len() && basis.len() < d {
            let v = basis[head].clone();
            head += 1;
            for gm in &self.inner.gens {
                let w = gm.mul_vec(&v);
                if ech.insert(w.clone()) {
                    basis.push(w);
                }
            }
        }
        let mut out = Matrix::zero(self.field().clone(), d, basis.len());
        for (j, b) in basis.iter().enumerate() {
            for i in 0..d {
                out.set(i, j, b[i]);
            }
        }
        out
    }

    /// The module structure on an invariant subspace with basis the columns
    /// of `basis` (full column rank); fails if the subspace is not invariant.
    pub fn submodule_on_basis(&self, basis: &Matrix) -> Result<Module> {
        let k = basis.cols();
        let rref = basis.rref();
        if rref.rank != k {
            return Err(Error::ShapeMismatch("basis columns are dependent".into()));
        }
        let gens = self
            .inner
            .gens
            .iter()
            .map(|gm| {
                let img = rref.t.mul(&gm.mul(basis));
                // B has full column rank, so T·B = [I_k; 0]; invariance means
                // T·(ρ(g)B) is [A; 0] with A the action on the subspace.
                for i in k..img.rows() {
                    for j in 0..k {
                        if img.get(i, j) != 0 {
                            return Err(Error::Invariant(
                                "subspace is not invariant under the action".into(),
                            ));
                        }
                    }
                }
                Ok(Matrix::from_fn(self.field().clone(), k, k, |i, j| img.get(i, j)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Module::with_dim(
            self.group().clone(),
            self.field().clone(),
            k,
            gens,
        ))
    }

    /// The quotient by the invariant subspace spanned by the columns of
    /// `basis`; returns the quotient module and the projection matrix
    /// (rows give quotient coordinates of ambient vectors).
    pub fn quotient_by(&self, basis: &Matrix) -> Result<(Module, Matrix)> {
        let d = self.dim();
        let k = basis.cols();
        let f = self.field().clone();
        // complete to a full basis F = [B | standard vectors]
        let mut ech = crate::ffla::Echelon::new(f.clone(), d);
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for j in 0..k {
            let c = basis.col_vec(j);
            if !ech.insert(c.clone()) {
                return Err(Error::ShapeMismatch("basis columns are dependent".into()));
            }
            cols.push(c);
        }
        for i in 0..d {
            if cols.len() == d {
                break;
            }
            let mut e = vec![0u32; d];
            e[i] = 1;
            if ech.insert(e.clone()) {
                cols.push(e);
            }
        }
        let fmat = Matrix::from_fn(f.clone(), d, d, |i, j| cols[j][i]);
        let finv = fmat.inverse().expect("completed basis is invertible");
        let q = d - k;
        let gens = self
            .inner
            .gens
            .iter()
            .map(|gm| {
                let conj = finv.mul(&gm.mul(&fmat));
                for i in k..d {
                    for j in 0..k {
                        if conj.get(i, j) != 0 {
                            return Err(Error::Invariant(
                                "subspace is not invariant under the action".into(),
                            ));
                        }
                    }
                }
                Ok(Matrix::from_fn(f.clone(), q, q, |i, j| {
                    conj.get(k + i, k + j)
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        let proj = Matrix::from_fn(f.clone(), q, d, |i, j| finv.get(k + i, j));
        Ok((
            Module::with_dim(self.group().clone(), f, q, gens),
            proj,
        ))
    }

    /// The kernel of an equivariant map out of this module, as a submodule
    /// together with its inclusion basis.
    pub fn kernel_of(&self, t: &Matrix) -> Result<(Module, Matrix)> {
        if t.cols() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "map has {} columns for a module of dimension {}",
                t.cols(),
                self.dim()
            )));
        }
        let ns = t.nullspace();
        let sub = self.submodule_on_basis(&ns)?;
        Ok((sub, ns))
    }

    /// The image of an equivariant map into this module, as a submodule
    /// together with its inclusion basis.
    pub fn image_of(&self, t: &Matrix) -> Result<(Module, Matrix)> {
        if t.rows() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "map has {} rows for a module of dimension {}",
                t.rows(),
                self.dim()
            )));
        }
        let d = self.dim();
        let mut ech = crate::ffla::Echelon::new(self.field().clone(), d);
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for j in 0..t.cols() {
            let c = t.col_vec(j);
            if ech.insert(c.clone()) {
                cols.push(c);
            }
        }
        let basis = Matrix::from_fn(self.field().clone(), d, cols.len(), |i, j| cols[j][i]);
        let sub = self.submodule_on_basis(&basis)?;
        Ok((sub, basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Group {
        Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap()
    }

    #[test]
    fn regular_module_is_a_homomorphism() {
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let m = Module::regular(g.clone(), f);
        m.verify_homomorphism().unwrap();
        assert_eq!(m.dim(), 6);
        // left translation by g sends e_0 to e_g
        for a in 0..g.order() {
            let mut e0 = vec![0u32; 6];
            e0[0] = 1;
            let img = m.act(a, &e0);
            let mut expect = vec![0u32; 6];
            expect[a] = 1;
            assert_eq!(img, expect);
        }
    }

    #[test]
    fn dual_and_tensor_are_homomorphisms() {
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let m = Module::regular(g.clone(), f.clone());
        m.dual().verify_homomorphism().unwrap();
        let t = Module::trivial(g, f);
        let mt = m.tensor(&t).unwrap();
        mt.verify_homomorphism().unwrap();
        assert_eq!(mt.dim(), 6);
    }

    #[test]
    fn sign_character_of_s3() {
        let g = s3();
        let f = Field::new(7, 1).unwrap();
        // rotation ↦ 1, transposition ↦ -1
        let sgn = Module::one_dimensional(g.clone(), f.clone(), &[1, f.neg(1)]).unwrap();
        assert_eq!(sgn.mat(g.generators()[1]).get(0, 0), f.neg(1));
        // a value violating the generator order fails verification
        assert!(Module::one_dimensional(g, f.clone(), &[1, 3]).is_err());
    }

    #[test]
    fn induction_from_trivial_gives_permutation_module() {
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let h = Subgroup::generated(&g, &[g.generators()[1]]).unwrap();
        let triv_h = Module::trivial(h.group().clone(), f.clone());
        let ind = triv_h.induce(&h).unwrap();
        ind.verify_homomorphism().unwrap();
        assert_eq!(ind.dim(), 3);
        // every element matrix is a permutation matrix
        for a in 0..g.order() {
            let m = ind.mat(a);
            for j in 0..3 {
                let ones: Vec<_> = (0..3).filter(|&i| m.get(i, j) != 0).collect();
                assert_eq!(ones.len(), 1);
                assert_eq!(m.get(ones[0], j), 1);
            }
        }
    }

    #[test]
    fn induction_dimension_and_restriction_round_trip() {
        let g = s3();
        let f = Field::new(2, 2).unwrap();
        let h = Subgroup::generated(&g, &[g.generators()[0]]).unwrap();
        let reg_h = Module::regular(h.group().clone(), f.clone());
        let ind = reg_h.induce(&h).unwrap();
        ind.verify_homomorphism().unwrap();
        // kH ↑ G = kG
        assert_eq!(ind.dim(), g.order());
        let back = ind.restrict(&h).unwrap();
        back.verify_homomorphism().unwrap();
        assert_eq!(back.dim(), 6);
    }

    #[test]
    fn spin_and_submodule_quotient() {
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let m = Module::regular(g.clone(), f.clone());
        // the all-ones vector spans the trivial submodule
        let ones = vec![1u32; 6];
        let basis = m.spin_subspace(&[ones]);
        assert_eq!(basis.cols(), 1);
        let sub = m.submodule_on_basis(&basis).unwrap();
        assert_eq!(sub.dim(), 1);
        sub.verify_homomorphism().unwrap();
        for a in 0..g.order() {
            assert!(sub.mat(a).is_identity());
        }
        let (quot, proj) = m.quotient_by(&basis).unwrap();
        assert_eq!(quot.dim(), 5);
        quot.verify_homomorphism().unwrap();
        // the projection is equivariant: proj ∘ ρ_M(g) = ρ_Q(g) ∘ proj
        for a in 0..g.order() {
            let lhs = proj.mul(&m.mat(a));
            let rhs = quot.mat(a).mul(&proj);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn non_invariant_subspace_is_rejected() {
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let m = Module::regular(g, f.clone());
        let mut e0 = Matrix::zero(f, 6, 1);
        e0.set(0, 0, 1);
        assert!(m.submodule_on_basis(&e0).is_err());
    }

    #[test]
    fn kernel_and_image_of_augmentation() {
        let g = s3();
        let f = Field::new(3, 1).unwrap();
        let m = Module::regular(g, f.clone());
        // augmentation kG → k, e_g ↦ 1: a map to the trivial module
        let aug = Matrix::from_rows(f.clone(), vec![vec![1; 6]]);
        let (ker, kbasis) = m.kernel_of(&aug).unwrap();
        assert_eq!(ker.dim(), 5);
        assert_eq!(kbasis.cols(), 5);
        let t = Module::trivial(m.group().clone(), f);
        let (img, _) = t.image_of(&aug).unwrap();
        assert_eq!(img.dim(), 1);
    }
}
