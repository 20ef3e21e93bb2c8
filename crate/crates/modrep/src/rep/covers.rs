//! Radicals, tops, projective covers, syzygies, and projectivity.
//!
//! `AlgebraCtx` fixes a group, a splitting field, and a seeded random stream,
//! and lazily computes the simple modules and the projective indecomposables
//! so that covers and Ω can be assembled from cached pieces.

use std::cell::{OnceCell, RefCell, RefMut};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffla::{Echelon, Field, Matrix};
use crate::groups::{Group, Subgroup};
use crate::rep::{decompose, hom, meataxe, Module};

const COVER_ATTEMPTS: usize = 40;

pub struct AlgebraCtx {
    group: Group,
    field: Field,
    seed: u64,
    rng: RefCell<ChaCha8Rng>,
    simples: OnceCell<Vec<Module>>,
    pims: OnceCell<Vec<Module>>,
    sylow: OnceCell<Subgroup>,
}

impl AlgebraCtx {
    pub fn new(group: Group, field: Field, seed: u64) -> AlgebraCtx {
        AlgebraCtx {
            group,
            field,
            seed,
            rng: RefCell::new(ChaCha8Rng::seed_from_u64(seed)),
            simples: OnceCell::new(),
            pims: OnceCell::new(),
            sylow: OnceCell::new(),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self) -> RefMut<'_, ChaCha8Rng> {
        self.rng.borrow_mut()
    }

    /// The simple kG-modules up to isomorphism, sorted by dimension. A
    /// non-split simple (End(S) a proper field extension of k) is allowed;
    /// multiplicity computations account for its endomorphism degree.
    pub fn simples(&self) -> Result<&[Module]> {
        if let Some(s) = self.simples.get() {
            return Ok(s);
        }
        let list = meataxe::simples(&self.group, &self.field, &mut *self.rng())?;
        let _ = self.simples.set(list);
        Ok(self.simples.get().unwrap())
    }

    /// dim_k End(S_i) for each simple: 1 exactly when the field splits S_i.
    pub fn end_dims(&self) -> Result<Vec<usize>> {
        Ok(self.simples()?.iter().map(hom::end_dim).collect())
    }

    /// Errors unless every simple has a one-dimensional endomorphism
    /// algebra, i.e. the scalar field is a splitting field.
    pub fn require_split(&self) -> Result<()> {
        for (s, e) in self.simples()?.iter().zip(self.end_dims()?) {
            if e != 1 {
                return Err(Error::NonSplitField {
                    dim: s.dim(),
                    end_dim: e,
                });
            }
        }
        Ok(())
    }

    /// The projective indecomposables, indexed compatibly with `simples`:
    /// `pims()[i]` has top isomorphic to `simples()[i]`.
    pub fn pims(&self) -> Result<&[Module]> {
        if let Some(p) = self.pims.get() {
            return Ok(p);
        }
        let simples = self.simples()?.to_vec();
        let reg = Module::regular(self.group.clone(), self.field.clone());
        let parts = decompose::decompose(&reg, &mut *self.rng())?;
        // deduplicate by isomorphism, tracking multiplicities
        let mut reps: Vec<(Module, usize)> = Vec::new();
        for part in parts {
            let mut found = false;
            for (rep, count) in reps.iter_mut() {
                if decompose::are_isomorphic(&part, rep, &mut *self.rng())? {
                    *count += 1;
                    found = true;
                    break;
                }
            }
            if !found {
                reps.push((part, 1));
            }
        }
        if reps.len() != simples.len() {
            return Err(Error::Invariant(format!(
                "{} projective indecomposables for {} simples",
                reps.len(),
                simples.len()
            )));
        }
        let mut ordered: Vec<Option<Module>> = vec![None; simples.len()];
        for (pim, count) in reps {
            let top = self.top(&pim)?.0;
            let mut matched = None;
            for (i, s) in simples.iter().enumerate() {
                if meataxe::simple_isomorphic(&top, s)? {
                    matched = Some(i);
                    break;
                }
            }
            let i = matched.ok_or_else(|| {
                Error::Invariant("projective indecomposable with unrecognized top".into())
            })?;
            if ordered[i].is_some() {
                return Err(Error::Invariant(
                    "two projective indecomposables share a top".into(),
                ));
            }
            // P_i occurs dim S_i / dim End(S_i) times in kG
            let e = hom::end_dim(&simples[i]);
            if count * e != simples[i].dim() {
                return Err(Error::Invariant(format!(
                    "projective multiplicity {} times End-degree {} differs from simple dimension {}",
                    count,
                    e,
                    simples[i].dim()
                )));
            }
            ordered[i] = Some(pim);
        }
        let pims: Vec<Module> = ordered.into_iter().map(|p| p.unwrap()).collect();
        let _ = self.pims.set(pims);
        Ok(self.pims.get().unwrap())
    }

    /// A Sylow p-subgroup for the field characteristic, cached.
    pub fn sylow(&self) -> Result<&Subgroup> {
        if let Some(s) = self.sylow.get() {
            return Ok(s);
        }
        let s = self.group.sylow_subgroup(self.field.p())?;
        let _ = self.sylow.set(s);
        Ok(self.sylow.get().unwrap())
    }

    /// Basis (as matrix columns) of the radical: the common kernel of all
    /// homomorphisms onto simple modules.
    pub fn radical_basis(&self, m: &Module) -> Result<Matrix> {
        let simples = self.simples()?;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for s in simples {
            for t in hom::hom_basis(m, s)? {
                for r in 0..t.rows() {
                    rows.push(t.row(r).to_vec());
                }
            }
        }
        if rows.is_empty() {
            return Ok(Matrix::identity(self.field.clone(), m.dim()));
        }
        Ok(Matrix::from_rows(self.field.clone(), rows).nullspace())
    }

    pub fn radical(&self, m: &Module) -> Result<Module> {
        let basis = self.radical_basis(m)?;
        m.submodule_on_basis(&basis)
    }

    /// The head M/rad M together with the projection.
    pub fn top(&self, m: &Module) -> Result<(Module, Matrix)> {
        let basis = self.radical_basis(m)?;
        m.quotient_by(&basis)
    }

    /// Multiplicity of each simple in the top of M: dim Hom(M, S_i)
    /// divided by dim End(S_i).
    pub fn top_multiplicities(&self, m: &Module) -> Result<Vec<usize>> {
        self.simples()?
            .iter()
            .map(|s| {
                let h = hom::hom_dim(m, s)?;
                let e = hom::end_dim(s);
                if h % e != 0 {
                    return Err(Error::Invariant(format!(
                        "hom dimension {h} not divisible by End-degree {e}"
                    )));
                }
                Ok(h / e)
            })
            .collect()
    }

    /// The projective cover P(M) → M: the sum of P_i with the top
    /// multiplicities of M, and a surjection assembled from random
    /// combinations of Hom(P_i, M).
    pub fn projective_cover(&self, m: &Module) -> Result<(Module, Matrix)> {
        let mults = self.top_multiplicities(m)?;
        let pims = self.pims()?;
        let mut summands: Vec<Module> = Vec::new();
        let mut hom_bases: Vec<Vec<Matrix>> = Vec::new();
        for (i, &mult) in mults.iter().enumerate() {
            if mult == 0 {
                continue;
            }
            let basis = hom::hom_basis(&pims[i], m)?;
            for _ in 0..mult {
                summands.push(pims[i].clone());
                hom_bases.push(basis.clone());
            }
        }
        if summands.is_empty() {
            if m.dim() == 0 {
                let p = Module::direct_sum_all(&[])
                    .unwrap_or_else(|_| m.clone());
                return Ok((p, Matrix::zero(self.field.clone(), 0, 0)));
            }
            return Err(Error::Invariant("nonzero module with zero top".into()));
        }
        let cover = Module::direct_sum_all(&summands)?;
        let d = m.dim();
        let f = self.field.clone();
        for _ in 0..COVER_ATTEMPTS {
            let mut blocks: Vec<Matrix> = Vec::with_capacity(summands.len());
            {
                let mut rng = self.rng();
                for basis in &hom_bases {
                    let mut acc = Matrix::zero(f.clone(), d, basis[0].cols());
                    for b in basis {
                        let c = rng.gen_range(0..f.size());
                        if c != 0 {
                            acc = acc.add(&b.scale(c));
                        }
                    }
                    blocks.push(acc);
                }
            }
            let mut phi = blocks[0].clone();
            for b in &blocks[1..] {
                phi = phi.hstack(b);
            }
            if phi.rank() == d {
                return Ok((cover, phi));
            }
        }
        Err(Error::SearchExhausted {
            what: format!("surjective projective cover of a dimension-{d} module"),
            attempts: COVER_ATTEMPTS,
            seed: self.seed,
        })
    }

    /// The syzygy Ω(M): kernel of the projective cover. Projective summands
    /// of M contribute nothing, so the result is always projective-free.
    pub fn omega(&self, m: &Module) -> Result<Module> {
        if m.dim() == 0 {
            return Ok(m.clone());
        }
        let (cover, phi) = self.projective_cover(m)?;
        let (ker, _) = cover.kernel_of(&phi)?;
        Ok(ker)
    }

    /// The cosyzygy Ω⁻¹(M) = (Ω(M*))*.
    pub fn omega_inv(&self, m: &Module) -> Result<Module> {
        Ok(self.omega(&m.dual())?.dual())
    }

    /// Ω^t for any integer t; Ω⁰ strips M to its projective-free part.
    pub fn omega_power(&self, m: &Module, t: i64) -> Result<Module> {
        let mut cur = self.projective_free_part(m)?;
        for _ in 0..t.unsigned_abs() {
            cur = if t > 0 {
                self.omega(&cur)?
            } else {
                self.omega_inv(&cur)?
            };
        }
        Ok(cur)
    }

    /// Drops the projective summands of M.
    pub fn projective_free_part(&self, m: &Module) -> Result<Module> {
        let parts = decompose::decompose(m, &mut *self.rng())?;
        let mut keep: Vec<Module> = Vec::new();
        for p in parts {
            if !self.is_projective(&p)? {
                keep.push(p);
            }
        }
        if keep.is_empty() {
            // the zero module over this algebra
            let (z, _) = m.quotient_by(&Matrix::identity(self.field.clone(), m.dim()))?;
            return Ok(z);
        }
        Module::direct_sum_all(&keep)
    }

    /// Projectivity over kG is equivalent to freeness over a Sylow
    /// p-subgroup P, which holds exactly when dim M/rad(kP)M = dim M / |P|.
    pub fn is_projective(&self, m: &Module) -> Result<bool> {
        let syl = self.sylow()?;
        let d = m.dim();
        if syl.order() == 1 {
            return Ok(true);
        }
        if d % syl.order() != 0 {
            return Ok(false);
        }
        // rad(kP)·M is spanned by (ρ(x) − 1)·M over generators x of P
        let mut ech = Echelon::new(self.field.clone(), d);
        let id = Matrix::identity(self.field.clone(), d);
        for &lg in syl.group().generators() {
            let x = syl.to_parent(lg);
            let shifted = m.mat(x).sub(&id);
            for j in 0..d {
                ech.insert(shifted.col_vec(j));
            }
        }
        Ok(d - ech.rank() == d / syl.order())
    }

    /// Test oracle for projectivity: M is projective exactly when its
    /// syzygy vanishes.
    pub fn is_projective_via_cover(&self, m: &Module) -> Result<bool> {
        Ok(self.omega(m)?.dim() == 0)
    }
}
