//! Finite groups as explicit Cayley tables, with BFS generator words,
//! subgroups, coset transversals, and elementary abelian subgroups carrying
//! exponent coordinates.
//!
//! Elements are indices `0..order` with the identity at index 0. The product
//! convention for permutations is `ab` = apply `b` first, then `a`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Upper bound on group order; Cayley tables are stored densely.
pub const MAX_GROUP_ORDER: usize = 2000;

struct GroupInner {
    order: usize,
    /// row-major: table[a * order + b] = a·b
    table: Vec<u16>,
    inv: Vec<u16>,
    generators: Vec<usize>,
    /// BFS word over `generators` positions; words[0] is empty and every
    /// proper prefix of a word is itself a BFS word.
    words: Vec<Vec<usize>>,
    /// (parent element, generator position) with element = parent · gen
    bfs_parent: Vec<Option<(usize, usize)>>,
    orders: Vec<usize>,
}

/// A finite group given by its multiplication table. Cheap to clone.
#[derive(Clone)]
pub struct Group {
    inner: Arc<GroupInner>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.order == other.inner.order && self.inner.table == other.inner.table)
    }
}
impl Eq for Group {}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group(order={})", self.order())
    }
}

impl Group {
    /// Builds a group from a full multiplication table, with the identity at
    /// index 0 and `generators` generating the whole group.
    pub fn from_table(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Group> {
        let order = table.len();
        if order == 0 || order > MAX_GROUP_ORDER {
            return Err(Error::GroupTooLarge(MAX_GROUP_ORDER));
        }
        let mut flat = vec![0u16; order * order];
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::ShapeMismatch(format!(
                    "table row {a} has length {} in a group of order {order}",
                    row.len()
                )));
            }
            for (b, &ab) in row.iter().enumerate() {
                if ab >= order {
                    return Err(Error::BadElement(ab));
                }
                flat[a * order + b] = ab as u16;
            }
        }
        Group::from_flat_table(order, flat, generators)
    }

    fn from_flat_table(order: usize, table: Vec<u16>, generators: Vec<usize>) -> Result<Group> {
        let mul = |a: usize, b: usize| table[a * order + b] as usize;
        // identity at 0
        for a in 0..order {
            if mul(0, a) != a || mul(a, 0) != a {
                return Err(Error::Invariant(format!(
                    "index 0 is not a two-sided identity at element {a}"
                )));
            }
        }
        // Latin square rows/columns and inverses
        let mut inv = vec![u16::MAX; order];
        for a in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for b in 0..order {
                let r = mul(a, b);
                let c = mul(b, a);
                if seen_row[r] || seen_col[c] {
                    return Err(Error::Invariant(format!(
                        "cancellation fails at row/column {a}"
                    )));
                }
                seen_row[r] = true;
                seen_col[c] = true;
                if r == 0 {
                    inv[a] = b as u16;
                }
            }
        }
        // associativity: exhaustive when cheap, generator-anchored otherwise.
        // (a·b)·c = a·(b·c) for all a and all generators b suffices once the
        // generators generate, but the exhaustive check is kept when small.
        if order <= 256 {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                            return Err(Error::Invariant(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            for a in 0..order {
                for &b in &generators {
                    for c in 0..order {
                        if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                            return Err(Error::Invariant(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        for &g in &generators {
            if g >= order {
                return Err(Error::BadElement(g));
            }
        }
        // BFS words from the identity, extending on the right
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); order];
        let mut bfs_parent: Vec<Option<(usize, usize)>> = vec![None; order];
        let mut visited = vec![false; order];
        visited[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut count = 1usize;
        while let Some(cur) = queue.pop_front() {
            for (gi, &g) in generators.iter().enumerate() {
                let next = mul(cur, g);
                if !visited[next] {
                    visited[next] = true;
                    let mut w = words[cur].clone();
                    w.push(gi);
                    words[next] = w;
                    bfs_parent[next] = Some((cur, gi));
                    queue.push_back(next);
                    count += 1;
                }
            }
        }
        if count != order {
            return Err(Error::Invariant(format!(
                "generators reach only {count} of {order} elements"
            )));
        }
        // element orders
        let mut orders = vec![0usize; order];
        for a in 0..order {
            let mut x = a;
            let mut k = 1usize;
            while x != 0 {
                x = mul(x, a);
                k += 1;
            }
            orders[a] = k;
        }
        Ok(Group {
            inner: Arc::new(GroupInner {
                order,
                table,
                inv,
                generators,
                words,
                bfs_parent,
                orders,
            }),
        })
    }

    /// Closes a set of permutations (of `0..points`) under composition and
    /// returns the resulting group; element 0 is the identity and the input
    /// permutations become the generators, in order.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Group> {
        let points = perms.first().map(|p| p.len()).unwrap_or(0);
        for p in perms {
            let mut seen = vec![false; points];
            if p.len() != points {
                return Err(Error::ShapeMismatch(
                    "permutations act on different point sets".into(),
                ));
            }
            for &i in p {
                if i >= points || seen[i] {
                    return Err(Error::Invariant("not a permutation".into()));
                }
                seen[i] = true;
            }
        }
        let id: Vec<usize> = (0..points).collect();
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0usize)]);
        let mut queue = std::collections::VecDeque::from([0usize]);
        // (a ∘ b)(i) = a(b(i)); BFS extends on the right: cur · gen
        while let Some(cur) = queue.pop_front() {
            for g in perms {
                let cur_perm = elems[cur].clone();
                let prod: Vec<usize> = (0..points).map(|i| cur_perm[g[i]]).collect();
                if !index.contains_key(&prod) {
                    let idx = elems.len();
                    if idx >= MAX_GROUP_ORDER {
                        return Err(Error::GroupTooLarge(MAX_GROUP_ORDER));
                    }
                    index.insert(prod.clone(), idx);
                    elems.push(prod);
                    queue.push_back(idx);
                }
            }
        }
        let order = elems.len();
        let mut table = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                let prod: Vec<usize> = (0..points).map(|i| elems[a][elems[b][i]]).collect();
                table[a * order + b] = index[&prod] as u16;
            }
        }
        let generators: Vec<usize> = perms.iter().map(|g| index[g]).collect();
        let generators: Vec<usize> = {
            // drop duplicate or identity generators while keeping order
            let mut out = Vec::new();
            for g in generators {
                if g != 0 && !out.contains(&g) {
                    out.push(g);
                }
            }
            out
        };
        let generators = if generators.is_empty() && order == 1 {
            vec![]
        } else {
            generators
        };
        Group::from_flat_table(order, table, generators)
    }

    /// The cyclic group of order n, generated by element 1.
    pub fn cyclic(n: usize) -> Result<Group> {
        if n == 0 || n > MAX_GROUP_ORDER {
            return Err(Error::GroupTooLarge(MAX_GROUP_ORDER));
        }
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = ((a + b) % n) as u16;
            }
        }
        let gens = if n > 1 { vec![1] } else { vec![] };
        Group::from_flat_table(n, table, gens)
    }

    /// (Z/p)^rank with elements indexed by little-endian base-p digits;
    /// generator i is the i-th standard basis vector (index p^i).
    pub fn elementary_abelian(p: u32, rank: u32) -> Result<Group> {
        if !crate::ffla::gfp::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let order = (p as u64).checked_pow(rank).filter(|&o| o <= MAX_GROUP_ORDER as u64);
        let order = order.ok_or(Error::GroupTooLarge(MAX_GROUP_ORDER))? as usize;
        let digits = |mut v: usize| -> Vec<usize> {
            (0..rank).map(|_| {
                let d = v % p as usize;
                v /= p as usize;
                d
            }).collect()
        };
        let mut table = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                let (da, db) = (digits(a), digits(b));
                let mut sum = 0usize;
                for i in (0..rank as usize).rev() {
                    sum = sum * p as usize + (da[i] + db[i]) % p as usize;
                }
                table[a * order + b] = sum as u16;
            }
        }
        let gens: Vec<usize> = (0..rank).map(|i| (p as usize).pow(i)).collect();
        Group::from_flat_table(order, table, gens)
    }

    /// Direct product; element (a, b) has index a·|B| + b. Generators are
    /// A's generators paired with 1, then 1 paired with B's generators.
    pub fn direct_product(a: &Group, b: &Group) -> Result<Group> {
        let (na, nb) = (a.order(), b.order());
        let order = na.checked_mul(nb).filter(|&o| o <= MAX_GROUP_ORDER);
        let order = order.ok_or(Error::GroupTooLarge(MAX_GROUP_ORDER))?;
        let mut table = vec![0u16; order * order];
        for x in 0..order {
            for y in 0..order {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                let za = a.mul(xa, ya);
                let zb = b.mul(xb, yb);
                table[x * order + y] = (za * nb + zb) as u16;
            }
        }
        let mut gens: Vec<usize> = a.generators().iter().map(|&g| g * nb).collect();
        gens.extend(b.generators().iter().map(|&g| g));
        Group::from_flat_table(order, table, gens)
    }

    /// Semidirect product N ⋊ C_m where the generator z of C_m acts by the
    /// automorphism `auto` of N (so z·g·z⁻¹ = auto[g]). Element (g, i) has
    /// index i·|N| + g; generators are N's generators followed by z = (e, 1).
    pub fn semidirect_cyclic(n: &Group, auto: &[usize], m: usize) -> Result<Group> {
        let nn = n.order();
        if auto.len() != nn {
            return Err(Error::NotAutomorphism);
        }
        // bijectivity, identity, multiplicativity
        let mut seen = vec![false; nn];
        for &img in auto {
            if img >= nn || seen[img] {
                return Err(Error::NotAutomorphism);
            }
            seen[img] = true;
        }
        if auto[0] != 0 {
            return Err(Error::NotAutomorphism);
        }
        for a in 0..nn {
            for b in 0..nn {
                if auto[n.mul(a, b)] != n.mul(auto[a], auto[b]) {
                    return Err(Error::NotAutomorphism);
                }
            }
        }
        // order of the automorphism must divide m
        let mut phi: Vec<usize> = (0..nn).collect();
        let mut ord = 0usize;
        loop {
            phi = phi.iter().map(|&g| auto[g]).collect();
            ord += 1;
            if phi.iter().enumerate().all(|(i, &g)| i == g) {
                break;
            }
            if ord > m {
                return Err(Error::ActionOrder { ord, m });
            }
        }
        if m % ord != 0 {
            return Err(Error::ActionOrder { ord, m });
        }
        let order = nn.checked_mul(m).filter(|&o| o <= MAX_GROUP_ORDER);
        let order = order.ok_or(Error::GroupTooLarge(MAX_GROUP_ORDER))?;
        // powers of the automorphism
        let mut powers: Vec<Vec<usize>> = Vec::with_capacity(m);
        powers.push((0..nn).collect());
        for i in 1..m {
            let prev = &powers[i - 1];
            powers.push(prev.iter().map(|&g| auto[g]).collect());
        }
        // (g, i)(h, j) = (g · φ^i(h), i + j)
        let mut table = vec![0u16; order * order];
        for x in 0..order {
            for y in 0..order {
                let (gi, g) = (x / nn, x % nn);
                let (hj, h) = (y / nn, y % nn);
                let zg = n.mul(g, powers[gi][h]);
                let zi = (gi + hj) % m;
                table[x * order + y] = (zi * nn + zg) as u16;
            }
        }
        let mut gens: Vec<usize> = n.generators().to_vec();
        if m > 1 {
            gens.push(nn); // (e, 1)
        }
        Group::from_flat_table(order, table, gens)
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.inner.table[a * self.inner.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inner.inv[a] as usize
    }

    /// g · x · g⁻¹
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut r = 0usize;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.inner.orders[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.inner.generators
    }

    pub fn word(&self, a: usize) -> &[usize] {
        &self.inner.words[a]
    }

    pub fn bfs_parent(&self, a: usize) -> Option<(usize, usize)> {
        self.inner.bfs_parent[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent_of_p(&self, p: u32) -> u32 {
        let mut e = 0u32;
        let mut n = self.order();
        while n % p as usize == 0 {
            n /= p as usize;
            e += 1;
        }
        e
    }

    /// Closure of a set of elements under multiplication; sorted indices.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order()];
        in_set[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            for &g in gens {
                let next = self.mul(cur, g);
                if !in_set[next] {
                    in_set[next] = true;
                    queue.push_back(next);
                }
            }
        }
        (0..self.order()).filter(|&i| in_set[i]).collect()
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer_set(&self, set: &[usize]) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| set.iter().all(|&x| self.mul(g, x) == self.mul(x, g)))
            .collect()
    }

    /// Elements g with g·S·g⁻¹ = S for the subgroup element set `set`
    /// (assumed closed).
    pub fn normalizer_set(&self, set: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        for &s in set {
            member[s] = true;
        }
        (0..self.order())
            .filter(|&g| set.iter().all(|&x| member[self.conj(g, x)]))
            .collect()
    }

    /// A Sylow p-subgroup, grown through normalizers: a p-subgroup that is
    /// not yet Sylow has a p-element in its normalizer outside itself.
    pub fn sylow_subgroup(&self, p: u32) -> Result<Subgroup> {
        let target = (p as usize).pow(self.exponent_of_p(p));
        let mut elems: Vec<usize> = vec![0];
        let mut gens: Vec<usize> = vec![];
        while elems.len() < target {
            let norm = self.normalizer_set(&elems);
            let member: std::collections::HashSet<usize> = elems.iter().copied().collect();
            let mut grown = false;
            for &y in &norm {
                if member.contains(&y) {
                    continue;
                }
                let t = self.element_order(y) as u64;
                let mut ppart = 1u64;
                let mut rest = t;
                while rest % p as u64 == 0 {
                    rest /= p as u64;
                    ppart *= p as u64;
                }
                if ppart == 1 {
                    continue;
                }
                let yp = self.pow(y, rest);
                if member.contains(&yp) {
                    continue;
                }
                gens.push(yp);
                elems = self.closure(&gens);
                grown = true;
                break;
            }
            if !grown {
                return Err(Error::Invariant(format!(
                    "Sylow growth stalled at order {}",
                    elems.len()
                )));
            }
        }
        Subgroup::from_elements(self, &elems)
    }
}

/// A subgroup of a fixed ambient group, carrying its own abstract group
/// structure and a left-coset transversal with smallest-index representatives.
#[derive(Clone)]
pub struct Subgroup {
    big: Group,
    /// sorted parent indices; the identity (0) comes first
    elements: Vec<usize>,
    /// abstract group on `0..elements.len()` with the induced table
    group: Group,
    /// parent index -> local index
    local: Vec<Option<u16>>,
    /// left-coset representatives, smallest parent index per coset; the
    /// identity coset is first
    transversal: Vec<usize>,
    /// parent element -> position in `transversal`
    coset: Vec<u16>,
}

impl Subgroup {
    /// Subgroup generated by `gens` (parent indices).
    pub fn generated(big: &Group, gens: &[usize]) -> Result<Subgroup> {
        for &g in gens {
            if g >= big.order() {
                return Err(Error::BadElement(g));
            }
        }
        let elems = big.closure(gens);
        Subgroup::build(big, elems, gens.to_vec())
    }

    /// Subgroup from an explicit closed element set.
    pub fn from_elements(big: &Group, elements: &[usize]) -> Result<Subgroup> {
        let mut elems = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let closed = big.closure(&elems);
        if closed != elems {
            return Err(Error::Invariant(
                "element set is not closed under multiplication".into(),
            ));
        }
        // greedy generating set: grow the closure one element at a time
        let mut gens: Vec<usize> = Vec::new();
        let mut cur: Vec<usize> = vec![0];
        for &g in &elems {
            if g != 0 && !cur.contains(&g) {
                gens.push(g);
                cur = big.closure(&gens);
                if cur.len() == elems.len() {
                    break;
                }
            }
        }
        Subgroup::build(big, elems, gens)
    }

    fn build(big: &Group, elements: Vec<usize>, gens: Vec<usize>) -> Result<Subgroup> {
        let h = elements.len();
        let mut local = vec![None; big.order()];
        for (i, &e) in elements.iter().enumerate() {
            local[e] = Some(i as u16);
        }
        let mut table = vec![0u16; h * h];
        for a in 0..h {
            for b in 0..h {
                let prod = big.mul(elements[a], elements[b]);
                table[a * h + b] =
                    local[prod].ok_or_else(|| Error::Invariant("set is not closed".into()))?;
            }
        }
        let local_gens: Vec<usize> = {
            let mut out = Vec::new();
            for &g in &gens {
                let lg = local[g].ok_or(Error::BadElement(g))? as usize;
                if lg != 0 && !out.contains(&lg) {
                    out.push(lg);
                }
            }
            out
        };
        let group = Group::from_flat_table(h, table, local_gens)?;
        // left cosets gH; scan parent elements in order so each rep is the
        // smallest index in its coset
        let mut coset = vec![u16::MAX; big.order()];
        let mut transversal = Vec::new();
        for g in 0..big.order() {
            if coset[g] != u16::MAX {
                continue;
            }
            let r = transversal.len() as u16;
            transversal.push(g);
            for &s in &elements {
                coset[big.mul(g, s)] = r;
            }
        }
        Ok(Subgroup {
            big: big.clone(),
            elements,
            group,
            local,
            transversal,
            coset,
        })
    }

    pub fn ambient(&self) -> &Group {
        &self.big
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.big.order() / self.order()
    }

    /// The abstract group on local indices `0..order`.
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, parent: usize) -> bool {
        self.local[parent].is_some()
    }

    pub fn to_local(&self, parent: usize) -> Option<usize> {
        self.local[parent].map(|i| i as usize)
    }

    pub fn to_parent(&self, local: usize) -> usize {
        self.elements[local]
    }

    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }

    /// Writes x = t_r · s with t_r the transversal representative of the
    /// coset xH and s in the subgroup; returns (r, local index of s).
    pub fn coset_of(&self, x: usize) -> (usize, usize) {
        let r = self.coset[x] as usize;
        let t = self.transversal[r];
        let s = self.big.mul(self.big.inv(t), x);
        (r, self.local[s].expect("x = t·s forces s into the subgroup") as usize)
    }

    pub fn is_normal(&self) -> bool {
        (0..self.big.order())
            .all(|g| self.elements.iter().all(|&x| self.contains(self.big.conj(g, x))))
    }
}

/// An elementary abelian p-subgroup E with a chosen basis, exposing exponent
/// coordinates: every element is x₁^{a₁}···x_r^{a_r} for a unique tuple.
#[derive(Clone)]
pub struct ElementaryAbelian {
    pub sub: Subgroup,
    pub p: u32,
    /// basis elements as parent indices
    pub basis: Vec<usize>,
    /// parent index -> exponent tuple
    exps: HashMap<usize, Vec<u32>>,
}

impl ElementaryAbelian {
    pub fn new(big: &Group, basis: &[usize], p: u32) -> Result<ElementaryAbelian> {
        let sub = Subgroup::generated(big, basis)?;
        let r = basis.len() as u32;
        if sub.order() != (p as usize).pow(r) {
            return Err(Error::NotElementaryAbelian(p));
        }
        for &x in sub.elements() {
            if x != 0 && big.element_order(x) != p as usize {
                return Err(Error::NotElementaryAbelian(p));
            }
        }
        if !sub.group().is_abelian() {
            return Err(Error::NotElementaryAbelian(p));
        }
        // enumerate all exponent tuples
        let mut exps = HashMap::new();
        let total = (p as usize).pow(r);
        for code in 0..total {
            let mut tuple = Vec::with_capacity(r as usize);
            let mut v = code;
            let mut elt = 0usize;
            for &b in basis {
                let a = (v % p as usize) as u32;
                v /= p as usize;
                tuple.push(a);
                elt = big.mul(elt, big.pow(b, a as u64));
            }
            if exps.insert(elt, tuple).is_some() {
                return Err(Error::NotElementaryAbelian(p));
            }
        }
        Ok(ElementaryAbelian {
            sub,
            p,
            basis: basis.to_vec(),
            exps,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn exponents(&self, parent: usize) -> Option<&[u32]> {
        self.exps.get(&parent).map(|v| v.as_slice())
    }

    pub fn element(&self, tuple: &[u32]) -> usize {
        let big = self.sub.ambient();
        let mut elt = 0usize;
        for (&b, &a) in self.basis.iter().zip(tuple) {
            elt = big.mul(elt, big.pow(b, (a % self.p) as u64));
        }
        elt
    }

    /// The matrix of conjugation by g on E in exponent coordinates: column i
    /// holds the exponents of g·x_i·g⁻¹. Requires g to normalize E.
    /// Satisfies M(g₁g₂) = M(g₁)·M(g₂) (mod p).
    pub fn conj_matrix(&self, g: usize) -> Result<Vec<Vec<u32>>> {
        let big = self.sub.ambient();
        let r = self.rank();
        let mut cols = Vec::with_capacity(r);
        for &x in &self.basis {
            let image = big.conj(g, x);
            let e = self
                .exponents(image)
                .ok_or(Error::OutsideNormalizer(g))?;
            cols.push(e.to_vec());
        }
        // row-major result: rows[i][j] = exponent of x_i in g·x_j·g⁻¹
        let rows = (0..r)
            .map(|i| (0..r).map(|j| cols[j][i]).collect())
            .collect();
        Ok(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2xc2() -> Group {
        Group::elementary_abelian(2, 2).unwrap()
    }

    #[test]
    fn cyclic_basics() {
        let g = Group::cyclic(6).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.mul(4, 5), 3);
        assert_eq!(g.inv(2), 4);
        assert_eq!(g.element_order(2), 3);
        assert_eq!(g.element_order(1), 6);
        assert!(g.is_abelian());
    }

    #[test]
    fn bfs_words_are_prefix_closed() {
        let g = Group::cyclic(5).unwrap();
        for a in 0..g.order() {
            let w = g.word(a);
            if let Some((parent, gi)) = g.bfs_parent(a) {
                assert_eq!(&w[..w.len() - 1], g.word(parent));
                assert_eq!(*w.last().unwrap(), gi);
                assert_eq!(g.mul(parent, g.generators()[gi]), a);
            } else {
                assert_eq!(a, 0);
                assert!(w.is_empty());
            }
        }
    }

    #[test]
    fn s3_from_permutations() {
        let s3 = Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let r = s3.generators()[0];
        let t = s3.generators()[1];
        assert_eq!(s3.element_order(r), 3);
        assert_eq!(s3.element_order(t), 2);
        // t r t⁻¹ = r⁻¹
        assert_eq!(s3.conj(t, r), s3.inv(r));
    }

    #[test]
    fn mul_convention_applies_right_factor_first() {
        // a = (0 1 2) as a function i ↦ a[i]; b = (0 1). ab means b first.
        let g = Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let a = g.generators()[0];
        let b = g.generators()[1];
        // (a∘b)(0) = a(b(0)) = a(1) = 2; as a permutation that's [2, 1, 0]
        let ab = g.mul(a, b);
        let expect = Group::from_permutations(&[vec![2, 1, 0]]).unwrap();
        assert_eq!(g.element_order(ab), expect.element_order(expect.generators()[0]));
        // and it differs from b∘a = [0, 2, 1] only through the convention
        assert_ne!(ab, g.mul(b, a));
    }

    #[test]
    fn direct_and_semidirect_products() {
        let c7 = Group::cyclic(7).unwrap();
        let v4 = c2xc2();
        let n = Group::direct_product(&c7, &v4).unwrap();
        assert_eq!(n.order(), 28);
        assert!(n.is_abelian());
        // C7 ⋊ C3 with z g z⁻¹ = g²
        let auto: Vec<usize> = (0..7).map(|g| (2 * g) % 7).collect();
        let f21 = Group::semidirect_cyclic(&c7, &auto, 3).unwrap();
        assert_eq!(f21.order(), 21);
        assert!(!f21.is_abelian());
        let g1 = f21.generators()[0]; // generator of C7
        let z = f21.generators()[1];
        assert_eq!(f21.conj(z, g1), f21.pow(g1, 2));
    }

    #[test]
    fn semidirect_rejects_bad_actions() {
        let c7 = Group::cyclic(7).unwrap();
        // g ↦ 3g has order 6, not dividing 3
        let auto: Vec<usize> = (0..7).map(|g| (3 * g) % 7).collect();
        assert!(matches!(
            Group::semidirect_cyclic(&c7, &auto, 3),
            Err(Error::ActionOrder { .. })
        ));
        // not multiplicative
        let bad: Vec<usize> = vec![0, 2, 1, 3, 4, 5, 6];
        assert!(matches!(
            Group::semidirect_cyclic(&c7, &bad, 3),
            Err(Error::NotAutomorphism)
        ));
    }

    #[test]
    fn subgroup_transversal_and_cosets() {
        let s3 = Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let t = s3.generators()[1];
        let h = Subgroup::generated(&s3, &[t]).unwrap();
        assert_eq!(h.order(), 2);
        assert_eq!(h.transversal().len(), 3);
        assert_eq!(h.transversal()[0], 0);
        for x in 0..s3.order() {
            let (r, s) = h.coset_of(x);
            let rebuilt = s3.mul(h.transversal()[r], h.to_parent(s));
            assert_eq!(rebuilt, x);
        }
        // transversal reps are each the smallest index in their coset
        for (r, &rep) in h.transversal().iter().enumerate() {
            for x in 0..rep {
                let (rx, _) = h.coset_of(x);
                assert_ne!(rx, r);
            }
        }
    }

    #[test]
    fn orbit_stabilizer_consistency() {
        let s3 = Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        for h in [
            Subgroup::generated(&s3, &[s3.generators()[0]]).unwrap(),
            Subgroup::generated(&s3, &[s3.generators()[1]]).unwrap(),
            Subgroup::generated(&s3, &[]).unwrap(),
        ] {
            assert_eq!(h.order() * h.index(), s3.order());
            assert_eq!(h.transversal().len(), h.index());
        }
    }

    #[test]
    fn centralizer_normalizer_sylow() {
        let s3 = Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let r = s3.generators()[0];
        let cent = s3.centralizer_set(&[r]);
        assert_eq!(cent.len(), 3); // <r>
        let a3 = Subgroup::generated(&s3, &[r]).unwrap();
        assert_eq!(s3.normalizer_set(a3.elements()).len(), 6); // A3 normal
        assert!(a3.is_normal());
        let syl3 = s3.sylow_subgroup(3).unwrap();
        assert_eq!(syl3.order(), 3);
        let syl2 = s3.sylow_subgroup(2).unwrap();
        assert_eq!(syl2.order(), 2);
    }

    #[test]
    fn sylow_of_order_84_group() {
        // (C7 × C2²) ⋊ C3: z acts as g ↦ g² on C7 and cyclically permutes
        // the involutions x ↦ y ↦ xy on C2².
        let g = group_84();
        assert_eq!(g.order(), 84);
        let syl2 = g.sylow_subgroup(2).unwrap();
        assert_eq!(syl2.order(), 4);
        assert!(syl2.group().is_abelian());
        let syl7 = g.sylow_subgroup(7).unwrap();
        assert_eq!(syl7.order(), 7);
        let syl3 = g.sylow_subgroup(3).unwrap();
        assert_eq!(syl3.order(), 3);
    }

    fn group_84() -> Group {
        let c7 = Group::cyclic(7).unwrap();
        let v4 = c2xc2();
        let n = Group::direct_product(&c7, &v4).unwrap();
        // index (a, b) = a·4 + b with b indexing (x_exp, y_exp) little-endian
        let auto: Vec<usize> = (0..28)
            .map(|i| {
                let (a, b) = (i / 4, i % 4);
                let a2 = (2 * a) % 7;
                // x=01 ↦ y=10, y=10 ↦ xy=11, xy=11 ↦ x=01
                let b2 = match b {
                    0 => 0,
                    1 => 2,
                    2 => 3,
                    _ => 1,
                };
                a2 * 4 + b2
            })
            .collect();
        Group::semidirect_cyclic(&n, &auto, 3).unwrap()
    }

    #[test]
    fn elementary_abelian_coordinates() {
        let g = group_84();
        // the V4 inside: basis x = index 1, y = index 2 (within C7×V4 block)
        let e = ElementaryAbelian::new(&g, &[1, 2], 2).unwrap();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.sub.order(), 4);
        assert_eq!(e.exponents(0).unwrap(), &[0, 0]);
        assert_eq!(e.exponents(g.mul(1, 2)).unwrap(), &[1, 1]);
        assert_eq!(e.element(&[1, 1]), g.mul(1, 2));
        // z (index 28) conjugates x ↦ y, y ↦ xy: columns (0,1) and (1,1)
        let z = 28;
        let m = e.conj_matrix(z).unwrap();
        assert_eq!(m, vec![vec![0, 1], vec![1, 1]]);
        // homomorphism property: M(z²) = M(z)²  (mod 2)
        let z2 = g.mul(z, z);
        let m2 = e.conj_matrix(z2).unwrap();
        let mm: Vec<Vec<u32>> = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| (0..2).map(|k| m[i][k] * m[k][j]).sum::<u32>() % 2)
                    .collect()
            })
            .collect();
        assert_eq!(m2, mm);
        // an element of C7 is outside the normalizer? no — C7 centralizes E.
        // instead check a proper error case on S3's C3, which V4 can't live in
        let s3 = Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        assert!(ElementaryAbelian::new(&s3, &[s3.generators()[0]], 2).is_err());
    }

    #[test]
    fn rejects_non_group_table() {
        // index 0 not an identity
        let bad = vec![vec![1, 0], vec![0, 1]];
        assert!(Group::from_table(bad, vec![1]).is_err());
    }
}
