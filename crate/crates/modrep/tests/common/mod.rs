//! Shared drivers for the algebraic property suites, used by both the
//! property tests and the acceptance gate.

use modrep::extblocks::{stable_hom_dim, LineSetup};
use modrep::ffla::Field;
use modrep::groups::{ElementaryAbelian, Group};
use modrep::rep::covers::AlgebraCtx;
use modrep::rep::{decompose, hom, Module};
use modrep::scenario;
use modrep::varieties::{line_in_module_variety, line_orbit, line_stabilizer, Line};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Exhaustive field-axiom verification for every prime power p^n ≤ cap.
///
/// Every pairwise axiom (commutativity, inverses, negation) is checked on
/// all pairs directly. The two triple axioms are certified exhaustively in
/// O(q²·n): addition is compared against digitwise arithmetic mod p on
/// every pair (which is associative digit by digit), multiplication against
/// the discrete-log table of a verified generator (associative through
/// integer addition mod q−1), and distributivity a·(x+e) = a·x + a·e on
/// every pair (a, x) with e running over the digit basis — which propagates
/// to arbitrary second summands one digit at a time. Small fields (q ≤ 64)
/// additionally get the direct cubic sweep as a cross-check.
pub fn check_field_axioms_all_prime_powers(cap: u32) {
    let mut is_prime = vec![true; (cap + 1) as usize];
    for p in 2..=cap {
        if is_prime[p as usize] {
            let mut m = p * p;
            while m <= cap {
                is_prime[m as usize] = false;
                m += p;
            }
        }
    }
    for p in 2..=cap {
        if !is_prime[p as usize] {
            continue;
        }
        let mut q = p;
        let mut n = 1;
        while q <= cap {
            let f = Field::new(p, n).unwrap();
            verify_field_pairwise(&f);
            if q <= 64 {
                f.verify_axioms_exhaustive().unwrap();
            }
            q = match q.checked_mul(p) {
                Some(q) => q,
                None => break,
            };
            n += 1;
        }
    }
}

fn verify_field_pairwise(f: &Field) {
    let q = f.size();
    let p = f.p();
    let n = f.n() as usize;
    let digits: Vec<Vec<u32>> = (0..q).map(|a| f.digits(a)).collect();
    let mut buf = vec![0u32; n];
    for a in 0..q {
        assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            assert_eq!(f.mul(a, f.inv(a)), f.one());
        }
        for b in 0..q {
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            for (d, (&x, &y)) in buf.iter_mut().zip(digits[a as usize].iter().zip(&digits[b as usize])) {
                *d = (x + y) % p;
            }
            assert_eq!(f.add(a, b), f.from_digits(&buf));
        }
    }
    // the generator's powers enumerate the nonzero elements exactly once
    let g = f.generator();
    let mut log = vec![u32::MAX; q as usize];
    let mut x = f.one();
    for i in 0..q - 1 {
        assert_eq!(log[x as usize], u32::MAX, "generator order too small");
        log[x as usize] = i;
        x = f.mul(x, g);
    }
    assert_eq!(x, f.one());
    for a in 1..q {
        for b in 1..q {
            let e = (log[a as usize] + log[b as usize]) % (q - 1);
            assert_eq!(f.mul(a, b), f.pow(g, i64::from(e)));
        }
        assert_eq!(f.mul(a, 0), 0);
        assert_eq!(f.mul(0, a), 0);
    }
    // distributivity over the digit basis, exhaustive in the other two slots
    for i in 0..n {
        buf.iter_mut().for_each(|d| *d = 0);
        buf[i] = 1;
        let e = f.from_digits(&buf);
        for a in 0..q {
            let ae = f.mul(a, e);
            for x in 0..q {
                assert_eq!(f.mul(a, f.add(x, e)), f.add(f.mul(a, x), ae));
            }
        }
    }
}

/// A small random module over the given group algebra: a mix of simples,
/// cyclic pieces of the regular module, tensor products, sums, syzygies,
/// and duals.
pub fn random_module(ctx: &AlgebraCtx, rng: &mut ChaCha8Rng) -> Module {
    let f = ctx.field().clone();
    let g = ctx.group().clone();
    let mut pool: Vec<Module> = vec![Module::trivial(g.clone(), f.clone())];
    pool.extend(ctx.simples().unwrap().iter().cloned());
    let reg = Module::regular(g.clone(), f.clone());
    let d = reg.dim();
    let mut v: Vec<u32> = (0..d).map(|_| rng.gen_range(0..f.size())).collect();
    // killing the augmentation keeps the spin inside the radical, hence a
    // proper submodule
    let total = v.iter().fold(0, |acc, &x| f.add(acc, x));
    v[0] = f.sub(v[0], total);
    if v.iter().any(|&x| x != 0) {
        let basis = reg.spin_subspace(&[v]);
        if basis.cols() > 0 && basis.cols() < d {
            pool.push(reg.submodule_on_basis(&basis).unwrap());
            pool.push(reg.quotient_by(&basis).unwrap().0);
        }
    }
    let mut m = pool[rng.gen_range(0..pool.len())].clone();
    for _ in 0..rng.gen_range(0..3) {
        m = match rng.gen_range(0..4) {
            0 => m.tensor(&pool[rng.gen_range(0..pool.len())]).unwrap(),
            1 => m.direct_sum(&pool[rng.gen_range(0..pool.len())]).unwrap(),
            2 => ctx.omega(&m).unwrap(),
            _ => m.dual(),
        };
    }
    if m.dim() == 0 {
        Module::trivial(g, f)
    } else {
        m
    }
}

fn s3() -> Group {
    Group::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap()
}

fn a4() -> Group {
    let v4 = Group::elementary_abelian(2, 2).unwrap();
    // cycle the three involutions: x → y → xy → x
    Group::semidirect_cyclic(&v4, &[0, 2, 3, 1], 3).unwrap()
}

/// A modular fixture alternating between S₃ in characteristic 3 and A₄
/// over GF(4).
fn fixture(seed: u64) -> AlgebraCtx {
    if seed % 2 == 0 {
        AlgebraCtx::new(s3(), Field::new(3, 1).unwrap(), seed)
    } else {
        AlgebraCtx::new(a4(), Field::new(2, 2).unwrap(), seed)
    }
}

/// Frobenius reciprocity dim Hom(M↑G, N) = dim Hom(M, N↓H) on one random
/// triple (M over a Sylow subgroup H, N over G).
pub fn check_frobenius_reciprocity(seed: u64) {
    let ctx = fixture(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xF0);
    let h = ctx.sylow().unwrap().clone();
    let hctx = AlgebraCtx::new(h.group().clone(), ctx.field().clone(), seed);
    let m = random_module(&hctx, &mut rng);
    let n = random_module(&ctx, &mut rng);
    let lhs = hom::hom_dim(&m.induce(&h).unwrap(), &n).unwrap();
    let rhs = hom::hom_dim(&m, &n.restrict(&h).unwrap()).unwrap();
    assert_eq!(lhs, rhs, "Frobenius reciprocity fails at seed {seed}");
}

/// Tate duality dim Ĥom(M, N) = dim Ĥom(N, ΩM) on one random pair.
pub fn check_tate_duality(seed: u64) {
    let ctx = fixture(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1);
    let m = random_module(&ctx, &mut rng);
    let n = random_module(&ctx, &mut rng);
    let lhs = stable_hom_dim(&ctx, &m, &n).unwrap();
    let om = ctx.omega(&m).unwrap();
    let rhs = stable_hom_dim(&ctx, &n, &om).unwrap();
    assert_eq!(lhs, rhs, "Tate duality fails at seed {seed}");
}

/// Krull–Schmidt: decomposing a random module and re-summing the parts
/// gives back an isomorphic module.
pub fn check_krull_schmidt_resum(seed: u64) {
    let ctx = fixture(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5D);
    let a = random_module(&ctx, &mut rng);
    let b = random_module(&ctx, &mut rng);
    let m = a.direct_sum(&b).unwrap();
    let parts = decompose::decompose(&m, &mut rng).unwrap();
    let resum = Module::direct_sum_all(&parts).unwrap();
    assert!(
        decompose::are_isomorphic(&resum, &m, &mut rng).unwrap(),
        "re-summation not isomorphic at seed {seed}"
    );
}

/// |orbit| · |stabilizer| = |G| for the line of every builtin scenario.
pub fn check_orbit_stabilizer_on_scenario_lines() {
    for name in scenario::BUILTIN_NAMES {
        let sc = scenario::builtin(name).unwrap();
        let field = sc.field().unwrap();
        let group = sc.group().unwrap();
        let e = sc.elementary(&group).unwrap();
        let line = sc.line(&field).unwrap();
        let orbit = line_orbit(&field, &e, &line).unwrap();
        let stab = line_stabilizer(&field, &e, &line).unwrap();
        assert_eq!(
            orbit.len() * stab.order(),
            group.order(),
            "orbit-stabilizer fails for {name}"
        );
        assert!(orbit.contains(&line), "orbit misses the base line in {name}");
    }
}

/// The χ-equivariant lift exists and passes its postconditions for the line
/// of every builtin scenario (the constructor verifies equivariance, the
/// Rad² congruences, and nilpotency internally).
pub fn check_equivariant_lifts_on_scenario_lines() {
    for name in scenario::BUILTIN_NAMES {
        let sc = scenario::builtin(name).unwrap();
        let field = sc.field().unwrap();
        let group = sc.group().unwrap();
        let e = sc.elementary(&group).unwrap();
        let line = sc.line(&field).unwrap();
        let e_order = e.sub.order();
        let setup = LineSetup::new(&field, e, line).unwrap();
        assert_eq!(setup.lift().len(), e_order, "lift length wrong in {name}");
    }
}

/// Rank-variety tensor identity on one random pair of E-modules: a line
/// lies in the variety of M⊗N exactly when it lies in both varieties.
pub fn check_tensor_theorem(seed: u64) {
    let (p, field) = if seed % 2 == 0 {
        (2, Field::new(2, 2).unwrap())
    } else {
        (3, Field::new(3, 2).unwrap())
    };
    let big = Group::elementary_abelian(p, 2).unwrap();
    let e = ElementaryAbelian::new(&big, big.generators(), p).unwrap();
    let ctx = AlgebraCtx::new(big.clone(), field.clone(), seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7E);
    let m = random_module(&ctx, &mut rng);
    let n = random_module(&ctx, &mut rng);
    let line = loop {
        let coords: Vec<u32> = (0..2).map(|_| rng.gen_range(0..field.size())).collect();
        if coords.iter().any(|&c| c != 0) {
            break Line::new(&field, coords).unwrap();
        }
    };
    let t = m.tensor(&n).unwrap();
    let lhs = line_in_module_variety(&t, &e, &line);
    let rhs = line_in_module_variety(&m, &e, &line) && line_in_module_variety(&n, &e, &line);
    assert_eq!(lhs, rhs, "tensor variety identity fails at seed {seed}");
}
