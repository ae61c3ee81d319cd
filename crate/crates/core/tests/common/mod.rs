//! Seeded randomized property suites shared by the `properties` and
//! `acceptance` targets. Each suite returns the number of cases checked or
//! a description of the first counterexample.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fqmodsym::analysis::{independent, sum_degree, sum_upto, LevelContext, Verdict};
use fqmodsym::ffpoly::{gcd, monic_irreducibles, xgcd, Ideal, Poly};
use fqmodsym::hecke::{Mat2, MerelRoute};
use fqmodsym::linalg::{Field, PrimeField, Rationals};
use fqmodsym::paths::{path_to_symbols, CuspPoint};
use fqmodsym::projline::ProjectiveLine;
use fqmodsym::symspace::{boundary, build_relations, quotient_basis, CuspTable, SymSpace};

pub const SEED: u64 = 0x5eed_2024;
pub const CASES: usize = 500;

pub type PropResult = std::result::Result<usize, String>;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ tag)
}

/// Prime and composite levels with at most a few hundred generators.
pub fn level_pool() -> Vec<Ideal> {
    [
        (2, "T"),
        (2, "T^2"),
        (2, "T^2+T"),
        (2, "T^3+T+1"),
        (2, "T^3"),
        (2, "T^3+T^2+T"),
        (2, "T^4+T+1"),
        (2, "T^4+T^2"),
        (2, "T^5+T^2+1"),
        (3, "T^2+1"),
        (3, "T^2+T"),
        (3, "T^3+2*T+2"),
        (3, "T^3+T^2"),
        (3, "T^4+T+2"),
    ]
    .into_iter()
    .map(|(q, s)| Ideal::parse(q, s).unwrap())
    .collect()
}

fn random_poly(rng: &mut ChaCha8Rng, q: u32, max_deg: usize) -> Poly {
    Poly::from_index(q, rng.gen_range(0..(q as u64).pow(max_deg as u32 + 1)))
}

fn random_cusp(rng: &mut ChaCha8Rng, q: u32) -> CuspPoint {
    if rng.gen_ratio(1, 12) {
        return CuspPoint::infinity(q);
    }
    loop {
        let den = random_poly(rng, q, 4);
        if !den.is_zero() {
            return CuspPoint::new(&random_poly(rng, q, 5), &den).unwrap();
        }
    }
}

/// A random element of `Gamma_0(n)` with determinant 1.
fn random_gamma0(rng: &mut ChaCha8Rng, level: &Ideal) -> Mat2 {
    let q = level.field_size();
    loop {
        let c = level.generator() * &random_poly(rng, q, 2);
        let d = random_poly(rng, q, 3);
        if d.is_zero() || !gcd(&c, &d).is_one() {
            continue;
        }
        // s*d + t*c = 1, so (s, -t; c, d) has determinant 1
        let (_, s, t) = xgcd(&d, &c).unwrap();
        let k = random_poly(rng, q, 2);
        // shifting by (1 k; 0 1) on the left keeps the matrix in Gamma_0(n)
        let a = &s + &(&k * &c);
        let b = &(-&t) + &(&k * &d);
        return Mat2::new(a, b, c, d);
    }
}

struct Spaces {
    q: Vec<SymSpace<Rationals>>,
    fp: Vec<SymSpace<PrimeField>>,
}

fn spaces(pool: &[Ideal]) -> Spaces {
    let mut q = Vec::new();
    let mut fp = Vec::new();
    for level in pool {
        let p1 = Arc::new(ProjectiveLine::new(level).unwrap());
        let rels = build_relations(&p1);
        q.push(quotient_basis(&rels, p1.clone(), Rationals));
        fp.push(quotient_basis(&rels, p1, PrimeField::new(level.field_size())));
    }
    Spaces { q, fp }
}

fn relation_vanishes<F: Field>(sp: &SymSpace<F>, terms: &[(usize, i64)]) -> bool {
    let f = sp.field();
    let mut acc = vec![f.zero(); sp.dim()];
    for &(g, c) in terms {
        let c = f.from_i64(c);
        for (a, x) in acc.iter_mut().zip(sp.project(g)) {
            *a = f.add(a, &f.mul(&c, x));
        }
    }
    acc.iter().all(|x| f.is_zero(x))
}

/// Every relation row, and random integer combinations of rows, project to 0.
pub fn relation_projection(cases: usize) -> PropResult {
    let mut rng = rng(1);
    let pool = level_pool();
    let sp = spaces(&pool);
    let rels: Vec<_> = pool.iter().map(|l| build_relations(&ProjectiveLine::new(l).unwrap())).collect();
    for case in 0..cases {
        let i = rng.gen_range(0..pool.len());
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let row = rels[i].rows.choose(&mut rng).unwrap();
            let k = rng.gen_range(-3i64..=3);
            terms.extend(row.terms.iter().map(|&(g, c)| (g, k * c)));
        }
        if !relation_vanishes(&sp.q[i], &terms) || !relation_vanishes(&sp.fp[i], &terms) {
            return Err(format!("case {case}: level {} combination {terms:?}", pool[i]));
        }
    }
    Ok(cases)
}

/// The boundary of the decomposition of `[r, s]` is `(s) - (r)` on cusp classes.
pub fn path_boundary(cases: usize) -> PropResult {
    let mut rng = rng(2);
    let pool = level_pool();
    let tables: Vec<CuspTable> = pool.iter().map(CuspTable::new).collect();
    let lines: Vec<ProjectiveLine> = pool.iter().map(|l| ProjectiveLine::new(l).unwrap()).collect();
    for case in 0..cases {
        let i = rng.gen_range(0..pool.len());
        let q = pool[i].field_size();
        let (r, s) = (random_cusp(&mut rng, q), random_cusp(&mut rng, q));
        let mut got: BTreeMap<usize, i64> = BTreeMap::new();
        for (g, c) in path_to_symbols(&r, &s, &lines[i]).iter() {
            for (k, v) in boundary(&lines[i], &tables[i], g) {
                *got.entry(k).or_insert(0) += c * v;
            }
        }
        got.retain(|_, v| *v != 0);
        let mut want: BTreeMap<usize, i64> = BTreeMap::new();
        *want.entry(tables[i].classify(&s)).or_insert(0) += 1;
        *want.entry(tables[i].classify(&r)).or_insert(0) -= 1;
        want.retain(|_, v| *v != 0);
        if got != want {
            return Err(format!("case {case}: level {}, [{r}, {s}]: boundary {got:?}, expected {want:?}", pool[i]));
        }
    }
    Ok(cases)
}

/// `[g r, g s] = [r, s]` in `SM(n, Q)` for `g` in `Gamma_0(n)`.
pub fn gamma0_invariance(cases: usize) -> PropResult {
    let mut rng = rng(3);
    let pool = level_pool();
    let sp = spaces(&pool);
    for case in 0..cases {
        let i = rng.gen_range(0..pool.len());
        let q = pool[i].field_size();
        let (r, s) = (random_cusp(&mut rng, q), random_cusp(&mut rng, q));
        let g = random_gamma0(&mut rng, &pool[i]);
        let p1 = sp.q[i].p1();
        let a = sp.q[i].project_combination(&path_to_symbols(&r, &s, p1));
        let b = sp.q[i].project_combination(&path_to_symbols(&g.act(&r), &g.act(&s), p1));
        if a != b {
            return Err(format!("case {case}: level {}, [{r}, {s}], g = {g}", pool[i]));
        }
    }
    Ok(cases)
}

#[derive(Debug, PartialEq, Eq)]
struct Verdicts {
    dims: (usize, usize),
    s1: Verdict,
    s2: Verdict,
    s3: Verdict,
    independent: bool,
}

fn verdicts(ctx: &mut LevelContext) -> Verdicts {
    let q = ctx.level().field_size();
    let f = *ctx.field();
    let s1 = ctx.evaluate(&sum_upto(q, 1)).unwrap();
    let s2 = ctx.evaluate(&sum_degree(q, 2)).unwrap();
    let s3 = ctx.evaluate(&sum_degree(q, 3)).unwrap();
    Verdicts {
        dims: (ctx.ambient().dim(), ctx.cuspidal().dim()),
        s1: Verdict::of(&s1),
        s2: Verdict::of(&s2),
        s3: Verdict::of(&s3),
        independent: independent(&f, &[s1, s2]).unwrap(),
    }
}

/// Reordering `P^1(A/n)` changes the chosen basis but not any verdict.
pub fn permutation_invariance(cases: usize) -> PropResult {
    let mut rng = rng(4);
    let pool: Vec<Ideal> = [(2, 3), (2, 4), (2, 5), (3, 3)]
        .into_iter()
        .flat_map(|(q, d)| monic_irreducibles(q, d).into_iter().take(2))
        .map(|p| Ideal::new(&p).unwrap())
        .collect();
    let base: Vec<Verdicts> = pool.iter().map(|l| verdicts(&mut LevelContext::new(l).unwrap())).collect();
    for case in 0..cases {
        let i = rng.gen_range(0..pool.len());
        let p1 = ProjectiveLine::new(&pool[i]).unwrap();
        let mut perm: Vec<usize> = (0..p1.len()).collect();
        perm.shuffle(&mut rng);
        let p1 = Arc::new(p1.permuted(&perm).unwrap());
        let sp = quotient_basis(&build_relations(&p1), p1, PrimeField::new(pool[i].field_size()));
        let mut ctx = LevelContext::from_space(Arc::new(sp), Arc::new(MerelRoute), None);
        let got = verdicts(&mut ctx);
        if got != base[i] {
            return Err(format!("case {case}: level {}: {got:?} vs {:?}", pool[i], base[i]));
        }
    }
    Ok(cases)
}
