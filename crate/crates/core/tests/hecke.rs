use std::sync::Arc;

use fqmodsym::ffpoly::{enumerate_monic, Ideal};
use fqmodsym::hecke::{hecke_definitional, hecke_merel, hecke_operator, restrict_cuspidal, HeckeOp, MerelRoute};
use fqmodsym::linalg::{add, identity, is_zero, mul, scale, Field, PrimeField, Rationals};
use fqmodsym::projline::ProjectiveLine;
use fqmodsym::symspace::{build_relations, quotient_basis, CuspidalSpace, SymSpace};

fn space<F: Field>(q: u32, n: &str, f: F) -> SymSpace<F> {
    let p1 = Arc::new(ProjectiveLine::new(&Ideal::parse(q, n).unwrap()).unwrap());
    let rels = build_relations(&p1);
    quotient_basis(&rels, p1, f)
}

fn ideals(q: u32, d: usize) -> Vec<Ideal> {
    enumerate_monic(q, d, false).into_iter().map(|p| Ideal::new(&p).unwrap()).collect()
}

fn coprime_primes(q: u32, d: usize, level: &Ideal) -> Vec<Ideal> {
    ideals(q, d).into_iter().filter(|p| p.is_prime() && p.is_coprime_to(level.generator())).collect()
}

#[test]
fn routes_agree_in_low_degree() {
    for (q, n) in [(2, "T^3+T+1"), (3, "T^2+1"), (2, "T^3"), (3, "T^2+T"), (2, "T^4+T+1"), (3, "T^3+2*T+2")] {
        let sp = space(q, n, Rationals);
        for d in 1..=2 {
            for p in ideals(q, d).into_iter().filter(|p| p.is_prime()) {
                let a = hecke_merel(&p, &sp).unwrap();
                let b = hecke_definitional(&p, &sp).unwrap();
                assert_eq!(a.matrix, b.matrix, "level {n}, p = {p}");
            }
        }
    }
}

#[test]
fn trivial_index_is_identity() {
    let sp = space(3, "T^3+2*T+2", PrimeField::new(3));
    let t = hecke_merel(&Ideal::unit(3), &sp).unwrap();
    assert_eq!(t.matrix, identity(sp.field(), sp.dim()));
}

#[test]
fn operators_commute_and_multiply() {
    let f = Rationals;
    let sp = space(2, "T^4+T^3+1", f);
    let level = sp.p1().level().clone();
    let ps = coprime_primes(2, 1, &level);
    let ops: Vec<HeckeOp<Rationals>> = ps.iter().map(|p| hecke_merel(p, &sp).unwrap()).collect();
    for a in &ops {
        for b in &ops {
            assert_eq!(mul(&f, &a.matrix, &b.matrix), mul(&f, &b.matrix, &a.matrix));
        }
    }
    // T_(PQ) = T_P T_Q for distinct coprime primes
    let pq = Ideal::new(&(ps[0].generator() * ps[1].generator())).unwrap();
    let t = hecke_merel(&pq, &sp).unwrap();
    assert_eq!(t.matrix, mul(&f, &ops[0].matrix, &ops[1].matrix));
    // T_(P^2) = T_P^2 - |P| Id
    let p2 = Ideal::new(&ps[0].generator().pow(2)).unwrap();
    let t2 = hecke_merel(&p2, &sp).unwrap();
    let norm = f.from_i64(-2);
    let want = add(&f, &mul(&f, &ops[0].matrix, &ops[0].matrix), &scale(&f, &norm, &identity(&f, sp.dim())));
    assert_eq!(t2.matrix, want);
}

#[test]
fn cuspidal_subspace_is_stable() {
    for (q, n) in [(2, "T^5+T^2+1"), (3, "T^3+2*T+2"), (3, "T^2+T")] {
        let sp = Arc::new(space(q, n, PrimeField::new(q)));
        let cusp = CuspidalSpace::new(sp.clone());
        for d in 1..=2 {
            for p in ideals(q, d) {
                let t = hecke_operator(&MerelRoute, &p, &sp).unwrap();
                restrict_cuspidal(&t, &cusp).unwrap();
            }
        }
    }
}

#[test]
fn degree_three_indices_at_degree_seven() {
    let f = Rationals;
    let sp = space(2, "T^7+T+1", f);
    let t = |s: &str| hecke_merel(&Ideal::parse(2, s).unwrap(), &sp).unwrap().matrix;
    let (t1, t2, t3) = (t("T"), t("T^2+T+1"), t("T^3+T+1"));
    assert_eq!(t("T^3+T^2+T"), mul(&f, &t1, &t2));
    assert_eq!(mul(&f, &t1, &t3), mul(&f, &t3, &t1));
    assert_eq!(mul(&f, &t2, &t3), mul(&f, &t3, &t2));
    assert!(!is_zero(&f, &t3));
}
