//! Distinguished elements of the Hecke algebra `T(n, F_p)` evaluated on
//! `SM_0(n) ⊗ F_p`: vanishing, linear independence, the explicit degree-one
//! identity and its nonvanishing certificate, and the table of experimental
//! claims for prime levels.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::ffpoly::{carlitz_coeffs, enumerate_monic, gcd, monic_irreducibles, Ideal, Poly};
use crate::hecke::{hecke_operator, restrict_cuspidal, BasisId, HeckeOp, HeckeRoute, MerelRoute};
use crate::linalg::{mul_vec, rank_of_vectors, rref, Field, Matrix, PrimeField};
use crate::projline::ProjectiveLine;
use crate::symspace::{build_relations, quotient_basis, z_structure, CuspidalSpace, SymSpace};

/// Default cap on `|P^1(A/n)|` above which a level is refused.
pub const DEFAULT_GENERATOR_CAP: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightRing {
    /// All weights are constants.
    Fp,
    /// Some weight is a non-constant polynomial.
    FpT,
}

/// `sum weight_i * T_(index_i)` with weights in `F_p[T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub label: String,
    pub terms: Vec<(Poly, Ideal)>,
    pub ring: WeightRing,
}

impl AlgebraElement {
    pub fn new(label: impl Into<String>, terms: Vec<(Poly, Ideal)>) -> AlgebraElement {
        let terms: Vec<(Poly, Ideal)> = terms.into_iter().filter(|(w, _)| !w.is_zero()).collect();
        let ring = if terms.iter().all(|(w, _)| w.degree() == Some(0)) { WeightRing::Fp } else { WeightRing::FpT };
        AlgebraElement { label: label.into(), terms, ring }
    }

    /// Sum of `T_p` over the given ideals, all weights 1.
    pub fn unweighted(label: impl Into<String>, ideals: impl IntoIterator<Item = Ideal>) -> AlgebraElement {
        AlgebraElement::new(label, ideals.into_iter().map(|p| (Poly::one(p.field_size()), p)).collect())
    }

    /// `a*self + b*other`.
    pub fn combine(&self, a: i64, other: &AlgebraElement, b: i64, label: impl Into<String>) -> AlgebraElement {
        let scale = |w: &Poly, c: i64| w * &Poly::constant(w.field_size(), c);
        let mut terms: Vec<(Poly, Ideal)> = self.terms.iter().map(|(w, p)| (scale(w, a), p.clone())).collect();
        terms.extend(other.terms.iter().map(|(w, p)| (scale(w, b), p.clone())));
        AlgebraElement::new(label, terms)
    }

    /// Largest index degree.
    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.degree()).max().unwrap_or(0)
    }

    pub fn ideals(&self) -> Vec<Ideal> {
        let mut v: Vec<Ideal> = self.terms.iter().map(|(_, p)| p.clone()).collect();
        v.sort_by(|a, b| a.generator().cmp(b.generator()));
        v.dedup();
        v
    }
}

fn ideals_of_degree(q: u32, d: usize) -> impl Iterator<Item = Ideal> {
    enumerate_monic(q, d, false).into_iter().map(|p| Ideal::new(&p).expect("monic"))
}

/// `S_{<=d} = sum_{deg p <= d} T_p`.
pub fn sum_upto(q: u32, d: usize) -> AlgebraElement {
    AlgebraElement::unweighted(format!("S_<={d}"), (0..=d).flat_map(|k| ideals_of_degree(q, k)))
}

/// `S_d = sum_{deg p = d} T_p`.
pub fn sum_degree(q: u32, d: usize) -> AlgebraElement {
    AlgebraElement::unweighted(format!("S_{d}"), ideals_of_degree(q, d))
}

/// `sum_{P in A+_d} P^l T_P`; for `l = 1` the label is `S_d,A`.
pub fn power_weighted(q: u32, d: usize, l: u32) -> AlgebraElement {
    let label = if l == 1 { format!("S_{d},A") } else { format!("S_{d},A^{l}") };
    AlgebraElement::new(label, ideals_of_degree(q, d).map(|p| (p.generator().pow(l as u64), p)).collect())
}

/// Whether `exps` satisfies `0 <= i_j <= q-1` and `sum i_j <= (d-1)(q-1) - 1`.
pub fn carlitz_tuple_admissible(q: u32, exps: &[u32]) -> bool {
    let d = exps.len() as i64;
    let sum: i64 = exps.iter().map(|&e| e as i64).sum();
    d >= 1 && exps.iter().all(|&e| e < q) && sum < (d - 1) * (q as i64 - 1)
}

/// All admissible exponent tuples of length `d`, in lexicographic order.
pub fn admissible_carlitz_tuples(q: u32, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; d];
    loop {
        if carlitz_tuple_admissible(q, &cur) {
            out.push(cur.clone());
        }
        // odometer with the last entry varying fastest
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] + 1 < q {
                cur[k] += 1;
                break;
            }
            cur[k] = 0;
        }
    }
}

/// `sum_{P in A+_d} C_{P,0}^{i_0} ... C_{P,d-1}^{i_{d-1}} T_P` with `d = exps.len()`.
pub fn carlitz_weighted(q: u32, exps: &[u32]) -> Result<AlgebraElement> {
    if !carlitz_tuple_admissible(q, exps) {
        return Err(Error::ExponentOutOfRange(exps.to_vec()));
    }
    let d = exps.len();
    let mut terms = Vec::new();
    for p in ideals_of_degree(q, d) {
        let c = carlitz_coeffs(p.generator())?;
        let mut w = Poly::one(q);
        for (j, &e) in exps.iter().enumerate() {
            w = &w * &c[j].pow(e as u64);
        }
        terms.push((w, p));
    }
    let tag: Vec<String> = exps.iter().map(u32::to_string).collect();
    Ok(AlgebraElement::new(format!("C_{d}[{}]", tag.join(",")), terms))
}

/// Kernel elements with index degree at most `dmax`: `S_{<=d}`, `S_d`
/// (`d >= 2`), power-weighted sums and Carlitz-weighted sums with nonzero
/// admissible exponents.
pub fn kernel_element_catalog(q: u32, dmax: usize) -> Vec<AlgebraElement> {
    let mut out = Vec::new();
    for d in 1..=dmax {
        out.push(sum_upto(q, d));
    }
    for d in 2..=dmax {
        out.push(sum_degree(q, d));
        let lmax = (q - 1).min(((d as u32 - 1) * (q - 1)).saturating_sub(1));
        for l in 1..=lmax {
            out.push(power_weighted(q, d, l));
        }
        for exps in admissible_carlitz_tuples(q, d) {
            if exps.iter().any(|&e| e > 0) {
                out.push(carlitz_weighted(q, &exps).expect("admissible"));
            }
        }
    }
    out
}

/// An element of `T(n, F_p)` as an `F_p[T]`-matrix: `layers[k]` is the
/// coefficient of `T^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluatedElement {
    pub label: String,
    pub layers: Vec<Matrix<u32>>,
    pub basis: BasisId,
}

impl EvaluatedElement {
    pub fn dim(&self) -> usize {
        self.layers.first().map_or(0, |m| m.rows())
    }

    pub fn is_zero(&self) -> bool {
        self.layers.iter().all(|m| m.entries().iter().all(|&x| x == 0))
    }

    /// Constant-weight elements as a single matrix.
    pub fn constant_matrix(&self) -> Option<&Matrix<u32>> {
        (self.layers.len() == 1).then(|| &self.layers[0])
    }

    /// Concatenation of all layers, padded to `nlayers`.
    pub fn flatten(&self, nlayers: usize) -> Vec<u32> {
        let n = self.dim() * self.dim();
        let mut v = Vec::with_capacity(n * nlayers);
        for k in 0..nlayers {
            match self.layers.get(k) {
                Some(m) => v.extend_from_slice(m.entries()),
                None => v.extend(std::iter::repeat_n(0, n)),
            }
        }
        v
    }

    /// `a*self + b*other` over `F_p`.
    pub fn combine(&self, f: &PrimeField, a: i64, other: &EvaluatedElement, b: i64) -> Result<EvaluatedElement> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        let (a, b) = (f.from_i64(a), f.from_i64(b));
        let nl = self.layers.len().max(other.layers.len());
        let dim = self.dim();
        let zero = Matrix::filled(dim, dim, 0u32);
        let layers = (0..nl)
            .map(|k| {
                let x = self.layers.get(k).unwrap_or(&zero);
                let y = other.layers.get(k).unwrap_or(&zero);
                let entries: Vec<Vec<u32>> = (0..dim)
                    .map(|i| (0..dim).map(|j| f.add(&f.mul(&a, &x[(i, j)]), &f.mul(&b, &y[(i, j)]))).collect())
                    .collect();
                Matrix::from_rows(entries, dim)
            })
            .collect();
        Ok(trim(EvaluatedElement {
            label: format!("{}*{}+{}*{}", a, self.label, b, other.label),
            layers,
            basis: self.basis.clone(),
        }))
    }
}

fn trim(mut e: EvaluatedElement) -> EvaluatedElement {
    while e.layers.len() > 1 && e.layers.last().unwrap().entries().iter().all(|&x| x == 0) {
        e.layers.pop();
    }
    e
}

/// Exact zero test.
pub fn is_zero(e: &EvaluatedElement) -> bool {
    e.is_zero()
}

/// `F_p`-linear independence of the flattened matrices (each power of `T`
/// is a separate block of coordinates).
pub fn independent(f: &PrimeField, elements: &[EvaluatedElement]) -> Result<bool> {
    let Some(first) = elements.first() else { return Ok(true) };
    if elements.iter().any(|e| e.basis != first.basis) {
        return Err(Error::BasisMismatch);
    }
    let nl = elements.iter().map(|e| e.layers.len()).max().unwrap_or(1);
    let vecs: Vec<Vec<u32>> = elements.iter().map(|e| e.flatten(nl)).collect();
    Ok(rank_of_vectors(f, &vecs) == elements.len())
}

/// Everything needed to evaluate Hecke-algebra elements at one level over
/// `F_p`, with per-index operator memoization.
pub struct LevelContext {
    field: PrimeField,
    ambient: Arc<SymSpace<PrimeField>>,
    cuspidal: CuspidalSpace<PrimeField>,
    route: Arc<dyn HeckeRoute>,
    cache: Option<Cache>,
    ambient_ops: BTreeMap<Poly, HeckeOp<PrimeField>>,
    cusp_ops: BTreeMap<Poly, HeckeOp<PrimeField>>,
}

impl LevelContext {
    pub fn new(level: &Ideal) -> Result<LevelContext> {
        LevelContext::open(level, Arc::new(MerelRoute), None)
    }

    /// Builds (or loads from `cache`) the space over `F_p`, `p = q`.
    pub fn open(level: &Ideal, route: Arc<dyn HeckeRoute>, cache: Option<Cache>) -> Result<LevelContext> {
        let p1 = Arc::new(ProjectiveLine::new(level)?);
        let field = PrimeField::new(level.field_size());
        let cached = match &cache {
            Some(c) => c.load_space(p1.clone(), field)?,
            None => None,
        };
        let ambient = match cached {
            Some(sp) => sp,
            None => {
                let sp = quotient_basis(&build_relations(&p1), p1, field);
                if let Some(c) = &cache {
                    c.store_space(&sp)?;
                }
                sp
            }
        };
        Ok(LevelContext::from_space(Arc::new(ambient), route, cache))
    }

    pub fn from_space(
        ambient: Arc<SymSpace<PrimeField>>,
        route: Arc<dyn HeckeRoute>,
        cache: Option<Cache>,
    ) -> LevelContext {
        let field = *ambient.field();
        let cuspidal = CuspidalSpace::new(ambient.clone());
        LevelContext { field, ambient, cuspidal, route, cache, ambient_ops: BTreeMap::new(), cusp_ops: BTreeMap::new() }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn level(&self) -> &Ideal {
        self.ambient.p1().level()
    }

    pub fn ambient(&self) -> &Arc<SymSpace<PrimeField>> {
        &self.ambient
    }

    pub fn cuspidal(&self) -> &CuspidalSpace<PrimeField> {
        &self.cuspidal
    }

    fn compute_ambient(&self, p: &Ideal) -> Result<HeckeOp<PrimeField>> {
        let name = self.route.name();
        if let Some(c) = &self.cache {
            if let Some(op) = c.load_op(&self.ambient, p, name)? {
                return Ok(op);
            }
        }
        let op = hecke_operator(self.route.as_ref(), p, &self.ambient)?;
        if let Some(c) = &self.cache {
            c.store_op(&self.ambient, &op, name)?;
        }
        Ok(op)
    }

    /// Computes every missing ambient and cuspidal operator in parallel.
    pub fn prepare(&mut self, ideals: &[Ideal]) -> Result<()> {
        let missing: Vec<&Ideal> = ideals.iter().filter(|p| !self.cusp_ops.contains_key(p.generator())).collect();
        let this = &*self;
        let computed: Vec<(Poly, HeckeOp<PrimeField>, HeckeOp<PrimeField>)> = missing
            .par_iter()
            .map(|p| {
                let amb = match this.ambient_ops.get(p.generator()) {
                    Some(op) => op.clone(),
                    None => this.compute_ambient(p)?,
                };
                let cusp = restrict_cuspidal(&amb, &this.cuspidal)?;
                Ok((p.generator().clone(), amb, cusp))
            })
            .collect::<Result<_>>()?;
        for (g, amb, cusp) in computed {
            self.ambient_ops.insert(g.clone(), amb);
            self.cusp_ops.insert(g, cusp);
        }
        Ok(())
    }

    pub fn ambient_operator(&mut self, p: &Ideal) -> Result<&HeckeOp<PrimeField>> {
        self.prepare(std::slice::from_ref(p))?;
        Ok(&self.ambient_ops[p.generator()])
    }

    pub fn cuspidal_operator(&mut self, p: &Ideal) -> Result<&HeckeOp<PrimeField>> {
        self.prepare(std::slice::from_ref(p))?;
        Ok(&self.cusp_ops[p.generator()])
    }

    fn evaluate_with(&mut self, el: &AlgebraElement, cuspidal: bool) -> Result<EvaluatedElement> {
        self.prepare(&el.ideals())?;
        let f = &self.field;
        let (dim, basis) = if cuspidal {
            (self.cuspidal.dim(), BasisId::cuspidal(&self.cuspidal))
        } else {
            (self.ambient.dim(), BasisId::ambient(&self.ambient))
        };
        let nl = el.terms.iter().filter_map(|(w, _)| w.degree()).max().unwrap_or(0) + 1;
        let mut acc = vec![vec![0u32; dim * dim]; nl];
        for (w, p) in &el.terms {
            let ops = if cuspidal { &self.cusp_ops } else { &self.ambient_ops };
            let m = ops[p.generator()].matrix.entries();
            for (k, &c) in w.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (a, &x) in acc[k].iter_mut().zip(m) {
                    if x != 0 {
                        *a = f.add(a, &f.mul(&c, &x));
                    }
                }
            }
        }
        let layers = acc
            .into_iter()
            .map(|v| Matrix::from_rows(v.chunks(dim.max(1)).map(<[u32]>::to_vec).take(dim).collect(), dim))
            .collect();
        Ok(trim(EvaluatedElement { label: el.label.clone(), layers, basis }))
    }

    /// The element acting on `SM_0 ⊗ F_p`.
    pub fn evaluate(&mut self, el: &AlgebraElement) -> Result<EvaluatedElement> {
        self.evaluate_with(el, true)
    }

    /// The element acting on the ambient `SM ⊗ F_p`.
    pub fn evaluate_ambient(&mut self, el: &AlgebraElement) -> Result<EvaluatedElement> {
        self.evaluate_with(el, false)
    }
}

/// Free-function form of [`LevelContext::evaluate`].
pub fn evaluate(el: &AlgebraElement, ctx: &mut LevelContext) -> Result<EvaluatedElement> {
    ctx.evaluate(el)
}

/// Generator indices of the family `xi(1:0)` together with `xi(u:v)`, `u, v`
/// monic, `deg v < deg u`, `gcd(u, v) = 1`, where `2 deg u < deg n`, or
/// `deg u <= max_deg_u` when given.
pub fn independent_family(p1: &ProjectiveLine, max_deg_u: Option<usize>) -> Vec<usize> {
    let level = p1.level();
    let q = level.field_size();
    let bound = max_deg_u.unwrap_or((level.degree().saturating_sub(1)) / 2);
    let mut out = vec![p1.index_of(&Poly::one(q), &Poly::zero(q)).expect("infinity")];
    for du in 1..=bound {
        for u in enumerate_monic(q, du, false) {
            for v in enumerate_monic(q, du - 1, true) {
                if gcd(&u, &v).is_one() {
                    out.push(p1.index_of(&u, &v).expect("coprime pair"));
                }
            }
        }
    }
    out
}

/// Rank of the family's coordinate vectors in `space`.
pub fn family_rank<F: Field>(space: &SymSpace<F>, family: &[usize]) -> usize {
    let vecs: Vec<Vec<F::Elem>> = family.iter().map(|&g| space.project(g).to_vec()).collect();
    rank_of_vectors(space.field(), &vecs)
}

/// Coefficients of `target` in the family, if it lies in its span (unique
/// when the family is independent).
pub fn express_in_family<F: Field>(space: &SymSpace<F>, family: &[usize], target: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let f = space.field();
    let k = family.len();
    let rows: Vec<Vec<F::Elem>> = (0..space.dim())
        .map(|i| {
            let mut r: Vec<F::Elem> = family.iter().map(|&g| space.project(g)[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let mut m = Matrix::from_rows(rows, k + 1);
    let pivots = rref(f, &mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![f.zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[(r, k)].clone();
    }
    Some(x)
}

/// Nonvanishing certificate: the right-hand side of the degree-one
/// identity has a nonzero coefficient on an independent family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCertificate {
    pub family_size: usize,
    pub family_rank: usize,
    /// `None` when the right-hand side is not in the family's span.
    pub nonzero_coefficients: Option<usize>,
}

impl FamilyCertificate {
    pub fn proves_nonzero(&self) -> bool {
        self.family_rank == self.family_size && self.nonzero_coefficients.unwrap_or(0) > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop61Report {
    pub u: String,
    pub holds: bool,
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
    pub certificate: FamilyCertificate,
}

/// Checks `sum_{deg p <= 1} T_p x(u:1) = sum_{deg P = 1} sum_{v} x(Pu:v)` in
/// `SM ⊗ F_p`, the inner sum over monic `v` of degree at most 1 with
/// `v != u, P`.
pub fn prop61_report(ctx: &mut LevelContext, u: &Poly) -> Result<Prop61Report> {
    let level = ctx.level().clone();
    let q = level.field_size();
    if !(u.is_monic() && u.degree() == Some(1)) {
        return Err(Error::Precondition(format!("u = {u} must be monic of degree 1")));
    }
    if level.has_degree_one_factor() {
        return Err(Error::Precondition(format!("level {level} has a degree-1 factor")));
    }
    let p1 = ctx.ambient().p1().clone();
    let x_u = p1.index_of(u, &Poly::one(q)).expect("(u:1) is a point");
    let v_u = ctx.ambient().project(x_u).to_vec();
    if !ctx.cuspidal().contains(&v_u) {
        return Err(Error::Precondition(format!("x({u}:1) is not cuspidal")));
    }
    let s1 = sum_upto(q, 1);
    let op = ctx.evaluate_ambient(&s1)?;
    let f = *ctx.field();
    let lhs = mul_vec(&f, &op.layers[0], &v_u);

    let mut rhs = vec![0u32; ctx.ambient().dim()];
    let mut rhs_gens = Vec::new();
    let vs = enumerate_monic(q, 1, true);
    for big_p in enumerate_monic(q, 1, false) {
        let pu = &big_p * u;
        for v in vs.iter().filter(|v| *v != u && **v != big_p) {
            let g = p1.index_of(&pu, v).expect("coprime to a level without degree-1 factors");
            rhs_gens.push(g);
            for (a, x) in rhs.iter_mut().zip(ctx.ambient().project(g)) {
                *a = f.add(a, x);
            }
        }
    }

    let family = independent_family(&p1, Some(2));
    let family_rank = family_rank(ctx.ambient(), &family);
    let nonzero_coefficients =
        express_in_family(ctx.ambient(), &family, &rhs).map(|x| x.iter().filter(|c| **c != 0).count());
    Ok(Prop61Report {
        u: u.to_string(),
        holds: lhs == rhs,
        lhs,
        rhs,
        certificate: FamilyCertificate { family_size: family.len(), family_rank, nonzero_coefficients },
    })
}

/// `verify_prop61(u, n)` on a freshly built context.
pub fn verify_prop61(u: &Poly, level: &Ideal) -> Result<bool> {
    let mut ctx = LevelContext::new(level)?;
    Ok(prop61_report(&mut ctx, u)?.holds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Zero,
    Nonzero,
}

impl Verdict {
    pub fn of(e: &EvaluatedElement) -> Verdict {
        if e.is_zero() {
            Verdict::Zero
        } else {
            Verdict::Nonzero
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Zero => "zero",
            Verdict::Nonzero => "nonzero",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRow {
    pub q: u32,
    #[serde(rename = "N")]
    pub n: String,
    pub deg: usize,
    pub status: RowStatus,
    pub generators: usize,
    pub dim_sm: usize,
    pub dim_sm0: usize,
    pub cusps: usize,
    /// Invariant factors of the torsion of `SM(n, Z)`.
    pub torsion: Vec<String>,
    pub elements: BTreeMap<String, Verdict>,
    pub identities: BTreeMap<String, bool>,
    pub independence: BTreeMap<String, bool>,
    /// Measured verdicts contradicting a stated result.
    pub mismatches: Vec<String>,
    /// Measured verdicts differing from statements offered only as suggestions.
    pub remarks: Vec<String>,
    pub timings_ms: BTreeMap<String, u64>,
}

#[derive(Clone)]
pub struct ClaimOptions {
    pub dmax: usize,
    pub first_k: Option<usize>,
    pub generator_cap: usize,
    pub route: Arc<dyn HeckeRoute>,
    pub cache: Option<Cache>,
    pub torsion: bool,
    pub timings: bool,
}

impl Default for ClaimOptions {
    fn default() -> ClaimOptions {
        ClaimOptions {
            dmax: 3,
            first_k: None,
            generator_cap: DEFAULT_GENERATOR_CAP,
            route: Arc::new(MerelRoute),
            cache: None,
            torsion: true,
            timings: true,
        }
    }
}

pub const ID_S2_NEG_S1: &str = "S_2=-S_<=1";
pub const IND_S1_S2: &str = "(S_<=1,S_2)";
pub const IND_S2A_S1_S2: &str = "(S_2,A,S_<=1,S_2)";

/// Prime levels of each degree in enumeration order, truncated to `first_k`.
pub fn claim_levels(q: u32, degrees: RangeInclusive<usize>, first_k: Option<usize>) -> Vec<Ideal> {
    degrees
        .flat_map(|d| {
            let mut v = monic_irreducibles(q, d);
            if let Some(k) = first_k {
                v.truncate(k);
            }
            v
        })
        .map(|p| Ideal::new(&p).expect("monic"))
        .collect()
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// One row of the claims table for a prime level.
pub fn claim_row(level: &Ideal, opts: &ClaimOptions) -> Result<ClaimRow> {
    let q = level.field_size();
    let deg = level.degree();
    let generators = q.pow(deg as u32) as usize + 1;
    let mut row = ClaimRow {
        q,
        n: level.to_string(),
        deg,
        status: RowStatus::Ok,
        generators,
        dim_sm: 0,
        dim_sm0: 0,
        cusps: 0,
        torsion: Vec::new(),
        elements: BTreeMap::new(),
        identities: BTreeMap::new(),
        independence: BTreeMap::new(),
        mismatches: Vec::new(),
        remarks: Vec::new(),
        timings_ms: BTreeMap::new(),
    };
    if generators > opts.generator_cap {
        row.status = RowStatus::Infeasible;
        return Ok(row);
    }
    let total = Instant::now();
    let t = Instant::now();
    let mut ctx = LevelContext::open(level, opts.route.clone(), opts.cache.clone())?;
    row.generators = ctx.ambient().p1().len();
    row.dim_sm = ctx.ambient().dim();
    row.dim_sm0 = ctx.cuspidal().dim();
    row.cusps = ctx.cuspidal().cusps().len();
    row.timings_ms.insert("space".into(), ms(t));

    if opts.torsion {
        let t = Instant::now();
        let z = z_structure(&build_relations(ctx.ambient().p1()));
        row.torsion = z.torsion.iter().map(|x| x.to_string()).collect();
        row.timings_ms.insert("torsion".into(), ms(t));
    }

    let t = Instant::now();
    let mut elements = vec![sum_upto(q, 1)];
    elements.extend((2..=opts.dmax).map(|d| sum_degree(q, d)));
    if q >= 3 && opts.dmax >= 2 {
        elements.push(power_weighted(q, 2, 1));
    }
    let all_ideals: Vec<Ideal> = {
        let mut v: Vec<Ideal> = elements.iter().flat_map(|e| e.ideals()).collect();
        v.sort_by(|a, b| a.generator().cmp(b.generator()));
        v.dedup();
        v
    };
    ctx.prepare(&all_ideals)?;
    let mut values: BTreeMap<String, EvaluatedElement> = BTreeMap::new();
    for el in &elements {
        let e = ctx.evaluate(el)?;
        row.elements.insert(el.label.clone(), Verdict::of(&e));
        values.insert(el.label.clone(), e);
    }
    row.timings_ms.insert("hecke".into(), ms(t));

    let f = *ctx.field();
    if let (Some(s1), Some(s2)) = (values.get("S_<=1"), values.get("S_2")) {
        row.identities.insert(ID_S2_NEG_S1.into(), s2.combine(&f, 1, s1, 1)?.is_zero());
        row.independence.insert(IND_S1_S2.into(), independent(&f, &[s1.clone(), s2.clone()])?);
        if let Some(s2a) = values.get("S_2,A") {
            row.independence.insert(IND_S2A_S1_S2.into(), independent(&f, &[s2a.clone(), s1.clone(), s2.clone()])?);
        }
    }
    check_expectations(&mut row, opts.dmax, opts.torsion);
    row.timings_ms.insert("total".into(), ms(total));
    if !opts.timings {
        row.timings_ms.values_mut().for_each(|v| *v = 0);
    }
    Ok(row)
}

fn expect_element(row: &mut ClaimRow, label: &str, want: Verdict, source: &str) {
    if let Some(&got) = row.elements.get(label) {
        if got != want {
            row.mismatches.push(format!("{label} is {}, expected {} {source}", got.as_str(), want.as_str()));
        }
    }
}

/// Compares a measured row of a prime level with the stated results.
pub fn check_expectations(row: &mut ClaimRow, dmax: usize, torsion: bool) {
    let deg = row.deg;
    if deg == 3 {
        expect_element(row, "S_<=1", Verdict::Zero, "at degree 3");
    }
    if deg == 4 {
        expect_element(row, "S_<=1", Verdict::Zero, "at degree 4");
        expect_element(row, "S_2", Verdict::Zero, "at degree 4");
    }
    if deg >= 5 {
        expect_element(row, "S_<=1", Verdict::Nonzero, "from degree 5");
        expect_element(row, "S_2", Verdict::Nonzero, "from degree 5");
        for d in 3..=dmax {
            expect_element(row, &format!("S_{d}"), Verdict::Zero, "from degree 5 for d >= 3");
        }
    }
    if (deg == 5 || deg == 6) && row.identities.get(ID_S2_NEG_S1) == Some(&false) {
        row.mismatches.push(format!("{ID_S2_NEG_S1} fails, expected at degrees 5 and 6"));
    }
    if deg >= 7 && row.independence.get(IND_S1_S2) == Some(&false) {
        row.mismatches.push(format!("{IND_S1_S2} dependent, expected independent from degree 7"));
    }
    if torsion {
        let want: Vec<String> = if deg % 2 == 1 { vec![] } else { vec![(row.q + 1).to_string()] };
        if row.torsion != want {
            row.mismatches.push(format!("torsion {:?}, expected {:?}", row.torsion, want));
        }
    }
    if deg >= 5 {
        if row.elements.get("S_2,A") == Some(&Verdict::Zero) {
            row.remarks.push("S_2,A is zero (suggested nonzero)".into());
        }
        // below degree 7 the pair (S_<=1, S_2) is already dependent
        if deg >= 7 && row.independence.get(IND_S2A_S1_S2) == Some(&false) {
            row.remarks.push(format!("{IND_S2A_S1_S2} dependent (suggested independent)"));
        }
    }
}

/// Claims table over all (or the first `first_k`) prime levels of each
/// degree. Rows are computed concurrently and returned in enumeration order.
pub fn reproduce_claims(q: u32, degrees: RangeInclusive<usize>, opts: &ClaimOptions) -> Result<Vec<ClaimRow>> {
    crate::ffpoly::ensure_prime_field(q)?;
    let levels = claim_levels(q, degrees, opts.first_k);
    levels.par_iter().map(|n| claim_row(n, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(q: u32, s: &str) -> Ideal {
        Ideal::parse(q, s).unwrap()
    }

    #[test]
    fn catalog_contents() {
        let cat = kernel_element_catalog(2, 2);
        let labels: Vec<&str> = cat.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, vec!["S_<=1", "S_<=2", "S_2"]);
        assert_eq!(admissible_carlitz_tuples(2, 2), vec![vec![0, 0]]);
        let cat3 = kernel_element_catalog(3, 2);
        assert!(cat3.iter().any(|e| e.label == "S_2,A" && e.ring == WeightRing::FpT));
        assert_eq!(cat3[0].terms.len(), 4);
        assert!(matches!(carlitz_weighted(3, &[3, 0]), Err(Error::ExponentOutOfRange(_))));
        assert!(matches!(carlitz_weighted(3, &[2, 1]), Err(Error::ExponentOutOfRange(_))));
        assert!(carlitz_weighted(3, &[1, 0]).is_ok());
    }

    #[test]
    fn low_degree_vanishing() {
        for (q, s) in [(2, "T^3+T+1"), (3, "T^3+2*T+2")] {
            let mut ctx = LevelContext::new(&ideal(q, s)).unwrap();
            assert!(ctx.evaluate(&sum_upto(q, 1)).unwrap().is_zero(), "level {s}");
        }
        let mut ctx = LevelContext::new(&ideal(2, "T^4+T+1")).unwrap();
        assert!(ctx.evaluate(&sum_upto(2, 1)).unwrap().is_zero());
        assert!(ctx.evaluate(&sum_degree(2, 2)).unwrap().is_zero());
    }

    #[test]
    fn degree_five_nonvanishing_and_identity() {
        let q = 2;
        let mut ctx = LevelContext::new(&ideal(q, "T^5+T^2+1")).unwrap();
        let s1 = ctx.evaluate(&sum_upto(q, 1)).unwrap();
        let s2 = ctx.evaluate(&sum_degree(q, 2)).unwrap();
        assert!(!s1.is_zero());
        assert!(!s2.is_zero());
        let f = *ctx.field();
        assert!(s2.combine(&f, 1, &s1, 1).unwrap().is_zero());
        assert!(!independent(&f, &[s1.clone(), s2]).unwrap());
        assert!(!independent(&f, &[s1.clone(), s1]).unwrap());
    }

    #[test]
    fn prop61_example() {
        let q = 2;
        let level = ideal(q, "T^5+T^2+1");
        let mut ctx = LevelContext::new(&level).unwrap();
        let u = Poly::parse(q, "T").unwrap();
        let r = prop61_report(&mut ctx, &u).unwrap();
        assert!(r.holds);
        let p1 = ctx.ambient().p1().clone();
        let mut want = vec![0u32; ctx.ambient().dim()];
        for (a, b) in [("T^2", "1"), ("T^2", "T+1"), ("T^2+T", "1")] {
            let g = p1.index_of(&Poly::parse(q, a).unwrap(), &Poly::parse(q, b).unwrap()).unwrap();
            for (w, x) in want.iter_mut().zip(ctx.ambient().project(g)) {
                *w = (*w + x) % q;
            }
        }
        assert_eq!(r.rhs, want);
        assert!(r.certificate.proves_nonzero());
    }

    #[test]
    fn prop61_refuses_degree_one_factor() {
        let level = ideal(2, "T^4+T");
        assert!(matches!(verify_prop61(&Poly::t(2), &level), Err(Error::Precondition(_))));
        assert!(matches!(verify_prop61(&Poly::one(2), &ideal(2, "T^3+T+1")), Err(Error::Precondition(_))));
    }

    #[test]
    fn element_linearity() {
        let q = 3;
        let mut ctx = LevelContext::new(&ideal(q, "T^3+2*T+2")).unwrap();
        let f = *ctx.field();
        let x = sum_degree(q, 1);
        let y = power_weighted(q, 2, 1);
        let xv = ctx.evaluate(&x).unwrap();
        let yv = ctx.evaluate(&y).unwrap();
        let lhs = ctx.evaluate(&x.combine(2, &y, 1, "z")).unwrap();
        let rhs = xv.combine(&f, 2, &yv, 1).unwrap();
        assert_eq!(lhs.layers, rhs.layers);
    }

    #[test]
    fn claims_rows_for_small_degrees() {
        let opts = ClaimOptions { dmax: 2, timings: false, ..ClaimOptions::default() };
        let rows = reproduce_claims(2, 3..=4, &opts).unwrap();
        assert_eq!(rows.len(), 2 + 3);
        for r in &rows {
            assert!(r.mismatches.is_empty(), "{:?}", r);
            assert_eq!(r.cusps, 2);
            assert_eq!(r.dim_sm - r.dim_sm0, 1);
        }
        let (lo, hi) = (5, 4);
        assert!(reproduce_claims(2, lo..=hi, &opts).unwrap().is_empty());
    }
}
