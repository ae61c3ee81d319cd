//! Interchangeable ways of computing `T_p` on presentation generators.

use std::sync::Arc;

use rayon::prelude::*;

use crate::ffpoly::Ideal;
use crate::paths::{path_to_symbols, CuspPoint, SymCombination};
use crate::projline::ProjectiveLine;
use crate::symspace::generator_lift;

use super::matrices::{s_matrices, sigma_matrices, Mat2};

/// Images of generators under one Hecke operator.
#[derive(Clone, Debug, Default)]
pub struct RouteImages {
    pub images: Vec<SymCombination>,
    /// Terms skipped because they do not define a point of `P^1(A/n)`.
    pub dropped_terms: usize,
}

pub trait HeckeRoute: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// `T_p xi(g)` for every generator index `g` in `gens`, as combinations of
    /// generators of `p1`.
    fn images(&self, p: &Ideal, p1: &ProjectiveLine, gens: &[usize]) -> RouteImages;
}

/// Generator formula: `T_p xi(u:v) = sum xi(au+cv : bu+dv)` over `Sigma_p`,
/// keeping only the terms that are points of `P^1(A/n)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MerelRoute;

/// Applies an explicit list of matrices with the generator formula.
pub fn merel_images(matrices: &[Mat2], p1: &ProjectiveLine, gens: &[usize]) -> RouteImages {
    let per_gen: Vec<(SymCombination, usize)> = gens
        .par_iter()
        .map(|&g| {
            let class = p1.class(g);
            let (u, v) = (&class.u, &class.v);
            let mut out = SymCombination::new();
            let mut dropped = 0;
            for m in matrices {
                let x = &(&m.a * u) + &(&m.c * v);
                let y = &(&m.b * u) + &(&m.d * v);
                match p1.index_of(&x, &y) {
                    Some(i) => out.add_term(i, 1),
                    None => dropped += 1,
                }
            }
            (out, dropped)
        })
        .collect();
    let dropped_terms = per_gen.iter().map(|(_, d)| d).sum();
    RouteImages { images: per_gen.into_iter().map(|(c, _)| c).collect(), dropped_terms }
}

impl HeckeRoute for MerelRoute {
    fn name(&self) -> &'static str {
        "merel"
    }

    fn description(&self) -> &'static str {
        "generator formula over the matrix set Sigma_p"
    }

    fn images(&self, p: &Ideal, p1: &ProjectiveLine, gens: &[usize]) -> RouteImages {
        merel_images(&sigma_matrices(p), p1, gens)
    }
}

/// Definition: `T_p [r, s] = sum_{g in S_p} [g r, g s]`, applied to the cusp
/// pair `[b/v, a/u]` of a lift of each generator and decomposed back into
/// generators by continued fractions.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefinitionalRoute;

impl HeckeRoute for DefinitionalRoute {
    fn name(&self) -> &'static str {
        "definitional"
    }

    fn description(&self) -> &'static str {
        "action of S_p on cusp pairs followed by continued-fraction decomposition"
    }

    fn images(&self, p: &Ideal, p1: &ProjectiveLine, gens: &[usize]) -> RouteImages {
        let mats = s_matrices(p, p1.level());
        let images = gens
            .par_iter()
            .map(|&g| {
                let lift = generator_lift(p1, g);
                let r = CuspPoint::new(&lift.b, &lift.d).expect("coprime column");
                let s = CuspPoint::new(&lift.a, &lift.c).expect("coprime column");
                let mut out = SymCombination::new();
                for h in &mats {
                    out.add_scaled(&path_to_symbols(&h.act(&r), &h.act(&s), p1), 1);
                }
                out
            })
            .collect();
        RouteImages { images, dropped_terms: 0 }
    }
}

/// Named collection of Hecke routes.
pub struct RouteRegistry {
    routes: Vec<Arc<dyn HeckeRoute>>,
}

impl RouteRegistry {
    pub fn empty() -> RouteRegistry {
        RouteRegistry { routes: Vec::new() }
    }

    pub fn register(&mut self, route: Arc<dyn HeckeRoute>) {
        self.routes.retain(|r| r.name() != route.name());
        self.routes.push(route);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn HeckeRoute>> {
        self.routes.iter().find(|r| r.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.routes.iter().map(|r| r.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn HeckeRoute> {
        self.routes.iter().map(|r| r.as_ref())
    }
}

impl Default for RouteRegistry {
    fn default() -> RouteRegistry {
        let mut reg = RouteRegistry::empty();
        reg.register(Arc::new(MerelRoute));
        reg.register(Arc::new(DefinitionalRoute));
        reg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let reg = RouteRegistry::default();
        assert_eq!(reg.names(), vec!["merel", "definitional"]);
        assert_eq!(reg.get("merel").unwrap().name(), "merel");
        assert!(reg.get("nope").is_none());
    }

    #[test]
    fn registering_twice_replaces() {
        let mut reg = RouteRegistry::default();
        reg.register(Arc::new(MerelRoute));
        assert_eq!(reg.names(), vec!["definitional", "merel"]);
    }
}
