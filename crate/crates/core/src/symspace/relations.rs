//! The three relation families of the presentation and their reduction to a
//! small system over representative generators.

use std::collections::{BTreeMap, HashSet};

use crate::ffpoly::{FqScalar, Ideal};
use crate::projline::{ProjectiveLine, Symmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationFamily {
    TwoTerm,
    ThreeTerm,
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub family: RelationFamily,
    /// Sorted by generator index, no zero coefficients.
    pub terms: Vec<(usize, i64)>,
}

#[derive(Clone, Debug)]
pub struct RelationSet {
    pub level: Ideal,
    pub ngens: usize,
    pub rows: Vec<Relation>,
}

fn collect(family: RelationFamily, entries: &[(usize, i64)]) -> Option<Relation> {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for &(i, c) in entries {
        *acc.entry(i).or_insert(0) += c;
    }
    let terms: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
    (!terms.is_empty()).then_some(Relation { family, terms })
}

/// One 2-term and one 3-term row per class, and one diagonal row per class
/// and pair of units. Rows that collapse to zero are dropped.
pub fn build_relations(p1: &ProjectiveLine) -> RelationSet {
    let q = p1.field_size();
    let mut rows = Vec::new();
    for i in 0..p1.len() {
        let s = p1.apply(i, Symmetry::TwoTerm);
        rows.extend(collect(RelationFamily::TwoTerm, &[(i, 1), (s, 1)]));
        let t1 = p1.apply(i, Symmetry::ThreeTerm1);
        let t2 = p1.apply(i, Symmetry::ThreeTerm2);
        rows.extend(collect(RelationFamily::ThreeTerm, &[(i, 1), (t1, 1), (t2, 1)]));
        for d1 in FqScalar::units(q) {
            for d2 in FqScalar::units(q) {
                let j = p1.apply(i, Symmetry::Diag(d1.value(), d2.value()));
                rows.extend(collect(RelationFamily::Diagonal, &[(i, 1), (j, -1)]));
            }
        }
    }
    RelationSet { level: p1.level().clone(), ngens: p1.len(), rows }
}

/// Result of contracting every row of the form `x_a = +-x_b` with a signed
/// union-find. Generator `i` equals `sign[i] * x_{columns[col[i]]}`.
#[derive(Clone, Debug)]
pub(crate) struct Reduction {
    pub col: Vec<usize>,
    pub sign: Vec<i64>,
    /// Generator index of the representative of each column, increasing.
    pub columns: Vec<usize>,
    /// Remaining rows over columns, deduplicated.
    pub rows: Vec<Vec<(usize, i64)>>,
}

struct SignedUnionFind {
    parent: Vec<usize>,
    sign: Vec<i64>,
}

impl SignedUnionFind {
    fn new(n: usize) -> Self {
        SignedUnionFind { parent: (0..n).collect(), sign: vec![1; n] }
    }

    /// `(root, s)` with `x_i = s * x_root`.
    fn find(&mut self, i: usize) -> (usize, i64) {
        let p = self.parent[i];
        if p == i {
            return (i, 1);
        }
        let (root, s) = self.find(p);
        self.parent[i] = root;
        self.sign[i] *= s;
        (root, self.sign[i])
    }

    /// Records `x_a = s * x_b`; returns the root carrying a `2x = 0` relation
    /// when the identification closes an odd cycle.
    fn union(&mut self, a: usize, b: usize, s: i64) -> Option<usize> {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        // x_ra = sa*x_a = sa*s*x_b = sa*s*sb*x_rb
        let rel = sa * s * sb;
        if ra == rb {
            return (rel != 1).then_some(ra);
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.sign[hi] = rel;
        None
    }
}

pub(crate) fn reduce(rels: &RelationSet) -> Reduction {
    let n = rels.ngens;
    let mut uf = SignedUnionFind::new(n);
    let mut torsion_roots = Vec::new();
    let mut rest: Vec<&Relation> = Vec::new();
    for r in &rels.rows {
        match r.terms.as_slice() {
            &[(a, ca), (b, cb)] if ca.abs() == 1 && cb.abs() == 1 => {
                // ca x_a + cb x_b = 0  =>  x_a = -ca*cb x_b
                if let Some(root) = uf.union(a, b, -ca * cb) {
                    torsion_roots.push(root);
                }
            }
            _ => rest.push(r),
        }
    }
    let mut root = vec![0; n];
    let mut sign = vec![1; n];
    for i in 0..n {
        let (r, s) = uf.find(i);
        root[i] = r;
        sign[i] = s;
    }
    let mut columns: Vec<usize> = (0..n).filter(|&i| root[i] == i).collect();
    columns.sort_unstable();
    let mut col_of_root = vec![usize::MAX; n];
    for (c, &g) in columns.iter().enumerate() {
        col_of_root[g] = c;
    }
    let col: Vec<usize> = (0..n).map(|i| col_of_root[root[i]]).collect();

    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    let mut push = |entries: Vec<(usize, i64)>| {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (c, v) in entries {
            *acc.entry(c).or_insert(0) += v;
        }
        let mut row: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        if row.is_empty() {
            return;
        }
        if row[0].1 < 0 {
            for e in row.iter_mut() {
                e.1 = -e.1;
            }
        }
        if seen.insert(row.clone()) {
            rows.push(row);
        }
    };
    for r in torsion_roots {
        push(vec![(col_of_root[uf.find(r).0], 2)]);
    }
    for r in rest {
        push(r.terms.iter().map(|&(i, c)| (col[i], c * sign[i])).collect());
    }
    Reduction { col, sign, columns, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::Poly;

    #[test]
    fn no_diagonal_rows_in_char_two() {
        let p1 = ProjectiveLine::new(&Ideal::parse(2, "T^3+T+1").unwrap()).unwrap();
        let rels = build_relations(&p1);
        assert!(rels.rows.iter().all(|r| r.family != RelationFamily::Diagonal));
    }

    #[test]
    fn two_term_row_at_infinity() {
        for (q, s) in [(2, "T^3+T+1"), (3, "T^3+2*T+2")] {
            let p1 = ProjectiveLine::new(&Ideal::parse(q, s).unwrap()).unwrap();
            let rels = build_relations(&p1);
            let inf = p1.index_of(&Poly::one(q), &Poly::zero(q)).unwrap();
            let zero = p1.index_of(&Poly::zero(q), &Poly::one(q)).unwrap();
            let mut want = vec![(inf, 1), (zero, 1)];
            want.sort();
            assert!(rels.rows.iter().any(|r| r.family == RelationFamily::TwoTerm && r.terms == want));
        }
    }

    #[test]
    fn diagonal_scaling_of_infinity_vanishes() {
        let p1 = ProjectiveLine::new(&Ideal::parse(3, "T^3+2*T+2").unwrap()).unwrap();
        let rels = build_relations(&p1);
        let inf = p1.index_of(&Poly::one(3), &Poly::zero(3)).unwrap();
        assert!(!rels
            .rows
            .iter()
            .any(|r| r.family == RelationFamily::Diagonal && r.terms.iter().all(|&(i, _)| i == inf)));
    }

    #[test]
    fn union_find_detects_odd_cycles() {
        let mut uf = SignedUnionFind::new(3);
        assert_eq!(uf.union(0, 1, -1), None);
        assert_eq!(uf.union(1, 2, 1), None);
        assert_eq!(uf.union(2, 0, 1), Some(0));
        assert_eq!(uf.find(2), (0, -1));
    }
}
