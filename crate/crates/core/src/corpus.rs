//! The bundled example algebras.
//!
//! | name      | dim | class | product                                            |
//! |-----------|-----|-------|----------------------------------------------------|
//! | `zero_dN` | N   | 2     | all products zero                                  |
//! | `n2`      | 2   | 3     | e1·e1 = e2 (associative)                           |
//! | `h3`      | 3   | 3     | e1·e2 = e3 (Heisenberg)                            |
//! | `f4`      | 4   | 4     | e1·e1 = e2, e2·e1 = e3, e1·e2 = e4                 |
//! | `graft5`  | 8   | 5     | grafting of rooted trees with at most 4 vertices   |
//!
//! `graft5` is the free pre-Lie algebra on one generator modulo products
//! of five or more elements, with `x·y` grafting `x` onto each vertex of `y`.

use std::collections::BTreeMap;

use crate::field::{Scalar, ScalarField};
use crate::prelie::PreLieAlgebra;

fn build(field: ScalarField, dim: usize, entries: &[(usize, usize, usize, i64)]) -> PreLieAlgebra {
    let entries: Vec<(usize, usize, usize, Scalar)> = entries
        .iter()
        .map(|&(i, j, k, c)| (i, j, k, field.from_i64(c)))
        .collect();
    PreLieAlgebra::from_entries(field, dim, &entries).expect("corpus algebra is valid")
}

pub fn zero_algebra(field: ScalarField, dim: usize) -> PreLieAlgebra {
    build(field, dim, &[])
}

pub fn n2(field: ScalarField) -> PreLieAlgebra {
    build(field, 2, &[(0, 0, 1, 1)])
}

pub fn h3(field: ScalarField) -> PreLieAlgebra {
    build(field, 3, &[(0, 1, 2, 1)])
}

pub fn f4(field: ScalarField) -> PreLieAlgebra {
    build(field, 4, &[(0, 0, 1, 1), (1, 0, 2, 1), (0, 1, 3, 1)])
}

/// F4 with the extra constant `e3·e1 = e4`, which breaks the pre-Lie
/// identity at `(e1, e2, e1)`.
pub fn f4_corrupted(field: ScalarField) -> PreLieAlgebra {
    let entries: Vec<(usize, usize, usize, Scalar)> = [(0, 0, 1), (1, 0, 2), (0, 1, 3), (2, 0, 3)]
        .into_iter()
        .map(|(i, j, k)| (i, j, k, field.one()))
        .collect();
    PreLieAlgebra::unchecked_from_entries(field, 4, &entries).expect("well-formed")
}

/// Rooted tree with children in sorted order, so equal trees are equal values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Tree(Vec<Tree>);

impl Tree {
    fn size(&self) -> usize {
        1 + self.0.iter().map(Tree::size).sum::<usize>()
    }

    fn with_child(&self, child: Tree) -> Tree {
        let mut children = self.0.clone();
        children.push(child);
        children.sort();
        Tree(children)
    }

    /// All trees obtained by attaching `x` to one vertex of `self`, with multiplicity.
    fn graftings(&self, x: &Tree) -> Vec<Tree> {
        let mut out = vec![self.with_child(x.clone())];
        for (c, child) in self.0.iter().enumerate() {
            for grafted in child.graftings(x) {
                let mut children = self.0.clone();
                children[c] = grafted;
                children.sort();
                out.push(Tree(children));
            }
        }
        out
    }

    fn name(&self) -> String {
        format!("[{}]", self.0.iter().map(Tree::name).collect::<String>())
    }
}

fn trees_up_to(max_vertices: usize) -> Vec<Tree> {
    let mut by_size: Vec<Vec<Tree>> = vec![vec![], vec![Tree(vec![])]];
    for n in 2..=max_vertices {
        let mut found = Vec::new();
        for smaller in &by_size[n - 1] {
            for t in smaller.graftings(&Tree(vec![])) {
                if !found.contains(&t) {
                    found.push(t);
                }
            }
        }
        found.sort();
        by_size.push(found);
    }
    by_size.into_iter().flatten().collect()
}

/// Grafting algebra on rooted trees with at most `max_vertices` vertices;
/// its nilpotency index is `max_vertices + 1`.
pub fn grafting(field: ScalarField, max_vertices: usize) -> PreLieAlgebra {
    let trees = trees_up_to(max_vertices);
    let index: BTreeMap<&Tree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut counts: BTreeMap<(usize, usize, usize), i64> = BTreeMap::new();
    for (i, x) in trees.iter().enumerate() {
        for (j, y) in trees.iter().enumerate() {
            if x.size() + y.size() > max_vertices {
                continue;
            }
            for t in y.graftings(x) {
                *counts.entry((i, j, index[&t])).or_default() += 1;
            }
        }
    }
    let entries: Vec<(usize, usize, usize, i64)> = counts
        .into_iter()
        .map(|((i, j, k), c)| (i, j, k, c))
        .collect();
    build(field, trees.len(), &entries)
        .with_basis_names(trees.iter().map(Tree::name).collect())
        .expect("one name per tree")
}

/// Every corpus algebra whose class is below the characteristic.
pub fn algebras(field: ScalarField) -> Vec<(String, PreLieAlgebra)> {
    let mut out: Vec<(String, PreLieAlgebra)> = (1..=3)
        .map(|d| (format!("zero_d{d}"), zero_algebra(field, d)))
        .collect();
    out.push(("n2".into(), n2(field)));
    out.push(("h3".into(), h3(field)));
    out.push(("f4".into(), f4(field)));
    if field.characteristic() == 0 || field.characteristic() > 5 {
        out.push(("graft5".into(), grafting(field, 4)));
    }
    out
}

/// Look up a corpus algebra by name.
pub fn by_name(name: &str, field: ScalarField) -> Option<PreLieAlgebra> {
    algebras(field)
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, a)| a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        let sizes: Vec<usize> = (1..=5).map(|n| trees_up_to(n).len()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 8, 17]);
    }

    #[test]
    fn grafting_matches_f4_shape() {
        // [] · [[]] = [[],[]] + [[[]]]
        let g = grafting(ScalarField::Rationals, 3);
        assert_eq!(g.basis_names(), &["[]", "[[]]", "[[][]]", "[[[]]]"]);
        let prod = g.multiply(&g.basis_vector(0), &g.basis_vector(1)).unwrap();
        assert_eq!(
            prod,
            crate::linalg::Vector::from_i64s(ScalarField::Rationals, &[0, 0, 1, 1])
        );
    }

    #[test]
    fn corpus_classes() {
        let classes: Vec<(String, usize)> = algebras(ScalarField::Rationals)
            .into_iter()
            .map(|(n, a)| (n, a.class().unwrap()))
            .collect();
        let expected = [
            ("zero_d1", 2),
            ("zero_d2", 2),
            ("zero_d3", 2),
            ("n2", 3),
            ("h3", 3),
            ("f4", 4),
            ("graft5", 5),
        ];
        assert_eq!(classes.len(), expected.len());
        for ((n, s), (en, es)) in classes.iter().zip(expected) {
            assert_eq!((n.as_str(), *s), (en, es));
        }
    }
}
