//! Per-side contact trees of Puiseux roots.
//!
//! A node is a cluster of roots `z = eta(s)` of the side polynomial sharing the
//! exact prefix `zeta` and with `ord(eta - zeta) > level`. It splits at the
//! smallest Newton slope above its level; real leading coefficients become
//! children, non-real ones are recorded as complex clusters.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::exact::{
    real_roots_with_multiplicity, Coefficient, ExactRational, ExtendedRational, NumberField,
    Polynomial2, PuiseuxSeries, RealCoefficient, Scalar, UPoly,
};

use super::zpoly::ZPoly;
use super::Side;

/// Non-real roots sharing a node prefix and a split height.
#[derive(Clone, Debug)]
pub struct ComplexCluster {
    /// Square-free factor of the edge polynomial carrying the roots.
    pub divergence: UPoly<Scalar>,
    /// Number of distinct non-real leading coefficients.
    pub count: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct Split {
    pub height: ExactRational,
    /// Children in increasing order of their leading coefficient; the trunk
    /// (coefficient zero) keeps the parent prefix.
    pub children: Vec<TreeNode>,
    pub coefficients: Vec<Scalar>,
    pub complex: Vec<ComplexCluster>,
    /// `min_k (ord a_k + k * height)` of the full side polynomial at this node.
    pub plateau_order: ExtendedRational,
}

#[derive(Clone, Debug)]
pub enum NodeKind {
    Leaf { exact: bool },
    Split(Split),
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub prefix: PuiseuxSeries,
    pub level: ExactRational,
    pub field: Option<Arc<NumberField>>,
    pub full: ZPoly,
    pub red: ZPoly,
    /// Roots of the germ in the cluster, counted with multiplicity.
    pub multiplicity: usize,
    /// Distinct roots in the cluster.
    pub red_size: usize,
    pub kind: NodeKind,
}

/// The contact tree of one side; `root` is `None` when the side carries no roots.
#[derive(Clone, Debug)]
pub struct SideTree {
    pub side: Side,
    pub root: Option<TreeNode>,
}

fn drop_low(p: &UPoly<Scalar>, k: usize) -> UPoly<Scalar> {
    UPoly::new(p.coeffs().iter().skip(k).cloned().collect())
}

fn lowest_index(p: &UPoly<Scalar>) -> usize {
    p.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0)
}

impl SideTree {
    pub fn build(germ: &Polynomial2, reduced: &Polynomial2, side: Side) -> Self {
        let full = ZPoly::from_side(germ, side);
        let red = ZPoly::from_side(reduced, side);
        let one = ExactRational::from_integer(1.into());
        let pick = |p: &ZPoly| -> usize {
            match (p.minimizers(&one), side.owns_level_one()) {
                (Some((_, hi)), true) => hi,
                (Some((lo, _)), false) => lo,
                (None, _) => 0,
            }
        };
        let red_size = pick(&red);
        if red_size == 0 {
            return SideTree { side, root: None };
        }
        let multiplicity = pick(&full);
        let root = TreeNode::build(
            PuiseuxSeries::zero(),
            one,
            None,
            full,
            red,
            multiplicity,
            red_size,
        );
        SideTree {
            side,
            root: Some(root),
        }
    }
}

impl TreeNode {
    fn build(
        prefix: PuiseuxSeries,
        level: ExactRational,
        field: Option<Arc<NumberField>>,
        full: ZPoly,
        red: ZPoly,
        multiplicity: usize,
        red_size: usize,
    ) -> TreeNode {
        let mut node = TreeNode {
            prefix,
            level,
            field,
            full,
            red,
            multiplicity,
            red_size,
            kind: NodeKind::Leaf { exact: false },
        };
        if red_size == 1 {
            node.kind = NodeKind::Leaf {
                exact: node.red.coeff(0).is_empty(),
            };
            return node;
        }
        let (k_lo, height) = node
            .red
            .last_edge(red_size)
            .expect("a square-free cluster of two or more roots has a finite edge");
        let psi_red = drop_low(&node.red.edge_polynomial(&height), k_lo);
        let phi_full = node.full.edge_polynomial(&height);
        let k_lo_full = lowest_index(&phi_full);
        let psi_full = drop_low(&phi_full, k_lo_full);
        let full_factors = psi_full.squarefree_decomposition();

        let mut children: Vec<(Scalar, TreeNode)> = Vec::new();
        let mut real_full = vec![0usize; full_factors.len()];
        for (root, mu_red) in real_roots_with_multiplicity(&psi_red, &node.field) {
            let emb = &root.embedding;
            let c = root.value.clone();
            let factor_index = full_factors
                .iter()
                .position(|(fac, _)| emb.lift_poly(fac).eval(&c).is_zero())
                .expect("edge polynomials of the germ and its reduction share roots");
            real_full[factor_index] += 1;
            let step = PuiseuxSeries::monomial(c.clone(), height.clone());
            let prefix = node.prefix.map_coefficients(|x| emb.lift(x)).plus(&step);
            let full = node.full.lift(emb).shift(&step);
            let red = node.red.lift(emb).shift(&step);
            let child = TreeNode::build(
                prefix,
                height.clone(),
                root.field(),
                full,
                red,
                full_factors[factor_index].1,
                mu_red,
            );
            children.push((c, child));
        }
        if k_lo > 0 {
            let trunk = TreeNode::build(
                node.prefix.clone(),
                height.clone(),
                node.field.clone(),
                node.full.clone(),
                node.red.clone(),
                k_lo_full,
                k_lo,
            );
            let at = children
                .iter()
                .position(|(c, _)| c.sign() == Ordering::Greater)
                .unwrap_or(children.len());
            children.insert(at, (Scalar::zero(), trunk));
        }
        let complex = full_factors
            .iter()
            .zip(real_full)
            .filter_map(|((fac, mult), real)| {
                let count = fac.degree().unwrap_or(0) - real;
                (count > 0).then(|| ComplexCluster {
                    divergence: fac.clone(),
                    count,
                    multiplicity: *mult,
                })
            })
            .collect();
        let plateau_order = node
            .full
            .tropical(&ExtendedRational::Finite(height.clone()));
        let (coefficients, children) = children.into_iter().unzip();
        node.kind = NodeKind::Split(Split {
            height,
            children,
            coefficients,
            complex,
            plateau_order,
        });
        node
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }

    /// Series of a leaf root, exact or known strictly below a truncation above `bound`.
    pub fn leaf_series(&self, bound: &ExactRational) -> PuiseuxSeries {
        assert!(self.is_leaf(), "only leaves carry a single root");
        let mut prefix = self.prefix.clone();
        let mut red = self.red.clone();
        loop {
            if red.coeff(0).is_empty() {
                return prefix;
            }
            let (_, gamma) = red.last_edge(1).expect("simple root has a linear edge");
            if &gamma > bound {
                return prefix.with_truncation(ExtendedRational::Finite(gamma));
            }
            let a0 = red
                .coeff(0)
                .leading()
                .map(|(_, c)| c.clone())
                .expect("nonzero a0");
            let a1 = red
                .coeff(1)
                .leading()
                .map(|(_, c)| c.clone())
                .expect("nonzero a1");
            let c = a0.times(&a1.inverse()).negated();
            let step = PuiseuxSeries::monomial(c, gamma);
            prefix = prefix.plus(&step);
            red = red.shift(&step);
        }
    }

    /// Largest split height in the subtree, or the level for a leaf.
    pub fn deepest_height(&self) -> ExactRational {
        match &self.kind {
            NodeKind::Leaf { .. } => self.level.clone(),
            NodeKind::Split(s) => s
                .children
                .iter()
                .map(|c| c.deepest_height())
                .fold(s.height.clone(), |a, b| if b > a { b } else { a }),
        }
    }

    /// Leaves of the subtree in circle order along the side's parameter.
    pub fn leaves(&self) -> Vec<&TreeNode> {
        match &self.kind {
            NodeKind::Leaf { .. } => vec![self],
            NodeKind::Split(s) => s.children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn poly(terms: &[(i64, u32, u32)]) -> Polynomial2 {
        Polynomial2::from_terms(terms.iter().map(|&(c, i, j)| ((i, j), int(c))))
    }

    fn tree(f: &Polynomial2, side: Side) -> SideTree {
        SideTree::build(f, &f.squarefree_part(), side)
    }

    #[test]
    fn cusp_splits_at_three_halves() {
        let f = poly(&[(1, 0, 2), (-1, 3, 0)]);
        let t = tree(&f, Side::XPlus);
        let root = t.root.expect("roots on the positive side");
        let NodeKind::Split(split) = &root.kind else {
            panic!("expected a split")
        };
        assert_eq!(split.height, rat(3, 2));
        assert_eq!(split.children.len(), 2);
        assert_eq!(
            split.coefficients,
            vec![Scalar::from_int(-1), Scalar::from_int(1)]
        );
        assert!(split
            .children
            .iter()
            .all(|c| matches!(c.kind, NodeKind::Leaf { exact: true })));
        let neg = tree(&f, Side::XMinus).root.expect("complex roots");
        let NodeKind::Split(split) = &neg.kind else {
            panic!("expected a split")
        };
        assert!(split.children.is_empty());
        assert_eq!(split.complex[0].count, 2);
        assert!(tree(&f, Side::YPlus).root.is_none());
    }

    #[test]
    fn repeated_factor_keeps_multiplicity() {
        let line = poly(&[(1, 0, 1), (-1, 2, 0)]);
        let f = line.times(&line).times(&poly(&[(1, 0, 1)]));
        let root = tree(&f, Side::XPlus).root.expect("roots");
        let leaves = root.leaves();
        assert_eq!(leaves.len(), 2);
        assert_eq!(
            leaves.iter().map(|l| l.multiplicity).collect::<Vec<_>>(),
            vec![1, 2]
        );
    }

    #[test]
    fn irrational_directions() {
        let f = poly(&[(1, 0, 2), (-2, 2, 0)]);
        let root = tree(&f, Side::XPlus).root.expect("roots");
        let leaves = root.leaves();
        assert_eq!(leaves.len(), 2);
        let s = leaves[1].leaf_series(&int(3));
        let (e, c) = s.leading().expect("leading term");
        assert_eq!(e, &int(1));
        assert_eq!(c.times(c), Scalar::from_int(2));
    }

    #[test]
    fn simple_root_continues() {
        // y = x + x^2 + ... from y - x - x^2 - y^3.
        let f = poly(&[(1, 0, 1), (-1, 1, 0), (-1, 2, 0), (-1, 0, 3)]);
        let root = tree(&f, Side::XPlus).root.expect("roots");
        let s = root.leaf_series(&int(4));
        assert_eq!(s.coefficient(&int(1)), Scalar::from_int(1));
        assert_eq!(s.coefficient(&int(2)), Scalar::from_int(1));
        assert_eq!(s.coefficient(&int(3)), Scalar::from_int(1));
        assert!(!s.is_exact());
    }
}
