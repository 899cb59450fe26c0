//! The three Markov chains on finite binary trees: the BST chain (uniform
//! frontier insertion), the DST chain driven by a measure on rays, and the
//! depth-tilted chain obtained as an h-transform of the BST chain.

use crate::error::{invalid, Error, Result};
use crate::node::NodeId;
use crate::rng::RngStream;
use crate::scalar::{is_positive, Scalar};
use crate::tree::{BinaryTree, Slot};

/// A probability measure on rays, given by its left-split ratios
/// `p_u = μ(A_{u0}) / μ(A_u)`.
pub trait DrivingMeasure {
    fn split(&self, u: NodeId) -> f64;

    /// `μ(A_u)` as the product of split factors along the root path.
    fn cylinder_mass(&self, u: NodeId) -> f64 {
        let mut m = 1.0;
        for k in 0..u.depth() {
            let p = self.split(u.prefix(k));
            m *= if u.bit(k + 1) == 0 { p } else { 1.0 - p };
        }
        m
    }
}

/// Every node splits its mass in the same proportion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstSplit(pub f64);

impl ConstSplit {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("split probability {p} not in [0, 1]")));
        }
        Ok(ConstSplit(p))
    }
}

impl DrivingMeasure for ConstSplit {
    fn split(&self, _u: NodeId) -> f64 {
        self.0
    }
}

/// Adapts a closure `NodeId -> p_u`.
pub struct SplitFn<F>(pub F);

impl<F: Fn(NodeId) -> f64> DrivingMeasure for SplitFn<F> {
    fn split(&self, u: NodeId) -> f64 {
        (self.0)(u)
    }
}

/// Incremental BST insertion of real keys. Labels are held here, indexed like
/// the tree arena, and never enter the tree itself.
#[derive(Clone, Debug)]
pub struct BstBuilder {
    tree: BinaryTree,
    labels: Vec<f64>,
}

impl BstBuilder {
    pub fn new(first_key: f64) -> Self {
        Self {
            tree: BinaryTree::singleton(),
            labels: vec![first_key],
        }
    }

    pub fn tree(&self) -> &BinaryTree {
        &self.tree
    }

    pub fn into_tree(self) -> BinaryTree {
        self.tree
    }

    pub fn label_at(&self, idx: usize) -> f64 {
        self.labels[idx]
    }

    /// Routes `key` from the root (left iff smaller than the node label) to
    /// the first external node. Returns the slot without inserting.
    pub fn route(&self, key: f64) -> Result<Slot> {
        let mut idx = 0usize;
        loop {
            let label = self.labels[idx];
            if key == label {
                return Err(Error::DuplicateKey(key));
            }
            let dir = u8::from(key >= label);
            match self.tree.child_index(idx, dir) {
                Some(c) => idx = c,
                None => {
                    return Ok(Slot {
                        parent: idx as u32,
                        dir,
                    })
                }
            }
        }
    }

    /// Inserts `key`; returns the arena index of the new node.
    pub fn push(&mut self, key: f64) -> Result<usize> {
        let slot = self.route(key)?;
        let idx = self.tree.insert_slot(slot)?;
        self.labels.push(key);
        Ok(idx)
    }
}

/// Runs the BST algorithm on `keys`; the trajectory is the insertion log of
/// the returned tree.
pub fn bst_from_keys(keys: &[f64]) -> Result<BinaryTree> {
    let (&first, rest) = keys
        .split_first()
        .ok_or_else(|| invalid("at least one key is required"))?;
    let mut b = BstBuilder::new(first);
    for &k in rest {
        b.push(k)?;
    }
    Ok(b.into_tree())
}

/// One BST-chain step: insert a uniformly chosen external node.
pub fn bst_step(tree: &mut BinaryTree, rng: &mut RngStream) -> Result<NodeId> {
    let i = rng.below(tree.external_count() as u64) as usize;
    let slot = tree.external_slot(i);
    tree.insert_slot(slot)?;
    Ok(tree.slot_node(slot))
}

/// Runs the BST chain from `{∅}` to `n` nodes.
pub fn bst_tree(n: usize, rng: &mut RngStream) -> Result<BinaryTree> {
    let mut t = BinaryTree::singleton();
    while t.len() < n {
        bst_step(&mut t, rng)?;
    }
    Ok(t)
}

/// One DST-chain step: route a lazily sampled `μ`-ray to the first external node.
pub fn dst_step<M: DrivingMeasure + ?Sized>(
    tree: &mut BinaryTree,
    mu: &M,
    rng: &mut RngStream,
) -> Result<NodeId> {
    let mut idx = 0usize;
    loop {
        let u = tree.node_at(idx);
        let dir = u8::from(!rng.bernoulli(mu.split(u)));
        match tree.child_index(idx, dir) {
            Some(c) => idx = c,
            None => {
                let slot = Slot {
                    parent: idx as u32,
                    dir,
                };
                tree.insert_slot(slot)?;
                return Ok(tree.slot_node(slot));
            }
        }
    }
}

fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("tilt parameter z = {z} must be positive")))
    }
}

/// One step of the depth-tilted chain by proposal and acceptance: propose an
/// external node with probability `∝ z^{|u|}`, accept it with probability
/// `2z/(n + 2z)`, otherwise insert one of the remaining `n` external nodes
/// uniformly.
pub fn tilted_step(tree: &mut BinaryTree, z: f64, rng: &mut RngStream) -> Result<NodeId> {
    check_z(z)?;
    let n = tree.len() as f64;
    let top = tree.max_external_depth();
    // Bucket weights relative to the largest power present to stay in range.
    let log_z = z.ln();
    let depths: Vec<usize> = (1..=top).filter(|&k| !tree.externals_at_depth(k).is_empty()).collect();
    let ref_exp = depths
        .iter()
        .map(|&k| k as f64 * log_z)
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = depths
        .iter()
        .map(|&k| tree.externals_at_depth(k).len() as f64 * (k as f64 * log_z - ref_exp).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    let mut r = rng.next_f64() * total;
    let mut pick = *depths.last().expect("frontier is nonempty");
    for (&k, &w) in depths.iter().zip(&weights) {
        if r < w {
            pick = k;
            break;
        }
        r -= w;
    }
    let bucket = tree.externals_at_depth(pick);
    let proposal = bucket[rng.below(bucket.len() as u64) as usize];

    let chosen = if rng.bernoulli(2.0 * z / (n + 2.0 * z)) {
        proposal
    } else {
        let m = tree.external_count() as u64;
        loop {
            let s = tree.external_slot(rng.below(m) as usize);
            if s != proposal {
                break s;
            }
        }
    };
    tree.insert_slot(chosen)?;
    Ok(tree.slot_node(chosen))
}

/// Exact BST transition law: `1/(n+1)` on each external node.
pub fn bst_law<S: Scalar>(tree: &BinaryTree) -> Vec<(NodeId, S)> {
    let p = S::one() / S::from_count(tree.external_count() as u64);
    tree.externals().map(|u| (u, p.clone())).collect()
}

/// Exact law of the tilted step:
/// `p(x, x∪{v}) = (S + z^{|v|}(2z − 1)) / (S (n + 2z))` with `S = Σ_{∂x} z^{|u|}`.
pub fn tilted_law<S: Scalar>(tree: &BinaryTree, z: &S) -> Result<Vec<(NodeId, S)>> {
    if !is_positive(z) {
        return Err(invalid("tilt parameter z must be positive"));
    }
    let two_z = z.clone() + z.clone();
    let s = depth_generating_function(tree, z);
    let denom = s.clone() * (S::from_count(tree.len() as u64) + two_z.clone());
    Ok(tree
        .externals()
        .map(|v| {
            let p = (s.clone() + z.powu(v.depth()) * (two_z.clone() - S::one())) / denom.clone();
            (v, p)
        })
        .collect())
}

/// `Σ_{u∈∂x} z^{|u|}`, evaluated from the external profile.
pub fn depth_generating_function<S: Scalar>(tree: &BinaryTree, z: &S) -> S {
    (1..=tree.max_external_depth())
        .map(|k| S::from_count(tree.externals_at_depth(k).len() as u64) * z.powu(k as u32))
        .fold(S::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;
    use std::collections::HashMap;

    fn n(s: &str) -> NodeId {
        s.parse().unwrap()
    }

    #[test]
    fn keys_route_by_comparison() {
        let t = bst_from_keys(&[0.4, 0.7, 0.2]).unwrap();
        assert_eq!(t.insertion_log(), vec![NodeId::ROOT, n("1"), n("0")]);
        let t = bst_from_keys(&[0.4, 0.2, 0.1]).unwrap();
        assert_eq!(t.insertion_log(), vec![NodeId::ROOT, n("0"), n("00")]);
        assert_eq!(bst_from_keys(&[0.5, 0.5]), Err(Error::DuplicateKey(0.5)));
    }

    #[test]
    fn first_bst_step_is_a_fair_coin() {
        let mut left = 0;
        for r in 0..20_000 {
            let mut t = BinaryTree::singleton();
            let u = bst_step(&mut t, &mut RngStream::new(11, r)).unwrap();
            left += usize::from(u == n("0"));
        }
        // sd = 70.7
        assert!((left as f64 - 10_000.0).abs() < 300.0, "{left}");
    }

    #[test]
    fn dst_split_half_matches_cylinder_masses() {
        let base = BinaryTree::from_insertions([n("0")]).unwrap();
        let mut counts: HashMap<NodeId, u32> = HashMap::new();
        let reps = 40_000;
        for r in 0..reps {
            let mut t = base.clone();
            let u = dst_step(&mut t, &ConstSplit(0.5), &mut RngStream::new(5, r)).unwrap();
            *counts.entry(u).or_default() += 1;
        }
        for (u, p) in [(n("1"), 0.5), (n("00"), 0.25), (n("01"), 0.25)] {
            let c = counts[&u] as f64;
            let sd = (reps as f64 * p * (1.0 - p)).sqrt();
            assert!((c - reps as f64 * p).abs() < 3.0 * sd, "{u}: {c}");
        }
    }

    #[test]
    fn dst_degenerate_split_goes_left() {
        let mut t = BinaryTree::from_insertions([n("0"), n("1"), n("00")]).unwrap();
        let mut rng = RngStream::new(0, 0);
        assert_eq!(dst_step(&mut t, &ConstSplit(1.0), &mut rng).unwrap(), n("000"));
        let mut t = BinaryTree::singleton();
        let u = dst_step(&mut t, &ConstSplit(1.0), &mut rng).unwrap();
        assert_eq!(u, n("0"));
    }

    #[test]
    fn tilted_law_example() {
        let t = BinaryTree::from_insertions([n("0")]).unwrap();
        let law: HashMap<NodeId, BigRational> =
            tilted_law(&t, &BigRational::from_count(2)).unwrap().into_iter().collect();
        assert_eq!(law[&n("1")], ratio(16, 60));
        assert_eq!(law[&n("00")], ratio(22, 60));
        assert_eq!(law[&n("01")], ratio(22, 60));
        assert!(tilted_law(&t, &0.0f64).is_err());
        assert!(tilted_step(&mut t.clone(), -1.0, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn tilted_law_at_one_is_uniform() {
        let mut rng = RngStream::new(3, 0);
        let t = bst_tree(17, &mut rng).unwrap();
        let tilted = tilted_law(&t, &BigRational::from_count(1)).unwrap();
        let plain: Vec<(NodeId, BigRational)> = bst_law(&t);
        let a: HashMap<_, _> = tilted.into_iter().collect();
        for (u, p) in plain {
            assert_eq!(a[&u], p);
        }
    }

    #[test]
    fn tilted_step_at_one_is_uniform() {
        let base = BinaryTree::from_insertions([n("0"), n("00")]).unwrap();
        let mut counts: HashMap<NodeId, u32> = HashMap::new();
        let reps = 40_000u64;
        for r in 0..reps {
            let mut t = base.clone();
            *counts
                .entry(tilted_step(&mut t, 1.0, &mut RngStream::new(9, r)).unwrap())
                .or_default() += 1;
        }
        let p = 0.25;
        let sd = (reps as f64 * p * (1.0 - p)).sqrt();
        for u in base.externals() {
            assert!((counts[&u] as f64 - reps as f64 * p).abs() < 3.0 * sd);
        }
    }
}
