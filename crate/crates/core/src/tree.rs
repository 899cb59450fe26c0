//! Finite binary trees with maintained subtree sizes and frontier.
//!
//! Nodes live in an arena in insertion order, so the arena itself is the
//! insertion log. The frontier `∂x` is kept twice: as one flat array for
//! uniform sampling and bucketed by depth for depth-weighted sampling; both
//! use swap-remove with back-pointers stored in the parent record.

use crate::error::{Error, Result};
use crate::node::NodeId;
use crate::scalar::Scalar;
use std::io::{BufRead, Write};

const NONE: u32 = u32::MAX;

/// An external node addressed through its parent's arena index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub parent: u32,
    pub dir: u8,
}

#[derive(Clone, Debug)]
struct NodeRec {
    id: NodeId,
    parent: u32,
    children: [u32; 2],
    sigma: u32,
    ext_pos: [u32; 2],
    depth_pos: [u32; 2],
}

/// Internal (`w`) and external (`v`) node counts per depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profiles {
    pub internal: Vec<u64>,
    pub external: Vec<u64>,
}

impl Profiles {
    pub fn internal_at(&self, k: usize) -> u64 {
        self.internal.get(k).copied().unwrap_or(0)
    }

    pub fn external_at(&self, k: usize) -> u64 {
        self.external.get(k).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct BinaryTree {
    nodes: Vec<NodeRec>,
    externals: Vec<Slot>,
    ext_by_depth: Vec<Vec<Slot>>,
    internal_by_depth: Vec<u64>,
    path_length: u64,
    sigma_sq_sum: u128,
}

impl PartialEq for BinaryTree {
    /// Trees are equal as node sets.
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        self.nodes.iter().all(|r| other.contains(r.id))
    }
}

impl Eq for BinaryTree {}

impl Default for BinaryTree {
    fn default() -> Self {
        Self::singleton()
    }
}

impl BinaryTree {
    /// The tree `{∅}`.
    pub fn singleton() -> Self {
        let mut t = BinaryTree {
            nodes: vec![NodeRec {
                id: NodeId::ROOT,
                parent: NONE,
                children: [NONE; 2],
                sigma: 1,
                ext_pos: [NONE; 2],
                depth_pos: [NONE; 2],
            }],
            externals: Vec::new(),
            ext_by_depth: vec![Vec::new()],
            internal_by_depth: vec![1],
            path_length: 0,
            sigma_sq_sum: 1,
        };
        t.push_external(Slot { parent: 0, dir: 0 });
        t.push_external(Slot { parent: 0, dir: 1 });
        t
    }

    /// Number of nodes `#x`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false; trees contain the root.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node_at(&self, idx: usize) -> NodeId {
        self.nodes[idx].id
    }

    pub fn sigma_at(&self, idx: usize) -> u64 {
        self.nodes[idx].sigma as u64
    }

    pub fn child_index(&self, idx: usize, dir: u8) -> Option<usize> {
        let c = self.nodes[idx].children[dir as usize & 1];
        (c != NONE).then_some(c as usize)
    }

    pub fn parent_index(&self, idx: usize) -> Option<usize> {
        let p = self.nodes[idx].parent;
        (p != NONE).then_some(p as usize)
    }

    /// Arena index of `u`, walking down from the root.
    pub fn index_of(&self, u: NodeId) -> Option<usize> {
        let mut idx = 0usize;
        for b in u.bits() {
            idx = self.child_index(idx, b)?;
        }
        Some(idx)
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.index_of(u).is_some()
    }

    /// `σ(x, u)`, zero off the tree.
    pub fn subtree_size(&self, u: NodeId) -> u64 {
        self.index_of(u).map_or(0, |i| self.sigma_at(i))
    }

    /// The slot of `u` if `u ∈ ∂x`.
    pub fn slot_of(&self, u: NodeId) -> Option<Slot> {
        let parent = u.parent().ok()?;
        let p = self.index_of(parent)?;
        let dir = u.last_bit()?;
        (self.nodes[p].children[dir as usize] == NONE).then_some(Slot {
            parent: p as u32,
            dir,
        })
    }

    pub fn is_external(&self, u: NodeId) -> bool {
        self.slot_of(u).is_some()
    }

    pub fn slot_node(&self, slot: Slot) -> NodeId {
        self.nodes[slot.parent as usize]
            .id
            .child(slot.dir)
            .expect("slot below the depth cap")
    }

    pub fn slot_depth(&self, slot: Slot) -> u32 {
        self.nodes[slot.parent as usize].id.depth() + 1
    }

    pub fn external_count(&self) -> usize {
        self.externals.len()
    }

    pub fn external_slot(&self, i: usize) -> Slot {
        self.externals[i]
    }

    pub fn external_slots(&self) -> &[Slot] {
        &self.externals
    }

    /// The frontier `∂x` (order is an implementation detail).
    pub fn externals(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.externals.iter().map(move |&s| self.slot_node(s))
    }

    /// External slots at depth `k`.
    pub fn externals_at_depth(&self, k: usize) -> &[Slot] {
        self.ext_by_depth.get(k).map_or(&[], |v| v.as_slice())
    }

    /// Largest depth that currently holds an external node.
    pub fn max_external_depth(&self) -> usize {
        self.ext_by_depth.len() - 1
    }

    /// Nodes in insertion order; the first is always the root.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().map(|r| r.id)
    }

    pub fn insertion_log(&self) -> Vec<NodeId> {
        self.nodes().collect()
    }

    /// Inserts the external node `u`; returns its arena index.
    pub fn insert(&mut self, u: NodeId) -> Result<usize> {
        if u.is_root() {
            return Err(Error::NotExternal(u));
        }
        let slot = self.slot_of(u).ok_or(Error::NotExternal(u))?;
        self.insert_slot(slot)
    }

    /// Functional form of [`insert`](Self::insert).
    pub fn with_inserted(&self, u: NodeId) -> Result<BinaryTree> {
        let mut t = self.clone();
        t.insert(u)?;
        Ok(t)
    }

    /// Inserts the external node behind `slot`; returns its arena index.
    pub fn insert_slot(&mut self, slot: Slot) -> Result<usize> {
        let p = slot.parent as usize;
        let dir = slot.dir as usize & 1;
        let parent_id = self.nodes[p].id;
        let id = parent_id.child(dir as u8)?;
        if self.nodes[p].children[dir] != NONE {
            return Err(Error::NotExternal(id));
        }
        if self.nodes.len() >= NONE as usize - 1 {
            return Err(Error::TooLarge {
                what: "tree size",
                got: self.nodes.len(),
                limit: NONE as usize - 1,
            });
        }
        self.remove_external(slot);

        let idx = self.nodes.len() as u32;
        self.nodes.push(NodeRec {
            id,
            parent: p as u32,
            children: [NONE; 2],
            sigma: 1,
            ext_pos: [NONE; 2],
            depth_pos: [NONE; 2],
        });
        self.nodes[p].children[dir] = idx;

        let depth = id.depth() as usize;
        if self.internal_by_depth.len() <= depth {
            self.internal_by_depth.resize(depth + 1, 0);
        }
        self.internal_by_depth[depth] += 1;
        self.path_length += depth as u64;
        self.sigma_sq_sum += 1;

        let mut a = p as u32;
        while a != NONE {
            let rec = &mut self.nodes[a as usize];
            self.sigma_sq_sum += 2 * rec.sigma as u128 + 1;
            rec.sigma += 1;
            a = rec.parent;
        }

        self.push_external(Slot { parent: idx, dir: 0 });
        self.push_external(Slot { parent: idx, dir: 1 });
        Ok(idx as usize)
    }

    fn push_external(&mut self, slot: Slot) {
        let depth = self.slot_depth(slot) as usize;
        let rec_pos = self.externals.len() as u32;
        self.externals.push(slot);
        if self.ext_by_depth.len() <= depth {
            self.ext_by_depth.resize_with(depth + 1, Vec::new);
        }
        let bucket = &mut self.ext_by_depth[depth];
        let dpos = bucket.len() as u32;
        bucket.push(slot);
        let rec = &mut self.nodes[slot.parent as usize];
        rec.ext_pos[slot.dir as usize] = rec_pos;
        rec.depth_pos[slot.dir as usize] = dpos;
    }

    fn remove_external(&mut self, slot: Slot) {
        let (pos, dpos) = {
            let rec = &self.nodes[slot.parent as usize];
            (
                rec.ext_pos[slot.dir as usize] as usize,
                rec.depth_pos[slot.dir as usize] as usize,
            )
        };
        self.externals.swap_remove(pos);
        if let Some(&moved) = self.externals.get(pos) {
            self.nodes[moved.parent as usize].ext_pos[moved.dir as usize] = pos as u32;
        }
        let depth = self.slot_depth(slot) as usize;
        let bucket = &mut self.ext_by_depth[depth];
        bucket.swap_remove(dpos);
        if let Some(&moved) = bucket.get(dpos) {
            self.nodes[moved.parent as usize].depth_pos[moved.dir as usize] = dpos as u32;
        }
        while self.ext_by_depth.len() > 1 && self.ext_by_depth.last().is_some_and(|b| b.is_empty()) {
            self.ext_by_depth.pop();
        }
        let rec = &mut self.nodes[slot.parent as usize];
        rec.ext_pos[slot.dir as usize] = NONE;
        rec.depth_pos[slot.dir as usize] = NONE;
    }

    /// Internal path length `Σ_{u∈x} |u|`, maintained incrementally.
    pub fn path_length(&self) -> u64 {
        self.path_length
    }

    /// `Σ_{u∈x} σ(x,u)²`, maintained incrementally.
    pub fn sigma_square_sum(&self) -> u128 {
        self.sigma_sq_sum
    }

    /// Subtree sizes recounted bottom-up from the node set alone, in arena order.
    pub fn recount_subtree_sizes(&self) -> Vec<u64> {
        let mut counts = vec![1u64; self.len()];
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.nodes[i].id.depth()));
        for i in order {
            for dir in 0..2 {
                if let Some(c) = self.child_index(i, dir) {
                    counts[i] += counts[c];
                }
            }
        }
        counts
    }

    pub fn profiles(&self) -> Profiles {
        let internal = self.internal_by_depth.clone();
        let external = self.ext_by_depth.iter().map(|b| b.len() as u64).collect();
        Profiles { internal, external }
    }

    /// `H(x) = max |u|`.
    pub fn height(&self) -> u32 {
        (self.internal_by_depth.len() - 1) as u32
    }

    /// `F(x)`: the deepest level that is completely filled.
    pub fn fill_level(&self) -> u32 {
        let first_gap = self
            .ext_by_depth
            .iter()
            .position(|b| !b.is_empty())
            .expect("frontier is nonempty");
        first_gap as u32 - 1
    }

    /// Weighted subtree-size edge length `ρ^{|u|} σ(x,u)/σ(x,∅)` of the edge `(ū, u)`.
    pub fn edge_weight<S: Scalar>(&self, u: NodeId, rho: &S) -> Result<S> {
        if u.is_root() {
            return Err(Error::RootHasNoParent);
        }
        let i = self.index_of(u).ok_or(Error::NotInTree(u))?;
        Ok(rho.powu(u.depth()) * S::from_count(self.sigma_at(i)) / S::from_count(self.len() as u64))
    }

    /// `d(u, ∅)` in the `ρ`-weighted subtree-size metric.
    pub fn distance_to_root<S: Scalar>(&self, u: NodeId, rho: &S) -> Result<S> {
        let mut idx = 0usize;
        let n = S::from_count(self.len() as u64);
        let mut acc = S::zero();
        for (k, b) in u.bits().enumerate() {
            idx = self.child_index(idx, b).ok_or(Error::NotInTree(u))?;
            acc = acc + rho.powu(k as u32 + 1) * S::from_count(self.sigma_at(idx)) / n.clone();
        }
        Ok(acc)
    }

    /// `d(u,v) = d(u,∅) + d(v,∅) − 2 d(u∧v,∅)` in the weighted metric.
    pub fn tree_distance<S: Scalar>(&self, u: NodeId, v: NodeId, rho: &S) -> Result<S> {
        let w = crate::node::lca(u, v, 0)?;
        let du = self.distance_to_root(u, rho)?;
        let dv = self.distance_to_root(v, rho)?;
        let dw = self.distance_to_root(w, rho)?;
        Ok(du + dv - dw.clone() - dw)
    }

    /// Canonical graph distance (every edge has length one).
    pub fn canonical_distance(&self, u: NodeId, v: NodeId) -> Result<u32> {
        for w in [u, v] {
            if !self.contains(w) {
                return Err(Error::NotInTree(w));
            }
        }
        let k = crate::node::common_prefix_len(u, v, 0)?;
        Ok(u.depth() + v.depth() - 2 * k)
    }

    /// Trajectory text: one node word per line in insertion order.
    pub fn write_trajectory<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for u in self.nodes() {
            writeln!(out, "{u}")?;
        }
        Ok(())
    }

    pub fn to_trajectory_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_trajectory(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("node words are ASCII")
    }

    /// Rebuilds a tree from trajectory text. Blank lines are ignored.
    pub fn read_trajectory<R: BufRead>(input: R) -> Result<BinaryTree> {
        let mut tree: Option<BinaryTree> = None;
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let u: NodeId = line.parse().map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: lineno + 1, msg },
                other => other,
            })?;
            match tree.as_mut() {
                None if u.is_root() => tree = Some(BinaryTree::singleton()),
                None => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: "trajectory must start with the root \"e\"".into(),
                    })
                }
                Some(t) => {
                    t.insert(u)?;
                }
            }
        }
        tree.ok_or(Error::Parse {
            line: 0,
            msg: "empty trajectory".into(),
        })
    }

    pub fn from_trajectory_str(s: &str) -> Result<BinaryTree> {
        Self::read_trajectory(s.as_bytes())
    }

    /// Builds a tree by inserting `nodes` in order after the root.
    pub fn from_insertions<I: IntoIterator<Item = NodeId>>(nodes: I) -> Result<BinaryTree> {
        let mut t = BinaryTree::singleton();
        for u in nodes {
            if u.is_root() {
                continue;
            }
            t.insert(u)?;
        }
        Ok(t)
    }

    /// Canonical text for the node set: words in level order, `|`-separated.
    pub fn shape_key(&self) -> String {
        let mut ids: Vec<NodeId> = self.nodes().collect();
        ids.sort();
        ids.iter().map(|u| u.to_string()).collect::<Vec<_>>().join("|")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use num_rational::BigRational;
    use std::collections::HashSet;

    fn n(s: &str) -> NodeId {
        s.parse().unwrap()
    }

    fn tree(words: &[&str]) -> BinaryTree {
        BinaryTree::from_insertions(words.iter().map(|w| n(w))).unwrap()
    }

    fn random_tree(seed: u64, size: usize) -> BinaryTree {
        let mut rng = RngStream::new(seed, 0);
        let mut t = BinaryTree::singleton();
        while t.len() < size {
            let s = t.external_slot(rng.below(t.external_count() as u64) as usize);
            t.insert_slot(s).unwrap();
        }
        t
    }

    fn ext_set(t: &BinaryTree) -> HashSet<NodeId> {
        t.externals().collect()
    }

    #[test]
    fn singleton_shape() {
        let t = BinaryTree::singleton();
        assert_eq!(t.len(), 1);
        assert_eq!(ext_set(&t), [n("0"), n("1")].into_iter().collect());
        assert_eq!(t.path_length(), 0);
    }

    #[test]
    fn insert_updates_sizes_and_frontier() {
        let mut t = BinaryTree::singleton();
        t.insert(n("0")).unwrap();
        assert_eq!(t.subtree_size(NodeId::ROOT), 2);
        assert_eq!(t.subtree_size(n("0")), 1);
        assert_eq!(
            BinaryTree::singleton().insert(n("00")),
            Err(Error::NotExternal(n("00")))
        );
        assert_eq!(t.insert(n("0")), Err(Error::NotExternal(n("0"))));
        t.insert(n("01")).unwrap();
        assert_eq!(
            ext_set(&t),
            [n("1"), n("00"), n("010"), n("011")].into_iter().collect()
        );
    }

    #[test]
    fn subtree_size_examples() {
        let t = tree(&["0", "1"]);
        assert_eq!(t.subtree_size(NodeId::ROOT), 3);
        assert_eq!(t.subtree_size(n("0")), 1);
        assert_eq!(BinaryTree::singleton().subtree_size(n("0")), 0);
    }

    #[test]
    fn profile_examples() {
        let p = tree(&["0", "1"]).profiles();
        assert_eq!(p.internal, vec![1, 2]);
        assert_eq!((p.external_at(0), p.external_at(1), p.external_at(2)), (0, 0, 4));
        let p = BinaryTree::singleton().profiles();
        assert_eq!(p.internal, vec![1]);
        assert_eq!(p.external_at(1), 2);
    }

    #[test]
    fn height_and_fill() {
        let t = BinaryTree::singleton();
        assert_eq!((t.height(), t.fill_level()), (0, 0));
        let t = tree(&["0", "1"]);
        assert_eq!((t.height(), t.fill_level()), (1, 1));
        let t = tree(&["0", "00"]);
        assert_eq!((t.height(), t.fill_level()), (2, 0));
    }

    #[test]
    fn edge_weights_and_distances() {
        let t = tree(&["0"]);
        assert_eq!(t.edge_weight(n("0"), &1.0).unwrap(), 0.5);
        let t = tree(&["0", "1"]);
        let two_thirds = 2.0 / 3.0;
        assert!((t.edge_weight(n("1"), &2.0f64).unwrap() - two_thirds).abs() < 1e-15);
        assert_eq!(
            BinaryTree::singleton().edge_weight(NodeId::ROOT, &1.0),
            Err(Error::RootHasNoParent)
        );
        assert_eq!(t.tree_distance(n("0"), n("0"), &1.0).unwrap(), 0.0);
        let exact: BigRational = t
            .tree_distance(n("0"), n("1"), &crate::scalar::ratio(1, 1))
            .unwrap();
        assert_eq!(exact, crate::scalar::ratio(2, 3));
        assert_eq!(t.canonical_distance(n("0"), n("1")).unwrap(), 2);
        assert_eq!(t.tree_distance(n("0"), n("00"), &1.0), Err(Error::NotInTree(n("00"))));
    }

    #[test]
    fn trajectory_text() {
        let t = tree(&["0"]);
        assert_eq!(t.to_trajectory_string(), "e\n0\n");
        assert_eq!(
            BinaryTree::from_trajectory_str("e\n00\n"),
            Err(Error::NotExternal(n("00")))
        );
        assert!(matches!(
            BinaryTree::from_trajectory_str("0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            BinaryTree::from_trajectory_str("e\n0\n2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn incremental_state_matches_recount() {
        for seed in 0..20 {
            let t = random_tree(seed, 1 + (seed as usize * 37) % 300);
            let recount = t.recount_subtree_sizes();
            for (i, &c) in recount.iter().enumerate() {
                assert_eq!(c, t.sigma_at(i));
            }
            assert_eq!(t.external_count(), t.len() + 1);
            let sq: u128 = recount.iter().map(|&s| (s as u128) * (s as u128)).sum();
            assert_eq!(sq, t.sigma_square_sum());
            let ipl: u64 = t.nodes().map(|u| u.depth() as u64).sum();
            assert_eq!(ipl, t.path_length());
            let by_depth: usize = (0..=t.max_external_depth())
                .map(|k| t.externals_at_depth(k).len())
                .sum();
            assert_eq!(by_depth, t.external_count());
            for u in t.externals() {
                assert!(!t.contains(u));
                assert!(t.contains(u.parent().unwrap()));
            }
        }
    }
}
