#![allow(dead_code)]

use bst_limit::chains::{bst_step, dst_step, tilted_step, ConstSplit};
use bst_limit::{BinaryTree, RngStream};

/// A tree of size `n` grown by a chain picked from the seed, so shapes range
/// from balanced to stringy.
pub fn random_tree(seed: u64, n: usize) -> BinaryTree {
    let mut rng = RngStream::new(seed, 0xA11);
    let mut x = BinaryTree::singleton();
    let kind = rng.below(4);
    let p = 0.25 + 0.5 * rng.next_f64();
    while x.len() < n {
        match kind {
            0 => bst_step(&mut x, &mut rng),
            1 => dst_step(&mut x, &ConstSplit(p), &mut rng),
            2 => tilted_step(&mut x, 2.0 * p, &mut rng),
            _ => dst_step(&mut x, &ConstSplit(0.5), &mut rng),
        }
        .unwrap();
    }
    x
}

pub fn random_size(seed: u64, max: usize) -> usize {
    1 + RngStream::new(seed, 0xB22).below(max as u64) as usize
}
