//! Search trees built from blocks of decimal digits of π − 3.

use std::path::{Path, PathBuf};

use bst_limit::chains::bst_from_keys;
use bst_limit::error::invalid;
use bst_limit::BinaryTree;

use crate::error::Result;
use crate::output::write_file;
use crate::render::{silhouette_profile, silhouette_svg, tree_drawing, tree_svg, Series};

pub const BUNDLED_DIGITS: &str = include_str!("../resources/pi_digits.txt");
pub const BLOCK: usize = 10;
pub const SIZES: [usize; 2] = [50, 100];
pub const SILHOUETTE_GRID: usize = 1024;

/// Digits from a text resource; lines starting with `#` are comments.
pub fn load_digits(text: &str) -> Vec<u8> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.bytes())
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// Blocks 1, 3, 5, ...
    Odd,
    /// Blocks 2, 4, 6, ...
    Even,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

/// The first `count` keys of one parity, each block read as `0.d1d2...d10`.
pub fn block_keys(digits: &[u8], parity: Parity, count: usize) -> bst_limit::Result<Vec<f64>> {
    let first = match parity {
        Parity::Odd => 0,
        Parity::Even => 1,
    };
    let keys: Vec<f64> = digits
        .chunks_exact(BLOCK)
        .skip(first)
        .step_by(2)
        .take(count)
        .map(|b| b.iter().fold(0u64, |acc, &d| 10 * acc + d as u64) as f64 / 1e10)
        .collect();
    if keys.len() < count {
        return Err(invalid(format!(
            "{count} {} blocks need {} digits",
            parity.name(),
            2 * BLOCK * count
        )));
    }
    Ok(keys)
}

pub fn pi_tree(digits: &[u8], parity: Parity, n: usize) -> bst_limit::Result<BinaryTree> {
    bst_from_keys(&block_keys(digits, parity, n)?)
}

/// Renders the metric trees for both parities at `n = 50, 100` (four files)
/// and one silhouette plot per parity with both sizes overlaid.
pub fn pi_demo(out_dir: &Path, digits_text: &str) -> Result<Vec<PathBuf>> {
    let digits = load_digits(digits_text);
    let mut written = Vec::new();
    for parity in [Parity::Odd, Parity::Even] {
        let mut profiles = Vec::new();
        for n in SIZES {
            let x = pi_tree(&digits, parity, n)?;
            let path = out_dir.join(format!("tree_{}_n{n}.svg", parity.name()));
            let title = format!("metric tree, {} blocks, n = {n}, rho = 1", parity.name());
            write_file(&path, &tree_svg(&tree_drawing(&x, 1.0)?, &title))?;
            written.push(path);
            profiles.push((n, silhouette_profile(&x, SILHOUETTE_GRID)?));
        }
        let labels: Vec<String> = profiles.iter().map(|(n, _)| format!("n = {n}")).collect();
        let series: Vec<Series<'_>> = profiles
            .iter()
            .zip(&labels)
            .zip(["blue", "black"])
            .map(|(((_, p), label), color)| Series {
                label,
                color,
                points: p,
            })
            .collect();
        let path = out_dir.join(format!("silhouette_{}.svg", parity.name()));
        let title = format!("metric silhouette, {} blocks", parity.name());
        write_file(&path, &silhouette_svg(&series, &title))?;
        written.push(path);
    }
    Ok(written)
}
