#![allow(dead_code)]

use infostore_core::degradability::merge_measurement;
use infostore_core::discrimination::lambda_max;
use infostore_core::{Measurement, StateSpace};

/// All set partitions of `0..n`, as lists of blocks.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Degradable iff some coarser merge keeps `λ_max`, found by trying them all.
pub fn degradable_by_merging(space: &StateSpace, m: &Measurement, cmp: f64) -> bool {
    let full = lambda_max(space, m).unwrap().value;
    set_partitions(m.len())
        .into_iter()
        .filter(|p| p.len() < m.len())
        .any(|p| {
            lambda_max(space, &merge_measurement(m, &p).unwrap())
                .unwrap()
                .value
                >= full - cmp
        })
}

pub fn secant(x: f64) -> f64 {
    1.0 / x.cos()
}
