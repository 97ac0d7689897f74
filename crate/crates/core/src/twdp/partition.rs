//! Set partitions of small bags, encoded as restricted-growth strings.
//!
//! A partition of an ordered bag `b_0 < b_1 < ... < b_{k-1}` is the string
//! `r` with `r[i]` the block number of `b_i`, where blocks are numbered in
//! order of first appearance. Blocks are therefore sorted by their minimum
//! element, which makes the encoding canonical.

use std::collections::HashMap;

pub type Rgs = Box<[u8]>;

/// Relabel block numbers in order of first appearance.
pub fn canonical(labels: &[u8]) -> Rgs {
    let mut map: Vec<Option<u8>> = vec![None; labels.len() + 1];
    let mut next = 0u8;
    labels
        .iter()
        .map(|&l| {
            let slot = &mut map[l as usize];
            *slot.get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// `P - v`: drop position `i`.
pub fn remove(p: &[u8], i: usize) -> Rgs {
    let rest: Vec<u8> = p
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &l)| l)
        .collect();
    canonical(&rest)
}

/// `P + w`: every partition obtained by inserting a new element at position
/// `i`, either into an existing block or as a singleton.
pub fn extensions(p: &[u8], i: usize) -> Vec<Rgs> {
    let blocks = p.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    (0..=blocks)
        .map(|label| {
            let mut q: Vec<u8> = p.to_vec();
            q.insert(i, label as u8);
            canonical(&q)
        })
        .collect()
}

pub fn block_count(p: &[u8]) -> usize {
    p.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
}

/// Blocks as lists of positions, sorted by minimum element.
pub fn blocks(p: &[u8]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); block_count(p)];
    for (i, &l) in p.iter().enumerate() {
        out[l as usize].push(i);
    }
    out
}

pub fn bell(k: usize) -> usize {
    // Bell triangle
    let mut row = vec![1usize];
    for _ in 0..k {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// All partitions of a `k`-element bag with a dense index.
#[derive(Debug)]
pub struct PartitionTable {
    parts: Vec<Rgs>,
    index: HashMap<Rgs, usize>,
}

impl PartitionTable {
    pub fn new(k: usize) -> Self {
        let mut parts = Vec::with_capacity(bell(k));
        let mut cur = vec![0u8; k];
        fn rec(cur: &mut Vec<u8>, i: usize, max: u8, out: &mut Vec<Rgs>) {
            if i == cur.len() {
                out.push(cur.clone().into_boxed_slice());
                return;
            }
            let top = if i == 0 { 0 } else { max + 1 };
            for l in 0..=top {
                cur[i] = l;
                rec(cur, i + 1, max.max(l), out);
            }
        }
        rec(&mut cur, 0, 0, &mut parts);
        let index = parts
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        PartitionTable { parts, index }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u8] {
        &self.parts[i]
    }

    pub fn index_of(&self, p: &[u8]) -> usize {
        self.index[p]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.parts.iter().map(|p| &p[..])
    }
}
