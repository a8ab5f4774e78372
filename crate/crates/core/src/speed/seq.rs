//! Ordered interval dictionary with O(log n) search, insert, delete, split
//! and join, backed by a size-augmented treap.
//!
//! Interval coordinates are not stored in the tree order directly: interior
//! intervals are materialized on demand by the caller-provided view, so every
//! comparison goes through a closure.

use super::Dp;

/// One stored reachable interval. `home` identifies where the stored
/// coordinates are literal; on any other edge the record is interior and its
/// endpoints are iterated projections of the stored ancestor coordinates.
#[derive(Debug, Clone, Copy)]
pub struct Rec {
    pub left: Dp,
    pub right: Dp,
    pub home: super::EdgeId,
}

#[derive(Debug, Clone)]
struct Node {
    rec: Rec,
    pri: u64,
    size: usize,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
}

impl Node {
    fn new(rec: Rec, pri: u64) -> Box<Node> {
        Box::new(Node { rec, pri, size: 1, left: None, right: None })
    }

    fn update(&mut self) {
        self.size = 1 + size(&self.left) + size(&self.right);
    }
}

fn size(n: &Option<Box<Node>>) -> usize {
    n.as_ref().map_or(0, |b| b.size)
}

fn merge(a: Option<Box<Node>>, b: Option<Box<Node>>) -> Option<Box<Node>> {
    match (a, b) {
        (None, b) => b,
        (a, None) => a,
        (Some(mut a), Some(mut b)) => {
            if a.pri >= b.pri {
                a.right = merge(a.right.take(), Some(b));
                a.update();
                Some(a)
            } else {
                b.left = merge(Some(a), b.left.take());
                b.update();
                Some(b)
            }
        }
    }
}

/// Splits off the first `k` records.
fn split(n: Option<Box<Node>>, k: usize) -> (Option<Box<Node>>, Option<Box<Node>>) {
    match n {
        None => (None, None),
        Some(mut node) => {
            let left_size = size(&node.left);
            if k <= left_size {
                let (a, b) = split(node.left.take(), k);
                node.left = b;
                node.update();
                (a, Some(node))
            } else {
                let (a, b) = split(node.right.take(), k - left_size - 1);
                node.right = a;
                node.update();
                (Some(node), b)
            }
        }
    }
}

/// Deterministic xorshift for treap priorities.
#[derive(Debug, Clone)]
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

#[derive(Debug, Clone)]
pub struct IntervalSeq {
    root: Option<Box<Node>>,
    rng: Rng,
}

impl Default for IntervalSeq {
    fn default() -> Self {
        IntervalSeq::new()
    }
}

impl IntervalSeq {
    pub fn new() -> IntervalSeq {
        IntervalSeq { root: None, rng: Rng(0x9e3779b97f4a7c15) }
    }

    pub fn len(&self) -> usize {
        size(&self.root)
    }

    #[allow(dead_code)]
    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn get(&self, k: usize) -> &Rec {
        let mut node = self.root.as_ref().expect("index out of bounds");
        let mut k = k;
        loop {
            let ls = size(&node.left);
            if k < ls {
                node = node.left.as_ref().unwrap();
            } else if k == ls {
                return &node.rec;
            } else {
                k -= ls + 1;
                node = node.right.as_ref().unwrap();
            }
        }
    }

    /// First index for which `pred` is false; `pred` must be monotone
    /// (a prefix of true values).
    pub fn partition_point(&self, mut pred: impl FnMut(&Rec) -> bool) -> usize {
        let mut node = &self.root;
        let mut acc = 0usize;
        while let Some(b) = node {
            if pred(&b.rec) {
                acc += size(&b.left) + 1;
                node = &b.right;
            } else {
                node = &b.left;
            }
        }
        acc
    }

    pub fn insert_at(&mut self, k: usize, rec: Rec) {
        let pri = self.rng.next();
        let (a, b) = split(self.root.take(), k);
        self.root = merge(merge(a, Some(Node::new(rec, pri))), b);
    }

    pub fn remove_at(&mut self, k: usize) -> Rec {
        let (a, rest) = split(self.root.take(), k);
        let (mid, b) = split(rest, 1);
        let rec = mid.expect("index out of bounds").rec;
        self.root = merge(a, b);
        rec
    }

    /// Splits self into (first k records, rest).
    pub fn split_at(mut self, k: usize) -> (IntervalSeq, IntervalSeq) {
        let (a, b) = split(self.root.take(), k);
        (
            IntervalSeq { root: a, rng: Rng(self.rng.next()) },
            IntervalSeq { root: b, rng: Rng(self.rng.next()) },
        )
    }

    /// Concatenates two sequences; every record of `self` must order before
    /// every record of `other`.
    pub fn join(mut self, mut other: IntervalSeq) -> IntervalSeq {
        let root = merge(self.root.take(), other.root.take());
        IntervalSeq { root, rng: Rng(self.rng.next() ^ other.rng.next()) }
    }

    pub fn iter(&self) -> Iter<'_> {
        let mut stack = Vec::new();
        let mut node = self.root.as_deref();
        while let Some(n) = node {
            stack.push(n);
            node = n.left.as_deref();
        }
        Iter { stack }
    }
}

pub struct Iter<'a> {
    stack: Vec<&'a Node>,
}

impl<'a> Iterator for Iter<'a> {
    type Item = &'a Rec;

    fn next(&mut self) -> Option<&'a Rec> {
        let node = self.stack.pop()?;
        let mut cur = node.right.as_deref();
        while let Some(n) = cur {
            self.stack.push(n);
            cur = n.left.as_deref();
        }
        Some(&node.rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speed::EdgeId;

    fn rec(x: f64) -> Rec {
        Rec {
            left: Dp::new(x, 0.0),
            right: Dp::new(x + 0.1, 0.0),
            home: EdgeId::B { i: 1, j: 1 },
        }
    }

    #[test]
    fn insert_split_join_roundtrip() {
        let mut seq = IntervalSeq::new();
        for k in 0..100 {
            seq.insert_at(k, rec(k as f64));
        }
        assert_eq!(seq.len(), 100);
        let idx = seq.partition_point(|r| r.left.x < 40.0);
        assert_eq!(idx, 40);
        let (a, b) = seq.split_at(40);
        assert_eq!((a.len(), b.len()), (40, 60));
        assert!((a.get(39).left.x - 39.0).abs() < 1e-12);
        assert!((b.get(0).left.x - 40.0).abs() < 1e-12);
        let joined = a.join(b);
        assert_eq!(joined.len(), 100);
        let xs: Vec<f64> = joined.iter().map(|r| r.left.x).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn remove_keeps_order() {
        let mut seq = IntervalSeq::new();
        for k in 0..10 {
            seq.insert_at(k, rec(k as f64));
        }
        let removed = seq.remove_at(3);
        assert!((removed.left.x - 3.0).abs() < 1e-12);
        assert_eq!(seq.len(), 9);
        assert!((seq.get(3).left.x - 4.0).abs() < 1e-12);
    }
}
