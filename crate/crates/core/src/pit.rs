//! Preference interval tree over a sorted list.
//!
//! For a list `r_1 > r_2 > ... > r_l` (most preferred first) the leaves,
//! left to right, hold the intervals `(-inf, r_l), (r_l, r_(l-1)), ...,
//! (r_1, +inf)`. Each internal node covers the union of its children's
//! intervals and stores the separating item as `mid`. Nodes live in an
//! arena and refer to each other by index.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};

/// Interval endpoint: a real item or one of the two artificial extremes.
/// `NegInf` loses to every item and `PosInf` beats every item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Boundary {
    NegInf,
    Item(usize),
    PosInf,
}

impl Boundary {
    pub fn item(self) -> Option<usize> {
        match self {
            Boundary::Item(i) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::NegInf => f.write_str("-inf"),
            Boundary::PosInf => f.write_str("+inf"),
            Boundary::Item(i) => write!(f, "{i}"),
        }
    }
}

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PitNode {
    pub left: Boundary,
    pub right: Boundary,
    pub mid: Option<Boundary>,
    pub parent: Option<NodeId>,
    pub lchild: Option<NodeId>,
    pub rchild: Option<NodeId>,
    /// Root is at depth 1.
    pub depth: usize,
    /// Leaf slot counted from the left, `0..=l`.
    pub slot: Option<usize>,
}

impl PitNode {
    pub fn is_leaf(&self) -> bool {
        self.mid.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Pit {
    nodes: Vec<PitNode>,
    root: NodeId,
    depth: usize,
    leaves: Vec<NodeId>,
    len: usize,
}

/// `ceil(1 + log2(len + 1))`.
pub fn expected_depth(len: usize) -> usize {
    1 + (len + 1).next_power_of_two().trailing_zeros() as usize
}

/// Builds the tree by bisecting the `len + 1` leaf intervals, giving the
/// left child the first `ceil(k/2)` of a node's `k` intervals.
pub fn build_pit(sorted: &[usize]) -> Result<Pit> {
    if sorted.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut seen = sorted.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParam("sorted list contains duplicates".into()));
    }

    // bounds[k] is the left endpoint of leaf slot k, least preferred first
    let len = sorted.len();
    let mut bounds = Vec::with_capacity(len + 2);
    bounds.push(Boundary::NegInf);
    bounds.extend(sorted.iter().rev().map(|&i| Boundary::Item(i)));
    bounds.push(Boundary::PosInf);

    let mut pit = Pit {
        nodes: Vec::with_capacity(2 * len + 1),
        root: 0,
        depth: 0,
        leaves: vec![0; len + 1],
        len,
    };
    pit.root = pit.grow(&bounds, 0, len + 1, None, 1);
    pit.depth = pit.nodes.iter().map(|n| n.depth).max().unwrap_or(0);
    Ok(pit)
}

impl Pit {
    fn grow(&mut self, bounds: &[Boundary], lo: usize, hi: usize, parent: Option<NodeId>, depth: usize) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(PitNode {
            left: bounds[lo],
            right: bounds[hi],
            mid: None,
            parent,
            lchild: None,
            rchild: None,
            depth,
            slot: None,
        });
        if hi - lo == 1 {
            self.nodes[id].slot = Some(lo);
            self.leaves[lo] = id;
        } else {
            let split = lo + (hi - lo).div_ceil(2);
            let l = self.grow(bounds, lo, split, Some(id), depth + 1);
            let r = self.grow(bounds, split, hi, Some(id), depth + 1);
            let node = &mut self.nodes[id];
            node.mid = Some(bounds[split]);
            node.lchild = Some(l);
            node.rchild = Some(r);
        }
        id
    }

    pub fn node(&self, id: NodeId) -> &PitNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[PitNode] {
        &self.nodes
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Length of the source list.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Leaves from left (least preferred end) to right.
    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    /// Index in the most-preferred-first list at which an item falling in
    /// `leaf` is inserted.
    pub fn insertion_position(&self, leaf: NodeId) -> usize {
        let slot = self.nodes[leaf].slot.expect("insertion_position needs a leaf");
        self.len - slot
    }

    /// One line per node: `depth idx: (left, right) mid=<m> parent=<p>`,
    /// with `-` for an absent mid or parent.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (idx, n) in self.nodes.iter().enumerate() {
            let mid = n.mid.map_or_else(|| "-".to_owned(), |m| m.to_string());
            let parent = n.parent.map_or_else(|| "-".to_owned(), |p| p.to_string());
            let _ = writeln!(
                out,
                "{} {idx}: ({}, {}) mid={mid} parent={parent}",
                n.depth, n.left, n.right
            );
        }
        out
    }
}

/// Exact ordering of items and sentinels under a known ranking.
#[derive(Debug, Clone)]
pub struct TrueOrder {
    rank_of: rustc_hash::FxHashMap<usize, usize>,
}

impl TrueOrder {
    pub fn new(ranking: &[usize]) -> Self {
        Self { rank_of: ranking.iter().enumerate().map(|(pos, &i)| (i, pos)).collect() }
    }

    /// Larger is more preferred.
    fn strength(&self, b: Boundary) -> i64 {
        match b {
            Boundary::NegInf => i64::MIN,
            Boundary::PosInf => i64::MAX,
            Boundary::Item(i) => -(self.rank_of[&i] as i64),
        }
    }

    pub fn prefers(&self, a: Boundary, b: Boundary) -> bool {
        self.strength(a) > self.strength(b)
    }

    /// `right > probe > left`.
    pub fn contains(&self, left: Boundary, right: Boundary, probe: usize) -> bool {
        let p = Boundary::Item(probe);
        self.prefers(right, p) && self.prefers(p, left)
    }
}

/// The leaf whose interval contains `probe`, found by exact descent.
pub fn locate_interval(pit: &Pit, probe: usize, order: &TrueOrder) -> NodeId {
    let mut id = pit.root();
    while let Some(mid) = pit.node(id).mid {
        let n = pit.node(id);
        id = if order.prefers(Boundary::Item(probe), mid) {
            n.rchild.expect("internal node has children")
        } else {
            n.lchild.expect("internal node has children")
        };
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use Boundary::*;

    #[test]
    fn three_item_tree_shape() {
        let pit = build_pit(&[3, 2, 1]).unwrap();
        assert_eq!(pit.depth(), 3);
        let root = pit.node(pit.root());
        assert_eq!((root.left, root.right, root.mid), (NegInf, PosInf, Some(Item(2))));
        let l = pit.node(root.lchild.unwrap());
        let r = pit.node(root.rchild.unwrap());
        assert_eq!((l.left, l.right, l.mid), (NegInf, Item(2), Some(Item(1))));
        assert_eq!((r.left, r.right, r.mid), (Item(2), PosInf, Some(Item(3))));
        let leaves: Vec<_> = pit.leaves().iter().map(|&id| (pit.node(id).left, pit.node(id).right)).collect();
        assert_eq!(
            leaves,
            vec![(NegInf, Item(1)), (Item(1), Item(2)), (Item(2), Item(3)), (Item(3), PosInf)]
        );
        assert_eq!(
            pit.dump(),
            "1 0: (-inf, +inf) mid=2 parent=-\n\
             2 1: (-inf, 2) mid=1 parent=0\n\
             3 2: (-inf, 1) mid=- parent=1\n\
             3 3: (1, 2) mid=- parent=1\n\
             2 4: (2, +inf) mid=3 parent=0\n\
             3 5: (2, 3) mid=- parent=4\n\
             3 6: (3, +inf) mid=- parent=4\n"
        );
    }

    #[test]
    fn single_item_tree() {
        let pit = build_pit(&[1]).unwrap();
        assert_eq!(pit.depth(), 2);
        assert_eq!(pit.leaves().len(), 2);
        assert_eq!(pit.node(pit.root()).mid, Some(Item(1)));
    }

    #[test]
    fn seven_items_eight_leaves() {
        let pit = build_pit(&[7, 6, 5, 4, 3, 2, 1]).unwrap();
        assert_eq!(pit.leaves().len(), 8);
        assert_eq!(pit.depth(), 4);
        assert_eq!(pit.nodes().len(), 15);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_pit(&[]), Err(Error::EmptyList)));
        assert!(build_pit(&[1, 2, 1]).is_err());
    }

    #[test]
    fn insertion_positions() {
        let pit = build_pit(&[3, 2, 1]).unwrap();
        let pos: Vec<_> = pit.leaves().iter().map(|&l| pit.insertion_position(l)).collect();
        assert_eq!(pos, vec![3, 2, 1, 0]);
    }

    #[test]
    fn locate_in_three_item_tree() {
        // true order 4 > 3 > 5 > 2 > 1; probe 5 sits between 2 and 3
        let order = TrueOrder::new(&[4, 3, 5, 2, 1]);
        let pit = build_pit(&[3, 2, 1]).unwrap();
        let leaf = pit.node(locate_interval(&pit, 5, &order));
        assert_eq!((leaf.left, leaf.right), (Item(2), Item(3)));
        let top = pit.node(locate_interval(&pit, 4, &order));
        assert_eq!((top.left, top.right), (Item(3), PosInf));
    }

    #[test]
    fn locate_matches_linear_scan() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let mut all: Vec<usize> = (1..=16).collect();
            all.shuffle(&mut rng);
            let order = TrueOrder::new(&all);
            let probe = all[rand::Rng::gen_range(&mut rng, 0..16)];
            let mut sorted: Vec<usize> = all.iter().copied().filter(|&x| x != probe).collect();
            sorted.sort_by_key(|x| all.iter().position(|y| y == x).unwrap());
            let pit = build_pit(&sorted).unwrap();
            let scan: Vec<_> = pit
                .leaves()
                .iter()
                .copied()
                .filter(|&l| order.contains(pit.node(l).left, pit.node(l).right, probe))
                .collect();
            assert_eq!(scan.len(), 1);
            assert_eq!(locate_interval(&pit, probe, &order), scan[0]);
        }
    }
}
