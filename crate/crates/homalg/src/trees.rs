//! Rooted trees with labeled leaves and internal vertices of arity >= 2:
//! enumeration, grafting composition, star decomposition, edge splitting,
//! and the sign bookkeeping on determinant lines of internal edges.
//!
//! A tree is stored canonically as the family of leaf-descendant sets of its
//! internal vertices (each sorted, the family sorted lexicographically), so
//! structural equality is set equality. The degenerate tree is a single leaf
//! with no internal vertex. Internal edges are the non-root members of the
//! family; their canonical order is lexicographic on the sorted sets.
//!
//! Textual notation: nested parentheses of whitespace-separated labels,
//! e.g. `((a b) c d)` is the 4-leaf tree with one internal edge over {a,b};
//! a bare label is the degenerate tree.

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("duplicate leaf label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown leaf {0:?}")]
    UnknownLeaf(String),
    #[error("operation requires a non-degenerate tree")]
    Degenerate,
    #[error("invalid label {0:?}: labels are nonempty and contain no whitespace or parentheses")]
    InvalidLabel(String),
    #[error("invalid tree structure: {0}")]
    Structure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A rooted leaf-labeled tree in canonical cluster form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    leaves: Vec<String>,
    clusters: Vec<Vec<String>>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '(' || c == ')')
}

fn is_subset(a: &[String], b: &[String]) -> bool {
    // both sorted
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y.as_str() > x.as_str() {
                return false;
            }
        }
        return false;
    }
    true
}

fn disjoint(a: &[String], b: &[String]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

impl Tree {
    /// The degenerate tree: one leaf, no internal vertex.
    pub fn leaf(label: &str) -> Result<Tree, TreeError> {
        if !valid_label(label) {
            return Err(TreeError::InvalidLabel(label.to_string()));
        }
        Ok(Tree {
            leaves: vec![label.to_string()],
            clusters: Vec::new(),
        })
    }

    /// The tree with a single internal vertex over all the given labels.
    pub fn star<I, S>(labels: I) -> Result<Tree, TreeError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let leaves = canonical_labels(labels)?;
        if leaves.len() < 2 {
            return Err(TreeError::Structure(
                "a star needs at least 2 leaves".to_string(),
            ));
        }
        Ok(Tree {
            clusters: vec![leaves.clone()],
            leaves,
        })
    }

    /// Build from an explicit cluster family, validating every invariant.
    pub fn new(leaves: Vec<String>, mut clusters: Vec<Vec<String>>) -> Result<Tree, TreeError> {
        let leaves = canonical_labels(leaves)?;
        for c in clusters.iter_mut() {
            c.sort();
        }
        clusters.sort();
        for w in clusters.windows(2) {
            if w[0] == w[1] {
                return Err(TreeError::Structure(format!(
                    "repeated cluster {:?}",
                    w[0]
                )));
            }
        }
        if clusters.is_empty() {
            if leaves.len() != 1 {
                return Err(TreeError::Structure(
                    "several leaves but no internal vertex".to_string(),
                ));
            }
            return Ok(Tree { leaves, clusters });
        }
        for c in &clusters {
            if c.len() < 2 {
                return Err(TreeError::Structure(format!(
                    "cluster {:?} has fewer than 2 leaves",
                    c
                )));
            }
            if !is_subset(c, &leaves) {
                return Err(TreeError::Structure(format!(
                    "cluster {:?} is not a subset of the leaf set",
                    c
                )));
            }
        }
        if !clusters.iter().any(|c| c.len() == leaves.len()) {
            return Err(TreeError::Structure(
                "the cluster family must contain the full leaf set".to_string(),
            ));
        }
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let (a, b) = (&clusters[i], &clusters[j]);
                if !(is_subset(a, b) || is_subset(b, a) || disjoint(a, b)) {
                    return Err(TreeError::Structure(format!(
                        "clusters {:?} and {:?} overlap without nesting",
                        a, b
                    )));
                }
            }
        }
        Ok(Tree { leaves, clusters })
    }

    fn from_parts_unchecked(leaves: Vec<String>, mut clusters: Vec<Vec<String>>) -> Tree {
        clusters.sort();
        debug_assert!(Tree::new(leaves.clone(), clusters.clone()).is_ok());
        Tree { leaves, clusters }
    }

    pub fn is_degenerate(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// All internal vertices, one cluster each, in canonical order.
    pub fn clusters(&self) -> &[Vec<String>] {
        &self.clusters
    }

    /// Internal edges = non-root clusters, in canonical (lexicographic) order.
    pub fn internal_edges(&self) -> Vec<&Vec<String>> {
        self.clusters
            .iter()
            .filter(|c| c.len() != self.leaves.len())
            .collect()
    }

    pub fn internal_edge_count(&self) -> usize {
        self.clusters.len().saturating_sub(1)
    }

    /// Children of the vertex `cluster`, as sorted leaf-sets (singletons are
    /// leaves), sorted lexicographically.
    pub fn children(&self, cluster: &[String]) -> Vec<Vec<String>> {
        let subs: Vec<&Vec<String>> = self
            .clusters
            .iter()
            .filter(|c| c.len() < cluster.len() && is_subset(c, cluster))
            .collect();
        let maximal: Vec<&Vec<String>> = subs
            .iter()
            .filter(|c| {
                !subs
                    .iter()
                    .any(|d| d.len() > c.len() && is_subset(c, d))
            })
            .copied()
            .collect();
        let mut out: Vec<Vec<String>> = maximal.iter().map(|c| (*c).clone()).collect();
        for leaf in cluster {
            if !maximal.iter().any(|c| c.binary_search(leaf).is_ok()) {
                out.push(vec![leaf.clone()]);
            }
        }
        out.sort();
        out
    }

    pub fn arity(&self, cluster: &[String]) -> usize {
        self.children(cluster).len()
    }

    /// Grafting: identify leaf `at` of `self` with the root of `other`.
    /// Leaf sets must otherwise be disjoint. The degenerate tree is a
    /// two-sided unit.
    pub fn compose(&self, at: &str, other: &Tree) -> Result<Tree, TreeError> {
        if self.leaves.binary_search(&at.to_string()).is_err() {
            return Err(TreeError::UnknownLeaf(at.to_string()));
        }
        for l in &other.leaves {
            if l != at && self.leaves.binary_search(l).is_ok() {
                return Err(TreeError::DuplicateLabel(l.clone()));
            }
        }
        let mut leaves: Vec<String> = self
            .leaves
            .iter()
            .filter(|l| l.as_str() != at)
            .cloned()
            .chain(other.leaves.iter().cloned())
            .collect();
        leaves.sort();
        let mut clusters: Vec<Vec<String>> = Vec::new();
        for c in &self.clusters {
            if c.binary_search(&at.to_string()).is_ok() {
                let mut c2: Vec<String> = c
                    .iter()
                    .filter(|l| l.as_str() != at)
                    .cloned()
                    .chain(other.leaves.iter().cloned())
                    .collect();
                c2.sort();
                clusters.push(c2);
            } else {
                clusters.push(c.clone());
            }
        }
        clusters.extend(other.clusters.iter().cloned());
        Ok(Tree::from_parts_unchecked(leaves, clusters))
    }

    /// The unique presentation as a left-to-right composition of k+1 stars:
    /// a head star and a list of (attachment leaf, star) pairs. Each internal
    /// child is represented in its parent's star by the minimal leaf below it.
    pub fn star_decomposition(&self) -> Result<(Tree, Vec<(String, Tree)>), TreeError> {
        if self.is_degenerate() {
            return Err(TreeError::Degenerate);
        }
        let mut order: Vec<&Vec<String>> = self.clusters.iter().collect();
        order.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut head: Option<Tree> = None;
        let mut rest: Vec<(String, Tree)> = Vec::new();
        for cluster in order {
            let inputs: Vec<String> = self
                .children(cluster)
                .iter()
                .map(|c| c[0].clone())
                .collect();
            let star = Tree::star(inputs)?;
            if cluster.len() == self.leaves.len() {
                head = Some(star);
            } else {
                rest.push((cluster[0].clone(), star));
            }
        }
        Ok((head.expect("root cluster present"), rest))
    }

    /// Fold a star decomposition back into a tree.
    pub fn compose_stars(head: &Tree, rest: &[(String, Tree)]) -> Result<Tree, TreeError> {
        let mut t = head.clone();
        for (at, star) in rest {
            t = t.compose(at, star)?;
        }
        Ok(t)
    }

    /// All single edge splittings, with signs.
    ///
    /// A splitting picks an internal vertex and a proper subset of size >= 2
    /// of its children, and gathers them under a new vertex. The sign places
    /// the new internal edge first, then the old internal edges in canonical
    /// order, and re-expresses that in the canonical order of the result:
    /// (-1)^(number of old internal edges preceding the new one).
    pub fn splittings(&self) -> Vec<(Tree, i32)> {
        let mut out = Vec::new();
        let old_edges = self.internal_edges();
        for cluster in &self.clusters {
            let children = self.children(cluster);
            let m = children.len();
            if m < 3 {
                continue;
            }
            for mask in 1u32..(1 << m) {
                let size = mask.count_ones() as usize;
                if size < 2 || size > m - 1 {
                    continue;
                }
                let mut new_cluster: Vec<String> = Vec::new();
                for (i, child) in children.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        new_cluster.extend(child.iter().cloned());
                    }
                }
                new_cluster.sort();
                let before = old_edges.iter().filter(|e| ***e < new_cluster).count();
                let sign = if before % 2 == 0 { 1 } else { -1 };
                let mut clusters = self.clusters.clone();
                clusters.push(new_cluster);
                out.push((
                    Tree::from_parts_unchecked(self.leaves.clone(), clusters),
                    sign,
                ));
            }
        }
        out
    }

    /// Relabel leaves through a bijection given as old -> new.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<Tree, TreeError> {
        let apply = |l: &String| -> Result<String, TreeError> {
            map.get(l)
                .cloned()
                .ok_or_else(|| TreeError::UnknownLeaf(l.clone()))
        };
        let leaves = self
            .leaves
            .iter()
            .map(apply)
            .collect::<Result<Vec<_>, _>>()?;
        let clusters = self
            .clusters
            .iter()
            .map(|c| c.iter().map(apply).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Tree::new(leaves, clusters)
    }

    /// Parse the parenthesized notation.
    pub fn parse(text: &str) -> Result<Tree, TreeError> {
        let tokens = tokenize(text)?;
        let mut pos = 0usize;
        let node = parse_node(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(TreeError::Parse(format!(
                "trailing input after position {}",
                pos
            )));
        }
        let mut leaves = Vec::new();
        let mut clusters = Vec::new();
        collect(&node, &mut leaves, &mut clusters);
        let mut sorted = leaves.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(TreeError::DuplicateLabel(w[0].clone()));
            }
        }
        Tree::new(leaves, clusters)
    }
}

fn canonical_labels<I, S>(labels: I) -> Result<Vec<String>, TreeError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out: Vec<String> = Vec::new();
    for l in labels {
        let l = l.as_ref();
        if !valid_label(l) {
            return Err(TreeError::InvalidLabel(l.to_string()));
        }
        out.push(l.to_string());
    }
    if out.is_empty() {
        return Err(TreeError::Structure("empty leaf set".to_string()));
    }
    out.sort();
    for w in out.windows(2) {
        if w[0] == w[1] {
            return Err(TreeError::DuplicateLabel(w[0].clone()));
        }
    }
    Ok(out)
}

enum Node {
    Leaf(String),
    Vertex(Vec<Node>),
}

#[derive(PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>, TreeError> {
    let mut tokens = Vec::new();
    let mut atom = String::new();
    for c in text.chars() {
        match c {
            '(' | ')' => {
                if !atom.is_empty() {
                    tokens.push(Token::Atom(std::mem::take(&mut atom)));
                }
                tokens.push(if c == '(' { Token::Open } else { Token::Close });
            }
            c if c.is_whitespace() => {
                if !atom.is_empty() {
                    tokens.push(Token::Atom(std::mem::take(&mut atom)));
                }
            }
            c => atom.push(c),
        }
    }
    if !atom.is_empty() {
        tokens.push(Token::Atom(atom));
    }
    if tokens.is_empty() {
        return Err(TreeError::Parse("empty input".to_string()));
    }
    Ok(tokens)
}

fn parse_node(tokens: &[Token], pos: &mut usize) -> Result<Node, TreeError> {
    match tokens.get(*pos) {
        Some(Token::Atom(a)) => {
            *pos += 1;
            Ok(Node::Leaf(a.clone()))
        }
        Some(Token::Open) => {
            *pos += 1;
            let mut children = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Token::Close) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => children.push(parse_node(tokens, pos)?),
                    None => return Err(TreeError::Parse("unbalanced parentheses".to_string())),
                }
            }
            if children.len() < 2 {
                return Err(TreeError::Parse(
                    "an internal vertex needs at least 2 children".to_string(),
                ));
            }
            Ok(Node::Vertex(children))
        }
        Some(Token::Close) => Err(TreeError::Parse("unexpected ')'".to_string())),
        None => Err(TreeError::Parse("unexpected end of input".to_string())),
    }
}

fn collect(node: &Node, leaves: &mut Vec<String>, clusters: &mut Vec<Vec<String>>) -> Vec<String> {
    match node {
        Node::Leaf(l) => {
            leaves.push(l.clone());
            vec![l.clone()]
        }
        Node::Vertex(children) => {
            let mut mine = Vec::new();
            for c in children {
                mine.extend(collect(c, leaves, clusters));
            }
            mine.sort();
            clusters.push(mine.clone());
            mine
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn render(t: &Tree, cluster: &[String]) -> String {
            let parts: Vec<String> = t
                .children(cluster)
                .iter()
                .map(|c| {
                    if c.len() == 1 {
                        c[0].clone()
                    } else {
                        render(t, c)
                    }
                })
                .collect();
            format!("({})", parts.join(" "))
        }
        if self.is_degenerate() {
            write!(f, "{}", self.leaves[0])
        } else {
            write!(f, "{}", render(self, &self.leaves))
        }
    }
}

/// All non-degenerate trees on the given labels with exactly `k` internal
/// edges, in a deterministic order without duplicates. Out-of-range `k`
/// yields the empty list.
pub fn enumerate<S: AsRef<str>>(labels: &[S], k: usize) -> Result<Vec<Tree>, TreeError> {
    let leaves = canonical_labels(labels.iter().map(|s| s.as_ref()))?;
    if leaves.len() < 2 {
        return Err(TreeError::Structure(
            "enumeration needs at least 2 leaves".to_string(),
        ));
    }
    if k + 2 > leaves.len() {
        return Ok(Vec::new());
    }
    Ok(trees_on(&leaves, k))
}

fn trees_on(set: &[String], k: usize) -> Vec<Tree> {
    let mut out = Vec::new();
    for blocks in partitions(set) {
        if blocks.len() < 2 {
            continue;
        }
        let big: Vec<&Vec<String>> = blocks.iter().filter(|b| b.len() >= 2).collect();
        if k < big.len() {
            continue;
        }
        let budget = k - big.len();
        let mut assignments: Vec<Vec<usize>> = Vec::new();
        distribute(budget, &big, 0, &mut Vec::new(), &mut assignments);
        for asg in assignments {
            let sub_lists: Vec<Vec<Tree>> = big
                .iter()
                .zip(&asg)
                .map(|(b, &kb)| trees_on(b, kb))
                .collect();
            if sub_lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let mut choice = vec![0usize; sub_lists.len()];
            loop {
                let mut clusters: Vec<Vec<String>> = vec![set.to_vec()];
                for (list, &c) in sub_lists.iter().zip(&choice) {
                    clusters.extend(list[c].clusters.iter().cloned());
                }
                out.push(Tree::from_parts_unchecked(set.to_vec(), clusters));
                // advance the mixed-radix counter
                let mut i = 0;
                loop {
                    if i == choice.len() {
                        break;
                    }
                    choice[i] += 1;
                    if choice[i] < sub_lists[i].len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == choice.len() {
                    break;
                }
            }
        }
    }
    out
}

fn distribute(
    budget: usize,
    big: &[&Vec<String>],
    idx: usize,
    acc: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if idx == big.len() {
        if budget == 0 {
            out.push(acc.clone());
        }
        return;
    }
    let cap = big[idx].len() - 2;
    for kb in 0..=budget.min(cap) {
        acc.push(kb);
        distribute(budget - kb, big, idx + 1, acc, out);
        acc.pop();
    }
}

/// Unordered set partitions, each block sorted, blocks sorted; deterministic.
fn partitions(set: &[String]) -> Vec<Vec<Vec<String>>> {
    if set.is_empty() {
        return vec![Vec::new()];
    }
    let first = &set[0];
    let rest: Vec<String> = set[1..].to_vec();
    let mut out = Vec::new();
    for mask in 0u32..(1 << rest.len()) {
        let mut block = vec![first.clone()];
        let mut remaining = Vec::new();
        for (i, x) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                block.push(x.clone());
            } else {
                remaining.push(x.clone());
            }
        }
        block.sort();
        for mut tail in partitions(&remaining) {
            let mut p = vec![block.clone()];
            p.append(&mut tail);
            p.sort();
            out.push(p);
        }
    }
    out
}

/// (2n-3)!! for n >= 2: the number of binary trees on n labeled leaves.
pub fn double_factorial_count(n: usize) -> u64 {
    assert!(n >= 2);
    let mut acc = 1u64;
    let mut k = 2 * n as u64 - 3;
    while k >= 3 {
        acc *= k;
        k -= 2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn star_of_two_is_unique_tree() {
        let ts = enumerate(&labels(&["a", "b"]), 0).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0], Tree::star(["a", "b"]).unwrap());
    }

    #[test]
    fn enumerate_three_leaves() {
        let ts = enumerate(&labels(&["a", "b", "c"]), 1).unwrap();
        assert_eq!(ts.len(), 3);
        let mut seen = ts.clone();
        seen.dedup();
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn enumerate_binary_four_leaves() {
        let ts = enumerate(&labels(&["1", "2", "3", "4"]), 2).unwrap();
        assert_eq!(ts.len(), 15);
        assert_eq!(double_factorial_count(4), 15);
    }

    #[test]
    fn enumerate_out_of_range_is_empty() {
        assert!(enumerate(&labels(&["a", "b"]), 1).unwrap().is_empty());
        assert!(enumerate(&labels(&["a", "b", "c"]), 5).unwrap().is_empty());
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        for k in 0..=3 {
            let ts = enumerate(&labels(&["1", "2", "3", "4", "5"]), k).unwrap();
            let mut set: Vec<&Tree> = ts.iter().collect();
            set.sort();
            set.dedup();
            assert_eq!(set.len(), ts.len(), "duplicates at k={}", k);
        }
    }

    #[test]
    fn compose_unit_laws() {
        let t = Tree::parse("((a b) c)").unwrap();
        let unit = Tree::leaf("c").unwrap();
        assert_eq!(t.compose("c", &unit).unwrap(), t);
        let unit_src = Tree::leaf("z").unwrap();
        let grafted = unit_src.compose("z", &t).unwrap();
        assert_eq!(grafted, t);
    }

    #[test]
    fn compose_two_stars() {
        let t1 = Tree::star(["a", "b"]).unwrap();
        let t2 = Tree::star(["c", "d"]).unwrap();
        let t = t1.compose("b", &t2).unwrap();
        assert_eq!(
            t.clusters(),
            &[
                labels(&["a", "c", "d"]),
                labels(&["c", "d"]),
            ]
        );
        assert_eq!(t.internal_edge_count(), 1);
    }

    #[test]
    fn compose_rejects_label_collision() {
        let t1 = Tree::star(["a", "b"]).unwrap();
        let t2 = Tree::star(["a", "d"]).unwrap();
        assert_eq!(
            t1.compose("b", &t2),
            Err(TreeError::DuplicateLabel("a".to_string()))
        );
    }

    #[test]
    fn compose_edge_counts_add() {
        let t1 = Tree::parse("((a b) c)").unwrap();
        let t2 = Tree::parse("((d e) f)").unwrap();
        let t = t1.compose("c", &t2).unwrap();
        assert_eq!(t.internal_edge_count(), 1 + 1 + 1);
    }

    #[test]
    fn star_decomposition_of_star() {
        let s = Tree::star(["a", "b", "c"]).unwrap();
        let (head, rest) = s.star_decomposition().unwrap();
        assert_eq!(head, s);
        assert!(rest.is_empty());
    }

    #[test]
    fn star_decomposition_three_leaves() {
        let t = Tree::parse("((a b) c)").unwrap();
        let (head, rest) = t.star_decomposition().unwrap();
        assert_eq!(rest.len(), 1);
        assert_eq!(Tree::compose_stars(&head, &rest).unwrap(), t);
    }

    #[test]
    fn star_decomposition_round_trips() {
        for k in 0..=3 {
            for t in enumerate(&labels(&["1", "2", "3", "4", "5"]), k).unwrap() {
                let (head, rest) = t.star_decomposition().unwrap();
                assert_eq!(rest.len(), k, "k+1 stars for {}", t);
                assert_eq!(Tree::compose_stars(&head, &rest).unwrap(), t);
            }
        }
    }

    #[test]
    fn star_decomposition_rejects_degenerate() {
        assert_eq!(
            Tree::leaf("a").unwrap().star_decomposition().err(),
            Some(TreeError::Degenerate)
        );
    }

    #[test]
    fn splitting_counts() {
        assert!(Tree::star(["a", "b"]).unwrap().splittings().is_empty());
        assert_eq!(Tree::star(["a", "b", "c"]).unwrap().splittings().len(), 3);
        assert_eq!(
            Tree::star(["a", "b", "c", "d"]).unwrap().splittings().len(),
            10
        );
    }

    #[test]
    fn splittings_add_one_edge_and_refine() {
        for k in 0..=2 {
            for t in enumerate(&labels(&["1", "2", "3", "4"]), k).unwrap() {
                for (s, sign) in t.splittings() {
                    assert!(sign == 1 || sign == -1);
                    assert_eq!(s.internal_edge_count(), t.internal_edge_count() + 1);
                    for c in t.clusters() {
                        assert!(s.clusters().contains(c));
                    }
                }
            }
        }
    }

    #[test]
    fn double_splittings_cancel() {
        // the local form of d^2 = 0: each two-step refinement arises from
        // exactly two orders, with opposite composite signs
        for t in enumerate(&labels(&["1", "2", "3", "4", "5"]), 0).unwrap() {
            let mut sums: BTreeMap<Tree, i64> = BTreeMap::new();
            for (s1, g1) in t.splittings() {
                for (s2, g2) in s1.splittings() {
                    *sums.entry(s2).or_insert(0) += (g1 * g2) as i64;
                }
            }
            for (s2, total) in sums {
                assert_eq!(total, 0, "non-cancelling pair above {}", s2);
            }
        }
    }

    #[test]
    fn associativity_nested() {
        let t1 = Tree::star(["a", "b"]).unwrap();
        let t2 = Tree::star(["c", "d"]).unwrap();
        let t3 = Tree::star(["e", "f"]).unwrap();
        let left = t1.compose("b", &t2).unwrap().compose("d", &t3).unwrap();
        let right = t1.compose("b", &t2.compose("d", &t3).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn parse_print_round_trip() {
        // canonical forms print back verbatim
        for text in ["a", "(a b)", "((a b) c d)", "((a b) (c d))", "(u w ((x y) z))"] {
            let t = Tree::parse(text).unwrap();
            assert_eq!(t.to_string(), text);
            assert_eq!(Tree::parse(&t.to_string()).unwrap(), t);
        }
        // non-canonical child order normalizes but parses to the same tree
        let t = Tree::parse("(((x y) z) w u)").unwrap();
        assert_eq!(t.to_string(), "(u w ((x y) z))");
        assert_eq!(Tree::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Tree::parse("(a)"), Err(TreeError::Parse(_))));
        assert!(matches!(Tree::parse("((a b)"), Err(TreeError::Parse(_))));
        assert!(matches!(Tree::parse(""), Err(TreeError::Parse(_))));
        assert!(matches!(
            Tree::parse("(a b a)"),
            Err(TreeError::DuplicateLabel(_))
        ));
        assert!(matches!(Tree::parse("a b"), Err(TreeError::Parse(_))));
    }

    #[test]
    fn children_and_arity() {
        let t = Tree::parse("((a b) c d)").unwrap();
        let root = t.leaves().to_vec();
        assert_eq!(t.arity(&root), 3);
        let inner = labels(&["a", "b"]);
        assert_eq!(t.arity(&inner), 2);
        assert_eq!(
            t.children(&root),
            vec![labels(&["a", "b"]), labels(&["c"]), labels(&["d"])]
        );
    }
}
