//! Finite posets given by cover relations.
//!
//! Elements are string labels; everything else works on dense indices
//! `0..len()` in the order the labels were given.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("cover relations contain a cycle through {0}")]
    Cycle(String),
    #[error("duplicate element label {0}")]
    DuplicateLabel(String),
    #[error("cover pair ({0},{0}) is not irreflexive")]
    Reflexive(String),
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("{0} is not below {1}")]
    NotLeq(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
    component: Vec<usize>,
    heights: Vec<Vec<Option<usize>>>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of the given cover pairs.
    /// Redundant pairs (implied by transitivity) are accepted; the stored
    /// covers are recomputed from the closure.
    pub fn from_cover_relations<S: AsRef<str>>(
        elements: &[S],
        cover_pairs: &[(S, S)],
    ) -> Result<Poset, PosetError> {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(PosetError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let look = |s: &str| index.get(s).copied().ok_or_else(|| PosetError::UnknownElement(s.to_string()));
        let mut succ = vec![Vec::new(); n];
        for (a, b) in cover_pairs {
            let (i, j) = (look(a.as_ref())?, look(b.as_ref())?);
            if i == j {
                return Err(PosetError::Reflexive(labels[i].clone()));
            }
            succ[i].push(j);
        }
        let mut leq = vec![vec![false; n]; n];
        for s in 0..n {
            let mut queue = VecDeque::from([s]);
            leq[s][s] = true;
            while let Some(u) = queue.pop_front() {
                for &v in &succ[u] {
                    if v == s {
                        return Err(PosetError::Cycle(labels[s].clone()));
                    }
                    if !leq[s][v] {
                        leq[s][v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        Ok(Self::from_leq(labels, index, leq))
    }

    fn from_leq(labels: Vec<String>, index: HashMap<String, usize>, leq: Vec<Vec<bool>>) -> Poset {
        let n = labels.len();
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a][b] && !(0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b]) {
                    covers.push((a, b));
                }
            }
        }
        // union-find on comparability
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(a, b) in &covers {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
        let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        let mut ids = HashMap::new();
        let component = roots
            .iter()
            .map(|r| {
                let k = ids.len();
                *ids.entry(*r).or_insert(k)
            })
            .collect();
        let mut heights = vec![vec![None; n]; n];
        // longest chain lengths, by increasing interval size
        let mut order: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| leq[a][b])
            .collect();
        order.sort_by_key(|&(a, b)| (0..n).filter(|&c| leq[a][c] && leq[c][b]).count());
        for (a, b) in order {
            let h = if a == b {
                0
            } else {
                covers
                    .iter()
                    .filter(|&&(u, v)| u == a && leq[v][b])
                    .map(|&(_, v)| 1 + heights[v][b].expect("smaller interval first"))
                    .max()
                    .unwrap()
            };
            heights[a][b] = Some(h);
        }
        Poset {
            labels,
            index,
            leq,
            covers,
            component,
            heights,
        }
    }

    /// The chain `x0 < x1 < ... < x(n-1)`.
    pub fn chain(n: usize) -> Poset {
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let covers: Vec<(String, String)> = (1..n).map(|i| (labels[i - 1].clone(), labels[i].clone())).collect();
        Poset::from_cover_relations(&labels, &covers).unwrap()
    }

    /// The two-element chain `x < y`.
    pub fn two_chain() -> Poset {
        Poset::from_cover_relations(&["x", "y"], &[("x", "y")]).unwrap()
    }

    /// The three-element poset `x < y > z`.
    pub fn vee() -> Poset {
        Poset::from_cover_relations(&["x", "y", "z"], &[("x", "y"), ("z", "y")]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, PosetError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| PosetError::UnknownElement(label.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.covers.contains(&(a, b))
    }

    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.leq[a][c] && self.leq[c][b]).collect()
    }

    /// Label-level interval lookup.
    pub fn interval_of(&self, a: &str, b: &str) -> Result<Vec<String>, PosetError> {
        let (a, b) = (self.index_of(a)?, self.index_of(b)?);
        Ok(self.interval(a, b).into_iter().map(|c| self.labels[c].clone()).collect())
    }

    /// Length of the longest chain in `[a,b]`.
    pub fn height(&self, a: usize, b: usize) -> Result<usize, PosetError> {
        self.heights[a][b].ok_or_else(|| self.not_leq(a, b))
    }

    /// Height for pairs already known to satisfy `a <= b`.
    pub fn h(&self, a: usize, b: usize) -> usize {
        self.heights[a][b].expect("h() on incomparable pair")
    }

    fn not_leq(&self, a: usize, b: usize) -> PosetError {
        PosetError::NotLeq(self.labels[a].clone(), self.labels[b].clone())
    }

    /// All saturated chains `a = c0 < c1 < ... < ck = b`.
    pub fn maximal_chains(&self, a: usize, b: usize) -> Result<Vec<Vec<usize>>, PosetError> {
        if !self.leq[a][b] {
            return Err(self.not_leq(a, b));
        }
        let mut out = Vec::new();
        let mut path = vec![a];
        self.extend_chains(b, &mut path, &mut out);
        Ok(out)
    }

    fn extend_chains(&self, b: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if last == b {
            out.push(path.clone());
            return;
        }
        for &(u, v) in &self.covers {
            if u == last && self.leq[v][b] {
                path.push(v);
                self.extend_chains(b, path, out);
                path.pop();
            }
        }
    }

    /// Bijective and order-reflecting both ways.
    pub fn is_order_automorphism(&self, f: &[usize]) -> bool {
        let n = self.len();
        if f.len() != n || f.iter().any(|&x| x >= n) {
            return false;
        }
        let mut seen = vec![false; n];
        for &x in f {
            if std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        (0..n).all(|a| (0..n).all(|b| self.leq[a][b] == self.leq[f[a]][f[b]]))
    }

    /// Every order automorphism, by brute force over permutations.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn go(p: &Poset, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            let n = p.len();
            let i = perm.len();
            if i == n {
                out.push(perm.clone());
                return;
            }
            for x in 0..n {
                // partial check keeps the search tiny
                if !used[x] && (0..i).all(|j| p.leq[j][i] == p.leq[perm[j]][x] && p.leq[i][j] == p.leq[x][perm[j]]) {
                    used[x] = true;
                    perm.push(x);
                    go(p, perm, used, out);
                    perm.pop();
                    used[x] = false;
                }
            }
        }
        go(self, &mut perm, &mut used, &mut out);
        out
    }

    pub fn component_of(&self, a: usize) -> usize {
        self.component[a]
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let k = self.component.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); k];
        for (x, &c) in self.component.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// Every poset (up to relabelling, with repeats) whose interval set Y has
    /// at most `max_y` elements, using naturally labelled relations.
    pub fn enumerate_small(max_y: usize) -> Vec<Poset> {
        let mut out = Vec::new();
        for n in 1..=max_y {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let budget = max_y - n;
            let m = pairs.len();
            for mask in 0u64..(1u64 << m) {
                if mask.count_ones() as usize > budget {
                    continue;
                }
                let mut leq = vec![vec![false; n]; n];
                for (i, row) in leq.iter_mut().enumerate() {
                    row[i] = true;
                }
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        leq[i][j] = true;
                    }
                }
                let closed = (0..n).all(|a| {
                    (0..n).all(|b| (0..n).all(|c| !(leq[a][b] && leq[b][c]) || leq[a][c]))
                });
                if !closed {
                    continue;
                }
                let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
                let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
                out.push(Poset::from_leq(labels, index, leq));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_errors() {
        assert_eq!(
            Poset::from_cover_relations(&["x"], &[("x", "x")]),
            Err(PosetError::Reflexive("x".into()))
        );
        assert!(matches!(
            Poset::from_cover_relations(&["x", "y"], &[("x", "y"), ("y", "x")]),
            Err(PosetError::Cycle(_))
        ));
        assert_eq!(
            Poset::from_cover_relations(&["x", "x"], &[]),
            Err(PosetError::DuplicateLabel("x".into()))
        );
        assert!(matches!(
            Poset::from_cover_relations(&["x"], &[("x", "w")]),
            Err(PosetError::UnknownElement(_))
        ));
    }

    #[test]
    fn intervals_and_heights() {
        let p = Poset::two_chain();
        assert_eq!(p.interval_of("x", "y").unwrap(), vec!["x", "y"]);
        assert_eq!(p.interval_of("y", "y").unwrap(), vec!["y"]);
        assert_eq!(p.height(0, 1), Ok(1));
        assert_eq!(p.height(1, 1), Ok(0));
        assert!(p.height(1, 0).is_err());
        let v = Poset::vee();
        assert!(v.interval_of("x", "z").unwrap().is_empty());
        assert_eq!(Poset::chain(3).height(0, 2), Ok(2));
    }

    #[test]
    fn chains_and_components() {
        let d = Poset::from_cover_relations(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        )
        .unwrap();
        assert_eq!(d.maximal_chains(0, 3).unwrap().len(), 2);
        assert_eq!(d.maximal_chains(1, 1).unwrap(), vec![vec![1]]);
        assert_eq!(Poset::two_chain().maximal_chains(0, 1).unwrap(), vec![vec![0, 1]]);
        assert_eq!(Poset::vee().connected_components(), vec![vec![0, 1, 2]]);
        let anti = Poset::from_cover_relations::<&str>(&["a", "b"], &[]).unwrap();
        assert_eq!(anti.connected_components(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn automorphisms() {
        let v = Poset::vee();
        assert!(v.is_order_automorphism(&[2, 1, 0]));
        assert!(v.is_order_automorphism(&[0, 1, 2]));
        assert_eq!(v.automorphisms().len(), 2);
        let p = Poset::two_chain();
        assert!(!p.is_order_automorphism(&[1, 0]));
        assert!(!p.is_order_automorphism(&[0, 0]));
    }

    #[test]
    fn redundant_covers_are_dropped() {
        let p = Poset::from_cover_relations(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert_eq!(p.height(0, 2), Ok(2));
    }

    #[test]
    fn small_posets() {
        let all = Poset::enumerate_small(3);
        // one point; two points (antichain, chain); three antichain points
        assert_eq!(all.len(), 4);
    }
}
