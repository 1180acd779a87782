//! Congruence closure over hash-consed first-order terms.

use std::collections::HashMap;
use std::hash::Hash;

#[derive(Clone, Debug)]
pub struct Congruence<L> {
    labels: Vec<L>,
    children: Vec<Vec<usize>>,
    parent: Vec<usize>,
    memo: HashMap<(L, Vec<usize>), usize>,
    pending: bool,
}

impl<L: Clone + Eq + Hash> Default for Congruence<L> {
    fn default() -> Self {
        Congruence {
            labels: Vec::new(),
            children: Vec::new(),
            parent: Vec::new(),
            memo: HashMap::new(),
            pending: false,
        }
    }
}

impl<L: Clone + Eq + Hash> Congruence<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: usize) -> &L {
        &self.labels[id]
    }

    pub fn children(&self, id: usize) -> &[usize] {
        &self.children[id]
    }

    pub fn find(&self, mut id: usize) -> usize {
        while self.parent[id] != id {
            id = self.parent[id];
        }
        id
    }

    /// Add a node, reusing a structurally identical one.
    pub fn add(&mut self, label: L, children: Vec<usize>) -> usize {
        let key = (label.clone(), children.clone());
        if let Some(&id) = self.memo.get(&key) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label);
        self.children.push(children);
        self.parent.push(id);
        self.memo.insert(key, id);
        self.pending = true;
        id
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
            self.pending = true;
        }
    }

    /// Propagate congruence until no two nodes with equal signatures sit in different classes.
    pub fn close(&mut self) {
        while self.pending {
            self.pending = false;
            let mut sigs: HashMap<(L, Vec<usize>), usize> = HashMap::new();
            let mut merges = Vec::new();
            for id in 0..self.labels.len() {
                let sig = (
                    self.labels[id].clone(),
                    self.children[id].iter().map(|&c| self.find(c)).collect(),
                );
                match sigs.get(&sig) {
                    Some(&other) if self.find(other) != self.find(id) => merges.push((other, id)),
                    Some(_) => {}
                    None => {
                        sigs.insert(sig, id);
                    }
                }
            }
            for (a, b) in merges {
                self.union(a, b);
            }
        }
    }

    pub fn equiv(&mut self, a: usize, b: usize) -> bool {
        self.close();
        self.find(a) == self.find(b)
    }

    /// All nodes in the class of `id`.
    pub fn class_of(&mut self, id: usize) -> Vec<usize> {
        self.close();
        let root = self.find(id);
        (0..self.labels.len())
            .filter(|&n| self.find(n) == root)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn congruence_propagates_through_parents() {
        let mut cc: Congruence<&str> = Congruence::new();
        let a = cc.add("a", vec![]);
        let b = cc.add("b", vec![]);
        let fa = cc.add("f", vec![a]);
        let fb = cc.add("f", vec![b]);
        let gfa = cc.add("g", vec![fa, a]);
        let gfb = cc.add("g", vec![fb, b]);
        assert!(!cc.equiv(gfa, gfb));
        cc.union(a, b);
        assert!(cc.equiv(gfa, gfb));
        assert_eq!(cc.add("f", vec![a]), fa);
    }
}
