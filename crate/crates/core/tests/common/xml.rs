use std::collections::{BTreeSet, HashSet};

/// The lab document: ids in document order are
/// lab 0, project 1, leader 2, "Tom" 3, name 4, "Graph Mining" 5, papers 6,
/// count 7, "2" 8, paper 9, author 10, "Tom Peter" 11, title 12,
/// "Graph Search" 13, paper 14, author 15, "John" 16, title 17,
/// "XML Parsing" 18, location 19, "Hong Kong" 20.
pub const LAB: &str = "<lab>\
<project><leader>Tom</leader><name>Graph Mining</name>\
<papers><count>2</count>\
<paper><author>Tom Peter</author><title>Graph Search</title></paper>\
<paper><author>John</author><title>XML Parsing</title></paper>\
</papers></project>\
<location>Hong Kong</location>\
</lab>";

/// A tree given by parent pointers and per-node word sets.
pub struct Tree {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub words: Vec<HashSet<String>>,
}

impl Tree {
    pub fn new(parent: Vec<Option<usize>>, words: Vec<HashSet<String>>) -> Self {
        let mut children = vec![Vec::new(); parent.len()];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        Tree { parent, children, words }
    }

    pub fn depth(&self, mut v: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[v] {
            v = p;
            d += 1;
        }
        d
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let (mut da, mut db) = (self.depth(a), self.depth(b));
        while da > db {
            a = self.parent[a].unwrap();
            da -= 1;
        }
        while db > da {
            b = self.parent[b].unwrap();
            db -= 1;
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    fn is_ancestor(&self, a: usize, mut v: usize) -> bool {
        loop {
            if v == a {
                return true;
            }
            match self.parent[v] {
                Some(p) => v = p,
                None => return false,
            }
        }
    }

    /// Keywords occurring in the subtree of `v`.
    pub fn subtree_keywords(&self, v: usize, kws: &[String]) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.extend(kws.iter().filter(|k| self.words[u].contains(*k)).cloned());
            stack.extend(&self.children[u]);
        }
        out
    }

    /// Every LCA of one match per keyword, minus those with an LCA below.
    pub fn slca(&self, kws: &[String]) -> BTreeSet<usize> {
        let matches: Vec<Vec<usize>> =
            kws.iter().map(|k| (0..self.parent.len()).filter(|&v| self.words[v].contains(k)).collect()).collect();
        if matches.iter().any(Vec::is_empty) {
            return BTreeSet::new();
        }
        let mut lcas = BTreeSet::new();
        let mut partial: Vec<usize> = matches[0].clone();
        for m in &matches[1..] {
            let next: BTreeSet<usize> = partial.iter().flat_map(|&a| m.iter().map(move |&b| (a, b))).map(|(a, b)| self.lca(a, b)).collect();
            partial = next.into_iter().collect();
        }
        lcas.extend(partial);
        lcas.iter().copied().filter(|&a| !lcas.iter().any(|&b| b != a && self.is_ancestor(a, b))).collect()
    }

    /// Vertices that still see every keyword after cutting away all proper
    /// descendant subtrees that contain every keyword.
    pub fn elca(&self, kws: &[String]) -> BTreeSet<usize> {
        let full: Vec<bool> = (0..self.parent.len()).map(|v| self.subtree_keywords(v, kws).len() == kws.len()).collect();
        (0..self.parent.len())
            .filter(|&v| full[v])
            .filter(|&v| {
                let mut seen = BTreeSet::new();
                let mut stack = vec![v];
                while let Some(u) = stack.pop() {
                    if u != v && full[u] {
                        continue;
                    }
                    seen.extend(kws.iter().filter(|k| self.words[u].contains(*k)).cloned());
                    stack.extend(&self.children[u]);
                }
                seen.len() == kws.len()
            })
            .collect()
    }

    /// Union over SLCAs of the subtrees kept by sibling-domination pruning.
    pub fn maxmatch(&self, kws: &[String]) -> BTreeSet<usize> {
        let mut kept = BTreeSet::new();
        for r in self.slca(kws) {
            self.prune_from(r, kws, &mut kept);
        }
        kept
    }

    pub fn prune_from(&self, v: usize, kws: &[String], kept: &mut BTreeSet<usize>) {
        kept.insert(v);
        let ks: Vec<(usize, BTreeSet<String>)> = self.children[v]
            .iter()
            .map(|&c| (c, self.subtree_keywords(c, kws)))
            .filter(|(_, k)| !k.is_empty())
            .collect();
        for (c, k) in &ks {
            let dominated = ks.iter().any(|(_, k2)| k != k2 && k.is_subset(k2));
            if !dominated {
                self.prune_from(*c, kws, kept);
            }
        }
    }
}
