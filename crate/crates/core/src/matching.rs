//! Maximum bipartite matching (Hopcroft–Karp).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

const NIL: u32 = u32::MAX;

/// Bipartite graph with `left_count` input nodes and one adjacency list per
/// right node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_count: usize,
    adjacency: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("left index {index} out of range for {left_count} left nodes")]
pub struct IndexOutOfRange {
    pub index: u32,
    pub left_count: usize,
}

impl BipartiteGraph {
    pub fn new(left_count: usize) -> Self {
        Self {
            left_count,
            adjacency: Vec::new(),
        }
    }

    /// Appends a right node adjacent to `neighbors` (duplicates are dropped).
    pub fn add_right(&mut self, neighbors: impl IntoIterator<Item = u32>) -> Result<usize, IndexOutOfRange> {
        let mut adj: Vec<u32> = neighbors.into_iter().collect();
        if let Some(&index) = adj.iter().find(|&&i| i as usize >= self.left_count) {
            return Err(IndexOutOfRange {
                index,
                left_count: self.left_count,
            });
        }
        adj.sort_unstable();
        adj.dedup();
        self.adjacency.push(adj);
        Ok(self.adjacency.len() - 1)
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, right: usize) -> &[u32] {
        &self.adjacency[right]
    }

    /// Size of a maximum matching.
    pub fn max_matching(&self) -> usize {
        HopcroftKarp::new(self).run()
    }

    /// True when some matching saturates every left node.
    pub fn has_left_perfect_matching(&self) -> bool {
        self.max_matching() == self.left_count
    }
}

struct HopcroftKarp<'g> {
    graph: &'g BipartiteGraph,
    match_right: Vec<u32>,
    match_left: Vec<u32>,
    dist: Vec<u32>,
}

impl<'g> HopcroftKarp<'g> {
    fn new(graph: &'g BipartiteGraph) -> Self {
        Self {
            graph,
            match_right: vec![NIL; graph.right_count()],
            match_left: vec![NIL; graph.left_count],
            dist: vec![0; graph.right_count()],
        }
    }

    fn run(mut self) -> usize {
        let mut size = 0;
        while self.bfs() {
            for r in 0..self.graph.right_count() {
                if self.match_right[r] == NIL && self.dfs(r) {
                    size += 1;
                }
            }
        }
        size
    }

    /// Layers free right nodes; true if an augmenting path exists.
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for r in 0..self.graph.right_count() {
            if self.match_right[r] == NIL {
                self.dist[r] = 0;
                queue.push_back(r);
            } else {
                self.dist[r] = NIL;
            }
        }
        let mut found = false;
        while let Some(r) = queue.pop_front() {
            for &l in &self.graph.adjacency[r] {
                let next = self.match_left[l as usize];
                if next == NIL {
                    found = true;
                } else if self.dist[next as usize] == NIL {
                    self.dist[next as usize] = self.dist[r] + 1;
                    queue.push_back(next as usize);
                }
            }
        }
        found
    }

    fn dfs(&mut self, r: usize) -> bool {
        for i in 0..self.graph.adjacency[r].len() {
            let l = self.graph.adjacency[r][i] as usize;
            let next = self.match_left[l];
            let ok = next == NIL
                || (self.dist[next as usize] == self.dist[r] + 1 && self.dfs(next as usize));
            if ok {
                self.match_left[l] = r as u32;
                self.match_right[r] = l as u32;
                return true;
            }
        }
        self.dist[r] = NIL;
        false
    }
}
