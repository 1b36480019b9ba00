use serde::{Deserialize, Serialize};

use crate::types::{AllocationState, ENVY_TOLERANCE};

/// Directed graph on agents with an edge `(i, j)` when `ENVY_{i,j} > c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvyGraph {
    n: usize,
    threshold: f64,
    adjacency: Vec<bool>,
}

impl EnvyGraph {
    pub fn from_edges(n: usize, threshold: f64, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![false; n * n];
        for &(i, j) in edges {
            if i != j {
                adjacency[i * n + j] = true;
            }
        }
        Self {
            n,
            threshold,
            adjacency,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_edge(i, j))
            .collect()
    }
}

pub fn envy_graph_edges(state: &AllocationState, c: f64) -> EnvyGraph {
    let n = state.n();
    let mut adjacency = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            adjacency[i * n + j] = i != j && state.envy(i, j) > c + ENVY_TOLERANCE;
        }
    }
    EnvyGraph {
        n,
        threshold: c,
        adjacency,
    }
}

/// Kahn's algorithm: repeatedly delete nodes without incoming edges.
pub fn is_acyclic(g: &EnvyGraph) -> bool {
    let n = g.n();
    let mut indegree = vec![0usize; n];
    for (_, j) in g.edges() {
        indegree[j] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut removed = 0;
    while let Some(i) = ready.pop() {
        removed += 1;
        for j in 0..n {
            if g.has_edge(i, j) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
    }
    removed == n
}
