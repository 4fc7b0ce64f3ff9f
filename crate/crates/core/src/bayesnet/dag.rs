//! Directed acyclic graph over node indices.

use std::collections::BTreeSet;

use super::BayesNetError;

/// Dependency structure of a network: node count plus parent→child
/// edges. Acyclicity is checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    nodes: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Dag {
    pub fn new(
        nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, BayesNetError> {
        let mut set = BTreeSet::new();
        for (parent, child) in edges {
            if parent >= nodes || child >= nodes {
                return Err(BayesNetError::EdgeOutOfRange { parent, child, nodes });
            }
            if parent == child {
                return Err(BayesNetError::SelfEdge { node: parent });
            }
            if !set.insert((parent, child)) {
                return Err(BayesNetError::DuplicateEdge { parent, child });
            }
        }
        let dag = Self { nodes, edges: set };
        dag.topological_order()?;
        Ok(dag)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Parents of `node`, ascending.
    pub fn parents(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(_, c)| c == node)
            .map(|&(p, _)| p)
            .collect()
    }

    /// Children of `node`, ascending.
    pub fn children(&self, node: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter(|&&(p, _)| p == node)
            .map(|&(_, c)| c)
            .collect();
        out.sort_unstable();
        out
    }

    /// Kahn's algorithm with ties broken by ascending node index, so
    /// the order is deterministic. On a cycle, reports the nodes of
    /// one cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>, BayesNetError> {
        let mut in_degree = vec![0usize; self.nodes];
        for &(_, child) in &self.edges {
            in_degree[child] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..self.nodes).filter(|&n| in_degree[n] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes);
        while let Some(&node) = ready.iter().next() {
            ready.remove(&node);
            order.push(node);
            for child in self.children(node) {
                in_degree[child] -= 1;
                if in_degree[child] == 0 {
                    ready.insert(child);
                }
            }
        }
        if order.len() == self.nodes {
            return Ok(order);
        }
        Err(BayesNetError::Cycle { nodes: self.find_cycle(&in_degree) })
    }

    /// Walk parent links among the still-blocked nodes until one repeats.
    fn find_cycle(&self, in_degree: &[usize]) -> Vec<usize> {
        let blocked: BTreeSet<usize> =
            (0..self.nodes).filter(|&n| in_degree[n] > 0).collect();
        let start = *blocked.iter().next().expect("cycle implies blocked nodes");
        let mut path = vec![start];
        let mut seen = BTreeSet::from([start]);
        let mut current = start;
        loop {
            let parent = self
                .parents(current)
                .into_iter()
                .find(|p| blocked.contains(p))
                .expect("blocked node has a blocked parent");
            if !seen.insert(parent) {
                let pos = path.iter().position(|&n| n == parent).unwrap();
                let mut cycle: Vec<usize> = path[pos..].to_vec();
                cycle.reverse();
                return cycle;
            }
            path.push(parent);
            current = parent;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_orders_by_index() {
        let dag = Dag::new(3, []).unwrap();
        assert_eq!(dag.topological_order().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn parents_precede_children_with_ascending_ties() {
        let dag = Dag::new(3, [(2, 0), (1, 0)]).unwrap();
        assert_eq!(dag.topological_order().unwrap(), vec![1, 2, 0]);
        assert_eq!(dag.parents(0), vec![1, 2]);
    }

    #[test]
    fn cycle_is_detected_and_named() {
        let err = Dag::new(2, [(0, 1), (1, 0)]).unwrap_err();
        match err {
            BayesNetError::Cycle { nodes } => {
                let mut sorted = nodes;
                sorted.sort_unstable();
                assert_eq!(sorted, vec![0, 1]);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn self_and_duplicate_edges_are_rejected() {
        assert!(matches!(Dag::new(2, [(0, 0)]), Err(BayesNetError::SelfEdge { .. })));
        assert!(matches!(
            Dag::new(2, [(0, 1), (0, 1)]),
            Err(BayesNetError::DuplicateEdge { .. })
        ));
        assert!(matches!(
            Dag::new(2, [(0, 5)]),
            Err(BayesNetError::EdgeOutOfRange { .. })
        ));
    }

    #[test]
    fn longer_cycle_is_reported() {
        let err = Dag::new(4, [(0, 1), (1, 2), (2, 0), (3, 0)]).unwrap_err();
        match err {
            BayesNetError::Cycle { nodes } => {
                let mut sorted = nodes;
                sorted.sort_unstable();
                assert_eq!(sorted, vec![0, 1, 2]);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
