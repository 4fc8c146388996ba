//! Blocking-flow maximum flow on general directed graphs.

use std::collections::VecDeque;

use crate::scalar::Scalar;

/// Residual network with paired arcs: arc `a` and `a ^ 1` are reverses.
#[derive(Debug, Clone)]
pub struct Dinic<T> {
    to: Vec<usize>,
    residual: Vec<T>,
    initial: Vec<T>,
    adj: Vec<Vec<usize>>,
    level: Vec<usize>,
    iter: Vec<usize>,
}

const UNREACHED: usize = usize::MAX;

impl<T: Scalar> Dinic<T> {
    pub fn new(n: usize) -> Self {
        Dinic {
            to: Vec::new(),
            residual: Vec::new(),
            initial: Vec::new(),
            adj: vec![Vec::new(); n],
            level: vec![UNREACHED; n],
            iter: vec![0; n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.level.push(UNREACHED);
        self.iter.push(0);
        self.adj.len() - 1
    }

    /// Adds arc `u -> v` with capacity `forward` and its reverse with
    /// capacity `backward`. Returns the forward arc id (always even).
    pub fn add_arc_pair(&mut self, u: usize, v: usize, forward: T, backward: T) -> usize {
        let a = self.to.len();
        self.to.extend([v, u]);
        self.residual.extend([forward, backward]);
        self.initial.extend([forward, backward]);
        self.adj[u].push(a);
        self.adj[v].push(a + 1);
        a
    }

    /// Net flow pushed along arc `a` (negative if the pair carries flow the
    /// other way).
    pub fn flow(&self, a: usize) -> T {
        self.initial[a] - self.residual[a]
    }

    pub fn residual(&self, a: usize) -> T {
        self.residual[a]
    }

    fn build_levels(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = UNREACHED);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.residual[a].is_positive() && self.level[v] == UNREACHED {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] != UNREACHED
    }

    /// One blocking flow on the current level graph, iteratively.
    fn blocking_flow(&mut self, s: usize, t: usize) -> T {
        let mut total = T::zero();
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let bottleneck = path.iter().map(|&a| self.residual[a]).min().unwrap();
                for &a in &path {
                    self.residual[a] = self.residual[a] - bottleneck;
                    self.residual[a ^ 1] = self.residual[a ^ 1] + bottleneck;
                }
                total = total + bottleneck;
                let cut = path.iter().position(|&a| self.residual[a].is_zero()).unwrap();
                path.truncate(cut);
                u = if cut == 0 { s } else { self.to[path[cut - 1]] };
                continue;
            }
            let mut advanced = false;
            while self.iter[u] < self.adj[u].len() {
                let a = self.adj[u][self.iter[u]];
                let v = self.to[a];
                if self.residual[a].is_positive()
                    && self.level[v] != UNREACHED
                    && self.level[v] == self.level[u] + 1
                {
                    path.push(a);
                    u = v;
                    advanced = true;
                    break;
                }
                self.iter[u] += 1;
            }
            if advanced {
                continue;
            }
            // Dead end: retreat.
            self.level[u] = UNREACHED;
            match path.pop() {
                None => break,
                Some(a) => {
                    u = self.to[a ^ 1];
                    self.iter[u] += 1;
                }
            }
        }
        total
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> T {
        assert_ne!(s, t);
        let mut total = T::zero();
        while self.build_levels(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            total = total + self.blocking_flow(s, t);
        }
        total
    }

    /// Vertices reachable from `s` through arcs with positive residual.
    pub fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.residual[a].is_positive() && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        let mut d = Dinic::<i64>::new(6);
        for &(u, v, c) in &[(0, 1, 10), (0, 2, 10), (1, 3, 4), (1, 4, 8), (2, 4, 9), (3, 5, 10), (4, 3, 6), (4, 5, 10)] {
            d.add_arc_pair(u, v, c, 0);
        }
        assert_eq!(d.max_flow(0, 5), 19);
    }

    #[test]
    fn disconnected_and_bidirectional() {
        let mut d = Dinic::<i64>::new(4);
        d.add_arc_pair(0, 1, 10, 0);
        d.add_arc_pair(2, 3, 5, 0);
        assert_eq!(d.max_flow(0, 3), 0);
        let mut d = Dinic::<i32>::new(2);
        let a = d.add_arc_pair(0, 1, 3, 5);
        assert_eq!(d.max_flow(1, 0), 5);
        assert_eq!(d.flow(a), -5);
        assert!(!d.reachable(1)[0]);
    }
}
