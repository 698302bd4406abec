//! Hopcroft-Karp maximum cardinality matching on a bipartite graph whose
//! left and right sides both have `n` vertices.

const NIL: usize = usize::MAX;
const INF: u32 = u32::MAX;

pub(crate) struct HopcroftKarp {
    n: usize,
    pub(crate) match_left: Vec<usize>,
    match_right: Vec<usize>,
    dist: Vec<u32>,
    cursor: Vec<usize>,
    queue: Vec<usize>,
}

impl HopcroftKarp {
    pub(crate) fn new(n: usize) -> Self {
        HopcroftKarp {
            n,
            match_left: vec![NIL; n],
            match_right: vec![NIL; n],
            dist: vec![INF; n],
            cursor: vec![0; n],
            queue: Vec::with_capacity(n),
        }
    }

    /// Drops every matched pair for which `keep(left, right)` is false.
    pub(crate) fn retain(&mut self, mut keep: impl FnMut(usize, usize) -> bool) {
        for u in 0..self.n {
            let v = self.match_left[u];
            if v != NIL && !keep(u, v) {
                self.match_left[u] = NIL;
                self.match_right[v] = NIL;
            }
        }
    }

    pub(crate) fn size(&self) -> usize {
        self.match_left.iter().filter(|&&v| v != NIL).count()
    }

    /// Grows the current matching to maximum cardinality and returns its size.
    /// `adj(u)` lists the right neighbours of left vertex `u`.
    pub(crate) fn run<'a, F>(&mut self, adj: F) -> usize
    where
        F: Fn(usize) -> &'a [usize],
    {
        let mut size = self.size();
        while size < self.n && self.bfs(&adj) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            for u in 0..self.n {
                if self.match_left[u] == NIL && self.dfs(u, &adj) {
                    size += 1;
                }
            }
        }
        size
    }

    pub(crate) fn is_perfect(&self) -> bool {
        self.match_left.iter().all(|&v| v != NIL)
    }

    fn bfs<'a, F>(&mut self, adj: &F) -> bool
    where
        F: Fn(usize) -> &'a [usize],
    {
        self.queue.clear();
        for u in 0..self.n {
            if self.match_left[u] == NIL {
                self.dist[u] = 0;
                self.queue.push(u);
            } else {
                self.dist[u] = INF;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            for &v in adj(u) {
                let w = self.match_right[v];
                if w == NIL {
                    found = true;
                } else if self.dist[w] == INF {
                    self.dist[w] = self.dist[u] + 1;
                    self.queue.push(w);
                }
            }
        }
        found
    }

    fn dfs<'a, F>(&mut self, u: usize, adj: &F) -> bool
    where
        F: Fn(usize) -> &'a [usize],
    {
        let neighbours = adj(u);
        while self.cursor[u] < neighbours.len() {
            let v = neighbours[self.cursor[u]];
            self.cursor[u] += 1;
            let w = self.match_right[v];
            if w == NIL || (self.dist[w] == self.dist[u] + 1 && self.dfs(w, adj)) {
                self.match_left[u] = v;
                self.match_right[v] = u;
                return true;
            }
        }
        self.dist[u] = INF;
        false
    }
}
