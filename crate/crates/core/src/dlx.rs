//! Dancing-links exact cover.
//!
//! Primary columns must be covered exactly once, secondary columns at most
//! once. Rows are tried in insertion order, columns by fewest candidates.

#[derive(Clone, Debug)]
pub struct DlxResult {
    /// Each solution lists row ids in the order they were chosen.
    pub solutions: Vec<Vec<usize>>,
    pub exhausted: bool,
    pub nodes: u64,
}

pub struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    primary: usize,
    rows: usize,
}

impl Dlx {
    /// Columns `0..primary` are primary, `primary..primary + secondary` secondary.
    pub fn new(primary: usize, secondary: usize) -> Self {
        let n = primary + secondary;
        // node 0 is the root, nodes 1..=n are column headers
        let mut d = Dlx {
            left: Vec::with_capacity(n + 1),
            right: Vec::with_capacity(n + 1),
            up: Vec::with_capacity(n + 1),
            down: Vec::with_capacity(n + 1),
            col: Vec::with_capacity(n + 1),
            row: Vec::with_capacity(n + 1),
            size: vec![0; n + 1],
            primary,
            rows: 0,
        };
        for i in 0..=n {
            d.left.push(if i == 0 { primary } else { i - 1 });
            d.right.push(if i == primary { 0 } else { i + 1 });
            d.up.push(i);
            d.down.push(i);
            d.col.push(i);
            d.row.push(usize::MAX);
        }
        // secondary headers link only to themselves
        for i in primary + 1..=n {
            d.left[i] = i;
            d.right[i] = i;
        }
        if primary == 0 {
            d.left[0] = 0;
            d.right[0] = 0;
        }
        d
    }

    /// Returns the row id. Column indices must be distinct.
    pub fn add_row(&mut self, cols: &[usize]) -> usize {
        let r = self.rows;
        self.rows += 1;
        let first = self.left.len();
        for (i, &c) in cols.iter().enumerate() {
            let h = c + 1;
            let x = self.left.len();
            let (l, rr) = if i == 0 { (x, x) } else { (x - 1, first) };
            self.left.push(l);
            self.right.push(rr);
            self.up.push(self.up[h]);
            self.down.push(h);
            self.col.push(h);
            self.row.push(r);
            let u = self.up[h];
            self.down[u] = x;
            self.up[h] = x;
            self.size[h] += 1;
            if i > 0 {
                self.right[x - 1] = x;
                self.left[first] = x;
            }
        }
        r
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Search until `max_solutions` are found or `budget` nodes are spent.
    pub fn solve(&mut self, budget: u64, max_solutions: usize) -> DlxResult {
        let mut res = DlxResult { solutions: Vec::new(), exhausted: true, nodes: 0 };
        let mut partial = Vec::new();
        if self.primary > 0 {
            self.search(&mut partial, budget, max_solutions, &mut res);
        } else {
            res.solutions.push(Vec::new());
        }
        res
    }

    /// Returns false to unwind (budget or solution cap reached).
    fn search(&mut self, partial: &mut Vec<usize>, budget: u64, max: usize, res: &mut DlxResult) -> bool {
        if self.right[0] == 0 {
            res.solutions.push(partial.clone());
            if res.solutions.len() >= max {
                res.exhausted = false;
                return false;
            }
            return true;
        }
        res.nodes += 1;
        if res.nodes > budget {
            res.exhausted = false;
            return false;
        }
        let mut c = self.right[0];
        let mut best = c;
        while c != 0 {
            if self.size[c] < self.size[best] {
                best = c;
            }
            c = self.right[c];
        }
        if self.size[best] == 0 {
            return true;
        }
        self.cover(best);
        let mut r = self.down[best];
        let mut keep_going = true;
        while r != best {
            partial.push(self.row[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            keep_going = self.search(partial, budget, max, res);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            partial.pop();
            if !keep_going {
                break;
            }
            r = self.down[r];
        }
        self.uncover(best);
        keep_going
    }
}
