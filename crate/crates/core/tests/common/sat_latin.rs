//! Independent SAT encoding of the `(3, d, m)` Latin trade axioms.
//!
//! Shares no code with the library's search. Row 0 is normalised to
//! columns `0..d` carrying symbols `0..d` in the first square, which any
//! trade reaches by permuting columns and symbols.

// the encoding indexes several parallel arrays at once
#![allow(clippy::needless_range_loop)]

use varisat::{ExtendFormula, Lit, Solver, Var};

struct Enc {
    next: usize,
    clauses: Vec<Vec<Lit>>,
}

impl Enc {
    fn var(&mut self) -> Lit {
        let v = Var::from_index(self.next).positive();
        self.next += 1;
        v
    }

    fn at_most_one(&mut self, xs: &[Lit]) {
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                self.clauses.push(vec![!xs[i], !xs[j]]);
            }
        }
    }

    /// Sequential counter: exactly `k` of `xs` are true.
    fn exactly(&mut self, xs: &[Lit], k: usize) {
        let n = xs.len();
        // s[i][c]: at least c+1 of xs[..=i] are true, c < k+1
        let w = k + 1;
        let s: Vec<Vec<Lit>> = (0..n).map(|_| (0..w).map(|_| self.var()).collect()).collect();
        for i in 0..n {
            // xs[i] -> s[i][0]
            self.clauses.push(vec![!xs[i], s[i][0]]);
            for c in 0..w {
                if i > 0 {
                    // s[i-1][c] -> s[i][c]
                    self.clauses.push(vec![!s[i - 1][c], s[i][c]]);
                    if c > 0 {
                        // xs[i] & s[i-1][c-1] -> s[i][c]
                        self.clauses.push(vec![!xs[i], !s[i - 1][c - 1], s[i][c]]);
                    }
                }
                // s[i][c] -> s[i-1][c] | (xs[i] & s[i-1][c-1])
                let mut back = vec![!s[i][c]];
                if i > 0 {
                    back.push(s[i - 1][c]);
                }
                if c == 0 {
                    back.push(xs[i]);
                    self.clauses.push(back);
                } else if i > 0 {
                    self.clauses.push(vec![!s[i][c], s[i - 1][c], xs[i]]);
                    self.clauses.push(vec![!s[i][c], s[i - 1][c], s[i - 1][c - 1]]);
                } else {
                    self.clauses.push(vec![!s[i][c]]);
                }
            }
        }
        if k > 0 {
            self.clauses.push(vec![s[n - 1][k - 1]]);
        }
        self.clauses.push(vec![!s[n - 1][k]]);
    }
}

/// `Some(cells)` with `(row, col, [s1, s2, s3])` when a trade exists.
pub fn sat_latin_trade(d: usize, m: usize) -> Option<Vec<(usize, usize, [usize; 3])>> {
    let mut e = Enc { next: 0, clauses: Vec::new() };
    let f: Vec<Vec<Lit>> = (0..m).map(|_| (0..m).map(|_| e.var()).collect()).collect();
    let x: Vec<Vec<Vec<Vec<Lit>>>> =
        (0..3).map(|_| (0..m).map(|_| (0..m).map(|_| (0..m).map(|_| e.var()).collect()).collect()).collect()).collect();
    let row_has: Vec<Vec<Lit>> = (0..m).map(|_| (0..m).map(|_| e.var()).collect()).collect();
    let col_has: Vec<Vec<Lit>> = (0..m).map(|_| (0..m).map(|_| e.var()).collect()).collect();

    for i in 0..m {
        for j in 0..m {
            for r in 0..3 {
                let mut some = vec![!f[i][j]];
                some.extend(x[r][i][j].iter().copied());
                e.clauses.push(some);
                e.at_most_one(&x[r][i][j].clone());
                for s in 0..m {
                    e.clauses.push(vec![!x[r][i][j][s], f[i][j]]);
                    e.clauses.push(vec![!x[r][i][j][s], row_has[i][s]]);
                    e.clauses.push(vec![!x[r][i][j][s], col_has[j][s]]);
                }
            }
            for s in 0..m {
                e.at_most_one(&[x[0][i][j][s], x[1][i][j][s], x[2][i][j][s]]);
            }
        }
    }
    for r in 0..3 {
        for a in 0..m {
            for s in 0..m {
                let in_row: Vec<Lit> = (0..m).map(|j| x[r][a][j][s]).collect();
                let in_col: Vec<Lit> = (0..m).map(|i| x[r][i][a][s]).collect();
                e.at_most_one(&in_row);
                e.at_most_one(&in_col);
                // the row (column) set is the same in every square
                let mut back = vec![!row_has[a][s]];
                back.extend(in_row);
                e.clauses.push(back);
                let mut back = vec![!col_has[a][s]];
                back.extend(in_col);
                e.clauses.push(back);
            }
        }
    }
    for a in 0..m {
        e.exactly(&f[a].clone(), d);
        let col: Vec<Lit> = (0..m).map(|i| f[i][a]).collect();
        e.exactly(&col, d);
        // symbol a occurs in d rows, once per row, in every square
        let rows: Vec<Lit> = (0..m).map(|i| row_has[i][a]).collect();
        e.exactly(&rows, d);
    }
    for j in 0..m {
        e.clauses.push(vec![if j < d { f[0][j] } else { !f[0][j] }]);
        if j < d {
            e.clauses.push(vec![x[0][0][j][j]]);
        }
    }

    let mut solver = Solver::new();
    for c in &e.clauses {
        solver.add_clause(c);
    }
    if !solver.solve().expect("solver runs") {
        return None;
    }
    let model: std::collections::HashSet<Lit> = solver.model().expect("model").into_iter().collect();
    let mut cells = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if model.contains(&f[i][j]) {
                let sym = |r: usize| (0..m).find(|&s| model.contains(&x[r][i][j][s])).expect("symbol set");
                cells.push((i, j, [sym(0), sym(1), sym(2)]));
            }
        }
    }
    Some(cells)
}
