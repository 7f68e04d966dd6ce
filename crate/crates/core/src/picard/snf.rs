//! Smith normal form over the integers.

/// Dense integer matrix, row-major.
pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
    vec![vec![0; cols]; rows]
}

pub fn matmul(a: &IntMatrix, b: &IntMatrix, inner: usize) -> IntMatrix {
    let rows = a.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut out = zeros(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &IntMatrix, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ..`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero diagonal entries, all positive, each dividing the next.
    pub diagonal: Vec<i64>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Cokernel `Z^rows / im M`: invariant factors `> 1` and free rank.
    pub fn cokernel(&self) -> (Vec<i64>, usize) {
        let torsion = self.diagonal.iter().copied().filter(|&d| d > 1).collect();
        (torsion, self.rows - self.rank())
    }
}

struct Calc {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Calc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.m.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.m.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: i64) {
        for c in 0..self.cols {
            self.m[i][c] += k * self.m[j][c];
        }
        for c in 0..self.rows {
            self.u[i][c] += k * self.u[j][c];
        }
        // U^{-1} picks up col_j -= k * col_i
        for r in 0..self.rows {
            self.u_inv[r][j] -= k * self.u_inv[r][i];
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: i64) {
        for r in 0..self.rows {
            self.m[r][i] += k * self.m[r][j];
        }
        for r in 0..self.cols {
            self.v[r][i] += k * self.v[r][j];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            self.m[i][c] = -self.m[i][c];
        }
        for c in 0..self.rows {
            self.u[i][c] = -self.u[i][c];
        }
        for r in 0..self.rows {
            self.u_inv[r][i] = -self.u_inv[r][i];
        }
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let a = self.m[i][j].abs();
                if a != 0 && best.is_none_or(|(bi, bj)| a < self.m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.smallest_nonzero(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.m[t][t];
                let mut dirty = false;
                for i in t + 1..self.rows {
                    let q = self.m[i][t] / p;
                    if q != 0 {
                        self.add_row(i, t, -q);
                    }
                    if self.m[i][t] != 0 {
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    let q = self.m[t][j] / p;
                    if q != 0 {
                        self.add_col(j, t, -q);
                    }
                    if self.m[t][j] != 0 {
                        dirty = true;
                    }
                }
                if dirty {
                    // a nonzero remainder is smaller than the pivot: move it in
                    let (pi, pj) = self.smallest_in_cross(t);
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                // divisibility of the remaining block
                let p = self.m[t][t];
                let bad = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| self.m[i][j] % p != 0));
                match bad {
                    Some(i) => self.add_row(t, i, 1),
                    None => break,
                }
            }
            if self.m[t][t] < 0 {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }

    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut val = i64::MAX;
        for i in t..self.rows {
            let a = self.m[i][t].abs();
            if a != 0 && a < val {
                val = a;
                best = (i, t);
            }
        }
        for j in t..self.cols {
            let a = self.m[t][j].abs();
            if a != 0 && a < val {
                val = a;
                best = (t, j);
            }
        }
        best
    }
}

/// Smith normal form of a `rows × cols` matrix.
pub fn smith_normal_form(m: &IntMatrix, rows: usize, cols: usize) -> SmithForm {
    let mut calc = Calc {
        m: m.clone(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        rows,
        cols,
    };
    let rank = calc.run();
    let diagonal = (0..rank).map(|i| calc.m[i][i]).collect();
    SmithForm {
        rows,
        cols,
        diagonal,
        u: calc.u,
        u_inv: calc.u_inv,
        v: calc.v,
    }
}

/// Solves `M y = b` over the integers.
pub fn solve_integer(m: &IntMatrix, rows: usize, cols: usize, b: &[i64]) -> Option<Vec<i64>> {
    let snf = smith_normal_form(m, rows, cols);
    let ub = mat_vec(&snf.u, b);
    let mut z = vec![0; cols];
    for (i, &x) in ub.iter().enumerate() {
        if i < snf.rank() {
            let d = snf.diagonal[i];
            if x % d != 0 {
                return None;
            }
            z[i] = x / d;
        } else if x != 0 {
            return None;
        }
    }
    Some(mat_vec(&snf.v, &z))
}

/// A basis of the integer kernel `{x : M x = 0}`, as vectors.
pub fn integer_kernel(m: &IntMatrix, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    let snf = smith_normal_form(m, rows, cols);
    (snf.rank()..cols)
        .map(|j| (0..cols).map(|i| snf.v[i][j]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix, rows: usize, cols: usize) -> SmithForm {
        let snf = smith_normal_form(m, rows, cols);
        let d = matmul(&matmul(&snf.u, m, rows), &snf.v, cols);
        for i in 0..rows {
            for j in 0..cols {
                let expected = if i == j && i < snf.rank() { snf.diagonal[i] } else { 0 };
                assert_eq!(d[i][j], expected, "U M V at ({}, {})", i, j);
            }
        }
        assert_eq!(matmul(&snf.u, &snf.u_inv, rows), identity(rows));
        for w in snf.diagonal.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        snf
    }

    #[test]
    fn examples() {
        let s = check(&vec![vec![0]], 1, 1);
        assert_eq!(s.cokernel(), (vec![], 1));
        let s = check(&vec![vec![2, 0], vec![0, 3]], 2, 2);
        assert_eq!(s.diagonal, vec![1, 6]);
        assert_eq!(s.cokernel(), (vec![6], 0));
        let s = check(&identity(2), 2, 2);
        assert_eq!(s.cokernel(), (vec![], 0));
        let s = check(&vec![vec![2], vec![-2]], 2, 1);
        assert_eq!(s.cokernel(), (vec![2], 1));
    }

    #[test]
    fn solve_and_kernel() {
        let m = vec![vec![2, 4], vec![6, 8]];
        assert_eq!(solve_integer(&m, 2, 2, &[2, 6]), Some(vec![1, 0]));
        assert_eq!(solve_integer(&m, 2, 2, &[1, 0]), None);
        let k = integer_kernel(&vec![vec![1, 1, 1]], 1, 3);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!(v.iter().sum::<i64>(), 0);
        }
    }
}
