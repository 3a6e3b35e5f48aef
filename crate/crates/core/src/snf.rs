//! Exact integer linear algebra: Smith normal form with unimodular
//! transforms, integer solvability and integer kernels.
//!
//! Entries are carried as `i128` during elimination; inputs and outputs are
//! `i64`.

type Mat = Vec<Vec<i128>>;

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Result of reducing `A` to `D = U * A * V`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    rows: usize,
    cols: usize,
    /// Diagonal of `D`, non-negative, each dividing the next, zeros last.
    diagonal: Vec<i128>,
    u: Mat,
    v: Mat,
}

impl SmithForm {
    pub fn new(a: &[Vec<i64>], cols: usize) -> SmithForm {
        let rows = a.len();
        let mut m: Mat = a
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix");
                r.iter().map(|&x| i128::from(x)).collect()
            })
            .collect();
        let mut u = identity(rows);
        let mut v = identity(cols);
        let steps = rows.min(cols);
        let mut t = 0;
        while t < steps {
            let Some((pi, pj)) = min_pivot(&m, t) else { break };
            m.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..rows {
                    if m[i][t] == 0 {
                        continue;
                    }
                    let q = m[i][t].div_euclid(m[t][t]);
                    add_row(&mut m, i, t, -q);
                    add_row(&mut u, i, t, -q);
                    if m[i][t] != 0 {
                        m.swap(t, i);
                        u.swap(t, i);
                        dirty = true;
                    }
                }
                for j in t + 1..cols {
                    if m[t][j] == 0 {
                        continue;
                    }
                    let q = m[t][j].div_euclid(m[t][t]);
                    add_col(&mut m, j, t, -q);
                    add_col(&mut v, j, t, -q);
                    if m[t][j] != 0 {
                        swap_cols(&mut m, t, j);
                        swap_cols(&mut v, t, j);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                let pivot = m[t][t];
                let offender = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| m[i][j] % pivot != 0));
                match offender {
                    Some(i) => {
                        add_row(&mut m, t, i, 1);
                        add_row(&mut u, t, i, 1);
                    }
                    None => break,
                }
            }
            if m[t][t] < 0 {
                for x in m[t].iter_mut() {
                    *x = -*x;
                }
                for x in u[t].iter_mut() {
                    *x = -*x;
                }
            }
            t += 1;
        }
        let diagonal = (0..steps).map(|i| m[i][i]).collect();
        SmithForm { rows, cols, diagonal, u, v }
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|&&d| d != 0).count()
    }

    /// Invariant factors, length `min(rows, cols)`, zeros last.
    pub fn invariant_factors(&self) -> Vec<i64> {
        self.diagonal.iter().map(|&d| narrow(d)).collect()
    }

    /// An integer `x` with `A x = b`, if one exists.
    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(b.len(), self.rows);
        let c: Vec<i128> = self
            .u
            .iter()
            .map(|row| row.iter().zip(b).map(|(&x, &y)| x * i128::from(y)).sum())
            .collect();
        let rank = self.rank();
        let mut y = vec![0i128; self.cols];
        for i in 0..self.rows {
            if i < rank {
                if c[i] % self.diagonal[i] != 0 {
                    return None;
                }
                y[i] = c[i] / self.diagonal[i];
            } else if c[i] != 0 {
                return None;
            }
        }
        Some(
            self.v
                .iter()
                .map(|row| narrow(row.iter().zip(&y).map(|(&x, &yy)| x * yy).sum()))
                .collect(),
        )
    }

    /// A basis of the integer kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<i64>> {
        (self.rank()..self.cols)
            .map(|j| self.v.iter().map(|row| narrow(row[j])).collect())
            .collect()
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow in exact linear algebra")
}

fn min_pivot(m: &Mat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

// row[dst] += k * row[src]
fn add_row(m: &mut Mat, dst: usize, src: usize, k: i128) {
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, &y) in d.iter_mut().zip(s.iter()) {
        *x += k * y;
    }
}

// col[dst] += k * col[src]
fn add_col(m: &mut Mat, dst: usize, src: usize, k: i128) {
    for row in m.iter_mut() {
        row[dst] += k * row[src];
    }
}

/// Invariant factors of a square (or rectangular) integer matrix.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Vec<i64> {
    let cols = m.first().map_or(0, |r| r.len());
    SmithForm::new(m, cols).invariant_factors()
}

/// Factors other than 1; the part of the abelian invariants that a
/// stabilization cannot change.
pub fn nonunit_factors(factors: &[i64]) -> Vec<i64> {
    factors.iter().copied().filter(|&f| f != 1).collect()
}
