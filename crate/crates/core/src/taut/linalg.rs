//! Row spaces over GF(p), used to build abelian nontriviality certificates.

/// Incrementally maintained reduced row echelon basis over GF(p).
#[derive(Clone, Debug)]
pub struct RowSpace {
    p: u64,
    cols: usize,
    /// `(pivot column, row)` with the pivot entry equal to 1 and every other
    /// basis row zero in that column.
    rows: Vec<(usize, Vec<u64>)>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl RowSpace {
    pub fn new(p: u64, cols: usize) -> Self {
        Self {
            p,
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Dense row from sparse `(column, coefficient)` entries.
    pub fn dense(&self, sparse: &[(usize, i64)]) -> Vec<u64> {
        let mut v = vec![0u64; self.cols];
        for &(c, x) in sparse {
            v[c] = (v[c] + x.rem_euclid(self.p as i64) as u64) % self.p;
        }
        v
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let p = self.p;
        for (piv, row) in &self.rows {
            let f = v[*piv];
            if f != 0 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = (*a + p * p - f * b) % p;
                }
            }
        }
        v
    }

    pub fn insert(&mut self, v: Vec<u64>) {
        let p = self.p;
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else { return };
        let s = inv_mod(v[piv], p);
        for x in v.iter_mut() {
            *x = *x * s % p;
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[piv];
            if f != 0 {
                for (a, b) in row.iter_mut().zip(&v) {
                    *a = (*a + p * p - f * b) % p;
                }
            }
        }
        self.rows.push((piv, v));
    }

    /// A functional vanishing on the row space but not on `target`, if the
    /// target lies outside the row space.
    pub fn separating_functional(&self, target: Vec<u64>) -> Option<Vec<u64>> {
        let p = self.p;
        let t = self.reduce(target);
        let j = t.iter().position(|&x| x != 0)?;
        let mut c = vec![0u64; self.cols];
        c[j] = 1;
        for (piv, row) in &self.rows {
            c[*piv] = (p - row[j]) % p;
        }
        Some(c)
    }
}

pub fn dot(a: &[u64], sparse: &[(usize, i64)], p: u64) -> u64 {
    sparse
        .iter()
        .map(|&(c, x)| a[c] * x.rem_euclid(p as i64) as u64 % p)
        .sum::<u64>()
        % p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functional_separates() {
        let mut rs = RowSpace::new(3, 3);
        rs.insert(rs.dense(&[(0, 1), (1, 1)]));
        rs.insert(rs.dense(&[(1, 1), (2, 1)]));
        assert_eq!(rs.rank(), 2);
        let inside = [(0, 1), (2, -1)];
        assert!(rs.separating_functional(rs.dense(&inside)).is_none());
        let outside = [(0, 1)];
        let c = rs.separating_functional(rs.dense(&outside)).unwrap();
        assert_ne!(dot(&c, &outside, 3), 0);
        assert_eq!(dot(&c, &[(0, 1), (1, 1)], 3), 0);
        assert_eq!(dot(&c, &[(1, 1), (2, 1)], 3), 0);
    }
}
