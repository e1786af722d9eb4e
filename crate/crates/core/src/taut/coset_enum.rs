//! Todd–Coxeter coset enumeration (HLT strategy) over the trivial subgroup.
//!
//! Letters are `±(g + 1)` for generator `g`. A completed table is the right
//! regular action of a finite group, so it decides the word problem.

const NONE: usize = usize::MAX;

pub struct CosetTable {
    gens: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: Vec<(usize, usize)>,
    live: usize,
    max_cosets: usize,
    overflow: bool,
}

fn col(letter: i32) -> usize {
    let g = letter.unsigned_abs() as usize - 1;
    2 * g + usize::from(letter < 0)
}

fn inv_col(c: usize) -> usize {
    c ^ 1
}

impl CosetTable {
    fn new(gens: usize, max_cosets: usize) -> Self {
        Self {
            gens,
            table: vec![vec![NONE; 2 * gens]],
            parent: vec![0],
            queue: Vec::new(),
            live: 1,
            max_cosets,
            overflow: false,
        }
    }

    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.live >= self.max_cosets {
            self.overflow = true;
            return false;
        }
        let d = self.table.len();
        self.table.push(vec![NONE; 2 * self.gens]);
        self.parent.push(d);
        self.live += 1;
        self.table[c][x] = d;
        self.table[d][inv_col(x)] = c;
        true
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, gone) = (a.min(b), a.max(b));
        self.parent[gone] = keep;
        self.live -= 1;
        self.queue.push((gone, keep));
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut k = 0;
        while k < self.queue.len() {
            let (gone, _) = self.queue[k];
            k += 1;
            for x in 0..2 * self.gens {
                let d = self.table[gone][x];
                if d == NONE {
                    continue;
                }
                if self.table[d][inv_col(x)] == gone {
                    self.table[d][inv_col(x)] = NONE;
                }
                let (mu, nu) = (self.rep(gone), self.rep(d));
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][inv_col(x)] != NONE {
                    let t = self.table[nu][inv_col(x)];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][inv_col(x)] = mu;
                }
            }
        }
        self.queue.clear();
    }

    fn scan_and_fill(&mut self, c: usize, w: &[i32]) {
        let mut f = c;
        let mut b = c;
        let mut i: isize = 0;
        let mut j: isize = w.len() as isize - 1;
        loop {
            while i <= j && self.table[f][col(w[i as usize])] != NONE {
                f = self.table[f][col(w[i as usize])];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i && self.table[b][inv_col(col(w[j as usize]))] != NONE {
                b = self.table[b][inv_col(col(w[j as usize]))];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return;
            }
            if i == j {
                let x = col(w[i as usize]);
                self.table[f][x] = b;
                self.table[b][inv_col(x)] = f;
                return;
            }
            if !self.define(f, col(w[i as usize])) {
                return;
            }
        }
    }

    pub fn index(&self) -> usize {
        self.live
    }

    /// Coset reached from the trivial coset by reading `w`.
    pub fn trace(&mut self, w: &[i32]) -> Option<usize> {
        let mut c = 0;
        for &l in w {
            let d = self.table[c][col(l)];
            if d == NONE {
                return None;
            }
            c = self.rep(d);
        }
        Some(c)
    }
}

/// Enumerates cosets of the trivial subgroup; `None` when more than
/// `max_cosets` live cosets would be needed.
pub fn enumerate(gens: usize, relators: &[Vec<i32>], max_cosets: usize) -> Option<CosetTable> {
    let mut t = CosetTable::new(gens, max_cosets);
    let mut c = 0;
    while c < t.table.len() {
        if t.is_live(c) {
            for r in relators {
                t.scan_and_fill(c, r);
                if t.overflow {
                    return None;
                }
                if !t.is_live(c) {
                    break;
                }
            }
            if t.is_live(c) {
                for x in 0..2 * gens {
                    if t.table[c][x] == NONE && !t.define(c, x) {
                        return None;
                    }
                }
            }
        }
        c += 1;
    }
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_dihedral_orders() {
        let t = enumerate(1, &[vec![1; 6]], 1000).unwrap();
        assert_eq!(t.index(), 6);
        // S_3 = <a, b | a^2, b^3, (ab)^2>
        let rels = vec![vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2]];
        let mut t = enumerate(2, &rels, 1000).unwrap();
        assert_eq!(t.index(), 6);
        assert_eq!(t.trace(&[1, 2, 1, 2]), Some(0));
        assert_ne!(t.trace(&[1, 2]), Some(0));
        // PSL(2,7) = <a, b | a^2, b^3, (ab)^7, [a,b]^4>
        let rels = vec![
            vec![1, 1],
            vec![2, 2, 2],
            [1, 2].repeat(7),
            [1, -2, -1, 2].repeat(4),
        ];
        assert_eq!(enumerate(2, &rels, 100_000).unwrap().index(), 168);
        // infinite group exhausts the budget
        assert!(enumerate(2, &[vec![1, 1]], 500).is_none());
    }
}
