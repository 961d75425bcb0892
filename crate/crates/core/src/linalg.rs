//! Gaussian elimination over `F_p`.

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r, mut acc, mut e) = (1u64, a as u64 % p as u64, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * acc % p as u64;
        }
        acc = acc * acc % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Incremental row echelon basis; rows are reduced against it as they come in.
#[derive(Debug, Clone)]
pub struct Echelon {
    p: u32,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(p: u32) -> Echelon {
        Echelon { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v`; returns whether it was independent of what came before.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let p = self.p as u64;
        let mut v: Vec<u32> = v.iter().map(|x| x % self.p).collect();
        for (pivot, row) in &self.rows {
            let c = v[*pivot] as u64;
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = ((*x as u64 + (p - c) * *r as u64) % p) as u32;
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| *x != 0) else {
            return false;
        };
        let inv = inv_mod(v[pivot], self.p) as u64;
        for x in v.iter_mut() {
            *x = (*x as u64 * inv % p) as u32;
        }
        // Keep earlier rows reduced at the new pivot so later reductions stay
        // single-pass.
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot] as u64;
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = ((*x as u64 + (p - c) * *r as u64) % p) as u32;
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Rank over `F_p` of a matrix given as rows.
pub fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut e = Echelon::new(p);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Indices of a maximal independent subset, chosen greedily in order.
pub fn independent_subset(vectors: &[Vec<u32>], p: u32) -> Vec<usize> {
    let mut e = Echelon::new(p);
    vectors.iter().enumerate().filter(|(_, v)| e.insert(v)).map(|(i, _)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank_mod_p(&[vec![1, 1], vec![1, 1]], 2), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 1]], 3), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 1]], 5), 2);
        assert_eq!(rank_mod_p(&[], 2), 0);
        assert_eq!(rank_mod_p(&[vec![0, 0, 0]], 3), 0);
    }

    #[test]
    fn subset_skips_dependent_vectors() {
        let v = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0], vec![0, 0, 1]];
        assert_eq!(independent_subset(&v, 2), vec![0, 1, 3]);
    }

    #[test]
    fn identity_has_full_rank() {
        let n = 7;
        let m: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        assert_eq!(rank_mod_p(&m, 3), n);
    }
}
