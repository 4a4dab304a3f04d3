//! Permutations of `{0, …, n−1}` stored as image vectors: `σ[i] = σ(i)`.

use itertools::Itertools;

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// `(a ∘ b)(i) = a(b(i))`.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn inverse(a: &[usize]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &ai) in a.iter().enumerate() {
        inv[ai] = i;
    }
    inv
}

/// Adjacent transposition exchanging `i` and `i + 1` (0-based).
pub fn adjacent(n: usize, i: usize) -> Perm {
    let mut p = identity(n);
    p.swap(i, i + 1);
    p
}

pub fn sign(a: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] > a[j] {
                s = -s;
            }
        }
    }
    s
}

pub fn all(n: usize) -> Vec<Perm> {
    (0..n).permutations(n).collect()
}

/// All permutations of `{0, …, n−1}` that fix every point outside `set` and map `set`
/// onto itself.
pub fn of_subset(n: usize, set: &[usize]) -> Vec<Perm> {
    set.iter()
        .copied()
        .permutations(set.len())
        .map(|img| {
            let mut p = identity(n);
            for (k, &s) in set.iter().enumerate() {
                p[s] = img[k];
            }
            p
        })
        .collect()
}

/// Image of an index list under `σ`.
pub fn apply(sigma: &[usize], idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|&i| sigma[i]).collect()
}

/// Sorted image of a set.
pub fn image_set(sigma: &[usize], set: &[usize]) -> Vec<usize> {
    let mut v = apply(sigma, set);
    v.sort_unstable();
    v
}

pub fn is_perm(a: &[usize]) -> bool {
    let mut seen = vec![false; a.len()];
    for &x in a {
        if x >= a.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_and_inverse() {
        let a = vec![2, 0, 1];
        let b = vec![1, 0, 2];
        assert_eq!(compose(&a, &b), vec![0, 2, 1]);
        assert_eq!(compose(&a, &inverse(&a)), identity(3));
        assert_eq!(sign(&a), 1);
        assert_eq!(sign(&b), -1);
        assert_eq!(all(3).len(), 6);
    }

    #[test]
    fn subset_perms_fix_complement() {
        let ps = of_subset(4, &[1, 3]);
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|p| p[0] == 0 && p[2] == 2 && is_perm(p)));
    }
}
