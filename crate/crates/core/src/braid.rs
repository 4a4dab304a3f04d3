//! Words in the braid monoid `B_n` and the length-preserving rewriting search used to
//! extract letters from `t_d`.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{EllError, Result};
use crate::perm::{self, Perm};

/// Frontier cap for the rewriting search.
pub const BFS_CAP: usize = 1_000_000;

/// A word `s_{l_1} s_{l_2} ⋯` with letters in `[1, n−1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub letters: Vec<usize>,
}

impl BraidWord {
    pub fn new(letters: Vec<usize>) -> Self {
        BraidWord { letters }
    }

    pub fn unit() -> Self {
        BraidWord { letters: vec![] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, o: &BraidWord) -> BraidWord {
        let mut l = self.letters.clone();
        l.extend_from_slice(&o.letters);
        BraidWord { letters: l }
    }
}

/// `t_1 = 1`, `t_d = t_{d−1} s_{d−1} s_{d−2} ⋯ s_1`.
pub fn build_td(d: usize, n: usize) -> Result<BraidWord> {
    if d == 0 || d > n {
        return Err(EllError::Domain(format!(
            "t_d needs 1 <= d <= n, got d = {d}, n = {n}"
        )));
    }
    let mut letters = Vec::with_capacity(d * (d - 1) / 2);
    for k in 2..=d {
        letters.extend((1..k).rev());
    }
    Ok(BraidWord { letters })
}

/// Image in `S_n`: `π(s_{l_1} ⋯ s_{l_k}) = σ_{l_1} ∘ ⋯ ∘ σ_{l_k}`.
pub fn project_sn(w: &BraidWord, n: usize) -> Perm {
    let mut p = perm::identity(n);
    for &l in &w.letters {
        p = perm::compose(&p, &perm::adjacent(n, l - 1));
    }
    p
}

/// The anti-involution reversing a word.
pub fn involution_star(w: &BraidWord) -> BraidWord {
    BraidWord {
        letters: w.letters.iter().rev().copied().collect(),
    }
}

/// Words reachable by one application of a braid or commutation relation.
pub fn rewrites(w: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        if i + 1 < w.len() && w[i].abs_diff(w[i + 1]) > 1 {
            let mut v = w.to_vec();
            v.swap(i, i + 1);
            out.push(v);
        }
        if i + 2 < w.len() && w[i] == w[i + 2] && w[i].abs_diff(w[i + 1]) == 1 {
            let mut v = w.to_vec();
            let (a, b) = (w[i], w[i + 1]);
            v[i] = b;
            v[i + 1] = a;
            v[i + 2] = b;
            out.push(v);
        }
    }
    out
}

/// Breadth-first search over the rewriting class of `start`, stopping at the first word
/// accepted by `hit`.
fn bfs(start: &BraidWord, mut hit: impl FnMut(&[usize]) -> bool) -> Result<Option<Vec<usize>>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.letters.clone());
    queue.push_back(start.letters.clone());
    while let Some(w) = queue.pop_front() {
        if hit(&w) {
            return Ok(Some(w));
        }
        for v in rewrites(&w) {
            if seen.insert(v.clone()) {
                if seen.len() > BFS_CAP {
                    return Err(EllError::Expansion(format!(
                        "rewriting class exceeds {BFS_CAP} words"
                    )));
                }
                queue.push_back(v);
            }
        }
    }
    Ok(None)
}

/// The full rewriting class of a word.
pub fn equivalence_class(w: &BraidWord) -> Result<HashSet<Vec<usize>>> {
    let mut all = HashSet::new();
    bfs(w, |v| {
        all.insert(v.to_vec());
        false
    })?;
    Ok(all)
}

pub fn equivalent(a: &BraidWord, b: &BraidWord) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    Ok(bfs(a, |v| v == b.letters.as_slice())?.is_some())
}

fn check_di(d: usize, i: usize) -> Result<()> {
    if d < 2 || i == 0 || i >= d {
        return Err(EllError::Domain(format!(
            "extraction needs 2 <= d and 1 <= i < d, got d = {d}, i = {i}"
        )));
    }
    Ok(())
}

/// `b` with `t_d ≡ s_i b`.
pub fn extract_left(d: usize, i: usize) -> Result<BraidWord> {
    check_di(d, i)?;
    let td = build_td(d, d)?;
    match bfs(&td, |v| v.first() == Some(&i))? {
        Some(v) => Ok(BraidWord {
            letters: v[1..].to_vec(),
        }),
        None => Err(EllError::LemmaViolation(format!(
            "no representative of t_{d} starts with s_{i}"
        ))),
    }
}

/// `c` with `t_d ≡ c s_i`.
pub fn extract_right(d: usize, i: usize) -> Result<BraidWord> {
    check_di(d, i)?;
    let td = build_td(d, d)?;
    match bfs(&td, |v| v.last() == Some(&i))? {
        Some(v) => Ok(BraidWord {
            letters: v[..v.len() - 1].to_vec(),
        }),
        None => Err(EllError::LemmaViolation(format!(
            "no representative of t_{d} ends with s_{i}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn td_words() {
        assert!(build_td(1, 3).unwrap().is_empty());
        assert_eq!(build_td(2, 3).unwrap().letters, vec![1]);
        assert_eq!(build_td(3, 3).unwrap().letters, vec![1, 2, 1]);
        assert_eq!(build_td(4, 4).unwrap().len(), 6);
        assert!(build_td(4, 3).is_err());
    }

    #[test]
    fn projection() {
        assert_eq!(project_sn(&BraidWord::unit(), 3), vec![0, 1, 2]);
        assert_eq!(project_sn(&BraidWord::new(vec![1, 1]), 3), vec![0, 1, 2]);
        for n in 2..=5 {
            let p = project_sn(&build_td(n, n).unwrap(), n);
            assert_eq!(p, (0..n).rev().collect::<Vec<_>>());
        }
    }

    #[test]
    fn extraction_examples() {
        assert!(extract_left(2, 1).unwrap().is_empty());
        assert_eq!(extract_left(3, 2).unwrap().letters, vec![1, 2]);
        assert!(extract_left(3, 3).is_err());
    }

    #[test]
    fn star_fixes_td() {
        assert_eq!(
            involution_star(&BraidWord::new(vec![1, 2, 1])).letters,
            vec![1, 2, 1]
        );
        let t4 = build_td(4, 4).unwrap();
        assert!(equivalent(&involution_star(&t4), &t4).unwrap());
    }
}
