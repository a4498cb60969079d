//! Hopcroft–Karp maximum bipartite matching.
//!
//! Left and right sides are indexed independently. Adjacency lists are scanned
//! in the order given, so results are deterministic.

const UNREACHED: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub mate_left: Vec<Option<usize>>,
    pub mate_right: Vec<Option<usize>>,
}

impl Matching {
    #[cfg(test)]
    pub fn size(&self) -> usize {
        self.mate_left.iter().filter(|m| m.is_some()).count()
    }

    pub fn saturates_left(&self) -> bool {
        self.mate_left.iter().all(Option::is_some)
    }
}

pub fn hopcroft_karp(right_count: usize, adj: &[Vec<usize>]) -> Matching {
    let left_count = adj.len();
    let mut m = Matching {
        mate_left: vec![None; left_count],
        mate_right: vec![None; right_count],
    };
    let mut dist = vec![UNREACHED; left_count];
    let mut queue = Vec::with_capacity(left_count);
    let mut next = vec![0usize; left_count];
    let mut stack = Vec::new();
    let mut via = Vec::new();

    loop {
        // BFS layering from free left vertices.
        queue.clear();
        for u in 0..left_count {
            if m.mate_left[u].is_none() {
                dist[u] = 0;
                queue.push(u);
            } else {
                dist[u] = UNREACHED;
            }
        }
        let mut found_free = false;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &r in &adj[u] {
                match m.mate_right[r] {
                    None => found_free = true,
                    Some(w) if dist[w] == UNREACHED => {
                        dist[w] = dist[u] + 1;
                        queue.push(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found_free {
            return m;
        }

        next.iter_mut().for_each(|i| *i = 0);
        let mut augmented = false;
        for root in 0..left_count {
            if m.mate_left[root].is_some() {
                continue;
            }
            stack.clear();
            via.clear();
            stack.push(root);
            while let Some(&u) = stack.last() {
                if next[u] == adj[u].len() {
                    dist[u] = UNREACHED;
                    stack.pop();
                    via.pop();
                    continue;
                }
                let r = adj[u][next[u]];
                next[u] += 1;
                match m.mate_right[r] {
                    None => {
                        via.push(r);
                        for (&l, &rr) in stack.iter().zip(via.iter()) {
                            m.mate_left[l] = Some(rr);
                            m.mate_right[rr] = Some(l);
                        }
                        augmented = true;
                        break;
                    }
                    Some(w) if dist[w] == dist[u].wrapping_add(1) => {
                        via.push(r);
                        stack.push(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !augmented {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_max_matching(right: usize, adj: &[Vec<usize>]) -> usize {
        fn go(i: usize, adj: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
            if i == adj.len() {
                return 0;
            }
            let mut best = go(i + 1, adj, used);
            for &r in &adj[i] {
                if !used[r] {
                    used[r] = true;
                    best = best.max(1 + go(i + 1, adj, used));
                    used[r] = false;
                }
            }
            best
        }
        go(0, adj, &mut vec![false; right])
    }

    #[test]
    fn needs_augmenting_path() {
        // greedy 0-0 blocks 1; optimum is 0-1, 1-0
        let adj = vec![vec![0, 1], vec![0]];
        let m = hopcroft_karp(2, &adj);
        assert_eq!(m.size(), 2);
        assert_eq!(m.mate_left, vec![Some(1), Some(0)]);
    }

    #[test]
    fn deficient_side() {
        let adj = vec![vec![0], vec![0], vec![0, 1]];
        let m = hopcroft_karp(2, &adj);
        assert_eq!(m.size(), 2);
        assert!(!m.saturates_left());
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let (l, r) = (rng.gen_range(0..7), rng.gen_range(0..7));
            let adj: Vec<Vec<usize>> = (0..l)
                .map(|_| (0..r).filter(|_| rng.gen_bool(0.35)).collect())
                .collect();
            let m = hopcroft_karp(r, &adj);
            assert_eq!(m.size(), brute_max_matching(r, &adj));
            for (u, mate) in m.mate_left.iter().enumerate() {
                if let Some(v) = mate {
                    assert!(adj[u].contains(v));
                    assert_eq!(m.mate_right[*v], Some(u));
                }
            }
        }
    }
}
