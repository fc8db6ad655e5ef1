use std::collections::VecDeque;

/// Colours guaranteed for graphs of genus `g`: the Heawood number for
/// `g >= 1`, and five for planar graphs (Kempe-chain greedy).
pub fn heawood_number(g: usize) -> usize {
    if g == 0 {
        return 5;
    }
    let disc = 1 + 48 * g;
    let mut r = (disc as f64).sqrt() as usize;
    while r * r > disc {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= disc {
        r += 1;
    }
    (7 + r) / 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    pub colour: Vec<usize>,
    pub used: usize,
}

impl Colouring {
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.used];
        for &c in &self.colour {
            sizes[c] += 1;
        }
        sizes
    }

    /// Colour with the most vertices, lowest colour on ties.
    pub fn largest_class(&self) -> Option<usize> {
        let sizes = self.class_sizes();
        (0..sizes.len()).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)))
    }
}

/// Smallest-last order: repeatedly removes a vertex of minimum remaining
/// degree (lowest id on ties).
fn smallest_last(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (deg[v], v)).unwrap();
        removed[v] = true;
        order.push(v);
        for &w in &adj[v] {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    order
}

/// Greedy colouring in reverse smallest-last order. On planar graphs a
/// vertex that would need a sixth colour triggers Kempe-chain swaps.
pub fn colour_graph(adj: &[Vec<usize>], genus: usize) -> Colouring {
    colour(adj, genus == 0)
}

/// Plain greedy colouring in reverse smallest-last order.
pub fn colour_greedy(adj: &[Vec<usize>]) -> Colouring {
    colour(adj, false)
}

fn colour(adj: &[Vec<usize>], kempe: bool) -> Colouring {
    const NONE: usize = usize::MAX;
    let n = adj.len();
    let mut colour = vec![NONE; n];
    for &v in smallest_last(adj).iter().rev() {
        let mut taken: Vec<bool> = Vec::new();
        for &w in &adj[v] {
            if colour[w] != NONE {
                if taken.len() <= colour[w] {
                    taken.resize(colour[w] + 1, false);
                }
                taken[colour[w]] = true;
            }
        }
        let mut c = (0..).find(|&c| c >= taken.len() || !taken[c]).unwrap();
        if kempe && c >= 5 {
            if let Some(freed) = kempe_free(adj, &mut colour, v) {
                c = freed;
            }
        }
        colour[v] = c;
    }
    let used = colour.iter().map(|&c| c + 1).max().unwrap_or(0);
    Colouring { colour, used }
}

/// Tries to free one of the colours 0..5 at `v` by swapping a two-coloured
/// component that holds neighbours of one colour but none of the other.
fn kempe_free(adj: &[Vec<usize>], colour: &mut [usize], v: usize) -> Option<usize> {
    for a in 0..5 {
        for b in 0..5 {
            if a == b {
                continue;
            }
            let starts: Vec<usize> = adj[v].iter().copied().filter(|&w| colour[w] == a).collect();
            let mut seen = vec![false; adj.len()];
            let mut comp = Vec::new();
            let mut queue: VecDeque<usize> = VecDeque::new();
            for &s in &starts {
                seen[s] = true;
                queue.push_back(s);
            }
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &y in &adj[x] {
                    if !seen[y] && y != v && (colour[y] == a || colour[y] == b) {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            if adj[v].iter().any(|&w| colour[w] == b && seen[w]) {
                continue;
            }
            for x in comp {
                colour[x] = if colour[x] == a { b } else { a };
            }
            return Some(a);
        }
    }
    None
}
