//! Depth-first search over per-node choices, tracking open strands.
//!
//! Every node owns some ports. Wires join ports to ports or to external
//! labels, so before any choice is made the instance is a set of strands,
//! each with two ends. Choosing an option at a node joins its ports in pairs;
//! joining the two ends of one strand closes a curve, which is where the
//! search prunes.

use std::collections::BTreeMap;
use std::ops::{AddAssign, Mul};

use num_traits::One;
use rayon::prelude::*;

/// Weight carried by a node option; products over a full assignment are summed.
pub(crate) trait Weight: Clone + One + Send + Sync + for<'a> AddAssign<&'a Self> {}
impl<T> Weight for T where T: Clone + One + Send + Sync + for<'a> AddAssign<&'a T> + Mul<Output = T> {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    /// Route sets on the externals, no closed curve allowed.
    Routes,
    /// Exactly one closed curve through everything; there are no externals.
    SingleCycle,
}

/// An end is a port index, or `num_ports + label` for an external label.
#[derive(Clone, Debug)]
pub(crate) struct Problem<W> {
    pub num_ports: usize,
    pub num_externals: usize,
    pub wires: Vec<(usize, usize)>,
    /// Per node, the options: pairs of port indices and a weight.
    pub nodes: Vec<Vec<(Vec<(usize, usize)>, W)>>,
}

struct State {
    end: Vec<usize>,
}

impl State {
    /// Joins the strands ending at `a` and `b`. Returns `None` if they are
    /// the same strand, otherwise the undo record.
    #[inline]
    fn join(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ea, eb) = (self.end[a], self.end[b]);
        if ea == b {
            return None;
        }
        self.end[ea] = eb;
        self.end[eb] = ea;
        Some((ea, eb))
    }

    #[inline]
    fn undo(&mut self, a: usize, b: usize, (ea, eb): (usize, usize)) {
        self.end[ea] = a;
        self.end[eb] = b;
    }
}

type Tally<W> = BTreeMap<Vec<u32>, W>;

struct Search<'p, W> {
    problem: &'p Problem<W>,
    order: &'p [usize],
    goal: Goal,
    total_pairs: usize,
}

impl<W: Weight + Mul<Output = W>> Search<'_, W> {
    /// Applies one option at a node. On success the joins are recorded in
    /// `undo` and `done` is advanced; on a forbidden closure everything is
    /// rolled back and `false` is returned.
    fn apply(
        &self,
        st: &mut State,
        pairs: &[(usize, usize)],
        done: &mut usize,
        undo: &mut Vec<(usize, usize, (usize, usize))>,
    ) -> bool {
        let mark = undo.len();
        for &(a, b) in pairs {
            match st.join(a, b) {
                Some(rec) => undo.push((a, b, rec)),
                None => {
                    let last = *done + 1 == self.total_pairs;
                    if self.goal == Goal::SingleCycle && last {
                        // Closing the only remaining strand; nothing to undo.
                        *done += 1;
                        continue;
                    }
                    self.rollback(st, undo, mark);
                    return false;
                }
            }
            *done += 1;
        }
        true
    }

    fn rollback(&self, st: &mut State, undo: &mut Vec<(usize, usize, (usize, usize))>, mark: usize) {
        while undo.len() > mark {
            let (a, b, rec) = undo.pop().expect("nonempty");
            st.undo(a, b, rec);
        }
    }

    fn key(&self, st: &State) -> Vec<u32> {
        match self.goal {
            Goal::SingleCycle => Vec::new(),
            Goal::Routes => {
                let p = self.problem.num_ports;
                (0..self.problem.num_externals)
                    .map(|l| (st.end[p + l] - p) as u32)
                    .collect()
            }
        }
    }

    fn dfs(
        &self,
        st: &mut State,
        depth: usize,
        done: usize,
        weight: &W,
        undo: &mut Vec<(usize, usize, (usize, usize))>,
        out: &mut Tally<W>,
    ) {
        if depth == self.order.len() {
            let key = self.key(st);
            match out.get_mut(&key) {
                Some(w) => *w += weight,
                None => {
                    out.insert(key, weight.clone());
                }
            }
            return;
        }
        for (pairs, w) in &self.problem.nodes[self.order[depth]] {
            let mark = undo.len();
            let mut d = done;
            if self.apply(st, pairs, &mut d, undo) {
                let next = weight.clone() * w.clone();
                self.dfs(st, depth + 1, d, &next, undo, out);
                self.rollback(st, undo, mark);
            }
        }
    }
}

/// Visits nodes so that each next node shares as many wires as possible with
/// those already placed, keeping the set of open strands small.
fn node_order<W>(p: &Problem<W>) -> Vec<usize> {
    let n = p.nodes.len();
    let mut owner = vec![usize::MAX; p.num_ports];
    for (v, options) in p.nodes.iter().enumerate() {
        if let Some((pairs, _)) = options.first() {
            for &(a, b) in pairs {
                owner[a] = v;
                owner[b] = v;
            }
        }
    }
    let node_of = |e: usize| (e < p.num_ports).then(|| owner[e]).filter(|&v| v != usize::MAX);
    let mut adj = vec![Vec::new(); n];
    let mut ext_wires = vec![0usize; n];
    for &(a, b) in &p.wires {
        match (node_of(a), node_of(b)) {
            (Some(x), Some(y)) => {
                adj[x].push(y);
                adj[y].push(x);
            }
            (Some(x), None) | (None, Some(x)) => ext_wires[x] += 1,
            (None, None) => {}
        }
    }
    let mut placed = vec![false; n];
    let mut score = ext_wires.clone();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (score[v], std::cmp::Reverse(v)))
            .expect("unplaced node remains");
        placed[next] = true;
        order.push(next);
        for &w in &adj[next] {
            score[w] += 1;
        }
    }
    order
}

/// Sums option weights over all assignments meeting the goal, keyed by the
/// partner array on external labels.
pub(crate) fn solve<W: Weight + Mul<Output = W>>(p: &Problem<W>, goal: Goal) -> Tally<W> {
    let ends = p.num_ports + p.num_externals;
    let mut end = vec![usize::MAX; ends];
    for &(a, b) in &p.wires {
        end[a] = b;
        end[b] = a;
    }
    debug_assert!(end.iter().all(|&e| e != usize::MAX), "every end wired once");
    let order = node_order(p);
    let total_pairs: usize = p
        .nodes
        .iter()
        .map(|opts| opts.first().map_or(0, |(pairs, _)| pairs.len()))
        .sum();
    if p.nodes.iter().any(Vec::is_empty) {
        return Tally::new();
    }
    let search = Search { problem: p, order: &order, goal, total_pairs };

    // Split on a prefix of the order so the pieces can run in parallel.
    let mut split = 0;
    let mut pieces: u64 = 1;
    while split < order.len() && pieces < 512 {
        pieces = pieces.saturating_mul(p.nodes[order[split]].len() as u64);
        split += 1;
    }
    let mut prefixes: Vec<Vec<usize>> = vec![Vec::new()];
    for &v in &order[..split] {
        let k = p.nodes[v].len();
        prefixes = prefixes
            .into_iter()
            .flat_map(|pre| {
                (0..k).map(move |c| {
                    let mut next = pre.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    let partial: Vec<Tally<W>> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut st = State { end: end.clone() };
            let mut undo = Vec::new();
            let mut done = 0;
            let mut weight = W::one();
            for (depth, &c) in prefix.iter().enumerate() {
                let (pairs, w) = &p.nodes[order[depth]][c];
                if !search.apply(&mut st, pairs, &mut done, &mut undo) {
                    return Tally::new();
                }
                weight = weight * w.clone();
            }
            let mut out = Tally::new();
            search.dfs(&mut st, prefix.len(), done, &weight, &mut undo, &mut out);
            out
        })
        .collect();
    let mut total = Tally::new();
    for part in partial {
        for (k, w) in part {
            match total.get_mut(&k) {
                Some(acc) => *acc += &w,
                None => {
                    total.insert(k, w);
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One degree-4 node with ports 0..4 wired to externals 0..4.
    fn star(options: Vec<Vec<(usize, usize)>>) -> Problem<u64> {
        Problem {
            num_ports: 4,
            num_externals: 4,
            wires: (0..4).map(|i| (i, 4 + i)).collect(),
            nodes: vec![options.into_iter().map(|o| (o, 1)).collect()],
        }
    }

    #[test]
    fn star_gives_each_type_once() {
        let t = solve(&star(vec![vec![(0, 1), (2, 3)], vec![(0, 2), (1, 3)], vec![(0, 3), (1, 2)]]), Goal::Routes);
        assert_eq!(t.len(), 3);
        assert_eq!(t[&vec![1, 0, 3, 2]], 1);
        assert_eq!(t[&vec![3, 2, 1, 0]], 1);
    }

    #[test]
    fn loop_is_pruned() {
        // Ports 0 and 1 form a loop; pairing them closes a curve.
        let p = Problem {
            num_ports: 4,
            num_externals: 2,
            wires: vec![(0, 1), (2, 4), (3, 5)],
            nodes: vec![vec![(vec![(0, 1), (2, 3)], 1u64), (vec![(0, 2), (1, 3)], 1)]],
        };
        let t = solve(&p, Goal::Routes);
        assert_eq!(t.values().sum::<u64>(), 1);
    }

    #[test]
    fn through_wire_without_nodes() {
        let p: Problem<u64> = Problem { num_ports: 0, num_externals: 2, wires: vec![(0, 1)], nodes: vec![] };
        assert_eq!(solve(&p, Goal::Routes)[&vec![1, 0]], 1);
    }
}
