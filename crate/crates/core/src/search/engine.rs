//! Orderly branch-and-bound over hereditary properties of item sets.
//!
//! Nodes are canonical sets; children extend by larger items only. Each
//! node keeps the items that can still join it, so `size + candidates` is an
//! upper bound for its subtree. The tree is expanded sequentially to a fixed
//! depth and the frontier subtrees run in parallel, each with its own
//! incumbent seeded from the same greedy solution. Node counts and results
//! therefore do not depend on the thread count.

use super::group::Group;
use rayon::prelude::*;

/// A hereditary property of item sets.
pub trait Space: Sync {
    fn size(&self) -> usize;
    /// Whether `chosen + y + x` has the property, given that `chosen + y`
    /// and `chosen + x` both do. Only substructures holding both `x` and
    /// `y` need checking.
    fn pair_ok(&self, chosen: &[u32], y: u32, x: u32) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    /// Largest size only.
    Maximum,
    /// Largest size and every canonical set attaining it.
    AllMaxima,
    /// Every canonical set of exactly this size.
    Exactly(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub best: usize,
    pub example: Vec<u32>,
    /// Canonical sets of size `best` (or of the requested size), sorted.
    pub found: Vec<Vec<u32>>,
    pub nodes: u64,
    pub complete: bool,
}

/// Depth of the sequential prefix before subtrees are handed out.
const SPLIT_DEPTH: usize = 3;

struct Local {
    best: usize,
    example: Vec<u32>,
    found: Vec<Vec<u32>>,
    nodes: u64,
    cap: u64,
    aborted: bool,
}

struct Ctx<'a, S: Space> {
    space: &'a S,
    group: &'a Group,
    goal: Goal,
    ceiling: usize,
}

impl<S: Space> Ctx<'_, S> {
    fn worth(&self, reachable: usize, best: usize) -> bool {
        match self.goal {
            Goal::Maximum => reachable > best && best < self.ceiling,
            Goal::AllMaxima => reachable >= best,
            Goal::Exactly(k) => reachable >= k,
        }
    }

    fn visit(&self, chosen: &[u32], st: &mut Local) {
        st.nodes += 1;
        if st.nodes > st.cap {
            st.aborted = true;
            return;
        }
        let len = chosen.len();
        match self.goal {
            Goal::Exactly(k) => {
                if len == k {
                    st.found.push(chosen.to_vec());
                }
                if len > st.best {
                    st.best = len;
                    st.example = chosen.to_vec();
                }
            }
            Goal::Maximum | Goal::AllMaxima => {
                if len > st.best {
                    st.best = len;
                    st.example = chosen.to_vec();
                    st.found.clear();
                }
                if self.goal == Goal::AllMaxima && len == st.best {
                    st.found.push(chosen.to_vec());
                }
            }
        }
    }

    /// Children of a node as `(child, candidates)`, in item order.
    fn children(&self, chosen: &[u32], cands: &[u32], best: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
        let mut out = Vec::new();
        if matches!(self.goal, Goal::Exactly(k) if chosen.len() >= k) {
            return out;
        }
        for (i, &y) in cands.iter().enumerate() {
            if !self.worth(chosen.len() + cands.len() - i, best) {
                break;
            }
            let next: Vec<u32> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&x| self.space.pair_ok(chosen, y, x))
                .collect();
            if !self.worth(chosen.len() + 1 + next.len(), best) {
                continue;
            }
            let mut child = chosen.to_vec();
            child.push(y);
            if self.group.is_canonical(&child) {
                out.push((child, next));
            }
        }
        out
    }

    fn dfs(&self, chosen: &mut Vec<u32>, cands: &[u32], st: &mut Local) {
        self.visit(chosen, st);
        if st.aborted || matches!(self.goal, Goal::Exactly(k) if chosen.len() >= k) {
            return;
        }
        for (i, &y) in cands.iter().enumerate() {
            if !self.worth(chosen.len() + cands.len() - i, st.best) {
                break;
            }
            let next: Vec<u32> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&x| self.space.pair_ok(chosen, y, x))
                .collect();
            if !self.worth(chosen.len() + 1 + next.len(), st.best) {
                continue;
            }
            chosen.push(y);
            if self.group.is_canonical(chosen) {
                self.dfs(chosen, &next, st);
            }
            chosen.pop();
            if st.aborted {
                return;
            }
        }
    }
}

/// Greedy set built by scanning items in order.
pub fn greedy<S: Space>(space: &S) -> Vec<u32> {
    let mut chosen: Vec<u32> = Vec::new();
    let mut cands: Vec<u32> = (0..space.size() as u32).collect();
    while let Some((&y, rest)) = cands.split_first() {
        let next = rest.iter().copied().filter(|&x| space.pair_ok(&chosen, y, x)).collect();
        chosen.push(y);
        cands = next;
    }
    chosen
}

/// Runs the search. `example` is a set known to have the property and
/// seeds the incumbent; `budget` caps the visited nodes. With
/// [`Goal::Maximum`] the search stops once it reaches `ceiling`, a size
/// known not to be exceedable.
pub fn run<S: Space>(
    space: &S,
    group: &Group,
    goal: Goal,
    example: Vec<u32>,
    budget: u64,
    ceiling: usize,
) -> Outcome {
    let floor = match goal {
        Goal::Exactly(_) => 0,
        _ => example.len(),
    };
    let ctx = Ctx {
        space,
        group,
        goal,
        ceiling,
    };
    let mut head = Local {
        best: floor,
        example: example.clone(),
        found: Vec::new(),
        nodes: 0,
        cap: budget,
        aborted: false,
    };
    // sequential prefix down to the split depth
    let mut frontier: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    let mut layer = vec![(Vec::new(), (0..space.size() as u32).collect::<Vec<u32>>())];
    for depth in 0..=SPLIT_DEPTH {
        let mut next_layer = Vec::new();
        for (chosen, cands) in layer {
            if depth == SPLIT_DEPTH {
                frontier.push((chosen, cands));
                continue;
            }
            ctx.visit(&chosen, &mut head);
            if head.aborted {
                break;
            }
            next_layer.extend(ctx.children(&chosen, &cands, floor));
        }
        layer = next_layer;
        if head.aborted {
            break;
        }
    }
    let locals: Vec<Local> = if head.aborted {
        Vec::new()
    } else {
        frontier
            .into_par_iter()
            .map(|(mut chosen, cands)| {
                let mut st = Local {
                    best: floor,
                    example: Vec::new(),
                    found: Vec::new(),
                    nodes: 0,
                    cap: budget,
                    aborted: false,
                };
                ctx.dfs(&mut chosen, &cands, &mut st);
                st
            })
            .collect()
    };
    let nodes = head.nodes + locals.iter().map(|l| l.nodes).sum::<u64>();
    let complete = !head.aborted && locals.iter().all(|l| !l.aborted) && nodes <= budget;
    let mut best = head.best;
    let mut best_example = head.example;
    for l in &locals {
        if l.best > best && !l.example.is_empty() {
            best = l.best;
            best_example = l.example.clone();
        }
    }
    let mut found: Vec<Vec<u32>> = match goal {
        Goal::Exactly(_) => head.found.into_iter().chain(locals.into_iter().flat_map(|l| l.found)).collect(),
        _ => {
            let keep = |l_best: usize| l_best == best;
            let mut v = Vec::new();
            if keep(head.best) {
                v.extend(head.found);
            }
            for l in locals {
                if keep(l.best) {
                    v.extend(l.found);
                }
            }
            v
        }
    };
    found.sort();
    found.dedup();
    Outcome {
        best,
        example: best_example,
        found,
        nodes,
        complete,
    }
}
