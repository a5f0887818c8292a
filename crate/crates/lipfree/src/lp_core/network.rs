//! Min-cost flow by the primal network simplex (spanning-tree basis with
//! thread/depth indices, block pivot search), for uncapacitated networks with
//! nonnegative arc costs and balanced real-valued supplies.
//!
//! The tree bookkeeping follows the classic LEMON layout: an artificial root
//! joined to every node, parent/predecessor arrays, a thread list threading
//! the tree in preorder, and subtree sizes (`succ_num`) to locate cycle join
//! nodes quickly. Deterministic: block search with a persistent cursor, ties
//! resolved by arc order.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct FlowArc {
    pub tail: usize,
    pub head: usize,
    pub cost: f64,
}

/// `supplies[v] > 0` means `v` sends mass, `< 0` receives; must sum to ~0.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    pub num_nodes: usize,
    pub arcs: Vec<FlowArc>,
    pub supplies: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McfStatus {
    Optimal,
    /// No flow can satisfy the supplies (disconnected network).
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct McfSolution {
    pub status: McfStatus,
    /// Total cost (meaningful only when `status == Optimal`).
    pub value: f64,
    /// Flow per input arc.
    pub flows: Vec<f64>,
    /// Node potentials certifying optimality: `cost + pi[tail] - pi[head] >= 0`
    /// for every arc, with equality on arcs carrying flow.
    pub potentials: Vec<f64>,
}

const STATE_TREE: f64 = 0.0;
const STATE_LOWER: f64 = 1.0;
const DIR_UP: f64 = 1.0; // predecessor arc points from the node to its parent
const DIR_DOWN: f64 = -1.0;
const ENTER_EPS: f64 = 1e-10;

struct Simplex {
    node_num: usize,
    arc_num: usize,
    search_arc_num: usize,
    all_arc_num: usize,
    root: usize,
    source: Vec<usize>,
    target: Vec<usize>,
    cost: Vec<f64>,
    flow: Vec<f64>,
    state: Vec<f64>,
    pi: Vec<f64>,
    parent: Vec<Option<usize>>,
    pred: Vec<Option<usize>>,
    pred_dir: Vec<f64>,
    thread: Vec<usize>,
    rev_thread: Vec<usize>,
    succ_num: Vec<usize>,
    last_succ: Vec<usize>,
    dirty_revs: Vec<usize>,
    block_size: usize,
    next_arc: usize,
    in_arc: usize,
    join: usize,
    u_in: usize,
    v_in: usize,
    u_out: usize,
    delta: f64,
}

impl Simplex {
    fn new(net: &FlowNetwork) -> Self {
        let n = net.num_nodes;
        let m = net.arcs.len();
        let all_node = n + 1;
        let all_arc = m + n;
        let mut s = Simplex {
            node_num: n,
            arc_num: m,
            search_arc_num: m,
            all_arc_num: all_arc,
            root: n,
            source: vec![0; all_arc],
            target: vec![0; all_arc],
            cost: vec![0.0; all_arc],
            flow: vec![0.0; all_arc],
            state: vec![STATE_LOWER; all_arc],
            pi: vec![0.0; all_node],
            parent: vec![None; all_node],
            pred: vec![None; all_node],
            pred_dir: vec![DIR_UP; all_node],
            thread: vec![0; all_node],
            rev_thread: vec![0; all_node],
            succ_num: vec![0; all_node],
            last_succ: vec![0; all_node],
            dirty_revs: Vec::new(),
            block_size: ((m + n) as f64).sqrt() as usize,
            next_arc: 0,
            in_arc: 0,
            join: 0,
            u_in: 0,
            v_in: 0,
            u_out: 0,
            delta: 0.0,
        };
        s.block_size = s.block_size.max(10).min(s.search_arc_num.max(1));
        for (e, arc) in net.arcs.iter().enumerate() {
            s.source[e] = arc.tail;
            s.target[e] = arc.head;
            s.cost[e] = arc.cost;
        }
        // initial basis: every node hangs off the artificial root, supply
        // carried by its artificial arc; big-M cost keeps root routing out
        // of any optimal feasible solution.
        let max_cost = net.arcs.iter().map(|a| a.cost).fold(0.0, f64::max);
        let art_cost = (max_cost + 1.0) * (n as f64);
        s.parent[s.root] = None;
        s.pred[s.root] = None;
        s.thread[s.root] = 0;
        s.rev_thread[0] = s.root;
        s.succ_num[s.root] = n + 1;
        s.last_succ[s.root] = n.wrapping_sub(1);
        s.pi[s.root] = 0.0;
        for (u, e) in (0..n).zip(m..all_arc) {
            s.parent[u] = Some(s.root);
            s.pred[u] = Some(e);
            s.thread[u] = if u + 1 < n { u + 1 } else { s.root };
            if u + 1 < n {
                s.rev_thread[u + 1] = u;
            }
            s.succ_num[u] = 1;
            s.last_succ[u] = u;
            s.state[e] = STATE_TREE;
            if net.supplies[u] >= 0.0 {
                s.pred_dir[u] = DIR_UP;
                s.pi[u] = 0.0;
                s.source[e] = u;
                s.target[e] = s.root;
                s.flow[e] = net.supplies[u];
                s.cost[e] = 0.0;
            } else {
                s.pred_dir[u] = DIR_DOWN;
                s.pi[u] = art_cost;
                s.source[e] = s.root;
                s.target[e] = u;
                s.flow[e] = -net.supplies[u];
                s.cost[e] = art_cost;
            }
        }
        s
    }

    fn enter_threshold(&self, e: usize) -> f64 {
        let a = self.pi[self.source[e]]
            .abs()
            .max(self.pi[self.target[e]].abs())
            .max(self.cost[e].abs());
        ENTER_EPS * a
    }

    fn find_entering_arc(&mut self) -> bool {
        let mut min_cost = 0.0;
        let mut count = self.block_size;
        let total = self.search_arc_num;
        for step in 0..total {
            let e = {
                let e = self.next_arc + step;
                if e >= total { e - total } else { e }
            };
            let c = self.state[e] * (self.cost[e] + self.pi[self.source[e]] - self.pi[self.target[e]]);
            if c < min_cost {
                min_cost = c;
                self.in_arc = e;
            }
            count -= 1;
            if count == 0 {
                if min_cost < -self.enter_threshold(self.in_arc) {
                    self.next_arc = if e + 1 >= total { 0 } else { e + 1 };
                    return true;
                }
                count = self.block_size;
            }
        }
        if min_cost < -self.enter_threshold(self.in_arc) {
            self.next_arc = 0;
            return true;
        }
        false
    }

    fn find_join_node(&mut self) {
        let mut u = self.source[self.in_arc];
        let mut v = self.target[self.in_arc];
        while u != v {
            // subtree size doubles as a depth proxy: the shallower side ascends
            if self.succ_num[u] < self.succ_num[v] {
                u = self.parent[u].expect("join search passed the root");
            } else {
                v = self.parent[v].expect("join search passed the root");
            }
        }
        self.join = u;
    }

    /// Returns false when no tree arc blocks the cycle (a negative-cost
    /// uncapacitated cycle; impossible with nonnegative costs).
    fn find_leaving_arc(&mut self) -> bool {
        // entering arcs are always at their lower bound here (uncapacitated)
        let first = self.source[self.in_arc];
        let second = self.target[self.in_arc];
        self.delta = f64::INFINITY;
        let mut result = 0;
        let mut u = first;
        while u != self.join {
            let e = self.pred[u].expect("tree path hit the root before join");
            // on the `first` side the cycle pushes against up-pointing arcs
            let d = if self.pred_dir[u] == DIR_DOWN { f64::INFINITY } else { self.flow[e] };
            if d < self.delta {
                self.delta = d;
                self.u_out = u;
                result = 1;
            }
            u = self.parent[u].unwrap();
        }
        let mut u = second;
        while u != self.join {
            let e = self.pred[u].expect("tree path hit the root before join");
            let d = if self.pred_dir[u] == DIR_UP { f64::INFINITY } else { self.flow[e] };
            if d < self.delta {
                self.delta = d;
                self.u_out = u;
                result = 2;
            }
            u = self.parent[u].unwrap();
        }
        if result == 1 {
            self.u_in = first;
            self.v_in = second;
        } else {
            self.u_in = second;
            self.v_in = first;
        }
        result != 0
    }

    fn change_flow(&mut self) {
        if self.delta > 0.0 {
            let val = self.state[self.in_arc] * self.delta;
            self.flow[self.in_arc] += val;
            let mut u = self.source[self.in_arc];
            while u != self.join {
                self.flow[self.pred[u].unwrap()] -= self.pred_dir[u] * val;
                u = self.parent[u].unwrap();
            }
            let mut u = self.target[self.in_arc];
            while u != self.join {
                self.flow[self.pred[u].unwrap()] += self.pred_dir[u] * val;
                u = self.parent[u].unwrap();
            }
        }
        self.state[self.in_arc] = STATE_TREE;
        let out_arc = self.pred[self.u_out].unwrap();
        self.flow[out_arc] = 0.0; // exact zero, shedding roundoff
        self.state[out_arc] = STATE_LOWER;
    }

    fn update_tree_structure(&mut self) {
        let old_rev_thread = self.rev_thread[self.u_out];
        let old_succ_num = self.succ_num[self.u_out];
        let old_last_succ = self.last_succ[self.u_out];
        let v_out = self.parent[self.u_out].unwrap();

        if self.u_in == self.u_out {
            // the leaving arc is the predecessor of u_in: reattach u_in under
            // v_in, splicing its subtree out of and back into the thread
            self.parent[self.u_in] = Some(self.v_in);
            self.pred[self.u_in] = Some(self.in_arc);
            self.pred_dir[self.u_in] =
                if self.u_in == self.source[self.in_arc] { DIR_UP } else { DIR_DOWN };
            if self.thread[self.v_in] != self.u_out {
                let mut after = self.thread[old_last_succ];
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
                after = self.thread[self.v_in];
                self.thread[self.v_in] = self.u_out;
                self.rev_thread[self.u_out] = self.v_in;
                self.thread[old_last_succ] = after;
                self.rev_thread[after] = old_last_succ;
            }
        } else {
            // re-root the stem u_in..u_out inside its subtree
            let thread_continue = if old_rev_thread == self.v_in {
                self.thread[old_last_succ]
            } else {
                self.thread[self.v_in]
            };
            let mut stem = self.u_in;
            let mut stem_parent = self.v_in;
            let mut last = self.last_succ[self.u_in];
            let mut after = self.thread[last];
            self.thread[self.v_in] = self.u_in;
            self.dirty_revs.clear();
            self.dirty_revs.push(self.v_in);
            while stem != self.u_out {
                let next_stem = self.parent[stem].unwrap();
                self.thread[last] = next_stem;
                self.dirty_revs.push(last);
                let before = self.rev_thread[stem];
                self.thread[before] = after;
                self.rev_thread[after] = before;
                self.parent[stem] = Some(stem_parent);
                stem_parent = stem;
                stem = next_stem;
                last = if self.last_succ[stem] == self.last_succ[stem_parent] {
                    self.rev_thread[stem_parent]
                } else {
                    self.last_succ[stem]
                };
                after = self.thread[last];
            }
            self.parent[self.u_out] = Some(stem_parent);
            self.thread[last] = thread_continue;
            self.rev_thread[thread_continue] = last;
            self.last_succ[self.u_out] = last;
            if old_rev_thread != self.v_in {
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
            }
            for i in 0..self.dirty_revs.len() {
                let u = self.dirty_revs[i];
                self.rev_thread[self.thread[u]] = u;
            }
            // predecessors flip along the re-rooted stem; subtree sizes are
            // rebuilt bottom-up
            let mut temp_succ_num = 0usize;
            let temp_last_succ = self.last_succ[self.u_out];
            let mut u = self.u_out;
            let mut p = self.parent[u];
            while u != self.u_in {
                let pu = p.unwrap();
                self.pred[u] = self.pred[pu];
                self.pred_dir[u] = -self.pred_dir[pu];
                temp_succ_num += self.succ_num[u] - self.succ_num[pu];
                self.succ_num[u] = temp_succ_num;
                self.last_succ[pu] = temp_last_succ;
                u = pu;
                p = self.parent[u];
            }
            self.pred[self.u_in] = Some(self.in_arc);
            self.pred_dir[self.u_in] =
                if self.u_in == self.source[self.in_arc] { DIR_UP } else { DIR_DOWN };
            self.succ_num[self.u_in] = old_succ_num;
        }

        // last_succ fixups from v_in and v_out up toward the join
        let up_limit_out =
            if self.last_succ[self.join] == self.v_in { Some(self.join) } else { None };
        let last_succ_out = self.last_succ[self.u_out];
        let mut u = Some(self.v_in);
        while let Some(un) = u {
            if self.last_succ[un] != self.v_in {
                break;
            }
            self.last_succ[un] = last_succ_out;
            u = self.parent[un];
        }
        if self.join != old_rev_thread && self.v_in != old_rev_thread {
            let mut u = Some(v_out);
            while let Some(un) = u {
                if u == up_limit_out || self.last_succ[un] != old_last_succ {
                    break;
                }
                self.last_succ[un] = old_rev_thread;
                u = self.parent[un];
            }
        } else if last_succ_out != old_last_succ {
            let mut u = Some(v_out);
            while let Some(un) = u {
                if u == up_limit_out || self.last_succ[un] != old_last_succ {
                    break;
                }
                self.last_succ[un] = last_succ_out;
                u = self.parent[un];
            }
        }
        // subtree sizes along both cycle flanks
        let mut u = self.v_in;
        while u != self.join {
            self.succ_num[u] += old_succ_num;
            u = self.parent[u].unwrap();
        }
        let mut u = v_out;
        while u != self.join {
            self.succ_num[u] -= old_succ_num;
            u = self.parent[u].unwrap();
        }
    }

    fn update_potential(&mut self) {
        let sigma =
            -self.cost[self.in_arc] * self.pred_dir[self.u_in] + self.pi[self.v_in]
                - self.pi[self.u_in];
        let end = self.thread[self.last_succ[self.u_in]];
        let mut u = self.u_in;
        while u != end {
            self.pi[u] += sigma;
            u = self.thread[u];
        }
    }
}

pub fn mcf_solve(net: &FlowNetwork) -> Result<McfSolution> {
    let n = net.num_nodes;
    if n == 0 {
        return Err(Error::invalid("flow network has no nodes"));
    }
    if net.supplies.len() != n {
        return Err(Error::invalid("supplies length does not match node count"));
    }
    for arc in &net.arcs {
        if arc.tail >= n || arc.head >= n {
            return Err(Error::invalid("arc endpoint out of range"));
        }
        if !(arc.cost >= 0.0) {
            return Err(Error::invalid("arc costs must be nonnegative"));
        }
    }
    let scale = net.supplies.iter().fold(0.0_f64, |a, &b| a.max(b.abs())).max(1.0);
    let total: f64 = net.supplies.iter().sum();
    if total.abs() > 1e-9 * scale {
        return Err(Error::UnbalancedSource { total });
    }

    let mut s = Simplex::new(net);
    let pivot_limit = 10_000 + 200 * (s.node_num + s.arc_num);
    let mut pivots = 0usize;
    while s.find_entering_arc() {
        pivots += 1;
        if pivots > pivot_limit {
            return Err(Error::invalid("network simplex pivot limit exceeded"));
        }
        s.find_join_node();
        if !s.find_leaving_arc() {
            // only reachable via a negative uncapacitated cycle
            return Err(Error::invalid("unbounded flow cycle (negative cost?)"));
        }
        s.change_flow();
        s.update_tree_structure();
        s.update_potential();
    }

    // any mass still on an artificial arc means the supplies cannot be routed
    let infeasible = (s.arc_num..s.all_arc_num).any(|e| s.flow[e].abs() > 1e-9 * scale);
    let flows: Vec<f64> = s.flow[..s.arc_num].to_vec();
    let potentials: Vec<f64> = s.pi[..s.node_num].to_vec();
    if infeasible {
        return Ok(McfSolution {
            status: McfStatus::Infeasible,
            value: f64::NAN,
            flows,
            potentials,
        });
    }
    let value = net
        .arcs
        .iter()
        .zip(&flows)
        .map(|(a, f)| a.cost * f)
        .sum();
    Ok(McfSolution { status: McfStatus::Optimal, value, flows, potentials })
}
