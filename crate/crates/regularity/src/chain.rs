//! Graph analysis of the Markov chain a stationary policy induces:
//! closed recurrent classes, properness, and exact divergence for
//! deterministic chains.

use abstract_model::{FiniteModel, StationaryPolicy};

use crate::error::RegularityError;

/// Positive-probability successor lists under `mu`. The policy must
/// already be validated against the model.
fn positive_edges(model: &FiniteModel, mu: &StationaryPolicy) -> Vec<Vec<usize>> {
    (0..model.n_states())
        .map(|x| {
            model
                .control(x, mu.control(x))
                .expect("policy validated against this model")
                .transitions
                .iter()
                .filter(|(p, _)| *p > 0.0)
                .map(|&(_, y)| y)
                .collect()
        })
        .collect()
}

/// Strongly connected components by Kosaraju's two-pass sweep, iterative
/// so deep chains cannot overflow the stack.
fn sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        // (node, next child index) pairs; a node is finished once its
        // child cursor runs off the end.
        let mut stack = vec![(start, 0usize)];
        visited[start] = true;
        while let Some(&mut (x, ref mut idx)) = stack.last_mut() {
            if *idx < adj[x].len() {
                let y = adj[x][*idx];
                *idx += 1;
                if !visited[y] {
                    visited[y] = true;
                    stack.push((y, 0));
                }
            } else {
                order.push(x);
                stack.pop();
            }
        }
    }

    let mut radj = vec![Vec::new(); n];
    for (x, ys) in adj.iter().enumerate() {
        for &y in ys {
            radj[y].push(x);
        }
    }

    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &root in order.iter().rev() {
        if component[root] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![root];
        component[root] = id;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &y in &radj[x] {
                if component[y] == usize::MAX {
                    component[y] = id;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// The closed recurrent classes of the chain under `mu`: strongly
/// connected components with no positive-probability edge leaving them.
/// Every trajectory is eventually absorbed into one of these.
pub fn closed_recurrent_classes(
    model: &FiniteModel,
    mu: &StationaryPolicy,
) -> Result<Vec<Vec<usize>>, RegularityError> {
    model.validate_policy(mu)?;
    let adj = positive_edges(model, mu);
    let components = sccs(&adj);
    let mut id_of = vec![usize::MAX; model.n_states()];
    for (id, members) in components.iter().enumerate() {
        for &x in members {
            id_of[x] = id;
        }
    }
    let mut closed: Vec<Vec<usize>> = components
        .into_iter()
        .enumerate()
        .filter(|(id, members)| {
            members
                .iter()
                .all(|&x| adj[x].iter().all(|&y| id_of[y] == *id))
        })
        .map(|(_, members)| members)
        .collect();
    closed.sort_unstable_by_key(|members| members[0]);
    Ok(closed)
}

/// Whether the stop set is reached with probability one from every
/// state under `mu`: every closed recurrent class must lie inside the
/// stop set, since the chain is absorbed into some closed class and
/// classes inside the stop set never leave it.
pub fn classify_proper(
    model: &FiniteModel,
    mu: &StationaryPolicy,
) -> Result<bool, RegularityError> {
    if model.stop_set().is_empty() {
        return Err(RegularityError::MissingStopSet);
    }
    let classes = closed_recurrent_classes(model, mu)?;
    Ok(classes
        .iter()
        .all(|class| class.iter().all(|x| model.stop_set().contains(x))))
}

/// Marks every state that belongs to a closed recurrent class of some
/// enumerated stationary policy. Values there can never wash out of a
/// long-run expectation, which is what the vanishing-expectation region
/// cares about.
pub fn recurrent_union(
    model: &FiniteModel,
    enumeration_limit: u128,
) -> Result<Vec<bool>, RegularityError> {
    let mut mask = vec![false; model.n_states()];
    for mu in model.enumerate_policies(enumeration_limit)? {
        for class in closed_recurrent_classes(model, &mu)? {
            for x in class {
                mask[x] = true;
            }
        }
    }
    Ok(mask)
}

/// For a deterministic chain, the per-state successor and stage cost;
/// `None` when any chosen control is genuinely stochastic. The policy
/// must already be validated against the model.
pub fn deterministic_chain(
    model: &FiniteModel,
    mu: &StationaryPolicy,
) -> Option<Vec<(usize, f64)>> {
    let mut chain = Vec::with_capacity(model.n_states());
    for x in 0..model.n_states() {
        let c = model
            .control(x, mu.control(x))
            .expect("policy validated against this model");
        match c.transitions.as_slice() {
            [(p, y)] if (*p - 1.0).abs() <= 1e-12 => chain.push((*y, c.cost)),
            _ => return None,
        }
    }
    Some(chain)
}

/// For an undiscounted deterministic chain: does some state's orbit run
/// into a cycle of strictly positive total cost? If so, the k-step
/// costs from that state grow without bound regardless of the (finite)
/// starting function.
pub fn positive_cycle_reachable(chain: &[(usize, f64)]) -> bool {
    let n = chain.len();
    // Cycle cost each state's orbit is absorbed into, memoized.
    let mut cycle_cost = vec![f64::NAN; n];
    for start in 0..n {
        if !cycle_cost[start].is_nan() {
            continue;
        }
        // Walk until a repeat within this walk or a memoized state.
        let mut position: std::collections::HashMap<usize, usize> =
            std::collections::HashMap::new();
        let mut path: Vec<usize> = Vec::new();
        let mut x = start;
        let cost = loop {
            if !cycle_cost[x].is_nan() {
                break cycle_cost[x];
            }
            if let Some(&at) = position.get(&x) {
                break path[at..].iter().map(|&s| chain[s].1).sum::<f64>();
            }
            position.insert(x, path.len());
            path.push(x);
            x = chain[x].0;
        };
        for s in path {
            cycle_cost[s] = cost;
        }
    }
    cycle_cost.iter().any(|&c| c > 1e-12)
}
