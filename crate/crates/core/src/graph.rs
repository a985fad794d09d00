//! Small directed-graph helpers shared by the machine, topology and
//! reconstruction code.

/// Strongly connected components of a digraph given as adjacency lists.
///
/// Components are returned in reverse topological order of the condensation
/// (Tarjan's order): a component only has edges into components that appear
/// earlier in the list. Vertices inside a component are sorted.
pub fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;

    // (vertex, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let (v, pos) = *top;
            if pos < adj[v].len() {
                top.1 += 1;
                let w = adj[v][pos];
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Component id of every vertex, indexed like `comps`.
pub fn component_ids(n: usize, comps: &[Vec<usize>]) -> Vec<usize> {
    let mut id = vec![0; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            id[v] = c;
        }
    }
    id
}

/// Components with no edge leaving them.
pub fn terminal_components(adj: &[Vec<usize>], comps: &[Vec<usize>]) -> Vec<usize> {
    let id = component_ids(adj.len(), comps);
    (0..comps.len())
        .filter(|&c| comps[c].iter().all(|&v| adj[v].iter().all(|&w| id[w] == c)))
        .collect()
}

/// True when the component carries at least one cycle (more than one vertex,
/// or a self-loop).
pub fn has_cycle(adj: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || adj[comp[0]].contains(&comp[0])
}

/// Vertices reachable from any vertex in `sources` (sources included).
pub fn reachable_from(adj: &[Vec<usize>], sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = Vec::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

pub fn reverse(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut rev = vec![Vec::new(); adj.len()];
    for (v, out) in adj.iter().enumerate() {
        for &w in out {
            rev[w].push(v);
        }
    }
    rev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_joined_by_a_bridge() {
        // 0 <-> 1 -> 2 <-> 3
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let comps = strongly_connected_components(&adj);
        assert_eq!(comps, vec![vec![2, 3], vec![0, 1]]);
        assert_eq!(terminal_components(&adj, &comps), vec![0]);
    }

    #[test]
    fn isolated_vertices_and_self_loops() {
        let adj = vec![vec![0], vec![]];
        let comps = strongly_connected_components(&adj);
        assert_eq!(comps.len(), 2);
        assert!(has_cycle(&adj, &[0]));
        assert!(!has_cycle(&adj, &[1]));
    }

    #[test]
    fn long_path_does_not_recurse() {
        let n = 100_000;
        let adj: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n]).collect();
        let comps = strongly_connected_components(&adj);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), n);
    }
}
