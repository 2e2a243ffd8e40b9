//! Recovering the face tree from the bare graph.
//!
//! Each region (a face of the partially rebuilt map and the vertices
//! strictly inside it) has a unique apex adjacent to the corners the family
//! attaches to. Removing the apex splits the rest of the region into one
//! component per nonempty child face.

use super::{Family, MapError, StackMap, VertexId};
use crate::tree::OrderedTree;

pub fn tree_from_map(m: &StackMap) -> Result<OrderedTree, MapError> {
    tree_from_graph(m.family(), m.n_vertices(), &m.edges())
}

/// Face tree of the stack map with vertices `0..n_vertices` (boundary
/// first) and the given undirected edges, or an error if the graph is not
/// a stack map of `family`.
pub fn tree_from_graph(
    family: Family,
    n_vertices: usize,
    edges: &[(VertexId, VertexId)],
) -> Result<OrderedTree, MapError> {
    let bad = |msg: String| MapError::NotAStackMap(msg);
    let nb = family.face_len();
    if n_vertices < nb {
        return Err(bad(format!("{n_vertices} vertices, boundary needs {nb}")));
    }
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n_vertices];
    for &(u, v) in edges {
        if u as usize >= n_vertices || v as usize >= n_vertices {
            return Err(MapError::BadVertex(u.max(v)));
        }
        if u == v {
            return Err(bad(format!("loop at {u}")));
        }
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        let before = a.len();
        a.dedup();
        if a.len() != before {
            return Err(bad("multiple edge".into()));
        }
    }
    let has = |u: VertexId, v: VertexId| adj[u as usize].binary_search(&v).is_ok();
    for i in 0..nb {
        let (u, v) = (i as VertexId, ((i + 1) % nb) as VertexId);
        if !has(u, v) {
            return Err(bad(format!("boundary edge {u}-{v} missing")));
        }
    }
    let n_internal = n_vertices - nb;
    let expected = nb + family.new_edges() * n_internal;
    if edges.len() != expected {
        return Err(bad(format!(
            "{} edges, a stack map with {n_internal} inner vertices has {expected}",
            edges.len()
        )));
    }

    let initial: [VertexId; 4] = match family {
        Family::Triangulation => [0, 1, 2, 0],
        Family::Quadrangulation => [1, 2, 3, 0],
    };
    let mut stamp = vec![0u32; n_vertices];
    let mut next_stamp = 1u32;
    let mut flags = Vec::with_capacity(1 + family.arity().degree() * n_internal);
    let mut stack: Vec<([VertexId; 4], Vec<VertexId>)> =
        vec![(initial, (nb as VertexId..n_vertices as VertexId).collect())];
    let mut queue = Vec::new();
    while let Some((corners, members)) = stack.pop() {
        if members.is_empty() {
            flags.push(false);
            continue;
        }
        flags.push(true);
        let required: &[VertexId] = match family {
            Family::Triangulation => &corners[..3],
            Family::Quadrangulation => &[corners[1], corners[3]],
        };
        let mut apex = None;
        for &v in &members {
            if required.iter().all(|&c| has(v, c)) {
                if apex.is_some() {
                    return Err(bad(format!("two apex candidates in face {corners:?}")));
                }
                apex = Some(v);
            }
        }
        let x = apex.ok_or_else(|| bad(format!("no vertex adjacent to all of {required:?}")))?;

        let s = next_stamp;
        next_stamp += 1;
        for &v in &members {
            stamp[v as usize] = s;
        }
        stamp[x as usize] = 0;
        let d = family.arity().degree();
        let mut parts: Vec<Option<Vec<VertexId>>> = vec![None; d];
        for &start in &members {
            if stamp[start as usize] != s {
                continue;
            }
            stamp[start as usize] = 0;
            queue.clear();
            queue.push(start);
            let mut head = 0;
            while head < queue.len() {
                let v = queue[head];
                head += 1;
                for &u in &adj[v as usize] {
                    if stamp[u as usize] == s {
                        stamp[u as usize] = 0;
                        queue.push(u);
                    }
                }
            }
            let touches = |c: VertexId| queue.iter().any(|&v| has(v, c));
            let slot = match family {
                Family::Triangulation => {
                    let t: Vec<bool> = corners[..3].iter().map(|&c| touches(c)).collect();
                    match t.as_slice() {
                        [false, true, true] => 0,
                        [true, false, true] => 1,
                        [true, true, false] => 2,
                        _ => return Err(bad(format!("component touching {t:?} of {corners:?}"))),
                    }
                }
                Family::Quadrangulation => match (touches(corners[0]), touches(corners[2])) {
                    (true, false) => 0,
                    (false, true) => 1,
                    other => {
                        return Err(bad(format!("component touching {other:?} of {corners:?}")))
                    }
                },
            };
            if parts[slot].is_some() {
                return Err(bad(format!(
                    "two components in child {} of {corners:?}",
                    slot + 1
                )));
            }
            parts[slot] = Some(queue.clone());
        }
        let children: Vec<[VertexId; 4]> = match family {
            Family::Triangulation => (0..3)
                .map(|i| {
                    let mut c = corners;
                    c[i] = x;
                    c
                })
                .collect(),
            Family::Quadrangulation => {
                let [p1, p2, p3, p4] = corners;
                vec![[p2, x, p4, p1], [p2, x, p4, p3]]
            }
        };
        for (c, part) in children.into_iter().zip(parts).rev() {
            stack.push((c, part.unwrap_or_default()));
        }
    }
    OrderedTree::from_preorder(family.arity(), flags).map_err(|e| bad(e.to_string()))
}
