//! Support-graph diagnostic.
//!
//! Vertices are pairs `(coordinate, symbol)` of positive marginal mass; two
//! vertices on different coordinates are joined when the pair has positive
//! joint mass. A distribution passes when every connected component is
//! complete multipartite (parts = coordinates) and, within a component, all
//! vertices, all edges and all triangles carry the same mass.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use super::JointDistribution;
use crate::error::{Error, Result};
use crate::setfn::Subset;

type Vertex = (usize, u32);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentReport {
    pub vertices: Vec<Vertex>,
    pub edges: usize,
    pub complete_multipartite: bool,
    pub equal_vertex_masses: bool,
    pub equal_edge_masses: bool,
    pub equal_triangle_masses: bool,
}

impl ComponentReport {
    pub fn equal_masses(&self) -> bool {
        self.equal_vertex_masses && self.equal_edge_masses && self.equal_triangle_masses
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SupportGraphReport {
    pub coordinates: Vec<usize>,
    pub components: Vec<ComponentReport>,
}

impl SupportGraphReport {
    pub fn complete_multipartite(&self) -> bool {
        self.components.iter().all(|c| c.complete_multipartite)
    }

    pub fn equal_masses(&self) -> bool {
        self.components.iter().all(ComponentReport::equal_masses)
    }

    pub fn passes(&self) -> bool {
        self.complete_multipartite() && self.equal_masses()
    }
}

/// Diagnostic on the first `n - 1` coordinates (all of them when `n < 3`).
pub fn support_graph_diagnostic(d: &JointDistribution) -> SupportGraphReport {
    let n = d.n();
    let coords = if n >= 3 { n - 1 } else { n };
    support_graph_diagnostic_on(d, Subset((1u32 << coords) - 1)).expect("coordinates in range")
}

fn all_equal<'a>(mut it: impl Iterator<Item = &'a BigRational>) -> bool {
    match it.next() {
        Some(first) => it.all(|x| x == first),
        None => true,
    }
}

pub fn support_graph_diagnostic_on(
    d: &JointDistribution,
    coords: Subset,
) -> Result<SupportGraphReport> {
    d.ground().check(coords)?;
    if coords.is_empty() {
        return Err(Error::Invalid("no coordinates selected".into()));
    }
    let cs: Vec<usize> = coords.elements().collect();

    let mut vertex_mass: BTreeMap<Vertex, BigRational> = BTreeMap::new();
    let mut edge_mass: BTreeMap<(Vertex, Vertex), BigRational> = BTreeMap::new();
    let mut triangle_mass: BTreeMap<(Vertex, Vertex, Vertex), BigRational> = BTreeMap::new();
    for (x, p) in d.pmf() {
        let vs: Vec<Vertex> = cs.iter().map(|&c| (c, x[c - 1])).collect();
        for (i, &u) in vs.iter().enumerate() {
            *vertex_mass.entry(u).or_default() += p;
            for (j, &v) in vs.iter().enumerate().skip(i + 1) {
                *edge_mass.entry((u, v)).or_default() += p;
                for &w in &vs[j + 1..] {
                    *triangle_mass.entry((u, v, w)).or_default() += p;
                }
            }
        }
    }

    let vertices: Vec<Vertex> = vertex_mass.keys().copied().collect();
    let index: BTreeMap<Vertex, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (u, v) in edge_mass.keys() {
        let (a, b) = (find(&mut parent, index[u]), find(&mut parent, index[v]));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for (i, &v) in vertices.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(v);
    }

    let components = groups
        .into_values()
        .map(|members| {
            let inside = |v: &Vertex| members.binary_search(v).is_ok();
            let edges: Vec<&BigRational> = edge_mass
                .iter()
                .filter(|((u, _), _)| inside(u))
                .map(|(_, p)| p)
                .collect();
            let complete = members.iter().enumerate().all(|(i, u)| {
                members[i + 1..]
                    .iter()
                    .all(|v| u.0 == v.0 || edge_mass.contains_key(&(*u, *v)))
            });
            ComponentReport {
                edges: edges.len(),
                complete_multipartite: complete,
                equal_vertex_masses: all_equal(members.iter().map(|v| &vertex_mass[v])),
                equal_edge_masses: all_equal(edges.into_iter()),
                equal_triangle_masses: all_equal(
                    triangle_mass
                        .iter()
                        .filter(|((u, _, _), _)| inside(u))
                        .map(|(_, p)| p),
                ),
                vertices: members,
            }
        })
        .collect();
    Ok(SupportGraphReport {
        coordinates: cs,
        components,
    })
}
