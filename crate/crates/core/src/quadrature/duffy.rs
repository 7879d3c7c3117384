// SPDX-License-Identifier: Apache-2.0

//! Duffy-type rules for triangles with a point singularity at a vertex.
//!
//! A triangle with apex at the origin and opposite edge P→Q is parameterized
//! as `u (P + v (Q − P))` for `(u, v) ∈ [0, 1]²`, with area element
//! `u |det(P, Q − P)| du dv`. The factor `u` cancels a 1/r singularity at
//! the apex.

use super::gauss::GaussLegendre;

/// Points of a mapped triangle grouped by the Duffy coordinate `u`. Each
/// line runs parallel to the edge opposite the apex.
#[derive(Clone, Debug, PartialEq)]
pub struct ApexLine {
    pub u: f64,
    /// ([x, y], weight)
    pub nodes: Vec<([f64; 2], f64)>,
}

/// Tensor Gauss–Legendre rule with `qn²` nodes on the triangle with apex at
/// the origin and opposite edge from `p` to `q`.
pub fn apex_triangle(p: [f64; 2], q: [f64; 2], qn: usize) -> Vec<ApexLine> {
    let gl = GaussLegendre::cached(qn);
    let e = [q[0] - p[0], q[1] - p[1]];
    let area2 = (p[0] * e[1] - p[1] * e[0]).abs();
    gl.on_interval(0.0, 1.0)
        .map(|(u, wu)| ApexLine {
            u,
            nodes: gl
                .on_interval(0.0, 1.0)
                .map(|(v, wv)| {
                    let point = [u * (p[0] + v * e[0]), u * (p[1] + v * e[1])];
                    (point, wu * wv * u * area2)
                })
                .collect(),
        })
        .collect()
}

/// Rule on the reference triangle (0,0)-(0,1)-(1,1):
/// `∫_T ψ dA = ∫∫ ψ(uv, u) u dv du`.
pub fn duffy_triangle_rule(qn: usize) -> Vec<([f64; 2], f64)> {
    apex_triangle([0.0, 1.0], [1.0, 1.0], qn)
        .into_iter()
        .flat_map(|line| line.nodes)
        .collect()
}

/// The six triangles tiling [-1, 1]² around the origin, as (P, Q) edges:
/// two on the top side, the right side, two on the bottom side and the left
/// side. Each lies within one half `x ≤ 0` or `x ≥ 0`.
pub const SQUARE_TRIANGLES: [([f64; 2], [f64; 2]); 6] = [
    ([-1.0, 1.0], [0.0, 1.0]),
    ([0.0, 1.0], [1.0, 1.0]),
    ([1.0, 1.0], [1.0, -1.0]),
    ([1.0, -1.0], [0.0, -1.0]),
    ([0.0, -1.0], [-1.0, -1.0]),
    ([-1.0, -1.0], [-1.0, 1.0]),
];
