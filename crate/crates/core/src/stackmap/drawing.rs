//! Canonical straight-line drawing and SVG export.

use std::fmt::Write;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use super::{Family, StackMap};

pub type Point = [f64; 2];

pub fn boundary_coordinates(family: Family) -> Vec<Point> {
    match family {
        Family::Triangulation => vec![[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]],
        Family::Quadrangulation => vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
    }
}

/// Boundary at fixed corners, each internal vertex at the center of mass of
/// the face it was inserted in. Indexed by vertex id.
pub fn canonical_drawing(m: &StackMap) -> Vec<Point> {
    let mut pos = boundary_coordinates(m.family());
    for v in pos.len()..m.n_vertices() {
        let f = m.birth_face(v as u32).expect("internal vertex");
        let corners = m.face_vertices(f);
        let k = corners.len() as f64;
        let (sx, sy) = corners.iter().fold((0.0, 0.0), |(x, y), &c| {
            (x + pos[c as usize][0], y + pos[c as usize][1])
        });
        pos.push([sx / k, sy / k]);
    }
    pos
}

/// Drawing coordinates as exact integers over a common denominator. The
/// triangle is mapped affinely to `(0,0), (1,0), (0,1)`, which preserves
/// centroids and therefore crossings.
pub fn exact_drawing(m: &StackMap) -> Vec<[BigInt; 2]> {
    let k = m.family().face_len() as u32;
    let mut depth = vec![0u32; m.n_vertices()];
    for v in k as usize..m.n_vertices() {
        let f = m.birth_face(v as u32).expect("internal vertex");
        depth[v] = 1 + m
            .face_vertices(f)
            .iter()
            .map(|&c| depth[c as usize])
            .max()
            .unwrap_or(0);
    }
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    let scale = BigInt::from(k).pow(max_depth);
    let corner = |x: i32, y: i32| [BigInt::from(x) * &scale, BigInt::from(y) * &scale];
    let mut pos: Vec<[BigInt; 2]> = match m.family() {
        Family::Triangulation => vec![corner(0, 0), corner(1, 0), corner(0, 1)],
        Family::Quadrangulation => vec![corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)],
    };
    let kb = BigInt::from(k);
    for v in k as usize..m.n_vertices() {
        let f = m.birth_face(v as u32).expect("internal vertex");
        let mut sx = BigInt::zero();
        let mut sy = BigInt::zero();
        for &c in m.face_vertices(f) {
            sx += &pos[c as usize][0];
            sy += &pos[c as usize][1];
        }
        pos.push([sx / &kb, sy / &kb]);
    }
    pos
}

fn orient(a: &[BigInt; 2], b: &[BigInt; 2], c: &[BigInt; 2]) -> Sign {
    ((&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])).sign()
}

fn between(a: &[BigInt; 2], b: &[BigInt; 2], p: &[BigInt; 2]) -> bool {
    (0..2).all(|i| p[i] >= a[i].clone().min(b[i].clone()) && p[i] <= a[i].clone().max(b[i].clone()))
}

/// True when segments `ab` and `cd` meet anywhere other than at a shared
/// endpoint; collinear overlap counts as meeting.
pub fn segments_cross(a: &[BigInt; 2], b: &[BigInt; 2], c: &[BigInt; 2], d: &[BigInt; 2]) -> bool {
    let (s1, s2) = (orient(a, b, c), orient(a, b, d));
    let (s3, s4) = (orient(c, d, a), orient(c, d, b));
    if s1 == Sign::NoSign && s2 == Sign::NoSign {
        let axis = if (&b[0] - &a[0]).abs() >= (&b[1] - &a[1]).abs() {
            0
        } else {
            1
        };
        let lo = a[axis]
            .clone()
            .min(b[axis].clone())
            .max(c[axis].clone().min(d[axis].clone()));
        let hi = a[axis]
            .clone()
            .max(b[axis].clone())
            .min(c[axis].clone().max(d[axis].clone()));
        return hi > lo;
    }
    let opposite = |x: Sign, y: Sign| x != Sign::NoSign && y != Sign::NoSign && x != y;
    if opposite(s1, s2) && opposite(s3, s4) {
        return true;
    }
    let touch = |p: &[BigInt; 2], x: &[BigInt; 2], y: &[BigInt; 2], s: Sign| {
        s == Sign::NoSign && between(x, y, p) && p != x && p != y
    };
    touch(c, a, b, s1) || touch(d, a, b, s2) || touch(a, c, d, s3) || touch(b, c, d, s4)
}

/// Number of pairs of edges that meet outside a shared endpoint in the
/// canonical drawing, computed exactly.
pub fn count_crossings(m: &StackMap) -> usize {
    let pos = exact_drawing(m);
    let edges = m.edges();
    let mut n = 0;
    for i in 0..edges.len() {
        let (a, b) = edges[i];
        for &(c, d) in &edges[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if segments_cross(
                &pos[a as usize],
                &pos[b as usize],
                &pos[c as usize],
                &pos[d as usize],
            ) {
                n += 1;
            }
        }
    }
    n
}

/// Straight-line SVG of the drawing in a unit view box; the root edge is
/// drawn in red.
pub fn to_svg(m: &StackMap, pos: &[Point]) -> String {
    let margin = 0.02;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="800">"#,
        -margin,
        -margin,
        1.0 + 2.0 * margin,
        1.0 + 2.0 * margin
    );
    let y = |p: Point| 1.0 - p[1];
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="0.002" fill="none">"#);
    let root = m.root_edge();
    for (a, b) in m.edges() {
        if (a, b) == root {
            continue;
        }
        let (p, q) = (pos[a as usize], pos[b as usize]);
        let _ = writeln!(
            s,
            r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#,
            p[0],
            y(p),
            q[0],
            y(q)
        );
    }
    let _ = writeln!(s, "</g>");
    let (p, q) = (pos[root.0 as usize], pos[root.1 as usize]);
    let _ = writeln!(
        s,
        r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="red" stroke-width="0.006"/>"#,
        p[0],
        y(p),
        q[0],
        y(q)
    );
    s.push_str("</svg>\n");
    s
}
