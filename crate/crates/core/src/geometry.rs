//! Plane geometry support: segment intersection, polygon winding and
//! containment, ear-clipping triangulation with uniform refinement.

/// Transverse intersection of segments (a1, a2) and (b1, b2).
/// Returns the parameters (s, t) in (0, 1) on each segment and the point.
pub fn segment_intersection(
    a1: [f64; 2],
    a2: [f64; 2],
    b1: [f64; 2],
    b2: [f64; 2],
) -> Option<(f64, f64, [f64; 2])> {
    let r = [a2[0] - a1[0], a2[1] - a1[1]];
    let s = [b2[0] - b1[0], b2[1] - b1[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    if denom.abs() < 1e-300 {
        return None;
    }
    let qp = [b1[0] - a1[0], b1[1] - a1[1]];
    let u = (qp[0] * s[1] - qp[1] * s[0]) / denom;
    let v = (qp[0] * r[1] - qp[1] * r[0]) / denom;
    let eps = 1e-12;
    if u > eps && u < 1.0 - eps && v > eps && v < 1.0 - eps {
        Some((u, v, [a1[0] + u * r[0], a1[1] + u * r[1]]))
    } else {
        None
    }
}

/// All transverse self-crossings of a polyline, excluding pairs of segments
/// closer than `window` along the index diagonal (and the wrap-around
/// adjacency when `closed`). Uses a uniform spatial grid, so the scan stays
/// near-linear for long non-crossing trajectories.
pub fn polyline_self_intersections(
    pts: &[[f64; 2]],
    closed: bool,
    window: usize,
) -> Vec<(usize, usize, [f64; 2])> {
    let n = pts.len();
    if n < 4 {
        return Vec::new();
    }
    let nseg = if closed { n } else { n - 1 };
    let seg = |i: usize| -> ([f64; 2], [f64; 2]) { (pts[i], pts[(i + 1) % n]) };

    // bounding box + cell size from mean segment length
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    let mut mean_len = 0.0;
    for i in 0..nseg {
        let (a, b) = seg(i);
        for d in 0..2 {
            lo[d] = lo[d].min(a[d].min(b[d]));
            hi[d] = hi[d].max(a[d].max(b[d]));
        }
        mean_len += ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    }
    mean_len /= nseg as f64;
    let cell = (mean_len * 2.0).max(1e-12);
    let nx = (((hi[0] - lo[0]) / cell).ceil() as usize + 1).min(4096);
    let ny = (((hi[1] - lo[1]) / cell).ceil() as usize + 1).min(4096);
    let cw = ((hi[0] - lo[0]) / nx as f64).max(1e-12);
    let ch = ((hi[1] - lo[1]) / ny as f64).max(1e-12);

    let mut grid: Vec<Vec<u32>> = vec![Vec::new(); nx * ny];
    let cells_of = |a: [f64; 2], b: [f64; 2]| -> (usize, usize, usize, usize) {
        let x0 = (((a[0].min(b[0]) - lo[0]) / cw) as usize).min(nx - 1);
        let x1 = (((a[0].max(b[0]) - lo[0]) / cw) as usize).min(nx - 1);
        let y0 = (((a[1].min(b[1]) - lo[1]) / ch) as usize).min(ny - 1);
        let y1 = (((a[1].max(b[1]) - lo[1]) / ch) as usize).min(ny - 1);
        (x0, x1, y0, y1)
    };
    for i in 0..nseg {
        let (a, b) = seg(i);
        let (x0, x1, y0, y1) = cells_of(a, b);
        for gx in x0..=x1 {
            for gy in y0..=y1 {
                grid[gy * nx + gx].push(i as u32);
            }
        }
    }

    let index_gap = |i: usize, j: usize| -> usize {
        let d = i.abs_diff(j);
        if closed {
            d.min(nseg - d)
        } else {
            d
        }
    };

    let mut found = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for i in 0..nseg {
        let (a, b) = seg(i);
        let (x0, x1, y0, y1) = cells_of(a, b);
        for gx in x0..=x1 {
            for gy in y0..=y1 {
                for &j32 in &grid[gy * nx + gx] {
                    let j = j32 as usize;
                    if j <= i || index_gap(i, j) <= window {
                        continue;
                    }
                    if !seen.insert((i, j)) {
                        continue;
                    }
                    let (c, d) = seg(j);
                    if let Some((_, _, p)) = segment_intersection(a, b, c, d) {
                        found.push((i, j, p));
                    }
                }
            }
        }
    }
    found.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    found
}

/// Winding number of a closed polyline around a point.
pub fn winding_number(p: [f64; 2], poly: &[[f64; 2]]) -> i32 {
    let n = poly.len();
    let mut w = 0i32;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if a[1] <= p[1] {
            if b[1] > p[1] && cross_about(p, a, b) > 0.0 {
                w += 1;
            }
        } else if b[1] <= p[1] && cross_about(p, a, b) < 0.0 {
            w -= 1;
        }
    }
    w
}

fn cross_about(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - p[0]) * (b[1] - p[1]) - (a[1] - p[1]) * (b[0] - p[0])
}

/// Signed area of a closed polyline (positive when counterclockwise).
pub fn polygon_signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

/// Distance from a point to a segment.
pub fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

#[derive(Clone, Copy, Debug)]
pub struct Triangle {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
}

impl Triangle {
    pub fn area(&self) -> f64 {
        0.5 * ((self.b[0] - self.a[0]) * (self.c[1] - self.a[1])
            - (self.b[1] - self.a[1]) * (self.c[0] - self.a[0]))
    }

    fn longest_edge_sq(&self) -> f64 {
        let e = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
        e(self.a, self.b).max(e(self.b, self.c)).max(e(self.c, self.a))
    }

    /// Bisect at the midpoint of the longest edge, preserving orientation.
    fn bisect_longest(&self) -> [Triangle; 2] {
        let e = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
        let ab = e(self.a, self.b);
        let bc = e(self.b, self.c);
        let ca = e(self.c, self.a);
        let m = |p: [f64; 2], q: [f64; 2]| [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
        if ab >= bc && ab >= ca {
            let mid = m(self.a, self.b);
            [
                Triangle { a: self.a, b: mid, c: self.c },
                Triangle { a: mid, b: self.b, c: self.c },
            ]
        } else if bc >= ca {
            let mid = m(self.b, self.c);
            [
                Triangle { a: self.a, b: self.b, c: mid },
                Triangle { a: self.a, b: mid, c: self.c },
            ]
        } else {
            let mid = m(self.c, self.a);
            [
                Triangle { a: self.a, b: self.b, c: mid },
                Triangle { a: mid, b: self.b, c: self.c },
            ]
        }
    }

    pub fn centroid(&self) -> [f64; 2] {
        [
            (self.a[0] + self.b[0] + self.c[0]) / 3.0,
            (self.a[1] + self.b[1] + self.c[1]) / 3.0,
        ]
    }

    /// Midpoints of the three edges (the degree-2 quadrature points).
    pub fn edge_midpoints(&self) -> [[f64; 2]; 3] {
        let m = |p: [f64; 2], q: [f64; 2]| [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
        [m(self.a, self.b), m(self.b, self.c), m(self.c, self.a)]
    }

    fn split4(&self) -> [Triangle; 4] {
        let [mab, mbc, mca] = self.edge_midpoints();
        [
            Triangle { a: self.a, b: mab, c: mca },
            Triangle { a: mab, b: self.b, c: mbc },
            Triangle { a: mca, b: mbc, c: self.c },
            Triangle { a: mab, b: mbc, c: mca },
        ]
    }
}

/// Ear-clipping triangulation of a simple polygon (counterclockwise).
pub fn ear_clip(poly: &[[f64; 2]]) -> Vec<Triangle> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut tris = Vec::with_capacity(poly.len().saturating_sub(2));
    let mut guard = 0usize;
    while idx.len() > 3 {
        let n = idx.len();
        let mut clipped = false;
        for k in 0..n {
            let ia = idx[(k + n - 1) % n];
            let ib = idx[k];
            let ic = idx[(k + 1) % n];
            let (a, b, c) = (poly[ia], poly[ib], poly[ic]);
            let cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            if cross <= 0.0 {
                continue; // reflex or degenerate corner
            }
            let mut empty = true;
            for &other in &idx {
                if other == ia || other == ib || other == ic {
                    continue;
                }
                if point_in_triangle(poly[other], a, b, c) {
                    empty = false;
                    break;
                }
            }
            if empty {
                tris.push(Triangle { a, b, c });
                idx.remove(k);
                clipped = true;
                break;
            }
        }
        if !clipped {
            guard += 1;
            if guard > 4 {
                break; // numerically stuck; emit what we have
            }
        }
    }
    if idx.len() == 3 {
        tris.push(Triangle {
            a: poly[idx[0]],
            b: poly[idx[1]],
            c: poly[idx[2]],
        });
    }
    tris
}

fn point_in_triangle(p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    let sign = |p1: [f64; 2], p2: [f64; 2], p3: [f64; 2]| {
        (p1[0] - p3[0]) * (p2[1] - p3[1]) - (p2[0] - p3[0]) * (p1[1] - p3[1])
    };
    let d1 = sign(p, a, b);
    let d2 = sign(p, b, c);
    let d3 = sign(p, c, a);
    let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(has_neg && has_pos)
}

/// Refine a triangulation by 4-splits until it reaches `target` triangles.
pub fn refine_to(mut tris: Vec<Triangle>, target: usize) -> Vec<Triangle> {
    if tris.is_empty() {
        return tris;
    }
    while tris.len() < target {
        let mut next = Vec::with_capacity(tris.len() * 4);
        for t in &tris {
            next.extend_from_slice(&t.split4());
        }
        tris = next;
    }
    tris
}

/// Refine toward `target` by longest-edge bisection, always splitting the
/// triangle with the longest edge. Bisection attacks slivers along their
/// long direction, so shape quality improves as the count grows; the heap
/// order is made deterministic with an insertion counter.
pub fn refine_to_selective(tris: Vec<Triangle>, target: usize) -> Vec<Triangle> {
    use std::cmp::Ordering;
    use std::collections::BinaryHeap;

    if tris.is_empty() {
        return tris;
    }

    struct Entry {
        key: f64,
        seq: u64,
        tri: Triangle,
    }
    impl PartialEq for Entry {
        fn eq(&self, other: &Self) -> bool {
            self.key == other.key && self.seq == other.seq
        }
    }
    impl Eq for Entry {}
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> Ordering {
            self.key
                .partial_cmp(&other.key)
                .unwrap_or(Ordering::Equal)
                .then(other.seq.cmp(&self.seq))
        }
    }

    let mut seq = 0u64;
    let mut heap: BinaryHeap<Entry> = tris
        .into_iter()
        .map(|tri| {
            seq += 1;
            Entry {
                key: tri.longest_edge_sq(),
                seq,
                tri,
            }
        })
        .collect();
    while heap.len() < target {
        let worst = heap.pop().expect("non-empty heap");
        for child in worst.tri.bisect_longest() {
            seq += 1;
            heap.push(Entry {
                key: child.longest_edge_sq(),
                seq,
                tri: child,
            });
        }
    }
    let mut out: Vec<(u64, Triangle)> = heap.into_iter().map(|e| (e.seq, e.tri)).collect();
    out.sort_by_key(|(s, _)| *s);
    out.into_iter().map(|(_, t)| t).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_polyline_has_no_crossings() {
        let pts: Vec<[f64; 2]> = (0..100).map(|i| [i as f64 * 0.1, 0.0]).collect();
        assert!(polyline_self_intersections(&pts, false, 1).is_empty());
    }

    #[test]
    fn lemniscate_crosses_once() {
        // Bernoulli lemniscate: one node at the origin
        let n = 400;
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                // offset keeps the node strictly inside a segment
                let t = (i as f64 + 0.37) / n as f64 * std::f64::consts::TAU;
                let d = 1.0 + t.sin() * t.sin();
                [t.cos() / d, t.sin() * t.cos() / d]
            })
            .collect();
        let hits = polyline_self_intersections(&pts, true, 2);
        assert_eq!(hits.len(), 1, "{hits:?}");
        let p = hits[0].2;
        assert!(p[0].abs() < 0.02 && p[1].abs() < 0.02);
    }

    #[test]
    fn closed_circle_has_no_crossings() {
        let n = 256;
        let pts: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64 * std::f64::consts::TAU;
                [t.cos(), t.sin()]
            })
            .collect();
        assert!(polyline_self_intersections(&pts, true, 2).is_empty());
    }

    #[test]
    fn winding_inside_and_outside() {
        let square = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        assert_eq!(winding_number([1.0, 1.0], &square), 1);
        assert_eq!(winding_number([3.0, 1.0], &square), 0);
    }

    #[test]
    fn ear_clip_preserves_area() {
        // non-convex L-shape
        let poly = [
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.0],
            [1.0, 1.0],
            [1.0, 2.0],
            [0.0, 2.0],
        ];
        let tris = ear_clip(&poly);
        let total: f64 = tris.iter().map(|t| t.area()).sum();
        assert!((total - 3.0).abs() < 1e-12);
        let refined = refine_to(tris, 500);
        let total: f64 = refined.iter().map(|t| t.area()).sum();
        assert!((total - 3.0).abs() < 1e-12);
        assert!(refined.len() >= 500);
    }
}
