//! Self-intersection test for closed polylines.

use num_complex::Complex64;

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b - a).im * (c - a).re - (b - a).re * (c - a).im
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re)
        && p.re <= a.re.max(b.re)
        && p.im >= a.im.min(b.im)
        && p.im <= a.im.max(b.im)
}

/// Whether closed segments `[p1, p2]` and `[q1, q2]` share a point.
pub fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Index pair of the first crossing found between non-adjacent edges of the
/// closed polyline through `points`, if any.
///
/// Edges are swept in order of their left end; only edges whose x-ranges
/// overlap are compared.
pub fn find_self_intersection(points: &[Complex64]) -> Option<(usize, usize)> {
    let n = points.len();
    if n < 4 {
        return None;
    }
    let seg = |i: usize| (points[i], points[(i + 1) % n]);
    let lo = |i: usize| {
        let (a, b) = seg(i);
        a.re.min(b.re)
    };
    let hi = |i: usize| {
        let (a, b) = seg(i);
        a.re.max(b.re)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lo(a).total_cmp(&lo(b)));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let x = lo(i);
        active.retain(|&j| hi(j) >= x);
        let (p1, p2) = seg(i);
        for &j in &active {
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            let (q1, q2) = seg(j);
            if segments_intersect(p1, p2, q1, q2) {
                return Some((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    None
}
