//! Planar helpers on complex points: convex hull, polyline distances, convexity.

use num_complex::Complex64;

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise convex hull (monotone chain). Collinear points are
/// dropped; one or two points are returned for degenerate inputs.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.iter().copied().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.is_empty() {
        hull.push(pts[0]);
    }
    hull
}

pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from `p` to the closed polyline through `poly`.
pub fn point_polyline_distance(p: Complex64, poly: &[Complex64]) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => (p - poly[0]).norm(),
        n => (0..n).map(|i| point_segment_distance(p, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min),
    }
}

fn densify(poly: &[Complex64], per_edge: usize) -> Vec<Complex64> {
    let n = poly.len();
    if n < 2 {
        return poly.to_vec();
    }
    let mut out = Vec::with_capacity(n * per_edge);
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        for k in 0..per_edge {
            out.push(a + (b - a) * (k as f64 / per_edge as f64));
        }
    }
    out
}

/// Hausdorff distance between two closed polylines, with edges sampled at
/// `per_edge` points.
pub fn hausdorff(a: &[Complex64], b: &[Complex64], per_edge: usize) -> f64 {
    let one_sided = |from: &[Complex64], to: &[Complex64]| {
        densify(from, per_edge.max(1)).iter().map(|&p| point_polyline_distance(p, to)).fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// True when all turns of the closed polyline have the same orientation,
/// ignoring cross products of magnitude at most `tol`.
pub fn is_convex(poly: &[Complex64], tol: f64) -> bool {
    let n = poly.len();
    if n < 3 {
        return true;
    }
    let (mut pos, mut neg) = (false, false);
    for i in 0..n {
        let cr = cross(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        if cr > tol {
            pos = true;
        } else if cr < -tol {
            neg = true;
        }
    }
    !(pos && neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hull_of_square_with_interior_points() {
        let pts = [z(0.0, 0.0), z(1.0, 0.0), z(1.0, 1.0), z(0.0, 1.0), z(0.5, 0.5), z(0.5, 0.0)];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!(is_convex(&h, 0.0));
        for p in pts {
            assert!(point_polyline_distance(p, &h) <= 0.5 + 1e-15);
        }
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(convex_hull(&[z(1.0, 0.0), z(1.0, 0.0)]), vec![z(1.0, 0.0)]);
        let seg = convex_hull(&[z(0.0, 0.0), z(0.5, 0.5), z(1.0, 1.0)]);
        assert_eq!(seg.len(), 2);
    }

    #[test]
    fn hausdorff_examples() {
        let sq = [z(0.0, 0.0), z(1.0, 0.0), z(1.0, 1.0), z(0.0, 1.0)];
        assert_eq!(hausdorff(&sq, &sq, 4), 0.0);
        let shifted: Vec<_> = sq.iter().map(|&p| p + z(0.25, 0.0)).collect();
        assert!((hausdorff(&sq, &shifted, 8) - 0.25).abs() < 1e-12);
        assert!((hausdorff(&[z(0.0, 0.0)], &[z(3.0, 4.0)], 1) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn detects_non_convex_polyline() {
        let dart = [z(0.0, 0.0), z(2.0, 1.0), z(0.0, 2.0), z(1.0, 1.0)];
        assert!(!is_convex(&dart, 1e-12));
    }
}
