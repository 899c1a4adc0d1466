use crate::geometry::Point;

/// Implicit kd-tree over integer points: the slice is reordered so that
/// every subrange `[lo, hi)` stores its splitting point at the midpoint.
#[derive(Clone, Debug)]
pub struct PointIndex {
    pts: Vec<Point>,
}

fn build(pts: &mut [Point], axis: usize) {
    if pts.len() <= 1 {
        return;
    }
    let mid = pts.len() / 2;
    pts.select_nth_unstable_by_key(mid, |p| p[axis]);
    let (left, right) = pts.split_at_mut(mid);
    build(left, (axis + 1) % 3);
    build(&mut right[1..], (axis + 1) % 3);
}

#[inline]
pub fn squared_distance(a: &Point, b: &Point) -> u64 {
    (0..3)
        .map(|i| {
            let d = (a[i] as i64 - b[i] as i64).unsigned_abs();
            d * d
        })
        .sum()
}

impl PointIndex {
    pub fn new(points: &[Point]) -> Self {
        let mut pts = points.to_vec();
        build(&mut pts, 0);
        PointIndex { pts }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Squared Euclidean distance from `q` to its nearest indexed point.
    pub fn nearest_squared_distance(&self, q: &Point) -> Option<u64> {
        if self.pts.is_empty() {
            return None;
        }
        let mut best = u64::MAX;
        self.search(&self.pts, 0, q, &mut best);
        Some(best)
    }

    fn search(&self, pts: &[Point], axis: usize, q: &Point, best: &mut u64) {
        if pts.is_empty() {
            return;
        }
        let mid = pts.len() / 2;
        let split = &pts[mid];
        *best = (*best).min(squared_distance(split, q));
        let diff = q[axis] as i64 - split[axis] as i64;
        let (near, far) = if diff < 0 { (&pts[..mid], &pts[mid + 1..]) } else { (&pts[mid + 1..], &pts[..mid]) };
        let next = (axis + 1) % 3;
        self.search(near, next, q, best);
        let plane = diff.unsigned_abs() * diff.unsigned_abs();
        if plane < *best {
            self.search(far, next, q, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_index_has_no_neighbour() {
        assert_eq!(PointIndex::new(&[]).nearest_squared_distance(&[0, 0, 0]), None);
    }

    #[test]
    fn matches_linear_scan() {
        let pts: Vec<Point> = (0..200).map(|i| [(i * 37) % 101, (i * 53) % 89, (i * 11) % 17]).collect();
        let index = PointIndex::new(&pts);
        for q in [[0, 0, 0], [50, 50, 8], [100, 3, 16], [-20, 200, 5]] {
            let brute = pts.iter().map(|p| squared_distance(p, &q)).min();
            assert_eq!(index.nearest_squared_distance(&q), brute);
        }
    }
}
