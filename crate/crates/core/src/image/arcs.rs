//! Finite unions of closed arcs on the circle of directions.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// A closed arc running counter-clockwise from `start` for `len` radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub len: f64,
}

impl Arc {
    pub fn end(&self) -> f64 {
        self.start + self.len
    }

    pub fn mid(&self) -> f64 {
        wrap(self.start + self.len / 2.0)
    }

    pub fn contains(&self, angle: f64) -> bool {
        (angle - self.start).rem_euclid(TAU) <= self.len
    }

    /// Distance from `angle` to the nearer end of the arc, or 0 outside it.
    pub fn depth(&self, angle: f64) -> f64 {
        if !self.contains(angle) {
            return 0.0;
        }
        let from_start = (angle - self.start).rem_euclid(TAU);
        from_start.min(self.len - from_start)
    }
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Signed shortest rotation from `a` to `b`, in `(-pi, pi]`.
pub fn delta(a: f64, b: f64) -> f64 {
    wrap(b - a)
}

/// Disjoint sorted arcs, stored as intervals inside `[0, 2pi]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArcSet {
    spans: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self {
            spans: vec![(0.0, TAU)],
        }
    }

    /// Union of `arcs`, merging pieces closer than `tol`.
    pub fn from_arcs<I: IntoIterator<Item = Arc>>(arcs: I, tol: f64) -> Self {
        let mut spans = Vec::new();
        for a in arcs {
            if a.len >= TAU {
                return Self::full();
            }
            let (start, len) = if a.len < 0.0 {
                (a.start + a.len, -a.len)
            } else {
                (a.start, a.len)
            };
            let s = start.rem_euclid(TAU);
            let e = s + len;
            if e > TAU {
                spans.push((s, TAU));
                spans.push((0.0, e - TAU));
            } else {
                spans.push((s, e));
            }
        }
        Self::normalize(spans, tol)
    }

    pub fn from_points<I: IntoIterator<Item = f64>>(angles: I, tol: f64) -> Self {
        Self::from_arcs(angles.into_iter().map(|a| Arc { start: a, len: 0.0 }), tol)
    }

    fn normalize(mut spans: Vec<(f64, f64)>, tol: f64) -> Self {
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(spans.len());
        for (s, e) in spans {
            match out.last_mut() {
                Some(last) if s <= last.1 + tol => last.1 = last.1.max(e),
                _ => out.push((s, e)),
            }
        }
        // pieces touching across angle 0 stay split; `gaps` sees no gap there
        if let [only] = out[..] {
            if TAU - only.1 + only.0 <= tol {
                return Self::full();
            }
        }
        Self { spans: out }
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.gaps().is_empty() && !self.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.spans.iter().map(|(s, e)| e - s).sum()
    }

    pub fn contains(&self, angle: f64) -> bool {
        let a = angle.rem_euclid(TAU);
        self.spans.iter().any(|&(s, e)| s <= a && a <= e)
    }

    /// Uncovered arcs, in counter-clockwise order.
    pub fn gaps(&self) -> Vec<Arc> {
        if self.spans.is_empty() {
            return vec![Arc {
                start: 0.0,
                len: TAU,
            }];
        }
        let mut gaps = Vec::new();
        for w in self.spans.windows(2) {
            let len = w[1].0 - w[0].1;
            if len > 0.0 {
                gaps.push(Arc { start: w[0].1, len });
            }
        }
        let first = self.spans[0];
        let last = self.spans[self.spans.len() - 1];
        let wrap_len = TAU - last.1 + first.0;
        if wrap_len > 0.0 {
            gaps.push(Arc {
                start: last.1,
                len: wrap_len,
            });
        }
        gaps
    }

    /// Gaps longer than `min_len`.
    pub fn real_gaps(&self, min_len: f64) -> Vec<Arc> {
        self.gaps()
            .into_iter()
            .filter(|g| g.len > min_len)
            .collect()
    }

    pub fn largest_gap(&self) -> Option<Arc> {
        self.gaps()
            .into_iter()
            .max_by(|a, b| a.len.total_cmp(&b.len))
    }

    /// Covered arcs once gaps of length at most `min_gap` are closed.
    pub fn components(&self, min_gap: f64) -> Vec<Arc> {
        if self.spans.is_empty() {
            return Vec::new();
        }
        let gaps = self.real_gaps(min_gap);
        if gaps.is_empty() {
            return vec![Arc {
                start: 0.0,
                len: TAU,
            }];
        }
        let m = gaps.len();
        (0..m)
            .map(|i| {
                let g = gaps[i];
                let next = gaps[(i + 1) % m];
                let start = g.end().rem_euclid(TAU);
                let len = (next.start - start).rem_euclid(TAU);
                Arc { start, len }
            })
            .collect()
    }

    /// The set turned by `angle`.
    pub fn rotated(&self, angle: f64) -> Self {
        Self::from_arcs(
            self.spans.iter().map(|&(s, e)| Arc {
                start: s + angle,
                len: e - s,
            }),
            0.0,
        )
    }

    pub fn union(&self, other: &Self, tol: f64) -> Self {
        let spans = self.spans.iter().chain(&other.spans).cloned().collect();
        Self::normalize(spans, tol)
    }

    pub fn complement(&self) -> Self {
        if self.is_empty() {
            return Self::full();
        }
        Self::from_arcs(self.gaps(), 0.0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement()
            .union(&other.complement(), 0.0)
            .complement()
    }

    /// Arcs of the set as `(start, len)`, with arcs split at angle 0 rejoined.
    pub fn arcs(&self) -> Vec<Arc> {
        self.components(0.0)
    }
}
