//! The grid lattice `L_n^k = {0, .., n-1}^k` under the componentwise order.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Default cap on operations that enumerate every point of a grid.
///
/// `n^k` blows up quickly; anything that walks the whole lattice refuses
/// beyond this budget unless the caller overrides it explicitly.
pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 24;

/// Dimensions of a grid lattice: side length `n`, dimension `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridShape {
    n: u32,
    k: u32,
}

impl GridShape {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidShape { n, k });
        }
        Ok(GridShape { n, k })
    }

    /// Side length of each coordinate axis.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of coordinates.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.k as usize
    }

    /// Total number of points `n^k`, or `None` when it does not fit in `u128`.
    pub fn point_count(&self) -> Option<u128> {
        (self.n as u128).checked_pow(self.k)
    }

    /// Checks `n^k` against an enumeration budget, returning the count.
    pub fn enumerable(&self, budget: u64) -> Result<u64> {
        match self.point_count() {
            Some(points) if points <= budget as u128 => Ok(points as u64),
            Some(points) => Err(Error::BudgetExceeded {
                points,
                budget,
            }),
            None => Err(Error::BudgetExceeded {
                points: u128::MAX,
                budget,
            }),
        }
    }

    pub fn contains(&self, point: &Point) -> bool {
        point.coords().len() == self.dim() && point.coords().iter().all(|&c| c < self.n)
    }

    /// The least point `(0, .., 0)`.
    pub fn bottom(&self) -> Point {
        Point(vec![0; self.dim()])
    }

    /// The greatest point `(n-1, .., n-1)`.
    pub fn top(&self) -> Point {
        Point(vec![self.n - 1; self.dim()])
    }

    /// Position of `point` in the lexicographic enumeration of the grid.
    ///
    /// Only meaningful when `n^k` fits in `usize`; callers go through the
    /// enumeration budget first.
    pub fn lex_rank(&self, point: &Point) -> usize {
        debug_assert!(self.contains(point));
        point
            .coords()
            .iter()
            .fold(0usize, |acc, &c| acc * self.n as usize + c as usize)
    }

    /// Draws a uniformly random point of the grid.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        Point((0..self.dim()).map(|_| rng.gen_range(0..self.n)).collect())
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, k={}", self.n, self.k)
    }
}

/// A vertex of the grid: `k` coordinates, each in `[0, n-1]`.
///
/// Points are plain immutable values; two points are comparable under the
/// lattice order exactly when one dominates the other componentwise. The
/// derived `Ord` is the *lexicographic* order used for enumeration and
/// deterministic fixtures, not the lattice order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<u32>);

impl Point {
    /// Builds a point and validates it against `shape`.
    pub fn new(coords: Vec<u32>, shape: GridShape) -> Result<Self> {
        if coords.len() != shape.dim() {
            return Err(Error::InvalidPoint {
                shape,
                reason: format!("expected {} coordinates, got {}", shape.k(), coords.len()),
            });
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= shape.n()) {
            return Err(Error::InvalidPoint {
                shape,
                reason: format!("coordinate {c} out of range [0, {}]", shape.n() - 1),
            });
        }
        Ok(Point(coords))
    }

    /// Builds a point without a shape check; coordinates are validated
    /// wherever the point meets a shape-aware operation.
    pub fn from_coords(coords: Vec<u32>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Copy of this point with coordinate `i` replaced by `value`.
    pub fn with(&self, i: usize, value: u32) -> Point {
        let mut coords = self.0.clone();
        coords[i] = value;
        Point(coords)
    }

    /// Componentwise order: `self <= other` iff every coordinate is.
    pub fn leq(&self, other: &Point) -> bool {
        assert_eq!(self.len(), other.len(), "points of mismatched dimension");
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Point) -> Point {
        assert_eq!(self.len(), other.len(), "points of mismatched dimension");
        Point(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Point) -> Point {
        assert_eq!(self.len(), other.len(), "points of mismatched dimension");
        Point(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Componentwise median with the box corners: clamps `self` into `[lo, hi]`.
    pub fn clamp_to_box(&self, lo: &Point, hi: &Point) -> Result<Point> {
        if !lo.leq(hi) {
            return Err(Error::InvalidBox);
        }
        assert_eq!(self.len(), lo.len(), "points of mismatched dimension");
        Ok(Point(
            self.0
                .iter()
                .zip(lo.0.iter().zip(&hi.0))
                .map(|(&v, (&l, &h))| v.clamp(l, h))
                .collect(),
        ))
    }
}

impl fmt::Display for Point {
    /// Text form used by CLI flags and files: comma-separated coordinates.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let coords = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|e| format!("bad coordinate {part:?}: {e}"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if coords.is_empty() {
            return Err("empty point".to_string());
        }
        Ok(Point(coords))
    }
}

/// Yields every point of the grid exactly once, in lexicographic order,
/// subject to the default enumeration budget.
pub fn iterate_points(shape: GridShape) -> Result<PointIter> {
    iterate_points_budgeted(shape, DEFAULT_ENUM_BUDGET)
}

/// [`iterate_points`] with an explicit budget.
pub fn iterate_points_budgeted(shape: GridShape, budget: u64) -> Result<PointIter> {
    let remaining = shape.enumerable(budget)?;
    Ok(PointIter {
        shape,
        next: Some(shape.bottom()),
        remaining,
    })
}

/// Lexicographic odometer over a grid.
pub struct PointIter {
    shape: GridShape,
    next: Option<Point>,
    remaining: u64,
}

impl Iterator for PointIter {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let current = self.next.take()?;
        self.remaining -= 1;
        let mut succ = current.clone();
        for i in (0..self.shape.dim()).rev() {
            if succ.0[i] + 1 < self.shape.n() {
                succ.0[i] += 1;
                self.next = Some(succ);
                return Some(current);
            }
            succ.0[i] = 0;
        }
        // Odometer wrapped: `current` was the top point.
        Some(current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = if self.next.is_some() {
            self.remaining as usize
        } else {
            0
        };
        (left, Some(left))
    }
}

impl ExactSizeIterator for PointIter {}
