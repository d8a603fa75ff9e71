//! Points, point sets and open axis-parallel boxes in the unit cube.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of `[0,1]^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        for (axis, c) in coords.iter().enumerate() {
            if !c.is_finite() || *c < T::zero() || *c > T::one() {
                return Err(Error::CoordinateOutOfRange {
                    axis,
                    value: c.to_f64(),
                });
            }
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn coord(&self, axis: usize) -> &T {
        &self.coords[axis]
    }

    pub fn cast<U: Scalar>(&self) -> Point<U> {
        Point {
            coords: self.coords.iter().map(|c| U::from_f64(c.to_f64())).collect(),
        }
    }
}

/// A finite sequence of points sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<T> {
    dim: usize,
    points: Vec<Point<T>>,
    provenance: String,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(dim: usize, points: Vec<Point<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: p.dim(),
            });
        }
        Ok(PointSet {
            dim,
            points,
            provenance: String::new(),
        })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    /// Builds a set from raw coordinate rows, validating each.
    pub fn from_rows(dim: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let points = rows.into_iter().map(Point::new).collect::<Result<Vec<_>>>()?;
        Self::new(dim, points)
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn push(&mut self, p: Point<T>) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: p.dim(),
            });
        }
        self.points.push(p);
        Ok(())
    }

    pub fn cast<U: Scalar>(&self) -> PointSet<U> {
        PointSet {
            dim: self.dim,
            points: self.points.iter().map(Point::cast).collect(),
            provenance: self.provenance.clone(),
        }
    }
}

/// The open box `prod (lo[i], hi[i])`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBox<T> {
    lo: Vec<T>,
    hi: Vec<T>,
}

impl<T: Scalar> AxisBox<T> {
    /// Rejects degenerate or out-of-cube bounds.
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                actual: hi.len(),
            });
        }
        for (axis, (l, h)) in lo.iter().zip(&hi).enumerate() {
            let ok = l.is_finite() && h.is_finite() && *l >= T::zero() && l < h && *h <= T::one();
            if !ok {
                return Err(Error::InvalidBox {
                    axis,
                    lo: l.to_f64(),
                    hi: h.to_f64(),
                });
            }
        }
        Ok(AxisBox { lo, hi })
    }

    /// The whole open cube `(0,1)^d`.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(vec![T::zero(); dim], vec![T::one(); dim])
    }

    /// Assembles a box from bounds already known to be valid.
    pub(crate) fn from_parts_unchecked(lo: Vec<T>, hi: Vec<T>) -> Self {
        debug_assert!(lo.iter().zip(&hi).all(|(l, h)| l < h));
        AxisBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[T] {
        &self.lo
    }

    pub fn hi(&self) -> &[T] {
        &self.hi
    }

    pub fn volume(&self) -> T {
        box_volume(self)
    }

    pub fn contains(&self, x: &Point<T>) -> Result<bool> {
        box_contains(self, x)
    }

    /// Cartesian product `self x other` in dimension `d1 + d2`.
    pub fn product(&self, other: &AxisBox<T>) -> AxisBox<T> {
        let lo = self.lo.iter().chain(&other.lo).cloned().collect();
        let hi = self.hi.iter().chain(&other.hi).cloned().collect();
        AxisBox { lo, hi }
    }

    pub fn cast<U: Scalar>(&self) -> Result<AxisBox<U>> {
        AxisBox::new(
            self.lo.iter().map(|c| U::from_f64(c.to_f64())).collect(),
            self.hi.iter().map(|c| U::from_f64(c.to_f64())).collect(),
        )
    }

    /// Order on the concatenated `(lo, hi)` vector, used to break volume ties.
    pub fn lex_cmp(&self, other: &AxisBox<T>) -> Ordering {
        self.lo
            .iter()
            .chain(&self.hi)
            .zip(other.lo.iter().chain(&other.hi))
            .map(|(a, b)| a.partial_cmp(b).unwrap_or(Ordering::Equal))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// `prod (hi[i] - lo[i])`; exact for exact scalar types.
pub fn box_volume<T: Scalar>(b: &AxisBox<T>) -> T {
    b.lo
        .iter()
        .zip(&b.hi)
        .fold(T::one(), |acc, (l, h)| acc * (h.clone() - l.clone()))
}

/// Strict containment: a point on any face is outside the open box.
pub fn box_contains<T: Scalar>(b: &AxisBox<T>, x: &Point<T>) -> Result<bool> {
    if b.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            actual: x.dim(),
        });
    }
    Ok(contains_unchecked(b, x))
}

#[inline]
pub(crate) fn contains_unchecked<T: Scalar>(b: &AxisBox<T>, x: &Point<T>) -> bool {
    b.lo
        .iter()
        .zip(&b.hi)
        .zip(x.coords())
        .all(|((l, h), c)| l < c && c < h)
}

/// Outcome of an emptiness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    /// Index of one point lying inside the box.
    Blocked(usize),
}

impl Emptiness {
    pub fn is_empty(self) -> bool {
        matches!(self, Emptiness::Empty)
    }
}

pub fn box_is_empty<T: Scalar>(b: &AxisBox<T>, xs: &PointSet<T>) -> Result<Emptiness> {
    if b.dim() != xs.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            actual: xs.dim(),
        });
    }
    Ok(xs
        .points()
        .iter()
        .position(|x| contains_unchecked(b, x))
        .map_or(Emptiness::Empty, Emptiness::Blocked))
}
