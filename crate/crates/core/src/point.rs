//! Scattered evaluation points and sampling regions.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// A point in space-time; `t` is 0 for static problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimePoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl SpaceTimePoint {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }

    /// Static (t = 0) point.
    pub fn spatial(x: f64, y: f64) -> Self {
        Self { x, y, t: 0.0 }
    }
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    /// True when `other` lies entirely inside `self`.
    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.x_min >= self.x_min
            && other.x_max <= self.x_max
            && other.y_min >= self.y_min
            && other.y_max <= self.y_max
    }
}

/// A sampling region: a spatial rectangle, optionally extended by a time
/// interval for dynamic problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub rect: Rect,
    /// `Some((t0, t1))` samples t uniformly in `[t0, t1]`; `None` pins t = 0.
    pub time: Option<(f64, f64)>,
}

impl Region {
    pub fn spatial(rect: Rect) -> Self {
        Self { rect, time: None }
    }

    pub fn space_time(rect: Rect, t0: f64, t1: f64) -> Self {
        Self {
            rect,
            time: Some((t0, t1)),
        }
    }

    /// Space(-time) measure: area, times the time-span for dynamic regions.
    pub fn measure(&self) -> f64 {
        match self.time {
            Some((t0, t1)) => self.rect.area() * (t1 - t0),
            None => self.rect.area(),
        }
    }

    pub fn contains(&self, p: &SpaceTimePoint) -> bool {
        let t_ok = match self.time {
            Some((t0, t1)) => p.t >= t0 && p.t <= t1,
            None => p.t == 0.0,
        };
        t_ok && self.rect.contains(p.x, p.y)
    }

    /// True when `other` is contained in `self` (spatially and in time).
    pub fn contains_region(&self, other: &Region) -> bool {
        let t_ok = match (self.time, other.time) {
            (Some((a0, a1)), Some((b0, b1))) => b0 >= a0 && b1 <= a1,
            (Some((a0, a1)), None) => a0 <= 0.0 && a1 >= 0.0,
            (None, Some(_)) => false,
            (None, None) => true,
        };
        t_ok && self.rect.contains_rect(&other.rect)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.rect.area() > 0.0) {
            return Err(CoreError::DegenerateRegion);
        }
        if let Some((t0, t1)) = self.time {
            if !(t1 > t0) {
                return Err(CoreError::DegenerateRegion);
            }
        }
        Ok(())
    }
}
