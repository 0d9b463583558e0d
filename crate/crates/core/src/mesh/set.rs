use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{dist, dist_to_segment, Point};

/// A compact set `E` made of finitely many points and segments.
///
/// Text form, one item per line, `#` starts a comment:
///
/// ```text
/// point 0 0
/// union
///   segment -0.5 0 0.5 0
///   point 0.3 0.3
/// end
/// ```
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SetDescriptor {
    pub points: Vec<Point>,
    pub segments: Vec<[Point; 2]>,
}

impl SetDescriptor {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn point(x: Point) -> Self {
        SetDescriptor { points: vec![x], segments: Vec::new() }
    }

    pub fn segment(a: Point, b: Point) -> Self {
        SetDescriptor { points: Vec::new(), segments: vec![[a, b]] }
    }

    pub fn union(mut self, other: SetDescriptor) -> Self {
        self.points.extend(other.points);
        self.segments.extend(other.segments);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.segments.is_empty()
    }

    /// True when the set is a finite union of points.
    pub fn is_point_like(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn distance(&self, x: Point) -> f64 {
        let p = self.points.iter().map(|&y| dist(x, y));
        let s = self.segments.iter().map(|[a, b]| dist_to_segment(x, *a, *b));
        p.chain(s).fold(f64::INFINITY, f64::min)
    }

    /// Points of `E` at spacing at most `spacing` along every segment,
    /// endpoints included.
    pub fn samples(&self, spacing: f64) -> Vec<Point> {
        let mut out = self.points.clone();
        for [a, b] in &self.segments {
            let len = dist(*a, *b);
            let n = ((len / spacing).ceil() as usize).max(1);
            for k in 0..=n {
                let t = k as f64 / n as f64;
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        out
    }

    /// Total length of the segments.
    pub fn length(&self) -> f64 {
        self.segments.iter().map(|[a, b]| dist(*a, *b)).sum()
    }
}

fn parse_floats(words: &[&str], n: usize, line: usize) -> Result<Vec<f64>> {
    if words.len() != n {
        return Err(Error::Parse { line, message: format!("expected {n} coordinates, found {}", words.len()) });
    }
    words
        .iter()
        .map(|w| {
            let v: f64 = w.parse().map_err(|_| Error::Parse { line, message: format!("bad number `{w}`") })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse { line, message: format!("non-finite coordinate `{w}`") })
            }
        })
        .collect()
}

impl FromStr for SetDescriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut set = SetDescriptor::empty();
        let mut depth = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            // allow `;` as a line separator so descriptors fit on one config line
            for item in content.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let words: Vec<&str> = item.split_whitespace().collect();
                match words[0] {
                    "point" => {
                        let v = parse_floats(&words[1..], 2, line)?;
                        set.points.push([v[0], v[1]]);
                    }
                    "segment" => {
                        let v = parse_floats(&words[1..], 4, line)?;
                        set.segments.push([[v[0], v[1]], [v[2], v[3]]]);
                    }
                    "union" if words.len() == 1 => depth += 1,
                    "end" if words.len() == 1 => {
                        depth = depth
                            .checked_sub(1)
                            .ok_or_else(|| Error::Parse { line, message: "`end` without `union`".into() })?;
                    }
                    other => return Err(Error::Parse { line, message: format!("unknown item `{other}`") }),
                }
            }
        }
        if depth != 0 {
            return Err(Error::Parse { line: text.lines().count(), message: "unterminated `union` block".into() });
        }
        Ok(set)
    }
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let r = if first { Ok(()) } else { f.write_str("; ") };
            first = false;
            r
        };
        for p in &self.points {
            sep(f)?;
            write!(f, "point {} {}", p[0], p[1])?;
        }
        for [a, b] in &self.segments {
            sep(f)?;
            write!(f, "segment {} {} {} {}", a[0], a[1], b[0], b[1])?;
        }
        Ok(())
    }
}

impl Serialize for SetDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SetDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
