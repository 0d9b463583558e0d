use std::io::{BufRead, Write};
use std::sync::Arc;

use super::{DiscreteDomain, Shape};
use crate::error::{Error, Result};

/// Writes the plain-text exchange format. Floats use the shortest
/// representation that parses back to the same bits.
pub fn write_mesh<W: Write>(domain: &DiscreteDomain, mut out: W) -> Result<()> {
    writeln!(out, "nodes {}", domain.num_nodes())?;
    for (i, x) in domain.nodes().iter().enumerate() {
        writeln!(out, "{i} {:?} {:?}", x[0], x[1])?;
    }
    writeln!(out, "triangles {}", domain.num_triangles())?;
    for (t, [a, b, c]) in domain.triangles().iter().enumerate() {
        writeln!(out, "{t} {a} {b} {c}")?;
    }
    writeln!(out, "boundary {}", domain.boundary_nodes().len())?;
    for i in domain.boundary_nodes() {
        writeln!(out, "{i}")?;
    }
    writeln!(out, "excluded {}", domain.excluded_nodes().len())?;
    for i in domain.excluded_nodes() {
        writeln!(out, "{i}")?;
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_words(&mut self) -> Result<Option<Vec<String>>> {
        loop {
            match self.inner.next() {
                None => return Ok(None),
                Some(l) => {
                    self.line += 1;
                    let l = l?;
                    let t = l.trim();
                    if !t.is_empty() {
                        return Ok(Some(t.split_whitespace().map(str::to_owned).collect()));
                    }
                }
            }
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, message: message.into() }
    }

    fn header(&mut self, name: &str) -> Result<usize> {
        let words = self.next_words()?.ok_or_else(|| self.err(format!("missing `{name}` section")))?;
        if words.len() != 2 || words[0] != name {
            return Err(self.err(format!("expected `{name} <count>`")));
        }
        words[1].parse().map_err(|_| self.err("bad count"))
    }

    fn row<T: std::str::FromStr>(&mut self, index: usize, width: usize) -> Result<Vec<T>> {
        let words = self.next_words()?.ok_or_else(|| self.err("unexpected end of file"))?;
        if words.len() != width + 1 || words[0].parse::<usize>().ok() != Some(index) {
            return Err(self.err(format!("expected row {index} with {width} entries")));
        }
        words[1..].iter().map(|w| w.parse().map_err(|_| self.err(format!("bad entry `{w}`")))).collect()
    }

    fn index(&mut self) -> Result<usize> {
        let words = self.next_words()?.ok_or_else(|| self.err("unexpected end of file"))?;
        if words.len() != 1 {
            return Err(self.err("expected a single index"));
        }
        words[0].parse().map_err(|_| self.err(format!("bad index `{}`", words[0])))
    }
}

/// Reads the exchange format. The boundary section must agree with the
/// boundary implied by the triangles.
pub fn read_mesh<R: BufRead>(input: R) -> Result<Arc<DiscreteDomain>> {
    let mut lines = Lines { inner: input.lines(), line: 0 };
    let n = lines.header("nodes")?;
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let v: Vec<f64> = lines.row(i, 2)?;
        nodes.push([v[0], v[1]]);
    }
    let m = lines.header("triangles")?;
    let mut triangles = Vec::with_capacity(m);
    for t in 0..m {
        let v: Vec<usize> = lines.row(t, 3)?;
        triangles.push([v[0], v[1], v[2]]);
    }
    let k = lines.header("boundary")?;
    let boundary = (0..k).map(|_| lines.index()).collect::<Result<Vec<_>>>()?;
    let e = lines.header("excluded")?;
    let excluded = (0..e).map(|_| lines.index()).collect::<Result<Vec<_>>>()?;
    if lines.next_words()?.is_some() {
        return Err(lines.err("trailing content after `excluded` section"));
    }
    let domain = DiscreteDomain::from_parts(Shape::Imported, nodes, triangles)?;
    let mut sorted = boundary.clone();
    sorted.sort_unstable();
    if sorted != domain.boundary_nodes() {
        return Err(Error::Geometry("boundary section disagrees with the triangulation".into()));
    }
    Ok(Arc::new(domain.with_excluded_nodes(excluded)?))
}
