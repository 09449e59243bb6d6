//! Versioned text format for marked meshes.
//!
//! ```text
//! harmonic-mesh 1
//! vertices 2
//! 0 0 0
//! 1 0 0.5
//! tets 1
//! 0 1 2 3
//! boundary_components 1
//! component 4
//! 1 2 3
//! ...
//! tunnel_loops 1
//! loop 4
//! 0 1 1
//! ...
//! cut_surfaces 1
//! surface 2
//! 0 1 5 -1
//! ...
//! end
//! ```
//!
//! Loop edges are `a b coeff` with `a < b`; surface faces are `a b c coeff`
//! with `a < b < c`. Coordinates use the shortest decimal that round-trips.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::meshgen::{EdgeChain, FaceChain, MarkedMesh, SignedEdge, SignedFace};

pub const FORMAT_NAME: &str = "harmonic-mesh";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_mesh(mesh: &MarkedMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{FORMAT_NAME} {FORMAT_VERSION}");
    let _ = writeln!(s, "vertices {}", mesh.vertices.len());
    for p in &mesh.vertices {
        let _ = writeln!(s, "{} {} {}", p[0], p[1], p[2]);
    }
    let _ = writeln!(s, "tets {}", mesh.tets.len());
    for t in &mesh.tets {
        let _ = writeln!(s, "{} {} {} {}", t[0], t[1], t[2], t[3]);
    }
    let _ = writeln!(s, "boundary_components {}", mesh.boundary_components.len());
    for c in &mesh.boundary_components {
        let _ = writeln!(s, "component {}", c.len());
        for f in c {
            let _ = writeln!(s, "{} {} {}", f[0], f[1], f[2]);
        }
    }
    let _ = writeln!(s, "tunnel_loops {}", mesh.tunnel_loops.len());
    for l in &mesh.tunnel_loops {
        let _ = writeln!(s, "loop {}", l.edges.len());
        for e in &l.edges {
            let _ = writeln!(s, "{} {} {}", e.vertices[0], e.vertices[1], e.coeff);
        }
    }
    let _ = writeln!(s, "cut_surfaces {}", mesh.cut_surfaces.len());
    for c in &mesh.cut_surfaces {
        let _ = writeln!(s, "surface {}", c.faces.len());
        for f in &c.faces {
            let [a, b, cc] = f.vertices;
            let _ = writeln!(s, "{a} {b} {cc} {}", f.coeff);
        }
    }
    s.push_str("end\n");
    s
}

pub fn save_mesh(mesh: &MarkedMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_mesh(mesh))?;
    Ok(())
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<MarkedMesh> {
    read_mesh(&std::fs::read_to_string(path)?)
}

struct Reader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

struct Tokens<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
}

impl<'a> Reader<'a> {
    fn next_line(&mut self) -> Result<Tokens<'a>> {
        for (i, text) in self.lines.by_ref() {
            self.line = i + 1;
            let mut items = Vec::new();
            let mut start = None;
            for (col, ch) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (true, Some(s)) => {
                        items.push((s + 1, &text[s..col]));
                        start = None;
                    }
                    (false, None) => start = Some(col),
                    _ => {}
                }
            }
            if !items.is_empty() {
                return Ok(Tokens { line: self.line, items });
            }
        }
        Err(Error::Parse {
            line: self.line + 1,
            column: 1,
            message: "unexpected end of file".into(),
        })
    }

    /// Reads `keyword count`.
    fn header(&mut self, keyword: &str) -> Result<usize> {
        let t = self.next_line()?;
        t.expect_len(2)?;
        if t.items[0].1 != keyword {
            return Err(t.error(0, format!("expected `{keyword}`, found `{}`", t.items[0].1)));
        }
        t.parse(1)
    }
}

impl Tokens<'_> {
    fn error(&self, i: usize, message: String) -> Error {
        Error::Parse {
            line: self.line,
            column: self.items.get(i).map_or(1, |t| t.0),
            message,
        }
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        if self.items.len() != n {
            let i = self.items.len().min(n);
            return Err(self.error(i, format!("expected {n} fields, found {}", self.items.len())));
        }
        Ok(())
    }

    fn parse<T: FromStr>(&self, i: usize) -> Result<T> {
        self.items[i]
            .1
            .parse()
            .map_err(|_| self.error(i, format!("invalid number `{}`", self.items[i].1)))
    }

    fn indices<const N: usize>(&self, nv: usize) -> Result<[usize; N]> {
        let mut out = [0; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.parse(i)?;
            if *o >= nv {
                return Err(self.error(i, format!("vertex {} out of range", *o)));
            }
        }
        Ok(out)
    }

    fn coeff(&self, i: usize) -> Result<i32> {
        let c: i32 = self.parse(i)?;
        if c == 0 {
            return Err(self.error(i, "zero coefficient".into()));
        }
        Ok(c)
    }
}

pub fn read_mesh(text: &str) -> Result<MarkedMesh> {
    let mut r = Reader {
        lines: text.lines().enumerate(),
        line: 0,
    };
    let head = r.next_line()?;
    head.expect_len(2)?;
    if head.items[0].1 != FORMAT_NAME {
        return Err(head.error(0, format!("expected `{FORMAT_NAME}` header")));
    }
    let version = head.items[1].1;
    if version.parse::<u32>().ok() != Some(FORMAT_VERSION) {
        return Err(Error::FormatVersionMismatch {
            found: version.to_string(),
            expected: FORMAT_VERSION,
        });
    }

    let nv = r.header("vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let t = r.next_line()?;
        t.expect_len(3)?;
        let p = [t.parse::<f64>(0)?, t.parse(1)?, t.parse(2)?];
        if let Some(i) = p.iter().position(|x| !x.is_finite()) {
            return Err(t.error(i, "non-finite coordinate".into()));
        }
        vertices.push(p);
    }
    let nt = r.header("tets")?;
    let mut tets = Vec::with_capacity(nt);
    for _ in 0..nt {
        let t = r.next_line()?;
        t.expect_len(4)?;
        tets.push(t.indices::<4>(nv)?);
    }
    let nc = r.header("boundary_components")?;
    let mut components = Vec::with_capacity(nc);
    for _ in 0..nc {
        let k = r.header("component")?;
        let mut faces = Vec::with_capacity(k);
        for _ in 0..k {
            let t = r.next_line()?;
            t.expect_len(3)?;
            faces.push(t.indices::<3>(nv)?);
        }
        components.push(faces);
    }
    let nl = r.header("tunnel_loops")?;
    let mut loops = Vec::with_capacity(nl);
    for _ in 0..nl {
        let k = r.header("loop")?;
        let mut edges = Vec::with_capacity(k);
        for _ in 0..k {
            let t = r.next_line()?;
            t.expect_len(3)?;
            let [a, b] = t.indices::<2>(nv)?;
            if a >= b {
                return Err(t.error(1, "edge vertices must be increasing".into()));
            }
            edges.push(SignedEdge {
                vertices: [a, b],
                coeff: t.coeff(2)?,
            });
        }
        loops.push(EdgeChain::new(edges));
    }
    let ns = r.header("cut_surfaces")?;
    let mut surfaces = Vec::with_capacity(ns);
    for _ in 0..ns {
        let k = r.header("surface")?;
        let mut faces = Vec::with_capacity(k);
        for _ in 0..k {
            let t = r.next_line()?;
            t.expect_len(4)?;
            let [a, b, c] = t.indices::<3>(nv)?;
            if !(a < b && b < c) {
                return Err(t.error(1, "face vertices must be increasing".into()));
            }
            faces.push(SignedFace {
                vertices: [a, b, c],
                coeff: t.coeff(3)?,
            });
        }
        surfaces.push(FaceChain::new(faces));
    }
    let end = r.next_line()?;
    if end.items[0].1 != "end" || end.items.len() != 1 {
        return Err(end.error(0, "expected `end`".into()));
    }
    MarkedMesh::new(vertices, tets, Some(components), loops, surfaces)
}

/// Plain-text cochain export, one `index value` pair per line.
pub fn write_cochain(values: &[f64]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(s, "{i} {v}");
    }
    s
}
