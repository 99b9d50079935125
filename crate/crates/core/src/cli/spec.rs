//! Surface specification files.
//!
//! A specification is a TOML document with up to four sections. Every key
//! is checked; anything unrecognised is rejected by name.
//!
//! ```toml
//! [surface]
//! kind = "torus"          # sphere | ellipsoid | torus | graph_patch
//! major = 2.0             # torus: major, minor
//! minor = 1.0             # sphere: radius; ellipsoid: a, b, c
//!                         # graph_patch: radius (of the parameter disk)
//!
//! [polynomial]            # graph_patch only: height z = Σ cIJ x^I y^J
//! c20 = 1.0               # total degree I + J ≤ 4
//!
//! [quadrature]
//! level = 2               # fixed outer quadrature level (omit to refine)
//! tol = 1e-8
//!
//! [cutoff]
//! radius = 0.05           # cutoff radius for the continuation
//! circle_nodes = 64       # nodes on each circle of the spherical mean
//! ```
//!
//! Parameters are in the chart's natural units: lengths for radii, and
//! chart parameters (radians for the sphere, ellipsoid and torus; planar
//! coordinates for graph patches) for points given on the command line.

use std::collections::BTreeMap;
use std::path::Path;

use toml::{Table, Value};

use super::CliError;
use crate::surface::{make_builtin, polynomial, Surface, SurfaceKind};

/// Upper bound on the outer quadrature level a file may request.
pub const MAX_LEVEL: u32 = 8;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CutoffOverrides {
    pub radius: Option<f64>,
    pub circle_nodes: Option<usize>,
}

/// A validated surface specification.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSpec {
    pub kind: String,
    pub parameters: BTreeMap<String, f64>,
    /// `(i, j, c)` monomials of a graph patch.
    pub polynomial: Vec<(usize, usize, f64)>,
    pub level: Option<u32>,
    pub tol: Option<f64>,
    pub cutoff: CutoffOverrides,
    surface_kind: SurfaceKind,
}

fn spec_err(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn as_table<'a>(v: &'a Value, name: &str) -> Result<&'a Table, CliError> {
    v.as_table().ok_or_else(|| spec_err(format!("[{name}] must be a section")))
}

fn as_real(v: &Value, key: &str) -> Result<f64, CliError> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(spec_err(format!("key '{key}' must be a number"))),
    }
}

fn as_count(v: &Value, key: &str) -> Result<u64, CliError> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(spec_err(format!("key '{key}' must be a non-negative integer"))),
    }
}

fn parameter_names(kind: &str) -> Result<&'static [&'static str], CliError> {
    Ok(match kind {
        "sphere" => &["radius"],
        "ellipsoid" => &["a", "b", "c"],
        "torus" => &["major", "minor"],
        "graph_patch" => &["radius"],
        other => {
            return Err(spec_err(format!(
                "unknown surface kind '{other}' (expected sphere, ellipsoid, torus or graph_patch)"
            )))
        }
    })
}

/// `cIJ` with single digits `I`, `J`.
fn monomial_key(key: &str) -> Option<(usize, usize)> {
    let b = key.as_bytes();
    if b.len() == 3 && b[0] == b'c' && b[1].is_ascii_digit() && b[2].is_ascii_digit() {
        Some(((b[1] - b'0') as usize, (b[2] - b'0') as usize))
    } else {
        None
    }
}

impl SurfaceSpec {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| spec_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Table = text.parse().map_err(|e: toml::de::Error| spec_err(e.message().to_string()))?;
        for key in doc.keys() {
            if !["surface", "polynomial", "quadrature", "cutoff"].contains(&key.as_str()) {
                return Err(spec_err(format!("unknown section or key '{key}'")));
            }
        }
        let surface = as_table(doc.get("surface").ok_or_else(|| spec_err("missing [surface] section"))?, "surface")?;
        let kind = match surface.get("kind") {
            Some(Value::String(k)) => k.clone(),
            Some(_) => return Err(spec_err("key 'kind' must be a string")),
            None => return Err(spec_err("missing key 'kind' in [surface]")),
        };
        let names = parameter_names(&kind)?;
        let mut parameters = BTreeMap::new();
        for (key, value) in surface {
            if key == "kind" {
                continue;
            }
            if !names.contains(&key.as_str()) {
                return Err(spec_err(format!("unknown key '{key}' for surface kind '{kind}'")));
            }
            parameters.insert(key.clone(), as_real(value, key)?);
        }
        for name in names {
            if !parameters.contains_key(*name) {
                return Err(spec_err(format!("missing key '{name}' for surface kind '{kind}'")));
            }
        }

        let mut terms = Vec::new();
        if let Some(section) = doc.get("polynomial") {
            if kind != "graph_patch" {
                return Err(spec_err(format!("[polynomial] applies only to graph_patch, not '{kind}'")));
            }
            for (key, value) in as_table(section, "polynomial")? {
                let (i, j) = monomial_key(key)
                    .ok_or_else(|| spec_err(format!("unknown key '{key}' in [polynomial] (expected cIJ, e.g. c20)")))?;
                terms.push((i, j, as_real(value, key)?));
            }
        }

        let mut level = None;
        let mut tol = None;
        if let Some(section) = doc.get("quadrature") {
            for (key, value) in as_table(section, "quadrature")? {
                match key.as_str() {
                    "level" => {
                        let l = as_count(value, key)?;
                        if l > MAX_LEVEL as u64 {
                            return Err(spec_err(format!("level {l} exceeds the maximum {MAX_LEVEL}")));
                        }
                        level = Some(l as u32);
                    }
                    "tol" => {
                        let t = as_real(value, key)?;
                        if !(t > 0.0 && t < 1.0) {
                            return Err(spec_err(format!("tol must lie in (0, 1), got {t}")));
                        }
                        tol = Some(t);
                    }
                    _ => return Err(spec_err(format!("unknown key '{key}' in [quadrature]"))),
                }
            }
        }

        let mut cutoff = CutoffOverrides::default();
        if let Some(section) = doc.get("cutoff") {
            for (key, value) in as_table(section, "cutoff")? {
                match key.as_str() {
                    "radius" => {
                        let r = as_real(value, key)?;
                        if !(r.is_finite() && r > 0.0) {
                            return Err(spec_err(format!("cutoff radius must be positive, got {r}")));
                        }
                        cutoff.radius = Some(r);
                    }
                    "circle_nodes" => {
                        let n = as_count(value, key)? as usize;
                        if n < 16 || n % 2 == 1 {
                            return Err(spec_err(format!("circle_nodes must be even and at least 16, got {n}")));
                        }
                        cutoff.circle_nodes = Some(n);
                    }
                    _ => return Err(spec_err(format!("unknown key '{key}' in [cutoff]"))),
                }
            }
        }

        let p = |k: &str| parameters[k];
        let surface_kind = match kind.as_str() {
            "sphere" => SurfaceKind::Sphere { radius: p("radius") },
            "ellipsoid" => SurfaceKind::Ellipsoid { a: p("a"), b: p("b"), c: p("c") },
            "torus" => SurfaceKind::Torus { major: p("major"), minor: p("minor") },
            _ => SurfaceKind::GraphPatch {
                poly: polynomial(&terms).map_err(|e| spec_err(e.to_string()))?,
                radius: p("radius"),
            },
        };
        make_builtin(&surface_kind).map_err(|e| spec_err(e.to_string()))?;
        Ok(Self { kind, parameters, polynomial: terms, level, tol, cutoff, surface_kind })
    }

    pub fn surface_kind(&self) -> &SurfaceKind {
        &self.surface_kind
    }

    pub fn build(&self) -> Result<Surface, CliError> {
        make_builtin(&self.surface_kind).map_err(|e| spec_err(e.to_string()))
    }

    /// Radius for sphere specifications.
    pub fn sphere_radius(&self) -> Option<f64> {
        match self.surface_kind {
            SurfaceKind::Sphere { radius } => Some(radius),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message(text: &str) -> String {
        SurfaceSpec::parse(text).unwrap_err().to_string()
    }

    #[test]
    fn parses_each_kind() {
        let s = SurfaceSpec::parse("[surface]\nkind = \"torus\"\nmajor = 2\nminor = 1.0\n").unwrap();
        assert_eq!(s.surface_kind(), &SurfaceKind::Torus { major: 2.0, minor: 1.0 });
        let s = SurfaceSpec::parse(
            "[surface]\nkind = \"graph_patch\"\nradius = 0.5\n[polynomial]\nc20 = 1.0\nc12 = -3\n[quadrature]\nlevel = 3\ntol = 1e-6\n[cutoff]\nradius = 0.05\ncircle_nodes = 32\n",
        )
        .unwrap();
        assert_eq!(s.polynomial.len(), 2);
        assert_eq!((s.level, s.tol), (Some(3), Some(1e-6)));
        assert_eq!(s.cutoff, CutoffOverrides { radius: Some(0.05), circle_nodes: Some(32) });
        let s = SurfaceSpec::parse("[surface]\nkind = \"ellipsoid\"\na = 1\nb = 1.2\nc = 0.8\n").unwrap();
        assert!(s.build().unwrap().closed);
    }

    #[test]
    fn unknown_keys_are_named() {
        assert!(message("[surface]\nkind = \"sphere\"\nradius = 1\nradus = 2\n").contains("'radus'"));
        assert!(message("[surface]\nkind = \"sphere\"\nradius = 1\n[quadrature]\nlevels = 2\n").contains("'levels'"));
        assert!(message("[surface]\nkind = \"sphere\"\nradius = 1\n[extras]\n").contains("'extras'"));
        assert!(message("[surface]\nkind = \"sphere\"\nradius = 1\n[cutoff]\nwidth = 1\n").contains("'width'"));
        assert!(message("[surface]\nkind = \"graph_patch\"\nradius = 1\n[polynomial]\nx2 = 1\n").contains("'x2'"));
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(message("[surface]\nkind = \"cube\"\n").contains("cube"));
        assert!(message("[surface]\nkind = \"torus\"\nmajor = 1\nminor = 2\n").contains("major > minor"));
        assert!(message("[surface]\nkind = \"sphere\"\n").contains("'radius'"));
        assert!(message("[surface]\nkind = \"sphere\"\nradius = \"one\"\n").contains("number"));
        assert!(message("[surface]\nkind = \"graph_patch\"\nradius = 1\n[polynomial]\nc41 = 1\n").contains("degree"));
        assert!(message("[surface]\nkind = \"sphere\"\nradius = 1\n[cutoff]\ncircle_nodes = 15\n").contains("even"));
        assert!(message("[surface]\nkind = \"sphere\"\nradius = 1\n[polynomial]\nc20 = 1\n").contains("graph_patch"));
        assert!(!message("not toml at all [").is_empty());
    }
}
