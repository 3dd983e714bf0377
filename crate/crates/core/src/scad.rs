//! OpenSCAD export: the Reuleaux polyhedron of an embedding is the
//! intersection of the unit balls centred at its points.

use std::fmt::Write as _;

use thiserror::Error;

pub const DEFAULT_RESOLUTION: u32 = 96;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScadError {
    #[error("points {0} and {1} are closer than {2}; the embedding is not injective")]
    RejectNonInjective(usize, usize, f64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScadScript {
    pub text: String,
    pub resolution: u32,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `intersection() { translate([x, y, z]) sphere(r = 1, $fn = k); ... }`.
///
/// Rejects point sets with a pair closer than `min_separation`; pass the
/// embedder's epsilon for the same injectivity test the embedder reports.
pub fn export_reuleaux(
    points: &[[f64; 3]],
    min_separation: f64,
    resolution: u32,
    header: &[(String, String)],
) -> Result<ScadScript, ScadError> {
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            let d2: f64 = (0..3).map(|k| (points[a][k] - points[b][k]).powi(2)).sum();
            if !(d2.sqrt() >= min_separation) {
                return Err(ScadError::RejectNonInjective(a, b, min_separation));
            }
        }
    }
    let mut text = String::from("// Reuleaux polyhedron: intersection of unit balls\n");
    for (k, v) in header {
        let _ = writeln!(text, "// {k}: {v}");
    }
    text.push_str("intersection() {\n");
    for p in points {
        let _ = writeln!(
            text,
            "  translate([{}, {}, {}]) sphere(r = 1, $fn = {resolution});",
            num(p[0]),
            num(p[1]),
            num(p[2])
        );
    }
    text.push_str("}\n");
    Ok(ScadScript { text, resolution })
}

/// Centres listed by a script written by [`export_reuleaux`].
pub fn sphere_centres(text: &str) -> Vec<[f64; 3]> {
    text.lines()
        .filter_map(|l| {
            let inner = l.trim().strip_prefix("translate([")?.split_once(']')?.0;
            let v: Vec<f64> = inner.split(',').filter_map(|t| t.trim().parse().ok()).collect();
            (v.len() == 3).then(|| [v[0], v[1], v[2]])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::tetrahedron_coords;

    #[test]
    fn tetrahedron_script() {
        let pts = tetrahedron_coords().to_vec();
        let s = export_reuleaux(&pts, 0.2, DEFAULT_RESOLUTION, &[]).unwrap();
        assert_eq!(s.text.matches("sphere(r = 1, $fn = 96)").count(), 4);
        assert_eq!(s.text.matches("intersection()").count(), 1);
        assert_eq!(s.text.matches("translate(").count(), 4);
        let back = sphere_centres(&s.text);
        for (p, q) in pts.iter().zip(&back) {
            for k in 0..3 {
                assert_eq!(p[k].to_bits(), q[k].to_bits());
            }
        }
        assert_eq!(s, export_reuleaux(&pts, 0.2, DEFAULT_RESOLUTION, &[]).unwrap());
    }

    #[test]
    fn header_lines_are_comments() {
        let meta = vec![("seed".to_string(), "7".to_string())];
        let s = export_reuleaux(&tetrahedron_coords(), 0.2, 32, &meta).unwrap();
        assert!(s.text.contains("// seed: 7\n"));
        assert!(s.text.contains("$fn = 32"));
    }

    #[test]
    fn rejects_coincident_points() {
        let mut pts = tetrahedron_coords().to_vec();
        pts.push(pts[0]);
        assert_eq!(
            export_reuleaux(&pts, 0.2, 96, &[]),
            Err(ScadError::RejectNonInjective(0, 4, 0.2))
        );
    }
}
