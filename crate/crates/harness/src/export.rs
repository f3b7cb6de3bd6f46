//! Boundary point exports of the numerical range.

use std::fmt::Write as _;
use std::str::FromStr;

use wradius_core::range::range_boundary;
use wradius_core::{numerical_radius, Complex64, ComplexMatrix, SweepPolicy};

use crate::error::{HarnessError, Result};
use crate::io::sig17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Svg,
}

impl FromStr for ExportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "svg" => Ok(ExportFormat::Svg),
            other => Err(HarnessError::Config(format!("range export supports csv or svg, not '{other}'"))),
        }
    }
}

/// `m` boundary points of `W(A)` as CSV or SVG.
pub fn export_range(a: &ComplexMatrix, m: usize, format: ExportFormat, policy: &SweepPolicy) -> Result<String> {
    let polygon = range_boundary(a, m)?;
    Ok(match format {
        ExportFormat::Csv => boundary_csv(&polygon.points),
        ExportFormat::Svg => boundary_svg(&polygon.points, numerical_radius(a, policy)?),
    })
}

/// One `re,im` line per point, 17 significant digits, no header.
pub fn boundary_csv(points: &[Complex64]) -> String {
    let mut out = String::with_capacity(points.len() * 48);
    for p in points {
        let _ = writeln!(out, "{},{}", sig17(p.re), sig17(p.im));
    }
    out
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, without repeated endpoints.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

const SIZE: f64 = 512.0;
const HALF: f64 = SIZE / 2.0;
const RADIUS_PX: f64 = 220.0;

/// The hull as one closed polyline drawn over the circle of radius `w`, with the origin marked.
pub fn boundary_svg(points: &[Complex64], w: f64) -> String {
    let extent = points.iter().fold(w, |m, p| m.max(p.norm()));
    let scale = if extent > 0.0 { RADIUS_PX / extent } else { 1.0 };
    let x = |p: &Complex64| HALF + p.re * scale;
    let y = |p: &Complex64| HALF - p.im * scale;

    let hull = convex_hull(points);
    let mut coords = String::new();
    for p in hull.iter().chain(hull.first()) {
        let _ = write!(coords, "{:.6},{:.6} ", x(p), y(p));
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        out,
        r##"  <circle cx="{HALF}" cy="{HALF}" r="{:.6}" fill="none" stroke="#888888" stroke-dasharray="6 4"/>"##,
        w * scale
    );
    let _ = writeln!(
        out,
        r##"  <polyline points="{}" fill="#cfe3f7" fill-opacity="0.6" stroke="#1f5f9f" stroke-width="1.5"/>"##,
        coords.trim_end()
    );
    let _ = writeln!(out, r##"  <circle cx="{HALF}" cy="{HALF}" r="3" fill="#c0392b"/>"##);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_of_nilpotent_lies_on_half_circle() {
        let a = ComplexMatrix::upper_shift(2);
        let csv = export_range(&a, 360, ExportFormat::Csv, &SweepPolicy::default()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 360);
        for line in lines {
            let (re, im) = line.split_once(',').unwrap();
            let z = Complex64::new(re.parse().unwrap(), im.parse().unwrap());
            assert!((z.norm() - 0.5).abs() < 1e-8, "{line}");
        }
    }

    #[test]
    fn csv_of_hermitian_is_real() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let csv = export_range(&a, 64, ExportFormat::Csv, &SweepPolicy::default()).unwrap();
        for line in csv.lines() {
            let im: f64 = line.split_once(',').unwrap().1.parse().unwrap();
            assert!(im.abs() <= 1e-9);
        }
    }

    #[test]
    fn too_few_points_is_rejected() {
        let a = ComplexMatrix::upper_shift(2);
        assert!(export_range(&a, 7, ExportFormat::Csv, &SweepPolicy::default()).is_err());
    }

    #[test]
    fn hull_of_square_with_interior_point() {
        let c = Complex64::new;
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.5, 0.5), c(1.0, 0.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]);
        assert_eq!(convex_hull(&[c(1.0, 1.0)]), vec![c(1.0, 1.0)]);
    }

    #[test]
    fn svg_has_closed_polyline_marker_and_circle() {
        let a = ComplexMatrix::upper_shift(3);
        let svg = export_range(&a, 32, ExportFormat::Svg, &SweepPolicy::default()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 2);
        let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        let coords: Vec<&str> = pts.split(' ').collect();
        assert_eq!(coords.first(), coords.last());
        let zero = export_range(&ComplexMatrix::zeros(2), 8, ExportFormat::Svg, &SweepPolicy::default()).unwrap();
        assert!(zero.contains("<polyline"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("svg".parse::<ExportFormat>().unwrap(), ExportFormat::Svg);
        assert!("json".parse::<ExportFormat>().is_err());
    }
}
