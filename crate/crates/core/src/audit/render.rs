//! Deterministic SVG figure of `L`, the curve `Γ`, and `π`.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::Path;

use crate::embedding::EmbeddingSpec;
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvgScene {
    pub k: usize,
    pub embedding: EmbeddingSpec,
    pub branches: bool,
    pub origins: bool,
    pub curve: bool,
    pub z: bool,
    pub projection_arrows: bool,
    /// Draws the `k` lifts of the loop through `z` based at this coordinate.
    pub lifts_from: Option<Q>,
}

impl SvgScene {
    pub fn new(k: usize) -> Self {
        SvgScene {
            k,
            embedding: EmbeddingSpec::MainCurve,
            branches: true,
            origins: true,
            curve: true,
            z: true,
            projection_arrows: true,
            lifts_from: None,
        }
    }
}

const WIDTH: f64 = 520.0;
const HEIGHT: f64 = 440.0;
const X_RANGE: f64 = 2.0;
const CURVE_SAMPLES: usize = 96;

fn branch_x(x: f64) -> f64 {
    let x = x.clamp(-X_RANGE, X_RANGE);
    60.0 + (x + X_RANGE) * 100.0
}

fn branch_y(i: usize, k: usize) -> f64 {
    40.0 + (i - 1) as f64 * 150.0 / (k - 1) as f64
}

struct Frame {
    cx: f64,
    cy: f64,
    scale: f64,
    u_mid: f64,
    v_mid: f64,
}

impl Frame {
    fn fit(points: &[(f64, f64)]) -> Self {
        let (mut u0, mut u1, mut v0, mut v1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for &(u, v) in points {
            u0 = u0.min(u);
            u1 = u1.max(u);
            v0 = v0.min(v);
            v1 = v1.max(v);
        }
        let span = (u1 - u0).max(v1 - v0).max(1e-9);
        Frame {
            cx: WIDTH / 2.0,
            cy: 320.0,
            scale: 180.0 / span,
            u_mid: (u0 + u1) / 2.0,
            v_mid: (v0 + v1) / 2.0,
        }
    }

    fn map(&self, (u, v): (f64, f64)) -> (f64, f64) {
        (
            self.cx + (u - self.u_mid) * self.scale,
            self.cy - (v - self.v_mid) * self.scale,
        )
    }
}

fn polyline(out: &mut String, class: &str, pts: &[(f64, f64)]) {
    let body: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(out, r#"  <polyline class="{class}" fill="none" points="{}"/>"#, body.join(" "));
}

/// Curve samples on each side of `x = 0`, ordered away from `z`.
fn curve_halves(spec: EmbeddingSpec) -> [Vec<(f64, f64)>; 2] {
    let side = |sign: f64| -> Vec<(f64, f64)> {
        (1..CURVE_SAMPLES)
            .map(|n| {
                let theta = FRAC_PI_2 * n as f64 / CURVE_SAMPLES as f64;
                spec.eval_f64(sign * theta.tan())
            })
            .collect()
    };
    [side(-1.0), side(1.0)]
}

pub fn render_figure(scene: &SvgScene) -> Result<String> {
    let k = scene.k;
    if k < 2 {
        return Err(Error::KOutOfRange {
            k,
            min: 2,
            max: usize::MAX,
        });
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}">"#
    );
    let _ = writeln!(
        out,
        "  <style>.branch{{stroke:#333}}.curve{{stroke:#1f5f9f;stroke-width:2}}.lift{{stroke:#c0392b}}.arrow{{stroke:#999;stroke-dasharray:4 3}}</style>"
    );

    let origin_x = branch_x(0.0);
    if scene.branches {
        for i in 1..=k {
            let y = branch_y(i, k);
            let _ = writeln!(
                out,
                r#"  <line class="branch" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
                branch_x(-X_RANGE),
                branch_x(X_RANGE)
            );
            let _ = writeln!(out, r#"  <text x="20.00" y="{:.2}">L{i}</text>"#, y + 4.0);
        }
    }
    if scene.origins {
        for i in 1..=k {
            let _ = writeln!(
                out,
                r#"  <circle class="origin" cx="{origin_x:.2}" cy="{:.2}" r="4.00" fill="white" stroke="black"/>"#,
                branch_y(i, k)
            );
        }
    }

    let halves = curve_halves(scene.embedding);
    let all: Vec<(f64, f64)> = halves.iter().flatten().copied().chain([(0.0, 0.0)]).collect();
    let frame = Frame::fit(&all);
    let z_px = frame.map((0.0, 0.0));
    if scene.curve {
        for half in &halves {
            let mut pts: Vec<(f64, f64)> = vec![z_px];
            pts.extend(half.iter().map(|&p| frame.map(p)));
            polyline(&mut out, "curve", &pts);
        }
    }
    if scene.z {
        let _ = writeln!(
            out,
            r#"  <circle class="z" cx="{:.2}" cy="{:.2}" r="4.00" fill="black"/>"#,
            z_px.0, z_px.1
        );
        let _ = writeln!(out, r#"  <text x="{:.2}" y="{:.2}">z</text>"#, z_px.0 + 8.0, z_px.1 + 4.0);
    }
    if scene.projection_arrows {
        for i in 1..=k {
            let _ = writeln!(
                out,
                r#"  <line class="arrow" x1="{origin_x:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                branch_y(i, k) + 4.0,
                z_px.0,
                z_px.1 - 4.0
            );
        }
    }
    if let Some(x0) = &scene.lifts_from {
        let xs = branch_x(x0.to_f64());
        for i in 1..=k {
            let y = branch_y(i, k);
            let lift = (y - 12.0).max(4.0);
            let _ = writeln!(
                out,
                r#"  <path class="lift" fill="none" d="M {xs:.2} {y:.2} Q {origin_x:.2} {lift:.2} {origin_x:.2} {y:.2} Q {origin_x:.2} {lift:.2} {xs:.2} {y:.2}"/>"#
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders and writes the figure, returning the bytes written.
pub fn write_figure(scene: &SvgScene, path: &Path) -> Result<Vec<u8>> {
    let bytes = render_figure(scene)?.into_bytes();
    std::fs::write(path, &bytes)?;
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn deterministic_and_counts() {
        let mut s = SvgScene::new(3);
        s.lifts_from = Some(q(1, 1));
        let a = render_figure(&s).unwrap();
        assert_eq!(a, render_figure(&s).unwrap());
        assert_eq!(a.matches(r#"class="lift""#).count(), 3);
        assert_eq!(a.matches(r#"class="origin""#).count(), 3);
        assert_eq!(a.matches(r#"class="branch""#).count(), 3);
    }

    #[test]
    fn rejects_small_k() {
        assert!(matches!(render_figure(&SvgScene::new(1)), Err(Error::KOutOfRange { k: 1, .. })));
    }
}
