//! Quadrature for path lengths and simplex areas.
//!
//! Path legs use adaptive bisection with a 7-point Gauss-Legendre rule per
//! panel. Areas over 2-simplices use triangle cells mapped through the
//! Duffy substitution, whose Jacobian factor `u` soaks up corner
//! singularities, combined with uniform background refinement plus dyadic
//! grading toward flagged corners. Summation order is fixed, so results
//! are bit-stable run to run.

use crate::error::{Error, Result};

/// 7-point Gauss-Legendre nodes and weights on `[-1, 1]`.
const GL7: [(f64, f64); 7] = [
    (-0.9491079123427585, 0.1294849661688697),
    (-0.7415311855993945, 0.2797053914892766),
    (-0.4058451513773972, 0.3818300505051189),
    (0.0, 0.4179591836734694),
    (0.4058451513773972, 0.3818300505051189),
    (0.7415311855993945, 0.2797053914892766),
    (0.9491079123427585, 0.1294849661688697),
];

/// Value with an error estimate and the per-stage convergence trace.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
    pub trace: Vec<f64>,
}

/// Relative noise allowance per panel. Integrands built from matrix
/// algebra (inverses near pinched faces) carry relative noise well above
/// machine epsilon; a panel whose refinement moves it by less than
/// this fraction of its own value is converged for every caller here,
/// and the accepted slack totals at most `NOISE_REL` of the integral.
const NOISE_REL: f64 = 1e-10;

fn gl7_panel(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL7 {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

/// Adaptive integral of `f` over `[a, b]`: panels split until the
/// two-half refinement changes a panel by less than its share of the
/// relative tolerance. Fails with the partial values when `max_depth`
/// bisections do not settle a panel.
pub fn integrate_segment(
    f: &mut impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: usize,
) -> Result<QuadResult> {
    let coarse = gl7_panel(f, a, b)?;
    let scale = coarse.abs().max(1e-300);
    let mut est_error = 0.0;
    let value = refine(f, a, b, coarse, rel_tol * scale, max_depth, &mut est_error)?;
    Ok(QuadResult { value, est_error, trace: vec![coarse, value] })
}

fn refine(
    f: &mut impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    est_error: &mut f64,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = gl7_panel(f, a, mid)?;
    let right = gl7_panel(f, mid, b)?;
    let split = left + right;
    let diff = (whole - split).abs();
    if split.is_finite() && diff <= tol.max(NOISE_REL * split.abs()) {
        *est_error += diff;
        return Ok(split);
    }
    if depth == 0 {
        return Err(Error::NonConvergence { depth: 0, last: vec![whole, split] });
    }
    Ok(refine(f, a, mid, left, 0.5 * tol, depth - 1, est_error)?
        + refine(f, mid, b, right, 0.5 * tol, depth - 1, est_error)?)
}

/// A triangle cell; `v[0]` is the Duffy collapse vertex.
#[derive(Debug, Clone, Copy)]
pub struct Tri {
    pub v: [[f64; 2]; 3],
}

impl Tri {
    pub fn area(&self) -> f64 {
        let [p0, p1, p2] = self.v;
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1])).abs()
    }

    fn rotated_to(&self, corner: usize) -> Tri {
        let [p0, p1, p2] = self.v;
        match corner {
            0 => Tri { v: [p0, p1, p2] },
            1 => Tri { v: [p1, p2, p0] },
            _ => Tri { v: [p2, p0, p1] },
        }
    }
}

/// 7x7 product rule on a triangle through the Duffy map collapsing at
/// `v[0]`; the Jacobian factor `u` regularizes an integrable singularity
/// at that vertex.
pub fn duffy_tri(f: &mut impl FnMut(f64, f64) -> Result<f64>, t: &Tri) -> Result<f64> {
    let [p0, p1, p2] = t.v;
    let jac = 2.0 * t.area();
    let mut acc = 0.0;
    for (xu, wu) in GL7 {
        let u = 0.5 * (xu + 1.0);
        for (xv, wv) in GL7 {
            let v = 0.5 * (xv + 1.0);
            let x = p0[0] + u * ((1.0 - v) * (p1[0] - p0[0]) + v * (p2[0] - p0[0]));
            let y = p0[1] + u * ((1.0 - v) * (p1[1] - p0[1]) + v * (p2[1] - p0[1]));
            acc += 0.25 * wu * wv * f(x, y)? * jac * u;
        }
    }
    Ok(acc)
}

/// One stage of the graded mesh: uniform midpoint refinement `uniform`
/// levels deep everywhere, then continued dyadic refinement toward the
/// corners flagged singular, `graded` levels deep. Cells are integrated
/// with the Duffy rule collapsed at the singular corner when present.
fn graded_stage(
    f: &mut impl FnMut(f64, f64) -> Result<f64>,
    t: &Tri,
    singular: [bool; 3],
    uniform: usize,
    graded: usize,
) -> Result<f64> {
    if uniform == 0 && (!singular.iter().any(|&s| s) || graded == 0) {
        let corner = (0..3).find(|&i| singular[i]).unwrap_or(0);
        return duffy_tri(f, &t.rotated_to(corner));
    }
    let [p0, p1, p2] = t.v;
    let m01 = [(p0[0] + p1[0]) * 0.5, (p0[1] + p1[1]) * 0.5];
    let m12 = [(p1[0] + p2[0]) * 0.5, (p1[1] + p2[1]) * 0.5];
    let m20 = [(p2[0] + p0[0]) * 0.5, (p2[1] + p0[1]) * 0.5];
    let u = uniform.saturating_sub(1);
    let g = graded.saturating_sub(1);
    // corner children keep their singular flag; the center child has none
    let mut acc = 0.0;
    acc += graded_stage(f, &Tri { v: [p0, m01, m20] }, [singular[0], false, false], u, if singular[0] { g } else { 0 })?;
    acc += graded_stage(f, &Tri { v: [m01, p1, m12] }, [false, singular[1], false], u, if singular[1] { g } else { 0 })?;
    acc += graded_stage(f, &Tri { v: [m20, m12, p2] }, [false, false, singular[2]], u, if singular[2] { g } else { 0 })?;
    acc += graded_stage(f, &Tri { v: [m01, m12, m20] }, [false, false, false], u, 0)?;
    Ok(acc)
}

/// Integral over a triangle with integrable corner singularities:
/// successive stages deepen the background mesh (capped) and the corner
/// grading until the stage-to-stage relative change drops below
/// `rel_tol`. A trace of stage values is always reported; steadily
/// growing stages are reported as divergence.
pub fn graded_triangle(
    f: &mut impl FnMut(f64, f64) -> Result<f64>,
    t: &Tri,
    singular: [bool; 3],
    rel_tol: f64,
    max_stage: usize,
) -> Result<QuadResult> {
    let mut trace: Vec<f64> = Vec::new();
    for stage in 1..=max_stage {
        let uniform = stage.min(4);
        let graded = 2 * stage;
        let value = graded_stage(f, t, singular, uniform, graded)?;
        trace.push(value);
        let n = trace.len();
        if n >= 2 {
            let change = (trace[n - 1] - trace[n - 2]).abs();
            if change <= rel_tol * trace[n - 1].abs() {
                return Ok(QuadResult { value, est_error: change, trace });
            }
        }
        if n >= 4 {
            let d1 = trace[n - 1] - trace[n - 2];
            let d2 = trace[n - 2] - trace[n - 3];
            let d3 = trace[n - 3] - trace[n - 4];
            if d1 > 0.0 && d2 > 0.0 && d3 > 0.0 && d1 >= d2 && d2 >= d3 {
                return Err(Error::Divergent(trace));
            }
        }
    }
    Err(Error::NonConvergence { depth: max_stage, last: trace })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in samples {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn segment_is_exact_on_low_degree_polynomials() {
        let r = integrate_segment(&mut |x| Ok(x * x * x), 0.0, 1.0, 1e-12, 30).unwrap();
        assert_relative_eq!(r.value, 0.25, epsilon = 1e-14);
        let r = integrate_segment(&mut |x| Ok(x.powi(12)), 0.0, 2.0, 1e-12, 30).unwrap();
        assert_relative_eq!(r.value, 2.0f64.powi(13) / 13.0, epsilon = 1e-10);
    }

    #[test]
    fn segment_handles_steep_integrands() {
        // near-singular at the left end, like a leg approaching a missing face
        let r = integrate_segment(&mut |x| Ok(1.0 / x), 1e-6, 1.0, 1e-9, 50).unwrap();
        assert_relative_eq!(r.value, -(1e-6f64.ln()), epsilon = 1e-6);
    }

    #[test]
    fn segment_reports_nonconvergence() {
        // integrand with a genuine (non-integrable) singularity inside
        let out = integrate_segment(&mut |x| Ok(1.0 / (x - 0.3).abs()), 0.0, 1.0, 1e-10, 12);
        assert!(matches!(out, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn duffy_integrates_constants_and_linears() {
        let t = Tri { v: [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] };
        assert_relative_eq!(duffy_tri(&mut |_, _| Ok(1.0), &t).unwrap(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(
            duffy_tri(&mut |x, y| Ok(x + y), &t).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn graded_handles_corner_singularity() {
        // r^(-3/2)-type model: f = (x + y)^(-3/2) over the unit corner
        // triangle; slicing along x + y = s gives the exact value 2.
        let t = Tri { v: [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] };
        let exact = 2.0;
        let r = graded_triangle(
            &mut |x, y| Ok((x + y).powf(-1.5)),
            &t,
            [true, false, false],
            1e-4,
            14,
        )
        .unwrap();
        assert_relative_eq!(r.value, exact, epsilon = 2e-3);
        assert!(r.trace.len() >= 2);
    }

    #[test]
    fn graded_reports_divergence_for_nonintegrable_corner() {
        let t = Tri { v: [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] };
        let out = graded_triangle(
            &mut |x, y| Ok((x + y).powf(-2.5)),
            &t,
            [true, false, false],
            1e-6,
            16,
        );
        assert!(matches!(out, Err(Error::Divergent(_)) | Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn slope_fit_recovers_power_laws() {
        let samples: Vec<(f64, f64)> =
            (1..=6).map(|k| {
                let x = 10f64.powi(-k);
                (x, 3.0 * x.powf(-1.5))
            }).collect();
        assert_relative_eq!(loglog_slope(&samples), -1.5, epsilon = 1e-12);
    }
}
