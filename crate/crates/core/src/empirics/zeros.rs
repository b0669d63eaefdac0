use serde::Serialize;

use crate::error::{Error, Result, Warning};

/// Values (and optionally slopes) of f at the nodes a + (b − a)·i/m, i = 0..=m.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub a: f64,
    pub b: f64,
    pub values: Vec<f64>,
    pub slopes: Option<Vec<f64>>,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, values: Vec<f64>, slopes: Option<Vec<f64>>) -> Result<Self> {
        if values.len() < 2 || !(b > a) {
            return Err(Error::InvalidInput("need b > a and at least two nodes".into()));
        }
        if let Some(s) = &slopes {
            if s.len() != values.len() {
                return Err(Error::DimensionMismatch { expected: values.len(), got: s.len() });
            }
        }
        Ok(Grid1D { a, b, values, slopes })
    }

    /// Samples a deterministic function with its derivative on m cells.
    pub fn from_fn(a: f64, b: f64, m: usize, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Result<Self> {
        let xs: Vec<f64> = (0..=m).map(|i| node(a, b, m, i)).collect();
        Self::new(a, b, xs.iter().map(|&x| f(x)).collect(), Some(xs.iter().map(|&x| df(x)).collect()))
    }

    pub fn cells(&self) -> usize {
        self.values.len() - 1
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / self.cells() as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        node(self.a, self.b, self.cells(), i)
    }

    /// Cubic Hermite interpolant (linear without slopes) and its derivative on cell i.
    fn interp(&self, i: usize, x: f64) -> (f64, f64) {
        let (x0, x1) = (self.node(i), self.node(i + 1));
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        match &self.slopes {
            None => (f0 + t * (f1 - f0), (f1 - f0) / h),
            Some(s) => {
                let (d0, d1) = (s[i] * h, s[i + 1] * h);
                let (t2, t3) = (t * t, t * t * t);
                let v = (2.0 * t3 - 3.0 * t2 + 1.0) * f0
                    + (t3 - 2.0 * t2 + t) * d0
                    + (-2.0 * t3 + 3.0 * t2) * f1
                    + (t3 - t2) * d1;
                let dv = (6.0 * t2 - 6.0 * t) * f0
                    + (3.0 * t2 - 4.0 * t + 1.0) * d0
                    + (-6.0 * t2 + 6.0 * t) * f1
                    + (3.0 * t2 - 2.0 * t) * d1;
                (v, dv / h)
            }
        }
    }
}

fn node(a: f64, b: f64, m: usize, i: usize) -> f64 {
    if i == m {
        b
    } else {
        a + (b - a) * i as f64 / m as f64
    }
}

/// Zeros of a sampled path in the half-open window [a, b).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSet1D {
    pub zeros: Vec<f64>,
    /// |f(z)| of the interpolant at each refined zero.
    pub residuals: Vec<f64>,
    /// f′(z) at each zero.
    pub derivatives: Vec<f64>,
    /// max |f| over the nodes.
    pub sup: f64,
    /// Cells holding more than one sign change.
    pub crowded_cells: usize,
}

impl ZeroSet1D {
    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    pub fn warnings(&self) -> Vec<Warning> {
        if self.crowded_cells > 0 {
            vec![Warning::Resolution { cells: self.crowded_cells }]
        } else {
            vec![]
        }
    }
}

/// Sub-samples per cell used to detect sign changes between nodes.
pub const SUBSAMPLES: usize = 8;

/// One zero per sign change of the interpolant, refined by `refine`
/// bisection steps. Exact zeros at nodes count once; a zero at b does not.
pub fn find_zeros_1d(grid: &Grid1D, refine: usize) -> ZeroSet1D {
    let m = grid.cells();
    let mut out = ZeroSet1D {
        zeros: vec![],
        residuals: vec![],
        derivatives: vec![],
        sup: grid.values.iter().fold(0.0, |s, v| s.max(v.abs())),
        crowded_cells: 0,
    };
    for i in 0..m {
        let x0 = grid.node(i);
        if grid.values[i] == 0.0 {
            out.zeros.push(x0);
            out.residuals.push(0.0);
            out.derivatives.push(grid.interp(i, x0).1);
        }
        let x1 = grid.node(i + 1);
        let h = x1 - x0;
        // sign changes strictly inside (x0, x1); exact zeros at sub-points are
        // handed to the bracket on their left
        let pts: Vec<f64> = (0..=SUBSAMPLES)
            .map(|k| if k == SUBSAMPLES { x1 } else { x0 + h * k as f64 / SUBSAMPLES as f64 })
            .collect();
        let vals: Vec<f64> = pts.iter().map(|&x| grid.interp(i, x).0).collect();
        let mut changes = 0;
        let mut last: Option<(f64, f64)> = (grid.values[i] != 0.0).then(|| (pts[0], vals[0]));
        for k in 1..=SUBSAMPLES {
            let v = if k == SUBSAMPLES { grid.values[i + 1] } else { vals[k] };
            if v == 0.0 {
                if k < SUBSAMPLES {
                    if last.is_some() {
                        changes += 1;
                        out.zeros.push(pts[k]);
                        out.residuals.push(0.0);
                        out.derivatives.push(grid.interp(i, pts[k]).1);
                    }
                    last = None;
                }
                continue;
            }
            if let Some((xl, vl)) = last {
                if vl.signum() != v.signum() {
                    changes += 1;
                    let z = bisect(|x| grid.interp(i, x).0, xl, pts[k], vl, refine);
                    let (fz, dz) = grid.interp(i, z);
                    out.zeros.push(z);
                    out.residuals.push(fz.abs());
                    out.derivatives.push(dz);
                }
            }
            last = Some((pts[k], v));
        }
        if changes > 1 {
            out.crowded_cells += 1;
        }
    }
    out
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64, steps: usize) -> f64 {
    let s = f_lo.signum();
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (vl, vh) = (f(lo).abs(), f(hi).abs());
    if vl <= vh {
        lo
    } else {
        hi
    }
}

/// (f, ∂₁f, ∂₂f) of one component at every node of a rectangular grid,
/// node (i, j) stored at i·(ny) + j.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub components: [Vec<[f64; 3]>; 2],
}

impl Grid2D {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, components: [Vec<[f64; 3]>; 2]) -> Result<Self> {
        let len = xs.len() * ys.len();
        if xs.len() < 2 || ys.len() < 2 {
            return Err(Error::InvalidInput("need at least a 2 × 2 grid".into()));
        }
        for c in &components {
            if c.len() != len {
                return Err(Error::DimensionMismatch { expected: len, got: c.len() });
            }
        }
        Ok(Grid2D { xs, ys, components })
    }

    /// Uniform grid with m cells per side on [a₁, b₁) × [a₂, b₂).
    pub fn from_fn(bx: [(f64, f64); 2], m: usize, f: impl Fn(f64, f64) -> [[f64; 3]; 2]) -> Result<Self> {
        let xs: Vec<f64> = (0..=m).map(|i| node(bx[0].0, bx[0].1, m, i)).collect();
        let ys: Vec<f64> = (0..=m).map(|i| node(bx[1].0, bx[1].1, m, i)).collect();
        let mut c0 = Vec::with_capacity(xs.len() * ys.len());
        let mut c1 = Vec::with_capacity(xs.len() * ys.len());
        for &x in &xs {
            for &y in &ys {
                let [a, b] = f(x, y);
                c0.push(a);
                c1.push(b);
            }
        }
        Self::new(xs, ys, [c0, c1])
    }

    fn at(&self, c: usize, i: usize, j: usize) -> [f64; 3] {
        self.components[c][i * self.ys.len() + j]
    }
}

/// Zeros of (f₁, f₂) inside [x₀, x_last) × [y₀, y_last).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSet2D {
    pub points: Vec<[f64; 2]>,
    /// |det D(f₁, f₂)| of the local model at each zero.
    pub jacobians: Vec<f64>,
    /// Cells counted by winding number after Newton failed.
    pub fallback_cells: usize,
}

impl ZeroSet2D {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn warnings(&self) -> Vec<Warning> {
        if self.fallback_cells > 0 {
            vec![Warning::NewtonFallback { cells: self.fallback_cells }]
        } else {
            vec![]
        }
    }
}

/// Bilinear blend of the four corner first-order models of one cell.
struct CellModel {
    x0: f64,
    y0: f64,
    hx: f64,
    hy: f64,
    /// [corner][component] = (f, ∂₁f, ∂₂f); corners (0,0), (1,0), (0,1), (1,1).
    jets: [[[f64; 3]; 2]; 4],
}

impl CellModel {
    fn eval(&self, x: f64, y: f64) -> ([f64; 2], [[f64; 2]; 2]) {
        let s = (x - self.x0) / self.hx;
        let t = (y - self.y0) / self.hy;
        let w = [(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t];
        let dw = [
            [-(1.0 - t) / self.hx, -(1.0 - s) / self.hy],
            [(1.0 - t) / self.hx, -s / self.hy],
            [-t / self.hx, (1.0 - s) / self.hy],
            [t / self.hx, s / self.hy],
        ];
        let corners = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
        let mut v = [0.0; 2];
        let mut jac = [[0.0; 2]; 2];
        for (k, &(cx, cy)) in corners.iter().enumerate() {
            let dx = x - (self.x0 + cx * self.hx);
            let dy = y - (self.y0 + cy * self.hy);
            for c in 0..2 {
                let [f, gx, gy] = self.jets[k][c];
                let lin = f + gx * dx + gy * dy;
                v[c] += w[k] * lin;
                jac[c][0] += w[k] * gx + dw[k][0] * lin;
                jac[c][1] += w[k] * gy + dw[k][1] * lin;
            }
        }
        (v, jac)
    }

    fn newton(&self, steps: usize, tol: f64) -> Option<([f64; 2], f64)> {
        let (mut x, mut y) = (self.x0 + 0.5 * self.hx, self.y0 + 0.5 * self.hy);
        let slack = 1e-9;
        for _ in 0..steps {
            let (v, j) = self.eval(x, y);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if v[0].abs().max(v[1].abs()) <= tol {
                return self.inside(x, y, slack).then_some(([x, y], det.abs()));
            }
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            x -= (j[1][1] * v[0] - j[0][1] * v[1]) / det;
            y -= (-j[1][0] * v[0] + j[0][0] * v[1]) / det;
            // far outside: this cell's model has no zero nearby
            if !self.inside(x, y, 1.0) {
                return None;
            }
        }
        let (v, j) = self.eval(x, y);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        (v[0].abs().max(v[1].abs()) <= tol && self.inside(x, y, slack)).then_some(([x, y], det.abs()))
    }

    fn inside(&self, x: f64, y: f64, slack: f64) -> bool {
        let s = (x - self.x0) / self.hx;
        let t = (y - self.y0) / self.hy;
        (-slack..=1.0 + slack).contains(&s) && (-slack..=1.0 + slack).contains(&t)
    }

    /// Winding number of the corner values around the cell boundary.
    fn winding(&self) -> i32 {
        let order = [0, 1, 3, 2, 0];
        let mut total = 0.0;
        for k in 0..4 {
            let a = [self.jets[order[k]][0][0], self.jets[order[k]][1][0]];
            let b = [self.jets[order[k + 1]][0][0], self.jets[order[k + 1]][1][0]];
            if a == [0.0, 0.0] || b == [0.0, 0.0] {
                return 0;
            }
            let mut d = b[1].atan2(b[0]) - a[1].atan2(a[0]);
            if d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            } else if d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            total += d;
        }
        (total / (2.0 * std::f64::consts::PI)).round() as i32
    }
}

/// Candidate cells are those where both components take both signs (or
/// zero) at the corners. Each is refined by up to `newton_steps` Newton
/// steps on the cell model; failures fall back to the winding number.
/// Zeros closer than half a cell are merged.
pub fn find_zeros_2d_points(grid: &Grid2D, newton_steps: usize) -> ZeroSet2D {
    let (nx, ny) = (grid.xs.len(), grid.ys.len());
    let (xlo, xhi) = (grid.xs[0], grid.xs[nx - 1]);
    let (ylo, yhi) = (grid.ys[0], grid.ys[ny - 1]);
    let sup = grid.components.iter().flatten().fold(0.0f64, |s, v| s.max(v[0].abs()));
    let tol = 1e-12 * sup.max(f64::MIN_POSITIVE);
    let mut out = ZeroSet2D { points: vec![], jacobians: vec![], fallback_cells: 0 };
    let mut hmin = f64::INFINITY;
    for i in 0..nx - 1 {
        for j in 0..ny - 1 {
            let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
            let jets = corners.map(|(a, b)| [grid.at(0, a, b), grid.at(1, a, b)]);
            let straddles = (0..2).all(|c| {
                let lo = jets.iter().map(|k| k[c][0]).fold(f64::INFINITY, f64::min);
                let hi = jets.iter().map(|k| k[c][0]).fold(f64::NEG_INFINITY, f64::max);
                lo <= 0.0 && hi >= 0.0
            });
            if !straddles {
                continue;
            }
            let cell = CellModel {
                x0: grid.xs[i],
                y0: grid.ys[j],
                hx: grid.xs[i + 1] - grid.xs[i],
                hy: grid.ys[j + 1] - grid.ys[j],
                jets,
            };
            hmin = hmin.min(cell.hx.min(cell.hy));
            let found = match cell.newton(newton_steps, tol) {
                Some(z) => Some(z),
                None if cell.winding() != 0 => {
                    out.fallback_cells += 1;
                    let c = [cell.x0 + 0.5 * cell.hx, cell.y0 + 0.5 * cell.hy];
                    let j = cell.eval(c[0], c[1]).1;
                    Some((c, (j[0][0] * j[1][1] - j[0][1] * j[1][0]).abs()))
                }
                None => None,
            };
            if let Some((p, jac)) = found {
                let inside = p[0] >= xlo && p[0] < xhi && p[1] >= ylo && p[1] < yhi;
                let dup = out.points.iter().any(|q| (q[0] - p[0]).abs().max((q[1] - p[1]).abs()) < 0.5 * hmin);
                if inside && !dup {
                    out.points.push(p);
                    out.jacobians.push(jac);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_half_open() {
        let g = Grid1D::from_fn(0.0, 1.0, 100, |x| (2.0 * PI * x).sin(), |x| 2.0 * PI * (2.0 * PI * x).cos()).unwrap();
        let z = find_zeros_1d(&g, 60);
        assert_eq!(z.count(), 2, "{:?}", z.zeros);
        assert_eq!(z.zeros[0], 0.0);
        assert!((z.zeros[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_has_no_zeros() {
        let g = Grid1D::from_fn(0.0, 1.0, 50, |_| 2.0, |_| 0.0).unwrap();
        assert_eq!(find_zeros_1d(&g, 60).count(), 0);
    }

    #[test]
    fn parabola_roots_refined() {
        let g = Grid1D::from_fn(-1.0, 1.0, 100, |x| x * x - 0.01, |x| 2.0 * x).unwrap();
        let z = find_zeros_1d(&g, 60);
        assert_eq!(z.count(), 2);
        assert!((z.zeros[0] + 0.1).abs() < 1e-10 && (z.zeros[1] - 0.1).abs() < 1e-10, "{:?}", z.zeros);
        assert!(z.residuals.iter().all(|r| *r <= 1e-10 * z.sup));
        assert!(z.warnings().is_empty());
    }

    #[test]
    fn crowded_cell_warns() {
        // two roots 0.04 apart inside one cell of width 0.1
        let g = Grid1D::from_fn(0.0, 1.0, 10, |x| (x - 0.43) * (x - 0.47), |x| 2.0 * x - 0.9).unwrap();
        let z = find_zeros_1d(&g, 60);
        assert_eq!(z.count(), 2);
        assert_eq!(z.warnings(), vec![Warning::Resolution { cells: 1 }]);
    }

    #[test]
    fn linear_pair_single_zero() {
        let g = Grid2D::from_fn([(-1.0, 1.0), (-1.0, 1.0)], 20, |x, y| [[x, 1.0, 0.0], [y, 0.0, 1.0]]).unwrap();
        let z = find_zeros_2d_points(&g, 20);
        assert_eq!(z.count(), 1);
        assert!(z.points[0][0].abs() < 1e-12 && z.points[0][1].abs() < 1e-12);
        assert!((z.jacobians[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_meets_line_twice() {
        let g = Grid2D::from_fn([(-1.0, 1.0), (-1.0, 1.0)], 100, |x, y| {
            [[x * x + y * y - 0.25, 2.0 * x, 2.0 * y], [x - y, 1.0, -1.0]]
        })
        .unwrap();
        let z = find_zeros_2d_points(&g, 20);
        assert_eq!(z.count(), 2, "{:?}", z.points);
        let r = 0.125f64.sqrt();
        let mut pts = z.points.clone();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        for (p, s) in pts.iter().zip([-1.0, 1.0]) {
            assert!((p[0] - s * r).abs() < 1e-3 && (p[1] - s * r).abs() < 1e-3, "{p:?}");
        }
        assert_eq!(z.fallback_cells, 0);
    }
}
