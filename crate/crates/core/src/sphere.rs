//! Minimization over the unit sphere: a Fibonacci lattice for global coverage and
//! Nelder–Mead in tangent-plane coordinates for local refinement.

use std::sync::OnceLock;

use nalgebra::{Vector2, Vector3};

/// Number of lattice points used by the quantifier searches.
pub const GRID_POINTS: usize = 20_000;

/// `n` nearly uniform points on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2 * k + 1) as f64 / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}

pub(crate) fn shared_grid() -> &'static [Vector3<f64>] {
    static GRID: OnceLock<Vec<Vector3<f64>>> = OnceLock::new();
    GRID.get_or_init(|| fibonacci_sphere(GRID_POINTS))
}

/// Any unit vector orthogonal to the unit vector `p`.
pub fn orthogonal_unit(p: &Vector3<f64>) -> Vector3<f64> {
    let axis = if p.x.abs() <= p.y.abs() && p.x.abs() <= p.z.abs() {
        Vector3::x()
    } else if p.y.abs() <= p.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    p.cross(&axis).normalize()
}

/// Indices of the `k` smallest values, ascending by value then index.
pub(crate) fn best_indices(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMinimum {
    pub point: Vector3<f64>,
    pub value: f64,
}

/// Nelder–Mead on the chart `(u, v) ↦ normalize(p₀ + u·e₁ + v·e₂)`, recentred a few times
/// so the chart stays well conditioned.
pub fn refine<F: Fn(&Vector3<f64>) -> f64>(f: &F, start: &Vector3<f64>, step: f64, tol: f64) -> LocalMinimum {
    let mut best = LocalMinimum { point: start.normalize(), value: f(&start.normalize()) };
    let mut step = step;
    for _ in 0..4 {
        let center = best.point;
        let e1 = orthogonal_unit(&center);
        let e2 = center.cross(&e1);
        let chart = |x: &Vector2<f64>| (center + e1 * x.x + e2 * x.y).normalize();
        let (x, value) = nelder_mead(|x| f(&chart(x)), step, tol);
        if value <= best.value {
            let improved = best.value - value;
            best = LocalMinimum { point: chart(&x), value };
            if improved <= tol {
                break;
            }
        }
        step = (step * 0.1).max(1e-6);
    }
    best
}

fn nelder_mead<F: Fn(&Vector2<f64>) -> f64>(f: F, step: f64, tol: f64) -> (Vector2<f64>, f64) {
    let mut simplex = [Vector2::zeros(), Vector2::new(step, 0.0), Vector2::new(0.0, step)];
    let mut values = simplex.map(|x| f(&x));
    for _ in 0..2000 {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let size = (simplex[1] - simplex[0]).norm().max((simplex[2] - simplex[0]).norm());
        if size < tol && (values[2] - values[0]).abs() < tol {
            break;
        }
        let centroid = (simplex[0] + simplex[1]) / 2.0;
        let reflected = centroid + (centroid - simplex[2]);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = centroid + (centroid - simplex[2]) * 2.0;
            let fe = f(&expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] {
                centroid + (reflected - centroid) * 0.5
            } else {
                centroid + (simplex[2] - centroid) * 0.5
            };
            let fc = f(&contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = simplex[0] + (simplex[i] - simplex[0]) * 0.5;
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let i = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[i], values[i])
}
