use crate::par::{self, Execution};

pub const MIN_GRID: usize = 100;
pub const ROOT_TOL: f64 = 1e-10;

/// Grid size ceil(200 (b − a)), never below 100.
pub fn default_grid(a: f64, b: f64) -> usize {
    ((200.0 * (b - a)).ceil() as usize).max(MIN_GRID)
}

pub(crate) fn refine<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Locations where `f` changes sign on a uniform grid of `grid` points over
/// [a, b], each refined by bisection to 1e−10. Exact zeros on the grid count
/// once.
pub fn sign_change_roots_with<F>(exec: Execution, f: &F, a: f64, b: f64, grid: usize) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let n = grid.max(2);
    let h = (b - a) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect();
    let fs = par::map(exec, &xs, |&x| f(x));
    let mut brackets = Vec::new();
    let mut exact = Vec::new();
    for i in 0..n {
        if fs[i] == 0.0 {
            exact.push(xs[i]);
        } else if i + 1 < n
            && fs[i].is_finite()
            && fs[i + 1].is_finite()
            && fs[i + 1] != 0.0
            && (fs[i] > 0.0) != (fs[i + 1] > 0.0)
        {
            brackets.push(i);
        }
    }
    let mut roots = par::map(exec, &brackets, |&i| refine(f, xs[i], xs[i + 1], fs[i]));
    roots.extend(exact);
    roots.sort_by(f64::total_cmp);
    roots
}

pub fn sign_change_roots<F>(f: &F, a: f64, b: f64, grid: usize) -> Vec<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    sign_change_roots_with(Execution::default(), f, a, b, grid)
}

pub fn count_sign_changes<F>(f: &F, a: f64, b: f64, grid: usize) -> usize
where
    F: Fn(f64) -> f64 + Sync,
{
    sign_change_roots(f, a, b, grid).len()
}
