//! Tolerance conventions for floating-point comparisons.
//!
//! Distances are floating point; "strict" inequalities mean exceeding by
//! more than `TOL` relative, so certificate checks do not flip on rounding.

pub const TOL: f64 = 1e-12;

fn scale(a: f64, b: f64) -> f64 {
    a.abs().max(b.abs()).max(1.0)
}

/// a < b, strictly beyond relative tolerance.
pub fn lt_strict(a: f64, b: f64) -> bool {
    a < b - TOL * scale(a, b)
}

/// a > b, strictly beyond relative tolerance.
pub fn gt_strict(a: f64, b: f64) -> bool {
    lt_strict(b, a)
}

/// a <= b up to relative tolerance.
pub fn le_tol(a: f64, b: f64) -> bool {
    a <= b + TOL * scale(a, b)
}

/// a == b up to relative tolerance.
pub fn eq_tol(a: f64, b: f64) -> bool {
    le_tol(a, b) && le_tol(b, a)
}

/// Map `f` over `0..n`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub(crate) fn maybe_par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn maybe_par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
