use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

// Kronrod nodes (positive half, descending), Kronrod weights, and the Gauss
// weights of the embedded 7-point rule (nodes xgk[1], xgk[3], xgk[5], xgk[7]).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 1D subdivision budget.
const MAX_SUBDIVISIONS: usize = 5000;
/// Total integrand evaluations allowed in a nested 2D integration.
const MAX_EVALS_2D: usize = 10_000_000;

/// Values that can be integrated: real or complex.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptive<T> {
    pub value: T,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Gauss-Kronrod 7/15 on `[a, b]` with the QUADPACK error estimate.
fn qk15<T: Integrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = WGK[7] * fc.norm();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).norm() + (fv2[j] - reskh).norm());
    }
    let result = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the total
/// estimate is below `max(abs_tol, rel_tol |value|)` or the budget of 5000
/// subdivisions is exhausted.
pub fn adaptive_gk_with<T, F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Adaptive<T>
where
    T: Integrand,
    F: FnMut(f64) -> T,
{
    let (value, error) = qk15(&mut f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut subdivisions = 0;
    loop {
        if total_err <= abs_tol.max(rel_tol * total.norm()) {
            return Adaptive { value: total, error: total_err, converged: true, evaluations };
        }
        if subdivisions >= MAX_SUBDIVISIONS {
            break;
        }
        let seg = heap.pop().expect("heap never empty");
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            heap.push(seg);
            break;
        }
        let (v1, e1) = qk15(&mut f, seg.a, mid);
        let (v2, e2) = qk15(&mut f, mid, seg.b);
        evaluations += 30;
        subdivisions += 1;
        total = total - seg.value + v1 + v2;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
    }
    // recompute the sum from the pieces to shed accumulated update round-off
    let (value, error) = heap.iter().fold((T::zero(), 0.0), |(v, e), s| (v + s.value, e + s.error));
    Adaptive { value, error, converged: error <= abs_tol.max(rel_tol * value.norm()), evaluations }
}

/// [`adaptive_gk_with`] using `tol` as both absolute and relative tolerance.
pub fn adaptive_gk<T, F>(f: F, a: f64, b: f64, tol: f64) -> Adaptive<T>
where
    T: Integrand,
    F: FnMut(f64) -> T,
{
    adaptive_gk_with(f, a, b, tol, tol)
}

/// Nested adaptive integration over the reference triangle: outer in `u`,
/// inner in `v` over `[0, 1 - u]`.
pub fn reference_integral_2d<T, F>(f: F, tol: f64) -> Adaptive<T>
where
    T: Integrand,
    F: Fn(f64, f64) -> T,
{
    let mut evaluations = 0usize;
    let mut all_inner = true;
    let outer = adaptive_gk_with(
        |u| {
            if evaluations > MAX_EVALS_2D {
                all_inner = false;
                return T::zero();
            }
            let inner = adaptive_gk_with(|v| f(u, v), 0.0, 1.0 - u, 0.1 * tol, 0.1 * tol);
            evaluations += inner.evaluations;
            all_inner &= inner.converged;
            inner.value
        },
        0.0,
        1.0,
        tol,
        tol,
    );
    Adaptive { value: outer.value, error: outer.error, converged: outer.converged && all_inner, evaluations }
}
