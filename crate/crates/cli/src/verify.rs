//! Self-checks of the decomposition, the evaluator and the quadrature rules.

use std::io::Write;

use anyhow::Result;
use curvquad::bem::{icosphere, MeshVariant};
use curvquad::geometry::{h_hat_range, local_frame, Element, Vec3};
use curvquad::kernels::{decomposition_residual_with, FieldsFn, Kernel, LayerKind};
use curvquad::layerpot::{evaluate, EvalConfig};
use curvquad::quadrature::{adaptive_gk, gauss_legendre, polar_rule, triangle_rule};
use curvquad::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spec::{kernel_label, layer_label};
use crate::BUILD_ID;

const K: f64 = 2.0;
const COMBOS: [(Kernel, LayerKind); 4] = [
    (Kernel::Laplace, LayerKind::Single),
    (Kernel::Laplace, LayerKind::Double),
    (Kernel::Helmholtz(K), LayerKind::Single),
    (Kernel::Helmholtz(K), LayerKind::Double),
];
/// Failing cases printed per suite.
const SHOWN_FAILURES: usize = 5;

pub struct Suite {
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub limit: f64,
    pub failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str, limit: f64) -> Self {
        Self { name, cases: 0, worst: 0.0, limit, failures: Vec::new() }
    }

    fn record(&mut self, err: f64, case: impl FnOnce() -> String) {
        self.cases += 1;
        self.worst = self.worst.max(err);
        // NaN must count as a failure
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(err < self.limit) {
            self.failures.push(format!("{} err={err:.3e}", case()));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn combo_label(kernel: Kernel, layer: LayerKind) -> String {
    format!("{}/{}", kernel_label(kernel), layer_label(layer))
}

fn elements() -> [(&'static str, Element); 2] {
    [("element1", Element::paraboloid(-0.6)), ("element2", Element::paraboloid(0.6))]
}

fn fmt_vec(p: &Vec3) -> String {
    format!("({:.6},{:.6},{:.6})", p.x, p.y, p.z)
}

/// Pointwise decomposition `integrand = div m + curvature term` with the
/// divergence by finite differences.
fn decomposition_suite(seed: u64, fields: FieldsFn) -> Result<Suite> {
    let mut suite = Suite::new("decomposition-residual", 1e-6);
    let mut rng = rng_for(seed, 1);
    for (ename, e) in elements() {
        for (kernel, layer) in COMBOS {
            let mut done = 0;
            while done < 25 {
                let t = e.sample(rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5))?;
                let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let r_p = t.r + t.n * (side * rng.gen_range(0.1..2.0) * e.diameter());
                let (u, v) = (rng.gen_range(0.05..0.45), rng.gen_range(0.05..0.45));
                // the identity is singular on the inward normal bundle
                if h_hat_range(&e, &r_p, 32)?.0 <= -0.99 {
                    continue;
                }
                done += 1;
                let res = decomposition_residual_with(fields, &e, kernel, layer, u, v, &r_p, 1e-5)?;
                suite.record(res, || format!("{ename} {} u={u:.6} v={v:.6} r_p={}", combo_label(kernel, layer), fmt_vec(&r_p)));
            }
        }
    }
    Ok(suite)
}

/// `C + D` against its closed forms.
fn c_plus_d_suite(seed: u64, fields: FieldsFn) -> Result<Suite> {
    let mut suite = Suite::new("c+d-identity", 1e-12);
    let mut rng = rng_for(seed, 2);
    let i = Complex64::i();
    while suite.cases < 4 * 20_000 {
        let sigma = rng.gen_range(-1.0..1.0);
        let s = Element::paraboloid(sigma).sample(rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5))?;
        let off = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * 10f64.powf(rng.gen_range(-4.0..1.0));
        let f = local_frame(&s, &(s.r + off));
        if f.r == 0.0 || f.h / f.r <= -0.999 {
            continue;
        }
        for (kernel, layer) in COMBOS {
            let d = fields(kernel, layer, &f)?;
            let want = match (kernel, layer) {
                (Kernel::Laplace, LayerKind::Single) => Complex64::from(1.0),
                (Kernel::Laplace, LayerKind::Double) => Complex64::from(1.0 / f.r),
                (Kernel::Helmholtz(k), LayerKind::Single) => Complex64::cis(k * f.h),
                (Kernel::Helmholtz(k), LayerKind::Double) => Complex64::cis(k * f.r) / f.r - i * k * Complex64::cis(k * f.h),
            };
            let err = (d.c + d.d - want).norm() / want.norm();
            suite.record(err, || format!("sigma={sigma:.6} {} r={:.6e} h={:.6e}", combo_label(kernel, layer), f.r, f.h));
        }
    }
    Ok(suite)
}

/// The double layer jumps by one half across the element.
fn jump_suite(seed: u64) -> Result<Suite> {
    let mut suite = Suite::new("jump-relation", 1e-3);
    let mut rng = rng_for(seed, 3);
    let cfg = EvalConfig::default();
    for (ename, e) in elements() {
        for _ in 0..3 {
            let (u, v) = (rng.gen_range(0.15..0.35), rng.gen_range(0.15..0.35));
            let s = e.sample(u, v)?;
            let eps = 1e-6 * e.diameter();
            for kernel in [Kernel::Laplace, Kernel::Helmholtz(K)] {
                let pv = evaluate(&e, kernel, LayerKind::Double, &s.r, &cfg)?.value;
                for side in [1.0, -1.0] {
                    let near = evaluate(&e, kernel, LayerKind::Double, &(s.r + s.n * (side * eps)), &cfg)?.value;
                    let err = (near - pv - 0.5 * side).norm();
                    suite.record(err, || format!("{ename} {} u={u:.6} v={v:.6} side={side}", kernel_label(kernel)));
                }
            }
        }
    }
    Ok(suite)
}

/// The Laplace double layer of a unit density over a closed sphere is `-1`
/// inside and `0` outside.
fn gauss_suite(seed: u64) -> Result<Suite> {
    let mut suite = Suite::new("gauss-identity", 1e-6);
    let mut rng = rng_for(seed, 4);
    let cfg = EvalConfig::default();
    let mesh = icosphere(2, 1.0, MeshVariant::Curved);
    for (range, want) in [((0.05, 0.98), -1.0), ((1.02, 3.0), 0.0)] {
        for _ in 0..6 {
            let dir = loop {
                let d = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if d.norm() > 0.1 && d.norm() <= 1.0 {
                    break d.normalize();
                }
            };
            let p = dir * rng.gen_range(range.0..range.1);
            let mut total = Complex64::new(0.0, 0.0);
            for e in &mesh {
                total += evaluate(e, Kernel::Laplace, LayerKind::Double, &p, &cfg)?.value;
            }
            suite.record((total - want).norm(), || format!("p={} expected {want}", fmt_vec(&p)));
        }
    }
    Ok(suite)
}

/// Gauss-Legendre, triangle, polar and adaptive rules on closed forms.
fn quadrature_suite() -> Result<Suite> {
    let mut suite = Suite::new("quadrature-exactness", 1e-12);
    for n in 1..=64 {
        let g = gauss_legendre(n)?;
        for deg in 0..=(2 * n - 1) as i32 {
            let q: f64 = g.nodes.iter().zip(&g.weights).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            suite.record((q - want).abs(), || format!("gauss-legendre n={n} x^{deg}"));
        }
    }
    let fact = |n: i32| (1..=n).map(f64::from).product::<f64>();
    let monomial = |i: i32, j: i32| fact(i) * fact(j) / fact(i + j + 2);
    for order in 1..=10 {
        let t = triangle_rule(order)?;
        let deg = 2 * order as i32 - 2;
        for i in 0..=deg {
            for j in 0..=(deg - i) {
                let q: f64 = t.iter().map(|([u, v], w)| w * u.powi(i) * v.powi(j)).sum();
                suite.record((q - monomial(i, j)).abs() / monomial(i, j), || format!("triangle order={order} u^{i} v^{j}"));
            }
        }
    }
    let verts = [Vec3::new(0.1, 0.0, 0.2), Vec3::new(1.3, 0.2, 0.0), Vec3::new(0.2, 0.9, -0.1)];
    for origin in [[1.0 / 3.0, 1.0 / 3.0], [0.0, 0.0], [0.5, 0.5], [0.2, 0.3], [0.9, 0.05]] {
        let area: f64 = polar_rule(&verts, origin, 20)?.rule.weights.iter().sum();
        suite.record((area - 0.5).abs(), || format!("polar area origin={origin:?}"));
    }
    type Case = (&'static str, fn(f64) -> f64, f64, f64, f64);
    let gk: [Case; 3] = [
        ("sqrt", |x| x.sqrt(), 0.0, 1.0, 2.0 / 3.0),
        ("runge", |x| 1.0 / (1.0 + 25.0 * x * x), -1.0, 1.0, 0.4 * 5f64.atan()),
        ("cos30", |x| (30.0 * x).cos(), 0.0, 1.0, 30f64.sin() / 30.0),
    ];
    for (name, f, a, b, want) in gk {
        let r = adaptive_gk(f, a, b, 1e-12);
        let err = if r.converged { (r.value - want).abs() } else { f64::INFINITY };
        suite.record(err, || format!("adaptive {name}"));
    }
    Ok(suite)
}

/// Runs all suites with the given field provider, prints the table and
/// failing cases to `out`, and reports whether every suite passed.
pub fn run_verify<W: Write>(seed: u64, fields: FieldsFn, mut out: W) -> Result<bool> {
    let suites = [decomposition_suite(seed, fields)?, c_plus_d_suite(seed, fields)?, jump_suite(seed)?, gauss_suite(seed)?, quadrature_suite()?];
    writeln!(out, "curvquad verify, build {BUILD_ID}, seed {seed}")?;
    writeln!(out, "{:<24} {:>7} {:>10} {:>9}  result", "suite", "cases", "worst", "limit")?;
    for s in &suites {
        writeln!(out, "{:<24} {:>7} {:>10.3e} {:>9.1e}  {}", s.name, s.cases, s.worst, s.limit, if s.passed() { "PASS" } else { "FAIL" })?;
    }
    let mut all = true;
    for s in &suites {
        all &= s.passed();
        if !s.failures.is_empty() {
            writeln!(out, "{}: {} failing cases", s.name, s.failures.len())?;
            for f in s.failures.iter().take(SHOWN_FAILURES) {
                writeln!(out, "  {f}")?;
            }
        }
    }
    Ok(all)
}
