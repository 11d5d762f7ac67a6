//! Element, singular and cavity benchmarks. Each returns a CSV table and a
//! JSON run summary.

use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use curvquad::bem::{assemble, cavity_mesh, relative_l2_error, solve, CavityProblem, Mesh, MeshVariant};
use curvquad::geometry::Vec3;
use curvquad::kernels::Kernel;
use curvquad::layerpot::{evaluate, evaluate_gl2d, evaluate_gl2d_polar, evaluate_reference, CurvatureMethod, EvalConfig};
use curvquad::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::spec::{kernel_label, layer_label, KernelChoice, LayerChoice, NearChoice, Resolved};
use crate::BUILD_ID;

/// Foot of the evaluation point in element parameters.
pub const FOOT: (f64, f64) = (0.2, 0.3);
/// Tolerance of the adaptive reference integrals.
pub const REFERENCE_TOL: f64 = 1e-12;
/// GL2D order for well-separated matrix entries.
pub const FAR_ORDER: usize = 6;

pub struct Table {
    /// Run description and units, written as a `#` line above the columns.
    pub comment: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# curvquad build {}; {}", BUILD_ID, self.comment)?;
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

pub struct RunOutput {
    pub table: Table,
    pub summary: Value,
}

fn num(x: f64) -> String {
    format!("{x:.10e}")
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn header_summary(spec: &Resolved, started: Instant) -> Value {
    json!({
        "build": BUILD_ID,
        "spec": spec,
        "wall_time_s": started.elapsed().as_secs_f64(),
    })
}

/// Relative error of four quadrature schemes against the adaptive reference
/// over a sweep of normal distances above `r_q(0.2, 0.3)`.
pub fn element_bench(spec: &Resolved) -> Result<RunOutput> {
    let started = Instant::now();
    let elem = spec.element.element();
    let d = elem.diameter();
    let kernel = spec.kernel_of(spec.kernel.unwrap_or(KernelChoice::Laplace));
    let layer = spec.layer.unwrap_or(LayerChoice::Single).layer();
    let foot = elem.sample(FOOT.0, FOOT.1)?;

    let per_point: Vec<(Vec<Vec<String>>, bool)> = spec
        .h_over_d
        .par_iter()
        .map(|&hd| -> Result<(Vec<Vec<String>>, bool)> {
            let p = foot.r + foot.n * (hd * d);
            let reference = evaluate_reference(&elem, kernel, layer, &p, REFERENCE_TOL).with_context(|| format!("reference at h/d={hd}"))?;
            let mut rows = Vec::new();
            for &order in &spec.orders {
                let stokes = |method| -> Result<Complex64> {
                    let cfg = EvalConfig { order_contour: order, order_curvature: order, curvature_method: method, ..EvalConfig::default() };
                    Ok(evaluate(&elem, kernel, layer, &p, &cfg)?.value)
                };
                let methods: [(&str, Complex64); 4] = [
                    ("GL2D", evaluate_gl2d(&elem, kernel, layer, &p, order)?),
                    ("GL2D(Polar)", evaluate_gl2d_polar(&elem, kernel, layer, &p, order)?),
                    ("Stokes+GL2D", stokes(CurvatureMethod::Plain2D)?),
                    ("Stokes+GL2D(Polar)", stokes(CurvatureMethod::Polar)?),
                ];
                for (name, value) in methods {
                    rows.push(vec![
                        num(hd),
                        order.to_string(),
                        name.to_string(),
                        num(rel(value, reference.value)),
                        reference.converged.to_string(),
                    ]);
                }
            }
            Ok((rows, reference.converged))
        })
        .collect::<Result<_>>()?;

    let unconverged = per_point.iter().filter(|(_, c)| !c).count();
    let k = match kernel {
        Kernel::Helmholtz(k) => k,
        Kernel::Laplace => 0.0,
    };
    let comment = format!(
        "element-bench element={} kernel={} k={} layer={} foot=(0.2,0.3) reference_tol={REFERENCE_TOL:e}; units: h_over_d is the normal distance over the element diameter, relative_error is |I - I_ref|/|I_ref|, both dimensionless",
        spec.element.name(),
        kernel_label(kernel),
        if k > 0.0 { num(k) } else { "none".into() },
        layer_label(layer)
    );
    let mut summary = header_summary(spec, started);
    summary["wavenumber"] = json!(k);
    summary["element_diameter"] = json!(d);
    summary["unconverged_references"] = json!(unconverged);
    Ok(RunOutput {
        table: Table {
            comment,
            columns: vec!["h_over_d", "order", "method", "relative_error", "reference_converged"],
            rows: per_point.into_iter().flat_map(|(r, _)| r).collect(),
        },
        summary,
    })
}

/// Self-convergence of the on-element (singular) evaluation: the gap of
/// each order to the highest requested order.
pub fn singular_bench(spec: &Resolved) -> Result<RunOutput> {
    let started = Instant::now();
    let elem = spec.element.element();
    let p = elem.point(FOOT.0, FOOT.1);
    let kernels: Vec<KernelChoice> = spec.kernel.map_or(vec![KernelChoice::Laplace, KernelChoice::Helmholtz], |k| vec![k]);
    let layers: Vec<LayerChoice> = spec.layer.map_or(vec![LayerChoice::Single, LayerChoice::Double], |l| vec![l]);
    let mut orders = spec.orders.clone();
    orders.sort_unstable();
    orders.dedup();
    let top = *orders.last().expect("orders validated non-empty");

    let mut rows = Vec::new();
    for &kc in &kernels {
        let kernel = spec.kernel_of(kc);
        for &lc in &layers {
            let layer = lc.layer();
            let values: Vec<Complex64> = orders
                .par_iter()
                .map(|&n| -> Result<Complex64> {
                    let cfg = EvalConfig { order_contour: n, order_curvature: n, ..EvalConfig::default() };
                    Ok(evaluate(&elem, kernel, layer, &p, &cfg)?.value)
                })
                .collect::<Result<_>>()?;
            let best = *values.last().unwrap();
            for (&n, v) in orders.iter().zip(&values) {
                rows.push(vec![kernel_label(kernel), layer_label(layer).to_string(), n.to_string(), num(v.re), num(v.im), num(rel(*v, best))]);
            }
        }
    }
    let comment = format!(
        "singular-bench element={} k={} point=r_q(0.2,0.3) reference_order={top}; units: value of a unit density in length units for single layers and dimensionless for double layers, rel_gap dimensionless",
        spec.element.name(),
        num(spec.element_wavenumber())
    );
    let mut summary = header_summary(spec, started);
    summary["wavenumber"] = json!(spec.element_wavenumber());
    Ok(RunOutput {
        table: Table { comment, columns: vec!["kernel", "layer", "order", "value_re", "value_im", "rel_gap"], rows },
        summary,
    })
}

/// Collocation points moved radially onto the exact spheres, where the
/// analytic pressure is defined.
pub fn on_spheres(mesh: &Mesh, prob: &CavityProblem) -> Vec<Vec3> {
    mesh.collocation.iter().enumerate().map(|(i, x)| x * (if i < mesh.n_inner { prob.a } else { prob.b } / x.norm())).collect()
}

struct CavityRun {
    n_elements: usize,
    error: f64,
    solve_residual: f64,
}

fn cavity_run(prob: &CavityProblem, variant: MeshVariant, near: NearChoice, spec: &Resolved) -> Result<CavityRun> {
    let mesh = cavity_mesh(spec.subdivisions, prob.a, prob.b, variant, spec.normals_into_domain);
    let order = spec.orders[0];
    let cfg = EvalConfig { order_contour: order, order_curvature: order, ..EvalConfig::default() };
    let sys = assemble(&mesh, prob, &cfg, near.method(), FAR_ORDER)?;
    let sol = solve(&sys.matrix, &sys.rhs)?;
    let exact = prob.analytic_pressure(&on_spheres(&mesh, prob))?;
    Ok(CavityRun { n_elements: mesh.len(), error: relative_l2_error(sol.x.as_slice(), &exact)?, solve_residual: sol.residual })
}

/// Collocation solve of the spherical cavity, compared with the series
/// solution, for curved and flat meshes and both near-field schemes.
pub fn cavity_bench(spec: &Resolved) -> Result<RunOutput> {
    let started = Instant::now();
    let prob = CavityProblem { k: spec.k.unwrap_or(CavityProblem::default().k), ..CavityProblem::default() };
    prob.validate()?;
    let nears: Vec<NearChoice> = spec.near_method.map_or(vec![NearChoice::Proposed, NearChoice::Gl2d], |m| vec![m]);

    let mut rows = Vec::new();
    let mut results = Vec::new();
    for (variant, geometry) in [(MeshVariant::Curved, "curved"), (MeshVariant::Flat, "flat")] {
        for &near in &nears {
            let near_name = match near {
                NearChoice::Proposed => "proposed",
                NearChoice::Gl2d => "gl2d",
            };
            let t = Instant::now();
            // a failing configuration is reported and the others still run
            let run = cavity_run(&prob, variant, near, spec);
            let wall = t.elapsed().as_secs_f64();
            match run {
                Ok(r) => {
                    rows.push(vec![geometry.into(), near_name.into(), r.n_elements.to_string(), num(r.error), "ok".into()]);
                    results.push(json!({
                        "geometry": geometry, "near_method": near_name, "n_elements": r.n_elements,
                        "rel_l2_error": r.error, "solve_residual": r.solve_residual, "wall_time_s": wall,
                    }));
                }
                Err(e) => {
                    let msg = format!("{e:#}").replace([',', '\n'], ";");
                    let n = 2 * 20 * 4usize.pow(spec.subdivisions as u32);
                    rows.push(vec![geometry.into(), near_name.into(), n.to_string(), String::new(), format!("error: {msg}")]);
                    results.push(json!({
                        "geometry": geometry, "near_method": near_name, "n_elements": n,
                        "rel_l2_error": null, "error": msg, "wall_time_s": wall,
                    }));
                }
            }
        }
    }
    let comment = format!(
        "cavity-bench subdivisions={} a={} b={} k={} v0={} c_s={} q={}; units: lengths in units of b, rel_l2_error dimensionless, wall times in the json summary",
        spec.subdivisions, prob.a, prob.b, prob.k, prob.v0, prob.c_s, prob.q
    );
    let mut summary = header_summary(spec, started);
    summary["problem"] = json!({
        "a": prob.a, "b": prob.b, "k": prob.k, "v0": prob.v0, "c_s": prob.c_s, "q": prob.q,
        "n_max": prob.n_max, "series_tail_ratio": prob.tail_ratio()?,
    });
    summary["conventions"] = json!({
        "time_dependence": "exp(-i omega t)",
        "neumann_data": "dp/dn = i k c_s q v0 (r_hat . n) on the vibrating cap theta < pi/2 of the inner sphere",
        "normals": if spec.normals_into_domain { "into the domain" } else { "out of the domain" },
        "outer_wall": "rigid",
        "comparison_points": "collocation points projected radially onto the exact spheres",
        "far_order": FAR_ORDER,
        "near_criterion": "centroid distance below the source element diameter",
    });
    summary["results"] = Value::Array(results);
    Ok(RunOutput {
        table: Table { comment, columns: vec!["geometry", "near_method", "n_elements", "rel_l2_error", "status"], rows },
        summary,
    })
}
