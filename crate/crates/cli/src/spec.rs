//! Benchmark specification: JSON config file merged with command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use curvquad::bem::NearMethod;
use curvquad::geometry::{Element, Vec3};
use curvquad::kernels::{Kernel, LayerKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    ElementBench,
    SingularBench,
    CavityBench,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ElementChoice {
    /// Paraboloid patch with sigma = -0.6.
    Element1,
    /// Paraboloid patch with sigma = +0.6.
    Element2,
    /// Flat unit right triangle.
    Flat,
    /// Octant of the unit sphere.
    Sphere,
}

impl ElementChoice {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    pub fn element(self) -> Element {
        match self {
            Self::Element1 => Element::paraboloid(-0.6),
            Self::Element2 => Element::paraboloid(0.6),
            Self::Flat => Element::flat(Vec3::zeros(), Vec3::x(), Vec3::y()),
            Self::Sphere => Element::spherical(1.0, Vec3::x(), Vec3::y(), Vec3::z()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KernelChoice {
    Laplace,
    Helmholtz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LayerChoice {
    Single,
    Double,
}

impl LayerChoice {
    pub fn layer(self) -> LayerKind {
        match self {
            Self::Single => LayerKind::Single,
            Self::Double => LayerKind::Double,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NearChoice {
    Proposed,
    Gl2d,
}

impl NearChoice {
    pub fn method(self) -> NearMethod {
        match self {
            Self::Proposed => NearMethod::Proposed,
            Self::Gl2d => NearMethod::Gl2d,
        }
    }
}

/// Every field is optional so that a config file and the flags can each set
/// any subset; flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkSpec {
    pub command: Option<Command>,
    pub element: Option<ElementChoice>,
    pub kernel: Option<KernelChoice>,
    pub k: Option<f64>,
    pub layer: Option<LayerChoice>,
    pub h_over_d: Option<Vec<f64>>,
    pub orders: Option<Vec<usize>>,
    pub output_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub subdivisions: Option<usize>,
    pub near_method: Option<NearChoice>,
    pub normals_into_domain: Option<bool>,
}

impl BenchmarkSpec {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(self, over: BenchmarkSpec) -> Self {
        Self {
            command: over.command.or(self.command),
            element: over.element.or(self.element),
            kernel: over.kernel.or(self.kernel),
            k: over.k.or(self.k),
            layer: over.layer.or(self.layer),
            h_over_d: over.h_over_d.or(self.h_over_d),
            orders: over.orders.or(self.orders),
            output_path: over.output_path.or(self.output_path),
            seed: over.seed.or(self.seed),
            subdivisions: over.subdivisions.or(self.subdivisions),
            near_method: over.near_method.or(self.near_method),
            normals_into_domain: over.normals_into_domain.or(self.normals_into_domain),
        }
    }

    /// Applies defaults and validates every value before any computation.
    pub fn resolve(&self) -> Result<Resolved> {
        let Some(command) = self.command else { bail!("no command given") };
        let element = self.element.unwrap_or(ElementChoice::Element1);
        let orders = match &self.orders {
            Some(o) => o.clone(),
            None if command == Command::SingularBench => (10..=40).step_by(5).collect(),
            None => vec![20],
        };
        if orders.is_empty() {
            bail!("orders must not be empty");
        }
        if let Some(&n) = orders.iter().find(|&&n| !(2..=128).contains(&n)) {
            bail!("quadrature order {n} outside 2..=128");
        }
        let h_over_d = self.h_over_d.clone().unwrap_or_else(|| logspace(1e-4, 1.0, 25));
        if h_over_d.is_empty() {
            bail!("h/d sweep must not be empty");
        }
        if let Some(h) = h_over_d.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
            bail!("h/d value {h} must be positive and finite");
        }
        if let Some(k) = self.k {
            if !(k.is_finite() && k > 0.0) {
                bail!("wavenumber {k} must be positive and finite");
            }
        }
        let subdivisions = self.subdivisions.unwrap_or(2);
        if subdivisions > 3 {
            bail!("subdivisions {subdivisions} exceed the desk-scale limit 3");
        }
        Ok(Resolved {
            command,
            element,
            kernel: self.kernel,
            k: self.k,
            layer: self.layer,
            h_over_d,
            orders,
            output_path: self.output_path.clone(),
            seed: self.seed.unwrap_or(1),
            subdivisions,
            near_method: self.near_method,
            normals_into_domain: self.normals_into_domain.unwrap_or(false),
        })
    }
}

/// A validated spec. Kernel, layer and near method stay optional because
/// leaving them unset means "all of them" for some commands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub command: Command,
    pub element: ElementChoice,
    pub kernel: Option<KernelChoice>,
    pub k: Option<f64>,
    pub layer: Option<LayerChoice>,
    pub h_over_d: Vec<f64>,
    pub orders: Vec<usize>,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
    pub subdivisions: usize,
    pub near_method: Option<NearChoice>,
    pub normals_into_domain: bool,
}

impl Resolved {
    /// The wavenumber for element-level runs: explicit, or `k d = 1`.
    pub fn element_wavenumber(&self) -> f64 {
        self.k.unwrap_or_else(|| 1.0 / self.element.element().diameter())
    }

    pub fn kernel_of(&self, choice: KernelChoice) -> Kernel {
        match choice {
            KernelChoice::Laplace => Kernel::Laplace,
            KernelChoice::Helmholtz => Kernel::Helmholtz(self.element_wavenumber()),
        }
    }
}

/// `n` points from `lo` to `hi`, equally spaced in `log10`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
}

/// Parses `lo,hi,n` into a log-spaced sweep.
pub fn parse_hrange(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [lo, hi, n] = parts[..] else { return Err("expected lo,hi,n".into()) };
    let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
    let n: usize = n.parse().map_err(|e| format!("n: {e}"))?;
    if !(lo > 0.0 && hi >= lo && hi.is_finite() && n >= 1) {
        return Err("need 0 < lo <= hi and n >= 1".into());
    }
    Ok(logspace(lo, hi, n))
}

pub fn kernel_label(kernel: Kernel) -> String {
    match kernel {
        Kernel::Laplace => "laplace".into(),
        Kernel::Helmholtz(_) => "helmholtz".into(),
    }
}

pub fn layer_label(layer: LayerKind) -> &'static str {
    match layer {
        LayerKind::Single => "single",
        LayerKind::Double => "double",
    }
}
