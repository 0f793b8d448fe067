//! Scenario files: raw TOML layout and resolution into a fully specified
//! [`Scenario`] with every default materialized.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    pub cavity: CavityConfig,
    #[serde(default)]
    pub ensemble: EnsembleConfig,
    pub embedding: Option<EmbeddingConfig>,
    pub scan: ScanConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub variants: Vec<VariantConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    pub kind: Option<String>,
    pub omega_c_ev: Option<f64>,
    pub quality_factor: Option<f64>,
    pub rabi_over_omega: Option<f64>,
    pub f1: Option<f64>,
    pub rabi_reference_n: Option<f64>,
    pub rabi_reference_dipole_debye: Option<f64>,
    pub length_nm: Option<f64>,
    pub mirror: Option<String>,
    pub fill: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    #[serde(rename = "N")]
    pub n: Option<f64>,
    pub density_per_nm3: Option<f64>,
    pub volume_nm3: Option<f64>,
    #[serde(default)]
    pub components: Vec<ComponentConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub kind: String,
    pub fraction: Option<f64>,
    pub dipole_debye: Option<f64>,
    pub omega_ev: Option<f64>,
    pub detuning_over_omega_c: Option<f64>,
    pub gamma_ev: Option<f64>,
    pub omega_over_gamma: Option<f64>,
    pub model: Option<String>,
    pub eta_hartree: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingConfig {
    pub kind: String,
    pub r_c_nm: Option<f64>,
    pub wavenumber: Option<String>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub pole_offset: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub omega_min_ev: f64,
    pub omega_max_ev: f64,
    pub points: Option<usize>,
    pub spacing: Option<Spacing>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<String>,
    pub plot: Option<String>,
    pub quantities: Option<Vec<Quantity>>,
    pub log_scale: Option<bool>,
    pub plot_axis: Option<PlotAxis>,
}

/// One entry of a scenario list; overrides every two-level component.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantConfig {
    pub label: String,
    pub omega_ev: Option<f64>,
    pub detuning_over_omega_c: Option<f64>,
    pub gamma_ev: Option<f64>,
    pub omega_over_gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotAxis {
    Energy,
    Wavelength,
}

/// An output column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    J,
    #[serde(rename = "J_bare")]
    JBare,
    #[serde(rename = "J_sc")]
    JSc,
    #[serde(rename = "J_0")]
    J0,
    #[serde(rename = "J_sc_bare")]
    JScBare,
    #[serde(rename = "re_G")]
    ReG,
    #[serde(rename = "im_G")]
    ImG,
    #[serde(rename = "alpha_ave_re")]
    AlphaAveRe,
    #[serde(rename = "alpha_ave_im")]
    AlphaAveIm,
    #[serde(rename = "eps_re")]
    EpsRe,
    #[serde(rename = "eps_im")]
    EpsIm,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::J => "J",
            Quantity::JBare => "J_bare",
            Quantity::JSc => "J_sc",
            Quantity::J0 => "J_0",
            Quantity::JScBare => "J_sc_bare",
            Quantity::ReG => "re_G",
            Quantity::ImG => "im_G",
            Quantity::AlphaAveRe => "alpha_ave_re",
            Quantity::AlphaAveIm => "alpha_ave_im",
            Quantity::EpsRe => "eps_re",
            Quantity::EpsIm => "eps_im",
        }
    }

    fn needs_planar_cavity(self) -> bool {
        matches!(
            self,
            Quantity::JSc | Quantity::J0 | Quantity::JScBare | Quantity::EpsRe | Quantity::EpsIm
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cavity {
    SingleMode {
        omega_c_ev: f64,
        quality_factor: f64,
        f1: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        rabi_over_omega: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        rabi_reference_n: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        rabi_reference_dipole_debye: Option<f64>,
    },
    FabryPerot {
        length_nm: f64,
        mirror: String,
        fill: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    Rwa {
        fraction: f64,
        dipole_debye: f64,
        omega_ev: f64,
        gamma_ev: f64,
    },
    Full {
        fraction: f64,
        dipole_debye: f64,
        omega_ev: f64,
        gamma_ev: f64,
    },
    Sos {
        fraction: f64,
        model: String,
        eta_hartree: f64,
    },
}

impl Component {
    pub fn fraction(&self) -> f64 {
        match self {
            Component::Rwa { fraction, .. } | Component::Full { fraction, .. } | Component::Sos { fraction, .. } => {
                *fraction
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density_per_nm3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume_nm3: Option<f64>,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Embedding {
    Qerra,
    FullMqed {
        r_c_nm: f64,
        wavenumber: String,
        rel_tol: f64,
        max_subdivisions: usize,
        pole_offset: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scan {
    pub omega_min_ev: f64,
    pub omega_max_ev: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Scan {
    /// Sample energies in eV.
    pub fn grid_ev(&self) -> Vec<f64> {
        let n = self.points;
        let (lo, hi) = (self.omega_min_ev, self.omega_max_ev);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return hi;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => lo + (hi - lo) * t,
                    Spacing::Log => lo * (hi / lo).powf(t),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Output {
    pub csv: String,
    pub plot: String,
    pub quantities: Vec<Quantity>,
    pub log_scale: bool,
    pub plot_axis: PlotAxis,
}

/// A fully resolved scenario. Serializing it gives the metadata echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub cavity: Cavity,
    pub ensemble: Ensemble,
    pub embedding: Embedding,
    pub scan: Scan,
    pub output: Output,
    /// Directory that relative model and table paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

pub const DEFAULT_POINTS: usize = 1001;
pub const DEFAULT_ETA_HARTREE: f64 = 5e-3;
pub const DEFAULT_R_C_NM: f64 = 1.0;

fn invalid(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn required(v: Option<f64>, key: &str) -> Result<f64> {
    v.ok_or_else(|| invalid(format!("missing required key `{key}`")))
}

/// Parses scenario text and expands its variants.
pub fn parse_scenarios(text: &str, base_dir: &Path, fallback_name: &str) -> Result<Vec<Scenario>> {
    parse_with_origin(text, base_dir, fallback_name, fallback_name)
}

fn parse_with_origin(text: &str, base_dir: &Path, fallback_name: &str, origin: &str) -> Result<Vec<Scenario>> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        line: e.span().map_or(0, |s| text[..s.start].matches('\n').count() + 1),
        message: e.message().to_string(),
    })?;
    resolve(&file, base_dir, fallback_name)
}

/// Reads a scenario file; relative paths inside resolve against its directory.
pub fn load_scenarios(path: impl AsRef<Path>) -> Result<Vec<Scenario>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    parse_with_origin(&text, &base, stem, &path.display().to_string())
}

fn resolve(file: &ScenarioFile, base_dir: &Path, fallback_name: &str) -> Result<Vec<Scenario>> {
    let name = file.name.clone().unwrap_or_else(|| fallback_name.to_string());
    if file.variants.is_empty() {
        return Ok(vec![resolve_one(file, name, None, base_dir)?]);
    }
    let mut seen = std::collections::HashSet::new();
    file.variants
        .iter()
        .map(|v| {
            if !seen.insert(v.label.clone()) {
                return Err(invalid(format!("duplicate variant label `{}`", v.label)));
            }
            resolve_one(file, format!("{name}_{}", v.label), Some(v), base_dir)
        })
        .collect()
}

fn resolve_one(
    file: &ScenarioFile,
    name: String,
    variant: Option<&VariantConfig>,
    base_dir: &Path,
) -> Result<Scenario> {
    let c = &file.cavity;
    let kind = match (&c.kind, c.length_nm) {
        (Some(k), _) => k.clone(),
        (None, Some(_)) => "fabry_perot".to_string(),
        (None, None) => "single_mode".to_string(),
    };
    let omega_c_ev = c.omega_c_ev;

    let n = file.ensemble.n.unwrap_or(0.0);
    if !(n >= 0.0) {
        return Err(invalid(format!("ensemble N must be >= 0, got {n}")));
    }
    let mut components = Vec::new();
    let single = file.ensemble.components.len() == 1;
    for (idx, comp) in file.ensemble.components.iter().enumerate() {
        components.push(resolve_component(comp, idx, single, omega_c_ev, variant)?);
    }
    if n > 0.0 && components.is_empty() && file.ensemble.density_per_nm3.is_none() {
        return Err(invalid("ensemble has N > 0 but no components"));
    }
    let total: f64 = components.iter().map(Component::fraction).sum();
    if !components.is_empty() && (total - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("component fractions sum to {total}, expected 1")));
    }
    if file.ensemble.density_per_nm3.is_some() && file.ensemble.volume_nm3.is_some() {
        return Err(invalid("give either `density_per_nm3` or `volume_nm3`, not both"));
    }
    let ensemble = Ensemble {
        n,
        density_per_nm3: file.ensemble.density_per_nm3,
        volume_nm3: file.ensemble.volume_nm3,
        components,
    };

    let cavity = match kind.as_str() {
        "single_mode" => {
            let omega_c_ev = required(omega_c_ev, "cavity.omega_c_ev")?;
            let quality_factor = required(c.quality_factor, "cavity.quality_factor")?;
            let (f1, rabi, ref_n, ref_d) = match (c.f1, c.rabi_over_omega) {
                (Some(_), Some(_)) => return Err(invalid("give either `f1` or `rabi_over_omega`, not both")),
                (Some(f1), None) => (f1, None, None, None),
                (None, Some(x)) => {
                    let ref_n = c.rabi_reference_n.unwrap_or(n);
                    let ref_d = match c.rabi_reference_dipole_debye {
                        Some(d) => d,
                        None => ensemble
                            .components
                            .iter()
                            .find_map(|comp| match comp {
                                Component::Rwa { dipole_debye, .. } | Component::Full { dipole_debye, .. } => {
                                    Some(*dipole_debye)
                                }
                                Component::Sos { .. } => None,
                            })
                            .ok_or_else(|| {
                                invalid(
                                    "`rabi_over_omega` needs a two-level component or `rabi_reference_dipole_debye`",
                                )
                            })?,
                    };
                    if !(ref_n > 0.0) {
                        return Err(invalid("`rabi_over_omega` needs N > 0 or `rabi_reference_n`"));
                    }
                    let w = crate::units::ev(omega_c_ev);
                    let g = x * w / ref_n.sqrt();
                    let f1 = crate::qo_models::f1_for_coupling(w, g, crate::units::debye(ref_d))?;
                    (f1, Some(x), Some(ref_n), Some(ref_d))
                }
                (None, None) => return Err(invalid("single-mode cavity needs `f1` or `rabi_over_omega`")),
            };
            for (key, present) in [
                ("length_nm", c.length_nm.is_some()),
                ("mirror", c.mirror.is_some()),
                ("fill", c.fill.is_some()),
            ] {
                if present {
                    return Err(invalid(format!(
                        "`cavity.{key}` does not apply to a single-mode cavity"
                    )));
                }
            }
            Cavity::SingleMode {
                omega_c_ev,
                quality_factor,
                f1,
                rabi_over_omega: rabi,
                rabi_reference_n: ref_n,
                rabi_reference_dipole_debye: ref_d,
            }
        }
        "fabry_perot" => {
            for (key, present) in [
                ("quality_factor", c.quality_factor.is_some()),
                ("f1", c.f1.is_some()),
                ("rabi_over_omega", c.rabi_over_omega.is_some()),
            ] {
                if present {
                    return Err(invalid(format!(
                        "`cavity.{key}` does not apply to a Fabry-Perot cavity"
                    )));
                }
            }
            Cavity::FabryPerot {
                length_nm: required(c.length_nm, "cavity.length_nm")?,
                mirror: c.mirror.clone().unwrap_or_else(|| "drude_gold".into()),
                fill: c.fill.clone().unwrap_or_else(|| "ensemble".into()),
            }
        }
        other => return Err(invalid(format!("unknown cavity kind `{other}`"))),
    };

    let embedding = match (&file.embedding, &cavity) {
        (None, Cavity::SingleMode { .. }) => Embedding::Qerra,
        (Some(e), Cavity::SingleMode { .. }) if e.kind == "qerra" => {
            if e.r_c_nm.is_some() || e.rel_tol.is_some() || e.pole_offset.is_some() {
                return Err(invalid("qerra embedding takes no local-field or quadrature keys"));
            }
            Embedding::Qerra
        }
        (e, Cavity::FabryPerot { .. }) if e.as_ref().is_none_or(|e| e.kind == "full_mqed") => {
            let e = e.clone().unwrap_or(EmbeddingConfig {
                kind: "full_mqed".into(),
                r_c_nm: None,
                wavenumber: None,
                rel_tol: None,
                max_subdivisions: None,
                pole_offset: None,
            });
            let defaults = crate::greens::QuadratureSettings::default();
            let wavenumber = e.wavenumber.unwrap_or_else(|| "vacuum".into());
            if !matches!(wavenumber.as_str(), "vacuum" | "medium") {
                return Err(invalid(format!("unknown local-field wavenumber `{wavenumber}`")));
            }
            Embedding::FullMqed {
                r_c_nm: e.r_c_nm.unwrap_or(DEFAULT_R_C_NM),
                wavenumber,
                rel_tol: e.rel_tol.unwrap_or(defaults.rel_tol),
                max_subdivisions: e.max_subdivisions.unwrap_or(defaults.max_subdivisions),
                pole_offset: e.pole_offset.unwrap_or(defaults.pole_offset),
            }
        }
        (None, Cavity::FabryPerot { .. }) => unreachable!("handled by the full_mqed arm"),
        (Some(e), _) => {
            return Err(invalid(format!(
                "embedding `{}` does not match the cavity kind (qerra needs single_mode, full_mqed needs fabry_perot)",
                e.kind
            )))
        }
    };
    if let Embedding::FullMqed { .. } = embedding {
        let has_density = ensemble.density_per_nm3.is_some() || ensemble.volume_nm3.is_some();
        if !ensemble.components.is_empty() && !has_density {
            return Err(invalid("full_mqed needs `density_per_nm3` or `volume_nm3`"));
        }
    }

    let points = file.scan.points.unwrap_or(DEFAULT_POINTS);
    let scan = Scan {
        omega_min_ev: file.scan.omega_min_ev,
        omega_max_ev: file.scan.omega_max_ev,
        points,
        spacing: file.scan.spacing.unwrap_or(Spacing::Linear),
    };
    if !(scan.omega_min_ev > 0.0 && scan.omega_min_ev < scan.omega_max_ev) {
        return Err(invalid("scan needs 0 < omega_min_ev < omega_max_ev"));
    }
    if points < 2 {
        return Err(invalid("scan needs at least 2 points"));
    }

    let planar = matches!(embedding, Embedding::FullMqed { .. });
    let quantities = file.output.quantities.clone().unwrap_or_else(|| {
        if planar {
            vec![
                Quantity::J,
                Quantity::JSc,
                Quantity::J0,
                Quantity::JScBare,
                Quantity::AlphaAveIm,
            ]
        } else {
            vec![Quantity::J, Quantity::JBare, Quantity::AlphaAveIm]
        }
    });
    if quantities.is_empty() {
        return Err(invalid("output needs at least one quantity"));
    }
    if let Some(q) = quantities.iter().find(|q| q.needs_planar_cavity() && !planar) {
        return Err(invalid(format!(
            "quantity `{}` needs the full_mqed embedding",
            q.name()
        )));
    }
    let output = Output {
        csv: file
            .output
            .csv
            .clone()
            .map_or_else(|| format!("{name}.csv"), |p| suffixed(&p, variant)),
        plot: file
            .output
            .plot
            .clone()
            .map_or_else(|| format!("{name}.svg"), |p| suffixed(&p, variant)),
        quantities,
        log_scale: file.output.log_scale.unwrap_or(false),
        plot_axis: file.output.plot_axis.unwrap_or(PlotAxis::Energy),
    };

    Ok(Scenario {
        name,
        cavity,
        ensemble,
        embedding,
        scan,
        output,
        base_dir: base_dir.to_path_buf(),
    })
}

fn suffixed(path: &str, variant: Option<&VariantConfig>) -> String {
    let Some(v) = variant else {
        return path.to_string();
    };
    let p = Path::new(path);
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let file = match p.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{}.{ext}", v.label),
        None => format!("{stem}_{}", v.label),
    };
    p.with_file_name(file).to_string_lossy().into_owned()
}

fn resolve_component(
    comp: &ComponentConfig,
    idx: usize,
    single: bool,
    omega_c_ev: Option<f64>,
    variant: Option<&VariantConfig>,
) -> Result<Component> {
    let key = |k: &str| format!("ensemble.components[{idx}].{k}");
    let fraction = match comp.fraction {
        Some(f) => f,
        None if single => 1.0,
        None => return Err(invalid(format!("missing required key `{}`", key("fraction")))),
    };
    if !(0.0..=1.0).contains(&fraction) {
        return Err(invalid(format!("`{}` must lie in [0, 1]", key("fraction"))));
    }
    match comp.kind.as_str() {
        "rwa" | "full" => {
            if comp.model.is_some() || comp.eta_hartree.is_some() {
                return Err(invalid(format!(
                    "two-level component {idx} takes no `model` or `eta_hartree`"
                )));
            }
            let (omega_ev, detuning, gamma_ev, omega_over_gamma) = match variant {
                Some(v) => (
                    v.omega_ev.or(if v.detuning_over_omega_c.is_some() {
                        None
                    } else {
                        comp.omega_ev
                    }),
                    v.detuning_over_omega_c.or(if v.omega_ev.is_some() {
                        None
                    } else {
                        comp.detuning_over_omega_c
                    }),
                    v.gamma_ev.or(if v.omega_over_gamma.is_some() {
                        None
                    } else {
                        comp.gamma_ev
                    }),
                    v.omega_over_gamma.or(if v.gamma_ev.is_some() {
                        None
                    } else {
                        comp.omega_over_gamma
                    }),
                ),
                None => (
                    comp.omega_ev,
                    comp.detuning_over_omega_c,
                    comp.gamma_ev,
                    comp.omega_over_gamma,
                ),
            };
            let omega_ev = match (omega_ev, detuning) {
                (Some(_), Some(_)) => {
                    return Err(invalid(format!(
                        "give either `{}` or `{}`",
                        key("omega_ev"),
                        key("detuning_over_omega_c")
                    )))
                }
                (Some(w), None) => w,
                // Δ = ω_c − ω_A
                (None, Some(d)) => {
                    let wc = omega_c_ev.ok_or_else(|| invalid("`detuning_over_omega_c` needs `cavity.omega_c_ev`"))?;
                    wc * (1.0 - d)
                }
                (None, None) => return Err(invalid(format!("missing required key `{}`", key("omega_ev")))),
            };
            let gamma_ev = match (gamma_ev, omega_over_gamma) {
                (Some(_), Some(_)) => {
                    return Err(invalid(format!(
                        "give either `{}` or `{}`",
                        key("gamma_ev"),
                        key("omega_over_gamma")
                    )))
                }
                (Some(g), None) => g,
                (None, Some(r)) => omega_ev / r,
                (None, None) => return Err(invalid(format!("missing required key `{}`", key("gamma_ev")))),
            };
            let dipole_debye = required(comp.dipole_debye, &key("dipole_debye"))?;
            Ok(if comp.kind == "rwa" {
                Component::Rwa {
                    fraction,
                    dipole_debye,
                    omega_ev,
                    gamma_ev,
                }
            } else {
                Component::Full {
                    fraction,
                    dipole_debye,
                    omega_ev,
                    gamma_ev,
                }
            })
        }
        "sos" => {
            for (k, present) in [
                ("dipole_debye", comp.dipole_debye.is_some()),
                ("omega_ev", comp.omega_ev.is_some()),
                ("gamma_ev", comp.gamma_ev.is_some()),
            ] {
                if present {
                    return Err(invalid(format!("sum-over-states component {idx} takes no `{k}`")));
                }
            }
            Ok(Component::Sos {
                fraction,
                model: comp
                    .model
                    .clone()
                    .ok_or_else(|| invalid(format!("missing required key `{}`", key("model"))))?,
                eta_hartree: comp.eta_hartree.unwrap_or(DEFAULT_ETA_HARTREE),
            })
        }
        other => Err(invalid(format!(
            "unknown component kind `{other}` (expected rwa, full or sos)"
        ))),
    }
}
